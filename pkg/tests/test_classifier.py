import json
import math
import random

import numpy as np
import pytest

from plural_you.classifier import (
    EvalMatrix,
    Hyperparams,
    Model,
    eval_matrix,
    evaluate,
    featurize,
    hash_feature,
    predict,
    regularized_loss_and_grad,
    train,
)
from plural_you.dataset import stratified_split
from plural_you.errors import ConfigError, DegenerateDataError, TooSmallError
from plural_you.fixtures import generate_domain_transfer_benchmark, generate_planted_cue
from plural_you.instances import Domain, LabeledInstance, Plurality

from conftest import make_balanced, make_instance


def feature_index(name, hash_bits=20):
    return hash_feature(name) % (1 << hash_bits)


class TestHashing:
    def test_frozen_reference_values(self):
        # pinned so the hash stays stable across runs, platforms, releases
        assert hash_feature("u|L|1|love") == 3209170175806375446
        assert hash_feature("b|R|2|the_show") == 15209130347010309221
        assert hash_feature("len|5-8") == 3990498017529563337

    def test_64_bit_range(self):
        for name in ("", "a", "you", "ñ" * 40):
            assert 0 <= hash_feature(name) < 1 << 64


class TestFeaturize:
    def test_window_features_present(self):
        instance = make_instance("I love you !", 2)
        features = featurize(instance)
        for name in ("u|L|1|love", "u|L|2|i", "u|R|1|!"):
            assert feature_index(name) in features

    def test_lone_you_has_only_length_feature(self):
        instance = make_instance("you", 0)
        features = featurize(instance)
        assert features == {feature_index("len|1-4"): 1.0}

    def test_identical_texts_identical_vectors(self):
        a = featurize(make_instance("so nice to see you again my friend", 4))
        b = featurize(make_instance("so nice to see you again my friend", 4))
        assert a == b

    def test_bigrams_tagged_by_side(self):
        instance = make_instance("we saw you at the show", 2)
        features = featurize(instance)
        assert feature_index("b|L|1|we_saw") in features
        assert feature_index("b|R|1|at_the") in features

    def test_window_bounds_respected(self):
        instance = make_instance("a b c d e f g you h", 7, source_id="w")
        features = featurize(instance, window=2)
        assert feature_index("u|L|1|g") in features
        assert feature_index("u|L|2|f") in features
        assert feature_index("u|L|3+|e") not in features

    def test_invalid_target_rejected(self):
        with pytest.raises(IndexError):
            featurize(make_instance("you bet", 5))

    def test_provenance_ignored(self):
        a = featurize(make_instance("thanks for helping you out", 3, source_id="a"))
        b = featurize(
            make_instance(
                "thanks for helping you out", 3, source_id="b",
                author_id="zz", geo=(10.0, 10.0),
            )
        )
        assert a == b


class TestGradient:
    def random_problem(self, seed, dim=1 << 10, n=30):
        rng = random.Random(seed)
        vectors = []
        labels = []
        for _ in range(n):
            vector = {
                rng.randrange(dim): rng.choice([-2.0, -1.0, 1.0, 2.0])
                for _ in range(rng.randint(1, 12))
            }
            vectors.append(vector)
            labels.append(rng.choice([-1, 1]))
        weights = np.random.default_rng(seed).normal(0.0, 0.5, dim)
        return weights, vectors, labels

    def test_gradient_matches_finite_differences(self):
        weights, vectors, labels = self.random_problem(0)
        l2 = 1e-3
        bias = 0.25
        _, grad_w, grad_b = regularized_loss_and_grad(weights, bias, vectors, labels, l2)
        active = sorted({j for vector in vectors for j in vector})
        probes = 0
        for j in active[:40]:
            step = 1e-6 * max(1.0, abs(weights[j]))
            up = weights.copy()
            up[j] += step
            down = weights.copy()
            down[j] -= step
            loss_up, _, _ = regularized_loss_and_grad(up, bias, vectors, labels, l2)
            loss_down, _, _ = regularized_loss_and_grad(down, bias, vectors, labels, l2)
            numeric = (loss_up - loss_down) / (2 * step)
            rel = abs(numeric - grad_w[j]) / max(1e-12, abs(numeric) + abs(grad_w[j]))
            assert rel < 1e-4
            probes += 1
        step = 1e-6
        loss_up, _, _ = regularized_loss_and_grad(weights, bias + step, vectors, labels, l2)
        loss_down, _, _ = regularized_loss_and_grad(weights, bias - step, vectors, labels, l2)
        numeric = (loss_up - loss_down) / (2 * step)
        assert abs(numeric - grad_b) / max(1e-12, abs(numeric) + abs(grad_b)) < 1e-4
        assert probes >= 30


class TestTrain:
    def test_separable_two_points(self):
        instances = [
            make_instance("everyone says you together now", 2, Plurality.PLURAL, source_id="a"),
            make_instance("someone says you alone now", 2, Plurality.SINGULAR, source_id="b"),
        ]
        model = train(instances, Hyperparams(epochs=10))
        assert evaluate(model, instances) == 1.0

    def test_planted_cue_accuracy(self):
        instances = generate_planted_cue(3, 400)
        model = train(instances[:600])
        assert evaluate(model, instances[600:]) >= 0.95

    def test_deterministic(self):
        instances = generate_planted_cue(9, 100)
        a = train(instances)
        b = train(instances)
        assert np.array_equal(a.weights, b.weights)
        assert a.bias == b.bias
        assert a.epoch_losses == b.epoch_losses

    def test_loss_not_increasing_overall(self):
        instances = generate_planted_cue(4, 200)
        model = train(instances)
        assert model.epoch_losses[-1] <= model.epoch_losses[0]

    def test_weights_finite(self):
        instances = generate_planted_cue(6, 150)
        model = train(instances)
        assert np.all(np.isfinite(model.weights))
        assert math.isfinite(model.bias)

    def test_empty_rejected(self):
        with pytest.raises(DegenerateDataError):
            train([])

    def test_single_class_rejected(self):
        instances = [
            make_instance(f"w{i} you there", 1, Plurality.SINGULAR, source_id=str(i))
            for i in range(10)
        ]
        with pytest.raises(DegenerateDataError):
            train(instances)

    def test_hash_space_shrink_tolerated(self):
        instances = generate_planted_cue(8, 300)
        train_set, test_set = instances[:450], instances[450:]
        wide = train(train_set, Hyperparams(hash_bits=20))
        narrow = train(train_set, Hyperparams(hash_bits=18))
        assert evaluate(narrow, test_set) >= evaluate(wide, test_set) - 0.02


class TestPredict:
    def zero_model(self, bias=0.0):
        return Model(
            weights=np.zeros(1 << 20), bias=bias,
            hyperparams=Hyperparams(), training_domain="", epoch_losses=[],
        )

    def test_zero_model_probability_half_and_tie_goes_plural(self):
        label, probability = predict(self.zero_model(), make_instance("hello you friend", 1))
        assert probability == 0.5
        assert label is Plurality.PLURAL

    def test_probability_in_open_interval(self):
        instances = generate_planted_cue(2, 50)
        model = train(instances)
        for instance in instances[:20]:
            _, probability = predict(model, instance)
            assert 0.0 < probability < 1.0

    def test_scaling_weights_never_flips_labels(self):
        instances = generate_planted_cue(12, 60)
        model = train(instances)
        scaled = Model(
            weights=model.weights * 7.5, bias=model.bias * 7.5,
            hyperparams=model.hyperparams, training_domain="", epoch_losses=[],
        )
        for instance in instances[:40]:
            assert predict(model, instance)[0] is predict(scaled, instance)[0]

    def test_constant_model_scores_half_on_balanced_set(self):
        test_set = make_balanced(200)
        assert evaluate(self.zero_model(), test_set) == 0.5

    def test_cue_model_is_confident(self):
        # the 1/sqrt(t) schedule needs a higher base rate to saturate the
        # decision on a trivially separable task
        instances = generate_planted_cue(7, 300)
        model = train(instances[:450], Hyperparams(learning_rate=0.5, epochs=10))
        for instance in instances[450:500]:
            label, probability = predict(model, instance)
            if instance.label is Plurality.PLURAL:
                assert label is Plurality.PLURAL and probability > 0.9
            else:
                assert label is Plurality.SINGULAR and probability < 0.1

    def test_accuracy_is_one_when_predictions_define_labels(self):
        instances = generate_planted_cue(13, 80)
        model = train(instances[:100])
        relabeled = [
            LabeledInstance(
                text=i.text,
                target_token_index=i.target_token_index,
                label=predict(model, i)[0],
                domain=Domain.EUROPARL,
                provenance=i.provenance,
            )
            for i in instances[100:]
        ]
        assert evaluate(model, relabeled) == 1.0

    def test_empty_test_set_rejected(self):
        with pytest.raises(TooSmallError):
            evaluate(self.zero_model(), [])


class TestModelFile:
    def test_round_trip(self, tmp_path):
        instances = generate_planted_cue(5, 80)
        model = train(instances, training_domain="twitter")
        path = tmp_path / "model.json"
        model.save(path)
        loaded = Model.load(path)
        assert loaded.training_domain == "twitter"
        assert loaded.hyperparams == model.hyperparams
        assert np.array_equal(loaded.weights, model.weights)
        for instance in instances[:10]:
            assert predict(loaded, instance) == predict(model, instance)

    def test_sparse_storage(self, tmp_path):
        instances = generate_planted_cue(5, 40)
        model = train(instances)
        path = tmp_path / "model.json"
        model.save(path)
        obj = json.loads(path.read_text())
        assert len(obj["weights"]["indices"]) == int(np.count_nonzero(model.weights))

    def test_wrong_format_rejected(self, tmp_path):
        path = tmp_path / "model.json"
        path.write_text('{"format": "something-else"}')
        from plural_you.errors import SchemaError

        with pytest.raises(SchemaError):
            Model.load(path)


class TestEvalMatrix:
    def bundles(self, n=240):
        benchmark = generate_domain_transfer_benchmark(7, n)
        return {
            name: stratified_split(instances, seed=5, domain_tag=name)
            for name, instances in benchmark.items()
        }

    def test_unknown_corpus_rejected(self):
        bundles = self.bundles(60)
        bundles["reddit"] = bundles.pop("twitter")
        with pytest.raises(ConfigError):
            eval_matrix(bundles)

    def test_grid_shape_and_bounds(self):
        matrix = eval_matrix(self.bundles(), Hyperparams(epochs=2))
        assert matrix.rows == ("europarl", "twitter", "joint")
        assert matrix.cols == ("europarl", "twitter")
        assert len(matrix.accuracy) == 3
        for row in matrix.accuracy:
            assert all(0.0 <= cell <= 1.0 for cell in row)

    def test_in_domain_beats_cross_domain(self):
        matrix = eval_matrix(self.bundles(), Hyperparams(epochs=3))
        assert matrix.cell("europarl", "europarl") >= matrix.cell("europarl", "twitter") + 0.10
        assert matrix.cell("twitter", "twitter") >= matrix.cell("twitter", "europarl") + 0.10

    def test_deterministic(self):
        a = eval_matrix(self.bundles(120), Hyperparams(epochs=2))
        b = eval_matrix(self.bundles(120), Hyperparams(epochs=2))
        assert a.accuracy == b.accuracy

    def test_format_table(self):
        matrix = EvalMatrix(
            rows=("europarl", "twitter", "joint"),
            cols=("europarl", "twitter"),
            accuracy=[[0.771, 0.568], [0.563, 0.831], [0.775, 0.828]],
        )
        table = matrix.format_table()
        lines = table.splitlines()
        assert len(lines) == 4
        assert "77.1" in lines[1] and "56.8" in lines[1]
        assert "83.1" in lines[2]
        assert table.endswith("\n")

    def test_to_dict_complete(self):
        matrix = EvalMatrix(
            rows=("europarl", "twitter", "joint"),
            cols=("europarl", "twitter"),
            accuracy=[[0.5, 0.5], [0.5, 0.5], [0.5, 0.5]],
        )
        obj = matrix.to_dict()
        assert obj["rows"] == ["europarl", "twitter", "joint"]
        assert obj["percent"] == [[50.0, 50.0]] * 3

    def test_invalid_cell_rejected(self):
        with pytest.raises(ConfigError):
            EvalMatrix(
                rows=("europarl", "twitter", "joint"),
                cols=("europarl", "twitter"),
                accuracy=[[1.5, 0.5], [0.5, 0.5], [0.5, 0.5]],
            )
