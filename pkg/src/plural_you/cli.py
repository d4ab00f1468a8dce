"""Command-line entry point exposing the pipeline as subcommands.

Stages communicate only through files (JSONL instances, dataset directories,
model files, reports), so each step can be checked in isolation and rerun
byte-identically with the same seed. Diagnostics go to stderr; data goes to
files or stdout.

Exit codes: 0 success, 1 validation/configuration error, 2 data error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from . import analytics, classifier, dataset, europarl, fixtures, twitter
from .errors import ConfigError, DataError
from .instances import Plurality, read_instances, read_utterances, write_instances

DEFAULT_SEED = 42
DATA_DIR_ENV = "PLURAL_YOU_DATA_DIR"


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise _UsageError(message)


def _info(message: str) -> None:
    print(message, file=sys.stderr)


def _write_json(path: str | Path, obj) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8") as f:
        json.dump(obj, f, ensure_ascii=False, indent=2)
        f.write("\n")


def _require_inputs(*paths: str | Path | None) -> None:
    for p in paths:
        if p is not None and not Path(p).exists():
            raise ConfigError(f"input path does not exist: {p}")


def _default_data_path(name: str) -> str | None:
    base = os.environ.get(DATA_DIR_ENV)
    return str(Path(base) / name) if base else None


def _ticker(iterable, label: str, every: int = 200_000):
    n = 0
    for item in iterable:
        n += 1
        if n % every == 0:
            _info(f"{label}: {n} lines")
        yield item


def _load_lexicon(path: str | None) -> twitter.PluralFormLexicon:
    if path is None:
        return twitter.DEFAULT_LEXICON
    _require_inputs(path)
    return twitter.PluralFormLexicon.from_file(path)


def _load_instances_arg(args) -> list:
    if getattr(args, "instances", None):
        _require_inputs(*args.instances)
        out = []
        for path in args.instances:
            out.extend(read_instances(path))
        return out
    source = args.dataset or _default_data_path(getattr(args, "domain", "") or "")
    if not source:
        raise ConfigError("provide --instances or --dataset")
    _require_inputs(source)
    bundle = dataset.deserialize(source)
    if args.partition == "all":
        return bundle.train + bundle.dev + bundle.test
    return bundle.partitions()[args.partition]


def _hyperparams(args) -> classifier.Hyperparams:
    return classifier.Hyperparams(
        window=args.window,
        hash_bits=args.hash_bits,
        learning_rate=args.learning_rate,
        l2=args.l2,
        epochs=args.epochs,
        seed=args.seed,
    )


def _add_hyperparam_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--window", type=int, default=5, help="context window in tokens")
    parser.add_argument("--hash-bits", type=int, default=20, help="log2 of the hash space")
    parser.add_argument("--learning-rate", type=float, default=0.1)
    parser.add_argument("--l2", type=float, default=1e-5)
    parser.add_argument("--epochs", type=int, default=5)


def cmd_gen_fixture(args) -> int:
    fixture = fixtures.generate_fixture(
        args.seed,
        args.n_per_class,
        tweet_distractors=args.tweet_distractors,
        pair_distractors=args.pair_distractors,
        pairs_per_class=args.pairs_per_class,
    )
    paths = fixtures.write_fixture(fixture, args.out_dir)
    _info(
        f"wrote {len(fixture.tweets)} tweets and {len(fixture.bitext)} pairs to {args.out_dir}"
    )
    for name, path in paths.items():
        _info(f"  {name}: {path}")
    return 0


def cmd_extract_twitter(args) -> int:
    _require_inputs(args.tweets)
    lexicon = _load_lexicon(args.lexicon)
    tweets = read_utterances(args.tweets)
    result = twitter.extract_twitter(tweets, lexicon, seed=args.seed)
    write_instances(args.out, result.plural + result.singular)
    if args.stats:
        _write_json(args.stats, result.stats.to_dict())
    _info(
        f"extracted {result.stats.plural_emitted} plural / "
        f"{result.stats.singular_emitted} singular instances "
        f"from {result.stats.tweets_seen} tweets -> {args.out}"
    )
    return 0


def cmd_extract_europarl(args) -> int:
    _require_inputs(args.en, args.es)
    lexicon = europarl.EsPronounLexicon(
        plural_forms=frozenset(args.es_plural.split(",")),
        singular_forms=frozenset(args.es_singular.split(",")),
    )
    pairs = _ticker(europarl.load_parallel(args.en, args.es), "pairs read")
    result = europarl.extract_europarl(pairs, lexicon)
    write_instances(args.out, result.plural + result.singular)
    if args.stats:
        _write_json(args.stats, result.stats.to_dict())
    _info(
        f"extracted {result.stats.plural_emitted} plural / "
        f"{result.stats.singular_emitted} singular instances "
        f"from {result.stats.pairs_seen} pairs -> {args.out}"
    )
    return 0


def cmd_build_dataset(args) -> int:
    _require_inputs(*args.instances)
    instances = []
    for path in args.instances:
        instances.extend(read_instances(path))
    instances = dataset.dedup(instances)
    plural = [i for i in instances if i.label is Plurality.PLURAL]
    singular = [i for i in instances if i.label is Plurality.SINGULAR]
    balanced = dataset.balance(plural, singular, seed=args.seed)
    domain_tag = args.domain_tag
    if not domain_tag:
        domains = {i.domain.value for i in balanced}
        domain_tag = domains.pop() if len(domains) == 1 else "mixed"
    bundle = dataset.stratified_split(
        balanced, ratios=tuple(args.ratios), seed=args.seed, domain_tag=domain_tag
    )
    dataset.serialize(bundle, args.out_dir)
    _info(
        f"dataset '{domain_tag}': train={len(bundle.train)} dev={len(bundle.dev)} "
        f"test={len(bundle.test)} -> {args.out_dir}"
    )
    return 0


def cmd_analyze_histogram(args) -> int:
    instances = [i for i in _load_instances_arg(args) if i.label is Plurality.PLURAL]
    lexicon = _load_lexicon(args.lexicon)
    result = analytics.form_histogram(instances, lexicon)
    paths = analytics.write_histogram_report(result, args.out_dir)
    skipped = result.skipped_no_surface + result.skipped_unknown_surface
    _info(f"histogram over {result.total()} instances ({skipped} skipped) -> {paths['tsv']}")
    return 0


def cmd_analyze_state_map(args) -> int:
    instances = [i for i in _load_instances_arg(args) if i.label is Plurality.PLURAL]
    lexicon = _load_lexicon(args.lexicon)
    index = (
        analytics.GeoStateIndex.from_file(args.state_boxes)
        if args.state_boxes
        else analytics.GeoStateIndex.default()
    )
    counts = analytics.state_form_counts(instances, index, lexicon)
    preferences = analytics.state_preference_map(instances, index, lexicon)
    paths = analytics.write_state_map_report(preferences, counts, args.out_dir, index)
    _info(f"state preferences for {len(preferences)} states -> {paths['tsv']}")
    return 0


def cmd_analyze_sample(args) -> int:
    instances = _load_instances_arg(args)
    label_filter = None if args.label == "any" else Plurality(args.label)
    sample = analytics.sample_for_annotation(
        instances, n=args.n, label_filter=label_filter, seed=args.seed
    )
    analytics.write_annotation_file(sample, args.out)
    _info(f"sampled {len(sample.instances)} instances for annotation -> {args.out}")
    return 0


def cmd_analyze_agreement(args) -> int:
    _require_inputs(args.sample)
    sample = analytics.read_annotation_file(args.sample)
    counts = {label.value: 0 for label in analytics.HumanLabel}
    for label in sample.human_labels or []:
        counts[label.value] += 1
    report = {
        "n": len(sample.instances),
        "labels": counts,
        "agreement_rate": analytics.compute_agreement(sample),
    }
    if args.out:
        _write_json(args.out, report)
        _info(f"agreement report -> {args.out}")
    else:
        json.dump(report, sys.stdout, ensure_ascii=False, indent=2)
        print()
    return 0


def cmd_train(args) -> int:
    source = args.dataset or _default_data_path("")
    _require_inputs(source)
    bundle = dataset.deserialize(source)
    model = classifier.train(
        bundle.train, _hyperparams(args), training_domain=bundle.domain_tag
    )
    model.save(args.out)
    losses = ", ".join(f"{loss:.4f}" for loss in model.epoch_losses)
    _info(f"trained on {len(bundle.train)} instances; epoch losses: {losses}")
    _info(f"model -> {args.out}")
    return 0


def cmd_evaluate(args) -> int:
    _require_inputs(args.model, args.dataset)
    model = classifier.Model.load(args.model)
    bundle = dataset.deserialize(args.dataset)
    part = bundle.partitions()[args.partition]
    accuracy = classifier.evaluate(model, part)
    report = {
        "accuracy": accuracy,
        "n": len(part),
        "partition": args.partition,
        "dataset": bundle.domain_tag,
        "training_domain": model.training_domain,
    }
    if args.out:
        _write_json(args.out, report)
        _info(f"accuracy {accuracy:.4f} on {args.partition} -> {args.out}")
    else:
        json.dump(report, sys.stdout, ensure_ascii=False, indent=2)
        print()
    return 0


def cmd_eval_matrix(args) -> int:
    europarl_dir = args.europarl or _default_data_path("europarl")
    twitter_dir = args.twitter or _default_data_path("twitter")
    if not europarl_dir or not twitter_dir:
        raise ConfigError(
            f"provide --europarl and --twitter dataset directories (or set {DATA_DIR_ENV})"
        )
    _require_inputs(europarl_dir, twitter_dir)
    bundles = {
        "europarl": dataset.deserialize(europarl_dir),
        "twitter": dataset.deserialize(twitter_dir),
    }
    matrix = classifier.eval_matrix(bundles, _hyperparams(args))
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    report = matrix.to_dict()
    report["hyperparams"] = {
        "window": args.window,
        "hash_bits": args.hash_bits,
        "learning_rate": args.learning_rate,
        "l2": args.l2,
        "epochs": args.epochs,
        "seed": args.seed,
    }
    _write_json(out_dir / "eval_matrix.json", report)
    table = matrix.format_table()
    with open(out_dir / "eval_matrix.txt", "w", encoding="utf-8") as f:
        f.write(table)
    sys.stdout.write(table)
    _info(f"evaluation matrix -> {out_dir}")
    return 0


def build_parser() -> _Parser:
    parser = _Parser(prog="plural-you", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen-fixture", help="generate a synthetic tweet + bitext fixture")
    p.add_argument("--out-dir", required=True)
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--n-per-class", type=int, default=50)
    p.add_argument("--tweet-distractors", type=int, default=0)
    p.add_argument("--pair-distractors", type=int, default=0)
    p.add_argument("--pairs-per-class", type=int, default=None)
    p.set_defaults(func=cmd_gen_fixture)

    p = sub.add_parser("extract-twitter", help="distantly label a tweet stream")
    p.add_argument("--tweets", required=True, help="tweets JSONL (id, author_id, text, lat?, lon?)")
    p.add_argument("--out", required=True, help="output instances JSONL")
    p.add_argument("--lexicon", help="plural-form lexicon JSON {canonical: [variants...]}")
    p.add_argument("--stats", help="write extraction statistics JSON here")
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.set_defaults(func=cmd_extract_twitter)

    p = sub.add_parser("extract-europarl", help="project labels through aligned bitext")
    p.add_argument("--en", required=True, help="English side, one sentence per line")
    p.add_argument("--es", required=True, help="Spanish side, one sentence per line")
    p.add_argument("--out", required=True, help="output instances JSONL")
    p.add_argument("--stats", help="write extraction statistics JSON here")
    p.add_argument("--es-plural", default="ustedes,vosotros,vosotras")
    p.add_argument("--es-singular", default="tú,usted")
    p.set_defaults(func=cmd_extract_europarl)

    p = sub.add_parser("build-dataset", help="dedup, balance, split 80/10/10, serialize")
    p.add_argument("--instances", nargs="+", required=True, help="instance JSONL file(s)")
    p.add_argument("--out-dir", required=True)
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--ratios", type=float, nargs=3, default=(0.8, 0.1, 0.1))
    p.add_argument("--domain-tag", default="")
    p.set_defaults(func=cmd_build_dataset)

    analyze = sub.add_parser("analyze", help="corpus analyses and quality estimation")
    analyze_sub = analyze.add_subparsers(dest="analysis", required=True)

    def _instance_source_flags(sp):
        sp.add_argument("--instances", nargs="+", help="instance JSONL file(s)")
        sp.add_argument("--dataset", help="dataset directory from build-dataset")
        sp.add_argument(
            "--partition", default="all", choices=["train", "dev", "test", "all"]
        )

    p = analyze_sub.add_parser("histogram", help="plural-form histogram (TSV + SVG)")
    _instance_source_flags(p)
    p.add_argument("--out-dir", required=True)
    p.add_argument("--lexicon")
    p.set_defaults(func=cmd_analyze_histogram)

    p = analyze_sub.add_parser("state-map", help="per-state preferred form (TSV + SVG)")
    _instance_source_flags(p)
    p.add_argument("--out-dir", required=True)
    p.add_argument("--lexicon")
    p.add_argument("--state-boxes", help="override the bundled state bounding boxes JSON")
    p.set_defaults(func=cmd_analyze_state_map)

    p = analyze_sub.add_parser("sample", help="draw an annotation sample")
    _instance_source_flags(p)
    p.add_argument("--out", required=True, help="annotation JSONL to fill in offline")
    p.add_argument("--n", type=int, default=100)
    p.add_argument("--label", default="any", choices=["plural", "singular", "any"])
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.set_defaults(func=cmd_analyze_sample)

    p = analyze_sub.add_parser("agreement", help="agreement rate from an annotated sample")
    p.add_argument("--sample", required=True, help="annotated JSONL from 'analyze sample'")
    p.add_argument("--out", help="report JSON (default: stdout)")
    p.set_defaults(func=cmd_analyze_agreement)

    p = sub.add_parser("train", help="train the baseline classifier on a dataset")
    p.add_argument("--dataset", help=f"dataset directory (default: ${DATA_DIR_ENV})")
    p.add_argument("--out", required=True, help="model JSON file")
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    _add_hyperparam_flags(p)
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("evaluate", help="accuracy of a model on a dataset partition")
    p.add_argument("--model", required=True)
    p.add_argument("--dataset", required=True)
    p.add_argument("--partition", default="test", choices=["train", "dev", "test"])
    p.add_argument("--out", help="report JSON (default: stdout)")
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("eval-matrix", help="3x2 train-corpus x test-corpus accuracy grid")
    p.add_argument("--europarl", help=f"europarl dataset dir (default: ${DATA_DIR_ENV}/europarl)")
    p.add_argument("--twitter", help=f"twitter dataset dir (default: ${DATA_DIR_ENV}/twitter)")
    p.add_argument("--out-dir", required=True)
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    _add_hyperparam_flags(p)
    p.set_defaults(func=cmd_eval_matrix)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except _UsageError:
        return 1
    try:
        return args.func(args)
    except ConfigError as exc:
        _info(f"error: {exc}")
        return 1
    except DataError as exc:
        _info(f"data error: {exc}")
        return 2
    except OSError as exc:
        _info(f"error: {exc}")
        return 1


if __name__ == "__main__":
    sys.exit(main())
