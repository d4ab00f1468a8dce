import pytest

from plural_you.instances import Domain, LabeledInstance, Plurality, Provenance, Utterance


def make_instance(
    text,
    target,
    label=Plurality.SINGULAR,
    domain=Domain.TWITTER,
    source_id="s1",
    **prov,
):
    return LabeledInstance(
        text=text,
        target_token_index=target,
        label=label,
        domain=domain,
        provenance=Provenance(source_id=source_id, **prov),
    )


def make_balanced(n, domain=Domain.TWITTER):
    """n instances alternating plural/singular with unique source ids."""
    out = []
    for i in range(n):
        label = Plurality.PLURAL if i % 2 == 0 else Plurality.SINGULAR
        out.append(
            make_instance(
                f"number {i} says you win",
                3,
                label=label,
                domain=domain,
                source_id=f"s{i:06d}",
            )
        )
    return out


@pytest.fixture
def tweet(request):
    def _tweet(id, author, text, lat=None, lon=None):
        return Utterance(id=id, author_id=author, text=text, lat=lat, lon=lon)

    return _tweet
