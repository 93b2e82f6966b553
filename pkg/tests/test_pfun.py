import random

import pytest

from ovup import pfun
from ovup.pfun import (
    EMPTY,
    PartialFunction,
    intersect,
    minus,
    override,
    parse_literal,
    phi1_holds,
    quotient_range,
    random_pfun,
    restrict_domain,
    rmult,
    update,
)

POINTS = ["a", "b", "c", "d"]
VALUES = [1, 2, 3]


def rand_pair(rng):
    return random_pfun(rng, POINTS, VALUES), random_pfun(rng, POINTS, VALUES)


def test_override_examples():
    f = parse_literal("{a:1}")
    g = parse_literal("{a:2, b:3}")
    assert override(f, g) == parse_literal("{a:1, b:3}")
    assert override(EMPTY, g) == g
    assert override(f, f) == f


def test_update_examples():
    f = parse_literal("{a:1, b:2}")
    g = parse_literal("{a:5, c:7}")
    assert update(f, g) == parse_literal("{a:5, b:2}")
    assert update(EMPTY, g) == EMPTY


def test_update_self_is_identity():
    rng = random.Random(1)
    for _ in range(200):
        f = random_pfun(rng, POINTS, VALUES)
        assert update(f, f) == f


def test_rmult_examples():
    f = parse_literal("{a:1, b:2}")
    g = parse_literal("{b:9, c:9}")
    assert rmult(f, g) == parse_literal("{b:2}")
    assert rmult(f, EMPTY) == EMPTY


def test_minus_examples():
    f = parse_literal("{a:1, b:2}")
    assert minus(f, parse_literal("{b:9}")) == parse_literal("{a:1}")
    assert minus(f, EMPTY) == f


def test_intersect():
    f = parse_literal("{a:1, b:2}")
    g = parse_literal("{a:1, b:3}")
    assert intersect(f, g) == parse_literal("{a:1}")
    assert intersect(f, f) == f
    rng = random.Random(2)
    for _ in range(200):
        f, g = rand_pair(rng)
        assert intersect(f, g) == intersect(g, f)


def test_interdefinability_random():
    rng = random.Random(3)
    for _ in range(2000):
        f, g = rand_pair(rng)
        assert rmult(f, g) == minus(f, minus(f, g))
        assert update(f, g) == rmult(override(g, f), f)


def test_domain_laws_random():
    rng = random.Random(4)
    for _ in range(500):
        f, g = rand_pair(rng)
        assert override(f, g).domain == f.domain | g.domain
        assert update(f, g).domain == f.domain
        assert rmult(f, g).domain == f.domain & g.domain
        assert minus(f, g).domain == f.domain - g.domain


def test_override_band_laws_random():
    rng = random.Random(5)
    for _ in range(500):
        f, g = rand_pair(rng)
        h = random_pfun(rng, POINTS, VALUES)
        assert override(f, f) == f
        assert override(override(f, g), h) == override(f, override(g, h))
        assert override(override(f, g), f) == override(f, g)


def test_quotient_range():
    f = parse_literal("{a:1, b:2}")
    q = quotient_range(f, [{1, 2}])
    assert q["a"] == q["b"]
    assert q.domain == f.domain
    assert quotient_range(f, [{1}, {2}, {3}]) == f
    with pytest.raises(ValueError):
        quotient_range(f, [{1}])  # 2 not covered
    with pytest.raises(ValueError):
        quotient_range(f, [{1, 2}, {2, 3}])  # overlapping classes


def test_quotient_range_is_homomorphism():
    # for the four combination operations; intersection is genuinely not
    # preserved (collapsing values can create agreements)
    rng = random.Random(6)
    classes = [{1, 2}, {3}]
    for op in (override, update, rmult, minus):
        for _ in range(300):
            f, g = rand_pair(rng)
            assert quotient_range(op(f, g), classes) == op(
                quotient_range(f, classes), quotient_range(g, classes)
            )
    assert intersect(
        quotient_range(parse_literal("{a:1}"), classes),
        quotient_range(parse_literal("{a:2}"), classes),
    ) != quotient_range(intersect(parse_literal("{a:1}"), parse_literal("{a:2}")), classes)


def test_restrict_domain():
    f = parse_literal("{a:1, b:2}")
    assert restrict_domain(f, {"a"}) == parse_literal("{a:1}")
    assert restrict_domain(f, set()) == EMPTY


def test_restrict_domain_is_homomorphism():
    rng = random.Random(7)
    keep = {"a", "c"}
    for op in (override, update, rmult, minus):
        for _ in range(300):
            f, g = rand_pair(rng)
            assert restrict_domain(op(f, g), keep) == op(
                restrict_domain(f, keep), restrict_domain(g, keep)
            )


def test_phi1_characterises_update_random():
    rng = random.Random(8)
    for _ in range(2000):
        f, g = rand_pair(rng)
        assert phi1_holds(update(f, g), f, g)


def test_phi1_rejects_wrong_candidates():
    f = parse_literal("{a:1, b:2}")
    g = parse_literal("{a:5}")
    assert not phi1_holds(f, f, g)  # h=f but g overrides at a
    assert phi1_holds(EMPTY, EMPTY, EMPTY)


def test_literal_round_trip():
    for text in ("{}", "{a:1}", "{a:1, b:two}", "{1:1, 2:b}"):
        f = parse_literal(text)
        assert parse_literal(pfun.literal(f)) == f
    with pytest.raises(ValueError):
        parse_literal("a:1")
    with pytest.raises(ValueError):
        parse_literal("{a:1, a:2}")
    with pytest.raises(ValueError):
        parse_literal("{a=1}")


def test_random_pfun_seeded_reproducible():
    a = [random_pfun(random.Random(42), POINTS, VALUES) for _ in range(5)]
    b = [random_pfun(random.Random(42), POINTS, VALUES) for _ in range(5)]
    assert a == b


def test_extensional_equality_and_hash():
    f = PartialFunction({"a": 1, "b": 2})
    g = PartialFunction([("b", 2), ("a", 1)])
    assert f == g and hash(f) == hash(g)
    assert f != PartialFunction({"a": 1})
    assert len({f, g}) == 1
