import json
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qreals.entropy import (
    DiscreteDist,
    compose,
    composition_check,
    product_dist,
    random_dist,
    tsallis_entropy,
)
from qreals.errors import QDomainError

COIN = DiscreteDist((0.5, 0.5))


def tsallis_literal(q, probs):
    """(1 - sum p**q) / (q - 1) on the support, Shannon entropy at q = 1."""
    support = [p for p in probs if p > 0]
    if q > 1 - 1e-6:  # the quotient cancels too badly this close to 1
        return -sum(p * math.log(p) for p in support)
    return (1 - sum(p ** q for p in support)) / (q - 1)


def weights(n_max=8):
    # subnormal products would drop out of the joint support at q = 0
    return st.lists(st.one_of(st.just(0.0), st.floats(1e-6, 1.0)), min_size=1, max_size=n_max).filter(lambda w: sum(w) > 0.1)


def normalise(w):
    total = math.fsum(w)
    probs = [x / total for x in w]
    probs[-1] = 1.0 - math.fsum(probs[:-1])
    return DiscreteDist(tuple(max(p, 0.0) for p in probs)) if probs[-1] >= 0 else None


def test_coin_examples():
    assert tsallis_entropy(0.5, COIN) == pytest.approx(2 * math.sqrt(2) - 2, rel=1e-14)
    assert tsallis_entropy(0.5, COIN) == pytest.approx(0.8284271, abs=1e-7)
    assert tsallis_entropy(1.0, COIN) == pytest.approx(math.log(2), rel=1e-15)
    assert tsallis_entropy(0.0, COIN) == pytest.approx(1.0, rel=1e-15)
    assert tsallis_entropy(0.5, DiscreteDist((1.0,))) == 0.0


def test_two_coins_compose():
    joint = product_dist(COIN, COIN)
    assert joint.probabilities == (0.25, 0.25, 0.25, 0.25)
    c = compose(0.5, COIN, COIN)
    assert c.s_joint == pytest.approx(2.0, abs=1e-12)
    assert c.defect <= 1e-12
    assert set(c.to_dict()) == {"entropy_a", "entropy_b", "entropy_joint", "composition_rhs", "defect"}


def test_product_is_row_major():
    d = product_dist(DiscreteDist((0.2, 0.8)), DiscreteDist((0.3, 0.7)))
    assert d.probabilities == pytest.approx((0.06, 0.14, 0.24, 0.56), abs=1e-15)


def test_zero_probability_terms():
    # zero outcomes contribute nothing
    assert tsallis_entropy(0.5, (0.5, 0.5, 0.0)) == tsallis_entropy(0.5, COIN)
    # at q = 0 the entropy counts the support minus one
    assert tsallis_entropy(0.0, (0.25, 0.25, 0.5, 0.0)) == pytest.approx(2.0, rel=1e-15)


@pytest.mark.parametrize("bad", [(0.5, 0.6), (-0.1, 1.1), (math.nan, 1.0), (), (0.3, 0.3)])
def test_invalid_distributions(bad):
    with pytest.raises(QDomainError):
        DiscreteDist(bad)


def test_no_renormalisation():
    with pytest.raises(QDomainError):
        DiscreteDist((1.0, 1.0))


def test_parse():
    assert DiscreteDist.parse("0.5,0.5") == COIN
    assert DiscreteDist.parse(json.dumps([0.25, 0.75])).probabilities == (0.25, 0.75)
    with pytest.raises(QDomainError):
        DiscreteDist.parse("a,b")


def test_uniform():
    d = DiscreteDist.uniform(4)
    assert math.fsum(d.probabilities) == 1.0
    assert tsallis_entropy(0.5, d) == pytest.approx((1 - 4 * 0.25 ** 0.5) / -0.5, rel=1e-14)
    with pytest.raises(QDomainError):
        DiscreteDist.uniform(0)


@settings(max_examples=200)
@given(st.floats(0.0, 1.0), weights())
def test_matches_literal_definition(q, w):
    d = normalise(w)
    if d is None:
        return
    assert tsallis_entropy(q, d) == pytest.approx(tsallis_literal(q, d.probabilities),
                                                  rel=1e-5, abs=1e-9)
    if q <= 0.999:
        assert tsallis_entropy(q, d) == pytest.approx(tsallis_literal(q, d.probabilities),
                                                      rel=1e-10, abs=1e-12)


@settings(max_examples=200)
@given(st.floats(0.0, 1.0), weights(), weights())
def test_composition_property(q, wa, wb):
    a, b = normalise(wa), normalise(wb)
    if a is None or b is None:
        return
    assert composition_check(q, a, b) <= 1e-12


def test_random_dist_valid_and_seeded():
    rng = np.random.default_rng(5)
    ds = [random_dist(rng, 8, zero_fraction=0.3) for _ in range(50)]
    assert all(1 <= len(d) <= 8 for d in ds)
    rng2 = np.random.default_rng(5)
    assert ds == [random_dist(rng2, 8, zero_fraction=0.3) for _ in range(50)]
