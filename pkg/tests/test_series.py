import itertools
import random

import pytest
from hypothesis import given, strategies as st

from orderiso import (
    ZERO,
    BoundedSemigroup,
    Carrier,
    SamplingConfig,
    UsageError,
    compose,
    inverse,
    make_iso,
    omega_unstable_witness,
    rank_drop_law,
    rees_quotient,
    tight_series_check,
)
from orderiso.series import layer_pair_failures, random_element, random_probe_set

A = make_iso([1, 3], [2, 4])


def test_rank_drop_examples():
    b = make_iso([2, 5], [0, 9])
    assert compose(A, b).rank == 1
    assert rank_drop_law(A, b)
    assert compose(A, inverse(A)).rank == 2
    assert rank_drop_law(A, inverse(A))
    assert compose(make_iso([1], [2]), make_iso([3], [4])) == ZERO
    assert rank_drop_law(make_iso([1], [2]), make_iso([3], [4]))


def test_rank_drop_needs_equal_positive_ranks():
    with pytest.raises(UsageError):
        rank_drop_law(A, make_iso([1], [2]))
    with pytest.raises(UsageError):
        rank_drop_law(ZERO, ZERO)


@st.composite
def same_rank_pair(draw):
    k = draw(st.integers(1, 5))
    pts = st.lists(st.integers(-10, 10), min_size=k, max_size=k, unique=True)
    return tuple(make_iso(sorted(draw(pts)), sorted(draw(pts))) for _ in range(2))


@given(same_rank_pair())
def test_rank_drop_law_holds(pair):
    a, b = pair
    assert rank_drop_law(a, b)
    if b.dom != a.ran:
        assert compose(a, b).rank < a.rank


def test_witness_example():
    probes = [make_iso([2, 4], [1, 3]), make_iso([2, 4], [0, 1])]
    rep = omega_unstable_witness(A, probes)
    assert rep.witness == make_iso([2, 4], [0, 1])
    assert rep.side == "ba"
    assert rep.product_rank == 1


def test_witness_preconditions():
    with pytest.raises(UsageError):
        omega_unstable_witness(A, [inverse(A)])
    with pytest.raises(UsageError):
        omega_unstable_witness(A, [inverse(A), make_iso([1], [2])])
    with pytest.raises(UsageError):
        omega_unstable_witness(A, [inverse(A), inverse(A)])
    with pytest.raises(UsageError):
        omega_unstable_witness(ZERO, [ZERO, ZERO])


def test_witness_exhaustive_rank_one_window():
    layer = [make_iso([x], [y]) for x in range(-3, 4) for y in range(-3, 4)]
    for a in layer:
        for b1, b2 in itertools.combinations(layer, 2):
            rep = omega_unstable_witness(a, [b1, b2])
            assert rep.witness in (b1, b2)
            assert rep.product == ZERO


def test_witness_random_trials():
    rng = random.Random(11)
    for _ in range(1000):
        k = rng.randint(1, 5)
        a = random_element(rng, k, (-50, 50))
        probes = random_probe_set(rng, k, (-50, 50), rng.randint(2, 10))
        rep = omega_unstable_witness(a, probes)
        assert rep.witness in probes
        assert rep.product.rank < k


def test_witness_when_inverse_is_a_probe():
    rng = random.Random(1)
    for _ in range(200):
        k = rng.randint(1, 4)
        a = random_element(rng, k, (-9, 9))
        other = random_probe_set(rng, k, (-9, 9), 3)
        probes = [inverse(a)] + [b for b in other if b != inverse(a)][:1]
        assert omega_unstable_witness(a, probes).witness != inverse(a)


@pytest.mark.parametrize("k", [1, 2])
def test_layer_pairs_exhaustive_on_chain(s42, k):
    assert layer_pair_failures(s42, k) == []


def test_tight_series_integer_line():
    rep = tight_series_check(BoundedSemigroup(Carrier.integers(), 3), SamplingConfig(samples=200, seed=1))
    assert rep.passed
    assert [layer.layer for layer in rep.layers] == [0, 1, 2, 3]
    assert all(layer.witness_found == 200 for layer in rep.layers[1:])


def test_tight_series_quotient():
    q = rees_quotient(BoundedSemigroup(Carrier.integers(), 2), 1)
    rep = tight_series_check(q, SamplingConfig(samples=200, seed=2))
    assert rep.passed
    assert [layer.layer for layer in rep.layers] == [1, 2]


def test_tight_series_is_reproducible():
    S = BoundedSemigroup(Carrier.integers(), 3)
    one = tight_series_check(S, SamplingConfig(samples=50, seed=9))
    two = tight_series_check(S, SamplingConfig(samples=50, seed=9))
    assert [x.to_json() for x in one.layers] == [x.to_json() for x in two.layers]
    assert one.layers[1].to_json() == {"layer": 1, "samples": 50, "witness_found": 50, "seed": 9}


def test_tight_series_needs_config():
    S = BoundedSemigroup(Carrier.integers(), 2)
    with pytest.raises(UsageError):
        tight_series_check(S, None)
    with pytest.raises(UsageError):
        tight_series_check(S, SamplingConfig(samples=0))
    with pytest.raises(UsageError):
        tight_series_check(S, SamplingConfig(min_probes=1))
