import itertools
import random

import pytest
from hypothesis import given, settings, strategies as st

from orderiso import (
    QZERO,
    ZERO,
    BoundedSemigroup,
    Carrier,
    Congruence,
    UsageError,
    all_congruences,
    collapse_chain,
    compose,
    identity_on,
    is_rees,
    make_iso,
    natural_leq,
    principal_congruence,
    rees_congruence,
    rees_quotient,
)
from orderiso.congruence import (
    CongruenceError,
    diagonal,
    is_compatible_exhaustive,
    random_idempotent_pair,
)

from .oracles import naive_congruence, partition_of, set_partitions


def blocks_of(C):
    return frozenset(frozenset(b) for b in C.blocks())


def test_rees_congruence_examples(s42):
    assert rees_congruence(s42, 0) == diagonal(s42)
    assert rees_congruence(s42, 2).num_blocks == 1
    assert rees_congruence(s42, 1).block_sizes() == [17] + [1] * 36
    with pytest.raises(UsageError):
        rees_congruence(s42, 3)


def test_principal_congruence_examples(s42):
    a = make_iso([1], [2])
    assert principal_congruence(s42, a, a) == diagonal(s42)
    assert principal_congruence(s42, ZERO, a) == rees_congruence(s42, 1)
    assert principal_congruence(s42, identity_on({1, 3}), identity_on({1})) == rees_congruence(s42, 2)


def test_principal_congruence_matches_naive_closure(s42):
    rng = random.Random(3)
    els = s42.elements
    small = BoundedSemigroup(Carrier.chain(3), 1)
    for a, b in itertools.combinations(small.elements, 2):
        rel = naive_congruence(small.elements, compose, [(a, b)])
        assert blocks_of(principal_congruence(small, a, b)) == partition_of(rel, small.elements)
    for _ in range(4):
        a, b = rng.sample(els, 2)
        rel = naive_congruence(els, compose, [(a, b)])
        assert blocks_of(principal_congruence(s42, a, b)) == partition_of(rel, els)


@pytest.mark.parametrize("m, n", [(2, 1), (2, 2), (3, 1)])
def test_lattice_matches_partition_search(m, n):
    """Every partition of a tiny semigroup, filtered by the compatibility definition."""
    S = BoundedSemigroup(Carrier.chain(m), n)
    els = S.elements

    def compatible(blocks):
        where = {a: i for i, b in enumerate(blocks) for a in b}
        for b in blocks:
            x = b[0]
            for y in b[1:]:
                for c in els:
                    if where[compose(c, x)] != where[compose(c, y)] or where[compose(x, c)] != where[compose(y, c)]:
                        return False
        return True

    expected = {frozenset(frozenset(b) for b in p) for p in set_partitions(els) if compatible(p)}
    got = {blocks_of(C) for C in all_congruences(S)}
    assert got == expected


@pytest.mark.parametrize("m, n, count", [(3, 1, 2), (4, 2, 3)])
def test_all_congruences_are_rees(m, n, count):
    S = BoundedSemigroup(Carrier.chain(m), n)
    lattice = all_congruences(S)
    assert len(lattice) == count
    assert [is_rees(S, C) for C in lattice] == list(range(count))
    for C in lattice:
        assert is_compatible_exhaustive(C)
    assert lattice[0] == diagonal(S) == rees_congruence(S, 0)


def test_all_congruences_thread_invariant(s42):
    assert all_congruences(s42, threads=4) == all_congruences(s42)


def test_is_rees_rejects_non_rees_partitions(s42):
    assert is_rees(s42, rees_congruence(s42, 1)) == 1
    assert is_rees(s42, diagonal(s42)) == 0
    # a compatible-looking label vector that is not Rees never gets past validation
    z = s42.zero_index
    labels = list(range(len(s42)))
    labels[s42.index[make_iso([0], [0])]] = z
    with pytest.raises(CongruenceError):
        Congruence(s42, labels)
    C = Congruence(s42, labels, validate=False)
    assert is_rees(s42, C) is None


def test_congruence_validation_rejects_bad_partitions(s42):
    with pytest.raises(CongruenceError):
        Congruence(s42, [0] * (len(s42) - 1))
    ok = Congruence.from_blocks(s42, [list(rees_congruence(s42, 1).block_of(ZERO))] +
                                [[a] for a in s42.elements if a.rank == 2])
    assert ok == rees_congruence(s42, 1)


def test_join(s42):
    d, r1, u = diagonal(s42), rees_congruence(s42, 1), rees_congruence(s42, 2)
    assert d.join(r1) == r1
    assert r1.join(u) == u
    assert d <= r1 <= u and not u <= r1


def test_pair_collapse_law(s42):
    """Distinct related elements drag every element of rank <= the larger rank into one block."""
    els = s42.elements
    for a, b in itertools.combinations(els, 2):
        C = principal_congruence(s42, a, b)
        top = max(a.rank, b.rank)
        block = set(C.block_of(a))
        assert {g for g in els if g.rank <= top} <= block


def test_zero_collapse_law(s42):
    for a in s42.elements:
        assert rees_congruence(s42, a.rank) <= principal_congruence(s42, a, ZERO)


# -- collapse chain


def test_collapse_chain_three_points():
    chain = collapse_chain(identity_on({1, 2, 3}), identity_on({1, 2}))
    assert len(chain) == 2
    assert chain.final == ZERO
    assert chain.violations() == []


def test_collapse_chain_immediate():
    chain = collapse_chain(identity_on({5}), ZERO)
    assert len(chain) == 0
    assert chain.violations() == []


def test_collapse_chain_preconditions():
    with pytest.raises(UsageError):
        collapse_chain(make_iso([1], [2]), ZERO)
    with pytest.raises(UsageError):
        collapse_chain(identity_on({1, 2}), identity_on({1, 2}))
    with pytest.raises(UsageError):
        collapse_chain(identity_on({1, 2}), identity_on({3}))


def test_collapse_chain_removes_maximum_each_step():
    chain = collapse_chain(identity_on({1, 4, 6, 9}), identity_on({1, 4, 6}))
    prev = chain.alpha
    for (iota, nxt), cur in zip(chain.steps, chain.betas()[1:]):
        assert iota.dom == cur.dom
        assert set(iota.ran) == set(prev.dom) - {max(cur.dom)}
        prev = cur


def test_collapse_chain_random_pairs():
    rng = random.Random(2024)
    for _ in range(100):
        alpha, beta = random_idempotent_pair(rng, (-20, 20), 5)
        chain = collapse_chain(alpha, beta, Carrier.integers())
        assert chain.violations() == []
        assert chain.final == ZERO
        ranks = [b.rank for b in chain.betas()[1:]]
        assert all(x - y == 1 for x, y in zip(ranks, ranks[1:]))


def test_collapse_chain_elements_collapse_in_principal_congruence(s42):
    idem = [e for e in s42.elements if e.rank and e.dom == e.ran]
    for a, b in itertools.product(idem + [ZERO], repeat=2):
        if a != b and natural_leq(b, a):
            chain = collapse_chain(a, b)
            C = principal_congruence(s42, a, b)
            for beta in chain.betas():
                assert C.related(beta, a)


@settings(max_examples=200)
@given(st.sets(st.integers(-20, 20), min_size=1, max_size=6), st.data())
def test_collapse_chain_property(dom, data):
    sub = data.draw(st.sets(st.sampled_from(sorted(dom)), max_size=len(dom) - 1))
    chain = collapse_chain(identity_on(dom), identity_on(sub))
    assert chain.violations() == []


# -- Rees quotients


def test_quotient_examples(s42):
    q = rees_quotient(s42, 1)
    assert len(q) == 37
    assert q.homomorphism_failures() == []
    top = rees_quotient(s42, 2)
    assert top.elements == [QZERO]
    with pytest.raises(UsageError):
        rees_quotient(s42, -1)


def test_quotient_zero_is_zero(s42):
    q = rees_quotient(s42, 1)
    for a in q.elements:
        assert q.multiply(a, QZERO) is QZERO and q.multiply(QZERO, a) is QZERO


def test_quotient_kernel_is_rees_congruence(s42):
    q = rees_quotient(s42, 1)
    kernel = {}
    for a in s42.elements:
        kernel.setdefault(q.project(a), []).append(a)
    assert Congruence.from_blocks(s42, kernel.values()) == rees_congruence(s42, 1)


def test_quotient_over_integer_line_sampled():
    S = BoundedSemigroup(Carrier.integers(), 3)
    q = rees_quotient(S, 1)
    rng = random.Random(5)
    from orderiso.series import random_element

    pairs = [(random_element(rng, rng.randint(0, 3), (-4, 4)), random_element(rng, rng.randint(0, 3), (-4, 4)))
             for _ in range(2000)]
    assert q.homomorphism_failures(pairs) == []
    with pytest.raises(Exception):
        q.elements


def test_congruence_json(s31):
    obj = rees_congruence(s31, 1).to_json()
    assert obj["is_rees"] == 1
    assert obj["blocks"][0][0] == "[]" and len(obj["blocks"]) == 1
