"""Theorem-checking suites run by ``oi check``.

Each suite returns a plain dict with at least ``check`` and ``passed``;
the dicts are JSON-ready and contain nothing run-dependent beyond the seed.
"""

from __future__ import annotations

import itertools
import random
from typing import Callable, Dict, List

from .carrier import Carrier
from .congruence import (
    all_congruences,
    collapse_chain,
    is_compatible_exhaustive,
    is_rees,
    principal_congruence,
    random_idempotent_pair,
    rees_congruence,
    rees_quotient,
)
from .errors import UsageError
from .pariso import (
    ZERO,
    compose,
    identity_on,
    inverse,
    is_idempotent,
    natural_leq,
    restrict,
)
from .semigroup import (
    BoundedSemigroup,
    check_stability,
    compare_green,
    expected_size,
    ideal_series,
    ideals_by_class_search,
    all_ideals,
)
from .series import (
    SamplingConfig,
    layer_pair_failures,
    omega_unstable_witness,
    random_element,
    random_probe_set,
    tight_series_check,
)

MAX_REPORTED = 10


def _finish(name: str, failures: list, **extra) -> dict:
    out = {"check": name, "passed": not failures}
    out.update(extra)
    out["failures"] = failures[:MAX_REPORTED]
    out["failure_count"] = len(failures)
    return out


def check_counting(S: BoundedSemigroup, **_) -> dict:
    expected = expected_size(S.carrier.size, S.max_rank)
    got = len(S.elements)
    failures = [] if got == expected else [f"enumerated {got}, formula {expected}"]
    return _finish("counting", failures, size=got, expected=expected)


def _laws_on(triples, pairs, singles) -> List[str]:
    bad = []
    for a, b, c in triples:
        if compose(compose(a, b), c) != compose(a, compose(b, c)):
            bad.append(f"associativity {a} {b} {c}")
    for a in singles:
        ia = inverse(a)
        if compose(compose(a, ia), a) != a or compose(compose(ia, a), ia) != ia:
            bad.append(f"inverse law {a}")
        if compose(a, ia) != identity_on(a.dom) or compose(ia, a) != identity_on(a.ran):
            bad.append(f"a a^-1 is not the identity on dom {a}")
        xs = list(zip(a.dom, a.ran))
        if any(y1 >= y2 for (_, y1), (_, y2) in zip(xs, xs[1:])):
            bad.append(f"not order preserving {a}")
    for a, b in pairs:
        ab = compose(a, b)
        if ab.rank != len(set(a.ran) & set(b.dom)):
            bad.append(f"rank of product {a} {b}")
    return bad


def check_algebra(S: BoundedSemigroup, seed: int = 0, random_triples: int = 10_000, **_) -> dict:
    """Associativity, inverse laws, idempotent semilattice and both natural orders."""
    els = S.elements
    bad = _laws_on(itertools.product(els, repeat=3), itertools.product(els, repeat=2), els)
    idem = [e for e in els if is_idempotent(e)]
    for e, f in itertools.product(idem, repeat=2):
        ef = compose(e, f)
        if ef != compose(f, e) or ef != identity_on(set(e.dom) & set(f.dom)):
            bad.append(f"idempotents {e} {f}")
    for a, b in itertools.product(els, repeat=2):
        via_idempotent = any(compose(b, e) == a for e in idem)
        if natural_leq(a, b) != via_idempotent:
            bad.append(f"natural order {a} {b}")
    bad.extend(_random_laws(seed, random_triples, S.max_rank))
    return _finish("algebra", bad, elements=len(els), idempotents=len(idem), random_triples=random_triples, seed=seed)


def _random_laws(seed: int, count: int, max_rank: int, window=(-20, 20)) -> List[str]:
    rng = random.Random(seed)
    bad = []
    for _ in range(count):
        a, b, c = (random_element(rng, rng.randint(0, max_rank), window) for _ in range(3))
        bad.extend(_laws_on([(a, b, c)], [(a, b), (b, c)], [a]))
        ia = inverse(a)
        e = compose(ia, a)
        sub = restrict(b, rng.sample(b.dom, rng.randint(0, b.rank)))
        if not natural_leq(sub, b) or compose(b, identity_on(sub.ran)) != sub:
            bad.append(f"restriction {sub} not below {b}")
        if natural_leq(a, b) != (compose(b, identity_on(a.ran)) == a):
            bad.append(f"natural order {a} {b}")
        if compose(e, e) != e:
            bad.append(f"a^-1 a not idempotent {a}")
    return bad


def check_green(S: BoundedSemigroup, threads: int = 1, **_) -> dict:
    cmp = compare_green(S, threads=threads)
    oracle = S.oracle
    n = len(S)
    extra = []
    for i, j in itertools.product(range(n), repeat=2):
        if oracle.related(i, j, "H") != (oracle.related(i, j, "R") and oracle.related(i, j, "L")):
            extra.append(f"H != R & L at {i},{j}")
        if oracle.related(i, j, "D") != oracle.d_related_rl(i, j):
            extra.append(f"L o R != R o L at {i},{j}")
    failures = [f"{rel}: {a} vs {b}" for a, b, rel in cmp.mismatches] + extra
    return _finish("green", failures, pairs=cmp.pairs)


def check_stability_suite(S: BoundedSemigroup, threads: int = 1, **_) -> dict:
    rep = check_stability(S, threads=threads)
    return _finish(
        "stability",
        rep.violations,
        pairs=rep.pairs,
        right_inclusions=rep.right_inclusions,
        left_inclusions=rep.left_inclusions,
    )


def check_ideals(S: BoundedSemigroup, **_) -> dict:
    series = list(ideal_series(S).ideals)
    found = all_ideals(S)
    searched = ideals_by_class_search(S)
    failures = []
    if found != series:
        failures.append("principal-union ideals differ from the rank series")
    if searched != series:
        failures.append("exhaustive class search differs from the rank series")
    return _finish("ideals", failures, sizes=[len(i) for i in found])


def check_congruences(S: BoundedSemigroup, threads: int = 1, **_) -> dict:
    els = S.elements
    failures = []
    lattice = all_congruences(S, threads=threads)
    tags = [is_rees(S, c) for c in lattice]
    for c, k in zip(lattice, tags):
        if k is None:
            failures.append(f"non-Rees congruence with blocks {c.block_sizes()}")
        if not is_compatible_exhaustive(c):
            failures.append(f"incompatible congruence {c.block_sizes()}")
    if len(lattice) != S.top_rank + 1:
        failures.append(f"{len(lattice)} congruences, expected {S.top_rank + 1}")

    idx = S.index
    n = len(els)
    ranks = S.ranks
    for i in range(n):
        for j in range(i + 1, n):
            c = principal_congruence(S, els[i], els[j])
            top = max(ranks[i], ranks[j])
            lab = c.labels[i]
            if any(c.labels[g] != lab for g in range(n) if ranks[g] <= top):
                failures.append(f"pair law: {els[i]} {els[j]}")
    for a in els:
        c = principal_congruence(S, a, ZERO)
        if not rees_congruence(S, a.rank) <= c:
            failures.append(f"zero law: {a}")

    idem = [e for e in els if is_idempotent(e)]
    chains = 0
    for a in idem:
        for b in idem:
            if b != a and natural_leq(b, a):
                chain = collapse_chain(a, b, S.carrier)
                chains += 1
                for v in chain.violations():
                    failures.append(f"chain {a} > {b}: {v}")
                c = principal_congruence(S, a, b)
                if not all(c.labels[idx[g]] == c.labels[idx[a]] for g in els if g.rank <= a.rank):
                    failures.append(f"comparable idempotents do not collapse: {a} {b}")
    return _finish("congruences", failures, congruences=len(lattice), rees=tags, chains=chains)


def check_quotients(S: BoundedSemigroup, **_) -> dict:
    failures = []
    sizes = []
    for k in range(S.max_rank + 1):
        q = rees_quotient(S, k)
        expected = 1 + sum(1 for a in S.elements if a.rank > k)
        sizes.append(len(q))
        if len(q) != expected:
            failures.append(f"quotient by I_{k} has {len(q)} elements, expected {expected}")
        for a, b in q.homomorphism_failures():
            failures.append(f"quotient by I_{k}: h({a}{b}) != h({a})h({b})")
    return _finish("quotients", failures, sizes=sizes)


def check_series(S: BoundedSemigroup, seed: int = 0, samples: int = 200, random_trials: int = 1000, **_) -> dict:
    """Layer instability: exhaustive pairs on a finite chain, sampled on the integer line."""
    failures = []
    if S.carrier.is_finite:
        for k in range(1, S.top_rank + 1):
            failures.extend(f"layer {k}: {t}" for t in layer_pair_failures(S, k))
    line = BoundedSemigroup(Carrier.integers(), S.max_rank)
    config = SamplingConfig(samples=samples, seed=seed)
    layers = []
    for k in range(S.max_rank):
        target = line if k == 0 else rees_quotient(line, k)
        rep = tight_series_check(target, config)
        layers.append({"quotient_by": k, "layers": [layer.to_json() for layer in rep.layers]})
        if not rep.passed:
            failures.append(f"tight series failed on quotient by I_{k}")
    rng = random.Random(seed)
    found = 0
    for _ in range(random_trials):
        k = rng.randint(1, min(5, S.max_rank))
        alpha = random_element(rng, k, (-50, 50))
        probes = random_probe_set(rng, k, (-50, 50), rng.randint(2, 10))
        found += omega_unstable_witness(alpha, probes).product.rank < k
    if found != random_trials:
        failures.append(f"random witnesses {found}/{random_trials}")
    return _finish("series", failures, seed=seed, series=layers, random_trials=random_trials, witness_found=found)


FINITE_CHECKS: Dict[str, Callable[..., dict]] = {
    "counting": check_counting,
    "algebra": check_algebra,
    "green": check_green,
    "stability": check_stability_suite,
    "ideals": check_ideals,
    "congruences": check_congruences,
    "quotients": check_quotients,
}
ALL_CHECKS = list(FINITE_CHECKS) + ["series"]


def run_check(name: str, S: BoundedSemigroup, **options) -> dict:
    if name == "series":
        return check_series(S, **options)
    if name not in FINITE_CHECKS:
        raise UsageError(f"unknown check {name!r}")
    if not S.carrier.is_finite:
        raise UsageError(f"check {name!r} needs a finite carrier chain:<m>")
    return FINITE_CHECKS[name](S, **options)
