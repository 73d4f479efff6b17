"""The semigroup of partial order isomorphisms of rank at most n.

Over a finite chain the semigroup is materialized (elements, Cayley table,
principal ideals), which lets Green's relations, ideals and stability be
checked from first principles next to their closed-form descriptions.
"""

from __future__ import annotations

import itertools
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from functools import cached_property
from typing import Dict, FrozenSet, List, Optional, Sequence, Tuple

from .carrier import Carrier
from .errors import SizeError, UnsupportedError, UsageError
from .pariso import ZERO, PartialOrderIso, compose, format_element

DEFAULT_CAP = 20_000
RELATIONS = ("R", "L", "H", "D", "J")


def default_cap() -> int:
    env = os.environ.get("OI_CAP")
    if env:
        try:
            return int(env)
        except ValueError:
            raise UsageError(f"OI_CAP must be an integer, got {env!r}") from None
    return DEFAULT_CAP


def expected_size(m: int, n: int) -> int:
    return sum(math.comb(m, k) ** 2 for k in range(min(n, m) + 1))


def _chunks(n: int, parts: int) -> List[range]:
    parts = max(1, min(parts, n or 1))
    step = -(-n // parts)
    return [range(i, min(i + step, n)) for i in range(0, n, step)]


def run_partitioned(fn, n: int, threads: int = 1) -> list:
    """Apply ``fn`` to row ranges covering ``0..n-1`` and concatenate results in order.

    The output does not depend on ``threads``.
    """
    chunks = _chunks(n, threads)
    if threads <= 1 or len(chunks) == 1:
        return [x for c in chunks for x in fn(c)]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        parts = list(pool.map(fn, chunks))
    return [x for p in parts for x in p]


class BoundedSemigroup:
    """Handle for the semigroup of order isomorphisms of rank <= ``max_rank``."""

    def __init__(self, carrier: Carrier, max_rank: int, cap: Optional[int] = None):
        if max_rank < 1:
            raise UsageError(f"max rank must be positive, got {max_rank}")
        self.carrier = carrier
        self.max_rank = max_rank
        self.cap = default_cap() if cap is None else cap

    def __repr__(self):
        return f"BoundedSemigroup({self.carrier}, max_rank={self.max_rank})"

    @property
    def top_rank(self) -> int:
        """Largest rank actually attained (the bound is capped by the chain size)."""
        if self.carrier.is_finite:
            return min(self.max_rank, self.carrier.size)
        return self.max_rank

    def __contains__(self, alpha) -> bool:
        return (
            isinstance(alpha, PartialOrderIso)
            and alpha.rank <= self.max_rank
            and all(x in self.carrier for x in alpha.dom + alpha.ran)
        )

    def _require_finite(self):
        if not self.carrier.is_finite:
            raise UnsupportedError(f"{self.carrier} cannot be enumerated")

    @property
    def size(self) -> int:
        self._require_finite()
        return expected_size(self.carrier.size, self.max_rank)

    # -- materialized structure ---------------------------------------------

    @cached_property
    def elements(self) -> List[PartialOrderIso]:
        self._require_finite()
        if self.size > self.cap:
            raise SizeError(f"{self} has {self.size} elements, above the cap of {self.cap}")
        out = []
        for k in range(self.top_rank + 1):
            subsets = list(self.carrier.k_subsets(k))
            for d in subsets:
                for r in subsets:
                    out.append(PartialOrderIso(d, r) if k else ZERO)
        return out

    def __len__(self):
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    @cached_property
    def index(self) -> Dict[PartialOrderIso, int]:
        return {a: i for i, a in enumerate(self.elements)}

    @cached_property
    def table(self) -> List[List[int]]:
        """Cayley table on element indices: ``table[i][j]`` is the index of ``e_i e_j``."""
        els, idx = self.elements, self.index
        return [[idx[compose(a, b)] for b in els] for a in els]

    @cached_property
    def zero_index(self) -> int:
        return self.index[ZERO]

    @cached_property
    def ranks(self) -> List[int]:
        return [a.rank for a in self.elements]

    @cached_property
    def oracle(self) -> "PrincipalIdeals":
        return PrincipalIdeals(self)

    def ideal_members(self, k: int) -> List[int]:
        """Indices of the ideal ``I_k`` (all elements of rank <= k)."""
        return [i for i, r in enumerate(self.ranks) if r <= k]

    def elements_of(self, bits: int) -> FrozenSet[PartialOrderIso]:
        els = self.elements
        return frozenset(els[i] for i in _iter_bits(bits))


def _iter_bits(bits: int):
    i = 0
    while bits:
        if bits & 1:
            yield i
        bits >>= 1
        i += 1


def _bitset(indices) -> int:
    out = 0
    for i in indices:
        out |= 1 << i
    return out


# -- Green's relations -----------------------------------------------------

def green(S: Optional[BoundedSemigroup], alpha: PartialOrderIso, beta: PartialOrderIso, relation: str) -> bool:
    """Green's relations by their closed forms: domains, ranges, equality, rank."""
    if relation == "R":
        return alpha.dom == beta.dom
    if relation == "L":
        return alpha.ran == beta.ran
    if relation == "H":
        return alpha == beta
    if relation in ("D", "J"):
        return alpha.rank == beta.rank
    raise UsageError(f"unknown Green relation {relation!r}")


class PrincipalIdeals:
    """Principal right, left and two-sided ideals of an enumerated semigroup, as bitsets.

    These are computed from the Cayley table alone; nothing here uses the
    dom/ran description of Green's relations.
    """

    def __init__(self, S: BoundedSemigroup):
        self.S = S
        t = S.table
        n = len(t)
        self.right = [_bitset(t[a]) | (1 << a) for a in range(n)]
        self.left = [_bitset(t[s][a] for s in range(n)) | (1 << a) for a in range(n)]
        two_sided = []
        for a in range(n):
            acc = 0
            for x in _iter_bits(self.left[a]):
                acc |= self.right[x]
            two_sided.append(acc)
        self.two_sided = two_sided
        self.r_class = _class_ids(self.right)
        self.l_class = _class_ids(self.left)
        self.j_class = _class_ids(self.two_sided)
        self._lr_pairs = {(self.l_class[g], self.r_class[g]) for g in range(n)}

    def related(self, a: int, b: int, relation: str) -> bool:
        if relation == "R":
            return self.r_class[a] == self.r_class[b]
        if relation == "L":
            return self.l_class[a] == self.l_class[b]
        if relation == "H":
            return self.r_class[a] == self.r_class[b] and self.l_class[a] == self.l_class[b]
        if relation == "D":
            # a L g and g R b for some g
            return (self.l_class[a], self.r_class[b]) in self._lr_pairs
        if relation == "J":
            return self.j_class[a] == self.j_class[b]
        raise UsageError(f"unknown Green relation {relation!r}")

    def d_related_rl(self, a: int, b: int) -> bool:
        """``a R g`` and ``g L b`` for some g (the other composite)."""
        return any(
            self.r_class[a] == self.r_class[g] and self.l_class[g] == self.l_class[b]
            for g in range(len(self.right))
        )

    def classes(self, relation: str) -> List[List[int]]:
        ids = {"R": self.r_class, "L": self.l_class, "J": self.j_class}[relation]
        groups: Dict[int, List[int]] = {}
        for i, c in enumerate(ids):
            groups.setdefault(c, []).append(i)
        return list(groups.values())


def _class_ids(ideals: Sequence[int]) -> List[int]:
    seen: Dict[int, int] = {}
    return [seen.setdefault(x, len(seen)) for x in ideals]


def green_oracle(S: BoundedSemigroup, alpha: PartialOrderIso, beta: PartialOrderIso, relation: str) -> bool:
    """Green's relations from their definitions, via materialized principal ideals."""
    idx = S.index
    if alpha not in idx or beta not in idx:
        raise UsageError("both elements must belong to the semigroup")
    return S.oracle.related(idx[alpha], idx[beta], relation)


@dataclass
class GreenComparison:
    pairs: int = 0
    mismatches: List[Tuple[str, str, str]] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.mismatches


def compare_green(S: BoundedSemigroup, relations=RELATIONS, threads: int = 1) -> GreenComparison:
    """Check ``green`` against ``green_oracle`` on every ordered pair of ``S``."""
    els = S.elements
    oracle = S.oracle
    n = len(els)

    def scan(rows):
        bad = []
        for i in rows:
            a = els[i]
            for j in range(n):
                b = els[j]
                for rel in relations:
                    if green(S, a, b, rel) != oracle.related(i, j, rel):
                        bad.append((format_element(a), format_element(b), rel))
        return bad

    mismatches = run_partitioned(scan, n, threads)
    return GreenComparison(pairs=n * n, mismatches=mismatches)


# -- egg-box ---------------------------------------------------------------

@dataclass
class DClassGrid:
    rank: int
    rows: List[Tuple[int, ...]]
    cols: List[Tuple[int, ...]]
    cells: List[List[List[PartialOrderIso]]]

    @property
    def shape(self) -> Tuple[int, int]:
        return len(self.rows), len(self.cols)

    def all_singletons(self) -> bool:
        return all(len(cell) == 1 for row in self.cells for cell in row)

    def to_json(self) -> dict:
        return {"rank": self.rank, "rows": [list(r) for r in self.rows], "cols": [list(c) for c in self.cols]}


@dataclass
class EggBox:
    classes: List[DClassGrid]

    def __getitem__(self, k: int) -> DClassGrid:
        for grid in self.classes:
            if grid.rank == k:
                return grid
        raise KeyError(k)


def eggbox(S: BoundedSemigroup) -> EggBox:
    """Arrange each D-class (fixed rank) into R-rows (domain) by L-columns (range)."""
    by_rank: Dict[int, List[PartialOrderIso]] = {}
    for a in S.elements:
        by_rank.setdefault(a.rank, []).append(a)
    grids = []
    for k in sorted(by_rank):
        members = by_rank[k]
        rows = sorted({a.dom for a in members})
        cols = sorted({a.ran for a in members})
        ri = {r: i for i, r in enumerate(rows)}
        ci = {c: i for i, c in enumerate(cols)}
        cells: List[List[List[PartialOrderIso]]] = [[[] for _ in cols] for _ in rows]
        for a in members:
            cells[ri[a.dom]][ci[a.ran]].append(a)
        grids.append(DClassGrid(k, rows, cols, cells))
    return EggBox(grids)


# -- ideals ----------------------------------------------------------------

def is_ideal_bits(S: BoundedSemigroup, bits: int) -> bool:
    """Brute-force two-sided ideal test on an index bitset."""
    if not bits:
        return False
    t = S.table
    n = len(t)
    for x in _iter_bits(bits):
        row = t[x]
        for s in range(n):
            if not (bits >> row[s]) & 1 or not (bits >> t[s][x]) & 1:
                return False
    return True


def is_ideal(S: BoundedSemigroup, subset) -> bool:
    idx = S.index
    return is_ideal_bits(S, _bitset(idx[a] for a in subset))


def _ideal_bitsets(S: BoundedSemigroup) -> List[int]:
    principal = sorted(set(S.oracle.two_sided))
    found = set(principal)
    frontier = list(principal)
    while frontier:
        new = []
        for a in frontier:
            for b in principal:
                u = a | b
                if u not in found:
                    found.add(u)
                    new.append(u)
        frontier = new
    return sorted(found, key=lambda b: (bin(b).count("1"), b))


def all_ideals(S: BoundedSemigroup) -> List[FrozenSet[PartialOrderIso]]:
    """Every nonempty two-sided ideal, smallest first.

    Candidates are unions of principal ideals (every ideal is one); each
    candidate is re-validated by the brute-force closure test.
    """
    out = []
    for bits in _ideal_bitsets(S):
        if not is_ideal_bits(S, bits):
            raise AssertionError("union of principal ideals failed the ideal test")
        out.append(S.elements_of(bits))
    return out


def ideals_by_class_search(S: BoundedSemigroup) -> List[FrozenSet[PartialOrderIso]]:
    """Exhaustive search over all unions of J-classes, keeping those that are ideals.

    Every ideal is a union of J-classes, so this search is complete.
    """
    classes = [_bitset(c) for c in S.oracle.classes("J")]
    if len(classes) > 20:
        raise SizeError(f"{len(classes)} J-classes is too many for exhaustive subset search")
    hits = []
    for mask in range(1, 1 << len(classes)):
        bits = 0
        for i, c in enumerate(classes):
            if (mask >> i) & 1:
                bits |= c
        if is_ideal_bits(S, bits):
            hits.append(bits)
    hits.sort(key=lambda b: (bin(b).count("1"), b))
    return [S.elements_of(b) for b in hits]


@dataclass
class IdealSeries:
    ideals: List[FrozenSet[PartialOrderIso]]

    def __len__(self):
        return len(self.ideals)

    def __getitem__(self, k):
        return self.ideals[k]

    def is_chain(self) -> bool:
        return all(a < b for a, b in zip(self.ideals, self.ideals[1:]))


def ideal_series(S: BoundedSemigroup) -> IdealSeries:
    """The rank filtration ``I_0 <= I_1 <= ... <= I_n'`` with ``I_k`` = rank <= k."""
    return IdealSeries([frozenset(a for a in S.elements if a.rank <= k) for k in range(S.top_rank + 1)])


# -- stability -------------------------------------------------------------

@dataclass
class StabilityReport:
    pairs: int = 0
    right_inclusions: int = 0
    left_inclusions: int = 0
    violations: List[dict] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.violations


def check_stability(S: BoundedSemigroup, threads: int = 1) -> StabilityReport:
    """Exhaustive stability check over all pairs.

    Right side: ``aS1 <= (ba)S1`` must force equality and ``a == ba``.
    Left side: ``S1a <= S1(ab)`` must force equality and ``a == ab``.
    """
    els = S.elements
    t = S.table
    right = S.oracle.right
    left = S.oracle.left
    n = len(els)

    def scan(rows):
        out = []
        for a in rows:
            ra, la = right[a], left[a]
            for b in range(n):
                ba = t[b][a]
                if ra & ~right[ba] == 0:
                    problems = []
                    if ra != right[ba]:
                        problems.append("right ideals differ")
                    if ba != a:
                        problems.append("alpha != beta*alpha")
                    out.append(("R", a, b, problems))
                ab = t[a][b]
                if la & ~left[ab] == 0:
                    problems = []
                    if la != left[ab]:
                        problems.append("left ideals differ")
                    if ab != a:
                        problems.append("alpha != alpha*beta")
                    out.append(("L", a, b, problems))
        return out

    report = StabilityReport(pairs=n * n)
    for side, a, b, problems in run_partitioned(scan, n, threads):
        if side == "R":
            report.right_inclusions += 1
        else:
            report.left_inclusions += 1
        if problems:
            report.violations.append(
                {"side": side, "alpha": format_element(els[a]), "beta": format_element(els[b]), "problems": problems}
            )
    return report
