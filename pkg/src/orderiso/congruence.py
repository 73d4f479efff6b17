"""Congruences on an enumerated bounded semigroup.

A congruence is stored as a canonical label vector over element indices
(``labels[i]`` is the smallest index in i's block), so equal partitions
compare and hash equal. Closure runs on a disjoint-set forest over the
Cayley table.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Iterable, List, Optional, Sequence, Tuple

from .errors import UsageError
from .pariso import (
    ZERO,
    PartialOrderIso,
    compose,
    format_element,
    identity_on,
    inverse,
    is_idempotent,
    make_iso,
    natural_leq,
)
from .semigroup import BoundedSemigroup, run_partitioned


class CongruenceError(UsageError):
    """A partition failed the equivalence or compatibility check."""


class DisjointSet:
    def __init__(self, n: int):
        self.parent = list(range(n))
        self.count = n

    def find(self, x: int) -> int:
        parent = self.parent
        root = x
        while parent[root] != root:
            root = parent[root]
        while parent[x] != root:
            parent[x], x = root, parent[x]
        return root

    def union(self, x: int, y: int) -> bool:
        rx, ry = self.find(x), self.find(y)
        if rx == ry:
            return False
        # smaller index becomes the root: labels come out canonical for free
        if rx < ry:
            self.parent[ry] = rx
        else:
            self.parent[rx] = ry
        self.count -= 1
        return True

    def labels(self) -> Tuple[int, ...]:
        return tuple(self.find(i) for i in range(len(self.parent)))


def _labels_from_blocks(n: int, blocks: Iterable[Iterable[int]]) -> Tuple[int, ...]:
    labels = [-1] * n
    for block in blocks:
        block = sorted(block)
        if not block:
            raise CongruenceError("empty block")
        for i in block:
            if not 0 <= i < n:
                raise CongruenceError(f"index {i} out of range")
            if labels[i] != -1:
                raise CongruenceError(f"index {i} occurs in two blocks")
            labels[i] = block[0]
    if -1 in labels:
        raise CongruenceError("blocks do not cover the semigroup")
    return tuple(labels)


def compatibility_failures(S: BoundedSemigroup, labels: Sequence[int], limit: int = 1) -> List[tuple]:
    """Pairs (x, y, c, side) breaking compatibility, checked against each block's representative."""
    t = S.table
    n = len(t)
    bad = []
    for y in range(n):
        x = labels[y]
        if x == y:
            continue
        row_x, row_y = t[x], t[y]
        for c in range(n):
            if labels[row_x[c]] != labels[row_y[c]]:
                bad.append((x, y, c, "right"))
            elif labels[t[c][x]] != labels[t[c][y]]:
                bad.append((x, y, c, "left"))
            if len(bad) >= limit:
                return bad
    return bad


class Congruence:
    """A compatible partition of ``S``'s elements."""

    def __init__(self, S: BoundedSemigroup, labels: Sequence[int], validate: bool = True):
        self.S = S
        labels = tuple(labels)
        if len(labels) != len(S):
            raise CongruenceError(f"expected {len(S)} labels, got {len(labels)}")
        if validate:
            # re-canonicalize and check compatibility
            groups = {}
            for i, lab in enumerate(labels):
                groups.setdefault(lab, []).append(i)
            labels = _labels_from_blocks(len(S), groups.values())
            bad = compatibility_failures(S, labels)
            if bad:
                x, y, c, side = bad[0]
                els = S.elements
                raise CongruenceError(
                    f"not compatible: {format_element(els[x])} ~ {format_element(els[y])} "
                    f"but multiplying on the {side} by {format_element(els[c])} separates them"
                )
        self.labels = labels

    @classmethod
    def from_blocks(cls, S: BoundedSemigroup, blocks: Iterable[Iterable[PartialOrderIso]]) -> "Congruence":
        idx = S.index
        return cls(S, _labels_from_blocks(len(S), ([idx[a] for a in b] for b in blocks)))

    def __eq__(self, other):
        if not isinstance(other, Congruence):
            return NotImplemented
        return self.S is other.S and self.labels == other.labels

    def __hash__(self):
        return hash(self.labels)

    def __le__(self, other: "Congruence") -> bool:
        return all(other.labels[i] == other.labels[lab] for i, lab in enumerate(self.labels))

    @property
    def num_blocks(self) -> int:
        return sum(1 for i, lab in enumerate(self.labels) if i == lab)

    def block_indices(self) -> List[List[int]]:
        groups = {}
        for i, lab in enumerate(self.labels):
            groups.setdefault(lab, []).append(i)
        return [groups[k] for k in sorted(groups)]

    def blocks(self) -> List[List[PartialOrderIso]]:
        els = self.S.elements
        return [[els[i] for i in b] for b in self.block_indices()]

    def related(self, a: PartialOrderIso, b: PartialOrderIso) -> bool:
        idx = self.S.index
        return self.labels[idx[a]] == self.labels[idx[b]]

    def block_of(self, a: PartialOrderIso) -> List[PartialOrderIso]:
        lab = self.labels[self.S.index[a]]
        els = self.S.elements
        return [els[i] for i, x in enumerate(self.labels) if x == lab]

    def block_sizes(self) -> List[int]:
        return sorted((len(b) for b in self.block_indices()), reverse=True)

    def join(self, other: "Congruence") -> "Congruence":
        uf = DisjointSet(len(self.labels))
        pending = []
        for labels in (self.labels, other.labels):
            for i, lab in enumerate(labels):
                if uf.union(lab, i):
                    pending.append((lab, i))
        _close(self.S, uf, pending)
        return Congruence(self.S, uf.labels(), validate=False)

    def to_json(self) -> dict:
        return {
            "blocks": [[format_element(a) for a in b] for b in self.blocks()],
            "is_rees": is_rees(self.S, self),
        }

    def __repr__(self):
        return f"Congruence({self.S!r}, blocks={self.block_sizes()})"


def _close(S: BoundedSemigroup, uf: DisjointSet, pending: List[Tuple[int, int]]) -> None:
    """Saturate ``uf`` under left and right multiplication.

    Only merged pairs are queued: the relation they generate is the
    partition, so compatibility on them gives compatibility everywhere.
    """
    t = S.table
    cols = _columns(S)
    union = uf.union
    while pending and uf.count > 1:
        x, y = pending.pop()
        for u, v in zip(t[x], t[y]):
            if u != v and union(u, v):
                pending.append((u, v))
        for u, v in zip(cols[x], cols[y]):
            if u != v and union(u, v):
                pending.append((u, v))


def _columns(S: BoundedSemigroup) -> List[List[int]]:
    cols = S.__dict__.get("_columns")
    if cols is None:
        cols = [list(c) for c in zip(*S.table)]
        S.__dict__["_columns"] = cols
    return cols


def diagonal(S: BoundedSemigroup) -> Congruence:
    return Congruence(S, range(len(S)), validate=False)


def rees_congruence(S: BoundedSemigroup, k: int) -> Congruence:
    """Collapse the ideal of elements of rank <= k; everything else stays a singleton."""
    if not 0 <= k <= S.max_rank:
        raise UsageError(f"rank threshold {k} outside 0..{S.max_rank}")
    z = S.zero_index
    labels = [z if r <= k else i for i, r in enumerate(S.ranks)]
    return Congruence(S, labels, validate=False)


def principal_congruence(S: BoundedSemigroup, a: PartialOrderIso, b: PartialOrderIso) -> Congruence:
    """Smallest congruence containing ``(a, b)``, by pair-closure to a fixpoint."""
    idx = S.index
    return _principal(S, idx[a], idx[b])


def _principal(S: BoundedSemigroup, i: int, j: int) -> Congruence:
    uf = DisjointSet(len(S))
    if uf.union(i, j):
        _close(S, uf, [(i, j)])
    return Congruence(S, uf.labels(), validate=False)


def all_principal_congruences(S: BoundedSemigroup, threads: int = 1) -> List[Congruence]:
    n = len(S)
    S.table, _columns(S)  # build shared tables before any worker starts

    def scan(rows):
        return [_principal(S, i, j).labels for i in rows for j in range(i + 1, n)]

    seen = {tuple(range(n))}
    out = [diagonal(S)]
    for labels in run_partitioned(scan, n, threads):
        if labels not in seen:
            seen.add(labels)
            out.append(Congruence(S, labels, validate=False))
    return out


def all_congruences(S: BoundedSemigroup, threads: int = 1) -> List[Congruence]:
    """The whole congruence lattice: principal congruences, closed under joins.

    Every congruence is the join of the principal congruences below it, so
    join-closure of the principal ones is complete. Sorted finest first.
    """
    found = all_principal_congruences(S, threads)
    seen = set(found)
    frontier = list(found)
    while frontier:
        new = []
        for c in frontier:
            for d in list(seen):
                j = c.join(d)
                if j not in seen:
                    seen.add(j)
                    new.append(j)
        frontier = new
    return sorted(seen, key=lambda c: (-c.num_blocks, c.labels))


def is_rees(S: BoundedSemigroup, C: Congruence) -> Optional[int]:
    """Return k when ``C`` equals the Rees congruence of the ideal ``I_k``, else None."""
    labels = C.labels
    zlab = labels[S.zero_index]
    ranks = S.ranks
    zero_block = [i for i, lab in enumerate(labels) if lab == zlab]
    k = max(ranks[i] for i in zero_block)
    for i, lab in enumerate(labels):
        if ranks[i] <= k:
            if lab != zlab:
                return None
        elif lab != i:
            return None
    return k


def is_compatible_exhaustive(C: Congruence) -> bool:
    """Per related pair, per multiplier check; independent of block representatives."""
    S = C.S
    t = S.table
    labels = C.labels
    n = len(t)
    for x in range(n):
        for y in range(x + 1, n):
            if labels[x] != labels[y]:
                continue
            for c in range(n):
                if labels[t[c][x]] != labels[t[c][y]] or labels[t[x][c]] != labels[t[y][c]]:
                    return False
    return True


# -- collapse chain --------------------------------------------------------

@dataclass
class CollapseChain:
    """Explicit witness that a pair of comparable idempotents collapses to zero.

    ``start`` is the idempotent the iteration begins from: ``beta`` itself
    when its rank is one less than ``alpha``'s, otherwise the identity on
    ``dom alpha`` minus one point outside ``dom beta``. ``steps`` holds
    ``(iota_m, beta_{m+1})`` for m = 1, 2, ...
    """

    alpha: PartialOrderIso
    beta: PartialOrderIso
    start: PartialOrderIso
    steps: List[Tuple[PartialOrderIso, PartialOrderIso]] = field(default_factory=list)

    def __len__(self):
        return len(self.steps)

    @property
    def final(self) -> PartialOrderIso:
        return self.steps[-1][1] if self.steps else self.start

    def betas(self) -> List[PartialOrderIso]:
        """``[beta_0 = alpha, beta_1 = start, beta_2, ...]``."""
        return [self.alpha, self.start] + [b for _, b in self.steps]

    def violations(self) -> List[str]:
        out = []
        k = self.alpha.rank
        if not (natural_leq(self.beta, self.start) and natural_leq(self.start, self.alpha)):
            out.append("start is not between beta and alpha")
        if self.start.rank not in (0, k - 1):
            out.append(f"start has rank {self.start.rank}, expected {k - 1} or 0")
        betas = self.betas()
        for m, (iota, nxt) in enumerate(self.steps, start=1):
            prev, cur = betas[m - 1], betas[m]
            inv = inverse(iota)
            conj_cur = compose(compose(iota, cur), inv)
            if compose(compose(iota, prev), inv) != cur:
                out.append(f"step {m}: conjugating b_(m-1) by iota does not give b_m")
            if conj_cur == cur:
                out.append(f"step {m}: conjugating b_m by iota leaves it fixed")
            if nxt != conj_cur or not is_idempotent(nxt):
                out.append(f"step {m}: b_(m+1) is not the idempotent iota b_m iota^-1")
            if not natural_leq(nxt, cur):
                out.append(f"step {m}: b_(m+1) not below b_m")
            if nxt.rank != k - m - 1:
                out.append(f"step {m}: rank {nxt.rank}, expected {k - m - 1}")
        if not self.final.is_zero:
            out.append("chain does not end at zero")
        return out

    def to_json(self) -> dict:
        return {
            "alpha": format_element(self.alpha),
            "beta": format_element(self.beta),
            "start": format_element(self.start),
            "steps": [{"iota": format_element(i), "beta": format_element(b)} for i, b in self.steps],
        }


def collapse_chain(alpha: PartialOrderIso, beta: PartialOrderIso, carrier=None) -> CollapseChain:
    """Build the conjugation chain that walks ``beta`` down to zero inside alpha's congruence class.

    Each step conjugates the current idempotent by the order isomorphism
    from its domain onto the previous domain minus the current maximum.
    """
    if not (is_idempotent(alpha) and is_idempotent(beta)):
        raise UsageError("collapse_chain needs two idempotents")
    if beta == alpha or not natural_leq(beta, alpha):
        raise UsageError("beta must lie strictly below alpha")
    if carrier is not None:
        for x in alpha.dom:
            if x not in carrier:
                raise UsageError(f"point {x} is not in {carrier}")
    k = alpha.rank
    if beta.is_zero:
        return CollapseChain(alpha, beta, beta)
    start = beta
    if beta.rank < k - 1:
        missing = set(alpha.dom) - set(beta.dom)
        start = identity_on(set(alpha.dom) - {max(missing)})
    chain = CollapseChain(alpha, beta, start)
    prev, cur = alpha, start
    while not cur.is_zero:
        y = cur.dom[-1]
        target = [x for x in prev.dom if x != y]
        iota = make_iso(cur.dom, target)
        nxt = compose(compose(iota, cur), inverse(iota))
        chain.steps.append((iota, nxt))
        prev, cur = cur, nxt
    return chain


def random_idempotent_pair(rng: random.Random, window: Tuple[int, int], max_rank: int):
    """Draw idempotents ``beta < alpha`` with ``1 <= rank alpha <= max_rank`` inside ``window``."""
    lo, hi = window
    k = rng.randint(1, max_rank)
    dom = rng.sample(range(lo, hi + 1), k)
    p = rng.randint(0, k - 1)
    return identity_on(dom), identity_on(rng.sample(dom, p))


# -- Rees quotients --------------------------------------------------------

class _QuotientZero:
    __slots__ = ()

    def __repr__(self):
        return "QZERO"

    def __str__(self):
        return "0"

    def __reduce__(self):
        return "QZERO"


QZERO = _QuotientZero()


class ReesQuotient:
    """``S / I_k``: the zero plus every element of rank above k.

    Products are composed in ``S`` and collapsed to the zero when the result
    falls into ``I_k``. Works lazily over the integer line.
    """

    def __init__(self, S: BoundedSemigroup, k: int):
        if not 0 <= k <= S.max_rank:
            raise UsageError(f"rank threshold {k} outside 0..{S.max_rank}")
        self.S = S
        self.k = k
        self.zero = QZERO

    def __repr__(self):
        return f"ReesQuotient({self.S!r}, k={self.k})"

    def project(self, alpha: PartialOrderIso):
        return QZERO if alpha.rank <= self.k else alpha

    def lift(self, a) -> PartialOrderIso:
        """The unique preimage of a nonzero element."""
        if a is QZERO:
            raise UsageError("the quotient zero has no unique preimage")
        return a

    def multiply(self, a, b):
        if a is QZERO or b is QZERO:
            return QZERO
        return self.project(compose(a, b))

    def __contains__(self, a) -> bool:
        return a is QZERO or (a in self.S and a.rank > self.k)

    @property
    def elements(self) -> list:
        return [QZERO] + [a for a in self.S.elements if a.rank > self.k]

    def __len__(self):
        return len(self.elements)

    def layer(self, a) -> int:
        """Rank layer of a quotient element; the zero sits in layer ``k``."""
        return self.k if a is QZERO else a.rank

    def homomorphism_failures(self, pairs=None, limit: int = 10) -> List[Tuple[str, str]]:
        """Pairs where ``h(ab) != h(a)h(b)``; exhaustive over ``S`` unless pairs are given."""
        if pairs is None:
            els = self.S.elements
            pairs = ((a, b) for a in els for b in els)
        bad = []
        for a, b in pairs:
            if self.project(compose(a, b)) != self.multiply(self.project(a), self.project(b)):
                bad.append((format_element(a), format_element(b)))
                if len(bad) >= limit:
                    break
        return bad

    def format(self, a) -> str:
        return "0" if a is QZERO else format_element(a)


def rees_quotient(S: BoundedSemigroup, k: int) -> ReesQuotient:
    return ReesQuotient(S, k)
