"""Finite partial order isomorphisms of a linearly ordered set.

An element is stored canonically as two strictly increasing coordinate
tuples ``dom`` and ``ran`` of equal length; the i-th domain point maps to
the i-th range point. Every such pair determines exactly one order
isomorphism, so equality of elements is equality of the tuples.

Composition is left-to-right: ``compose(a, b)`` applies ``a`` first.
"""

from __future__ import annotations

import re
from typing import Iterable, Optional, Sequence, Tuple

from .errors import OrderError, ParseError, RankError


def _strictly_increasing(seq: Sequence[int]) -> bool:
    return all(a < b for a, b in zip(seq, seq[1:]))


class PartialOrderIso:
    __slots__ = ("dom", "ran", "_hash")

    def __init__(self, dom: Tuple[int, ...], ran: Tuple[int, ...]):
        # unchecked; use make_iso for untrusted input
        self.dom = dom
        self.ran = ran
        self._hash = hash((dom, ran))

    @property
    def rank(self) -> int:
        return len(self.dom)

    @property
    def is_zero(self) -> bool:
        return not self.dom

    def sort_key(self):
        return (len(self.dom), self.dom, self.ran)

    def __eq__(self, other):
        if not isinstance(other, PartialOrderIso):
            return NotImplemented
        return self.dom == other.dom and self.ran == other.ran

    def __hash__(self):
        return self._hash

    def __lt__(self, other):
        return self.sort_key() < other.sort_key()

    def __mul__(self, other):
        if not isinstance(other, PartialOrderIso):
            return NotImplemented
        return compose(self, other)

    def __iter__(self):
        return zip(self.dom, self.ran)

    def __call__(self, x: int) -> Optional[int]:
        return apply(self, x)

    def inverse(self) -> "PartialOrderIso":
        return inverse(self)

    def __repr__(self):
        return f"PartialOrderIso({list(self.dom)}, {list(self.ran)})"

    def __str__(self):
        return format_element(self)

    def to_json(self) -> dict:
        return {"dom": list(self.dom), "ran": list(self.ran)}


ZERO = PartialOrderIso((), ())


def make_iso(dom: Iterable[int], ran: Iterable[int]) -> PartialOrderIso:
    """Return the unique order isomorphism sending ``dom[i]`` to ``ran[i]``.

    Both sequences must already be strictly increasing; they are never
    sorted on the caller's behalf.
    """
    dom = tuple(int(x) for x in dom)
    ran = tuple(int(y) for y in ran)
    if len(dom) != len(ran):
        raise RankError(f"domain has {len(dom)} points but range has {len(ran)}")
    if not _strictly_increasing(dom):
        raise OrderError(f"domain {list(dom)} is not strictly increasing")
    if not _strictly_increasing(ran):
        raise OrderError(f"range {list(ran)} is not strictly increasing")
    if not dom:
        return ZERO
    return PartialOrderIso(dom, ran)


def from_pairs(pairs: Iterable[Tuple[int, int]]) -> PartialOrderIso:
    """Build an element from ``(x, y)`` pairs given in any order."""
    pairs = sorted(pairs)
    return make_iso([x for x, _ in pairs], [y for _, y in pairs])


def apply(alpha: PartialOrderIso, x: int) -> Optional[int]:
    dom = alpha.dom
    # bisect would do; ranks are tiny
    for i, d in enumerate(dom):
        if d == x:
            return alpha.ran[i]
        if d > x:
            break
    return None


def compose(alpha: PartialOrderIso, beta: PartialOrderIso) -> PartialOrderIso:
    """Product ``alpha beta``: first ``alpha``, then ``beta``."""
    ra, db = alpha.ran, beta.dom
    if not ra or not db:
        return ZERO
    da, rb = alpha.dom, beta.ran
    out_dom = []
    out_ran = []
    i = j = 0
    na, nb = len(ra), len(db)
    while i < na and j < nb:
        a, b = ra[i], db[j]
        if a == b:
            out_dom.append(da[i])
            out_ran.append(rb[j])
            i += 1
            j += 1
        elif a < b:
            i += 1
        else:
            j += 1
    if not out_dom:
        return ZERO
    return PartialOrderIso(tuple(out_dom), tuple(out_ran))


def compose_all(*elements: PartialOrderIso) -> PartialOrderIso:
    if not elements:
        raise RankError("compose_all needs at least one element")
    out = elements[0]
    for e in elements[1:]:
        out = compose(out, e)
    return out


def inverse(alpha: PartialOrderIso) -> PartialOrderIso:
    if alpha.is_zero:
        return ZERO
    return PartialOrderIso(alpha.ran, alpha.dom)


def rank(alpha: PartialOrderIso) -> int:
    return len(alpha.dom)


def is_idempotent(alpha: PartialOrderIso) -> bool:
    return alpha.dom == alpha.ran


def natural_leq(alpha: PartialOrderIso, beta: PartialOrderIso) -> bool:
    """Restriction order: ``alpha`` is ``beta`` cut down to ``dom alpha``."""
    images = dict(zip(beta.dom, beta.ran))
    return all(images.get(x) == y for x, y in zip(alpha.dom, alpha.ran))


def identity_on(points: Iterable[int]) -> PartialOrderIso:
    pts = tuple(sorted(set(int(p) for p in points)))
    if not pts:
        return ZERO
    return PartialOrderIso(pts, pts)


def restrict(alpha: PartialOrderIso, points: Iterable[int]) -> PartialOrderIso:
    keep = set(points)
    pairs = [(x, y) for x, y in zip(alpha.dom, alpha.ran) if x in keep]
    if not pairs:
        return ZERO
    return PartialOrderIso(tuple(x for x, _ in pairs), tuple(y for _, y in pairs))


# -- textual syntax -------------------------------------------------------

def format_element(alpha: PartialOrderIso) -> str:
    if alpha.is_zero:
        return "[]"
    return "[{}->{}]".format(",".join(map(str, alpha.dom)), ",".join(map(str, alpha.ran)))


_TOKEN_RE = re.compile(r"\s*(?:(-?\d+)|(->)|([\[\],])|(\S))")


def _tokenize(text: str):
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:  # trailing whitespace
            break
        num, arrow, punct, bad = m.groups()
        start = m.start(m.lastindex)
        if bad is not None:
            raise ParseError(f"unexpected character {bad!r}", text, start)
        if num is not None:
            yield ("int", int(num), start)
        elif arrow is not None:
            yield ("->", arrow, start)
        else:
            yield (punct, punct, start)
        pos = m.end()


def parse_element(text: str) -> PartialOrderIso:
    """Parse ``[x1,...,xk->y1,...,yk]``; the zero element is ``[]``."""
    tokens = list(_tokenize(text))
    tokens.append(("end", None, len(text)))
    i = 0

    def expect(kind):
        nonlocal i
        tok = tokens[i]
        if tok[0] != kind:
            what = "end of input" if tok[0] == "end" else repr(tok[1])
            raise ParseError(f"expected {kind!r}, found {what}", text, tok[2])
        i += 1
        return tok

    def int_list():
        nonlocal i
        out = [expect("int")[1]]
        while tokens[i][0] == ",":
            i += 1
            out.append(expect("int")[1])
        return out

    expect("[")
    if tokens[i][0] == "]":
        i += 1
        expect("end")
        return ZERO
    dom_pos = tokens[i][2]
    dom = int_list()
    expect("->")
    ran_pos = tokens[i][2]
    ran = int_list()
    expect("]")
    expect("end")
    if len(dom) != len(ran):
        raise ParseError(f"domain has {len(dom)} points but range has {len(ran)}", text, ran_pos)
    if not _strictly_increasing(dom):
        raise ParseError("domain is not strictly increasing", text, dom_pos)
    if not _strictly_increasing(ran):
        raise ParseError("range is not strictly increasing", text, ran_pos)
    return make_iso(dom, ran)


def element_from_json(obj) -> PartialOrderIso:
    return make_iso(obj["dom"], obj["ran"])
