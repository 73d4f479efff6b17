"""Linearly ordered point universes.

Points are bare integer coordinates. A carrier is either a finite chain
``{0, ..., m-1}`` or the whole (64-bit) integer line.
"""

from __future__ import annotations

import enum
import itertools
import re
from dataclasses import dataclass
from typing import Iterator, Optional, Tuple

from .errors import ParseError, UsageError

INT64_MIN = -(2**63)
INT64_MAX = 2**63 - 1

Window = Tuple[int, int]


class Ordering(enum.IntEnum):
    LT = -1
    EQ = 0
    GT = 1


@dataclass(frozen=True)
class Carrier:
    """A finite chain of ``size`` points, or the integer line when ``size`` is None."""

    size: Optional[int] = None

    def __post_init__(self):
        if self.size is not None and self.size < 1:
            raise UsageError(f"finite chain needs size >= 1, got {self.size}")

    @classmethod
    def chain(cls, m: int) -> "Carrier":
        return cls(m)

    @classmethod
    def integers(cls) -> "Carrier":
        return cls(None)

    @property
    def is_finite(self) -> bool:
        return self.size is not None

    @property
    def kind(self) -> str:
        return "FiniteChain" if self.is_finite else "IntegerLine"

    def __contains__(self, x) -> bool:
        if isinstance(x, bool) or not isinstance(x, int):
            return False
        if self.size is None:
            return INT64_MIN <= x <= INT64_MAX
        return 0 <= x < self.size

    def points(self) -> range:
        if self.size is None:
            raise UsageError("the integer line has no finite point list")
        return range(self.size)

    def cmp(self, a: int, b: int) -> Ordering:
        if a not in self or b not in self:
            raise UsageError(f"points {a!r}, {b!r} do not both belong to {self}")
        return Ordering((a > b) - (a < b))

    def k_subsets(self, k: int, window: Optional[Window] = None) -> Iterator[Tuple[int, ...]]:
        """Yield every k-subset of ``window`` as a sorted tuple, lexicographically.

        ``window`` is an inclusive ``(lo, hi)`` pair; it defaults to the whole
        chain and is mandatory on the integer line.
        """
        if k < 0:
            raise UsageError(f"subset size must be non-negative, got {k}")
        lo, hi = self._resolve_window(window)
        return itertools.combinations(range(lo, hi + 1), k)

    def _resolve_window(self, window: Optional[Window]) -> Window:
        if window is None:
            if self.size is None:
                raise UsageError("a window is required on the integer line")
            return 0, self.size - 1
        lo, hi = window
        if lo not in self or hi not in self:
            raise UsageError(f"window {lo}..{hi} leaves {self}")
        return lo, hi

    def __str__(self) -> str:
        return f"chain:{self.size}" if self.is_finite else "int"


_CARRIER_RE = re.compile(r"chain:(\d+)|int")
_WINDOW_RE = re.compile(r"(-?\d+)\.\.(-?\d+)")


def parse_carrier(text: str) -> Carrier:
    m = _CARRIER_RE.fullmatch(text.strip())
    if not m:
        raise ParseError("expected 'chain:<m>' or 'int'", text, 0)
    if m.group(1) is None:
        return Carrier.integers()
    return Carrier.chain(int(m.group(1)))


def parse_window(text: str) -> Window:
    m = _WINDOW_RE.fullmatch(text.strip())
    if not m:
        raise ParseError("expected '<lo>..<hi>'", text, 0)
    lo, hi = int(m.group(1)), int(m.group(2))
    if lo > hi:
        raise UsageError(f"empty window {text!r}")
    return lo, hi
