"""Rank-layer instability witnesses and tight ideal series checks.

For two distinct elements of the same rank k, the unique element with
``dom = ran alpha`` and ``ran = dom alpha`` can be at most one of them, so
the other multiplies ``alpha`` out of its rank layer on at least one side.
That finite fact is what the sampled checks below exercise.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

from .carrier import Window
from .congruence import QZERO, ReesQuotient
from .errors import UsageError
from .pariso import PartialOrderIso, compose, format_element, make_iso
from .semigroup import BoundedSemigroup

DEFAULT_WINDOW = (-50, 50)


def rank_drop_law(alpha: PartialOrderIso, beta: PartialOrderIso) -> bool:
    """``dom beta != ran alpha`` implies ``rank(alpha beta) < rank alpha``."""
    k = alpha.rank
    if beta.rank != k or k < 1:
        raise UsageError(f"need equal positive ranks, got {alpha.rank} and {beta.rank}")
    if beta.dom == alpha.ran:
        return True
    return compose(alpha, beta).rank < k


@dataclass
class WitnessReport:
    alpha: PartialOrderIso
    probes: List[PartialOrderIso]
    witness: PartialOrderIso
    side: str  # "ab" (alpha*witness) or "ba" (witness*alpha)
    product: PartialOrderIso

    @property
    def product_rank(self) -> int:
        return self.product.rank

    def to_json(self) -> dict:
        return {
            "alpha": format_element(self.alpha),
            "probes": [format_element(b) for b in self.probes],
            "witness": format_element(self.witness),
            "side": self.side,
            "product": format_element(self.product),
            "product_rank": self.product.rank,
        }


def omega_unstable_witness(alpha: PartialOrderIso, probes: Sequence[PartialOrderIso]) -> WitnessReport:
    """Find a probe whose product with ``alpha`` (either side) drops below alpha's rank."""
    probes = list(probes)
    k = alpha.rank
    if k < 1:
        raise UsageError("alpha must have positive rank")
    if len(probes) < 2:
        raise UsageError("need at least two probes; a lone inverse has no witness")
    if len(set(probes)) != len(probes):
        raise UsageError("probes must be distinct")
    if any(b.rank != k for b in probes):
        raise UsageError(f"every probe must have rank {k}")
    for b in probes:
        ab = compose(alpha, b)
        if ab.rank < k:
            return WitnessReport(alpha, probes, b, "ab", ab)
        ba = compose(b, alpha)
        if ba.rank < k:
            return WitnessReport(alpha, probes, b, "ba", ba)
    # unreachable for valid input: at most one probe is alpha's inverse
    raise AssertionError(f"no witness for {format_element(alpha)} among {len(probes)} probes")


def random_element(rng: random.Random, k: int, window: Window) -> PartialOrderIso:
    lo, hi = window
    pts = range(lo, hi + 1)
    return make_iso(sorted(rng.sample(pts, k)), sorted(rng.sample(pts, k)))


def random_probe_set(rng: random.Random, k: int, window: Window, size: int) -> List[PartialOrderIso]:
    out = []
    seen = set()
    while len(out) < size:
        b = random_element(rng, k, window)
        if b not in seen:
            seen.add(b)
            out.append(b)
    return out


@dataclass
class SamplingConfig:
    samples: int = 200
    seed: int = 0
    window: Window = DEFAULT_WINDOW
    min_probes: int = 2
    max_probes: int = 10

    def validate(self):
        lo, hi = self.window
        if self.samples < 1:
            raise UsageError("sampling needs at least one sample per layer")
        if not 2 <= self.min_probes <= self.max_probes:
            raise UsageError("probe set sizes must satisfy 2 <= min <= max")
        if hi < lo:
            raise UsageError("empty sampling window")


@dataclass
class LayerResult:
    layer: int
    samples: int
    witness_found: int
    seed: int

    @property
    def passed(self) -> bool:
        return self.witness_found == self.samples

    def to_json(self) -> dict:
        return {"layer": self.layer, "samples": self.samples, "witness_found": self.witness_found, "seed": self.seed}


@dataclass
class SeriesReport:
    base_finite: bool
    layers: List[LayerResult]
    seed: int

    @property
    def passed(self) -> bool:
        return self.base_finite and all(layer.passed for layer in self.layers)


def layer_seed(seed: int, layer: int) -> int:
    """Per-layer seed, derived from the master seed so layers are independent shards."""
    return random.Random(f"{seed}:{layer}").getrandbits(64)


def tight_series_check(target, config: Optional[SamplingConfig] = None) -> SeriesReport:
    """Sample each rank layer of ``target`` and confirm instability witnesses exist.

    ``target`` is a :class:`BoundedSemigroup` or a :class:`ReesQuotient` of
    one. For a quotient by ``I_k`` the base ideal is the quotient zero and
    the layers are ranks ``k+1..n``; quotient elements above the zero are
    lifted to their unique preimages, and each witness is re-checked by
    multiplying in the quotient.
    """
    if config is None:
        raise UsageError("tight_series_check needs a sampling configuration")
    config.validate()
    if isinstance(target, ReesQuotient):
        S, quotient = target.S, target
        first = target.k + 1
    elif isinstance(target, BoundedSemigroup):
        S, quotient = target, None
        first = 1
    else:
        raise UsageError(f"cannot check {target!r}")
    window = config.window
    top = S.top_rank
    if S.carrier.is_finite:
        lo, hi = window
        window = (max(lo, 0), min(hi, S.carrier.size - 1))
    width = window[1] - window[0] + 1
    # the base of the series: {0} in S, or the zero of the quotient
    base_finite = True
    layers = [LayerResult(first - 1, 0, 0, config.seed)]
    for k in range(first, top + 1):
        rng = random.Random(layer_seed(config.seed, k))
        found = 0
        if k > width:
            raise UsageError(f"window too narrow for rank {k}")
        for _ in range(config.samples):
            size = rng.randint(config.min_probes, config.max_probes)
            alpha = random_element(rng, k, window)
            probes = random_probe_set(rng, k, window, size)
            if quotient is None:
                report = omega_unstable_witness(alpha, probes)
                ok = report.product.rank < k
            else:
                a = quotient.project(alpha)
                images = [quotient.project(b) for b in probes]
                report = omega_unstable_witness(quotient.lift(a), [quotient.lift(b) for b in images])
                w = quotient.project(report.witness)
                prod = quotient.multiply(a, w) if report.side == "ab" else quotient.multiply(w, a)
                ok = prod is QZERO or prod.rank < k
            found += ok
        layers.append(LayerResult(k, config.samples, found, config.seed))
    return SeriesReport(base_finite, layers, config.seed)


def layer_pair_failures(S: BoundedSemigroup, k: int) -> List[Tuple[str, str, str]]:
    """Exhaustive: every rank-k alpha and every 2-element probe set from its D-class."""
    layer = [a for a in S.elements if a.rank == k]
    bad = []
    for alpha in layer:
        for i, b1 in enumerate(layer):
            for b2 in layer[i + 1 :]:
                try:
                    omega_unstable_witness(alpha, [b1, b2])
                except AssertionError:
                    bad.append((format_element(alpha), format_element(b1), format_element(b2)))
    return bad
