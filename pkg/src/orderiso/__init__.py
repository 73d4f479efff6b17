"""Finite partial order isomorphisms of bounded rank and their semigroup structure."""

from .carrier import Carrier, Ordering, parse_carrier, parse_window
from .congruence import (
    QZERO,
    CollapseChain,
    Congruence,
    ReesQuotient,
    all_congruences,
    collapse_chain,
    is_rees,
    principal_congruence,
    rees_congruence,
    rees_quotient,
)
from .errors import OIError, OrderError, ParseError, RankError, SizeError, UnsupportedError, UsageError
from .pariso import (
    ZERO,
    PartialOrderIso,
    apply,
    compose,
    format_element,
    identity_on,
    inverse,
    is_idempotent,
    make_iso,
    natural_leq,
    parse_element,
    rank,
    restrict,
)
from .semigroup import (
    BoundedSemigroup,
    all_ideals,
    check_stability,
    eggbox,
    green,
    green_oracle,
    ideal_series,
)
from .series import SamplingConfig, omega_unstable_witness, rank_drop_law, tight_series_check

__version__ = "0.1.0"
