"""Multi-access coded caching over subset-indexed caches.

Users are r-subsets of C caches; files split into binom(C, t) subfiles; one
XOR multicast per (t+r)-subset serves binom(t+r, r) users at once. The
package provides the constructive scheme (placement, delivery, decoding,
byte-level simulation), its exact closed-form metrics, analytic formulas of
seven comparison schemes, and a CLI (`macc`) for sweeps and verification.
"""

from .baselines import (
    BaselineEval,
    Scheme,
    Undefined,
    clwzc_rate,
    clwzc_subpacketization,
    crd_affine,
    hkd_rate,
    hkd_subpacketization,
    is_defined,
    is_prime_power,
    rk_lower_bound,
    rk_rate,
    spe_special_rate,
    spe_subpacketization,
    sr1_odd_branch,
    sr1_rate,
    sr1_rate_value,
    sr2_rate,
    sr2_subpacketization,
)
from .combinatorics import binom, enumerate_subsets, rank_subset, unrank_subset, validate_subset
from .harness import (
    ComparisonRow,
    SplitMix64,
    SweepSpec,
    evaluate_scheme,
    parse_fraction,
    render_decimal,
    render_fraction,
    run_sweep,
    scheme_dump,
)
from .metrics import RateMemoryPoint, SchemeReport, analyze, delivery_rate, rate_memory_curve
from .scheme import (
    CacheContent,
    DecodingError,
    DemandAssignment,
    DemandError,
    SchemeParams,
    SubfileId,
    Transmission,
    accessible_fraction,
    accessible_subfile_indices,
    build_placement,
    decode_user,
    generate_transmissions,
    simulate_end_to_end,
)

__version__ = "0.1.0"

__all__ = [
    "BaselineEval",
    "CacheContent",
    "ComparisonRow",
    "DecodingError",
    "DemandAssignment",
    "DemandError",
    "RateMemoryPoint",
    "Scheme",
    "SchemeParams",
    "SchemeReport",
    "SplitMix64",
    "SubfileId",
    "SweepSpec",
    "Transmission",
    "Undefined",
    "accessible_fraction",
    "accessible_subfile_indices",
    "analyze",
    "binom",
    "build_placement",
    "clwzc_rate",
    "clwzc_subpacketization",
    "crd_affine",
    "decode_user",
    "delivery_rate",
    "enumerate_subsets",
    "evaluate_scheme",
    "generate_transmissions",
    "hkd_rate",
    "hkd_subpacketization",
    "is_defined",
    "is_prime_power",
    "parse_fraction",
    "rank_subset",
    "rate_memory_curve",
    "render_decimal",
    "render_fraction",
    "rk_lower_bound",
    "rk_rate",
    "run_sweep",
    "scheme_dump",
    "simulate_end_to_end",
    "spe_special_rate",
    "spe_subpacketization",
    "sr1_odd_branch",
    "sr1_rate",
    "sr1_rate_value",
    "sr2_rate",
    "sr2_subpacketization",
    "unrank_subset",
    "validate_subset",
    "__version__",
]
