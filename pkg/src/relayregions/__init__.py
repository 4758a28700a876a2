"""Rate regions for a relay broadcast channel with additive interference.

The channel has a source, a relay that also decodes a common message,
and a far destination whose observation is a further degraded copy of
the relay's. An additive Gaussian interference term is known either to
every node or to the source alone; the two cases give the exact region
and a dirty-paper style inner bound respectively. All rates are in bits
per channel use and all powers are linear.
"""

from .model import (
    ChannelParams,
    Frontier,
    FrontierPoint,
    GdpcCoeffs,
    GdpcParams,
    InformedBothParams,
    Negative,
    NonDegraded,
    NonPositive,
    OutOfRange,
    RatePoint,
    RelayRegionsError,
    SCHEMES,
    rho_upper_bound,
    validate_channel,
    validate_gdpc,
)
from .rates import (
    GdpcRates,
    NegativeArgument,
    cap_c,
    gdpc_coeffs,
    gdpc_rates,
    nostate_region,
    nostate_terms,
    qprime,
    relay_rate_informed_both,
)
from .gaussian import (
    CovarianceSystem,
    InformedBothCoeffs,
    SingularSubmatrix,
    TermCheck,
    VerifyReport,
    ZeroStatePower,
    build_cov_informed_both,
    build_cov_informed_source,
    gaussian_cmi,
    informed_both_coeffs,
    sample_mi_estimate,
    verify_gdpc,
    verify_informed_both,
    verify_relay_identity,
)
from .optimize import (
    DEFAULT_GRID,
    GridSpec,
    OptResult,
    SweepRow,
    frontier,
    max_beta_nostate,
    max_r02_gdpc,
    sweep_snr,
)
from .dmc import (
    AXES,
    AuxJoint,
    DmcOptResult,
    DmcSpec,
    NotNormalized,
    TooLarge,
    binary_pipes_spec,
    compose_full,
    discrete_cmi,
    dmc_maximize,
    eval_informed_both,
    eval_informed_source,
    make_degraded_channel,
)

__version__ = "0.1.0"

__all__ = [
    "AXES",
    "AuxJoint",
    "ChannelParams",
    "CovarianceSystem",
    "DEFAULT_GRID",
    "DmcOptResult",
    "DmcSpec",
    "Frontier",
    "FrontierPoint",
    "GdpcCoeffs",
    "GdpcParams",
    "GdpcRates",
    "GridSpec",
    "InformedBothCoeffs",
    "InformedBothParams",
    "Negative",
    "NegativeArgument",
    "NonDegraded",
    "NonPositive",
    "NotNormalized",
    "OptResult",
    "OutOfRange",
    "RatePoint",
    "RelayRegionsError",
    "SCHEMES",
    "SingularSubmatrix",
    "SweepRow",
    "TermCheck",
    "TooLarge",
    "VerifyReport",
    "ZeroStatePower",
    "binary_pipes_spec",
    "build_cov_informed_both",
    "build_cov_informed_source",
    "cap_c",
    "compose_full",
    "discrete_cmi",
    "dmc_maximize",
    "eval_informed_both",
    "eval_informed_source",
    "frontier",
    "gaussian_cmi",
    "gdpc_coeffs",
    "gdpc_rates",
    "informed_both_coeffs",
    "make_degraded_channel",
    "max_beta_nostate",
    "max_r02_gdpc",
    "nostate_region",
    "nostate_terms",
    "qprime",
    "relay_rate_informed_both",
    "rho_upper_bound",
    "sample_mi_estimate",
    "sweep_snr",
    "validate_channel",
    "validate_gdpc",
    "verify_gdpc",
    "verify_informed_both",
    "verify_relay_identity",
    "__version__",
]
