"""Secrecy outage probability of a keyhole-aided multi-user network.

A source reaches M users through a single keyhole while N eavesdroppers
listen through the same keyhole; the best user is scheduled and secrecy is
measured against the strongest eavesdropper. This package evaluates the
secrecy outage probability three independent ways (exact closed form,
high-SNR asymptote, Monte Carlo simulation) plus a quadrature oracle of
the defining double integral, and reproduces the standard parameter-sweep
figures as CSV.
"""

from .analytic import (
    Method,
    QuadratureError,
    SopValue,
    best_eve_cdf,
    best_user_cdf,
    sop_asymptotic,
    sop_closed_form,
    sop_quadrature,
)
from .model import (
    ChannelRealization,
    SnrPair,
    SystemParams,
    db_to_linear,
    instantaneous_snrs,
    load_params,
    sample_realization,
    secrecy_rate,
)
from .montecarlo import (
    MonteCarloEstimate,
    ValidationReport,
    estimate_sop,
    validate_against_analytic,
)
from .specfun import bessel_k1, z_times_k1

__version__ = "0.1.0"

__all__ = [
    "Method",
    "QuadratureError",
    "SopValue",
    "SystemParams",
    "ChannelRealization",
    "SnrPair",
    "MonteCarloEstimate",
    "ValidationReport",
    "bessel_k1",
    "z_times_k1",
    "db_to_linear",
    "load_params",
    "sample_realization",
    "instantaneous_snrs",
    "secrecy_rate",
    "best_user_cdf",
    "best_eve_cdf",
    "sop_closed_form",
    "sop_asymptotic",
    "sop_quadrature",
    "estimate_sop",
    "validate_against_analytic",
    "__version__",
]
