"""Monte Carlo estimation of the secrecy outage probability.

An outage is the event that the unclamped rate log2((1+gamma_d)/(1+gamma_e))
falls strictly below r_th, evaluated as gamma_d - rho*gamma_e < rho - 1.
(The clamped secrecy rate would make the event empty at r_th = 0, whereas
the analytic SOP there is P(gamma_d < gamma_e); the strict boundary itself
has probability zero but is fixed for determinism.)

Reproducibility model: samples are split into fixed-size logical chunks of
CHUNK_SAMPLES; chunk j draws from its own counter-based Philox stream with
key (seed, j). Chunk outage counts are integers, so their sum is exact and
order-independent, which makes the estimate a pure function of
(seed, num_samples) regardless of how many worker threads process the
chunks. ``num_streams`` is therefore only a parallelism knob.

The per-chunk kernel is compiled (Cython) when the extension built; a
bit-compatible pure-numpy fallback is selected at import otherwise. Set
KEYHOLE_SOP_BACKEND=python or =compiled to force one.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import _kernel_py
from .analytic import Method, SopValue, sop_closed_form
from .model import SystemParams

try:
    from . import _kernel
except ImportError:
    _kernel = None

_FORCED = os.environ.get("KEYHOLE_SOP_BACKEND", "").strip().lower()
if _FORCED == "python":
    _BACKEND = _kernel_py
elif _FORCED == "compiled":
    if _kernel is None:
        raise ImportError("KEYHOLE_SOP_BACKEND=compiled but the extension is not built")
    _BACKEND = _kernel
elif _FORCED:
    raise ValueError(f"KEYHOLE_SOP_BACKEND must be 'compiled' or 'python', got {_FORCED!r}")
else:
    _BACKEND = _kernel if _kernel is not None else _kernel_py

__all__ = [
    "CHUNK_SAMPLES",
    "MonteCarloEstimate",
    "ValidationReport",
    "active_backend",
    "chunk_bit_generator",
    "estimate_sop",
    "validate_against_analytic",
]

CHUNK_SAMPLES = 1 << 16

_Z95 = 1.959963984540054


def active_backend() -> str:
    """Name of the chunk kernel in use, 'compiled' or 'python'."""
    return "compiled" if _BACKEND is _kernel and _kernel is not None else "python"


@dataclass(frozen=True)
class MonteCarloEstimate:
    """Empirical SOP with binomial standard error and 95% Wald interval."""

    sop_hat: float
    num_samples: int
    std_error: float
    ci95_low: float
    ci95_high: float
    seed: int
    num_streams: int


@dataclass(frozen=True)
class ValidationReport:
    """Outcome of checking a Monte Carlo estimate against the closed form."""

    mc: MonteCarloEstimate
    cf: SopValue
    z_score: float
    passed: bool


def _check_seed(seed: int) -> int:
    if not isinstance(seed, (int, np.integer)) or isinstance(seed, bool):
        raise ValueError(f"seed must be an integer, got {seed!r}")
    if not 0 <= seed < 2 ** 64:
        raise ValueError(f"seed must be a 64-bit unsigned value, got {seed}")
    return int(seed)


def chunk_bit_generator(seed: int, chunk_index: int) -> np.random.Philox:
    """Stream derivation rule: chunk j of seed s draws from Philox(key=(s, j))."""
    return np.random.Philox(key=np.array([seed, chunk_index], dtype=np.uint64))


def _count_chunk(params: SystemParams, seed: int, chunk_index: int, count: int) -> int:
    return _BACKEND.count_outages(
        chunk_bit_generator(seed, chunk_index), count,
        params.num_users, params.num_eves,
        params.zeta_g, params.zeta_hd, params.zeta_he,
        params.delta, params.gamma_bar_d, params.gamma_bar_e, params.rho,
    )


def estimate_sop(params: SystemParams, num_samples: int, seed: int,
                 num_streams: int = 1) -> MonteCarloEstimate:
    """Estimate the SOP from ``num_samples`` independent channel draws.

    Bit-identical for fixed (seed, num_samples) whatever ``num_streams``
    is; see the module docstring for the chunking scheme.
    """
    seed = _check_seed(seed)
    if num_samples < 1000:
        raise ValueError(f"num_samples must be >= 1000, got {num_samples}")
    if num_streams < 1:
        raise ValueError(f"num_streams must be >= 1, got {num_streams}")

    num_chunks = -(-num_samples // CHUNK_SAMPLES)
    sizes = [min(CHUNK_SAMPLES, num_samples - j * CHUNK_SAMPLES) for j in range(num_chunks)]

    def run(j: int) -> int:
        return _count_chunk(params, seed, j, sizes[j])

    if num_streams == 1 or num_chunks == 1:
        outages = sum(run(j) for j in range(num_chunks))
    else:
        with ThreadPoolExecutor(max_workers=num_streams) as pool:
            outages = sum(pool.map(run, range(num_chunks)))

    p_hat = outages / num_samples
    std_error = math.sqrt(p_hat * (1.0 - p_hat) / num_samples)
    return MonteCarloEstimate(
        sop_hat=p_hat,
        num_samples=num_samples,
        std_error=std_error,
        ci95_low=max(p_hat - _Z95 * std_error, 0.0),
        ci95_high=min(p_hat + _Z95 * std_error, 1.0),
        seed=seed,
        num_streams=num_streams,
    )


def validate_against_analytic(params: SystemParams, num_samples: int, seed: int,
                              num_streams: int = 1) -> ValidationReport:
    """z-test of the Monte Carlo estimate against the closed-form SOP.

    The z-score uses the null standard error sqrt(cf*(1-cf)/n) -- the
    variance the estimator has *if* the closed form is correct -- which
    stays informative when the empirical count is 0 or n. Passing means
    |z| <= 4 (about a 6e-5 two-sided false-alarm rate per point).
    """
    mc = estimate_sop(params, num_samples, seed, num_streams)
    cf = sop_closed_form(params)
    se_null = math.sqrt(cf.value * (1.0 - cf.value) / num_samples)
    diff = mc.sop_hat - cf.value
    if se_null > 0.0:
        z_score = diff / se_null
    else:
        z_score = 0.0 if diff == 0.0 else math.copysign(math.inf, diff)
    return ValidationReport(mc=mc, cf=cf, z_score=z_score, passed=abs(z_score) <= 4.0)


def monte_carlo_sop(params: SystemParams, num_samples: int, seed: int,
                    num_streams: int = 1) -> SopValue:
    """Convenience wrapper returning the estimate as a tagged SopValue."""
    est = estimate_sop(params, num_samples, seed, num_streams)
    return SopValue(value=est.sop_hat, method=Method.MONTE_CARLO)
