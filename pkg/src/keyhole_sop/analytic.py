"""Analytic secrecy outage probability (SOP) of the keyhole network.

Three evaluation routes:

* ``sop_closed_form`` -- the exact finite double sum over binomial terms,
  each weighted by z*K1(z) of a per-term Bessel argument.
* ``sop_asymptotic`` -- the transmit-power -> infinity saturation value,
  i.e. the same sum with the Bessel factor at its limit 1; independent of
  the keyhole cross-section and of the source->keyhole channel mean.
* ``sop_quadrature`` -- adaptive numerical integration of the defining
  double integral using only the *product* form of the order-statistics
  CDFs, so it shares no algebra with the alternating sums above and serves
  as an independent oracle for them.

The alternating double sum cancels catastrophically as M, N grow; terms
are accumulated with exact (Shewchuk) summation and the orders are capped
at 60, beyond which the quadrature route must be used.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

from scipy import integrate

from .model import SystemParams
from .specfun import z_times_k1

__all__ = [
    "Method",
    "SopValue",
    "QuadratureError",
    "MAX_SUM_ORDER",
    "best_user_cdf",
    "best_eve_cdf",
    "sop_closed_form",
    "sop_asymptotic",
    "sop_quadrature",
]

# C(60, 30) ~ 1.18e17 already exceeds the 2**53 integer-exact range of a
# double; past this order the alternating sum is numerically meaningless.
MAX_SUM_ORDER = 60

# Raw sums may leave [0, 1] by a few ulp; anything worse signals a
# summation failure and is raised, never clamped.
_CLAMP_SLACK = 1e-9


class Method(str, enum.Enum):
    CLOSED_FORM = "closed_form"
    ASYMPTOTIC = "asymptotic"
    QUADRATURE = "quadrature"
    MONTE_CARLO = "monte_carlo"


@dataclass(frozen=True)
class SopValue:
    """A probability in [0, 1] tagged with how it was computed."""

    value: float
    method: Method


class QuadratureError(RuntimeError):
    """Adaptive integration did not reach the requested tolerance."""


def _max_cdf(x: float, order: int, scale: float) -> float:
    # CDF of the max of `order` i.i.d. exponentials with the given mean,
    # in direct product form: (1 - exp(-x/scale))**order.
    if x < 0.0:
        raise ValueError(f"CDF argument must be >= 0, got {x}")
    return (-math.expm1(-x / scale)) ** order


def best_user_cdf(x: float, num_users: int, zeta_hd: float, gamma_bar_d: float) -> float:
    """CDF of the scheduled (best) user's scaled channel power at x."""
    if num_users < 1:
        raise ValueError(f"num_users must be >= 1, got {num_users}")
    if zeta_hd <= 0.0 or gamma_bar_d <= 0.0:
        raise ValueError("zeta_hd and gamma_bar_d must be > 0")
    return _max_cdf(x, num_users, zeta_hd * gamma_bar_d)


def best_eve_cdf(y: float, num_eves: int, zeta_he: float, gamma_bar_e: float) -> float:
    """CDF of the worst-case (best) eavesdropper's scaled channel power at y."""
    if num_eves < 1:
        raise ValueError(f"num_eves must be >= 1, got {num_eves}")
    if zeta_he <= 0.0 or gamma_bar_e <= 0.0:
        raise ValueError("zeta_he and gamma_bar_e must be > 0")
    return _max_cdf(y, num_eves, zeta_he * gamma_bar_e)


def _max_cdf_expansion(x: float, order: int, scale: float) -> float:
    # Binomial-expansion form of _max_cdf; only ever used inside the SOP
    # sums (and in tests that pin it against the product form).
    terms = [1.0]
    for m in range(1, order + 1):
        terms.append((-1.0) ** m * math.comb(order, m) * math.exp(-m * x / scale))
    return math.fsum(terms)


def _check_sum_order(params: SystemParams) -> None:
    if params.num_users > MAX_SUM_ORDER or params.num_eves > MAX_SUM_ORDER:
        raise ValueError(
            f"binomial cap exceeded: the alternating closed-form/asymptotic sums "
            f"require M <= {MAX_SUM_ORDER} and N <= {MAX_SUM_ORDER} "
            f"(got M={params.num_users}, N={params.num_eves}); "
            f"use the quadrature method for larger systems"
        )


def _alternating_sum(params: SystemParams, bessel_factor) -> float:
    """Evaluate 1 - sum_{m,n} C(M,m) C(N,n) (-1)^(m+n) ratio(m,n) * bessel_factor(m)
    with exact accumulation of the computed terms."""
    big_m, big_n = params.num_users, params.num_eves
    rho = params.rho
    sd = params.zeta_hd * params.gamma_bar_d
    se = params.zeta_he * params.gamma_bar_e
    terms = [1.0]
    for m in range(1, big_m + 1):
        zk = bessel_factor(m)
        for n in range(1, big_n + 1):
            ratio = n * sd / (m * rho * se + n * sd)
            sign = -1.0 if (m + n) % 2 else 1.0
            # leading '-' because the result is 1 minus the double sum
            terms.append(-sign * math.comb(big_m, m) * math.comb(big_n, n) * ratio * zk)
    return math.fsum(terms)


def _finish(raw: float, method: Method) -> SopValue:
    if raw < -_CLAMP_SLACK or raw > 1.0 + _CLAMP_SLACK:
        raise ArithmeticError(
            f"{method.value} SOP left [0, 1] by more than {_CLAMP_SLACK} (raw={raw!r}); "
            f"this indicates summation failure, not rounding"
        )
    return SopValue(value=min(max(raw, 0.0), 1.0), method=method)


def sop_closed_form(params: SystemParams) -> SopValue:
    """Exact SOP via the closed-form double sum.

    The per-term Bessel argument is a_m = sqrt(4 m (rho-1) / (delta**2
    zeta_g zeta_hd gamma_bar_d)); the r_th = 0 case rides on the defined
    limit z_times_k1(0) = 1 instead of a special case.
    """
    _check_sum_order(params)
    coeff = 4.0 * (params.rho - 1.0) / (
        params.delta * params.delta * params.zeta_g * params.zeta_hd * params.gamma_bar_d
    )
    raw = _alternating_sum(params, lambda m: z_times_k1(math.sqrt(m * coeff)))
    return _finish(raw, Method.CLOSED_FORM)


def sop_asymptotic(params: SystemParams) -> SopValue:
    """High-SNR saturation value of the SOP.

    Only the noise ratio gamma_bar_d/gamma_bar_e and the keyhole-side
    channel means survive the limit; delta, zeta_g, and the absolute
    transmit power drop out.
    """
    _check_sum_order(params)
    raw = _alternating_sum(params, lambda m: 1.0)
    return _finish(raw, Method.ASYMPTOTIC)


def sop_quadrature(params: SystemParams, rel_tol: float = 1e-8) -> SopValue:
    """SOP by adaptive quadrature of the defining double integral.

    Integrates F_X((rho-1)/(delta**2 z) + rho y) against the joint density
    of the worst-eavesdropper power Y and the keyhole power Z, with the
    CDFs in product form throughout. The outer z axis is mapped to the
    unit interval by z = -zeta_g ln(u); the inner y axis is truncated
    where the exponential eavesdropper tail is provably below a tenth of
    the error budget.
    """
    rel_tol = float(rel_tol)
    if not 1e-10 <= rel_tol <= 1e-3:
        raise ValueError(f"rel_tol must lie in [1e-10, 1e-3], got {rel_tol}")
    rho = params.rho
    sd = params.zeta_hd * params.gamma_bar_d
    se = params.zeta_he * params.gamma_bar_e
    num_users, num_eves = params.num_users, params.num_eves
    delta2 = params.delta * params.delta
    zeta_g = params.zeta_g

    # 1 - F_Y(y_max) <= N exp(-y_max/se) bounds the discarded mass.
    tail_budget = min(rel_tol, 1e-9) / 10.0
    y_max = se * math.log(num_eves / tail_budget)

    def integrand_y(y: float, c: float) -> float:
        fx = (-math.expm1(-(c + rho * y) / sd)) ** num_users
        fy = (num_eves / se) * math.exp(-y / se) * (-math.expm1(-y / se)) ** (num_eves - 1)
        return fx * fy

    def inner(c: float) -> float:
        return _quad(integrand_y, 0.0, y_max, args=(c,),
                     epsabs=tail_budget, epsrel=rel_tol / 50.0)

    if rho == 1.0:
        # r_th = 0: the keyhole power cancels out of the event entirely.
        return _finish(inner(0.0), Method.QUADRATURE)

    def integrand_u(u: float) -> float:
        if u <= 0.0:
            return inner(0.0)
        if u >= 1.0:
            return inner(math.inf)
        z = -zeta_g * math.log(u)
        return inner((rho - 1.0) / (delta2 * z))

    value = _quad(integrand_u, 0.0, 1.0, args=(),
                  epsabs=tail_budget * 10.0, epsrel=rel_tol)
    return _finish(value, Method.QUADRATURE)


def _quad(func, lo: float, hi: float, args, epsabs: float, epsrel: float) -> float:
    out = integrate.quad(func, lo, hi, args=args, epsabs=epsabs, epsrel=epsrel,
                         limit=200, full_output=1)
    if len(out) > 3:
        value, abserr = out[0], out[1]
        raise QuadratureError(
            f"integration on [{lo}, {hi}] did not converge: {out[3]} "
            f"(result {value!r}, achieved error estimate {abserr:.3e}, "
            f"requested epsabs={epsabs:.3e} epsrel={epsrel:.3e})"
        )
    return out[0]
