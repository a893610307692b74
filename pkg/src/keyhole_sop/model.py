"""System model of the keyhole-aided multi-user network.

A source talks to M users through a single keyhole (scattering
cross-section delta) while N passive eavesdroppers listen through the same
keyhole. Every link is Rayleigh, so each channel *power* is exponential;
throughout this package the exponential parameter is the MEAN (scale), i.e.
F(z) = 1 - exp(-z / zeta). Many libraries parameterize by rate = 1/zeta;
mixing the two is the classic bug this note exists to prevent.

External configuration is in dB (per the usual link-budget convention);
everything past the constructor is linear.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

__all__ = [
    "SystemParams",
    "ChannelRealization",
    "SnrPair",
    "db_to_linear",
    "load_params",
    "sample_realization",
    "sample_powers",
    "instantaneous_snrs",
    "secrecy_rate",
]


def db_to_linear(x_db: float) -> float:
    """Convert a dB quantity to linear scale, 10**(x/10)."""
    x_db = float(x_db)
    if math.isnan(x_db) or math.isinf(x_db):
        raise ValueError(f"dB value must be finite, got {x_db}")
    return 10.0 ** (x_db / 10.0)


def _require_positive(name: str, value: float, allow_zero: bool = False) -> float:
    value = float(value)
    if math.isnan(value) or math.isinf(value):
        raise ValueError(f"{name} must be finite, got {value}")
    if value < 0.0 or (value == 0.0 and not allow_zero):
        raise ValueError(f"{name} must be {'>= 0' if allow_zero else '> 0'}, got {value}")
    return value


@dataclass(frozen=True)
class SystemParams:
    """Full parameterization of the keyhole network.

    num_users
        M, number of legitimate users competing for scheduling.
    num_eves
        N, number of passive eavesdroppers.
    zeta_g, zeta_hd, zeta_he
        Mean channel powers (linear) of the source->keyhole link, each
        keyhole->user link, and each keyhole->eavesdropper link.
    delta
        Keyhole scattering cross-section.
    gamma_bar_d, gamma_bar_e
        Average SNRs P/sigma_d**2 and P/sigma_e**2 (linear). Their ratio
        encodes the eavesdropper-to-user noise ratio, so a transmit-power
        sweep scales both by the same factor.
    r_th
        Threshold secrecy rate in bits per channel use; 0 is allowed.
    """

    num_users: int
    num_eves: int
    zeta_g: float
    zeta_hd: float
    zeta_he: float
    delta: float
    gamma_bar_d: float
    gamma_bar_e: float
    r_th: float

    def __post_init__(self):
        for name in ("num_users", "num_eves"):
            count = getattr(self, name)
            if not isinstance(count, (int, np.integer)) or isinstance(count, bool):
                raise ValueError(f"{name} must be an integer, got {count!r}")
            if count < 1:
                raise ValueError(f"{name} must be >= 1, got {count}")
            object.__setattr__(self, name, int(count))
        for name in ("zeta_g", "zeta_hd", "zeta_he", "delta", "gamma_bar_d", "gamma_bar_e"):
            object.__setattr__(self, name, _require_positive(name, getattr(self, name)))
        object.__setattr__(self, "r_th", _require_positive("r_th", self.r_th, allow_zero=True))

    @property
    def rho(self) -> float:
        """SNR-domain threshold 2**r_th, always >= 1."""
        return 2.0 ** self.r_th

    @classmethod
    def from_db(cls, num_users: int, num_eves: int, zeta_g_db: float, zeta_hd_db: float,
                zeta_he_db: float, delta: float, gamma_bar_d_db: float,
                gamma_bar_e_db: float | None = None, r_th: float = 1.0) -> "SystemParams":
        """Build from the dB convention; gamma_bar_e defaults to gamma_bar_d
        (symmetric noise power at users and eavesdroppers)."""
        if gamma_bar_e_db is None:
            gamma_bar_e_db = gamma_bar_d_db
        return cls(
            num_users=num_users,
            num_eves=num_eves,
            zeta_g=db_to_linear(zeta_g_db),
            zeta_hd=db_to_linear(zeta_hd_db),
            zeta_he=db_to_linear(zeta_he_db),
            delta=delta,
            gamma_bar_d=db_to_linear(gamma_bar_d_db),
            gamma_bar_e=db_to_linear(gamma_bar_e_db),
            r_th=r_th,
        )


_PARAM_KEYS = {
    "M": int,
    "N": int,
    "zeta_g_db": float,
    "zeta_hd_db": float,
    "zeta_he_db": float,
    "delta": float,
    "gamma_bar_d_db": float,
    "gamma_bar_e_db": float,
    "r_th": float,
}


def params_from_mapping(mapping: dict) -> SystemParams:
    """Build SystemParams from the flat key-value parameter schema."""
    unknown = set(mapping) - set(_PARAM_KEYS)
    if unknown:
        raise ValueError(f"unknown parameter keys: {sorted(unknown)}")
    missing = set(_PARAM_KEYS) - {"gamma_bar_e_db"} - set(mapping)
    if missing:
        raise ValueError(f"missing parameter keys: {sorted(missing)}")
    values = {key: _PARAM_KEYS[key](raw) for key, raw in mapping.items()}
    return SystemParams.from_db(
        num_users=values["M"],
        num_eves=values["N"],
        zeta_g_db=values["zeta_g_db"],
        zeta_hd_db=values["zeta_hd_db"],
        zeta_he_db=values["zeta_he_db"],
        delta=values["delta"],
        gamma_bar_d_db=values["gamma_bar_d_db"],
        gamma_bar_e_db=values.get("gamma_bar_e_db"),
        r_th=values["r_th"],
    )


def load_params(path: str | Path) -> SystemParams:
    """Read a flat key-value parameter file.

    One ``key = value`` (or ``key value``) pair per line; ``#`` starts a
    comment. Keys: M, N, zeta_g_db, zeta_hd_db, zeta_he_db, delta,
    gamma_bar_d_db, gamma_bar_e_db (optional, defaults to gamma_bar_d_db),
    r_th.
    """
    mapping: dict[str, str] = {}
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = [p.strip() for p in (line.split("=", 1) if "=" in line else line.split(None, 1))]
        if len(parts) != 2 or not parts[0] or not parts[1]:
            raise ValueError(f"{path}:{lineno}: expected 'key = value', got {raw!r}")
        if parts[0] in mapping:
            raise ValueError(f"{path}:{lineno}: duplicate key {parts[0]!r}")
        mapping[parts[0]] = parts[1]
    return params_from_mapping(mapping)


@dataclass(frozen=True)
class ChannelRealization:
    """One joint draw of the keyhole power and all link powers."""

    g_power: float
    d_powers: np.ndarray
    e_powers: np.ndarray


@dataclass(frozen=True)
class SnrPair:
    """Instantaneous SNR at the scheduled user and the worst-case eavesdropper."""

    gamma_d: float
    gamma_e: float


def _exponential(rng: np.random.Generator, scale: float, size) -> np.ndarray:
    # Inverse CDF -zeta*ln(U) with U = 1 - random() in (0, 1], so log(0)
    # is unreachable. Exact and monotone in the underlying uniform.
    return -scale * np.log1p(-rng.random(size))


def sample_powers(params: SystemParams, rng: np.random.Generator, count: int):
    """Draw ``count`` i.i.d. joint realizations, vectorized.

    Returns arrays ``(g, d, e)`` of shapes (count,), (count, M), (count, N).
    The draw order g-block, d-block, e-block is a fixed contract: the
    compiled Monte Carlo kernel consumes the uniform stream in exactly this
    order so both backends see identical samples.
    """
    g = _exponential(rng, params.zeta_g, count)
    d = _exponential(rng, params.zeta_hd, (count, params.num_users))
    e = _exponential(rng, params.zeta_he, (count, params.num_eves))
    return g, d, e


def sample_realization(params: SystemParams, rng: np.random.Generator) -> ChannelRealization:
    """Draw a single ChannelRealization from an explicit generator."""
    g, d, e = sample_powers(params, rng, 1)
    return ChannelRealization(g_power=float(g[0]), d_powers=d[0], e_powers=e[0])


def instantaneous_snrs(params: SystemParams, realization: ChannelRealization) -> SnrPair:
    """SNRs under best-user scheduling and the worst-case eavesdropper."""
    d = np.asarray(realization.d_powers, dtype=float)
    e = np.asarray(realization.e_powers, dtype=float)
    if d.shape != (params.num_users,):
        raise ValueError(f"expected {params.num_users} user powers, got shape {d.shape}")
    if e.shape != (params.num_eves,):
        raise ValueError(f"expected {params.num_eves} eavesdropper powers, got shape {e.shape}")
    d2 = params.delta * params.delta
    return SnrPair(
        gamma_d=params.gamma_bar_d * realization.g_power * d2 * float(d.max()),
        gamma_e=params.gamma_bar_e * realization.g_power * d2 * float(e.max()),
    )


def secrecy_rate(snrs: SnrPair) -> float:
    """Achievable secrecy rate max(log2((1+gamma_d)/(1+gamma_e)), 0) in bpcu."""
    return max(math.log2((1.0 + snrs.gamma_d) / (1.0 + snrs.gamma_e)), 0.0)
