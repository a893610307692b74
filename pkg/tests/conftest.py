import pytest

from keyhole_sop import SystemParams

# Baseline configuration used throughout: zeta_g = 3 dB, zeta_hd = 6 dB,
# zeta_he = -3 dB, delta = 0.5, r_th = 1 bpcu, symmetric 10 dB SNR,
# two users, three eavesdroppers.
BASELINE = dict(
    num_users=2,
    num_eves=3,
    zeta_g=10.0 ** 0.3,
    zeta_hd=10.0 ** 0.6,
    zeta_he=10.0 ** -0.3,
    delta=0.5,
    gamma_bar_d=10.0,
    gamma_bar_e=10.0,
    r_th=1.0,
)


@pytest.fixture
def make_params():
    """Factory for SystemParams: baseline values with keyword overrides."""

    def factory(**overrides) -> SystemParams:
        merged = {**BASELINE, **overrides}
        if "gamma_bar_d" in overrides and "gamma_bar_e" not in overrides:
            merged["gamma_bar_e"] = merged["gamma_bar_d"]
        return SystemParams(**merged)

    return factory
