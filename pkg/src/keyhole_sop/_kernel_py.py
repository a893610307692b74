"""Pure-numpy Monte Carlo chunk kernel, the fallback when the compiled
extension is unavailable.

Must stay bit-compatible with _kernel.pyx: same draw order off the
BitGenerator (g block, user block row-major, eavesdropper block) and the
same left-to-right floating-point expressions, so both backends produce
identical outage counts for the same (seed, chunk). Keep the two files in
sync.
"""

import numpy as np


def count_outages(bit_generator, count, num_users, num_eves, zeta_g, zeta_hd,
                  zeta_he, delta, gamma_bar_d, gamma_bar_e, rho):
    """Count samples with gamma_d - rho*gamma_e < rho - 1 among ``count`` draws."""
    rng = np.random.Generator(bit_generator)
    g = -zeta_g * np.log1p(-rng.random(count))
    dmax = (-zeta_hd * np.log1p(-rng.random((count, num_users)))).max(axis=1)
    emax = (-zeta_he * np.log1p(-rng.random((count, num_eves)))).max(axis=1)
    delta2 = delta * delta
    gd = gamma_bar_d * g * delta2 * dmax
    ge = gamma_bar_e * g * delta2 * emax
    return int(np.count_nonzero(gd - rho * ge < rho - 1.0))
