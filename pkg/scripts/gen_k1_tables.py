#!/usr/bin/env python3
"""Regenerate the Chebyshev coefficient tables in keyhole_sop/specfun.py.

Fits first-kind Chebyshev series at 60-digit precision to

    phi(z) = z*K1(z) - z*ln(z/2)*I1(z)   in t = z**2/2 - 1,  z in [0, 2]
    psi(z) = exp(z)*sqrt(z)*K1(z)        in t = 4/z - 1,     z in [2, inf)

and prints the truncated tables plus the double-precision accuracy they
achieve on a 1000-point log grid over [1e-8, 700]. Requires mpmath.
"""

import math

import mpmath as mp
import numpy as np

mp.mp.dps = 60


def cheb_coeffs(f, n):
    """Chebyshev series coefficients on [-1, 1] from the roots grid."""
    nodes = [mp.cos(mp.pi * (2 * j + 1) / (2 * n)) for j in range(n)]
    fv = [f(t) for t in nodes]
    return [
        float(2 * mp.fsum(fv[i] * mp.cos(mp.pi * j * (2 * i + 1) / (2 * n))
                          for i in range(n)) / n)
        for j in range(n)
    ]


def phi(t):
    z = mp.sqrt(2 * (t + 1))
    if z == 0:
        return mp.mpf(1)
    return z * mp.besselk(1, z) - z * mp.log(z / 2) * mp.besseli(1, z)


def psi(t):
    z = 4 / (t + 1)
    return mp.exp(z) * mp.sqrt(z) * mp.besselk(1, z)


def truncate(coeffs, floor=1e-20):
    keep = max(i for i, c in enumerate(coeffs) if abs(c) > floor) + 1
    return coeffs[:keep]


def clenshaw(t, coeffs):
    b0 = b1 = 0.0
    for c in reversed(coeffs[1:]):
        b0, b1 = 2.0 * t * b0 - b1 + c, b0
    return t * b0 - b1 + 0.5 * coeffs[0]


def i1_series(z):
    q = 0.25 * z * z
    term = 0.5 * z
    total = term
    k = 1
    while True:
        term *= q / (k * (k + 1))
        total += term
        if term <= 1e-18 * total:
            return total
        k += 1


def main():
    phi_coeffs = truncate(cheb_coeffs(phi, 36))
    psi_coeffs = truncate(cheb_coeffs(psi, 48))

    def k1(z):
        if z <= 2.0:
            t = 0.5 * z * z - 1.0
            return math.log(0.5 * z) * i1_series(z) + clenshaw(t, phi_coeffs) / z
        return math.exp(-z) * clenshaw(4.0 / z - 1.0, psi_coeffs) / math.sqrt(z)

    mp.mp.dps = 40
    grid = np.logspace(math.log10(1e-8), math.log10(700.0), 1000)
    worst = 0.0
    for z in grid:
        ref = mp.besselk(1, mp.mpf(float(z)))
        worst = max(worst, float(abs((mp.mpf(k1(float(z))) - ref) / ref)))

    print(f"# phi table ({len(phi_coeffs)} coefficients)")
    for c in phi_coeffs:
        print(f"    {c!r},")
    print(f"# psi table ({len(psi_coeffs)} coefficients)")
    for c in psi_coeffs:
        print(f"    {c!r},")
    print(f"# max relative error on the verification grid: {worst:.3e}")


if __name__ == "__main__":
    main()
