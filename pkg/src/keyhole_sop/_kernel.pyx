# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled Monte Carlo chunk kernel.

Counts secrecy outage events for one chunk of samples, pulling uniforms
straight from a NumPy BitGenerator through its C interface. Draw order
(g block, then the user block row-major, then the eavesdropper block) and
every floating-point expression mirror the pure-numpy fallback in
_kernel_py.py exactly, so both backends turn the same (seed, chunk) into
the same outage count bit for bit. Keep the two files in sync.
"""

from cpython.pycapsule cimport PyCapsule_GetPointer, PyCapsule_IsValid
from libc.math cimport log1p

from numpy.random cimport bitgen_t

import numpy as np

cdef const char *CAPSULE_NAME = "BitGenerator"


def count_outages(bit_generator, Py_ssize_t count, Py_ssize_t num_users,
                  Py_ssize_t num_eves, double zeta_g, double zeta_hd,
                  double zeta_he, double delta, double gamma_bar_d,
                  double gamma_bar_e, double rho):
    """Count samples with gamma_d - rho*gamma_e < rho - 1 among ``count`` draws."""
    cdef bitgen_t *rng
    capsule = bit_generator.capsule
    if not PyCapsule_IsValid(capsule, CAPSULE_NAME):
        raise ValueError("invalid BitGenerator capsule")
    rng = <bitgen_t *> PyCapsule_GetPointer(capsule, CAPSULE_NAME)

    g_arr = np.empty(count, dtype=np.float64)
    dmax_arr = np.empty(count, dtype=np.float64)
    emax_arr = np.empty(count, dtype=np.float64)
    cdef double[::1] g = g_arr
    cdef double[::1] dmax = dmax_arr
    cdef double[::1] emax = emax_arr

    cdef Py_ssize_t i, k, outages = 0
    cdef double v, best
    cdef double delta2 = delta * delta
    cdef double rho_m1 = rho - 1.0
    cdef double gd, ge

    with bit_generator.lock, nogil:
        for i in range(count):
            g[i] = -zeta_g * log1p(-rng.next_double(rng.state))
        for i in range(count):
            best = -zeta_hd * log1p(-rng.next_double(rng.state))
            for k in range(1, num_users):
                v = -zeta_hd * log1p(-rng.next_double(rng.state))
                if v > best:
                    best = v
            dmax[i] = best
        for i in range(count):
            best = -zeta_he * log1p(-rng.next_double(rng.state))
            for k in range(1, num_eves):
                v = -zeta_he * log1p(-rng.next_double(rng.state))
                if v > best:
                    best = v
            emax[i] = best
        for i in range(count):
            gd = gamma_bar_d * g[i] * delta2 * dmax[i]
            ge = gamma_bar_e * g[i] * delta2 * emax[i]
            if gd - rho * ge < rho_m1:
                outages += 1
    return outages
