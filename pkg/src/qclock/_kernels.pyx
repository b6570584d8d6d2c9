# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled exit-point current kernel: the hot loop of every quadrature.

Formula-for-formula mirror of ``_kernels_py.exit_current_components``; keep
the two in lockstep when editing either.
"""

import numpy as np

cimport numpy as cnp
from libc.math cimport M_PI, exp, sin, sqrt

cnp.import_array()

cdef double _EXP_FLOOR = -700.0


def exit_current_components(t, double d, double u, double sigma0,
                            double hbar, double m0, double omega):
    """Current components (jx, jz) at the exit point x=d for an array of times."""
    cdef cnp.ndarray[cnp.float64_t, ndim=1] t_arr = \
        np.ascontiguousarray(t, dtype=np.float64)
    cdef Py_ssize_t n = t_arr.shape[0]
    cdef cnp.ndarray[cnp.float64_t, ndim=1] jx = np.empty(n, dtype=np.float64)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] jz = np.empty(n, dtype=np.float64)

    cdef double c_spread = hbar / (2.0 * m0 * sigma0 * sigma0)
    cdef double s0_sq = sigma0 * sigma0
    cdef double denom0 = 4.0 * (m0 * m0) * (sigma0 * sigma0 * sigma0 * sigma0)
    cdef double hbar_sq = hbar * hbar
    cdef double ti, spread, sigma_t2, miss, arg, dens
    cdef Py_ssize_t i

    for i in range(n):
        ti = t_arr[i]
        spread = c_spread * ti
        sigma_t2 = s0_sq * (1.0 + spread * spread)
        miss = d - u * ti
        arg = -(miss * miss) / (2.0 * sigma_t2)
        if arg < _EXP_FLOOR:
            jx[i] = 0.0
            jz[i] = 0.0
            continue
        dens = exp(arg) / sqrt(2.0 * M_PI * sigma_t2)
        jx[i] = dens * (u + miss * hbar_sq * ti / (denom0 + hbar_sq * (ti * ti)))
        jz[i] = dens * (hbar * -miss / (2.0 * m0 * sigma_t2)) * sin(2.0 * omega * ti)
    return jx, jz
