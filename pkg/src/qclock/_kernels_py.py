"""Pure-numpy fallback for the exit-point current kernel.

Must stay numerically interchangeable with the compiled version in
``_kernels.pyx``: same formulas, same association order, same -700
exponent floor.
"""

import numpy as np

_EXP_FLOOR = -700.0


def exit_current_components(t, d, u, sigma0, hbar, m0, omega):
    """Current components (jx, jz) at the exit point x=d for an array of times.

    jx is the spin-independent (gradient/drift) part, jz the spin part; the
    density factor is flushed to exactly 0 once its exponent drops below
    the floor, so far tails cost nothing and never go denormal.
    """
    t = np.asarray(t, dtype=np.float64)
    c_spread = hbar / (2.0 * m0 * sigma0 * sigma0)
    spread = c_spread * t
    sigma_t2 = (sigma0 * sigma0) * (1.0 + spread * spread)
    miss = d - u * t
    arg = -(miss * miss) / (2.0 * sigma_t2)
    dens = np.where(arg < _EXP_FLOOR, 0.0,
                    np.exp(arg) / np.sqrt(2.0 * np.pi * sigma_t2))
    denom = 4.0 * (m0 * m0) * (sigma0 * sigma0 * sigma0 * sigma0) \
        + (hbar * hbar) * (t * t)
    jx = dens * (u + miss * (hbar * hbar) * t / denom)
    jz = dens * (hbar * -miss / (2.0 * m0 * sigma_t2)) * np.sin(2.0 * omega * t)
    return jx, jz
