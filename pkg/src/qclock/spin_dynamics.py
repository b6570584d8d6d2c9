"""Spin-1/2 evolution in a constant z field and the Bloch-vector map.

The field only touches the spin: H = mu*sigma.B = hbar*omega*sigma_z with
omega = mu*B/hbar, so evolution is a rigid precession of the spin azimuth
at rate 2*omega.  States carry their global phase exactly as produced by
exp(-iHt/hbar); physical comparisons should go through bloch() or overlap
magnitudes, which are phase-free.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

from .errors import DomainError, ValidationError
from .wavepacket import HBAR

_SQRT_HALF = 1.0 / math.sqrt(2.0)
_NORM_TOL = 1e-12


@dataclass(frozen=True)
class SpinState:
    """Two-component spinor in the z basis; ``up``/``down`` amplitudes."""

    up: complex
    down: complex

    def norm_sq(self) -> float:
        return abs(self.up) ** 2 + abs(self.down) ** 2


@dataclass(frozen=True)
class SpinVector:
    """Spin expectation vector (hbar/2) * <sigma>, components in erg s."""

    sx: float
    sy: float
    sz: float

    def magnitude(self) -> float:
        return math.sqrt(self.sx ** 2 + self.sy ** 2 + self.sz ** 2)


def initial_state() -> SpinState:
    """The +x polarized state (|up> + |down>)/sqrt(2)."""
    return SpinState(up=complex(_SQRT_HALF), down=complex(_SQRT_HALF))


def evolve(omega: float, t: float) -> SpinState:
    """Initial +x state evolved for time t at precession rate omega.

    Returns exp(-i*omega*t)/sqrt(2) * (|up> + exp(2i*omega*t)|down>), the
    global phase kept as is.
    """
    if t < 0.0:
        raise DomainError("t must be >= 0")
    phase = cmath.exp(-1j * omega * t)
    return SpinState(up=phase * _SQRT_HALF,
                     down=phase * cmath.exp(2j * omega * t) * _SQRT_HALF)


def bloch(chi: SpinState, hbar: float = HBAR) -> SpinVector:
    """Spin vector (hbar/2) * chi^dag sigma chi of a normalized state."""
    if abs(chi.norm_sq() - 1.0) > _NORM_TOL:
        raise ValidationError(f"spin state is not normalized: |chi|^2 = {chi.norm_sq()!r}")
    cross = chi.up.conjugate() * chi.down
    half = 0.5 * hbar
    return SpinVector(sx=half * 2.0 * cross.real,
                      sy=half * 2.0 * cross.imag,
                      sz=half * (abs(chi.up) ** 2 - abs(chi.down) ** 2))


def chi_of_phi(phi: float) -> SpinState:
    """The xy-plane state at azimuth phi: (|up> + exp(i*phi)|down>)/sqrt(2).

    Coincides with evolve(omega, phi/(2*omega)) up to the global phase
    exp(-i*phi/2).  phi must lie in [0, 2*pi].
    """
    if not 0.0 <= phi <= 2.0 * math.pi:
        raise DomainError("phi must lie in [0, 2*pi]")
    return SpinState(up=complex(_SQRT_HALF),
                     down=cmath.exp(1j * phi) * _SQRT_HALF)


def overlap(a: SpinState, b: SpinState) -> complex:
    """Inner product <a|b>."""
    return a.up.conjugate() * b.up + a.down.conjugate() * b.down
