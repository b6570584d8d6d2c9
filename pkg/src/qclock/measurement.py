"""Stern-Gerlach observables over an ensemble of rotated spins.

For an analyzer direction at azimuth theta in the xy-plane, a spin at
azimuth phi lands in the + channel with probability cos^2((theta-phi)/2),
so the ensemble probabilities are convolutions of the angular density with
cos^2 / sin^2 half-angle weights.  The same observables are also reachable
through the ensemble density matrix; both routes are implemented and kept
independent so they can cross-check each other.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from decimal import ROUND_HALF_UP, Decimal
from typing import Iterable, Sequence

import numpy as np

from .distribution import TWO_PI, AngularDistribution, ArrivalScheme, pi_of_phi
from .errors import DomainError
from .quadrature import QuadratureSpec, integrate
from .spin_dynamics import chi_of_phi
from .wavepacket import PhysicsConfig


@dataclass(frozen=True)
class MeasurementResult:
    """Analyzer angle plus the two channel probabilities."""

    theta: float
    p_plus: float
    p_minus: float


@dataclass(frozen=True, eq=False)
class DensityMatrix2:
    """2x2 ensemble density matrix in the z basis."""

    w: np.ndarray

    def trace(self) -> float:
        return float(self.w[0, 0].real + self.w[1, 1].real)

    def purity(self) -> float:
        return float(np.trace(self.w @ self.w).real)

    def eigenvalues(self) -> np.ndarray:
        return np.linalg.eigvalsh(self.w)

    def hermiticity_defect(self) -> float:
        return float(np.abs(self.w - self.w.conj().T).max())

    def prob_plus(self, theta: float) -> float:
        """Expectation of the projector onto the +theta analyzer state."""
        chi = chi_of_phi(theta % TWO_PI)
        vec = np.array([chi.up, chi.down])
        return float((vec.conj() @ self.w @ vec).real)


def _check_theta(theta: float) -> None:
    if not 0.0 <= theta < TWO_PI:
        raise DomainError("theta must lie in [0, 2*pi)")


def p_plus(dist: AngularDistribution, theta: float,
           quad: QuadratureSpec | None = None) -> float:
    """Probability of the + channel at analyzer azimuth theta."""
    _check_theta(theta)
    return integrate(
        lambda phi: dist.density_fn(phi) * np.cos(0.5 * (theta - phi)) ** 2,
        0.0, TWO_PI, quad or QuadratureSpec(), dist.split_hints)


def p_minus(dist: AngularDistribution, theta: float,
            quad: QuadratureSpec | None = None) -> float:
    """Probability of the - channel at analyzer azimuth theta."""
    _check_theta(theta)
    return integrate(
        lambda phi: dist.density_fn(phi) * np.sin(0.5 * (theta - phi)) ** 2,
        0.0, TWO_PI, quad or QuadratureSpec(), dist.split_hints)


def measure(dist: AngularDistribution, theta: float,
            quad: QuadratureSpec | None = None) -> MeasurementResult:
    """Both channel probabilities, each from its own quadrature."""
    return MeasurementResult(theta=theta,
                             p_plus=p_plus(dist, theta, quad),
                             p_minus=p_minus(dist, theta, quad))


def semiclassical_prediction(cfg: PhysicsConfig, theta: float) -> MeasurementResult:
    """Reference prediction with every spin rotated by the packet peak's angle.

    All spins rotate by phi_peak = 2*omega*d/u, so the channel probabilities
    are the pure-state cos^2/sin^2 half-angle laws.
    """
    half = 0.5 * (theta - cfg.phi_peak)
    return MeasurementResult(theta=theta,
                             p_plus=math.cos(half) ** 2,
                             p_minus=math.sin(half) ** 2)


def density_matrix(dist: AngularDistribution,
                   quad: QuadratureSpec | None = None) -> DensityMatrix2:
    """Ensemble density matrix: the angular average of |chi(phi)><chi(phi)|.

    Diagonals are half the density's total mass; off-diagonals average
    exp(-i*phi)/2 over the density.
    """
    quad = quad or QuadratureSpec()
    hints = dist.split_hints
    total = integrate(dist.density_fn, 0.0, TWO_PI, quad, hints)
    avg_cos = integrate(lambda p: dist.density_fn(p) * np.cos(p),
                        0.0, TWO_PI, quad, hints)
    avg_sin = integrate(lambda p: dist.density_fn(p) * np.sin(p),
                        0.0, TWO_PI, quad, hints)
    w01 = 0.5 * complex(avg_cos, -avg_sin)
    w = np.array([[0.5 * total, w01],
                  [w01.conjugate(), 0.5 * total]], dtype=np.complex128)
    return DensityMatrix2(w=w)


@dataclass(frozen=True)
class DeviationRow:
    """One analyzer angle: quantum-scheme vs semiclassical probabilities."""

    theta: float
    p_plus: float
    p_minus: float
    p_plus_semiclassical: float
    delta: float  # p_plus - p_plus_semiclassical


def deviation_report(cfg: PhysicsConfig, scheme: ArrivalScheme,
                     thetas: Sequence[float],
                     quad: QuadratureSpec | None = None) -> list[DeviationRow]:
    """Tabulate quantum vs semiclassical probabilities per analyzer angle."""
    dist = pi_of_phi(cfg, scheme, quad)
    rows = []
    for theta in thetas:
        result = measure(dist, theta, quad)
        reference = semiclassical_prediction(cfg, theta)
        rows.append(DeviationRow(
            theta=theta, p_plus=result.p_plus, p_minus=result.p_minus,
            p_plus_semiclassical=reference.p_plus,
            delta=result.p_plus - reference.p_plus))
    return rows


def write_deviation_csv(rows: Iterable[DeviationRow], path) -> None:
    """CSV with columns (theta_deg, p_plus, p_minus, p_plus_sc, delta)."""
    lines = ["theta_deg,p_plus,p_minus,p_plus_sc,delta"]
    for row in rows:
        lines.append(",".join(f"{v:.17g}" for v in (
            math.degrees(row.theta), row.p_plus, row.p_minus,
            row.p_plus_semiclassical, row.delta)))
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("\n".join(lines) + "\n")


def round_half_away(x: float, decimals: int = 5) -> float:
    """Round with halves going away from zero (table formatting convention)."""
    q = Decimal(1).scaleb(-decimals)
    return float(Decimal(repr(x)).quantize(q, rounding=ROUND_HALF_UP))
