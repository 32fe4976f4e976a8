"""Coherent states for a particle on a circle.

States are labelled by a phase-space point (l, alpha), z = exp(-l + i alpha),
with angular-momentum amplitudes <j|l, alpha> = exp(l j - i j alpha - j^2/2)
on the lattice j in Z + j0.  States are kept unnormalised; every expectation
value is a ratio.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .theta_engine import (
    DEFAULT_EPS,
    TAU_CIRCLE,
    theta,
    theta_l_log_derivative,
)

# theta kind per boundary label: integer lattice -> theta_3, half-integer -> theta_2
THETA_KIND = {0.0: 3, 0.5: 2}


def normalize_j0(j0: float) -> float:
    j0 = float(j0)
    if not math.isfinite(j0):
        raise ValueError(f"boundary label must be finite, got {j0}")
    return j0 % 1.0


def theta_kind(j0: float) -> int:
    """theta kind for a time-reversal symmetric boundary label (0 or 1/2)."""
    try:
        return THETA_KIND[normalize_j0(j0)]
    except KeyError:
        raise ValueError(
            f"closed theta_2/theta_3 forms need j0 in {{0, 1/2}}, got {j0}; "
            "use the quasiperiodic_bc module for general labels"
        ) from None


def on_lattice(j: float, j0: float, atol: float = 1e-12) -> bool:
    d = j - j0
    return abs(d - round(d)) <= atol


@dataclass(frozen=True)
class PhasePoint1D:
    l: float
    alpha: float

    def __post_init__(self):
        object.__setattr__(self, "l", float(self.l))
        object.__setattr__(self, "alpha", float(self.alpha) % (2 * math.pi))

    @property
    def z(self) -> complex:
        return cmath.exp(-self.l + 1j * self.alpha)

    @classmethod
    def from_z(cls, z: complex) -> "PhasePoint1D":
        return cls(-math.log(abs(z)), cmath.phase(z))


@dataclass(frozen=True)
class StateVector1D:
    """Coefficients c_j for j = center - half_width .. center + half_width.

    ``tail`` records the largest ratio |c_j| / max|c| over the dropped lattice
    points (it bounds every coefficient outside the window).
    """

    j0: float
    center: float
    half_width: int
    coeffs: np.ndarray
    tail: float

    @property
    def lattice(self) -> np.ndarray:
        return self.center + np.arange(-self.half_width, self.half_width + 1)

    def norm2(self) -> float:
        return float(np.sum(np.abs(self.coeffs) ** 2))

    def coefficient(self, j: float) -> complex:
        k = round(j - self.center)
        if abs(j - self.center - k) > 1e-12 or abs(k) > self.half_width:
            return 0j
        return complex(self.coeffs[k + self.half_width])


def amplitude1d(j: float, p: PhasePoint1D, j0: float | None = None) -> complex:
    """<j|l, alpha> = exp(l j - i j alpha - j^2 / 2).

    If ``j0`` is given, j must lie on Z + j0.
    """
    if j0 is not None and not on_lattice(j, j0):
        raise ValueError(f"j={j} is not on the lattice Z + {j0}")
    return cmath.exp(p.l * j - 1j * j * p.alpha - 0.5 * j * j)


def nearest_lattice_point(l: float, j0: float) -> float:
    return round(l - j0) + j0


def window_half_width(l: float, center: float, tail_eps: float) -> tuple[int, float]:
    """Smallest W such that the coefficients dropped past center +- W are below
    tail_eps relative to the largest one.  Returns (W, achieved tail ratio).
    """
    if not tail_eps > 0:
        raise ValueError("tail_eps must be positive")
    log_mag = lambda j: l * j - 0.5 * j * j  # noqa: E731
    log_peak = log_mag(center)
    # log|c_j| is a concave parabola in j, so checking the first dropped
    # point on each side bounds everything beyond it
    log_eps = math.log(tail_eps)
    w = 0
    while True:
        worst = max(log_mag(center + w + 1), log_mag(center - w - 1)) - log_peak
        if worst < log_eps:
            return w, math.exp(worst)
        w += 1


def build_state1d(p: PhasePoint1D, j0: float = 0.0, tail_eps: float = 1e-14) -> StateVector1D:
    j0 = normalize_j0(j0)
    center = nearest_lattice_point(p.l, j0)
    w, tail = window_half_width(p.l, center, tail_eps)
    j = center + np.arange(-w, w + 1)
    coeffs = np.exp(p.l * j - 1j * j * p.alpha - 0.5 * j * j)
    return StateVector1D(j0, center, w, coeffs, tail)


def apply_U1d(s: StateVector1D) -> StateVector1D:
    """U|j> = |j+1>: the coefficients move up by one lattice step."""
    return StateVector1D(s.j0, s.center + 1, s.half_width, s.coeffs.copy(), s.tail)


def apply_Z1d(s: StateVector1D) -> StateVector1D:
    """Z = exp(-J + 1/2) U, i.e. (Z c)_j = exp(-j + 1/2) c_{j-1}."""
    shifted = apply_U1d(s)
    return StateVector1D(
        s.j0, shifted.center, s.half_width,
        np.exp(-shifted.lattice + 0.5) * shifted.coeffs, s.tail,
    )


def eigen_residual1d(s: StateVector1D, p: PhasePoint1D) -> float:
    """||Z|z> - z|z>|| / |||z>|| over the lattice points where both are known."""
    zs = apply_Z1d(s)
    # Z|z> lives on center+1 +- W; compare on the shared interior
    common = s.lattice[1:]
    lhs = zs.coeffs[:-1]
    rhs = p.z * s.coeffs[1:]
    assert np.allclose(zs.lattice[:-1], common)
    return float(np.linalg.norm(lhs - rhs) / np.linalg.norm(s.coeffs))


def overlap_argument(z: PhasePoint1D, w: PhasePoint1D) -> complex:
    """Theta argument of <z|w>, taken from (l, alpha) so no logarithm branch enters."""
    return (z.alpha - w.alpha) / (2 * math.pi) - 1j * (z.l + w.l) / (2 * math.pi)


def overlap1d(z: PhasePoint1D, w: PhasePoint1D, j0: float = 0.0,
              eps: float = DEFAULT_EPS) -> complex:
    return theta(theta_kind(j0), overlap_argument(z, w), TAU_CIRCLE, eps)


def expect_J1d(l: float, j0: float = 0.0, eps: float = DEFAULT_EPS) -> float:
    return theta_l_log_derivative(theta_kind(j0), l, eps)


def theta_ratio(kind_num: int, kind_den: int, l, eps: float = DEFAULT_EPS):
    v = 1j * np.asarray(l, dtype=float) / math.pi
    return theta(kind_num, v, TAU_CIRCLE, eps) / theta(kind_den, v, TAU_CIRCLE, eps)


def u_expectation(l, alpha, j0: float = 0.0, eps: float = DEFAULT_EPS):
    """<U> = exp(i alpha) exp(-1/4) theta_a(il/pi)/theta_b(il/pi); array-friendly.

    (a, b) = (2, 3) on the integer lattice and (3, 2) on the half-integer one.
    """
    kind = theta_kind(j0)
    other = 2 if kind == 3 else 3
    ratio = np.real(theta_ratio(other, kind, l, eps))
    return np.exp(1j * np.asarray(alpha, dtype=float)) * math.exp(-0.25) * ratio


def expect_U1d(p: PhasePoint1D, j0: float = 0.0, eps: float = DEFAULT_EPS) -> complex:
    return complex(u_expectation(p.l, p.alpha, j0, eps))


def relative_expect_U1d(p: PhasePoint1D, j0: float = 0.0, eps: float = DEFAULT_EPS) -> complex:
    """<U> at (l, alpha) divided by <U> at the phase-space origin (0, 0).

    Dividing by the value at (0, alpha) instead would cancel the phase and
    leave a real number close to 1.
    """
    return expect_U1d(p, j0, eps) / expect_U1d(PhasePoint1D(0.0, 0.0), j0, eps)


def classical_error_law(l, j0: float = 0.0):
    """Predicted Delta l = l - <J> = 2 pi exp(-pi^2) sin(2 pi (l - j0)).

    Leading Poisson-resummation term; the next one is O(exp(-4 pi^2)).
    """
    return 2 * math.pi * math.exp(-math.pi ** 2) * np.sin(2 * math.pi * (np.asarray(l) - j0))
