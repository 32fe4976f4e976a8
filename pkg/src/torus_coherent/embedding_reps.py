"""Functional representations of torus states on a uniform phi-grid.

Flat representation: <f|g> = (1/4 pi^2) int f* g.  Embedded representation
(torus in R^3 with radii R > r): the same integral weighted by the surface
factor 1 + rho cos(phi_2), rho = r/R.  The unitary V: f -> f / sqrt(1 + rho cos phi_2)
maps the first into the second.

Quadrature is the periodic rectangle rule and derivatives are spectral
(FFT), both exact for trigonometric polynomials below the Nyquist mode.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .torus_cs import TorusState, grid_angles, state_wavefunction


@dataclass(frozen=True)
class EmbeddedTorusGeometry:
    R: float = 1.0
    r: float = 0.5

    def __post_init__(self):
        if not (self.R > 0 and self.r >= 0):
            raise ValueError("radii must satisfy R > 0, r >= 0")
        if self.rho >= 1:
            raise ValueError(f"r/R = {self.rho} >= 1: the measure weight is not positive")

    @property
    def rho(self) -> float:
        return self.r / self.R

    @classmethod
    def from_rho(cls, rho: float) -> "EmbeddedTorusGeometry":
        return cls(1.0, float(rho))

    def weight(self, phi2) -> np.ndarray:
        return 1.0 + self.rho * np.cos(phi2)


@dataclass(frozen=True)
class GridFunction:
    """Samples f(phi1_m, phi2_n) on the standard grid phi_k = 2 pi m / n_k.

    ``j0`` fixes the wraparound phase f(phi + 2 pi e_k) = exp(2 pi i j0_k) f(phi).
    """

    values: np.ndarray
    j0: tuple[float, float] = field(default=(0.0, 0.0))

    @property
    def shape(self) -> tuple[int, int]:
        return self.values.shape

    @property
    def phi1(self) -> np.ndarray:
        return grid_angles(self.shape[0])

    @property
    def phi2(self) -> np.ndarray:
        return grid_angles(self.shape[1])

    def with_values(self, values: np.ndarray) -> "GridFunction":
        return GridFunction(values, self.j0)

    @classmethod
    def from_state(cls, s: TorusState, n1: int, n2: int, normalize: bool = False) -> "GridFunction":
        values = state_wavefunction(s, grid_angles(n1), grid_angles(n2))
        if normalize:
            values = values / math.sqrt(s.norm2())
        return cls(values, s.sector.j0)

    @classmethod
    def from_modes(cls, modes: dict, n1: int, n2: int, j0=(0.0, 0.0)) -> "GridFunction":
        """Sum of c * exp(i (m1 + j01) phi1 + i (m2 + j02) phi2) over {(m1, m2): c}."""
        phi1, phi2 = grid_angles(n1)[:, None], grid_angles(n2)[None, :]
        values = np.zeros((n1, n2), dtype=complex)
        for (m1, m2), c in modes.items():
            values += c * np.exp(1j * ((m1 + j0[0]) * phi1 + (m2 + j0[1]) * phi2))
        return cls(values, (float(j0[0]), float(j0[1])))


def _same_shape(f: GridFunction, g: GridFunction):
    if f.shape != g.shape:
        raise ValueError(f"grid shapes differ: {f.shape} vs {g.shape}")


def inner_flat(f: GridFunction, g: GridFunction) -> complex:
    _same_shape(f, g)
    return complex(np.mean(np.conj(f.values) * g.values))


def inner_embedded(f: GridFunction, g: GridFunction, geom: EmbeddedTorusGeometry) -> complex:
    _same_shape(f, g)
    w = geom.weight(f.phi2)[None, :]
    return complex(np.mean(w * np.conj(f.values) * g.values))


def map_V(f: GridFunction, geom: EmbeddedTorusGeometry) -> GridFunction:
    return f.with_values(f.values / np.sqrt(geom.weight(f.phi2))[None, :])


def map_V_inverse(f: GridFunction, geom: EmbeddedTorusGeometry) -> GridFunction:
    return f.with_values(f.values * np.sqrt(geom.weight(f.phi2))[None, :])


def spectral_minus_i_derivative(f: GridFunction, axis: int) -> GridFunction:
    """-i d/dphi_axis, spectrally.  Quasiperiodic phases are stripped first:
    f = exp(i j0 phi) g with g periodic, so -i f' = exp(i j0 phi) (j0 g - i g')."""
    n = f.shape[axis]
    j0 = f.j0[axis]
    phi = grid_angles(n)
    shape = (n, 1) if axis == 0 else (1, n)
    carrier = np.exp(1j * j0 * phi).reshape(shape)
    g = f.values / carrier
    k = np.fft.fftfreq(n, d=1.0 / n)
    if n % 2 == 0:
        k[n // 2] = 0.0  # Nyquist mode has no well-defined derivative
    gk = np.fft.fft(g, axis=axis)
    dg = np.fft.ifft(gk * k.reshape(shape), axis=axis)  # -i * (i k) = k
    return f.with_values(carrier * (j0 * g + dg))


def apply_J(f: GridFunction, axis: int) -> GridFunction:
    """Flat-representation J_k = -i d/dphi_k."""
    return spectral_minus_i_derivative(f, axis)


def apply_U(f: GridFunction, axis: int) -> GridFunction:
    phi = f.phi1[:, None] if axis == 0 else f.phi2[None, :]
    return f.with_values(np.exp(1j * phi) * f.values)


def apply_Jtilde1(f: GridFunction, geom: EmbeddedTorusGeometry) -> GridFunction:
    # V depends on phi_2 only, so J_1 is unchanged
    return apply_J(f, 0)


def apply_Jtilde2(f: GridFunction, geom: EmbeddedTorusGeometry) -> GridFunction:
    """V J_2 V^-1 = -i d/dphi_2 + (i/2) rho sin(phi_2) / (1 + rho cos(phi_2))."""
    phi2 = f.phi2
    correction = 0.5j * geom.rho * np.sin(phi2) / geom.weight(phi2)
    d = spectral_minus_i_derivative(f, 1)
    return f.with_values(d.values + correction[None, :] * f.values)


def apply_Utilde(f: GridFunction, axis: int, geom: EmbeddedTorusGeometry) -> GridFunction:
    return apply_U(f, axis)


def _gauss_nodes(a: float, b: float, n: int) -> tuple[np.ndarray, np.ndarray]:
    x, w = np.polynomial.legendre.leggauss(n)
    half = 0.5 * (b - a)
    return a + half * (x + 1), half * w


def density_invariance_check(s: TorusState, geom: EmbeddedTorusGeometry, window,
                             nodes: int | None = None) -> tuple[float, float]:
    """Probability of finding the normalised state in a phi-rectangle, computed
    in both representations.

    ``window`` is ((phi1_lo, phi1_hi), (phi2_lo, phi2_hi)).  Returns
    (embedded: (1/4pi^2) int w |V f|^2, flat: (1/4pi^2) int |f|^2), both by
    tensor Gauss-Legendre quadrature.
    """
    (a1, b1), (a2, b2) = window
    if nodes is None:
        # enough nodes for the coherent-state bandwidth over the widest side
        nodes = 16 + int(math.ceil(12 * max(b1 - a1, b2 - a2)))
    x1, w1 = _gauss_nodes(a1, b1, nodes)
    x2, w2 = _gauss_nodes(a2, b2, nodes)
    f = state_wavefunction(s, x1, x2) / math.sqrt(s.norm2())
    weight = geom.weight(x2)[None, :]
    f_tilde = f / np.sqrt(weight)
    quad = np.outer(w1, w2) / (4 * math.pi ** 2)
    embedded = float(np.sum(quad * weight * np.abs(f_tilde) ** 2))
    flat = float(np.sum(quad * np.abs(f) ** 2))
    return embedded, flat
