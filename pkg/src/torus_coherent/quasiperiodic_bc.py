"""Torus coherent states for an arbitrary boundary label j0 in [0, 1)^2.

The angular-momentum lattice is Z^2 + j0 and wavefunctions pick up the phase
exp(2 pi i j0_k) under phi_k -> phi_k + 2 pi.  Everything reduces to theta_3
at shifted arguments.  j0 is taken mod 1 on input: the lattice Z + j0 only
depends on j0 mod 1.
"""
from __future__ import annotations

import cmath
import math

import numpy as np

from .circle_cs import normalize_j0
from .theta_engine import DEFAULT_EPS, TAU_CIRCLE, TAU_POSITION, theta2, theta3, theta_l_log_derivative
from .torus_cs import (
    DensityGrid,
    TorusPhasePoint,
    TorusSector,
    TorusState,
    axis_density_factor,
    build_state,
    separable_density,
)


def as_j0(j0) -> tuple[float, float]:
    j0 = tuple(j0)
    if len(j0) != 2:
        raise ValueError("j0 must have two components")
    return (normalize_j0(j0[0]), normalize_j0(j0[1]))


def build_general_state(p: TorusPhasePoint, j0, tail_eps: float = 1e-14) -> TorusState:
    j01, j02 = as_j0(j0)
    return build_state(p, TorusSector(j01, j02), tail_eps)


def overlap_general_axis(l: float, alpha: float, h: float, beta: float, j0: float,
                         eps: float = DEFAULT_EPS) -> complex:
    prefactor = cmath.exp((l + h) * j0 + 1j * (alpha - beta) * j0 - j0 * j0)
    v = (alpha - beta) / (2 * math.pi) - 1j * (l + h - 2 * j0) / (2 * math.pi)
    return prefactor * theta3(v, TAU_CIRCLE, eps)


def overlap_general(z: TorusPhasePoint, w: TorusPhasePoint, j0, eps: float = DEFAULT_EPS) -> complex:
    j0 = as_j0(j0)
    out = 1.0 + 0j
    for k in range(2):
        out *= overlap_general_axis(z.l[k], z.alpha[k], w.l[k], w.alpha[k], j0[k], eps)
    return out


def overlap_general_z(z: tuple[complex, complex], w: tuple[complex, complex], j0,
                      eps: float = DEFAULT_EPS) -> complex:
    """Overlap from complex labels z_k = exp(-l_k + i alpha_k).

    The non-integer powers (z_k^* w_k)^(-j0_k) are multivalued; the branch is
    fixed by reading alpha_k = arg z_k in [0, 2 pi), the same convention
    TorusPhasePoint uses, so the result matches overlap_general.
    """
    def point(x):
        return TorusPhasePoint([-math.log(abs(c)) for c in x], [cmath.phase(c) for c in x])

    return overlap_general(point(z), point(w), j0, eps)


def expect_J_general(l, j0, eps: float = DEFAULT_EPS) -> tuple[float, float]:
    j0 = as_j0(j0)
    return tuple(j0[k] + theta_l_log_derivative(3, float(l[k]) - j0[k], eps) for k in range(2))


def general_u_expectation(l, alpha, j0: float, eps: float = DEFAULT_EPS):
    """One axis of expect_U_general; array-friendly in l and alpha."""
    v = 1j * (np.asarray(l, dtype=float) - normalize_j0(j0)) / math.pi
    ratio = np.real(theta2(v, TAU_CIRCLE, eps) / theta3(v, TAU_CIRCLE, eps))
    return np.exp(1j * np.asarray(alpha, dtype=float)) * math.exp(-0.25) * ratio


def expect_U_general(p: TorusPhasePoint, j0, eps: float = DEFAULT_EPS) -> tuple[complex, complex]:
    j0 = as_j0(j0)
    return tuple(complex(general_u_expectation(p.l[k], p.alpha[k], j0[k], eps)) for k in range(2))


def relative_expect_U_general(p: TorusPhasePoint, j0, eps: float = DEFAULT_EPS) -> tuple[complex, complex]:
    origin = expect_U_general(TorusPhasePoint((0.0, 0.0), (0.0, 0.0)), j0, eps)
    return tuple(u / o for u, o in zip(expect_U_general(p, j0, eps), origin))


def wavefunction_general(p: TorusPhasePoint, phi, j0, eps: float = DEFAULT_EPS):
    """<phi|l, alpha> on Z^2 + j0, including the quasiperiodic prefactor.

    Under phi_k -> phi_k + 2 pi only the prefactor changes, by exp(2 pi i j0_k).
    """
    j0 = as_j0(j0)
    out = 1.0 + 0j
    for k in range(2):
        x = np.asarray(phi[k], dtype=float) - p.alpha[k]
        lk, jk = p.l[k], j0[k]
        prefactor = np.exp(lk * jk + 1j * x * jk - 0.5 * jk * jk)
        out = out * prefactor * theta3((x - 1j * (lk - jk)) / (2 * math.pi), TAU_POSITION, eps)
    return out


def density_general(p: TorusPhasePoint, j0, n1: int = 256, n2: int = 256, workers: int = 1,
                    eps: float = DEFAULT_EPS) -> DensityGrid:
    """Coordinate probability density for general j0.

    The prefactors cancel between |<phi|l,alpha>|^2 and the norm, leaving theta_3
    at the shifted momenta l_k - j0_k.
    """
    j0 = as_j0(j0)
    return separable_density(
        axis_density_factor(3, p.l[0] - j0[0], p.alpha[0], eps),
        axis_density_factor(3, p.l[1] - j0[1], p.alpha[1], eps),
        n1, n2, workers,
    )
