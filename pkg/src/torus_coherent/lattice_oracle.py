"""Brute-force reference values from direct lattice sums.

Deliberately naive: a fixed symmetric window of the lattice Z^2 + j0, full
double sums (no factorisation into circle factors) and compensated summation
via math.fsum.  Nothing here touches the theta engine.
"""
from __future__ import annotations

import math
import re
from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class OracleConfig:
    half_width: int = 50
    grid: tuple[int, int] = (512, 512)

    def check(self, *ls: float) -> None:
        lmax = max((abs(x) for x in ls), default=0.0)
        if self.half_width < 4 * (1 + lmax):
            raise ValueError(
                f"half_width={self.half_width} too small for |l|={lmax}; "
                f"need at least {4 * (1 + lmax):.0f}"
            )


DEFAULT_CONFIG = OracleConfig()


def _fsum_complex(a: np.ndarray) -> complex:
    a = np.ravel(a)
    return complex(math.fsum(a.real), math.fsum(a.imag))


def _j0_pair(j0) -> tuple[float, float]:
    return (float(j0[0]) % 1.0, float(j0[1]) % 1.0)


def lattice_axis(j0: float, half_width: int) -> np.ndarray:
    return np.arange(-half_width, half_width + 1) + j0


def coefficients(l, alpha, j0, config: OracleConfig = DEFAULT_CONFIG):
    """Coefficient array exp(l.j - i alpha.j - j^2/2) on the wide window, with
    the two lattice axes."""
    config.check(*l)
    j0 = _j0_pair(j0)
    j1 = lattice_axis(j0[0], config.half_width)[:, None]
    j2 = lattice_axis(j0[1], config.half_width)[None, :]
    c = np.exp(l[0] * j1 + l[1] * j2 - 1j * (alpha[0] * j1 + alpha[1] * j2)
               - 0.5 * (j1 * j1 + j2 * j2))
    return c, j1[:, 0], j2[0, :]


def oracle_overlap(z, w, j0=(0.0, 0.0), config: OracleConfig = DEFAULT_CONFIG) -> complex:
    """sum_j conj(<j|z>) <j|w>; z and w are anything with .l and .alpha pairs."""
    cz, _, _ = coefficients(z.l, z.alpha, j0, config)
    cw, _, _ = coefficients(w.l, w.alpha, j0, config)
    return _fsum_complex(np.conj(cz) * cw)


def oracle_wavefunction(p, phi, j0=(0.0, 0.0), config: OracleConfig = DEFAULT_CONFIG) -> complex:
    """sum_j <j|l, alpha> exp(i j.phi) at a single point phi."""
    c, j1, j2 = coefficients(p.l, p.alpha, j0, config)
    phase = np.exp(1j * (phi[0] * j1[:, None] + phi[1] * j2[None, :]))
    return _fsum_complex(c * phase)


# menu of monomials in J_k, U_k and U_k^dagger (written Ukd)
_ATOM = r"(J1|J2|U1d|U2d|U1|U2)"
OPERATOR_MENU = (
    "J1", "J2", "U1", "U2", "U1d", "U2d",
    "J1^2", "J2^2", "J1*J2", "U1^2", "U2^2", "U1*U2", "U1*U1d",
    "J1*U1", "J2*U2", "U1*J1", "U2*J2",
)


class UnknownOperator(ValueError):
    pass


def _parse(op: str) -> list[str]:
    if op not in OPERATOR_MENU:
        raise UnknownOperator(f"{op!r} is not in the operator menu {OPERATOR_MENU}")
    factors = []
    for part in op.split("*"):
        m = re.fullmatch(_ATOM + r"(?:\^(\d+))?", part)
        factors.extend([m.group(1)] * int(m.group(2) or 1))
    return factors


def _apply_atom(atom: str, c: np.ndarray, j1: np.ndarray, j2: np.ndarray) -> np.ndarray:
    out = np.zeros_like(c)
    if atom == "J1":
        return j1[:, None] * c
    if atom == "J2":
        return j2[None, :] * c
    # U_k|j> = |j + e_k>, so (U_k c)_j = c_{j - e_k}; the window edge drops out
    if atom == "U1":
        out[1:, :] = c[:-1, :]
    elif atom == "U2":
        out[:, 1:] = c[:, :-1]
    elif atom == "U1d":
        out[:-1, :] = c[1:, :]
    elif atom == "U2d":
        out[:, :-1] = c[:, 1:]
    return out


def oracle_expectation(op: str, p, j0=(0.0, 0.0), config: OracleConfig = DEFAULT_CONFIG) -> complex:
    """<s|Op|s> / <s|s> for a coherent state s = |l, alpha> on Z^2 + j0."""
    factors = _parse(op)
    c, j1, j2 = coefficients(p.l, p.alpha, j0, config)
    v = c
    for atom in reversed(factors):
        v = _apply_atom(atom, v, j1, j2)
    return _fsum_complex(np.conj(c) * v) / math.fsum(np.ravel(np.abs(c) ** 2))


def oracle_density(coeffs: np.ndarray, j1: np.ndarray, j2: np.ndarray, n1: int, n2: int) -> np.ndarray:
    """|sum_j c_j exp(i j.phi)|^2 / sum_j |c_j|^2 on the standard n1 x n2 grid."""
    phi1 = 2 * math.pi * np.arange(n1) / n1
    phi2 = 2 * math.pi * np.arange(n2) / n2
    e1 = np.exp(1j * np.outer(phi1, j1))
    e2 = np.exp(1j * np.outer(phi2, j2))
    psi = e1 @ coeffs @ e2.T
    return np.abs(psi) ** 2 / math.fsum(np.ravel(np.abs(coeffs) ** 2))


def oracle_density_norm(p, j0=(0.0, 0.0), config: OracleConfig = DEFAULT_CONFIG) -> float:
    """Rectangle-rule value of (1/4 pi^2) int p(phi) d^2 phi; completeness makes it 1."""
    c, j1, j2 = coefficients(p.l, p.alpha, j0, config)
    grid = oracle_density(c, j1, j2, *config.grid)
    return math.fsum(np.ravel(grid)) / grid.size


def oracle_theta(kind: int, v: complex, tau: complex, half_width: int = 50) -> complex:
    """theta_2 / theta_3 by fixed wide summation n = -half_width..half_width."""
    n = np.arange(-half_width, half_width + 1, dtype=float)
    x = n - 0.5 if kind == 2 else n
    terms = np.exp(1j * math.pi * complex(tau) * x * x + 2j * math.pi * x * complex(v))
    return _fsum_complex(terms)
