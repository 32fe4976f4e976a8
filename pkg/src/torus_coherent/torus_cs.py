"""Coherent states on the two-torus.

The torus Hilbert space is the tensor product of two circle spaces, so every
closed form here is a product of two circle factors.  The four time-reversal
symmetric sectors differ only in which theta function (theta_2 or theta_3)
is attached to each axis.
"""
from __future__ import annotations

import contextvars
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from . import circle_cs
from .circle_cs import PhasePoint1D, normalize_j0
from .theta_engine import DEFAULT_EPS, TAU_CIRCLE, TAU_POSITION, theta

_LABELS = {"0": 0.0, "h": 0.5, "1/2": 0.5, "0.5": 0.5}


@dataclass(frozen=True)
class TorusSector:
    j01: float = 0.0
    j02: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "j01", normalize_j0(self.j01))
        object.__setattr__(self, "j02", normalize_j0(self.j02))

    @property
    def j0(self) -> tuple[float, float]:
        return (self.j01, self.j02)

    @property
    def is_symmetric(self) -> bool:
        """True for the four sectors closed under time reversal j -> -j."""
        return self.j01 in (0.0, 0.5) and self.j02 in (0.0, 0.5)

    @property
    def kinds(self) -> tuple[int, int]:
        return (circle_cs.theta_kind(self.j01), circle_cs.theta_kind(self.j02))

    @property
    def label(self) -> str:
        return ",".join("0" if x == 0.0 else "h" if x == 0.5 else repr(x) for x in self.j0)

    @classmethod
    def parse(cls, text: str) -> "TorusSector":
        """Parse '0,0', '0,h', 'h,0', 'h,h' (also '1/2' or '0.5' for h)."""
        parts = [p.strip() for p in text.split(",")]
        if len(parts) != 2 or any(p not in _LABELS for p in parts):
            raise ValueError(f"sector must look like '0,h', got {text!r}")
        return cls(_LABELS[parts[0]], _LABELS[parts[1]])


SYMMETRIC_SECTORS = (
    TorusSector(0.0, 0.0),
    TorusSector(0.0, 0.5),
    TorusSector(0.5, 0.0),
    TorusSector(0.5, 0.5),
)


def _pair(x, name: str) -> tuple[float, float]:
    x = tuple(float(v) for v in x)
    if len(x) != 2:
        raise ValueError(f"{name} must have two components")
    return x


@dataclass(frozen=True)
class TorusPhasePoint:
    l: tuple[float, float]
    alpha: tuple[float, float]

    def __post_init__(self):
        object.__setattr__(self, "l", _pair(self.l, "l"))
        a = _pair(self.alpha, "alpha")
        object.__setattr__(self, "alpha", tuple(x % (2 * math.pi) for x in a))

    @property
    def z(self) -> tuple[complex, complex]:
        return tuple(np.exp(-np.array(self.l) + 1j * np.array(self.alpha)))

    def axis(self, k: int) -> PhasePoint1D:
        return PhasePoint1D(self.l[k], self.alpha[k])


@dataclass(frozen=True)
class TorusState:
    """Coefficients on a rectangular window of Z^2 + j0.

    ``coeffs[a, b]`` belongs to j = (centers[0] - half_widths[0] + a,
    centers[1] - half_widths[1] + b).
    """

    sector: TorusSector
    centers: tuple[float, float]
    half_widths: tuple[int, int]
    coeffs: np.ndarray
    tail: float = 0.0

    def lattice(self, k: int) -> np.ndarray:
        w = self.half_widths[k]
        return self.centers[k] + np.arange(-w, w + 1)

    def norm2(self) -> float:
        return float(np.sum(np.abs(self.coeffs) ** 2))

    def corner(self, k: int) -> float:
        return self.centers[k] - self.half_widths[k]


def amplitude(j, p: TorusPhasePoint, sector: TorusSector | None = None) -> complex:
    j = _pair(j, "j")
    if sector is not None:
        for k in range(2):
            if not circle_cs.on_lattice(j[k], sector.j0[k]):
                raise ValueError(f"j={j} is not on the lattice Z^2 + {sector.j0}")
    l, a = np.array(p.l), np.array(p.alpha)
    jv = np.array(j)
    return complex(np.exp(l @ jv - 1j * (a @ jv) - 0.5 * (jv @ jv)))


def build_state(p: TorusPhasePoint, sector: TorusSector = SYMMETRIC_SECTORS[0],
                tail_eps: float = 1e-14) -> TorusState:
    s1 = circle_cs.build_state1d(p.axis(0), sector.j01, tail_eps)
    s2 = circle_cs.build_state1d(p.axis(1), sector.j02, tail_eps)
    return TorusState(
        sector,
        (s1.center, s2.center),
        (s1.half_width, s2.half_width),
        np.outer(s1.coeffs, s2.coeffs),
        max(s1.tail, s2.tail),
    )


def embed(s: TorusState, corner: Sequence[float], shape: Sequence[int]) -> np.ndarray:
    """Coefficients of ``s`` on another window (zero where ``s`` has none)."""
    out = np.zeros(tuple(shape), dtype=complex)
    offs = []
    for k in range(2):
        d = s.corner(k) - corner[k]
        if abs(d - round(d)) > 1e-9:
            raise ValueError("windows are on different lattices")
        offs.append(int(round(d)))
    src = [slice(None), slice(None)]
    dst = [slice(None), slice(None)]
    for k in range(2):
        n_src = s.coeffs.shape[k]
        lo = max(offs[k], 0)
        hi = min(offs[k] + n_src, shape[k])
        if hi <= lo:
            return out
        dst[k] = slice(lo, hi)
        src[k] = slice(lo - offs[k], hi - offs[k])
    out[tuple(dst)] = s.coeffs[tuple(src)]
    return out


def union_window(*states: TorusState) -> tuple[tuple[float, float], tuple[int, int]]:
    corner, shape = [], []
    for k in range(2):
        lo = min(s.corner(k) for s in states)
        hi = max(s.corner(k) + s.coeffs.shape[k] - 1 for s in states)
        corner.append(lo)
        shape.append(int(round(hi - lo)) + 1)
    return tuple(corner), tuple(shape)


def inner(s: TorusState, t: TorusState) -> complex:
    """<s|t> with s conjugated; windows may differ but must share a lattice."""
    corner, shape = union_window(s, t)
    return complex(np.vdot(embed(s, corner, shape), embed(t, corner, shape)))


def apply_U(s: TorusState, axis: int) -> TorusState:
    """U_k|j> = |j + e_k>."""
    centers = list(s.centers)
    centers[axis] += 1
    return TorusState(s.sector, tuple(centers), s.half_widths, s.coeffs.copy(), s.tail)


def apply_J(s: TorusState, axis: int) -> TorusState:
    j = s.lattice(axis)
    factor = j[:, None] if axis == 0 else j[None, :]
    return TorusState(s.sector, s.centers, s.half_widths, factor * s.coeffs, s.tail)


def apply_Z(s: TorusState, axis: int) -> TorusState:
    """Z_k = exp(-J_k + 1/2) U_k."""
    u = apply_U(s, axis)
    j = u.lattice(axis)
    factor = np.exp(-j + 0.5)
    factor = factor[:, None] if axis == 0 else factor[None, :]
    return TorusState(s.sector, u.centers, u.half_widths, factor * u.coeffs, s.tail)


def eigen_residual(s: TorusState, p: TorusPhasePoint, axis: int) -> float:
    """Relative residual of Z_k|z> - z_k|z> on the interior (rows both cover)."""
    zs = apply_Z(s, axis)
    if axis == 0:
        lhs, rhs = zs.coeffs[:-1, :], s.coeffs[1:, :]
    else:
        lhs, rhs = zs.coeffs[:, :-1], s.coeffs[:, 1:]
    z = p.z[axis]
    return float(np.linalg.norm(lhs - z * rhs) / np.linalg.norm(s.coeffs))


def _require_symmetric(sector: TorusSector):
    if not sector.is_symmetric:
        raise ValueError(
            f"sector {sector.j0} is not time-reversal symmetric; "
            "use quasiperiodic_bc for general j0"
        )


def overlap(z: TorusPhasePoint, w: TorusPhasePoint, sector: TorusSector = SYMMETRIC_SECTORS[0],
            eps: float = DEFAULT_EPS) -> complex:
    _require_symmetric(sector)
    return (circle_cs.overlap1d(z.axis(0), w.axis(0), sector.j01, eps)
            * circle_cs.overlap1d(z.axis(1), w.axis(1), sector.j02, eps))


def expect_J(l, sector: TorusSector = SYMMETRIC_SECTORS[0],
             eps: float = DEFAULT_EPS) -> tuple[float, float]:
    _require_symmetric(sector)
    l = _pair(l, "l")
    return tuple(circle_cs.expect_J1d(l[k], sector.j0[k], eps) for k in range(2))


def expect_U(p: TorusPhasePoint, sector: TorusSector = SYMMETRIC_SECTORS[0],
             eps: float = DEFAULT_EPS) -> tuple[complex, complex]:
    _require_symmetric(sector)
    return tuple(circle_cs.expect_U1d(p.axis(k), sector.j0[k], eps) for k in range(2))


def relative_expect_U(p: TorusPhasePoint, sector: TorusSector = SYMMETRIC_SECTORS[0],
                      eps: float = DEFAULT_EPS) -> tuple[complex, complex]:
    """<U_k> at p over <U_k> at the phase-space origin; approximately exp(i alpha_k)."""
    _require_symmetric(sector)
    return tuple(circle_cs.relative_expect_U1d(p.axis(k), sector.j0[k], eps) for k in range(2))


def axis_wavefunction(kind: int, l: float, alpha: float, phi, eps: float = DEFAULT_EPS):
    """sum_j exp(l j - i alpha j - j^2/2 + i j phi) over one symmetric lattice."""
    v = (np.asarray(phi, dtype=float) - alpha - 1j * l) / (2 * math.pi)
    return theta(kind, v, TAU_POSITION, eps)


def position_wavefunction(p: TorusPhasePoint, phi, sector: TorusSector = SYMMETRIC_SECTORS[0],
                          eps: float = DEFAULT_EPS):
    """<phi|l, alpha> as a product of two theta functions with tau = i/(2 pi).

    ``phi`` is a pair; each component may be an array (they broadcast).
    """
    _require_symmetric(sector)
    k1, k2 = sector.kinds
    f1 = axis_wavefunction(k1, p.l[0], p.alpha[0], phi[0], eps)
    f2 = axis_wavefunction(k2, p.l[1], p.alpha[1], phi[1], eps)
    return f1 * f2


def state_wavefunction(s: TorusState, phi1, phi2) -> np.ndarray:
    """sum_j c_j exp(i j . phi) summed directly over the state window.

    phi1 and phi2 are 1-D arrays; the result has shape (len(phi1), len(phi2)).
    """
    e1 = np.exp(1j * np.outer(np.asarray(phi1, dtype=float), s.lattice(0)))
    e2 = np.exp(1j * np.outer(np.asarray(phi2, dtype=float), s.lattice(1)))
    return e1 @ s.coeffs @ e2.T


@dataclass(frozen=True)
class DensityGrid:
    """p(phi1, phi2) sampled at phi_k = 2 pi m / n_k, m = 0..n_k-1.

    ``values[m1, m2]``: phi1 is the slow (row) index.
    """

    values: np.ndarray

    @property
    def n1(self) -> int:
        return self.values.shape[0]

    @property
    def n2(self) -> int:
        return self.values.shape[1]

    @property
    def phi1(self) -> np.ndarray:
        return grid_angles(self.n1)

    @property
    def phi2(self) -> np.ndarray:
        return grid_angles(self.n2)

    def mean(self) -> float:
        # rectangle rule for (1/4 pi^2) * integral over the torus
        return float(np.mean(self.values))

    def argmax(self) -> tuple[int, int]:
        m1, m2 = np.unravel_index(int(np.argmax(self.values)), self.values.shape)
        return int(m1), int(m2)

    def argmax_phi(self) -> tuple[float, float]:
        m1, m2 = self.argmax()
        return (float(self.phi1[m1]), float(self.phi2[m2]))

    def cell_of(self, phi) -> tuple[int, int]:
        """Grid index whose cell [phi_m - h/2, phi_m + h/2) contains ``phi``."""
        out = []
        for x, n in zip(phi, (self.n1, self.n2)):
            h = 2 * math.pi / n
            out.append(int(math.floor((x % (2 * math.pi)) / h + 0.5)) % n)
        return tuple(out)


def grid_angles(n: int) -> np.ndarray:
    return 2 * math.pi * np.arange(n) / n


def separable_density(factor1: Callable[[np.ndarray], np.ndarray],
                      factor2: Callable[[np.ndarray], np.ndarray],
                      n1: int, n2: int, workers: int = 1) -> DensityGrid:
    """Outer product of two per-axis density factors.

    Rows are split into chunks across ``workers`` threads.  Each grid value is
    computed by the same operations regardless of the split, so the result is
    bit-identical for every worker count.
    """
    if n1 < 8 or n2 < 8:
        raise ValueError("density grids need n1, n2 >= 8")
    phi1, phi2 = grid_angles(n1), grid_angles(n2)
    col = np.asarray(factor2(phi2), dtype=float)

    def rows(chunk: np.ndarray) -> np.ndarray:
        return np.multiply.outer(np.asarray(factor1(chunk), dtype=float), col)

    workers = max(1, int(workers))
    if workers == 1:
        return DensityGrid(rows(phi1))
    chunks = np.array_split(phi1, workers)
    # worker threads start with an empty context; carry the caller's over
    ctx = contextvars.copy_context()
    with ThreadPoolExecutor(max_workers=workers) as pool:
        parts = list(pool.map(lambda c: ctx.copy().run(rows, c), chunks))
    return DensityGrid(np.concatenate(parts, axis=0))


def axis_density_factor(kind: int, l: float, alpha: float, eps: float = DEFAULT_EPS):
    """phi -> |theta_kind((phi - alpha - i l)/2pi | i/2pi)|^2 / theta_kind(i l/pi | i/pi)."""
    norm = theta(kind, 1j * l / math.pi, TAU_CIRCLE, eps).real

    def factor(phi):
        return np.abs(axis_wavefunction(kind, l, alpha, phi, eps)) ** 2 / norm

    return factor


def density(p: TorusPhasePoint, sector: TorusSector = SYMMETRIC_SECTORS[0],
            n1: int = 256, n2: int = 256, workers: int = 1,
            eps: float = DEFAULT_EPS) -> DensityGrid:
    _require_symmetric(sector)
    k1, k2 = sector.kinds
    return separable_density(
        axis_density_factor(k1, p.l[0], p.alpha[0], eps),
        axis_density_factor(k2, p.l[1], p.alpha[1], eps),
        n1, n2, workers,
    )


def time_reversal(s: TorusState) -> TorusState:
    """Antiunitary T|j> = |-j>: the coefficient at j becomes conj(c_{-j})."""
    if not s.sector.is_symmetric:
        raise ValueError(f"time reversal is undefined on sector {s.sector.j0}")
    return TorusState(
        s.sector,
        (-s.centers[0], -s.centers[1]),
        s.half_widths,
        np.conj(s.coeffs[::-1, ::-1]),
        s.tail,
    )
