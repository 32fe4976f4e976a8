"""Jacobi theta functions theta_2 and theta_3 with certified series truncation.

Conventions::

    theta_3(v|tau) = sum_n q**(n**2) exp(2 pi i n v)
    theta_2(v|tau) = sum_n q**((n - 1/2)**2) exp(i pi v (2n - 1)),   q = exp(i pi tau)

Both series are summed symmetrically.  The cutoff N is chosen per element from a
geometric majorant of the tail, so the result for a given (v, tau) does not
depend on which other arguments share the same array call.
"""
from __future__ import annotations

import contextlib
import contextvars
import math

import numpy as np

DEFAULT_EPS = 1e-14
MAX_TERMS = 10_000

TAU_CIRCLE = 1j / math.pi  # modulus of overlaps and expectation values
TAU_POSITION = 1j / (2 * math.pi)  # modulus of coordinate wavefunctions

# relative perturbation applied to theta_3; only ever set by fault injection
_theta3_fault = contextvars.ContextVar("theta3_fault", default=0.0)


class ThetaTruncationError(ArithmeticError):
    """The certified cutoff would exceed MAX_TERMS."""


@contextlib.contextmanager
def inject_theta3_fault(rel: float = 1e-6):
    """Multiply every theta_3 value by (1 + rel) inside the block.

    Debug aid for checking that the verification suite is sensitive.
    """
    token = _theta3_fault.set(rel)
    try:
        yield
    finally:
        _theta3_fault.reset(token)


def _check_eps(eps: float) -> float:
    eps = float(eps)
    if not (0.0 < eps <= 1e-6):
        raise ValueError(f"tolerance must satisfy 0 < eps <= 1e-6, got {eps}")
    return eps


def _check_tau(tau) -> complex:
    tau = complex(tau)
    if not tau.imag > 0:
        raise ValueError(f"tau={tau} is not in the upper half-plane")
    return tau


def _tail_bound(a: float, b: np.ndarray, x: np.ndarray) -> np.ndarray:
    # 2 * t(x) / (1 - t(x+1)/t(x)) with t(x) = exp(-a x^2 + b x)
    log_ratio = -a * (2 * x + 1) + b
    with np.errstate(over="ignore", invalid="ignore", divide="ignore"):
        bound = 2.0 * np.exp(-a * x * x + b * x) / (1.0 - np.exp(log_ratio))
    return np.where(log_ratio < 0, bound, np.inf)


def cutoff(tau, v, *, half: bool = False, eps: float = DEFAULT_EPS) -> np.ndarray:
    """Smallest N per element with the tail beyond the last summed term below eps.

    For theta_3 the summed lattice is n = -N..N; for theta_2 it is
    x = n - 1/2 with n = -N+1..N, i.e. |x| <= N - 1/2.
    """
    tau = _check_tau(tau)
    eps = _check_eps(eps)
    a = math.pi * tau.imag
    b = 2 * math.pi * np.abs(np.imag(np.asarray(v, dtype=complex)))
    shift = 0.5 if half else 0.0

    # quadratic estimate of the cutoff, used only to fail fast on pathological input
    bmax = float(b.max()) if b.size else 0.0
    est = (bmax + math.sqrt(bmax * bmax + 4 * a * (math.log(2 / eps) + 1))) / (2 * a)
    if est > 2 * MAX_TERMS:
        raise ThetaTruncationError(f"cutoff estimate {est:.0f} exceeds {MAX_TERMS}")

    # below this the consecutive-term ratio is >= 1 and the majorant is invalid
    n = np.maximum(np.floor((b / a - 1) / 2 + shift) + 1, 0.0)
    pending = _tail_bound(a, b, n - shift) >= eps
    while pending.any():
        n = np.where(pending, n + 1, n)
        if n.max() > MAX_TERMS:
            raise ThetaTruncationError(f"theta series needs more than {MAX_TERMS} terms")
        pending = _tail_bound(a, b, n - shift) >= eps
    return n.astype(np.int64)


def _theta_series(v, tau, half: bool, eps: float) -> np.ndarray:
    tau = _check_tau(tau)
    v = np.asarray(v, dtype=complex)
    n = cutoff(tau, v, half=half, eps=eps)
    nmax = int(n.max()) if n.size else 0
    # reduce Re v to [-1/2, 1/2] (exact); keeps the phases 2 pi x v small
    m = np.round(v.real)
    v = v - m
    sign = np.where(np.fmod(m, 2.0) != 0, -1.0, 1.0) if half else 1.0
    acc = np.zeros(v.shape, dtype=complex)
    with np.errstate(over="ignore", invalid="ignore"):
        # largest |x| first, pairing x with -x
        for k in range(nmax, 0, -1):
            x = k - 0.5 if half else float(k)
            plus = np.exp(1j * math.pi * tau * x * x + 2j * math.pi * x * v)
            minus = np.exp(1j * math.pi * tau * x * x - 2j * math.pi * x * v)
            acc = acc + np.where(k <= n, plus + minus, 0.0)
    if not half:
        acc = acc + 1.0
    return sign * acc


def _scalar_or_array(result: np.ndarray, v):
    return complex(result) if np.ndim(v) == 0 else result


def theta3(v, tau=TAU_CIRCLE, eps: float = DEFAULT_EPS):
    """theta_3(v|tau); accepts a scalar or an array of arguments."""
    out = _theta_series(v, tau, half=False, eps=eps)
    fault = _theta3_fault.get()
    if fault:
        out = out * (1.0 + fault)
    return _scalar_or_array(out, v)


def theta2(v, tau=TAU_CIRCLE, eps: float = DEFAULT_EPS):
    """theta_2(v|tau); accepts a scalar or an array of arguments."""
    return _scalar_or_array(_theta_series(v, tau, half=True, eps=eps), v)


def theta(kind: int, v, tau=TAU_CIRCLE, eps: float = DEFAULT_EPS):
    if kind == 3:
        return theta3(v, tau, eps)
    if kind == 2:
        return theta2(v, tau, eps)
    raise ValueError(f"theta kind must be 2 or 3, got {kind!r}")


def theta_abs_scale(kind: int, v, tau=TAU_CIRCLE, eps: float = DEFAULT_EPS):
    """Sum of the moduli of the series terms.

    This is the natural rounding scale of a theta evaluation and equals
    theta_kind(i Im v | i Im tau).
    """
    tau = _check_tau(tau)
    vi = 1j * np.imag(np.asarray(v, dtype=complex))
    out = _theta_series(vi, 1j * tau.imag, half=(kind == 2), eps=eps).real
    return float(out) if np.ndim(v) == 0 else out


def _log_derivative_terms(eps: float) -> int:
    # tail of sum |x - l| exp(-(x - l)^2) past the window, relative to the
    # denominator which is at least exp(-1/4)
    k = 1
    while True:
        x = k + 0.5
        bound = 2 * x * math.exp(-x * x) / (1 - math.exp(-2 * k))
        if bound < eps * math.exp(-0.25):
            return k
        k += 1
        if k > MAX_TERMS:
            raise ThetaTruncationError("log-derivative window exceeds cap")


def theta_l_log_derivative(kind: int, l, eps: float = DEFAULT_EPS):
    """(1 / (2 theta)) d theta / dl for theta_kind(i l / pi | i / pi).

    Term-wise differentiation gives the lattice mean of x under the weights
    exp(2 l x - x^2), x in Z (kind 3) or Z + 1/2 (kind 2).  Weights are
    recentred on the nearest lattice point so large |l| does not overflow,
    and the result is returned as l + <x - l> so that exact symmetry at
    lattice momenta survives rounding.
    """
    if kind not in (2, 3):
        raise ValueError(f"theta kind must be 2 or 3, got {kind!r}")
    eps = _check_eps(eps)
    l_arr = np.asarray(l, dtype=float)
    s = 0.5 if kind == 2 else 0.0
    centre = np.round(l_arr - s) + s
    k = _log_derivative_terms(eps)
    num = np.zeros(l_arr.shape)
    den = np.zeros(l_arr.shape)
    for m in range(k, 0, -1):
        dp = centre + m - l_arr
        dm = centre - m - l_arr
        wp = np.exp(-dp * dp)
        wm = np.exp(-dm * dm)
        num = num + (dp * wp + dm * wm)
        den = den + (wp + wm)
    d0 = centre - l_arr
    w0 = np.exp(-d0 * d0)
    num = num + d0 * w0
    den = den + w0
    out = l_arr + num / den
    return float(out) if np.ndim(l) == 0 else out


def half_period_shift_check(kind: int, v, tau, eps: float = DEFAULT_EPS) -> float:
    """Residual of theta_k(v + tau/2|tau) = exp(-i pi (tau/4 + v)) theta_k'(v|tau).

    kind=3 checks theta_3 on the left against theta_2 on the right; kind=2
    the swapped form.  The residual is divided by max(1, S) where S is the
    sum of term moduli of the left-hand series, so it is absolute for
    moderate arguments and relative to the rounding scale when the series
    itself is large.
    """
    if kind not in (2, 3):
        raise ValueError(f"theta kind must be 2 or 3, got {kind!r}")
    other = 2 if kind == 3 else 3
    tau = _check_tau(tau)
    v = complex(v)
    lhs = theta(kind, v + tau / 2, tau, eps)
    rhs = np.exp(-1j * math.pi * (tau / 4 + v)) * theta(other, v, tau, eps)
    scale = max(1.0, theta_abs_scale(kind, v + tau / 2, tau, eps))
    return abs(lhs - rhs) / scale
