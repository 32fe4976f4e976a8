import math

import mpmath
import numpy as np
import pytest

from torus_coherent import lattice_oracle as lo
from torus_coherent.torus_cs import TorusPhasePoint

DISPERSION_ORIGIN = 0.49897913083282046  # <J1^2> - <J1>^2 at l = 0
ORIGIN = TorusPhasePoint((0, 0), (0, 0))
P = TorusPhasePoint((0.7, -1.2), (2.0, 0.5))


@pytest.mark.parametrize("op", lo.OPERATOR_MENU)
def test_menu_operators_evaluate(op):
    assert np.isfinite(lo.oracle_expectation(op, P))


@pytest.mark.parametrize("op", ["J3", "", "J1**2", "X", "J1*", "U1 U2", "J1^3"])
def test_unknown_operator(op):
    with pytest.raises(lo.UnknownOperator):
        lo.oracle_expectation(op, P)


def test_dispersion_at_origin():
    j = lo.oracle_expectation("J1", ORIGIN).real
    j2 = lo.oracle_expectation("J1^2", ORIGIN).real
    assert j == pytest.approx(0.0, abs=1e-15)
    assert j2 - j * j == pytest.approx(DISPERSION_ORIGIN, rel=1e-13)


@pytest.mark.parametrize("j0", [(0, 0), (0.5, 0.5), (0.3, 0.7)])
def test_operator_algebra(j0):
    for k in "12":
        jU = lo.oracle_expectation(f"J{k}*U{k}", P, j0)
        Uj = lo.oracle_expectation(f"U{k}*J{k}", P, j0)
        U = lo.oracle_expectation(f"U{k}", P, j0)
        # [J, U] = U
        assert abs(jU - Uj - U) < 1e-13
    assert lo.oracle_expectation("U1*U1d", P, j0) == pytest.approx(1.0, abs=1e-14)
    prod = lo.oracle_expectation("U1*U2", P, j0)
    assert prod == pytest.approx(lo.oracle_expectation("U1", P, j0) * lo.oracle_expectation("U2", P, j0),
                                 rel=1e-13)


def test_density_norm_full_grid():
    assert lo.oracle_density_norm(P) == pytest.approx(1.0, abs=1e-12)
    assert lo.oracle_density_norm(P, (0.3, 0.7)) == pytest.approx(1.0, abs=1e-12)


def test_density_norm_stable_under_grid_halving():
    full = lo.oracle_density_norm(ORIGIN)
    half = lo.oracle_density_norm(ORIGIN, config=lo.OracleConfig(grid=(256, 256)))
    assert abs(full - half) < 1e-12


def test_single_lattice_point_gives_uniform_density():
    j = np.arange(-3, 4, dtype=float)
    c = np.zeros((7, 7), dtype=complex)
    c[3, 3] = 1.0
    d = lo.oracle_density(c, j, j, 16, 16)
    assert np.allclose(d, 1.0, atol=1e-15)


def test_config_rejects_narrow_window():
    with pytest.raises(ValueError):
        lo.coefficients((12.0, 0.0), (0, 0), (0, 0), lo.OracleConfig(half_width=50))
    lo.coefficients((11.0, 0.0), (0, 0), (0, 0), lo.OracleConfig(half_width=50))


@pytest.mark.parametrize("kind", [2, 3])
@pytest.mark.parametrize("v", [0, 0.3 + 0.2j, -0.8 + 1.1j])
@pytest.mark.parametrize("tau", [1j / math.pi, 1j / (2 * math.pi)])
def test_oracle_theta_against_mpmath(kind, v, tau):
    q = mpmath.exp(1j * mpmath.pi * tau)
    ref = complex(mpmath.jtheta(kind, mpmath.pi * v, q))
    assert abs(lo.oracle_theta(kind, v, tau) - ref) <= 1e-14 * max(1.0, abs(ref))


def test_oracle_overlap_hermitian():
    a = lo.oracle_overlap(P, ORIGIN, (0.3, 0.1))
    b = lo.oracle_overlap(ORIGIN, P, (0.3, 0.1))
    assert a == pytest.approx(b.conjugate(), rel=1e-15)
