import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from torus_coherent import quasiperiodic_bc as qb
from torus_coherent import torus_cs as tc
from torus_coherent.lattice_oracle import oracle_expectation, oracle_overlap, oracle_wavefunction

QUARTER_SELF_OVERLAP = 3.1419176399533895  # j0 = (1/4, 0) at the origin
J_QUARTER_LABEL = 0.49967501363640369      # <J1> at l1 = 1/2, j01 = 1/4

coord = st.floats(-2.5, 2.5, allow_nan=False)
angle = st.floats(0, 2 * math.pi, allow_nan=False, exclude_max=True)
points = st.builds(lambda a, b, c, d: tc.TorusPhasePoint((a, b), (c, d)), coord, coord, angle, angle)
labels = st.tuples(st.floats(0, 1, exclude_max=True), st.floats(0, 1, exclude_max=True))
sectors = st.sampled_from(tc.SYMMETRIC_SECTORS)


def test_as_j0_reduces_mod_one():
    assert qb.as_j0((1.25, -0.5)) == (0.25, 0.5)
    with pytest.raises(ValueError):
        qb.as_j0((0.1,))
    with pytest.raises(ValueError):
        qb.as_j0((math.nan, 0.0))


def test_quarter_label_examples():
    o = tc.TorusPhasePoint((0, 0), (0, 0))
    assert qb.overlap_general(o, o, (0.25, 0)) == pytest.approx(QUARTER_SELF_OVERLAP, rel=1e-14)
    assert qb.expect_J_general((0.5, 0.0), (0.25, 0.0))[0] == pytest.approx(J_QUARTER_LABEL, abs=1e-14)


@given(z=points, w=points, sector=sectors)
def test_overlap_reduces_to_symmetric_sectors(z, w, sector):
    a = qb.overlap_general(z, w, sector.j0)
    b = tc.overlap(z, w, sector)
    assert abs(a - b) <= 1e-12 * abs(b)


@given(p=points, sector=sectors)
def test_expectations_reduce_to_symmetric_sectors(p, sector):
    assert qb.expect_J_general(p.l, sector.j0) == pytest.approx(tc.expect_J(p.l, sector), abs=1e-12)
    for a, b in zip(qb.expect_U_general(p, sector.j0), tc.expect_U(p, sector)):
        assert abs(a - b) < 1e-12


@given(p=points, sector=sectors, phi=st.tuples(angle, angle))
def test_wavefunction_reduces_to_symmetric_sectors(p, sector, phi):
    a = qb.wavefunction_general(p, phi, sector.j0)
    b = tc.position_wavefunction(p, phi, sector)
    scale = math.exp((p.l[0] ** 2 + p.l[1] ** 2) / 2)
    assert abs(a - b) <= 1e-12 * max(abs(b), 1e-3 * scale)


@settings(max_examples=60)
@given(z=points, w=points, j0=labels)
def test_overlap_matches_oracle(z, w, j0):
    ref = oracle_overlap(z, w, j0)
    assert abs(qb.overlap_general(z, w, j0) - ref) <= 1e-10 * abs(ref)


@settings(max_examples=60)
@given(p=points, j0=labels)
def test_expectations_match_oracle(p, j0):
    J = qb.expect_J_general(p.l, j0)
    U = qb.expect_U_general(p, j0)
    assert abs(J[0] - oracle_expectation("J1", p, j0).real) < 1e-10
    assert abs(J[1] - oracle_expectation("J2", p, j0).real) < 1e-10
    assert abs(U[0] - oracle_expectation("U1", p, j0)) < 1e-10
    assert abs(U[1] - oracle_expectation("U2", p, j0)) < 1e-10


@given(p=points, j0=labels, phi=st.tuples(angle, angle))
def test_wavefunction_matches_oracle(p, j0, phi):
    ref = oracle_wavefunction(p, phi, j0)
    got = qb.wavefunction_general(p, phi, j0)
    scale = math.exp((p.l[0] ** 2 + p.l[1] ** 2) / 2)
    assert abs(got - ref) <= 1e-10 * max(abs(ref), 1e-3 * scale)


@given(p=points, j0=labels, phi=st.tuples(angle, angle))
def test_quasiperiodic_phase(p, j0, phi):
    base = qb.wavefunction_general(p, phi, j0)
    scale = math.exp((p.l[0] ** 2 + p.l[1] ** 2) / 2)
    for k in range(2):
        moved = list(phi)
        moved[k] += 2 * math.pi
        got = qb.wavefunction_general(p, moved, j0)
        want = cmath.exp(2j * math.pi * qb.as_j0(j0)[k]) * base
        assert abs(got - want) <= 1e-12 * max(abs(base), 1e-3 * scale)


@given(z=points, w=points, j0=labels)
def test_label_only_matters_mod_one(z, w, j0):
    a = qb.overlap_general(z, w, j0)
    b = qb.overlap_general(z, w, (j0[0] + 1, j0[1] - 2))
    # the mod-1 reduction may move the label by an ulp
    assert abs(a - b) <= 1e-13 * abs(a)


@given(z=points, w=points, j0=labels)
def test_complex_label_form(z, w, j0):
    a = qb.overlap_general_z(z.z, w.z, j0)
    b = qb.overlap_general(z, w, j0)
    assert abs(a - b) <= 1e-12 * abs(b)


@given(z=points, w=points, j0=labels)
def test_overlap_hermitian(z, w, j0):
    a, b = qb.overlap_general(z, w, j0), qb.overlap_general(w, z, j0)
    assert abs(a - b.conjugate()) <= 1e-12 * abs(a)


@given(j0=labels, n=st.tuples(st.integers(-2, 2), st.integers(-2, 2)))
def test_J_exact_on_shifted_lattice(j0, n):
    l = (n[0] + j0[0], n[1] + j0[1])
    assert qb.expect_J_general(l, j0) == pytest.approx(l, abs=1e-12)


@given(p=points, j0=labels)
def test_relative_U_phase(p, j0):
    for k, r in enumerate(qb.relative_expect_U_general(p, j0)):
        assert abs(abs(r) - 1) < 1e-3
        assert abs(np.angle(r * np.exp(-1j * p.alpha[k]))) < 1e-3


@pytest.mark.parametrize("p", [
    tc.TorusPhasePoint((1, 1), (math.pi, math.pi / 3)),
    tc.TorusPhasePoint((-0.4, 2.2), (0.1, 5.0)),
])
def test_density_bit_exact_at_zero_label(p):
    a = qb.density_general(p, (0.0, 0.0), 48, 40)
    b = tc.density(p, tc.SYMMETRIC_SECTORS[0], 48, 40)
    assert a.values.tobytes() == b.values.tobytes()


def test_density_general_normalised_and_peaked():
    p = tc.TorusPhasePoint((1, 1), (math.pi, math.pi / 3))
    d = qb.density_general(p, (0.3, 0.6))
    assert d.mean() == pytest.approx(1.0, abs=1e-6)
    assert d.argmax() == d.cell_of((math.pi, math.pi / 3))


def test_density_general_matches_window():
    p = tc.TorusPhasePoint((0.6, -0.2), (1.0, 4.0))
    j0 = (0.3, 0.7)
    s = qb.build_general_state(p, j0)
    phi1, phi2 = tc.grid_angles(24), tc.grid_angles(20)
    direct = np.abs(tc.state_wavefunction(s, phi1, phi2)) ** 2 / s.norm2()
    d = qb.density_general(p, j0, 24, 20)
    assert np.allclose(d.values, direct, rtol=1e-11)


@given(p=points, j0=labels)
def test_general_state_window_norm(p, j0):
    s = qb.build_general_state(p, j0)
    assert s.norm2() == pytest.approx(qb.overlap_general(p, p, j0).real, rel=1e-12)
