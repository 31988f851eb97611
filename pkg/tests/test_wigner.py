import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from ince_vortex import decompose, fock, wigner
from ince_vortex.errors import ValidationError

PI2 = math.pi**2


def w0(q, p):
    return np.exp(-(q * q + p * p)) / math.pi


def w1(q, p):
    s = q * q + p * p
    return (2 * s - 1) * np.exp(-s) / math.pi


@pytest.fixture(scope="module")
def ref():
    return decompose.coefficients(5, 1, 2.0)


def test_wigner_lg_origin_values():
    assert wigner.wigner_lg(0, 0, 0, 0, 0, 0) == pytest.approx(1 / PI2, rel=1e-15)
    assert wigner.wigner_lg(0, 1, 0, 0, 0, 0) == pytest.approx(-1 / PI2, rel=1e-15)
    assert wigner.wigner_lg(2, 3, 0, 0, 0, 0) == pytest.approx(-1 / PI2, rel=1e-15)


def test_vacuum_is_isotropic_gaussian():
    pts = np.random.default_rng(0).normal(size=(4, 50))
    ref = np.exp(-np.sum(pts**2, axis=0)) / PI2
    np.testing.assert_allclose(wigner.wigner_lg(0, 0, *pts), ref, rtol=1e-13)


def test_vacuum_normalization():
    total = wigner.trapezoid_4d(lambda x, y, px, py: wigner.wigner_lg(0, 0, x, y, px, py), 6.0, 41)
    assert total == pytest.approx(1.0, abs=1e-3)


def test_diagonal_formula_origin_and_decay(ref):
    assert wigner.wigner_diagonal(ref, 0, 0, 0, 0) == -1 / PI2
    for p, m in [(3, 3), (4, 2), (7, 3)]:
        c = decompose.coefficients(p, m, 2.0)
        assert wigner.wigner_diagonal(c, 0, 0, 0, 0) == pytest.approx((-1) ** p / PI2, rel=1e-15)
    # a point at distance 12 from the origin
    assert abs(wigner.wigner_diagonal(ref, 6.0, 6.0, 6.0, 6.0)) < 1e-10


def test_xy_slice_radial_symmetry(ref):
    a = wigner.wigner_diagonal(ref, 1.0, 0.0, 0.0, 0.0)
    b = wigner.wigner_diagonal(ref, math.cos(math.pi / 3), math.sin(math.pi / 3), 0.0, 0.0)
    assert a == pytest.approx(b, abs=1e-10)


@settings(max_examples=50, deadline=None)
@given(pt=st.lists(st.floats(-3, 3), min_size=4, max_size=4), theta=st.floats(0, 2 * math.pi))
def test_rotation_invariance(pt, theta):
    c = decompose.coefficients(5, 1, 2.0)
    x, y, px, py = pt
    cs, sn = math.cos(theta), math.sin(theta)
    rotated = (cs * x - sn * y, sn * x + cs * y, cs * px - sn * py, sn * px + cs * py)
    assert wigner.wigner_diagonal(c, *rotated) == pytest.approx(wigner.wigner_diagonal(c, x, y, px, py), abs=1e-10)


def test_normalization_reference_state(ref):
    total = wigner.trapezoid_4d(lambda x, y, px, py: wigner.wigner_diagonal(ref, x, y, px, py))
    assert total == pytest.approx(1.0, abs=5e-3)


def test_exact_oracle_known_states():
    vac = fock.TwoModeState.from_array([1.0])
    assert wigner.wigner_exact(vac, 0, 0, 0, 0) == pytest.approx(1 / PI2, rel=1e-10)
    one = fock.TwoModeState.from_array([1.0, 0.0])  # |1,0>: one photon in mode a (x)
    assert wigner.wigner_exact(one, 0, 0, 0, 0) == pytest.approx(-1 / PI2, rel=1e-10)
    pts = np.random.default_rng(2).uniform(-2, 2, size=(4, 6))
    np.testing.assert_allclose(wigner.wigner_exact(one, *pts), w1(pts[0], pts[2]) * w0(pts[1], pts[3]),
                               atol=1e-12)


def test_exact_oracle_reference_origin(ref):
    state = fock.evolve(fock.initial_state(ref))
    assert wigner.wigner_exact(state, 0, 0, 0, 0) == pytest.approx(-1 / PI2, abs=1e-6)


def test_single_lg_exact_vs_formula():
    lattice = np.linspace(-4, 4, 9)
    G = np.meshgrid(*(lattice,) * 4, indexing="ij")
    for N in (1, 3, 4):
        for j in range(decompose.j_max(N) + 1):
            amps = np.zeros(decompose.j_max(N) + 1)
            amps[j] = 1
            c = decompose.CoefficientVector.from_amplitudes(N, amps)
            exact = wigner.wigner_exact_grid(fock.evolve(fock.initial_state(c)), *(lattice,) * 4)
            np.testing.assert_allclose(exact, wigner.wigner_lg(j, N - 2 * j, *G), atol=1e-10)


def test_multi_component_gap_is_finite(ref):
    """Cross terms make the diagonal formula differ from the exact Wigner off the origin."""
    lattice = np.linspace(-2, 2, 5)
    G = np.meshgrid(*(lattice,) * 4, indexing="ij")
    exact = wigner.wigner_exact_grid(fock.evolve(fock.initial_state(ref)), *(lattice,) * 4)
    gap = np.max(np.abs(exact - wigner.wigner_diagonal(ref, *G)))
    assert 1e-4 < gap < 0.2


def test_slices(ref):
    grid = np.linspace(-3, 3, 31)
    sl = wigner.wigner_slice("diagonal", ref, ("x", "py"), grid, grid, {"y": 0.0, "px": 0.0})
    assert sl.values.shape == (31, 31)
    assert sl.name == "W_x_py"
    assert sl.frozen == {"y": 0.0, "px": 0.0}
    assert sl.values[15, 15] == pytest.approx(-1 / PI2)
    # slice values equal pointwise evaluation
    assert sl.values[4, 20] == pytest.approx(float(wigner.wigner_diagonal(ref, grid[4], 0, 0, grid[20])))
    side = sl.sidecar()
    assert side["axes"] == ["x", "py"] and side["formula"] == "diagonal"
    for axes in [("x", "px"), ("y", "py"), ("x", "y"), ("px", "py")]:
        assert wigner.wigner_slice("diagonal", ref, axes, grid, grid).values.min() < 0


def test_xpy_slice_is_anisotropic(ref):
    grid = np.linspace(-3, 3, 31)
    sl = wigner.wigner_slice("diagonal", ref, ("x", "py"), grid, grid).values
    # Q1 = x py / 2 changes sign between the diagonals, so the slice is not radial
    assert abs(sl[20, 20] - sl[20, 10]) > 1e-3
    xy = wigner.wigner_slice("diagonal", ref, ("x", "y"), grid, grid).values
    np.testing.assert_allclose(xy, xy.T, atol=1e-14)


def test_exact_slice_matches_grid(ref):
    grid = np.linspace(-2, 2, 5)
    sl = wigner.wigner_slice("exact", ref, ("y", "px"), grid, grid, {"x": 0.5, "py": -0.25})
    state = fock.evolve(fock.initial_state(ref))
    assert sl.values[1, 3] == pytest.approx(float(wigner.wigner_exact(state, 0.5, grid[1], grid[3], -0.25)))


def test_vacuum_slice_positive():
    vac = decompose.CoefficientVector.from_amplitudes(1, [1.0])
    grid = np.linspace(-3, 3, 21)
    sl = wigner.wigner_slice("exact", vac, ("x", "px"), grid, grid,
                             state=fock.TwoModeState.from_array([1.0]))
    assert sl.values.min() > 0


def test_slice_validation(ref):
    grid = np.linspace(-1, 1, 3)
    with pytest.raises(ValidationError):
        wigner.wigner_slice("diagonal", ref, ("py", "x"), grid, grid)
    with pytest.raises(ValidationError):
        wigner.wigner_slice("moyal", ref, ("x", "y"), grid, grid)
    with pytest.raises(ValidationError):
        wigner.wigner_lg(0, -1, 0, 0, 0, 0)
    with pytest.raises(ValidationError):
        wigner.wigner_lg(0, 1, 0, 0, 0, 0, sigma=0.0)
