import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from ince_vortex import decompose, modes, precise
from ince_vortex.errors import NumericalError, ValidationError
from ince_vortex.quadrature import QuadratureRule

REFERENCE = np.array([0.2079, 0.8279, -0.5210])


def grid_projection(p, m, eps, conjugate, extent=8.0, n=321):
    """Projections by plain Cartesian summation (no Gauss-Laguerre rule)."""
    axis = np.linspace(-extent, extent, n)
    X, Y = np.meshgrid(axis, axis)
    cell = (axis[1] - axis[0]) ** 2
    hig = modes.hig_mode(p, m, eps, X, Y)
    out = []
    for j in range(decompose.j_max(p) + 1):
        lg = modes.lg_helical(j, p - 2 * j, X, Y)
        out.append(np.sum(hig * (np.conj(lg) if conjugate else lg)) * cell)
    return np.array(out)


def test_reference_coefficients():
    c = decompose.coefficients(5, 1, 2.0)
    assert c.convention == "bilinear"
    np.testing.assert_allclose(c.as_array().real, REFERENCE, atol=5e-3)
    assert np.max(np.abs(c.as_array().imag)) < 1e-12
    assert c.lg_indices == [(0, 5), (1, 3), (2, 1)]


@pytest.mark.parametrize("convention,conjugate", [("bilinear", False), ("inner", True)])
def test_projections_match_grid_sum(convention, conjugate):
    for p, m, eps in [(5, 1, 2.0), (7, 3, 5.0), (4, 2, 0.5)]:
        raw = decompose.raw_projections(p, m, eps, convention)
        np.testing.assert_allclose(raw, grid_projection(p, m, eps, conjugate), atol=1e-9)


def test_inner_convention_values():
    c = decompose.coefficients(5, 1, 2.0, "inner")
    np.testing.assert_allclose(c.as_array().real, [0.0900, 0.5142, 0.8529], atol=5e-4)


def test_residual_mass_split():
    bilinear = decompose.coefficients(5, 1, 2.0, "bilinear")
    inner = decompose.coefficients(5, 1, 2.0, "inner")
    co, counter = decompose.expansion_mass(5, 1, 2.0)
    assert inner.residual_mass == pytest.approx(counter, abs=1e-10)
    assert bilinear.residual_mass == pytest.approx(co, abs=1e-10)


def test_overlap_examples():
    f = lambda x, y: modes.lg_helical(1, 3, x, y)  # noqa: E731
    g = lambda x, y: modes.lg_helical(0, 5, x, y)  # noqa: E731
    h = lambda x, y: modes.hig_mode(5, 1, 2.0, x, y)  # noqa: E731
    assert decompose.overlap(f, f) == pytest.approx(1.0, abs=1e-8)
    assert decompose.overlap(h, h) == pytest.approx(1.0, abs=1e-8)
    assert abs(decompose.overlap(f, g)) < 1e-8
    # 0.8279 is the renormalized entry, not the raw overlap magnitude
    raw = decompose.raw_projections(5, 1, 2.0)
    assert abs(raw[1]) / np.linalg.norm(raw) == pytest.approx(0.8279, abs=5e-3)


def test_p1_single_entry():
    for eps in (1e-8, 0.5, 2.0, 1e3):
        for conv in decompose.CONVENTIONS:
            c = decompose.coefficients(1, 1, eps, conv)
            assert c.entries == (1.0,)


def test_small_eps_limit():
    inner = decompose.coefficients(3, 3, 1e-8, "inner")
    np.testing.assert_allclose(np.abs(inner.as_array()), [1.0, 0.0], atol=1e-3)
    bilinear = decompose.coefficients(3, 3, 1e-8, "bilinear")
    np.testing.assert_allclose(np.abs(bilinear.as_array()), [0.0, 1.0], atol=1e-3)


def test_precise_path_agrees_at_moderate_eps():
    for conv in decompose.CONVENTIONS:
        fast = decompose.raw_projections(5, 3, 2.0, conv)
        slow = precise.raw_projections(5, 3, 2.0, conv, dps=30)
        np.testing.assert_allclose(fast, slow, atol=1e-13)


def test_quadrature_doubling_stable():
    base = decompose.raw_projections(7, 3, 2.0)
    doubled = decompose.raw_projections(7, 3, 2.0, rule=QuadratureRule.for_order(7).doubled())
    np.testing.assert_allclose(base, doubled, atol=1e-6)


def test_continuity_in_epsilon():
    prev = None
    for eps in np.arange(1.9, 2.1001, 0.01):
        c = decompose.coefficients(5, 1, float(eps)).as_array()
        if prev is not None:
            assert np.max(np.abs(c - prev)) < 0.05
        prev = c


def test_inner_vectors_nearly_orthogonal_across_m():
    """Not exact: truncation to co-rotating modes breaks IG orthogonality slightly."""
    vs = [decompose.coefficients(5, m, 2.0, "inner").as_array() for m in (1, 3, 5)]
    G = np.array([[np.vdot(a, b) for b in vs] for a in vs])
    assert np.max(np.abs(G - np.eye(3))) < 1e-2


def test_reconstruct_matches_sum():
    c = decompose.coefficients(5, 1, 2.0)
    x, y = np.array([0.3, -1.2]), np.array([0.8, 0.1])
    manual = sum(a * modes.lg_helical(n, l, x, y) for a, (n, l) in zip(c.entries, c.lg_indices))
    np.testing.assert_allclose(decompose.reconstruct(c, x, y), manual)
    assert decompose.reconstruct(c, 0.0, 0.0) == 0


def test_to_dict_round_trip_shape():
    d = decompose.coefficients(5, 1, 2.0).to_dict()
    assert d["lg_modes"] == [{"n": 0, "l": 5}, {"n": 1, "l": 3}, {"n": 2, "l": 1}]
    assert len(d["entries"]) == 3 and all(len(e) == 2 for e in d["entries"])


def test_validation():
    with pytest.raises(ValidationError):
        decompose.coefficients(4, 1, 2.0)
    with pytest.raises(ValidationError):
        decompose.coefficients(4, 0, 2.0)
    with pytest.raises(ValidationError):
        decompose.coefficients(5, 1, 0.0)
    with pytest.raises(ValidationError):
        decompose.coefficients(5, 1, 2.0, "hermitian")
    with pytest.raises(ValidationError):
        decompose.CoefficientVector(5, 1, 2.0, (0.5, 0.5, 0.5))
    with pytest.raises(ValidationError):
        decompose.CoefficientVector.from_amplitudes(5, [1.0, 0.0])
    with pytest.raises(ValidationError):
        decompose.j_max(0)


def test_null_projection_is_numerical_error(monkeypatch):
    monkeypatch.setattr(decompose, "raw_projections", lambda *a, **k: np.zeros(3, dtype=complex))
    monkeypatch.setattr(precise, "raw_projections", lambda *a, **k: np.zeros(3, dtype=complex))
    with pytest.raises(NumericalError):
        decompose.coefficients(5, 1, 2.0)


def test_overlap_convergence_failure_raises():
    # an integrand far beyond the rule's exactness changes when the rule is doubled
    wild = lambda x, y: np.exp(0.45 * (x * x + y * y)) * np.cos(9 * x)  # noqa: E731
    with pytest.raises(NumericalError):
        decompose.overlap(wild, lambda x, y: np.ones_like(x), QuadratureRule.for_degree(4))


@settings(max_examples=25, deadline=None)
@given(pm=st.sampled_from([(3, 1), (3, 3), (5, 1), (5, 3), (5, 5), (4, 2), (6, 4), (7, 3)]),
       eps=st.floats(0.05, 20.0), conv=st.sampled_from(decompose.CONVENTIONS))
def test_unit_norm_and_phase_property(pm, eps, conv):
    c = decompose.coefficients(*pm, eps, conv)
    a = c.as_array()
    assert np.sum(np.abs(a) ** 2) == pytest.approx(1.0, abs=1e-12)
    k = int(np.argmax(np.abs(a)))
    assert a[k].imag == 0 and a[k].real > 0
