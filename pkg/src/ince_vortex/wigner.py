"""Four-dimensional Wigner functions of Laguerre-Gauss superpositions.

Phase-space coordinates are ``(x, y, px, py)`` in oscillator units, normalized
so that ``∫ W dx dy dpx dpy = 1`` and the vacuum is
``exp(-(x² + y² + px² + py²)) / π²``.

Two evaluation routes are provided:

* the Laguerre closed form for single LG modes and its diagonal mixture over
  the expansion coefficients (``formula="diagonal"``);
* a direct quadrature of the Wigner transform of the two-mode position
  wavefunction built from oscillator eigenfunctions (``formula="exact"``),
  which keeps all interference terms.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import combinations

import numpy as np
from scipy.special import eval_laguerre

from .decompose import CoefficientVector
from .errors import NumericalError, ValidationError
from .fock import TwoModeState, evolve, hermite_function, initial_state

SIGMA = math.sqrt(2.0)
AXES = ("x", "y", "px", "py")
AXIS_PAIRS = tuple(combinations(AXES, 2))
FORMULAS = ("diagonal", "exact")


def quadratic_forms(x, y, px, py, sigma: float = SIGMA):
    """``(Q0, Q1)``; ``Q1`` is half the angular momentum ``x py - y px``."""
    q0 = 0.5 * ((x * x + y * y) / sigma**2 + sigma**2 * (px * px + py * py) / 4)
    q1 = 0.5 * (x * py - y * px)
    return q0, q1


def wigner_lg(n: int, l: int, x, y, px, py, sigma: float = SIGMA):
    """Wigner function of the helical mode ``LG_{n,l}`` (charge ``+l``)."""
    if n < 0 or l < 0:
        raise ValidationError(f"LG indices must be >= 0, got n={n}, l={l}")
    if not sigma > 0:
        raise ValidationError(f"sigma must be > 0, got {sigma}")
    x, y, px, py = (np.asarray(v, dtype=float) for v in (x, y, px, py))
    q0, q1 = quadratic_forms(x, y, px, py, sigma)
    sign = -1.0 if l % 2 else 1.0
    return (
        sign / math.pi**2
        * eval_laguerre(n + l, 4 * (q0 + q1))
        * eval_laguerre(n, 4 * (q0 - q1))
        * np.exp(-4 * q0)
    )


def wigner_diagonal(coeffs: CoefficientVector, x, y, px, py, sigma: float = SIGMA):
    """Incoherent sum ``Σ_j |A_j|² W_{j, N-2j}`` (no cross terms)."""
    out = 0.0
    for A, (n, l) in zip(coeffs.entries, coeffs.lg_indices):
        weight = abs(A) ** 2
        if weight:
            out = out + weight * wigner_lg(n, l, x, y, px, py, sigma)
    return out


# ----------------------------------------------------------------------------
# quadrature oracle


def _cross_table(kmax: int, q, p, n_nodes: int, half_width: float):
    """``w[a, b, i, k] = (1/π) ∫ h_a(q_i + u) h_b(q_i - u) exp(2i p_k u) du`` (trapezoid)."""
    u = np.linspace(-half_width, half_width, n_nodes)
    du = u[1] - u[0]
    q = np.asarray(q, dtype=float)
    p = np.asarray(p, dtype=float)
    plus = np.stack([hermite_function(a, q[:, None] + u[None, :]) for a in range(kmax + 1)])
    minus = np.stack([hermite_function(b, q[:, None] - u[None, :]) for b in range(kmax + 1)])
    phase = np.exp(2j * p[:, None] * u[None, :])
    return np.einsum("aiu,biu,ku->abik", plus, minus, phase, optimize=True) * du / math.pi


def _converged_table(kmax, q, p, n_nodes, half_width, tol=1e-10):
    coarse = _cross_table(kmax, q, p, n_nodes, half_width)
    fine = _cross_table(kmax, q, p, 2 * n_nodes - 1, half_width)
    if np.max(np.abs(fine - coarse)) > tol:
        raise NumericalError(
            f"Wigner quadrature not converged ({np.max(np.abs(fine - coarse)):.2e} > {tol:g})"
        )
    return fine


def wigner_exact_grid(state: TwoModeState, xs, ys, pxs, pys, n_nodes: int = 321,
                      half_width: float = 12.0):
    """Exact Wigner function on the lattice ``xs × ys × pxs × pys``.

    The position wavefunction ``Σ_n c_n h_{N-n}(x) h_n(y)`` is separable, so the
    four-dimensional transform reduces to products of one-dimensional cross
    Wigner functions, each integrated by the trapezoid rule (spectrally accurate
    for these Gaussian-decaying integrands) and checked by node doubling.
    Returns an array indexed ``[x, y, px, py]``.
    """
    xs, ys, pxs, pys = (np.atleast_1d(np.asarray(v, dtype=float)) for v in (xs, ys, pxs, pys))
    N = state.N
    c = state.as_array()
    wx = _converged_table(N, xs, pxs, n_nodes, half_width)
    wy = _converged_table(N, ys, pys, n_nodes, half_width)
    rev = np.arange(N, -1, -1)
    wx = wx[np.ix_(rev, rev)]  # index by photon number in mode b: a-mode count is N - n
    C = np.conj(c)[:, None] * c[None, :]
    W = np.einsum("st,stik,stjl->ijkl", C, wx, wy, optimize=True)
    if np.max(np.abs(W.imag)) > 1e-8:
        raise NumericalError(f"Wigner function not real (|Im| = {np.max(np.abs(W.imag)):.2e})")
    return W.real


def wigner_exact(state: TwoModeState, x, y, px, py, **kwargs):
    """Exact Wigner function at scattered points (broadcast together)."""
    x, y, px, py = np.broadcast_arrays(*(np.asarray(v, dtype=float) for v in (x, y, px, py)))
    out = np.empty(x.shape)
    for idx in np.ndindex(x.shape):
        out[idx] = wigner_exact_grid(state, x[idx], y[idx], px[idx], py[idx], **kwargs)[0, 0, 0, 0]
    return out


# ----------------------------------------------------------------------------
# slices


@dataclass(frozen=True)
class WignerSlice:
    axes: tuple[str, str]
    frozen: dict
    u: np.ndarray
    v: np.ndarray
    values: np.ndarray  # values[i, k] at (u[i], v[k])
    formula: str
    sigma: float = SIGMA
    provenance: dict = field(default_factory=dict)

    @property
    def name(self) -> str:
        return f"W_{self.axes[0]}_{self.axes[1]}"

    def sidecar(self) -> dict:
        return {
            "axes": list(self.axes),
            "frozen": dict(self.frozen),
            "formula": self.formula,
            "sigma": self.sigma,
            "u": {"min": float(self.u[0]), "max": float(self.u[-1]), "n": int(self.u.size)},
            "v": {"min": float(self.v[0]), "max": float(self.v[-1]), "n": int(self.v.size)},
            "min": float(self.values.min()),
            "max": float(self.values.max()),
            "provenance": self.provenance,
        }


def _axis_values(axes, frozen, u, v):
    if tuple(axes) not in AXIS_PAIRS:
        raise ValidationError(f"axis pair must be one of {AXIS_PAIRS}, got {tuple(axes)!r}")
    others = [a for a in AXES if a not in axes]
    frozen = {a: float(frozen.get(a, 0.0)) for a in others}
    vals = {axes[0]: np.asarray(u, dtype=float), axes[1]: np.asarray(v, dtype=float)}
    vals.update({a: np.array([frozen[a]]) for a in others})
    return frozen, vals


def wigner_slice(formula: str, coeffs: CoefficientVector, axes, u, v, frozen=None,
                 state: TwoModeState | None = None, sigma: float = SIGMA) -> WignerSlice:
    """Two-dimensional cut through the Wigner function of the vortex state.

    ``formula="diagonal"`` uses the diagonal Laguerre sum over ``coeffs``;
    ``formula="exact"`` uses the quadrature oracle on ``state`` (default: the
    converter output ``evolve(initial_state(coeffs))``).
    """
    if formula not in FORMULAS:
        raise ValidationError(f"formula must be one of {FORMULAS}, got {formula!r}")
    frozen, vals = _axis_values(axes, frozen or {}, u, v)
    prov = {"p": coeffs.p, "m": coeffs.m, "epsilon": coeffs.epsilon,
            "convention": coeffs.convention}
    if formula == "diagonal":
        grids = np.meshgrid(*(vals[a] for a in AXES), indexing="ij")
        W = wigner_diagonal(coeffs, *grids, sigma=sigma)
    else:
        if sigma != SIGMA:
            raise ValidationError("the exact oracle is defined for the oscillator width only")
        state = state or evolve(initial_state(coeffs))
        W = wigner_exact_grid(state, *(vals[a] for a in AXES))
    i, k = AXES.index(axes[0]), AXES.index(axes[1])
    W = np.moveaxis(W, (i, k), (0, 1)).reshape(len(vals[axes[0]]), len(vals[axes[1]]))
    return WignerSlice(tuple(axes), frozen, vals[axes[0]], vals[axes[1]], W, formula, sigma, prov)


# ----------------------------------------------------------------------------
# integrals


def trapezoid_4d(func, half_width: float = 7.0, n: int = 57) -> float:
    """Nested trapezoid integral of ``func(x, y, px, py)`` over ``[-L, L]^4``.

    Evaluated one ``x`` plane at a time to bound memory.
    """
    axis = np.linspace(-half_width, half_width, n)
    w1 = np.full(n, axis[1] - axis[0])
    w1[[0, -1]] *= 0.5
    Y, PX, PY = np.meshgrid(axis, axis, axis, indexing="ij")
    w3 = w1[:, None, None] * w1[None, :, None] * w1[None, None, :]
    total = 0.0
    for xi, wx in zip(axis, w1):
        total += wx * float(np.sum(w3 * func(xi, Y, PX, PY)))
    return total
