"""Laguerre-Gauss and Ince-Gauss mode functions on the quadrature plane.

All lengths are oscillator units: every mode carries the envelope
``exp(-r**2 / 2)``. In these units an Ince-Gauss mode of ellipticity ``ε`` is
an exact eigenfunction of the two-dimensional oscillator only when the elliptic
coordinates use the semifocal distance ``sqrt(ε)`` (the usual
``ε = 2 f0**2 / w0**2`` with ``w0**2 = 2``); see :func:`semifocal_distance`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
from scipy.special import eval_genlaguerre

from . import ince_poly
from .errors import ValidationError
from .ince_poly import EVEN, ODD, InceIndex
from .quadrature import QuadratureRule

HELICAL = "helical"


@dataclass(frozen=True)
class LGIndex:
    n: int
    l: int
    kind: str = HELICAL

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 0:
            raise ValidationError(f"radial index n must be a non-negative integer, got {self.n!r}")
        if int(self.l) != self.l or self.l < 0:
            raise ValidationError(f"azimuthal index l must be a non-negative integer, got {self.l!r}")
        if self.kind not in (EVEN, ODD, HELICAL):
            raise ValidationError(f"unknown LG kind {self.kind!r}")
        if self.kind == ODD and self.l == 0:
            raise ValidationError("odd LG modes need l >= 1")

    @property
    def order(self) -> int:
        return 2 * self.n + self.l


# ----------------------------------------------------------------------------
# coordinates


def semifocal_distance(epsilon: float) -> float:
    """Semifocal distance of the elliptic grid for ellipticity ``epsilon``."""
    return math.sqrt(epsilon)


def from_elliptic(xi, eta, scale: float):
    """``(x, y) = scale * (cosh ξ cos η, sinh ξ sin η)``."""
    xi = np.asarray(xi, dtype=float)
    eta = np.asarray(eta, dtype=float)
    return scale * np.cosh(xi) * np.cos(eta), scale * np.sinh(xi) * np.sin(eta)


def to_elliptic(x, y, scale: float):
    """Inverse of :func:`from_elliptic` with ``ξ >= 0`` and ``η ∈ [0, 2π)``.

    Points on the focal segment ``|x| <= scale, y = 0`` land on ``ξ = 0``,
    where ``η`` and ``2π - η`` describe the same point.
    """
    if not scale > 0:
        raise ValidationError(f"elliptic scale must be > 0, got {scale!r}")
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    w = np.arccosh((x + 1j * y) / scale)
    # arccosh returns Re >= 0; flip onto that half if a branch gives Re < 0
    w = np.where(w.real < 0, -w, w)
    return w.real, np.mod(w.imag, 2 * np.pi)


def _polar(x, y):
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    return x * x + y * y, np.arctan2(y, x)


# ----------------------------------------------------------------------------
# Laguerre-Gauss


def _lg_radial(n, l, r2):
    """Unit-norm radial factor of the helical LG mode (angular part excluded)."""
    norm = math.sqrt(math.factorial(n) / (math.pi * math.factorial(n + l)))
    return norm * np.sqrt(r2) ** l * eval_genlaguerre(n, l, r2) * np.exp(-r2 / 2)


def lg_even_odd(n: int, l: int, kind: str, x, y, normalized: bool = True):
    """Real (even: cos lφ, odd: sin lφ) Laguerre-Gauss mode.

    With ``normalized=False`` the expression is the textbook-style form
    ``sqrt(4 n!/(π (n+l)!)) (√2 r)^l L_n^l(2 r²) exp(-r²/2) cos/sin(lφ)``
    evaluated as written. That form mixes two length scales and is neither
    unit-norm nor an oscillator eigenfunction; ``normalized=True`` returns the
    unit-norm mode whose Laguerre argument matches the ``exp(-r²/2)`` envelope.
    """
    idx = LGIndex(n, l, kind)
    if kind == HELICAL:
        raise ValidationError("use lg_helical for helical modes")
    r2, phi = _polar(x, y)
    ang = np.cos(l * phi) if kind == EVEN else np.sin(l * phi)
    if not normalized:
        pref = math.sqrt(4 * math.factorial(idx.n) / (math.pi * math.factorial(idx.n + idx.l)))
        return pref * np.sqrt(2 * r2) ** l * eval_genlaguerre(n, l, 2 * r2) * np.exp(-r2 / 2) * ang
    factor = 1.0 if l == 0 else math.sqrt(2.0)
    return factor * _lg_radial(n, l, r2) * ang


def lg_helical(n: int, l: int, x, y):
    """Unit-norm helical LG mode carrying ``exp(i l φ)``."""
    LGIndex(n, l, HELICAL)
    r2, phi = _polar(x, y)
    return _lg_radial(n, l, r2) * np.exp(1j * l * phi)


# ----------------------------------------------------------------------------
# Ince-Gauss


def _ig_raw(poly, x, y):
    f = semifocal_distance(poly.index.epsilon)
    xi, eta = to_elliptic(x, y, f)
    r2 = np.asarray(x, dtype=float) ** 2 + np.asarray(y, dtype=float) ** 2
    return (
        ince_poly.evaluate_hyperbolic(poly, xi)
        * ince_poly.evaluate(poly, eta)
        * np.exp(-r2 / 2)
    )


@lru_cache(maxsize=512)
def ig_normalization(p: int, m: int, parity: str, epsilon: float) -> float:
    """Constant that gives the raw Ince-Gauss product unit L2 norm."""
    poly = ince_poly.ince_polynomial(p, m, parity, epsilon)
    rule = QuadratureRule.for_order(p)
    mass = float(rule.integrate(lambda x, y: _ig_raw(poly, x, y) ** 2))
    return 1.0 / math.sqrt(mass)


def _check_ig(p, m, parity, epsilon):
    InceIndex(p, m, parity, epsilon)
    if not epsilon > 0:
        raise ValidationError("Ince-Gauss modes need epsilon > 0 (use a small positive value for the LG limit)")


def ig_mode(p: int, m: int, parity: str, epsilon: float, x, y):
    """Unit-norm even or odd Ince-Gauss mode ``IG_{p,m}^{e/o}(x, y; ε)``."""
    _check_ig(p, m, parity, epsilon)
    poly = ince_poly.ince_polynomial(p, m, parity, epsilon)
    return ig_normalization(p, m, parity, float(epsilon)) * _ig_raw(poly, x, y)


def hig_mode(p: int, m: int, epsilon: float, x, y, sign: int = 1):
    """Helical Ince-Gauss mode ``(IG^e ± i IG^o) / √2``.

    The even and odd parts are orthogonal, so the result has unit norm.
    """
    if sign not in (1, -1):
        raise ValidationError(f"sign must be +1 or -1, got {sign!r}")
    if m < 1:
        raise ValidationError("helical Ince-Gauss modes need m >= 1 (no odd partner for m = 0)")
    even = ig_mode(p, m, EVEN, epsilon, x, y)
    odd = ig_mode(p, m, ODD, epsilon, x, y)
    return (even + sign * 1j * odd) / math.sqrt(2.0)


# ----------------------------------------------------------------------------
# sampled fields


@dataclass(frozen=True)
class ComplexField:
    """A mode sampled on a square uniform grid (rows follow y, columns follow x)."""

    x: np.ndarray
    y: np.ndarray
    values: np.ndarray
    provenance: dict = field(default_factory=dict)

    @property
    def cell_area(self) -> float:
        return float((self.x[1] - self.x[0]) * (self.y[1] - self.y[0]))

    def norm(self) -> float:
        return math.sqrt(float(np.sum(np.abs(self.values) ** 2)) * self.cell_area)

    @property
    def intensity(self) -> np.ndarray:
        return np.abs(self.values) ** 2

    @property
    def geometry(self) -> dict:
        return {
            "x_min": float(self.x[0]),
            "x_max": float(self.x[-1]),
            "y_min": float(self.y[0]),
            "y_max": float(self.y[-1]),
            "nx": int(self.x.size),
            "ny": int(self.y.size),
        }


def sample_field(func, extent: float = 6.0, n: int = 256, provenance=None,
                 mass_tol: float = 1e-8, max_extent: float = 24.0) -> ComplexField:
    """Sample ``func(x, y)`` on ``[-extent, extent]**2`` and normalize on the grid.

    ``func`` must be unit-normalized on the plane; the extent grows by 25 %
    steps until the grid captures at least ``1 - mass_tol`` of that mass.
    """
    while True:
        axis = np.linspace(-extent, extent, n)
        X, Y = np.meshgrid(axis, axis)
        values = np.asarray(func(X, Y), dtype=complex)
        cell = (axis[1] - axis[0]) ** 2
        mass = float(np.sum(np.abs(values) ** 2)) * cell
        if mass >= 1 - mass_tol or extent >= max_extent:
            break
        extent *= 1.25
    values = values / math.sqrt(mass)
    prov = dict(provenance or {})
    prov["captured_mass"] = mass
    return ComplexField(axis, axis.copy(), values, prov)
