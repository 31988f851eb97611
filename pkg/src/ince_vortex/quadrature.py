"""Polar product quadrature for Gaussian-weighted functions on the plane.

Radial nodes are Gauss-Laguerre nodes in ``t = r**2`` and angular nodes are
uniform, so ``∫∫ P(x, y) exp(-r**2) dx dy`` is exact whenever ``P`` is a
polynomial of total degree below ``min(4 * n_radial, n_angular)``. Integrands
are passed *with* their Gaussian factor; the rule stores weights that already
compensate for it.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np
from scipy.special import roots_laguerre

from .errors import NumericalError


@dataclass(frozen=True)
class QuadratureRule:
    n_radial: int
    n_angular: int

    @classmethod
    def for_degree(cls, degree: int) -> "QuadratureRule":
        """Smallest comfortable rule exact for polynomial degree ``degree``."""
        degree = max(int(degree), 0)
        return cls(n_radial=degree // 4 + 4, n_angular=degree + 8)

    @classmethod
    def for_order(cls, p: int) -> "QuadratureRule":
        """Rule for products of two order-``p`` modes, with margin (degree 4p)."""
        return cls.for_degree(4 * int(p))

    def doubled(self) -> "QuadratureRule":
        return QuadratureRule(2 * self.n_radial, 2 * self.n_angular)

    @cached_property
    def _nodes(self):
        t, w = roots_laguerre(self.n_radial)
        r = np.sqrt(t)
        phi = 2 * np.pi * np.arange(self.n_angular) / self.n_angular
        R, PHI = np.meshgrid(r, phi, indexing="ij")
        # 1/2 from dA = r dr dφ = dt dφ / 2; exp(t) undoes the Gaussian in the integrand
        radial = 0.5 * w * np.exp(t)
        W = np.repeat(radial[:, None], self.n_angular, axis=1) * (2 * np.pi / self.n_angular)
        return R * np.cos(PHI), R * np.sin(PHI), W

    @property
    def x(self) -> np.ndarray:
        return self._nodes[0]

    @property
    def y(self) -> np.ndarray:
        return self._nodes[1]

    @property
    def weights(self) -> np.ndarray:
        return self._nodes[2]

    def integrate(self, func):
        """Integrate ``func(x, y)`` over the plane."""
        values = np.asarray(func(self.x, self.y))
        return np.sum(self.weights * values)


def integrate_checked(func, rule: QuadratureRule, rtol: float = 1e-8):
    """Integrate with ``rule`` and verify against the doubled rule.

    Raises :class:`NumericalError` when doubling the node counts moves the
    result by more than ``rtol`` (relative, with an absolute floor of ``rtol``).
    """
    coarse = rule.integrate(func)
    fine = rule.doubled().integrate(func)
    if abs(fine - coarse) > rtol * max(1.0, abs(fine)):
        raise NumericalError(
            f"quadrature not converged: |Δ|={abs(fine - coarse):.3e} "
            f"({rule.n_radial}x{rule.n_angular} -> doubled)"
        )
    return fine
