"""Extended-precision helical projections (mpmath).

The bilinear projection of ``IG^e + i IG^o`` onto co-rotating LG modes is a
difference ``(a_l - b_l) / 2`` of two nearly equal overlaps when ε is small; at
``ε = 1e-8`` it is of order ``ε²`` and vanishes in double precision. This module
repeats the whole chain (Ince eigenvectors, mode evaluation, Gauss-Laguerre
nodes) in multiprecision arithmetic so that such projections stay resolvable.
It shares no numerical code with the double-precision path.
"""

from __future__ import annotations

from functools import lru_cache

import mpmath as mp
import numpy as np

from .errors import NumericalError, ValidationError
from .ince_poly import EVEN, ODD, frequencies

DEFAULT_DPS = 40


def _ince_matrix(p, parity, eps):
    ks = frequencies(p, parity)
    n = len(ks)
    T = mp.zeros(n, n)
    half = eps / 2
    for i, k in enumerate(ks):
        T[i, i] -= k * k
        if i + 1 < n:
            T[i + 1, i] += half * (k - p)
        if i > 0:
            T[i - 1, i] -= half * (k + p)
        if k == 0 and i + 1 < n:
            T[i + 1, i] -= half * p
        elif k == 1:
            T[i, i] += (-half if parity == EVEN else half) * (1 + p)
    return ks, -T


def ince_coefficients(p, m, parity, eps):
    """Unit-L2, highest-harmonic-positive Ince coefficients at working precision."""
    ks, A = _ince_matrix(p, parity, eps)
    n = len(ks)
    if n == 1:
        vec = [mp.mpf(1)]
    else:
        lower = [A[i + 1, i] for i in range(n - 1)]
        upper = [A[i, i + 1] for i in range(n - 1)]
        scale = [mp.mpf(1)]
        S = mp.zeros(n, n)
        for i in range(n):
            S[i, i] = A[i, i]
        for i in range(n - 1):
            if lower[i] * upper[i] < 0:
                raise NumericalError("recurrence matrix is not symmetrizable")
            scale.append(scale[-1] * mp.sqrt(lower[i] / upper[i]) if upper[i] != 0 else scale[-1])
            S[i, i + 1] = S[i + 1, i] = mp.sqrt(lower[i] * upper[i])
        evals, evecs = mp.eigsy(S)
        order = sorted(range(n), key=lambda i: evals[i])
        col = order[ks.index(m)]
        vec = [scale[i] * evecs[i, col] for i in range(n)]
    norm2 = sum((2 * mp.pi if k == 0 else mp.pi) * c * c for k, c in zip(ks, vec))
    vec = [c / mp.sqrt(norm2) for c in vec]
    top = next((c for c in reversed(vec) if c != 0), mp.mpf(1))
    if top < 0:
        vec = [-c for c in vec]
    return ks, vec


@lru_cache(maxsize=64)
def _gauss_laguerre(n, dps):
    with mp.workdps(dps):
        J = mp.zeros(n, n)
        for i in range(n):
            J[i, i] = 2 * i + 1
            if i + 1 < n:
                J[i, i + 1] = J[i + 1, i] = i + 1
        evals, evecs = mp.eigsy(J)
        return tuple((evals[i], evecs[0, i] ** 2) for i in range(n))


def _nodes(n_radial, n_angular, dps):
    out = []
    for t, w in _gauss_laguerre(n_radial, dps):
        r = mp.sqrt(t)
        wr = w * mp.exp(t) / 2 * (2 * mp.pi / n_angular)
        for k in range(n_angular):
            phi = 2 * mp.pi * k / n_angular
            out.append((r * mp.cos(phi), r * mp.sin(phi), t, phi, wr))
    return out


def _laguerre(n, l, t):
    return sum((-1) ** k * mp.binomial(n + l, n - k) * t**k / mp.factorial(k) for k in range(n + 1))


def _lg_helical(n, l, t, phi):
    norm = mp.sqrt(mp.factorial(n) / (mp.pi * mp.factorial(n + l)))
    return norm * mp.sqrt(t) ** l * _laguerre(n, l, t) * mp.exp(-t / 2) * mp.expj(l * phi)


def _ig_raw(ks, coeffs, parity, f, x, y, t):
    w = mp.acosh(mp.mpc(x, y) / f)
    if mp.re(w) < 0:
        w = -w
    xi, eta = mp.re(w), mp.im(w)
    if parity == EVEN:
        hyp = sum(c * mp.cosh(k * xi) for k, c in zip(ks, coeffs))
        ang = sum(c * mp.cos(k * eta) for k, c in zip(ks, coeffs))
    else:
        hyp = sum(c * mp.sinh(k * xi) for k, c in zip(ks, coeffs))
        ang = sum(c * mp.sin(k * eta) for k, c in zip(ks, coeffs))
    return hyp * ang * mp.exp(-t / 2)


def raw_projections(p: int, m: int, epsilon: float, convention: str = "bilinear",
                    dps: int = DEFAULT_DPS) -> np.ndarray:
    """Multiprecision counterpart of :func:`ince_vortex.decompose.raw_projections`.

    ``epsilon`` is taken as the exact binary value of the given float.
    """
    if convention not in ("bilinear", "inner"):
        raise ValidationError(f"unknown convention {convention!r}")
    if m < 1 or (p - m) % 2 or m > p or not epsilon > 0:
        raise ValidationError(f"inadmissible helical index p={p}, m={m}, ε={epsilon}")
    with mp.workdps(dps):
        eps = mp.mpf(epsilon)
        f = mp.sqrt(eps)
        degree = 4 * p
        nodes = _nodes(degree // 4 + 4, degree + 8, dps)
        parts = {}
        for parity in (EVEN, ODD):
            ks, coeffs = ince_coefficients(p, m, parity, eps)
            vals = [_ig_raw(ks, coeffs, parity, f, x, y, t) for x, y, t, _, _ in nodes]
            mass = sum(w * v * v for v, (_, _, _, _, w) in zip(vals, nodes))
            parts[parity] = [v / mp.sqrt(mass) for v in vals]
        hig = [(e + 1j * o) / mp.sqrt(2) for e, o in zip(parts[EVEN], parts[ODD])]
        out = []
        for j in range((p - 1) // 2 + 1):
            l = p - 2 * j
            acc = mp.mpc(0)
            for h, (_, _, t, phi, w) in zip(hig, nodes):
                lg = _lg_helical(j, l, t, phi)
                acc += w * h * (lg if convention == "bilinear" else mp.conj(lg))
            out.append(complex(acc))
        return np.array(out)
