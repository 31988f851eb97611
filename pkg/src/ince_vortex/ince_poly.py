"""Even and odd Ince polynomials as finite trigonometric series.

The Ince equation

    Θ'' + ε sin(2η) Θ' + (a − p ε cos 2η) Θ = 0

has, for integer order ``p``, solutions that are finite Fourier series in one of
four classes (cos/sin, even/odd harmonics). Substituting the series turns the
equation into a tridiagonal eigenproblem for the separation constant ``a``.
The matrix is not symmetric but is diagonally similar to a symmetric one, so the
eigenvalues come from a symmetric tridiagonal solver. Eigenvectors are then
rebuilt with a two-sided continued-fraction sweep, which keeps the tiny
off-resonant coefficients accurate when ε is very small.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.linalg import eigh_tridiagonal

from .errors import NumericalError, ValidationError

EVEN = "even"
ODD = "odd"

#: ε above which the eigenproblem is flagged as poorly conditioned.
EPSILON_WARN = 1e3

_DEGENERACY_TOL = 1e-12


class ConditioningWarning(UserWarning):
    """Issued for very large ellipticities."""


@dataclass(frozen=True)
class InceIndex:
    p: int
    m: int
    parity: str
    epsilon: float

    def __post_init__(self):
        validate_index(self.p, self.m, self.parity, self.epsilon)


@dataclass(frozen=True)
class IncePolynomial:
    """One Ince polynomial ``C_p^m`` (even) or ``S_p^m`` (odd).

    ``frequencies[i]`` is the harmonic multiplying ``coeffs[i]``; the basis
    function is ``cos`` for even parity and ``sin`` for odd parity.
    """

    index: InceIndex
    frequencies: tuple[int, ...]
    coeffs: tuple[float, ...]
    eigenvalue: float

    @property
    def basis_class(self) -> str:
        trig = "cos" if self.index.parity == EVEN else "sin"
        return f"{trig} {'2j' if self.index.p % 2 == 0 else '(2j+1)'}η"

    @property
    def phase_power(self) -> int:
        """Power ``s`` of the factor ``i**s`` removed by :func:`evaluate_hyperbolic`."""
        return 0 if self.index.parity == EVEN else 1


def validate_index(p, m, parity, epsilon):
    if int(p) != p or p < 0:
        raise ValidationError(f"order p must be a non-negative integer, got {p!r}")
    if int(m) != m:
        raise ValidationError(f"degree m must be an integer, got {m!r}")
    if parity not in (EVEN, ODD):
        raise ValidationError(f"parity must be 'even' or 'odd', got {parity!r}")
    if (p - m) % 2:
        raise ValidationError(f"p and m must have the same parity (p={p}, m={m})")
    lo = 0 if parity == EVEN else 1
    if not lo <= m <= p:
        raise ValidationError(f"{parity} Ince polynomials need {lo} <= m <= p (p={p}, m={m})")
    if not math.isfinite(epsilon) or epsilon < 0:
        raise ValidationError(f"epsilon must be finite and >= 0, got {epsilon!r}")


def frequencies(p: int, parity: str) -> tuple[int, ...]:
    """Harmonics present in the series for order ``p`` and the given parity.

    These are also the admissible degrees ``m``, in ascending order.
    """
    start = p % 2 if parity == EVEN else (2 if p % 2 == 0 else 1)
    return tuple(range(start, p + 1, 2))


def recurrence_matrix(p: int, parity: str, epsilon: float) -> np.ndarray:
    """Matrix of ``Θ ↦ Θ'' + ε sin2η Θ' − pε cos2η Θ`` on the series coefficients.

    Column ``i`` is the image of the ``i``-th basis function. Eigenvalues of the
    returned matrix are ``−a``.
    """
    ks = frequencies(p, parity)
    n = len(ks)
    T = np.zeros((n, n))
    half = 0.5 * epsilon
    for i, k in enumerate(ks):
        T[i, i] -= k * k
        if i + 1 < n:
            T[i + 1, i] += half * (k - p)
        if i > 0:
            T[i - 1, i] -= half * (k + p)
        # harmonics folded back through zero frequency
        if k == 0 and i + 1 < n:
            T[i + 1, i] -= half * p
        elif k == 1:
            T[i, i] += (-half if parity == EVEN else half) * (1 + p)
    return T


def _symmetrize(p, parity, epsilon):
    """Return (diag, offdiag, scale) with ``-T = D S D^-1`` and ``D = diag(scale)``."""
    ks = frequencies(p, parity)
    n = len(ks)
    # ε-free version of the off-diagonal pattern fixes the similarity transform
    unit = -recurrence_matrix(p, parity, 1.0)
    A = -recurrence_matrix(p, parity, epsilon)
    lower = np.array([unit[i + 1, i] for i in range(n - 1)])
    upper = np.array([unit[i, i + 1] for i in range(n - 1)])
    if np.any(lower * upper <= 0):
        raise NumericalError("recurrence matrix is not symmetrizable")
    ratio = np.sqrt(lower / upper)
    scale = np.concatenate([[1.0], np.cumprod(ratio)])
    offdiag = epsilon * np.sqrt(lower * upper)
    return np.diag(A).copy(), offdiag, scale


def _refine(d, e, lam, w):
    """Rebuild an eigenvector of the symmetric tridiagonal (d, e) by continued fractions.

    The sweep runs inward from both ends to the largest component of the
    approximate eigenvector ``w``; each side is a dominant-solution recurrence,
    so small components keep full relative accuracy.
    """
    n = len(d)
    if n == 1:
        return np.ones(1)
    i0 = int(np.argmax(np.abs(w)))
    out = np.zeros(n)
    out[i0] = 1.0
    # from the top: rho[i] = w[i] / w[i-1]
    rho = 0.0
    ratios = {}
    for i in range(n - 1, i0, -1):
        denom = (d[i] - lam) + (e[i] * rho if i < n - 1 else 0.0)
        if denom == 0.0:
            return None
        rho = -e[i - 1] / denom
        ratios[i] = rho
    for i in range(i0 + 1, n):
        out[i] = out[i - 1] * ratios[i]
    # from the bottom: sig[i] = w[i] / w[i+1]
    sig = 0.0
    ratios = {}
    for i in range(0, i0):
        denom = (d[i] - lam) + (e[i - 1] * sig if i > 0 else 0.0)
        if denom == 0.0:
            return None
        sig = -e[i] / denom
        ratios[i] = sig
    for i in range(i0 - 1, -1, -1):
        out[i] = out[i + 1] * ratios[i]
    if not np.all(np.isfinite(out)):
        return None
    return out


def _fix_sign(c: np.ndarray) -> np.ndarray:
    big = np.max(np.abs(c))
    for value in c[::-1]:
        if abs(value) > 1e-300 * max(big, 1.0) and value != 0.0:
            return c if value > 0 else -c
    return c


def _l2_norm(ks, c):
    # ∫_0^{2π} cos² kη dη = π (2π for k = 0); same for sin with k >= 1
    weights = np.array([2 * np.pi if k == 0 else np.pi for k in ks])
    return math.sqrt(float(np.sum(weights * c * c)))


@lru_cache(maxsize=512)
def _eigensystem(p: int, parity: str, epsilon: float):
    ks = frequencies(p, parity)
    if not ks:
        return ()
    d, e, scale = _symmetrize(p, parity, epsilon)
    try:
        if len(d) == 1:
            lams, vecs = d.copy(), np.ones((1, 1))
        else:
            lams, vecs = eigh_tridiagonal(d, e)
    except (np.linalg.LinAlgError, ValueError) as exc:
        raise NumericalError(f"Ince eigensolve failed for p={p}, {parity}: {exc}") from exc
    if not np.all(np.isfinite(lams)):
        raise NumericalError(f"non-finite Ince eigenvalues for p={p}, {parity}")

    order = _sort_with_tiebreak(lams, vecs)
    result = []
    for col in order:
        w = _refine(d, e, lams[col], vecs[:, col])
        if w is None:
            w = vecs[:, col]
        c = scale * w
        c = c / _l2_norm(ks, c)
        c = _fix_sign(c)
        result.append((float(lams[col]), tuple(float(x) for x in c)))
    return tuple(result)


def _sort_with_tiebreak(lams, vecs):
    order = list(np.argsort(lams, kind="stable"))
    i = 0
    while i < len(order) - 1:
        a, b = order[i], order[i + 1]
        if abs(lams[a] - lams[b]) < _DEGENERACY_TOL:
            if np.argmax(np.abs(vecs[:, b])) < np.argmax(np.abs(vecs[:, a])):
                order[i], order[i + 1] = b, a
        i += 1
    return order


def build_eigensystem(p: int, parity: str, epsilon: float) -> list[IncePolynomial]:
    """All Ince polynomials of order ``p`` and the given parity, ascending in ``a``.

    The ``k``-th entry has degree ``frequencies(p, parity)[k]``.
    """
    if int(p) != p or p < 0:
        raise ValidationError(f"order p must be a non-negative integer, got {p!r}")
    if parity not in (EVEN, ODD):
        raise ValidationError(f"parity must be 'even' or 'odd', got {parity!r}")
    if not math.isfinite(epsilon) or epsilon < 0:
        raise ValidationError(f"epsilon must be finite and >= 0, got {epsilon!r}")
    if epsilon > EPSILON_WARN:
        warnings.warn(
            f"epsilon={epsilon:g} exceeds {EPSILON_WARN:g}; Ince coefficients may be ill-conditioned",
            ConditioningWarning,
            stacklevel=2,
        )
    p = int(p)
    ks = frequencies(p, parity)
    return [
        IncePolynomial(InceIndex(p, m, parity, float(epsilon)), ks, coeffs, a)
        for m, (a, coeffs) in zip(ks, _eigensystem(p, parity, float(epsilon)))
    ]


def ince_polynomial(p: int, m: int, parity: str, epsilon: float) -> IncePolynomial:
    validate_index(p, m, parity, epsilon)
    polys = build_eigensystem(p, parity, epsilon)
    return polys[frequencies(p, parity).index(m)]


def evaluate(poly: IncePolynomial, eta):
    """Value of the polynomial at real angle(s) ``eta``."""
    eta = np.mod(np.asarray(eta, dtype=float), 2 * np.pi)
    trig = np.cos if poly.index.parity == EVEN else np.sin
    out = np.zeros_like(eta)
    for k, c in zip(poly.frequencies, poly.coeffs):
        out = out + c * trig(k * eta)
    return out


def evaluate_derivatives(poly: IncePolynomial, eta):
    """Return ``(Θ, Θ', Θ'')`` at ``eta`` by term-wise differentiation."""
    eta = np.asarray(eta, dtype=float)
    val = np.zeros_like(eta)
    d1 = np.zeros_like(eta)
    d2 = np.zeros_like(eta)
    even = poly.index.parity == EVEN
    for k, c in zip(poly.frequencies, poly.coeffs):
        cs, sn = np.cos(k * eta), np.sin(k * eta)
        if even:
            val += c * cs
            d1 -= c * k * sn
        else:
            val += c * sn
            d1 += c * k * cs
        d2 -= c * k * k * (cs if even else sn)
    return val, d1, d2


def evaluate_hyperbolic(poly: IncePolynomial, xi):
    """Value at the imaginary argument ``iξ`` with the factor ``i**phase_power`` removed.

    ``cos(k iξ) = cosh(kξ)`` and ``sin(k iξ) = i sinh(kξ)``, so the odd
    polynomials are purely imaginary there; the returned factor is real.
    """
    xi = np.asarray(xi, dtype=float)
    hyp = np.cosh if poly.index.parity == EVEN else np.sinh
    out = np.zeros_like(xi)
    for k, c in zip(poly.frequencies, poly.coeffs):
        out = out + c * hyp(k * xi)
    return out


def ode_residual(poly: IncePolynomial, eta, d1, d2):
    """Pointwise residual of the Ince equation given sampled value/derivatives."""
    theta = evaluate(poly, eta)
    p, eps = poly.index.p, poly.index.epsilon
    return d2 + eps * np.sin(2 * eta) * d1 + (poly.eigenvalue - p * eps * np.cos(2 * eta)) * theta


def spectral_residual(poly: IncePolynomial, n_points: int = 512) -> float:
    """Max-norm Ince-equation residual from sampled values only.

    Derivatives are taken by FFT differentiation of the samples on a uniform
    periodic grid, so the check does not reuse the series coefficients or the
    recurrence that produced them.
    """
    eta = 2 * np.pi * np.arange(n_points) / n_points
    samples = evaluate(poly, eta)
    k = np.fft.fftfreq(n_points, d=1.0 / n_points)
    spectrum = np.fft.fft(samples)
    k_d1 = 1j * k
    k_d1[n_points // 2] = 0.0  # Nyquist term has no unambiguous odd derivative
    d1 = np.fft.ifft(k_d1 * spectrum).real
    d2 = np.fft.ifft(-(k**2) * spectrum).real
    return float(np.max(np.abs(ode_residual(poly, eta, d1, d2))))


def finite_difference_residual(poly: IncePolynomial, n_points: int = 512) -> float:
    """Max-norm residual with second-order centered differences (O(h²) truncation)."""
    h = 2 * np.pi / n_points
    eta = h * np.arange(n_points)
    samples = evaluate(poly, eta)
    fwd, back = np.roll(samples, -1), np.roll(samples, 1)
    d1 = (fwd - back) / (2 * h)
    d2 = (fwd - 2 * samples + back) / (h * h)
    return float(np.max(np.abs(ode_residual(poly, eta, d1, d2))))


def zero_ellipticity_limit(p: int, m: int, parity: str, eta):
    """``ε → 0`` limit of the normalized polynomial: ``±cos(mη)`` or ``±sin(mη)``.

    With the highest-harmonic-positive sign rule the limit carries the sign
    ``(-1)^((p-m)/2)``.
    """
    validate_index(p, m, parity, 0.0)
    eta = np.asarray(eta, dtype=float)
    sign = -1.0 if ((p - m) // 2) % 2 else 1.0
    norm = math.sqrt(2 * math.pi) if m == 0 else math.sqrt(math.pi)
    trig = np.cos if parity == EVEN else np.sin
    return sign * trig(m * eta) / norm


def limit_deviation(poly: IncePolynomial, n_points: int = 512) -> float:
    """Max deviation from :func:`zero_ellipticity_limit` on a uniform grid."""
    eta = 2 * np.pi * np.arange(n_points) / n_points
    i = poly.index
    return float(np.max(np.abs(evaluate(poly, eta) - zero_ellipticity_limit(i.p, i.m, i.parity, eta))))


def orthogonality_weight(eta, epsilon: float):
    """Sturm-Liouville weight ``exp(-(ε/2) cos 2η)`` of the Ince equation.

    Polynomials of equal order, parity and ε but different degree are
    orthogonal under this weight; with unit weight they are not.
    """
    return np.exp(-0.5 * epsilon * np.cos(2 * np.asarray(eta, dtype=float)))
