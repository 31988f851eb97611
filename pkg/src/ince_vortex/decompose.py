"""Expansion of helical Ince-Gauss modes over helical Laguerre-Gauss modes.

For order ``p`` the candidate LG modes are ``(n=j, l=p-2j)`` with
``j = 0 … ⌊(p-1)/2⌋``; the ``l = 0`` member of even orders is left out because
it has no helical partner.

Two projection conventions are available:

``"bilinear"`` (default)
    ``A_j = ∫∫ HIG · LG_j dS`` with no complex conjugation. This bilinear
    integral is the one that yields ``(0.2079, 0.8279, -0.5210)`` for
    ``p=5, m=1, ε=2``. It equals ``(a_l - b_l) / 2`` where ``a_l``/``b_l`` are
    the even/odd real-mode overlaps, i.e. it picks out the counter-rotating
    (``e^{-ilφ}``) content of ``IG^e + i IG^o``.
``"inner"``
    ``A_j = ⟨LG_j | HIG⟩``, the Hermitian projection onto co-rotating modes,
    ``(a_l + b_l) / 2``.

Either way the vector is renormalized to unit length and its largest entry is
rotated onto the positive real axis. The mass lost before renormalization is
kept as ``residual_mass``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import modes, precise
from .errors import NumericalError, ValidationError
from .ince_poly import EVEN, validate_index
from .quadrature import QuadratureRule, integrate_checked

CONVENTIONS = ("bilinear", "inner")

# below this raw norm the projected vector has no meaningful direction
_NULL_NORM = 1e-12
# below this raw norm double-precision cancellation costs more than ~6 digits
_PRECISE_BELOW = 1e-6


@dataclass(frozen=True)
class CoefficientVector:
    p: int
    m: int
    epsilon: float
    entries: tuple[complex, ...]
    residual_mass: float = 0.0
    convention: str = "bilinear"

    def __post_init__(self):
        norm2 = sum(abs(a) ** 2 for a in self.entries)
        if abs(norm2 - 1) > 1e-6:
            raise ValidationError(f"coefficients must have unit norm, got {norm2:.8f}")

    @property
    def j_max(self) -> int:
        return len(self.entries) - 1

    @property
    def lg_indices(self) -> list[tuple[int, int]]:
        """``(n, l)`` of the helical LG mode multiplying each entry."""
        return [(j, self.p - 2 * j) for j in range(len(self.entries))]

    def as_array(self) -> np.ndarray:
        return np.array(self.entries, dtype=complex)

    def to_dict(self) -> dict:
        return {
            "p": self.p,
            "m": self.m,
            "epsilon": self.epsilon,
            "convention": self.convention,
            "lg_modes": [{"n": n, "l": l} for n, l in self.lg_indices],
            "entries": [[float(a.real), float(a.imag)] for a in self.entries],
            "residual_mass": self.residual_mass,
        }

    @classmethod
    def from_amplitudes(cls, p, amplitudes, m=None, epsilon=float("nan"), convention="given"):
        """Wrap arbitrary amplitudes for LG modes ``(j, p-2j)``; they are normalized here."""
        amps = np.asarray(amplitudes, dtype=complex)
        if amps.ndim != 1 or amps.size != j_max(p) + 1:
            raise ValidationError(f"order {p} needs {j_max(p) + 1} amplitudes, got {amps.size}")
        norm = np.linalg.norm(amps)
        if norm == 0:
            raise ValidationError("amplitude vector is zero")
        amps = amps / norm
        return cls(int(p), m if m is not None else -1, float(epsilon),
                   tuple(complex(a) for a in amps), 0.0, convention)


def j_max(p: int) -> int:
    """Largest radial index kept for order ``p`` (``⌊(p-1)/2⌋``)."""
    if p < 1:
        raise ValidationError(f"helical expansions need p >= 1, got {p}")
    return (p - 1) // 2


def overlap(field_a, field_b, rule: QuadratureRule | None = None, rtol: float = 1e-8) -> complex:
    """Hermitian overlap ``⟨B|A⟩ = ∫∫ conj(B) A dS`` of two mode functions.

    ``field_a`` and ``field_b`` are callables ``(x, y) -> array`` carrying the
    ``exp(-r²/2)`` envelope. The default rule is exact up to order-12 modes; a
    doubled rule is always evaluated as a convergence check.
    """
    rule = rule or QuadratureRule.for_order(12)
    value = integrate_checked(lambda x, y: np.conj(field_b(x, y)) * field_a(x, y), rule, rtol)
    return complex(value)


def bilinear_overlap(field_a, field_b, rule: QuadratureRule | None = None, rtol: float = 1e-8) -> complex:
    """``∫∫ A B dS`` without conjugation."""
    rule = rule or QuadratureRule.for_order(12)
    return complex(integrate_checked(lambda x, y: field_b(x, y) * field_a(x, y), rule, rtol))


def _fix_phase(vec: np.ndarray) -> np.ndarray:
    k = int(np.argmax(np.abs(vec)))
    phase = vec[k] / abs(vec[k])
    out = vec / phase
    out[k] = abs(vec[k])
    return out


def raw_projections(p: int, m: int, epsilon: float, convention: str = "bilinear",
                    rule: QuadratureRule | None = None) -> np.ndarray:
    """Unnormalized projections of ``HIG_{p,m}`` onto the kept helical LG modes."""
    if convention not in CONVENTIONS:
        raise ValidationError(f"convention must be one of {CONVENTIONS}, got {convention!r}")
    validate_index(p, m, EVEN, epsilon)
    if m < 1:
        raise ValidationError("helical decomposition needs m >= 1")
    if not epsilon > 0:
        raise ValidationError("epsilon must be > 0")
    rule = rule or QuadratureRule.for_order(p)

    def hig(x, y):
        return modes.hig_mode(p, m, epsilon, x, y)

    project = bilinear_overlap if convention == "bilinear" else overlap
    out = []
    for j in range(j_max(p) + 1):
        l = p - 2 * j
        out.append(project(hig, lambda x, y, j=j, l=l: modes.lg_helical(j, l, x, y), rule))
    return np.array(out)


def coefficients(p: int, m: int, epsilon: float, convention: str = "bilinear",
                 rule: QuadratureRule | None = None) -> CoefficientVector:
    """Normalized expansion coefficients ``A_j`` of ``HIG_{p,m}(ε)``.

    When the double-precision projections are tiny (bilinear convention at
    small ε, where they are a difference of nearly equal overlaps) they are
    recomputed in multiprecision by :mod:`ince_vortex.precise`.
    """
    raw = raw_projections(p, m, epsilon, convention, rule)
    null_norm = _NULL_NORM
    if raw.size > 1 and np.linalg.norm(raw) < _PRECISE_BELOW:
        raw = precise.raw_projections(p, m, epsilon, convention)
        null_norm = 10.0 ** (10 - precise.DEFAULT_DPS)
    residual = 1.0 - float(np.sum(np.abs(raw) ** 2))
    if raw.size == 1:
        # a one-entry unit vector with fixed phase is (1,) whatever the raw value
        entries = np.ones(1, dtype=complex)
    else:
        norm = float(np.linalg.norm(raw))
        if norm < null_norm:
            raise NumericalError(
                f"projection of HIG(p={p}, m={m}, ε={epsilon:g}) onto the kept LG modes "
                f"vanishes (norm {norm:.2e}); coefficient direction undefined"
            )
        entries = _fix_phase(raw / norm)
    return CoefficientVector(
        int(p), int(m), float(epsilon),
        tuple(complex(a) for a in entries), residual, convention,
    )


def reconstruct(coeffs: CoefficientVector, x, y):
    """Field ``Σ_j A_j LG_{j, p-2j}(x, y)``."""
    out = np.zeros(np.broadcast(np.asarray(x), np.asarray(y)).shape, dtype=complex)
    for a, (n, l) in zip(coeffs.entries, coeffs.lg_indices):
        out = out + a * modes.lg_helical(n, l, x, y)
    return out


def expansion_mass(p: int, m: int, epsilon: float) -> tuple[float, float]:
    """Mass of ``HIG_{p,m}`` on co-rotating and counter-rotating order-``p`` LG modes.

    The two numbers sum to one when the Ince-Gauss mode lies in the order-``p``
    oscillator shell (l = 0 included for even ``p``).
    """
    rule = QuadratureRule.for_order(p)

    def hig(x, y):
        return modes.hig_mode(p, m, epsilon, x, y)

    co = counter = 0.0
    for n in range(p // 2 + 1):
        l = p - 2 * n
        lg = (lambda x, y, n=n, l=l: modes.lg_helical(n, l, x, y))
        co += abs(overlap(hig, lg, rule)) ** 2
        if l > 0:
            lg_minus = (lambda x, y, n=n, l=l: np.conj(modes.lg_helical(n, l, x, y)))
            counter += abs(overlap(hig, lg_minus, rule)) ** 2
    return co, counter


__all__ = [
    "CONVENTIONS",
    "CoefficientVector",
    "bilinear_overlap",
    "coefficients",
    "expansion_mass",
    "j_max",
    "overlap",
    "raw_projections",
    "reconstruct",
]
