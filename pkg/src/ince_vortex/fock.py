"""Two-mode Fock states of fixed total photon number and the mode converter.

A state with ``N`` photons is stored as ``N + 1`` amplitudes; entry ``n``
multiplies ``|N-n, n⟩`` (``N-n`` photons in mode a, ``n`` in mode b). The
converter ``Ĉ = (a†b + ab†)/2`` conserves ``N``, so everything here acts inside
that block and no truncation is involved.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.special import eval_hermite

from . import modes
from .decompose import CoefficientVector, reconstruct
from .errors import ValidationError

CONVERTER_ANGLE = math.pi / 4


@dataclass(frozen=True)
class TwoModeState:
    N: int
    amplitudes: tuple[complex, ...]
    provenance: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        if int(self.N) != self.N or self.N < 0:
            raise ValidationError(f"photon number must be a non-negative integer, got {self.N!r}")
        if len(self.amplitudes) != self.N + 1:
            raise ValidationError(f"N={self.N} needs {self.N + 1} amplitudes, got {len(self.amplitudes)}")
        norm2 = sum(abs(a) ** 2 for a in self.amplitudes)
        if abs(norm2 - 1) > 1e-10:
            raise ValidationError(f"state must have unit norm, got {norm2!r}")

    @classmethod
    def from_array(cls, amplitudes, provenance=None) -> "TwoModeState":
        amps = np.asarray(amplitudes, dtype=complex)
        return cls(amps.size - 1, tuple(complex(a) for a in amps), dict(provenance or {}))

    def as_array(self) -> np.ndarray:
        return np.array(self.amplitudes, dtype=complex)

    def to_dict(self) -> dict:
        return {
            "N": self.N,
            "basis": [[self.N - n, n] for n in range(self.N + 1)],
            "amplitudes": [[float(a.real), float(a.imag)] for a in self.amplitudes],
            "provenance": self.provenance,
        }


def initial_state(coeffs: CoefficientVector) -> TwoModeState:
    """Place ``A_j`` on ``|N-j, j⟩`` with ``N = p``."""
    N = coeffs.p
    amps = np.zeros(N + 1, dtype=complex)
    amps[: len(coeffs.entries)] = coeffs.entries
    return TwoModeState.from_array(amps, {"p": coeffs.p, "m": coeffs.m, "epsilon": coeffs.epsilon})


def converter_matrix(N: int) -> np.ndarray:
    """Matrix of ``Ĉ = (a†b + ab†)/2`` on ``{|N-n, n⟩}``."""
    if N < 0:
        raise ValidationError(f"N must be >= 0, got {N}")
    n = np.arange(N)
    off = 0.5 * np.sqrt((n + 1) * (N - n))
    return np.diag(off, -1) + np.diag(off, 1)


def converter_unitary(N: int, phi: float) -> np.ndarray:
    """``exp(i 2φ Ĉ)`` from the eigen-decomposition of :func:`converter_matrix`."""
    lam, V = np.linalg.eigh(converter_matrix(N))
    return (V * np.exp(2j * phi * lam)) @ V.conj().T


def evolve(state: TwoModeState, phi: float = CONVERTER_ANGLE) -> TwoModeState:
    """Apply ``exp(i 2φ Ĉ)``; ``φ = π/4`` is the HG→LG converter setting."""
    out = converter_unitary(state.N, phi) @ state.as_array()
    prov = dict(state.provenance)
    prov["phi"] = prov.get("phi", 0.0) + phi
    return TwoModeState.from_array(out, prov)


def _log_factorial(k: int) -> float:
    return math.lgamma(k + 1)


def closed_form_state(coeffs: CoefficientVector) -> TwoModeState:
    """Converter output written out term by term.

    For every ``j`` the binomial expansion of
    ``(a† + i b†)^{N-j} (b† + i a†)^j / sqrt(2^N (N-j)! j!)`` contributes
    ``A_j sqrt(j!(N-j)!/2^N) c_{lk}`` to ``|N-(j+l-k), j+l-k⟩`` with
    ``c_{lk} = i^{k+l} sqrt((N-j-l+k)! (j+l-k)!) / (k! (j-k)! l! (N-j-l)!)``.
    Factorials are combined in log space.
    """
    N = coeffs.p
    amps = np.zeros(N + 1, dtype=complex)
    lf = _log_factorial
    for j, A in enumerate(coeffs.entries):
        if A == 0:
            continue
        log_pref = 0.5 * (lf(j) + lf(N - j) - N * math.log(2.0))
        for k in range(j + 1):
            for l in range(N - j + 1):
                n = j + l - k
                log_c = (
                    0.5 * (lf(N - j - l + k) + lf(n))
                    - lf(k) - lf(j - k) - lf(l) - lf(N - j - l)
                )
                amps[n] += A * (1j ** ((k + l) % 4)) * math.exp(log_pref + log_c)
    return TwoModeState.from_array(
        amps, {"p": coeffs.p, "m": coeffs.m, "epsilon": coeffs.epsilon, "phi": CONVERTER_ANGLE}
    )


def closed_form_discrepancy(coeffs: CoefficientVector) -> np.ndarray:
    """Signed entrywise difference ``closed_form - evolve(initial_state)``."""
    return closed_form_state(coeffs).as_array() - evolve(initial_state(coeffs)).as_array()


# ----------------------------------------------------------------------------
# position representation


def hermite_function(k: int, x):
    """Unit-width oscillator eigenfunction ``h_k(x)``."""
    x = np.asarray(x, dtype=float)
    norm = 1.0 / math.sqrt(2.0**k * math.factorial(k) * math.sqrt(math.pi))
    return norm * eval_hermite(k, x) * np.exp(-x * x / 2)


def fock_wavefunction(state: TwoModeState, x, y):
    """``ψ(x, y) = Σ_n c_n h_{N-n}(x) h_n(y)``."""
    N = state.N
    out = 0j
    for n, c in enumerate(state.amplitudes):
        if c != 0:
            out = out + c * hermite_function(N - n, x) * hermite_function(n, y)
    return out


def wavefunction(coeffs: CoefficientVector, r, phi):
    """LG superposition ``Σ_j A_j LG_{j, N-2j}(r, φ)`` with unit-norm LG modes."""
    r = np.asarray(r, dtype=float)
    phi = np.asarray(phi, dtype=float)
    x, y = r * np.cos(phi), r * np.sin(phi)
    out = np.zeros(np.broadcast(x, y).shape, dtype=complex)
    for A, (n, l) in zip(coeffs.entries, coeffs.lg_indices):
        out = out + A * modes.lg_helical(n, l, x, y)
    return out


def lg_phase(N: int, j: int) -> complex:
    """Phase relating ``evolve(|N-j, j⟩)`` to the unit-norm helical ``LG_{j, N-2j}``.

    The converter maps ``|N-j, j⟩`` onto ``(-i)^j LG_{j, N-2j}``: the factor
    ``i^j`` comes from ``b† + i a† = i (a† - i b†)`` and ``(-1)^j`` from the
    Laguerre sign convention.
    """
    return (-1j) ** j


def intensity_field(coeffs: CoefficientVector, extent: float = 6.0, n: int = 256) -> modes.ComplexField:
    """Sampled field of :func:`wavefunction` (``|values|²`` is the intensity)."""
    prov = {"p": coeffs.p, "m": coeffs.m, "epsilon": coeffs.epsilon, "convention": coeffs.convention}
    return modes.sample_field(lambda x, y: reconstruct(coeffs, x, y), extent, n, prov)


def peak_radius(coeffs: CoefficientVector, r_max: float = 6.0, n_r: int = 1200,
                n_phi: int = 720) -> float:
    """Radius of the brightest point of the intensity on a polar scan."""
    r = np.linspace(r_max / n_r, r_max, n_r)
    phi = np.linspace(0.0, 2 * math.pi, n_phi, endpoint=False)
    I = np.abs(wavefunction(coeffs, r[:, None], phi[None, :])) ** 2
    return float(r[np.unravel_index(np.argmax(I), I.shape)[0]])


def azimuthal_profile(coeffs: CoefficientVector, radius: float, n_phi: int = 720):
    """``(φ, |ψ(radius, φ)|²)`` evaluated directly from the mode functions."""
    phi = np.linspace(0.0, 2 * math.pi, n_phi, endpoint=False)
    return phi, np.abs(wavefunction(coeffs, radius, phi)) ** 2


def count_extrema(profile) -> tuple[int, int]:
    """Strict local maxima and minima of a periodic sequence."""
    s = np.sign(np.diff(np.append(profile, profile[0])))
    nxt = np.roll(s, -1)
    return int(np.sum((s > 0) & (nxt < 0))), int(np.sum((s < 0) & (nxt > 0)))
