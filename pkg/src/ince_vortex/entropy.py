"""Reduced density matrices and von Neumann entropy of two-mode vortex states."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .decompose import coefficients
from .errors import NumericalError, ValidationError
from .fock import TwoModeState, evolve, initial_state

BASES = {"natural": math.e, "two": 2.0}

_PSD_TOL = 1e-9
_CLAMP_TOL = 1e-12


@dataclass(frozen=True)
class ReducedDensityMatrix:
    """Reduced state of mode a; row/column ``k`` is the a-mode photon number."""

    matrix: np.ndarray

    @property
    def dimension(self) -> int:
        return self.matrix.shape[0]


def reduced_density(state: TwoModeState) -> ReducedDensityMatrix:
    """Partial trace over mode b of ``|ψ⟩⟨ψ|``.

    The full density matrix is built on the ``(N+1)²`` product basis and mode b
    is traced out explicitly; for fixed total photon number the result comes
    out diagonal, which callers may check rather than assume.
    """
    N = state.N
    psi = np.zeros((N + 1, N + 1), dtype=complex)  # psi[a_count, b_count]
    for n, c in enumerate(state.amplitudes):
        psi[N - n, n] = c
    rho_full = np.einsum("ab,cd->abcd", psi, psi.conj())
    rho_a = np.einsum("abcb->ac", rho_full)
    rho_a = 0.5 * (rho_a + rho_a.conj().T)
    return ReducedDensityMatrix(rho_a)


def von_neumann(rho: ReducedDensityMatrix, base: str = "natural") -> float:
    """``-Σ λ log λ`` over the eigenvalues of ``rho`` (``0 log 0 = 0``)."""
    if base not in BASES:
        raise ValidationError(f"base must be one of {tuple(BASES)}, got {base!r}")
    lam = np.linalg.eigvalsh(rho.matrix)
    if lam.min() < -_PSD_TOL:
        raise NumericalError(f"reduced density matrix is not PSD (min eigenvalue {lam.min():.3e})")
    lam = np.where(lam < _CLAMP_TOL, 0.0, lam)
    lam = lam / lam.sum()
    nz = lam[lam > 0]
    return float(-np.sum(nz * np.log(nz)) / math.log(BASES[base]))


def schmidt_entropy(state: TwoModeState, base: str = "natural") -> float:
    """Entropy from the Schmidt weights ``|c_n|²`` directly (no partial trace)."""
    w = np.abs(state.as_array()) ** 2
    w = w[w > 0]
    return float(-np.sum(w * np.log(w)) / math.log(BASES[base]))


def vortex_state(p: int, m: int, epsilon: float, convention: str = "bilinear") -> TwoModeState:
    """Converter output for ``HIG_{p,m}(ε)``: coefficients, Fock placement, ``φ = π/4``."""
    return evolve(initial_state(coefficients(p, m, epsilon, convention)))


def admissible(N: int, m: int) -> bool:
    return N >= 1 and 1 <= m <= N and (N - m) % 2 == 0


@dataclass(frozen=True)
class EntropyRecord:
    N: int
    m: int
    epsilon: float
    entropy: float
    schmidt: float
    base: str


@dataclass(frozen=True)
class EntropySweep:
    records: tuple[EntropyRecord, ...]
    base: str = "natural"
    provenance: dict = field(default_factory=dict)

    def by_N(self) -> dict[int, EntropyRecord]:
        return {r.N: r for r in self.records}


def entropy_sweep(m: int, epsilon: float, N_list, base: str = "natural",
                  convention: str = "bilinear") -> EntropySweep:
    """Entropy of the vortex state for each admissible ``N`` (others skipped)."""
    if base not in BASES:
        raise ValidationError(f"base must be one of {tuple(BASES)}, got {base!r}")
    records = []
    for N in sorted(set(int(n) for n in N_list)):
        if not admissible(N, m):
            continue
        state = vortex_state(N, m, epsilon, convention)
        records.append(EntropyRecord(
            N, m, float(epsilon),
            von_neumann(reduced_density(state), base),
            schmidt_entropy(state, base),
            base,
        ))
    return EntropySweep(tuple(records), base,
                        {"m": m, "epsilon": float(epsilon), "convention": convention})


def even_partner_degree(N_even: int, m: int) -> int | None:
    """Degree used for an even-``N`` neighbour of an odd-``m`` sweep.

    Even orders need even degrees; take ``m + 1`` when admissible, else ``m - 1``.
    """
    for cand in (m + 1, m - 1):
        if admissible(N_even, cand):
            return cand
    return None


def odd_even_report(m: int, epsilon: float, N_max: int = 9, base: str = "natural",
                    convention: str = "bilinear") -> list[dict]:
    """Compare each odd ``N`` against both even neighbours ``N ± 1``.

    Odd ``m`` only admits odd ``N``; the even neighbours use the degree from
    :func:`even_partner_degree`. Outcomes are returned, never asserted.
    """
    rows = []
    cache: dict[tuple[int, int], float] = {}

    def S(N, deg):
        key = (N, deg)
        if key not in cache:
            cache[key] = von_neumann(reduced_density(vortex_state(N, deg, epsilon, convention)), base)
        return cache[key]

    for N in range(1, N_max + 1, 2):
        if not admissible(N, m):
            continue
        row = {"N": N, "m": m, "epsilon": float(epsilon), "entropy": S(N, m)}
        for side, Ne in (("lower", N - 1), ("upper", N + 1)):
            deg = even_partner_degree(Ne, m) if Ne >= 2 else None
            if deg is None:
                row[side] = None
                continue
            Se = S(Ne, deg)
            row[side] = {"N": Ne, "m": deg, "entropy": Se, "odd_above": bool(row["entropy"] > Se)}
        rows.append(row)
    return rows
