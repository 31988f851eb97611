"""Built-in numerical checks, written out as a deterministic report tree."""

from __future__ import annotations

import argparse
import math
from pathlib import Path

import numpy as np

from . import __version__, artifacts, decompose, entropy, fock, ince_poly, wigner

REFERENCE_COEFFICIENTS = (0.2079, 0.8279, -0.5210)
MORPHOLOGY_CASES = (
    (3, 3, 2.0), (5, 3, 2.0), (7, 3, 2.0), (5, 1, 2.0),
    (5, 5, 2.0), (3, 3, 1e-8), (3, 3, 5.0), (3, 3, 1e3),
)
CLOSED_FORM_ORDERS = (1, 3, 5, 7, 9)


def _check(name, value, threshold, passed, **details):
    return {"name": name, "value": value, "threshold": threshold, "passed": bool(passed), **details}


def random_unit_vectors(rng: np.random.Generator, size: int, count: int) -> np.ndarray:
    z = rng.normal(size=(count, size)) + 1j * rng.normal(size=(count, size))
    return z / np.linalg.norm(z, axis=1, keepdims=True)


def check_reference_coefficients():
    c = decompose.coefficients(5, 1, 2.0)
    dev = float(np.max(np.abs(c.as_array() - np.array(REFERENCE_COEFFICIENTS))))
    return _check("reference_coefficients", dev, 5e-3, dev < 5e-3,
                  entries=[[a.real, a.imag] for a in c.entries], residual_mass=c.residual_mass)


def check_closed_form(seed: int, trials: int = 100):
    rng = np.random.default_rng(seed)
    per_n = []
    worst = 0.0
    for N in CLOSED_FORM_ORDERS:
        diffs = []
        for amps in random_unit_vectors(rng, decompose.j_max(N) + 1, trials):
            coeffs = decompose.CoefficientVector.from_amplitudes(N, amps)
            diffs.append(fock.closed_form_discrepancy(coeffs))
        diffs = np.array(diffs)
        mx = float(np.max(np.abs(diffs)))
        worst = max(worst, mx)
        mean = diffs.mean(axis=0)
        per_n.append({"N": N, "max_abs": mx,
                      "mean_signed": [[float(d.real), float(d.imag)] for d in mean]})
    return _check("closed_form_vs_unitary", worst, 1e-10, worst < 1e-10, per_N=per_n)


def check_ince():
    residual = fd = limit = 0.0
    for p in range(10):
        for parity in (ince_poly.EVEN, ince_poly.ODD):
            for poly in ince_poly.build_eigensystem(p, parity, 1e-8):
                limit = max(limit, ince_poly.limit_deviation(poly))
            for eps in (0.5, 2.0, 5.0):
                for poly in ince_poly.build_eigensystem(p, parity, eps):
                    residual = max(residual, ince_poly.spectral_residual(poly))
                    fd = max(fd, ince_poly.finite_difference_residual(poly))
    return [
        _check("ince_ode_residual", residual, 1e-8, residual < 1e-8,
               finite_difference_residual=fd),
        _check("ince_trig_limit", limit, 1e-4, limit < 1e-4),
    ]


def check_wigner():
    coeffs = decompose.coefficients(5, 1, 2.0)
    out = []
    origin = float(wigner.wigner_diagonal(coeffs, 0.0, 0.0, 0.0, 0.0))
    dev = abs(origin + 1 / math.pi**2)
    out.append(_check("wigner_origin", dev, 1e-15, dev <= 1e-15, value_at_origin=origin))

    total = wigner.trapezoid_4d(lambda x, y, px, py: wigner.wigner_diagonal(coeffs, x, y, px, py))
    out.append(_check("wigner_normalization", abs(total - 1), 5e-3, abs(total - 1) < 5e-3, integral=total))

    lattice = np.linspace(-4, 4, 17)
    worst = 0.0
    for j in range(decompose.j_max(5) + 1):
        amps = np.zeros(decompose.j_max(5) + 1)
        amps[j] = 1.0
        single = decompose.CoefficientVector.from_amplitudes(5, amps)
        exact = wigner.wigner_exact_grid(fock.evolve(fock.initial_state(single)), *(lattice,) * 4)
        G = np.meshgrid(*(lattice,) * 4, indexing="ij")
        worst = max(worst, float(np.max(np.abs(exact - wigner.wigner_lg(j, 5 - 2 * j, *G)))))
    out.append(_check("wigner_single_lg_exact", worst, 2e-3, worst < 2e-3))

    exact = wigner.wigner_exact_grid(fock.evolve(fock.initial_state(coeffs)), *(lattice,) * 4)
    G = np.meshgrid(*(lattice,) * 4, indexing="ij")
    gap = float(np.max(np.abs(exact - wigner.wigner_diagonal(coeffs, *G))))
    out.append(_check("wigner_cross_term_gap", gap, None, True, note="reported only"))

    grid = np.linspace(-4, 4, 81)
    sl = wigner.wigner_slice("diagonal", coeffs, ("x", "y"), grid, grid)
    mn = float(sl.values.min())
    out.append(_check("wigner_negativity", mn, 0.0, mn < 0))
    return out


def check_entropy():
    worst = 0.0
    bounds_ok = True
    for m in range(1, 10):
        sweep = entropy.entropy_sweep(m, 2.0, range(1, 10))
        for r in sweep.records:
            worst = max(worst, abs(r.entropy - r.schmidt))
            bounds_ok &= -1e-12 <= r.entropy <= math.log(r.N + 1) + 1e-12
    s1 = entropy.entropy_sweep(1, 2.0, [1]).records[0].entropy
    return [
        _check("entropy_two_path", worst, 1e-10, worst < 1e-10),
        _check("entropy_ln2", abs(s1 - math.log(2)), 1e-12, abs(s1 - math.log(2)) < 1e-12),
        _check("entropy_bounds", None, None, bounds_ok),
    ]


def check_odd_even():
    rows = {m: entropy.odd_even_report(m, 2.0) for m in (1, 3)}
    return _check("entropy_odd_above_even", None, None, True, note="reported only",
                  report={str(m): r for m, r in rows.items()})


def check_morphology():
    cases = []
    ok = True
    for p, m, eps in MORPHOLOGY_CASES:
        c = decompose.coefficients(p, m, eps)
        core = abs(complex(decompose.reconstruct(c, np.array(0.0), np.array(0.0)))) ** 2
        radius = fock.peak_radius(c)
        maxima, minima = fock.count_extrema(fock.azimuthal_profile(c, radius)[1])
        passed = core < 1e-12 and (p != m or (maxima, minima) == (2, 2))
        ok &= passed
        cases.append({"p": p, "m": m, "epsilon": eps, "core_intensity": core,
                      "ring_radius": radius, "maxima": maxima, "minima": minima, "passed": passed})
    return _check("intensity_morphology", None, None, ok, cases=cases)


def _artifact_args(command, out, **kw):
    base = {"command": command, "out": str(out), "config": None, "convention": "bilinear"}
    base.update(kw)
    return argparse.Namespace(**base)


def run(args, out: Path) -> list[Path]:
    from . import cli

    out.mkdir(parents=True, exist_ok=True)
    checks = [check_reference_coefficients(), check_closed_form(args.seed)]
    checks += check_ince()
    checks += check_wigner()
    checks += check_entropy()
    checks.append(check_odd_even())
    checks.append(check_morphology())

    files = []
    files += cli.cmd_decompose(_artifact_args("decompose", out / "decompose", p=5, m=1, eps=2.0))
    files += cli.cmd_state(_artifact_args("state", out / "state", p=5, m=1, eps=2.0,
                                          phi=fock.CONVERTER_ANGLE))
    files += cli.cmd_intensity(_artifact_args("intensity", out / "intensity", p=5, m=1, eps=2.0,
                                              extent=6.0, n=128, field="state"))
    files += cli.cmd_wigner(_artifact_args("wigner", out / "wigner", p=5, m=1, eps=2.0, formula="diagonal",
                                           axes="x,py", all_slices=True, frozen="", range=4.0, n=41))
    for m in (1, 3):
        files += cli.cmd_entropy(_artifact_args("entropy", out / f"entropy_m{m}", m=m, eps=2.0,
                                                N="1..9", base="natural"))

    args.passed = all(c["passed"] for c in checks)
    report = {
        "producer": {"package": "ince_vortex", "version": __version__},
        "seed": args.seed,
        "convention": args.convention,
        "passed": args.passed,
        "checks": checks,
        "files": sorted(str(f.relative_to(out)) for f in files),
    }
    files.append(artifacts.write_json(out / "report.json", report))
    return files
