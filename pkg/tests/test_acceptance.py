"""Acceptance suite: one test per criterion, each printing a single PASS/FAIL line."""

import filecmp
import json
import math
import time

import numpy as np
import pytest

from ince_vortex import cli, decompose, entropy, fock, ince_poly, wigner

TARGET = np.array([0.2079, 0.8279, -0.5210])
PI2 = math.pi**2


@pytest.fixture
def report(capsys):
    def emit(number, passed, detail):
        with capsys.disabled():
            print(f"\ncriterion {number}: {'PASS' if passed else 'FAIL'} {detail}")
    return emit


def test_criterion_1_decomposition_values(tmp_path, report):
    t0 = time.perf_counter()
    code = cli.main(["decompose", "--p", "5", "--m", "1", "--eps", "2", "--out", str(tmp_path)])
    elapsed = time.perf_counter() - t0
    doc = json.loads((tmp_path / "coefficients.json").read_text())
    got = np.array([complex(re, im) for re, im in doc["coefficients"]["entries"]])
    dev = float(np.max(np.abs(got - TARGET)))
    passed = code == 0 and dev < 5e-3 and elapsed < 10
    report(1, passed, f"coefficients={np.round(got.real, 5).tolist()} max_dev={dev:.2e} time={elapsed:.2f}s")
    assert passed


def test_criterion_2_closed_form(report):
    rng = np.random.default_rng(0)
    t0 = time.perf_counter()
    worst, signed = 0.0, {}
    for N in (1, 3, 5, 7, 9):
        size = decompose.j_max(N) + 1
        diffs = []
        for _ in range(100):
            z = rng.normal(size=size) + 1j * rng.normal(size=size)
            c = decompose.CoefficientVector.from_amplitudes(N, z / np.linalg.norm(z))
            closed = fock.closed_form_state(c).as_array()
            unitary = fock.converter_unitary(N, math.pi / 4) @ fock.initial_state(c).as_array()
            diffs.append(closed - unitary)
        d = np.array(diffs)
        worst = max(worst, float(np.max(np.abs(d))))
        signed[N] = float(np.mean(d.real))
    elapsed = time.perf_counter() - t0
    passed = worst < 1e-10 and elapsed < 5
    report(2, passed, f"max_abs={worst:.2e} mean_signed_re={signed} time={elapsed:.2f}s")
    assert passed


def test_criterion_3_ince_engine(report):
    t0 = time.perf_counter()
    residual = limit = 0.0
    for p in range(10):
        for parity in (ince_poly.EVEN, ince_poly.ODD):
            for poly in ince_poly.build_eigensystem(p, parity, 1e-8):
                limit = max(limit, ince_poly.limit_deviation(poly))
            for eps in (0.5, 2.0, 5.0):
                for poly in ince_poly.build_eigensystem(p, parity, eps):
                    residual = max(residual, ince_poly.spectral_residual(poly))
    elapsed = time.perf_counter() - t0
    passed = residual < 1e-8 and limit < 1e-4 and elapsed < 10
    report(3, passed, f"ode_residual={residual:.2e} trig_limit={limit:.2e} time={elapsed:.2f}s")
    assert passed


def test_criterion_4_wigner_invariants(report):
    t0 = time.perf_counter()
    # exact up to rounding in sum |A_j|^2, which is 1 only to a few ulp
    origin_dev = 0.0
    for p, m in [(1, 1), (3, 1), (3, 3), (4, 2), (5, 1), (6, 4), (7, 3), (9, 5)]:
        c = decompose.coefficients(p, m, 2.0)
        value = float(wigner.wigner_diagonal(c, 0.0, 0.0, 0.0, 0.0))
        origin_dev = max(origin_dev, abs(value * PI2 - (-1) ** p))
    origin_ok = origin_dev <= 4 * np.finfo(float).eps

    c = decompose.coefficients(5, 1, 2.0)
    total = wigner.trapezoid_4d(lambda x, y, px, py: wigner.wigner_diagonal(c, x, y, px, py))

    lattice = np.linspace(-4, 4, 17)
    G = np.meshgrid(*(lattice,) * 4, indexing="ij")
    worst = 0.0
    for j in range(decompose.j_max(5) + 1):
        amps = np.zeros(decompose.j_max(5) + 1)
        amps[j] = 1.0
        single = decompose.CoefficientVector.from_amplitudes(5, amps)
        exact = wigner.wigner_exact_grid(fock.evolve(fock.initial_state(single)), *(lattice,) * 4)
        worst = max(worst, float(np.max(np.abs(exact - wigner.wigner_lg(j, 5 - 2 * j, *G)))))
    elapsed = time.perf_counter() - t0
    passed = origin_ok and abs(total - 1) < 5e-3 and worst < 2e-3 and elapsed < 120
    report(4, passed, f"origin_rel_dev={origin_dev:.1e} normalization={total:.6f} "
                      f"single_lg_gap={worst:.2e} time={elapsed:.2f}s")
    assert passed


def test_criterion_5_negativity(report):
    t0 = time.perf_counter()
    c = decompose.coefficients(5, 1, 2.0)
    grid = np.linspace(-4, 4, 81)
    sl = wigner.wigner_slice("diagonal", c, ("x", "y"), grid, grid, {"px": 0.0, "py": 0.0})
    mn = float(sl.values.min())
    elapsed = time.perf_counter() - t0
    passed = mn < 0 and elapsed < 10
    report(5, passed, f"min_xy_slice={mn:.4f} time={elapsed:.2f}s")
    assert passed


def test_criterion_6_entropy(report):
    two_path = 0.0
    bounds_ok = True
    for m in range(1, 10):
        for r in entropy.entropy_sweep(m, 2.0, range(1, 10)).records:
            two_path = max(two_path, abs(r.entropy - r.schmidt))
            bounds_ok &= 0.0 <= r.entropy <= math.log(r.N + 1) + 1e-12
    s1 = entropy.entropy_sweep(1, 2.0, [1]).records[0].entropy
    passed = two_path < 1e-10 and abs(s1 - math.log(2)) < 1e-12 and bounds_ok
    report(6, passed, f"two_path={two_path:.2e} S(N=1)-ln2={s1 - math.log(2):.1e} bounds={bounds_ok}")
    assert passed


def test_criterion_7_entropy_pattern(report):
    outcome = {}
    complete = True
    for m in (1, 3):
        sweep = entropy.entropy_sweep(m, 2.0, range(1, 10))
        complete &= [r.N for r in sweep.records] == list(range(m, 10, 2))
        for r in sweep.records:
            complete &= abs(r.entropy - r.schmidt) < 1e-10 and 0.0 <= r.entropy <= math.log(r.N + 1) + 1e-12
        for row in entropy.odd_even_report(m, 2.0):
            outcome[(m, row["N"])] = tuple(
                None if row[side] is None else row[side]["odd_above"] for side in ("lower", "upper")
            )
    pattern = all(v is not False for pair in outcome.values() for v in pair)
    summary = " ".join(f"m{m}N{N}={pair}" for (m, N), pair in sorted(outcome.items()))
    report(7, complete, f"sweep_complete={complete} odd_above_both_neighbours={pattern} "
                        f"(lower,upper) per odd N: {summary}")
    assert complete


MORPHOLOGY = [(3, 3, 2.0), (5, 3, 2.0), (7, 3, 2.0), (5, 1, 2.0), (5, 5, 2.0),
              (3, 3, 1e-8), (3, 3, 5.0), (3, 3, 1e3)]


def test_criterion_8_morphology(report):
    details = []
    passed = True
    for p, m, eps in MORPHOLOGY:
        c = decompose.coefficients(p, m, eps)
        core = float(np.abs(decompose.reconstruct(c, 0.0, 0.0)) ** 2)
        ok = core < 1e-12
        extrema = None
        if p == m:
            _, prof = fock.azimuthal_profile(c, fock.peak_radius(c))
            extrema = fock.count_extrema(prof)
            ok &= extrema == (2, 2)
        passed &= ok
        details.append(f"({p},{m},{eps:g}):core={core:.1e}" + (f",ring={extrema}" if extrema else ""))
    report(8, passed, " ".join(details))
    assert passed


def test_criterion_9_determinism(tmp_path, report):
    a, b = tmp_path / "run_a", tmp_path / "run_b"
    codes = [cli.main(["selftest", "--out", str(d)]) for d in (a, b)]
    files_a = sorted(p.relative_to(a) for p in a.rglob("*") if p.is_file())
    files_b = sorted(p.relative_to(b) for p in b.rglob("*") if p.is_file())
    same = files_a == files_b and all(filecmp.cmp(a / f, b / f, shallow=False) for f in files_a)
    passed = codes == [0, 0] and same and len(files_a) > 0
    report(9, passed, f"exit_codes={codes} files={len(files_a)} byte_identical={same}")
    assert passed
