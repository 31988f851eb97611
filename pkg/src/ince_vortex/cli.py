"""Batch command-line driver.

Every subcommand writes fixed filenames under ``--out`` and a JSON manifest
(package version, producing modules, full resolved configuration). Exit codes:
0 success, 2 invalid input, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import logging
import math
import sys
import warnings
from pathlib import Path

import numpy as np

from . import __version__, artifacts, decompose, entropy, fock, ince_poly, modes, wigner
from .errors import InceVortexError, NumericalError, ValidationError

log = logging.getLogger("ince_vortex")

EPS_ZERO = 1e-8
EPS_INFINITE = 1e3

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_NUMERICAL = 3

# flags that describe where things go rather than what is computed
_NOT_RECORDED = {"out", "config", "command", "func"}


# ----------------------------------------------------------------------------
# argument helpers


def parse_n_list(text: str) -> list[int]:
    """``"1..9"``, ``"1,3,5"`` or ``"7"`` → list of ints."""
    text = str(text).strip()
    try:
        if ".." in text:
            lo, hi = text.split("..", 1)
            return list(range(int(lo), int(hi) + 1))
        return [int(t) for t in text.split(",") if t.strip()]
    except ValueError as exc:
        raise ValidationError(f"cannot parse photon-number list {text!r}") from exc


def parse_frozen(text: str) -> dict[str, float]:
    """``"y=0,px=0.5"`` → ``{"y": 0.0, "px": 0.5}``."""
    out = {}
    for item in filter(None, (t.strip() for t in str(text).split(","))):
        key, _, value = item.partition("=")
        key = key.strip()
        if key not in wigner.AXES or not _:
            raise ValidationError(f"bad frozen coordinate {item!r}; use e.g. y=0,px=0")
        out[key] = float(value)
    return out


def parse_axes(text: str) -> tuple[str, str]:
    axes = tuple(a.strip() for a in str(text).split(","))
    if axes not in wigner.AXIS_PAIRS:
        raise ValidationError(f"axes must be one of {[','.join(a) for a in wigner.AXIS_PAIRS]}, got {text!r}")
    return axes


def resolve_epsilon(eps) -> tuple[float, str | None]:
    """Map the ``ε = 0`` and ``ε = ∞`` limits onto finite stand-ins."""
    if eps is None:
        raise ValidationError("--eps is required")
    eps = float(eps)
    if math.isnan(eps) or eps < 0:
        raise ValidationError(f"epsilon must be >= 0, got {eps}")
    if eps == 0:
        return EPS_ZERO, f"epsilon=0 replaced by {EPS_ZERO:g}"
    if math.isinf(eps):
        return EPS_INFINITE, f"epsilon=inf replaced by {EPS_INFINITE:g}"
    return eps, None


def read_config(path: str) -> dict[str, str]:
    """Flat ``key = value`` file; ``#`` starts a comment; dashes in keys become underscores."""
    try:
        lines = Path(path).read_text().splitlines()
    except OSError as exc:
        raise ValidationError(f"cannot read config {path!r}: {exc}") from exc
    out = {}
    for n, line in enumerate(lines, 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        if not sep:
            raise ValidationError(f"{path}:{n}: expected key = value")
        out[key.strip().lstrip("-").replace("-", "_")] = value.strip()
    return out


def apply_config(parser: argparse.ArgumentParser, args: argparse.Namespace, values: dict[str, str]):
    """Override parsed flags with config-file values, converted like the flag would be."""
    actions = {a.dest: a for a in parser._actions}
    for key, raw in values.items():
        if key in _NOT_RECORDED or key not in actions:
            raise ValidationError(f"unknown config key {key!r} for '{args.command}'")
        action = actions[key]
        if isinstance(action, argparse._StoreTrueAction):
            value = raw.lower() in ("1", "true", "yes", "on")
        elif action.type is not None:
            try:
                value = action.type(raw)
            except (TypeError, ValueError) as exc:
                raise ValidationError(f"config key {key!r}: bad value {raw!r}") from exc
        else:
            value = raw
        if action.choices is not None and value not in action.choices:
            raise ValidationError(f"config key {key!r} must be one of {list(action.choices)}")
        setattr(args, key, value)


def _require(args, *names):
    missing = [n for n in names if getattr(args, n, None) is None]
    if missing:
        raise ValidationError("missing required parameter(s): " + ", ".join("--" + n for n in missing))


def manifest(args, modules, extra=None) -> dict:
    config = {k: v for k, v in sorted(vars(args).items()) if k not in _NOT_RECORDED}
    out = {
        "producer": {
            "package": "ince_vortex",
            "version": __version__,
            "modules": {f"ince_vortex.{m}": __version__ for m in modules},
        },
        "command": args.command,
        "config": config,
    }
    if extra:
        out.update(extra)
    return out


def _out_dir(args) -> Path:
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    return out


def _index(args):
    _require(args, "p", "m", "eps")
    eps, note = resolve_epsilon(args.eps)
    if note:
        log.warning(note)
    if args.m < 1:
        raise ValidationError(f"vortex states need m >= 1, got m={args.m}")
    ince_poly.validate_index(args.p, args.m, ince_poly.ODD, eps)
    return args.p, args.m, eps, note


def _substitutions(note):
    return {"substitutions": [note] if note else []}


# ----------------------------------------------------------------------------
# commands


def cmd_intensity(args) -> list[Path]:
    p, m, eps, note = _index(args)
    out = _out_dir(args)
    if args.field == "state":
        coeffs = decompose.coefficients(p, m, eps, args.convention)
        fld = fock.intensity_field(coeffs, args.extent, args.n)
        origin = complex(decompose.reconstruct(coeffs, np.array(0.0), np.array(0.0)))
        radius = fock.peak_radius(coeffs, r_max=args.extent)
        maxima, minima = fock.count_extrema(fock.azimuthal_profile(coeffs, radius)[1])
        ring = {"radius": radius, "maxima": maxima, "minima": minima}
    else:
        fld = modes.sample_field(lambda x, y: modes.hig_mode(p, m, eps, x, y), args.extent, args.n,
                                 {"p": p, "m": m, "epsilon": eps})
        origin = complex(modes.hig_mode(p, m, eps, np.array(0.0), np.array(0.0)))
        ring = None
    X, Y = np.meshgrid(fld.x, fld.y)
    csv = artifacts.write_csv(out / "intensity.csv", {"x": X, "y": Y, "intensity": fld.intensity})
    pgm = artifacts.write_pgm(out / "intensity.pgm", fld.intensity)
    side = manifest(args, ["modes", "decompose", "fock"], {
        **_substitutions(note),
        "files": [csv.name, pgm.name],
        "geometry": fld.geometry,
        "captured_mass": fld.provenance["captured_mass"],
        "origin_intensity": abs(origin) ** 2,
        "max_intensity": float(fld.intensity.max()),
        "ring": ring,
    })
    return [csv, pgm, artifacts.write_json(out / "intensity.json", side)]


def cmd_decompose(args) -> list[Path]:
    p, m, eps, note = _index(args)
    coeffs = decompose.coefficients(p, m, eps, args.convention)
    doc = manifest(args, ["ince_poly", "modes", "decompose"], _substitutions(note))
    doc["coefficients"] = coeffs.to_dict()
    return [artifacts.write_json(_out_dir(args) / "coefficients.json", doc)]


def cmd_state(args) -> list[Path]:
    p, m, eps, note = _index(args)
    coeffs = decompose.coefficients(p, m, eps, args.convention)
    initial = fock.initial_state(coeffs)
    evolved = fock.evolve(initial, args.phi)
    doc = manifest(args, ["decompose", "fock"], _substitutions(note))
    doc["coefficients"] = coeffs.to_dict()
    doc["initial"] = initial.to_dict()
    doc["evolved"] = evolved.to_dict()
    if math.isclose(args.phi, fock.CONVERTER_ANGLE):
        diff = fock.closed_form_discrepancy(coeffs)
        doc["closed_form"] = fock.closed_form_state(coeffs).to_dict()
        doc["closed_form_max_discrepancy"] = float(np.max(np.abs(diff)))
        doc["closed_form_signed_discrepancy"] = [[float(d.real), float(d.imag)] for d in diff]
    return [artifacts.write_json(_out_dir(args) / "state.json", doc)]


def _write_slice(out: Path, sl: wigner.WignerSlice, base: dict) -> list[Path]:
    U, V = np.meshgrid(sl.u, sl.v, indexing="ij")
    csv = artifacts.write_csv(out / f"{sl.name}.csv", {"u": U, "v": V, "w": sl.values})
    side = dict(base)
    side["slice"] = sl.sidecar()
    side["files"] = [csv.name]
    return [csv, artifacts.write_json(out / f"{sl.name}.json", side)]


def cmd_wigner(args) -> list[Path]:
    p, m, eps, note = _index(args)
    coeffs = decompose.coefficients(p, m, eps, args.convention)
    state = fock.evolve(fock.initial_state(coeffs)) if args.formula == "exact" else None
    pairs = wigner.AXIS_PAIRS if args.all_slices else [parse_axes(args.axes)]
    frozen = parse_frozen(args.frozen)
    grid = np.linspace(-args.range, args.range, args.n)
    base = manifest(args, ["decompose", "fock", "wigner"], _substitutions(note))
    out = _out_dir(args)
    files = []
    for axes in pairs:
        sl = wigner.wigner_slice(args.formula, coeffs, axes, grid, grid, frozen, state=state)
        files += _write_slice(out, sl, base)
    return files


def cmd_entropy(args) -> list[Path]:
    _require(args, "m", "eps")
    eps, note = resolve_epsilon(args.eps)
    if note:
        log.warning(note)
    n_list = parse_n_list(args.N)
    if not n_list or min(n_list) < 1:
        raise ValidationError("photon numbers must be >= 1")
    sweep = entropy.entropy_sweep(args.m, eps, n_list, args.base, args.convention)
    if not sweep.records:
        raise ValidationError(f"no admissible N in {args.N} for m={args.m}")
    out = _out_dir(args)
    csv = artifacts.write_rows(
        out / "entropy.csv", ["N", "m", "epsilon", "entropy", "base"],
        [[r.N, r.m, r.epsilon, r.entropy, r.base] for r in sweep.records],
    )
    report = entropy.odd_even_report(args.m, eps, max(n_list), args.base, args.convention)
    side = manifest(args, ["decompose", "fock", "entropy"], {
        **_substitutions(note),
        "files": [csv.name],
        "records": [
            {"N": r.N, "m": r.m, "epsilon": r.epsilon, "entropy": r.entropy,
             "schmidt_entropy": r.schmidt, "base": r.base}
            for r in sweep.records
        ],
        "odd_even": report,
    })
    return [csv, artifacts.write_json(out / "entropy.json", side)]


def cmd_selftest(args) -> list[Path]:
    from . import selftest

    return selftest.run(args, Path(args.out))


# ----------------------------------------------------------------------------
# parser


def _eps(text):
    return float(text)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ince-vortex",
        description="Ince-Gaussian vortex states: decomposition, Fock states, Wigner slices, entropy.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", default="out", help="output directory (default: out)")
    common.add_argument("--config", help="flat key = value file; its values override flags")
    common.add_argument("--convention", choices=decompose.CONVENTIONS, default="bilinear",
                        help="LG projection convention (default: bilinear)")

    index = argparse.ArgumentParser(add_help=False)
    index.add_argument("--p", type=int, help="order")
    index.add_argument("--m", type=int, help="degree (>= 1, same parity as p)")
    index.add_argument("--eps", type=_eps, help="ellipticity; 0 and inf are mapped to finite limits")

    p = sub.add_parser("intensity", parents=[common, index], help="intensity grid, PGM heatmap")
    p.add_argument("--extent", type=float, default=6.0, help="half width of the square grid")
    p.add_argument("--n", type=int, default=256, help="points per axis")
    p.add_argument("--field", choices=("state", "hig"), default="state",
                   help="LG superposition of the vortex state, or the bare helical IG mode")
    p.set_defaults(func=cmd_intensity)

    p = sub.add_parser("decompose", parents=[common, index], help="LG expansion coefficients")
    p.set_defaults(func=cmd_decompose)

    p = sub.add_parser("state", parents=[common, index], help="two-mode Fock state after the converter")
    p.add_argument("--phi", type=float, default=fock.CONVERTER_ANGLE, help="converter angle (default π/4)")
    p.set_defaults(func=cmd_state)

    p = sub.add_parser("wigner", parents=[common, index], help="Wigner function slices")
    p.add_argument("--formula", choices=wigner.FORMULAS, default="diagonal",
                   help="diagonal LG mixture, or exact transform with cross terms (default: diagonal)")
    p.add_argument("--axes", default="x,py", help="slice axis pair, e.g. x,py")
    p.add_argument("--all-slices", action="store_true", help="write all six axis pairs")
    p.add_argument("--frozen", default="", help="values of the other two coordinates, e.g. y=0,px=0")
    p.add_argument("--range", type=float, default=4.0, help="half width of the slice grid")
    p.add_argument("--n", type=int, default=81, help="points per axis")
    p.set_defaults(func=cmd_wigner)

    p = sub.add_parser("entropy", parents=[common], help="entanglement entropy sweep over N")
    p.add_argument("--m", type=int, help="degree")
    p.add_argument("--eps", type=_eps, help="ellipticity")
    p.add_argument("--N", default="1..9", help="photon numbers: 1..9 or 1,3,5")
    p.add_argument("--base", choices=tuple(entropy.BASES), default="natural")
    p.set_defaults(func=cmd_entropy)

    p = sub.add_parser("selftest", parents=[common], help="run the built-in checks and write a report")
    p.add_argument("--seed", type=int, default=0, help="seed for random coefficient vectors")
    p.set_defaults(func=cmd_selftest)
    return parser


def _subparser(parser, command):
    for action in parser._actions:
        if isinstance(action, argparse._SubParsersAction):
            return action.choices[command]
    raise KeyError(command)


def main(argv=None) -> int:
    logging.basicConfig(level=logging.INFO, format="%(levelname)s: %(message)s", stream=sys.stderr)
    logging.captureWarnings(True)
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.config:
            apply_config(_subparser(parser, args.command), args, read_config(args.config))
        if getattr(args, "n", 2) < 2:
            raise ValidationError("--n must be >= 2")
        with warnings.catch_warnings():
            warnings.simplefilter("default")
            files = args.func(args)
    except ValidationError as exc:
        log.error("%s", exc)
        return EXIT_VALIDATION
    except (NumericalError, InceVortexError, ArithmeticError, np.linalg.LinAlgError) as exc:
        log.error("numerical failure: %s", exc)
        return EXIT_NUMERICAL
    for f in files:
        log.info("wrote %s", f)
    if args.command == "selftest" and not getattr(args, "passed", True):
        log.error("selftest: some checks failed (see report.json)")
        return EXIT_NUMERICAL
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
