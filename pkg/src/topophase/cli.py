"""Command-line front end.

    topophase phase     --kind AB --geometry circle --source-strength 6.283185307 --reduced-units
    topophase dual      --kind AC --source-strength 1 --probe-strength 1
    topophase boost     --E 0,0,0 --B 0,0,100 --v 1e6,0,0
    topophase quench    --grid 0:200:21
    topophase ramsey    --grid 0:100:11
    topophase selfcheck

Every subcommand also reads an optional JSON file (``--config``); command-line
flags override it.  Exit codes: 0 success, 1 selfcheck failure, 2 configuration
error, 3 domain error (path on a source axis, open path, ...).
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys

import numpy as np

from topophase import ammonia_ramsey as ar
from topophase import hydrogen_quench as hq
from topophase import paths
from topophase.constants import REDUCED, Units, default_constants
from topophase.em_sources import EMField, Probe, SourceConfig, dualize_config
from topophase.errors import NonMonotonicTimeError, TopophaseError
from topophase.lorentz_frames import Potentials, boost_fields, boost_potentials
from topophase.phase_engine import DUAL_KIND, SOURCE_FOR_KIND, PhaseKind, closed_form_phase, integral_phase
from topophase.selfcheck import ToleranceError, resolve_tolerances, run_checks

EXIT_OK, EXIT_SELFCHECK, EXIT_CONFIG, EXIT_DOMAIN = 0, 1, 2, 3
SUBCOMMANDS = ("phase", "dual", "boost", "quench", "ramsey", "selfcheck")


class ConfigError(Exception):
    pass


def fmt(x: float) -> str:
    """Fixed scientific notation, 9 significant digits."""
    return f"{float(x):.8e}"


def parse_grid(text) -> np.ndarray:
    """``start:stop:steps`` (inclusive linspace), a comma list, or a JSON list."""
    try:
        if isinstance(text, (list, tuple)):
            grid = np.array([float(b) for b in text])
        elif ":" in str(text):
            start, stop, steps = str(text).split(":")
            steps = int(steps)
            if steps < 1:
                raise ConfigError("grid needs at least one step")
            grid = np.linspace(float(start), float(stop), steps)
        else:
            grid = np.array([float(b) for b in str(text).split(",")])
    except ValueError:
        raise ConfigError(f"malformed grid {text!r}; expected start:stop:steps or a list") from None
    if grid.size == 0 or not np.all(np.isfinite(grid)):
        raise ConfigError("grid must be non-empty and finite")
    if np.any(grid < 0):
        raise ConfigError("field grid values must be non-negative")
    return grid


def parse_vector(text, name="vector") -> np.ndarray:
    try:
        v = np.array([float(x) for x in (text if isinstance(text, (list, tuple)) else str(text).split(","))])
    except ValueError:
        raise ConfigError(f"malformed {name} {text!r}") from None
    if v.shape != (3,):
        raise ConfigError(f"{name} needs 3 components")
    return v


def parse_pair(text, name) -> tuple[float, float]:
    try:
        v = [float(x) for x in (text if isinstance(text, (list, tuple)) else str(text).split(","))]
    except ValueError:
        raise ConfigError(f"malformed {name} {text!r}") from None
    if len(v) != 2:
        raise ConfigError(f"{name} needs 2 components")
    return v[0], v[1]


# -- configuration ----------------------------------------------------------

_DEFAULTS = {
    "phase": dict(kind="AB", geometry="circle", radius=1.0, axes="2,1", center="0,0", turns=1,
                  clockwise=False, samples=paths.DEFAULT_SEGMENTS, source_strength=1.0,
                  probe_strength=1.0, path_file=None),
    "dual": dict(kind="AC", source_strength=1.0, probe_strength=1.0, times=1),
    "boost": dict(E="0,0,0", B="0,0,0", V=0.0, A="0,0,0", v="0,0,0"),
    "quench": dict(velocity=1e6, length=1.0, grid="0:200:21"),
    "ramsey": dict(dipole=None, velocity=1e5, length=1.0, pulse_error=0.0, readout_phase=0.0, grid="0:100:11"),
    "selfcheck": dict(),
}


def load_config(path) -> dict:
    if path is None:
        return {}
    try:
        with open(path) as fh:
            data = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from None
    if not isinstance(data, dict):
        raise ConfigError("config root must be a JSON object")
    allowed = {"constants", "tolerances", "out", "reduced_units", *SUBCOMMANDS}
    unknown = set(data) - allowed
    if unknown:
        raise ConfigError(f"unknown config keys: {sorted(unknown)}")
    payloads = [k for k in SUBCOMMANDS if k in data]
    if len(payloads) > 1:
        raise ConfigError(f"config holds more than one subcommand payload: {payloads}")
    return data


def merged_params(command: str, config: dict, args: argparse.Namespace) -> dict:
    params = dict(_DEFAULTS[command])
    section = config.get(command, {})
    if not isinstance(section, dict):
        raise ConfigError(f"config section {command!r} must be an object")
    unknown = set(section) - set(params)
    if unknown:
        raise ConfigError(f"unknown {command} parameters: {sorted(unknown)}")
    params.update(section)
    for key in params:
        value = getattr(args, key, None)
        if value is not None:
            params[key] = value
    return params


def resolve_constants(config: dict):
    overrides = config.get("constants", {})
    if not isinstance(overrides, dict):
        raise ConfigError("constants section must be an object")
    try:
        return default_constants().replace(**overrides)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"bad constants override: {exc}") from None


# -- subcommands ------------------------------------------------------------

def _build_path(p: dict):
    if p["path_file"]:
        try:
            return paths.read_csv(p["path_file"])
        except (OSError, ValueError, NonMonotonicTimeError) as exc:
            raise ConfigError(f"malformed path file: {exc}") from None
    cx, cy = parse_pair(p["center"], "center")
    n, turns = int(p["samples"]), int(p["turns"])
    common = dict(center=(cx, cy), n=n, turns=turns, clockwise=bool(p["clockwise"]))
    if p["geometry"] == "circle":
        return paths.circle(float(p["radius"]), **common)
    if p["geometry"] == "ellipse":
        a, b = parse_pair(p["axes"], "axes")
        return paths.ellipse(a, b, **common)
    if p["geometry"] == "square":
        return paths.square(float(p["radius"]), **common)
    raise ConfigError(f"unknown geometry {p['geometry']!r}")


def _kind(value) -> PhaseKind:
    try:
        return PhaseKind(str(value).upper())
    except ValueError:
        raise ConfigError(f"unknown phase kind {value!r}") from None


def cmd_phase(p: dict, units: Units, out) -> None:
    kind = _kind(p["kind"])
    path = _build_path(p)
    q, s = float(p["probe_strength"]), float(p["source_strength"])
    res = integral_phase(kind, path, q, s, units)
    cf = closed_form_phase(kind, q, s, res.winding, units)
    dev = abs(res.value - cf) / abs(cf) if cf != 0 else abs(res.value)
    w = csv.writer(out, lineterminator="\n")
    w.writerow(["kind", "winding", "numerical_phase", "closed_form_phase", "relative_deviation"])
    w.writerow([kind.value, res.winding, fmt(res.value), fmt(cf), fmt(dev)])


def _describe(src: SourceConfig, probe: Probe) -> list:
    return [src.kind.value, fmt(src.strength), fmt(probe.e), fmt(probe.g),
            *(fmt(x) for x in probe.d), *(fmt(x) for x in probe.m)]


def _config_for_kind(kind: PhaseKind, q: float, s: float):
    src = SourceConfig(SOURCE_FOR_KIND[kind], s)
    axis = src.axis
    probe = {
        PhaseKind.AB: Probe(e=q),
        PhaseKind.DAB: Probe(g=q),
        PhaseKind.AC: Probe(m=q * axis),
        PhaseKind.HMW: Probe(d=q * axis),
    }[kind]
    return src, probe


def cmd_dual(p: dict, units: Units, out) -> None:
    kind = _kind(p["kind"])
    times = int(p["times"])
    if times < 0:
        raise ConfigError("times must be non-negative")
    src, probe = _config_for_kind(kind, float(p["probe_strength"]), float(p["source_strength"]))
    w = csv.writer(out, lineterminator="\n")
    w.writerow(["stage", "phase_kind", "source_kind", "source_strength", "probe_e", "probe_g",
                "probe_dx", "probe_dy", "probe_dz", "probe_mx", "probe_my", "probe_mz"])
    w.writerow(["before", kind.value, *_describe(src, probe)])
    new_kind = kind
    for _ in range(times):
        src, probe = dualize_config(src, probe)
        new_kind = DUAL_KIND[new_kind]
    w.writerow(["after", new_kind.value, *_describe(src, probe)])
    if new_kind is kind:
        out.write(f"# phase relation: phi_{kind.value} unchanged\n")
    else:
        out.write(f"# phase relation: phi_{new_kind.value} = -phi_{kind.value}\n")


def cmd_boost(p: dict, units: Units, out) -> None:
    v = parse_vector(p["v"], "velocity")
    f = EMField(parse_vector(p["E"], "E"), parse_vector(p["B"], "B"))
    pot = Potentials(V=float(p["V"]), A=parse_vector(p["A"], "A"))
    f2 = boost_fields(f, v, units.c)
    pot2 = boost_potentials(pot, v, units.c)
    w = csv.writer(out, lineterminator="\n")
    w.writerow(["quantity", "x", "y", "z"])
    w.writerow(["E_prime", *(fmt(x) for x in f2.E)])
    w.writerow(["B_prime", *(fmt(x) for x in f2.B)])
    w.writerow(["A_prime", *(fmt(x) for x in pot2.A)])
    w.writerow(["V_prime", fmt(pot2.V), "", ""])


def cmd_quench(p: dict, constants, out) -> None:
    grid = parse_grid(p["grid"])
    v, L = float(p["velocity"]), float(p["length"])
    if v <= 0 or L <= 0:
        raise ConfigError("velocity and length must be positive")
    rows = hq.scan_transmission(grid, v, L, constants)
    w = csv.writer(out, lineterminator="\n")
    w.writerow(hq.QUENCH_COLUMNS)
    for r in rows:
        w.writerow([fmt(r.B_gauss), fmt(r.phi_hmw_rad), fmt(r.gamma_per_s), fmt(r.transmission), int(r.valid)])


def cmd_ramsey(p: dict, constants, out) -> None:
    grid = parse_grid(p["grid"])
    d_a = constants.d_ammonia if p["dipole"] is None else float(p["dipole"])
    L, v = float(p["length"]), float(p["velocity"])
    if d_a <= 0 or L <= 0 or v <= 0:
        raise ConfigError("dipole, length and velocity must be positive")
    rows = ar.scan_fringes(grid, d_a, L, v, float(p["pulse_error"]), float(p["readout_phase"]), constants)
    w = csv.writer(out, lineterminator="\n")
    w.writerow(ar.FRINGE_COLUMNS)
    for r in rows:
        w.writerow([fmt(r.B_gauss), fmt(r.phi_rad), fmt(r.population)])


def cmd_selfcheck(constants, tolerances, out) -> int:
    results = run_checks(constants, tolerances)
    for c in results:
        out.write(c.line() + "\n")
    failed = sum(not c.passed for c in results)
    out.write(f"{len(results) - failed}/{len(results)} checks passed\n")
    return EXIT_SELFCHECK if failed else EXIT_OK


# -- argument parsing -------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="topophase", description=__doc__.split("\n\n")[0])
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", metavar="PATH", help="JSON configuration file")
    common.add_argument("--out", metavar="PATH", help="write output here instead of stdout")
    common.add_argument("--reduced-units", action="store_true", default=None, help="hbar = c = 1 (phase, dual, boost)")
    common.add_argument("--grid", metavar="START:STOP:STEPS", help="magnetic-field grid in gauss (quench, ramsey)")
    common.add_argument("--path-file", metavar="PATH", help="CSV path with t,x,y,z rows (phase)")
    sub = parser.add_subparsers(dest="command", required=True)

    ph = sub.add_parser("phase", parents=[common], help="loop-integral vs closed-form topological phase")
    ph.add_argument("--kind", choices=[k.value for k in PhaseKind])
    ph.add_argument("--geometry", choices=["circle", "ellipse", "square"])
    ph.add_argument("--radius", type=float, help="circle radius or square half-side")
    ph.add_argument("--axes", help="ellipse semi-axes a,b")
    ph.add_argument("--center", help="loop centre x,y")
    ph.add_argument("--turns", type=int)
    ph.add_argument("--clockwise", action="store_true", default=None)
    ph.add_argument("--samples", type=int, help="segments per turn")
    ph.add_argument("--source-strength", type=float, help="Phi_M, Phi_E, lambda_E or lambda_M")
    ph.add_argument("--probe-strength", type=float, help="e, g, |m| or |d|")

    du = sub.add_parser("dual", parents=[common], help="apply the duality map to a source/probe set-up")
    du.add_argument("--kind", choices=[k.value for k in PhaseKind])
    du.add_argument("--source-strength", type=float)
    du.add_argument("--probe-strength", type=float)
    du.add_argument("--times", type=int, help="how many times to apply the map")

    bo = sub.add_parser("boost", parents=[common], help="first-order field and potential boost")
    bo.add_argument("--E", help="Ex,Ey,Ez (statvolt/cm)")
    bo.add_argument("--B", help="Bx,By,Bz (G)")
    bo.add_argument("--V", type=float, help="scalar potential (statvolt)")
    bo.add_argument("--A", help="Ax,Ay,Az (G cm)")
    bo.add_argument("--v", help="vx,vy,vz (cm/s)")

    qu = sub.add_parser("quench", parents=[common], help="hydrogen 2s transmission scan")
    qu.add_argument("--velocity", type=float, help="beam speed (cm/s)")
    qu.add_argument("--length", type=float, help="field-region length (cm)")

    ra = sub.add_parser("ramsey", parents=[common], help="ammonia Ramsey fringe scan")
    ra.add_argument("--dipole", type=float, help="ammonia dipole moment (esu cm)")
    ra.add_argument("--velocity", type=float, help="beam speed (cm/s)")
    ra.add_argument("--length", type=float, help="field-region length (cm)")
    ra.add_argument("--pulse-error", type=float, help="fractional pi/2 pulse-area error")
    ra.add_argument("--readout-phase", type=float, help="extra readout phase (rad)")

    sc = sub.add_parser("selfcheck", parents=[common], help="reproduce every headline number")
    sc.add_argument("--tolerance", action="append", default=[], metavar="NAME=VALUE",
                    help="override one check tolerance (repeatable)")
    return parser


def run(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    cmd = args.command
    try:
        config = load_config(args.config)
        constants = resolve_constants(config)
        reduced = args.reduced_units if args.reduced_units is not None else bool(config.get("reduced_units", False))
        if reduced and cmd not in ("phase", "dual", "boost"):
            raise ConfigError(f"--reduced-units does not apply to {cmd}")
        if args.grid is not None and cmd not in ("quench", "ramsey"):
            raise ConfigError(f"--grid does not apply to {cmd}")
        if args.path_file is not None and cmd != "phase":
            raise ConfigError(f"--path-file does not apply to {cmd}")
        units = REDUCED if reduced else Units.from_constants(constants)
        out_path = args.out or config.get("out")
        buf = io.StringIO()
        status = EXIT_OK
        if cmd == "selfcheck":
            tolerances = dict(config.get("tolerances", {}))
            for item in args.tolerance:
                name, sep, value = item.partition("=")
                if not sep:
                    raise ConfigError(f"--tolerance expects NAME=VALUE, got {item!r}")
                tolerances[name] = value
            resolve_tolerances(tolerances)
            status = cmd_selfcheck(constants, tolerances, buf)
        else:
            params = merged_params(cmd, config, args)
            if cmd == "phase":
                cmd_phase(params, units, buf)
            elif cmd == "dual":
                cmd_dual(params, units, buf)
            elif cmd == "boost":
                cmd_boost(params, units, buf)
            elif cmd == "quench":
                cmd_quench(params, constants, buf)
            else:
                cmd_ramsey(params, constants, buf)
    except (ConfigError, ToleranceError) as exc:
        print(f"topophase: configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except TopophaseError as exc:
        print(f"topophase: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except ValueError as exc:
        print(f"topophase: configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG

    text = buf.getvalue()
    if out_path:
        with open(out_path, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return status


def main(argv=None) -> None:
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
