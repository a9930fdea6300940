"""Command-line front end.

Subcommands: ``generate`` (scheme JSON), ``matrix`` (dof-on-basis matrix JSON),
``reflect`` (reflection sweep CSV) and ``solve`` (demo Helmholtz solve).

Exit codes: 0 success, 2 invalid configuration, 3 scheme generation failed,
4 solver failure.
"""

from __future__ import annotations

import argparse
import json
import logging
import math
import os
import sys
import tempfile
from pathlib import Path

import numpy as np

from . import classical, demosolver, machine
from .basisgen import basis_from_preset
from .dof import MixedDerivative, dof_from_json, dof_to_json, parse_dof
from .errors import SchemeError, SolverError
from .machine import Scheme
from .reflection import SweepConfig, reflection
from .wavecore import WaveContext

logger = logging.getLogger("trefftz")

EXIT_OK, EXIT_CONFIG, EXIT_SCHEME, EXIT_SOLVER = 0, 2, 3, 4

GENERATE_PRESETS = ("flame5-side", "flame5-corner", "method2-side", "method2-corner",
                    "bt2", "em-n3", "em-n5", "trig-galerkin", "method3")
REFLECT_PRESETS = ("em1", "em2", "em3", "flame5-side", "method2-side")


class ConfigError(ValueError):
    pass


def fmt(v: float) -> str:
    """Shortest round-trip repr; NaN as ``nan`` and no negative zero."""
    v = float(v)
    if math.isnan(v):
        return "nan"
    return repr(v + 0.0)


def cplx(z) -> list[float]:
    z = complex(z)
    return [z.real + 0.0, z.imag + 0.0]


def write_atomic(path: str | os.PathLike, text: str) -> None:
    path = Path(path)
    fd, tmp = tempfile.mkstemp(dir=path.parent or ".", prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


# -- scheme (de)serialization -------------------------------------------------

def scheme_to_json(scheme: Scheme) -> dict:
    return {
        "basis_label": scheme.basis_label,
        "dofs": [dof_to_json(d) for d in scheme.dofs],
        "s": [cplx(c) for c in scheme.s],
        "pivot": scheme.pivot,
        "residual": scheme.residual,
        "null_dim": scheme.null_dim,
        "exact": scheme.exact,
        "context": scheme.ctx.to_dict() if scheme.ctx else None,
    }


def scheme_from_json(data: dict) -> Scheme:
    return Scheme(
        s=[complex(re, im) for re, im in data["s"]],
        dofs=tuple(dof_from_json(d) for d in data["dofs"]),
        residual=data["residual"],
        null_dim=data["null_dim"],
        exact=data["exact"],
        pivot=data.get("pivot"),
        basis_label=data.get("basis_label", ""),
        ctx=WaveContext.from_dict(data["context"]) if data.get("context") else None,
    )


def matrix_to_json(M: machine.TrefftzMatrix) -> dict:
    return {
        "basis_label": M.basis_label,
        "dof_labels": list(M.dof_labels),
        "entries": [[cplx(v) for v in row] for row in M.entries],
    }


def sweep_csv(samples, degrees=None) -> str:
    """CSV for a sweep; ``degrees`` overrides the printed angle column."""
    if degrees is None:
        degrees = [math.degrees(smp.theta) for smp in samples]
    lines = ["theta_deg,re_R,im_R,abs_R"]
    for deg, smp in zip(degrees, samples):
        if smp.defined:
            row = (deg, smp.R.real, smp.R.imag, smp.magnitude)
        else:
            row = (deg, math.nan, math.nan, math.nan)
        lines.append(",".join(fmt(v) for v in row))
    return "\n".join(lines) + "\n"


def sweep_degrees_csv(scheme: Scheme, min_deg: float, max_deg: float, steps: int) -> str:
    """Sweep on a uniform grid in degrees, endpoints included."""
    cfg = SweepConfig(math.radians(min_deg), math.radians(max_deg), steps, scheme.ctx)
    degrees = np.linspace(min_deg, max_deg, steps)
    samples = [reflection(scheme, cfg.ctx, math.radians(d)) for d in degrees]
    return sweep_csv(samples, degrees)


def field_csv(field: demosolver.FieldGrid) -> str:
    lines = ["x,y,re_u,im_u"]
    for i, x in enumerate(field.x):
        for j, y in enumerate(field.y):
            u = field.u[i, j]
            lines.append(f"{fmt(x)},{fmt(y)},{fmt(u.real)},{fmt(u.imag)}")
    return "\n".join(lines) + "\n"


# -- subcommands --------------------------------------------------------------

def _require(args, *names):
    missing = [n for n in names if getattr(args, n) is None]
    if missing:
        raise ConfigError("missing required option(s): " + ", ".join("--" + n.replace("_", "-") for n in missing))


def build_preset_scheme(args) -> Scheme:
    preset = args.preset
    if preset in ("flame5-side", "flame5-corner", "method2-side", "method2-corner"):
        _require(args, "k0", "h")
        if preset == "flame5-side":
            scheme = machine.flame_side_scheme(args.h, args.k0)
        elif preset == "flame5-corner":
            scheme = machine.flame_corner_scheme(args.h, args.k0)
        else:
            side, corner = machine.method2_schemes(args.h, args.k0)
            scheme = side if preset == "method2-side" else corner
    elif preset == "bt2":
        _require(args, "k0")
        scheme = machine.bt2_scheme(args.k0, args.r0)
    elif preset in ("em-n3", "em-n5"):
        scheme = machine.em_matrix_scheme(int(preset[-1]))
    elif preset == "trig-galerkin":
        delta = math.pi / 2 if args.delta is None else args.delta
        scheme = machine.trig_galerkin_scheme(args.n, args.m, delta, args.q)
    elif preset == "method3":
        _require(args, "k0")
        scheme = machine.method3_scheme(args.k0, args.delta, points_per_axis=args.q)
    else:
        raise ConfigError(f"unknown preset {preset!r}")
    if args.pivot is not None:
        scheme = machine.normalize(scheme, args.pivot)
    return scheme


def build_custom(args):
    basis = basis_from_preset(args.basis, args.k0)
    tests = basis_from_preset(args.test_basis, args.k0) if args.test_basis else basis
    dofs = [d for text in args.dof for d in parse_dof(text, list(tests))]
    return basis, dofs


def cmd_generate(args) -> int:
    if (args.preset is None) == (args.basis is None):
        raise ConfigError("give exactly one of --preset or --basis")
    if args.preset:
        scheme = build_preset_scheme(args)
    else:
        if not args.dof:
            raise ConfigError("--basis needs at least one --dof")
        basis, dofs = build_custom(args)
        scheme = machine.generate(basis, dofs, pivot=args.pivot)
    print(f"null_dim={scheme.null_dim} residual={scheme.residual:.3e} exact={scheme.exact}",
          file=sys.stderr)
    for w in scheme.warnings:
        print(f"warning: {w}", file=sys.stderr)
    if not scheme.exact and args.preset != "trig-galerkin":
        print("error: no nullspace within tolerance", file=sys.stderr)
        return EXIT_SCHEME
    write_atomic(args.out, json.dumps(scheme_to_json(scheme), indent=2) + "\n")
    return EXIT_OK


def cmd_matrix(args) -> int:
    if (args.preset is None) == (args.basis is None):
        raise ConfigError("give exactly one of --preset or --basis")
    if args.preset:
        n = int(args.preset[-1])
        orders = machine.EM_N3_DOFS if n == 3 else machine.EM_N5_DOFS
        basis = basis_from_preset(f"theta-deriv:{n}")
        dofs = [MixedDerivative(*o) for o in orders]
    else:
        if not args.dof:
            raise ConfigError("--basis needs at least one --dof")
        basis, dofs = build_custom(args)
    M = machine.assemble(basis, dofs)
    write_atomic(args.out, json.dumps(matrix_to_json(M), indent=2) + "\n")
    return EXIT_OK


def cmd_reflect(args) -> int:
    if (args.preset is None) == (args.scheme is None):
        raise ConfigError("give exactly one of --preset or --scheme")
    if args.steps < 2:
        raise ConfigError("--steps must be at least 2")
    if not 0 <= args.theta_min_deg < args.theta_max_deg < 90:
        raise ConfigError("angles must satisfy 0 <= theta-min < theta-max < 90 degrees")
    if args.scheme:
        with open(args.scheme) as fh:
            scheme = scheme_from_json(json.load(fh))
    elif args.preset.startswith("em"):
        scheme = classical.em_operator(int(args.preset[-1])).to_scheme()
    else:
        kh = math.pi / 10 if args.k0h is None else args.k0h
        if args.preset == "flame5-side":
            scheme = machine.flame_side_scheme(kh, 1.0)
        else:
            scheme = machine.method2_schemes(kh, 1.0)[0]
    if scheme.ctx is None:
        raise ConfigError("scheme file carries no wave context")
    write_atomic(args.out, sweep_degrees_csv(scheme, args.theta_min_deg, args.theta_max_deg, args.steps))
    return EXIT_OK


def cmd_solve(args) -> int:
    try:
        xs, ys = (float(v) for v in args.src.split(","))
    except ValueError:
        raise ConfigError(f"--src must be 'x,y', got {args.src!r}") from None
    cfg = demosolver.SolverConfig(args.L, args.h, args.k0, demosolver.BoundaryKind(args.bc),
                                  (xs, ys), reference_factor=args.reference_factor)
    field = demosolver.solve(cfg)
    reference = demosolver.solve(cfg.enlarged())
    report = demosolver.error_report(field, cfg, reference)
    payload = {"l2_rel": report.l2_rel, "linf_rel": report.linf_rel, "config": cfg.to_dict()}
    write_atomic(args.out, field_csv(field))
    if args.report:
        write_atomic(args.report, json.dumps(payload, indent=2) + "\n")
    print(f"l2_rel={report.l2_rel:.6e} linf_rel={report.linf_rel:.6e}", file=sys.stderr)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="trefftz", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    def custom_opts(p):
        p.add_argument("--basis", help="fan5 | fan3-corner | theta-deriv:<n> | trig:<n> | radial:<L>")
        p.add_argument("--test-basis", help="basis supplying test functions for volint/lineint dofs")
        p.add_argument("--dof", action="append", default=[],
                       help="nodal@(x,y) | mixed:mx,my,mt | radial:order@r0 | volint:delta,q | lineint:delta,q")

    g = sub.add_parser("generate", help="generate a scheme and write it as JSON")
    g.add_argument("--preset", choices=GENERATE_PRESETS)
    custom_opts(g)
    g.add_argument("--k0", type=float)
    g.add_argument("--h", type=float)
    g.add_argument("--r0", type=float, default=1.0, help="radius for bt2 (default 1)")
    g.add_argument("--delta", type=float)
    g.add_argument("--n", type=int, default=12, help="trig-galerkin basis count")
    g.add_argument("--m", type=int, help="trig-galerkin dof count (default n+1)")
    g.add_argument("--q", type=int, default=16, help="Gauss-Legendre points per axis")
    g.add_argument("--pivot", type=int)
    g.add_argument("--out", required=True)
    g.set_defaults(func=cmd_generate)

    m = sub.add_parser("matrix", help="write the dof-on-basis matrix as JSON")
    m.add_argument("--preset", choices=("em-n3", "em-n5"))
    custom_opts(m)
    m.add_argument("--k0", type=float)
    m.add_argument("--out", required=True)
    m.set_defaults(func=cmd_matrix)

    r = sub.add_parser("reflect", help="write a reflection-coefficient sweep as CSV")
    r.add_argument("--scheme")
    r.add_argument("--preset", choices=REFLECT_PRESETS)
    r.add_argument("--k0h", type=float)
    r.add_argument("--theta-min-deg", type=float, default=0.0)
    r.add_argument("--theta-max-deg", type=float, required=True)
    r.add_argument("--steps", type=int, required=True)
    r.add_argument("--out", required=True)
    r.set_defaults(func=cmd_reflect)

    s = sub.add_parser("solve", help="run the demo Helmholtz solve")
    s.add_argument("--k0", type=float, required=True)
    s.add_argument("--L", type=float, required=True)
    s.add_argument("--h", type=float, required=True)
    s.add_argument("--bc", choices=[b.value for b in demosolver.BoundaryKind], required=True)
    s.add_argument("--src", default="0,0")
    s.add_argument("--reference-factor", type=int, default=3)
    s.add_argument("--out", required=True)
    s.add_argument("--report")
    s.set_defaults(func=cmd_solve)
    return parser


def run(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except SolverError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SOLVER
    except SchemeError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SCHEME
    except (ConfigError, ValueError, OSError, json.JSONDecodeError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
