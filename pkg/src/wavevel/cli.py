"""Command-line driver: generate fields, extract velocities, run checks.

A thin shell over the library; every subcommand is reproducible with direct
calls.  Exit codes: 0 success, 1 failed check, 2 usage or input errors.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np

from .covariance import (
    AffineMap,
    check_contraction_invariance,
    check_first_order_covariance,
    check_zero_order_covariance,
)
from .fieldio import export_csv, read_field, read_header, write_field
from .fields import SampledField, make_field, make_grid, sample
from .findiff import StencilSpec, fd_jet_field
from .tracking import TrackingError, track_attribute
from .velocities import (
    AttributeSpec,
    contraction_scalar_field,
    velocity_field,
)


def _floats(text: str) -> list:
    return [float(tok) for tok in text.split(",") if tok != ""]


def _ints(text: str) -> list:
    return [int(tok) for tok in text.split(",") if tok != ""]


def _parse_param(key: str, value: str):
    if key == "terms":
        # polynomial terms: "coeff:e1,e2:et;coeff:e1,e2:et;..."
        terms = []
        for chunk in value.split(";"):
            coeff, exps, et = chunk.split(":")
            terms.append((float(coeff), tuple(_ints(exps)), int(et)))
        return tuple(terms)
    vals = _floats(value)
    return vals[0] if len(vals) == 1 else tuple(vals)


def _field_from_args(args):
    params = {}
    for item in args.param or []:
        if "=" not in item:
            raise ValueError(f"--param expects KEY=VALUE, got {item!r}")
        key, _, value = item.partition("=")
        key = key.strip().replace("-", "_")
        params[key] = _parse_param(key, value.strip())
    return make_field(args.kind, **params)


def _stencil_from_args(args) -> StencilSpec:
    return StencilSpec(order=args.fd_order, boundary=args.boundary)


def _broadcast(values, dim: int, name: str) -> list:
    if len(values) == 1:
        return values * dim
    if len(values) != dim:
        raise ValueError(f"{name} needs 1 or {dim} values, got {len(values)}")
    return values


def _cmd_generate(args) -> int:
    shape = _ints(args.shape)
    dim = len(shape)
    spacing = _broadcast(_floats(args.spacing), dim, "--spacing")
    origin = _broadcast(_floats(args.origin), dim, "--origin")
    grid = make_grid(dim, shape, spacing, origin)
    field = _field_from_args(args)
    times = args.t0 + args.dt * np.arange(args.frames)
    sampled = sample(field, grid, times)
    write_field(sampled, args.out)
    print(
        f"wrote {args.out}: kind={args.kind} dim={dim} shape={tuple(shape)} "
        f"frames={args.frames} dt={args.dt}"
    )
    return 0


def _cmd_info(args) -> int:
    header = read_header(args.file)
    print(f"file:    {args.file}")
    print(f"dim:     {header.dim}")
    print(f"shape:   {header.shape}")
    print(f"frames:  {header.frames}")
    print(f"spacing: {header.spacing}")
    print(f"origin:  {header.origin}")
    print(f"t0:      {header.t0}")
    print(f"dt:      {header.dt}")
    return 0


def _default_frame(field, args) -> int:
    return field.frames // 2 if args.frame is None else args.frame


def _cmd_velocity(args) -> int:
    field = read_field(args.file)
    frame = _default_frame(field, args)
    jets = fd_jet_field(field, frame, _stencil_from_args(args))
    vf = velocity_field(jets, args.order, eps_singular=args.eps_singular)
    n_valid = int(np.count_nonzero(vf.valid))
    print(
        f"order-{args.order} velocities at frame {frame}: "
        f"{n_valid}/{vf.valid.size} valid points"
    )
    if n_valid == 0:
        print("warning: validity mask is entirely false", file=sys.stderr)
    columns = {}
    n = field.grid.dim
    if args.order == 0:
        for a in range(n):
            columns[f"v0_{a + 1}"] = vf.components[..., a]
        for a in range(n):
            columns[f"w_{a + 1}"] = vf.reciprocal[..., a]
    else:
        for a in range(n):
            columns[f"v1_{a + 1}"] = vf.components[..., a]
        columns["cond"] = vf.hessian_condition
    columns["valid"] = vf.valid
    if args.csv:
        export_csv(args.csv, field.grid, columns)
        print(f"wrote {args.csv}")
    if args.field_out:
        # the binary format carries finite scalars only: invalid points and
        # infinities (pole axes, conditioning) are zeroed in the component
        # files; the *_valid file flags which points carry meaning
        t = field.time(frame)
        for name, arr in columns.items():
            arr = np.asarray(arr, dtype=float)
            data = np.where(vf.valid & np.isfinite(arr), arr, 0.0)[None]
            out = f"{args.field_out}_{name}.wvf"
            write_field(SampledField(field.grid, t, 0.0, data), out)
            print(f"wrote {out}")
    return 0


def _cmd_scalar(args) -> int:
    field = read_field(args.file)
    frame = _default_frame(field, args)
    jets = fd_jet_field(field, frame, _stencil_from_args(args))
    v0 = velocity_field(jets, 0)
    v1 = velocity_field(jets, 1, eps_singular=args.eps_singular)
    vals, valid = contraction_scalar_field(v0, v1)
    n_valid = int(np.count_nonzero(valid))
    print(f"contraction scalar at frame {frame}: {n_valid}/{valid.size} valid points")
    if n_valid:
        # median, not mean: points near the stationary locus (psi_t ~ 0)
        # are valid but noise-dominated on measured data
        print(f"median over valid points: {np.median(vals[valid]):.6g}")
    if args.csv:
        export_csv(args.csv, field.grid, {"scalar": vals, "valid": valid})
        print(f"wrote {args.csv}")
    return 0


def _cmd_track(args) -> int:
    field = read_field(args.file)
    if args.attribute == "gradient-set":
        targets = _floats(args.targets) if args.targets else [0.0] * field.grid.dim
        attr = AttributeSpec.gradient_set(targets)
    else:
        if args.level is None:
            raise ValueError("--attribute level-set needs --level")
        attr = AttributeSpec.level_set(args.level)
    seed = _ints(args.seed)
    result = track_attribute(field, attr, seed, spec=_stencil_from_args(args))
    print(f"tracked {args.attribute} attribute over {result.times.size} frames")
    for m, t in enumerate(result.times):
        pos = ", ".join(f"{p:.8g}" for p in result.positions[m])
        emp = ", ".join(f"{v:.6g}" for v in result.empirical_velocity[m])
        print(f"  t={t:.6g}  position=({pos})  empirical=({emp})")
    print(f"deviation (empirical vs computed): {result.deviation:.6e}")
    if args.csv:
        _write_track_csv(args.csv, result)
        print(f"wrote {args.csv}")
    if args.tol is not None and result.deviation > args.tol:
        print(f"FAIL: deviation {result.deviation:.3e} > tolerance {args.tol:.3e}",
              file=sys.stderr)
        return 1
    return 0


def _write_track_csv(path, result) -> None:
    n = result.positions.shape[1]
    names = (
        ["t"]
        + [f"pos_{a + 1}" for a in range(n)]
        + [f"emp_{a + 1}" for a in range(n)]
        + [f"comp_{a + 1}" for a in range(n)]
    )
    with open(path, "w", encoding="ascii", newline="\n") as fh:
        fh.write(",".join(names) + "\n")
        for m in range(result.times.size):
            row = [result.times[m], *result.positions[m],
                   *result.empirical_velocity[m], *result.computed_velocity[m]]
            fh.write(",".join(format(float(v), ".17g") for v in row) + "\n")


def _cmd_covcheck(args) -> int:
    field = _field_from_args(args)
    n = field.dim
    entries = _floats(args.matrix)
    if len(entries) != n * n:
        raise ValueError(f"--matrix needs {n * n} entries for a {n}-d field")
    offset = _broadcast(_floats(args.offset), n, "--offset") if args.offset else [0.0] * n
    amap = AffineMap(np.asarray(entries).reshape(n, n), offset)
    box = _floats(args.box)
    if len(box) != 2 or box[0] >= box[1]:
        raise ValueError(f"--box expects LO,HI with LO < HI, got {args.box!r}")
    lo, hi = box
    rng = np.random.default_rng(args.rng_seed)
    points = rng.uniform(lo, hi, size=(args.samples, n))
    checks = [
        ("covector (order 0)", check_zero_order_covariance),
        ("vector (order 1)", check_first_order_covariance),
        ("contraction scalar", check_contraction_invariance),
    ]
    worst = 0.0
    for label, fn in checks:
        report = fn(field, amap, points, args.t)
        worst = max(worst, report.max_deviation)
        print(
            f"{label}: max deviation {report.max_deviation:.3e} "
            f"({report.checked} checked, {report.skipped} skipped)"
        )
    if worst > args.tol:
        print(f"FAIL: worst deviation {worst:.3e} > tolerance {args.tol:.3e}",
              file=sys.stderr)
        return 1
    print(f"OK: all deviations within {args.tol:.1e}")
    return 0


def _add_param_options(p) -> None:
    p.add_argument("--kind", required=True, help="analytic field kind")
    p.add_argument(
        "--param",
        action="append",
        metavar="KEY=VALUE",
        help="field parameter; commas make vectors (repeatable)",
    )


def _add_stencil_options(p) -> None:
    p.add_argument("--fd-order", type=int, default=4, choices=(2, 4))
    p.add_argument(
        "--boundary",
        default="shrink-to-valid",
        choices=("one-sided", "shrink-to-valid"),
    )


def _add_singularity_option(p) -> None:
    p.add_argument(
        "--eps-singular",
        type=float,
        default=1e-10,
        help="Hessian singularity threshold relative to ||H||_F^N; raise to "
        "the jet error scale (e.g. 1e-5) for finite-difference data",
    )


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="wavevel",
        description="Local wave velocities of scalar fields: generation, "
        "extraction, transformation checks, tracking.",
        epilog="Vector values are comma separated; when one starts with a "
        "minus sign, use the equals form, e.g. --origin=-1.5,-1.5",
    )
    parser.add_argument("--config", help="key=value file with default options")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("generate", help="sample an analytic field into a field file")
    _add_param_options(p)
    p.add_argument("--shape", required=True, help="points per axis, e.g. 64,64")
    p.add_argument("--spacing", required=True, help="grid step per axis (or one for all)")
    p.add_argument("--origin", required=True, help="grid origin per axis (or one for all)")
    p.add_argument("--frames", type=int, default=5)
    p.add_argument("--t0", type=float, default=0.0)
    p.add_argument("--dt", type=float, default=0.01)
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_generate)

    p = sub.add_parser("info", help="dump a field file header")
    p.add_argument("file")
    p.set_defaults(func=_cmd_info)

    p = sub.add_parser("velocity", help="extract a velocity field to CSV")
    p.add_argument("file")
    p.add_argument("--order", type=int, required=True, choices=(0, 1))
    p.add_argument("--frame", type=int, default=None, help="default: middle frame")
    _add_stencil_options(p)
    _add_singularity_option(p)
    p.add_argument("--csv", help="output CSV path")
    p.add_argument("--field-out", help="prefix for per-component binary field files")
    p.set_defaults(func=_cmd_velocity)

    p = sub.add_parser("scalar", help="contraction scalar field to CSV")
    p.add_argument("file")
    p.add_argument("--frame", type=int, default=None)
    _add_stencil_options(p)
    _add_singularity_option(p)
    p.add_argument("--csv", help="output CSV path")
    p.set_defaults(func=_cmd_scalar)

    p = sub.add_parser("track", help="track an attribute point across frames")
    p.add_argument("file")
    p.add_argument("--attribute", required=True, choices=("level-set", "gradient-set"))
    p.add_argument("--level", type=float, default=None, help="traced field value")
    p.add_argument("--targets", default=None, help="traced gradient values, e.g. 0,0")
    p.add_argument("--seed", required=True, help="starting grid index, e.g. 32,32")
    _add_stencil_options(p)
    p.add_argument("--csv", help="write the track as CSV")
    p.add_argument("--tol", type=float, default=None,
                   help="fail (exit 1) if the deviation exceeds this")
    p.set_defaults(func=_cmd_track)

    p = sub.add_parser("covcheck", help="verify the transformation laws on random points")
    _add_param_options(p)
    p.add_argument("--matrix", required=True, help="row-major Jacobian entries")
    p.add_argument("--offset", default=None, help="affine offset (default zero)")
    p.add_argument("--samples", type=int, default=100)
    p.add_argument("--box", default="-1,1", help="sampling interval lo,hi per axis")
    p.add_argument("--t", type=float, default=0.0)
    p.add_argument("--tol", type=float, default=1e-11)
    p.add_argument("--rng-seed", type=int, default=0)
    p.set_defaults(func=_cmd_covcheck)

    return parser


def _merge_config(argv: list) -> list:
    """Insert key=value config entries as defaults before the explicit args."""
    if "--config" not in argv:
        return argv
    at = argv.index("--config")
    if at + 1 >= len(argv):
        return argv  # let argparse report the missing value
    path = argv[at + 1]
    rest = argv[:at] + argv[at + 2 :]
    extra = []
    for raw in Path(path).read_text().splitlines():
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        key, _, value = line.partition("=")
        extra += [f"--{key.strip()}", value.strip()]
    if not rest:
        return extra
    # defaults go right after the subcommand so explicit flags win
    return rest[:1] + extra + rest[1:]


def cli(argv=None) -> int:
    """Run the command line; returns the exit code."""
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        argv = _merge_config(argv)
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else 0
    try:
        return args.func(args)
    except TrackingError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def main() -> None:
    sys.exit(cli())
