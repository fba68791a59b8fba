"""``squeezelab`` command line: sweeps, figure data and the invariant suite."""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import yaml

from . import __version__
from .errors import InvalidParameterError, SqueezeLabError
from .sweep import SweepSpec, render, run_sweep
from .verify import DEFAULT_TOLERANCES, run_checks

EPILOG = """\
grids take start:stop:step (inclusive), comma lists or scalars; angles are
radians and accept pi expressions such as pi/2 or 3*pi/8.  --tau takes a real
value or range, or a single complex value written re,im.  SQUEEZELAB_THREADS
caps the worker count.
"""


def _add_output(p):
    p.add_argument("--format", dest="output_format", choices=("csv", "json"), default="csv")
    p.add_argument("--output", "-o", default="-", help="file path or - for stdout")
    p.add_argument(
        "--oracle-check",
        type=float,
        default=0.0,
        metavar="F",
        help="re-evaluate a seeded random fraction F of points with the Fock oracle",
    )
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--max-points", type=int, default=10**7)


def _add_params(p, theta=True):
    p.add_argument("--alpha", default="0")
    tau = p.add_mutually_exclusive_group()
    tau.add_argument("--tau", default=None)
    tau.add_argument("--tau-abs", default=None)
    p.add_argument("--tau-phase", default=None)
    if theta:
        p.add_argument("--theta", default="0")


def build_parser():
    parser = argparse.ArgumentParser(
        prog="squeezelab",
        description="Generalized su(1,1) squeezed vacua: sweeps and checks.",
        epilog=EPILOG,
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    parser.add_argument("--version", action="version", version=f"squeezelab {__version__}")
    parser.add_argument("--config", help="YAML/JSON sweep document (quantity, grids, fixed, ...)")
    parser.add_argument("--output", "-o", dest="config_output", default="-")
    sub = parser.add_subparsers(dest="command")

    p = sub.add_parser("variances", help="quadrature variances over a parameter grid")
    _add_params(p)
    _add_output(p)

    p = sub.add_parser("transition", help="transition polynomials and roots s-/s+")
    p.add_argument("--x", default=None, help="grid of x = M/L values (overrides the parameter grid)")
    _add_params(p, theta=False)
    _add_output(p)

    p = sub.add_parser("photon-dist", help="photon-number probabilities")
    _add_params(p)
    p.add_argument("--parity", choices=("even", "odd", "total"), default="even")
    p.add_argument("--n", default="0:20:1", help="sector index n (or N for --parity total)")
    _add_output(p)

    p = sub.add_parser("mandel", help="Mach-Zehnder output moments and Mandel Q")
    _add_params(p)
    p.add_argument("--z", default="1", help="coherent amplitude, real or re,im")
    p.add_argument("--phi", default="pi/2")
    p.add_argument("--port", choices=("a", "b"), default="a")
    _add_output(p)

    p = sub.add_parser("verify", help="run the seeded invariant suite")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--points", type=int, default=100)
    p.add_argument("--mz-points", type=int, default=None)
    p.add_argument(
        "--tol",
        action="append",
        default=[],
        metavar="NAME=VALUE",
        help=f"override a tolerance; names: {', '.join(DEFAULT_TOLERANCES)}",
    )
    return parser


def spec_from_args(args):
    grids = {"alpha": args.alpha}
    if args.tau is not None:
        grids["tau"] = args.tau
    if args.tau_abs is not None:
        grids["tau_abs"] = args.tau_abs
    if args.tau_phase is not None:
        grids["tau_phase"] = args.tau_phase
    fixed = {}
    if args.command == "transition":
        if args.x is not None:
            grids = {"x": args.x}
    else:
        grids["theta"] = args.theta
    if args.command == "photon-dist":
        grids["n"] = args.n
        fixed["parity"] = args.parity
    if args.command == "mandel":
        fixed.update(z=args.z, phi=args.phi, port=args.port)
    return SweepSpec(
        quantity=args.command,
        grids=grids,
        fixed=fixed,
        output_format=args.output_format,
        oracle_check=args.oracle_check,
        seed=args.seed,
        max_points=args.max_points,
    )


def load_config(path):
    text = Path(path).read_text()
    doc = yaml.safe_load(text)
    if not isinstance(doc, dict):
        raise InvalidParameterError(f"{path}: expected a mapping at top level")
    return SweepSpec.from_mapping(doc)


def _emit(text, target):
    if target in (None, "-"):
        sys.stdout.write(text)
    else:
        Path(target).write_text(text)


def _parse_tolerances(items):
    out = {}
    for item in items:
        name, sep, value = item.partition("=")
        if not sep:
            raise InvalidParameterError(f"--tol expects NAME=VALUE, got {item!r}")
        if name not in DEFAULT_TOLERANCES:
            raise InvalidParameterError(f"unknown invariant {name!r}")
        out[name] = float(value)
    return out


def cmd_verify(args):
    results = run_checks(
        seed=args.seed,
        points=args.points,
        tolerances=_parse_tolerances(args.tol),
        mz_points=args.mz_points,
    )
    print(f"# squeezelab {__version__} verify seed={args.seed} points={args.points}")
    for r in results:
        print(r.line())
    failed = [r.name for r in results if not r.passed]
    print(f"# {len(results) - len(failed)}/{len(results)} invariants passed")
    return 1 if failed else 0


VALUE_FLAGS = {
    "--alpha", "--tau", "--tau-abs", "--tau-phase", "--theta", "--x", "--n", "--z", "--phi",
}  # fmt: skip


def _glue_negative_values(argv):
    """Rewrite ``--alpha -1:2:0.5`` as ``--alpha=-1:2:0.5``.

    argparse only accepts a leading minus for plain numbers, not for ranges,
    lists or ``-pi/2``.
    """
    out = []
    it = iter(argv)
    for token in it:
        if token in VALUE_FLAGS:
            value = next(it, None)
            if value is None:
                out.append(token)
            else:
                out.append(f"{token}={value}")
        else:
            out.append(token)
    return out


def main(argv=None):
    parser = build_parser()
    argv = sys.argv[1:] if argv is None else list(argv)
    args = parser.parse_args(_glue_negative_values(argv))
    try:
        if args.command is None:
            if not args.config:
                parser.print_usage(sys.stderr)
                print("squeezelab: error: give a subcommand or --config", file=sys.stderr)
                return 2
            spec = load_config(args.config)
            result = run_sweep(spec)
            _emit(render(result, spec.output_format), args.config_output)
            return 0
        if args.command == "verify":
            return cmd_verify(args)
        spec = spec_from_args(args)
        result = run_sweep(spec)
        _emit(render(result, spec.output_format), args.output)
        return 0
    except (InvalidParameterError, OSError, yaml.YAMLError, json.JSONDecodeError) as exc:
        print(f"squeezelab: error: {exc}", file=sys.stderr)
        return 2
    except SqueezeLabError as exc:
        print(f"squeezelab: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
