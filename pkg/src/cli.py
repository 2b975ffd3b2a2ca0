"""
Command-line interface: curveclose analyze|close|reduce|render|oracle|generate.

Exit codes: 0 success, 1 bad input, 2 rejected (no cuts exist or none are
guaranteed), 3 inconclusive (numerical failure).
"""

import argparse
import json
import logging
import sys
from pathlib import Path
from typing import List, Optional

from pydantic import ValidationError

from .config import RunConfig
from .curve_family import CurveFamily
from .curve_kernel import (
    TurningCurve,
    max_radius,
    normalize,
    total_turning,
    turning_multiple,
)
from .formats import (
    CurveFormatError,
    dump_curve,
    load_curve,
    results_csv,
    save_curve,
    write_results_csv,
)
from .perm import CyclicShiftError, build_reduction_plan
from .rearrange import Cuts, Perm, rearranged
from .render import write_svg
from .solver import (
    TWO_CUT,
    Inconclusive,
    Rejected,
    check_c0_condition,
    find_all_two_cut,
    loop_winding_profile,
    oracle_grid,
    solve_c0,
    solve_k,
    solve_two_cut,
)

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_REJECTED = 2
EXIT_INCONCLUSIVE = 3


def _banner(title: str) -> None:
    print(f"\n=== {title} ===")


def _rule() -> None:
    print("=" * 80)


def _sigma(text: str) -> Perm:
    try:
        return Perm.parse(text)
    except ValueError as e:
        raise argparse.ArgumentTypeError(str(e)) from None


def _cuts(text: str) -> Cuts:
    try:
        return Cuts(tuple(float(token) for token in text.replace(",", " ").split()))
    except ValueError as e:
        raise argparse.ArgumentTypeError(str(e)) from None


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog="curveclose",
        description="Close planar curves by cutting them into arcs and regluing the arcs in another order.",
    )
    parser.add_argument("--resolution", type=int, default=None, help="Quadrature grid size (power of two >= 64).")
    parser.add_argument("--tol", type=float, default=None, help="Residual tolerance relative to the curve speed.")
    parser.add_argument("--seed", type=int, default=None, help="Seed for generated test curves.")
    parser.add_argument("--config", type=Path, default=None, help="RunConfig JSON file.")
    parser.add_argument("-v", "--verbose", action="store_true", help="Log solver progress.")
    sub = parser.add_subparsers(dest="command", required=True)

    analyze = sub.add_parser("analyze", help="Report turning, end point and solver applicability.")
    analyze.add_argument("curve", type=Path)
    analyze.add_argument("--json", action="store_true", help="Print the report as JSON.")

    close = sub.add_parser("close", help="Find cuts closing the rearranged curve.")
    close.add_argument("curve", type=Path)
    close.add_argument("--k", type=int, default=None, help="Number of arcs (default 3).")
    close.add_argument("--sigma", type=_sigma, default=None, help='Permutation, e.g. "2 5 1 6 4 3".')
    close.add_argument("--mode", choices=["c1", "c0", "all"], default="c1")
    close.add_argument("--out", type=Path, default=None, help="CSV output (default stdout).")
    close.add_argument("--svg", type=Path, default=None, help="Render the first solution.")
    close.add_argument("--curve-out", type=Path, default=None, help="Save the first rearranged curve as JSON.")

    reduce_cmd = sub.add_parser("reduce", help="Print the reduction of a permutation to S_3.")
    reduce_cmd.add_argument("--sigma", type=_sigma, required=True)

    render = sub.add_parser("render", help="Draw a curve and one rearrangement as SVG.")
    render.add_argument("curve", type=Path)
    render.add_argument("--sigma", type=_sigma, required=True)
    render.add_argument("--cuts", type=_cuts, required=True, help='Cut values, e.g. "0.3 0.7".')
    render.add_argument("--out", type=Path, default=None)
    render.add_argument("--curve-out", type=Path, default=None, help="Save the rearranged curve as JSON.")

    oracle = sub.add_parser("oracle", help="Brute-force grid search for the best cuts.")
    oracle.add_argument("curve", type=Path)
    oracle.add_argument("--sigma", type=_sigma, required=True)
    oracle.add_argument("--grid", type=int, default=None, help="Grid points per axis minus one.")

    generate = sub.add_parser("generate", help="Write a random non-closed test curve.")
    generate.add_argument("--winding", type=int, default=1)
    generate.add_argument("--profile", choices=sorted(CurveFamily.PROFILES), default="wavy")
    generate.add_argument("--out", type=Path, default=None)
    return parser


def _load_config(args: argparse.Namespace) -> RunConfig:
    overrides = {
        "resolution": args.resolution,
        "residual_tol": args.tol,
        "k_residual_tol": args.tol,
        "seed": args.seed,
    }
    if args.config is not None:
        return RunConfig.load(args.config, **overrides)
    return RunConfig().with_overrides(**overrides)


def _save_rearranged(
    args: argparse.Namespace, config: RunConfig, curve: TurningCurve, sigma: Perm, cuts: Cuts
) -> None:
    out = args.curve_out or config.curve_out
    if out is not None:
        save_curve(rearranged(curve, sigma, cuts, config.resolution).to_curve(), out)


def cmd_analyze(args: argparse.Namespace, config: RunConfig) -> int:
    curve = normalize(load_curve(args.curve))
    table = curve.table(config.resolution)
    end = table.endpoint
    m = turning_multiple(curve, config.turning_tol)
    closed = abs(end) <= config.closed_tol * curve.speed
    condition = check_c0_condition(curve, config)
    profile = loop_winding_profile(curve, config=config)
    report = {
        "speed": curve.speed,
        "total_turning": total_turning(curve),
        "turning_multiple": m,
        "endpoint": [end.real, end.imag],
        "endpoint_norm": abs(end),
        "max_radius": max_radius(curve, config.resolution),
        "closed": closed,
        "c0_condition": {"holds": condition.holds, "lhs": condition.lhs, "rhs": condition.rhs},
        "two_cut_applicable": bool(m) and not closed,
        "boundary_winding": profile.winding[0],
        "winding_changes": len(profile.changes()),
    }
    if args.json:
        print(json.dumps(report, indent=2))
        return EXIT_OK

    _banner(f"Curve {args.curve}")
    for key, value in report.items():
        print(f"{key}: {value}")
    _rule()
    return EXIT_OK


def cmd_close(args: argparse.Namespace, config: RunConfig) -> int:
    curve = normalize(load_curve(args.curve))
    sigma = args.sigma
    if sigma is None:
        k = args.k or 3
        if k != 3:
            raise ValueError(f"--k {k} needs --sigma")
        sigma = TWO_CUT
    elif args.k is not None and args.k != sigma.k:
        raise ValueError(f"--k {args.k} does not match --sigma of length {sigma.k}")

    two_cut = sigma == TWO_CUT
    if args.mode != "c1" and not two_cut:
        raise ValueError(f"--mode {args.mode} only applies to k=3 with sigma [1 3 2]")
    if args.mode == "all":
        results = find_all_two_cut(curve, config)
    elif args.mode == "c0":
        results = [solve_c0(curve, config)]
    elif two_cut:
        results = [solve_two_cut(curve, config)]
    else:
        results = [solve_k(curve, sigma, config)]

    out = args.out or config.csv_out
    if out is None:
        sys.stdout.write(results_csv(results))
    else:
        write_results_csv(results, out)
    svg = args.svg or config.svg_out
    if svg is not None:
        write_svg(svg, curve, results[0].sigma, results[0].cuts, config.resolution)
    _save_rearranged(args, config, curve, results[0].sigma, results[0].cuts)
    return EXIT_OK


def cmd_reduce(args: argparse.Namespace, config: RunConfig) -> int:
    plan = build_reduction_plan(args.sigma)
    _banner(f"Reduction of [{plan.sigma}]")
    print(f"route: {plan.route}")
    print(f"pre-shift: z_{plan.shift}")
    print(f"working permutation: [{plan.working}]")
    for step in plan.steps:
        print(f"{step.label}: collapse arc {step.arc} of [{step.before}]")
    print(f"chain: {plan.chain_label() or '(empty)'}")
    print(f"survivors: {list(plan.survivors)}")
    print(f"q: {list(plan.q)}")
    print(f"induced: [{plan.induced}]")
    _rule()
    return EXIT_OK


def cmd_render(args: argparse.Namespace, config: RunConfig) -> int:
    curve = normalize(load_curve(args.curve))
    if args.sigma.k != args.cuts.k:
        raise ValueError(f"--sigma has k={args.sigma.k} but --cuts give k={args.cuts.k}")
    out = args.out or config.svg_out
    if out is None:
        raise ValueError("render needs --out or svg_out in the config")
    write_svg(out, curve, args.sigma, args.cuts, config.resolution)
    _save_rearranged(args, config, curve, args.sigma, args.cuts)
    return EXIT_OK


def cmd_oracle(args: argparse.Namespace, config: RunConfig) -> int:
    curve = normalize(load_curve(args.curve))
    grid = args.grid or config.oracle_resolution
    result = oracle_grid(curve, args.sigma, grid, config.oracle_budget, config.resolution)
    _banner(f"Oracle for [{args.sigma}] over {result.domain}")
    print(f"evaluations: {result.evaluations}")
    print(f"best cuts: {result.cuts}")
    print(f"residual: {result.residual:.6e}")
    _rule()
    return EXIT_OK


def cmd_generate(args: argparse.Namespace, config: RunConfig) -> int:
    curve = CurveFamily(config.seed).fourier_curve(args.winding, profile=args.profile)
    out = args.out or config.curve_out
    if out is None:
        sys.stdout.write(dump_curve(curve) + "\n")
    else:
        save_curve(curve, out)
    return EXIT_OK


COMMANDS = {
    "analyze": cmd_analyze,
    "close": cmd_close,
    "reduce": cmd_reduce,
    "render": cmd_render,
    "oracle": cmd_oracle,
    "generate": cmd_generate,
}


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
    )
    try:
        config = _load_config(args)
        logger.debug("running %s with %s", args.command, config)
        return COMMANDS[args.command](args, config)
    except (Rejected, CyclicShiftError) as e:
        print(f"rejected: {e}", file=sys.stderr)
        return EXIT_REJECTED
    except Inconclusive as e:
        print(f"inconclusive: {e}", file=sys.stderr)
        return EXIT_INCONCLUSIVE
    except CurveFormatError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT
    except ValidationError as e:
        print(f"error: invalid configuration: {e}", file=sys.stderr)
        return EXIT_INPUT
    except (ValueError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
