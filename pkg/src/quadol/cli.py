"""Command-line interface.

Subcommands:
  quadol       optimize one netlist against an exact reference
  quadol-plus  optimize the reference plus external approximate versions
  evaluate     measure error metrics of an approximate netlist
  pairs        list mergable pairs and their best configurations

Exit codes: 0 success, 2 usage, 3 input error, 4 infeasible, 5 I/O error.
"""
from __future__ import annotations

import argparse
import json
import sys

from .dualout import MergeError, optimize_pair
from .flow import (FlowParams, FlowResult, PlusResult, config_to_dict,
                   error_to_dict, result_to_dict, run_quadol, run_quadol_plus)
from .netlist import (BlifError, LutNetwork, NetlistError, lut_count,
                      normalize_support, parse_blif_file, write_blif_file)
from .pairs import enumerate_pairs
from .sim import (DEFAULT_EXHAUSTIVE_LIMIT, DEFAULT_SAMPLES, StimulusSet,
                  WordSpec, error_report, output_signatures, simulate)

SCHEMA_VERSION = 1


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--seed", type=int, default=0, help="master RNG seed")
    p.add_argument("--samples", type=int, default=DEFAULT_SAMPLES,
                   help="monte-carlo vector count for wide inputs")
    p.add_argument("--exhaustive-limit", type=int,
                   default=DEFAULT_EXHAUSTIVE_LIMIT, metavar="N",
                   help="simulate exhaustively up to N primary inputs")
    p.add_argument("--msb-first", action="store_true",
                   help="treat the first declared output as the MSB")
    p.add_argument("--report", metavar="FILE", help="write a JSON report")


def _add_flow(p: argparse.ArgumentParser) -> None:
    p.add_argument("--metric", choices=("er", "mred"), default="er")
    p.add_argument("--bound", type=float, default=0.0,
                   help="error bound on the chosen metric")
    p.add_argument("--k", type=int, default=16,
                   help="randomized matchings per search step")
    p.add_argument("--jobs", type=int, default=1,
                   help="accepted for compatibility; runs are sequential")
    p.add_argument("--output", metavar="FILE",
                   help="write the optimized netlist (BLIF)")
    _add_common(p)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="quadol",
        description="approximate dual-output LUT merging for LUT-6 netlists")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("quadol", help="optimize a netlist under an error bound")
    p.add_argument("exact", help="exact reference netlist (BLIF)")
    p.add_argument("--base", metavar="FILE",
                   help="start from this netlist instead of the reference")
    _add_flow(p)

    p = sub.add_parser("quadol-plus",
                       help="optimize the reference and approximate variants")
    p.add_argument("exact", help="exact reference netlist (BLIF)")
    p.add_argument("intermediates", nargs="+",
                   help="approximate netlists with the same interface")
    _add_flow(p)

    p = sub.add_parser("evaluate", help="measure error of an approximate netlist")
    p.add_argument("exact", help="exact reference netlist (BLIF)")
    p.add_argument("approx", help="netlist to evaluate")
    _add_common(p)

    p = sub.add_parser("pairs", help="list mergable pairs of a netlist")
    p.add_argument("netlist", help="netlist to analyze (BLIF)")
    p.add_argument("--report", metavar="FILE", help="write a JSON report")
    return parser


def _params(args: argparse.Namespace) -> FlowParams:
    return FlowParams(metric=args.metric, error_bound=args.bound, k=args.k,
                      rng_seed=args.seed, exhaustive_limit=args.exhaustive_limit,
                      samples=args.samples,
                      word=WordSpec(msb_first=args.msb_first))


def _params_dict(params: FlowParams) -> dict:
    return {"metric": params.metric, "bound": params.error_bound,
            "k": params.k, "seed": params.rng_seed,
            "exhaustive_limit": params.exhaustive_limit,
            "samples": params.samples,
            "msb_first": params.word.msb_first}


def _write_json(path: str, payload: dict) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, indent=2)
        fh.write("\n")


def _emit_outputs(result: FlowResult, args: argparse.Namespace,
                  report: dict) -> None:
    if args.output:
        write_blif_file(result.network, args.output)
        _write_json(args.output + ".merges.json",
                    {"schema": SCHEMA_VERSION,
                     "merged_pairs": [config_to_dict(p, c)
                                      for p, c in result.merged]})
    if args.report:
        _write_json(args.report, report)


def _print_result(result: FlowResult, metric: str) -> None:
    print(f"luts: {result.exact_lut_count} -> {result.lut_count} "
          f"(area ratio {result.area_ratio:.9g})")
    print(f"merged pairs: {len(result.merged)} of {result.candidates} candidates")
    rep = result.error
    print(f"er = {rep.er:.9g}")
    if rep.mred is not None:
        print(f"mred = {rep.mred:.9g}")
    print(f"stimulus: {rep.mode}, {rep.sample_count} vectors")
    if not result.feasible:
        print(f"infeasible: starting netlist exceeds the {metric} bound")


def _cmd_quadol(args: argparse.Namespace) -> int:
    exact = parse_blif_file(args.exact)
    base = parse_blif_file(args.base) if args.base else None
    params = _params(args)
    result = run_quadol(exact, params, base_net=base)
    report = {"schema": SCHEMA_VERSION, "tool": "quadol",
              "params": _params_dict(params),
              "input": {"exact": args.exact, "base": args.base},
              "result": result_to_dict(result, params.metric)}
    _print_result(result, params.metric)
    _emit_outputs(result, args, report)
    return 0 if result.feasible else 4


def _cmd_quadol_plus(args: argparse.Namespace) -> int:
    exact = parse_blif_file(args.exact)
    intermediates = [(path, parse_blif_file(path)) for path in args.intermediates]
    params = _params(args)
    plus = run_quadol_plus(exact, intermediates, params)
    runs = []
    for run in plus.runs:
        if run.result is None:
            runs.append({"label": run.label, "skipped": run.skipped})
            print(f"{run.label}: skipped ({run.skipped})")
        else:
            runs.append({"label": run.label,
                         "result": result_to_dict(run.result, params.metric)})
            print(f"{run.label}: {run.result.lut_count} luts, "
                  f"{params.metric} {run.result.metric_value:.9g}"
                  + ("" if run.result.feasible else " (infeasible)"))
    report = {"schema": SCHEMA_VERSION, "tool": "quadol-plus",
              "params": _params_dict(params),
              "input": {"exact": args.exact, "intermediates": args.intermediates},
              "winner": plus.runs[plus.winner].label,
              "runs": runs}
    print(f"winner: {plus.runs[plus.winner].label}")
    _print_result(plus.best, params.metric)
    _emit_outputs(plus.best, args, report)
    return 0


def _cmd_evaluate(args: argparse.Namespace) -> int:
    exact = parse_blif_file(args.exact)
    approx = parse_blif_file(args.approx)
    if (set(exact.primary_inputs) != set(approx.primary_inputs)
            or set(exact.primary_outputs) != set(approx.primary_outputs)):
        raise NetlistError("netlist interfaces differ")
    word = WordSpec(msb_first=args.msb_first)
    stim = StimulusSet.for_inputs(exact.primary_inputs, args.exhaustive_limit,
                                  args.samples, args.seed)
    exact_out = output_signatures(exact, simulate(exact, stim), stim.count)
    approx_out = output_signatures(approx, simulate(approx, stim), stim.count)
    rep = error_report(exact_out, approx_out, stim, word)
    print(f"er = {rep.er:.9g}")
    if rep.mred is not None:
        print(f"mred = {rep.mred:.9g}")
    print(f"stimulus: {rep.mode}, {rep.sample_count} vectors")
    print(f"luts: exact {lut_count(exact)}, approx {lut_count(approx)}")
    if args.report:
        _write_json(args.report, {
            "schema": SCHEMA_VERSION, "tool": "evaluate",
            "input": {"exact": args.exact, "approx": args.approx},
            "lut_count": {"exact": lut_count(exact),
                          "approx": lut_count(approx)},
            "error": error_to_dict(rep, "er", exact.primary_outputs),
        })
    return 0


def _cmd_pairs(args: argparse.Namespace) -> int:
    net = normalize_support(parse_blif_file(args.netlist))
    cands = enumerate_pairs(net)
    entries = []
    for cand in cands:
        cand.config = optimize_pair(net, cand)
        entries.append(config_to_dict(cand, cand.config))
        print(f"{cand.f_node} + {cand.g_node}: {cand.merge_type.value}, "
              f"hd {cand.config.structural_hd}")
    print(f"{len(cands)} candidate pairs")
    if args.report:
        _write_json(args.report, {"schema": SCHEMA_VERSION, "tool": "pairs",
                                  "input": {"netlist": args.netlist},
                                  "pairs": entries})
    return 0


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    handlers = {"quadol": _cmd_quadol, "quadol-plus": _cmd_quadol_plus,
                "evaluate": _cmd_evaluate, "pairs": _cmd_pairs}
    try:
        return handlers[args.command](args)
    except (BlifError, NetlistError, MergeError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 5


if __name__ == "__main__":
    sys.exit(main())
