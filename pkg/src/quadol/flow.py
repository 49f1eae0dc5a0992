"""End-to-end optimization flows.

run_quadol takes an exact reference netlist (and optionally a different
starting netlist, itself possibly approximate) and greedily buys back
area: it enumerates mergable pairs, optimizes each pair's dual-output
configuration, estimates every pair's lone-merge output error on a shared
stimulus, sorts pairs by that estimate and then binary-searches the
longest prefix of the sorted list whose conflict graph admits a matching
that keeps the measured output error within the bound. Each probed prefix
is tried with up to k randomized maximum matchings; the best feasible
solution seen anywhere (most merged pairs, then least error) wins.

run_quadol_plus repeats the flow over the exact netlist and a set of
externally produced approximate versions of it, always measuring error
against the exact reference, and keeps the run with the lowest final LUT
count.

All randomness (monte-carlo stimulus, matching perturbations) derives
from the single rng_seed, so identical inputs give identical results.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field

from .dualout import DualOutputConfig, SimContext, apply_merge, apply_merges, optimize_pair
from .matching import k_random_matchings
from .netlist import LutNetwork, lut_count, normalize_support
from .pairs import PairCandidate, build_conflict_graph, enumerate_pairs
from .sim import (DEFAULT_EXHAUSTIVE_LIMIT, DEFAULT_SAMPLES, ErrorReport,
                  StimulusSet, WordSpec, compute_metric, error_report,
                  output_signatures, resimulate_cone, simulate)

METRICS = ("er", "mred")


@dataclass
class FlowParams:
    metric: str = "er"
    error_bound: float = 0.0
    k: int = 16
    rng_seed: int = 0
    exhaustive_limit: int = DEFAULT_EXHAUSTIVE_LIMIT
    samples: int = DEFAULT_SAMPLES
    word: WordSpec = field(default_factory=WordSpec)

    def __post_init__(self) -> None:
        if self.metric not in METRICS:
            raise ValueError(f"metric must be one of {METRICS}")
        if self.error_bound < 0:
            raise ValueError("error bound must be non-negative")
        if self.metric == "er" and self.error_bound > 1:
            raise ValueError("error rate bound cannot exceed 1")
        if self.k < 1:
            raise ValueError("k must be at least 1")
        if self.samples < 1:
            raise ValueError("sample count must be positive")
        if self.exhaustive_limit < 0:
            raise ValueError("exhaustive limit must be non-negative")


@dataclass
class MatchingRecord:
    size: int
    error: float
    feasible: bool


@dataclass
class IterationRecord:
    index: int
    n: int
    lo: int
    hi: int
    feasible: bool
    matchings: list[MatchingRecord]


@dataclass
class FlowResult:
    network: LutNetwork
    merged: list[tuple[PairCandidate, DualOutputConfig]]
    feasible: bool
    base_error: float
    metric_value: float
    error: ErrorReport
    lut_count: int
    exact_lut_count: int
    area_ratio: float
    candidates: int
    trace: list[IterationRecord]


def _interface_matches(a: LutNetwork, b: LutNetwork) -> bool:
    return (set(a.primary_inputs) == set(b.primary_inputs)
            and set(a.primary_outputs) == set(b.primary_outputs))


def estimate_pair_errors(base: LutNetwork, candidates: list[PairCandidate],
                         sim_ctx: SimContext) -> None:
    """Score each candidate by merging it alone and measuring the outputs.

    Uses the shared stimulus and incremental resimulation from the base
    signatures; results land in candidate.estimated_error.
    """
    for cand in candidates:
        merged = apply_merge(base, cand, cand.config)
        sigs = resimulate_cone(merged, sim_ctx.stimulus, sim_ctx.base_signatures,
                               set(cand.members))
        out = output_signatures(merged, sigs, sim_ctx.stimulus.count)
        cand.estimated_error = compute_metric(sim_ctx.metric, sim_ctx.exact_outputs,
                                              out, sim_ctx.word)


def run_quadol(exact_ref: LutNetwork, params: FlowParams,
               base_net: LutNetwork | None = None) -> FlowResult:
    base_input = exact_ref if base_net is None else base_net
    if not _interface_matches(exact_ref, base_input):
        raise ValueError("starting netlist interface differs from the reference")

    stim = StimulusSet.for_inputs(exact_ref.primary_inputs,
                                  params.exhaustive_limit, params.samples,
                                  params.rng_seed)
    exact_sigs = simulate(exact_ref, stim)
    exact_out = output_signatures(exact_ref, exact_sigs, stim.count)
    exact_luts = len(exact_ref.nodes)

    base = normalize_support(base_input)
    base_sigs = simulate(base, stim)
    base_out = output_signatures(base, base_sigs, stim.count)
    base_err = compute_metric(params.metric, exact_out, base_out, params.word)

    if base_err > params.error_bound:
        return FlowResult(base_input, [], False, base_err, base_err,
                          error_report(exact_out, base_out, stim, params.word),
                          len(base_input.nodes), exact_luts,
                          len(base_input.nodes) / exact_luts, 0, [])

    sim_ctx = SimContext(stim, exact_out, base_sigs, params.metric, params.word)
    cands = enumerate_pairs(base)
    for cand in cands:
        cand.config = optimize_pair(base, cand, sim_ctx)
    estimate_pair_errors(base, cands, sim_ctx)
    cands.sort(key=lambda c: (c.estimated_error, c.key))

    best_size, best_err, best_net = 0, base_err, base
    best_merged: list[tuple[PairCandidate, DualOutputConfig]] = []
    trace: list[IterationRecord] = []
    m = len(cands)
    if m:
        rng = random.Random(params.rng_seed)
        lo, hi = 0, m + 1
        n = (m + 1) // 2
        index = 0
        while True:
            graph = build_conflict_graph(cands[:n])
            matchings = k_random_matchings(graph, params.k, rng.randrange(2**32))
            seen: set[tuple] = set()
            feasible_any = False
            records: list[MatchingRecord] = []
            for mt in matchings:
                if mt.keys in seen:
                    continue
                seen.add(mt.keys)
                merged_net = apply_merges(base, [(e, e.config) for e in mt.edges])
                sigs = resimulate_cone(merged_net, stim, base_sigs,
                                       {x for e in mt.edges for x in e.members})
                out = output_signatures(merged_net, sigs, stim.count)
                err = compute_metric(params.metric, exact_out, out, params.word)
                ok = err <= params.error_bound
                records.append(MatchingRecord(mt.size, err, ok))
                if ok:
                    feasible_any = True
                    if (mt.size > best_size
                            or (mt.size == best_size and err < best_err)):
                        best_size, best_err, best_net = mt.size, err, merged_net
                        best_merged = [(e, e.config) for e in mt.edges]
            trace.append(IterationRecord(index, n, lo, hi, feasible_any, records))
            index += 1
            if feasible_any:
                lo = n
            else:
                hi = n
            if hi - lo <= 1:
                break
            n = (lo + hi + 1) // 2 if feasible_any else (lo + hi) // 2

    final_sigs = simulate(best_net, stim)
    final_out = output_signatures(best_net, final_sigs, stim.count)
    report = error_report(exact_out, final_out, stim, params.word)
    luts = lut_count(best_net)
    return FlowResult(best_net, best_merged, True, base_err,
                      compute_metric(params.metric, exact_out, final_out, params.word),
                      report, luts, exact_luts, luts / exact_luts, m, trace)


@dataclass
class PlusRun:
    label: str
    result: FlowResult | None
    skipped: str | None = None


@dataclass
class PlusResult:
    runs: list[PlusRun]
    winner: int

    @property
    def best(self) -> FlowResult:
        result = self.runs[self.winner].result
        assert result is not None
        return result


def run_quadol_plus(exact_ref: LutNetwork,
                    intermediates: list[tuple[str, LutNetwork]],
                    params: FlowParams) -> PlusResult:
    """Post-optimize the exact netlist and every intermediate, keep the best.

    Intermediates whose interface does not match the reference are
    recorded as skipped. The winner has the fewest final LUTs among
    feasible runs, ties broken by lower final error, then input order
    (the exact netlist runs first).
    """
    runs: list[PlusRun] = [PlusRun("exact", run_quadol(exact_ref, params))]
    for label, net in intermediates:
        if not _interface_matches(exact_ref, net):
            runs.append(PlusRun(label, None, "interface mismatch with reference"))
            continue
        runs.append(PlusRun(label, run_quadol(exact_ref, params, base_net=net)))
    winner = -1
    winner_key = None
    for idx, run in enumerate(runs):
        if run.result is None or not run.result.feasible:
            continue
        key = (run.result.lut_count, run.result.metric_value, idx)
        if winner_key is None or key < winner_key:
            winner_key, winner = key, idx
    return PlusResult(runs, winner)


# ---------------------------------------------------------------------------
# report serialization


def _sig9(x: float) -> float:
    return float(f"{x:.9g}")


def error_to_dict(report: ErrorReport, metric: str,
                  po_order: tuple[str, ...]) -> dict:
    return {
        "metric": metric,
        "value": _sig9(report.value(metric)),
        "er": _sig9(report.er),
        "mred": None if report.mred is None else _sig9(report.mred),
        "mode": report.mode,
        "sample_count": report.sample_count,
        "seed": report.seed,
        "word": {"msb_first": report.word.msb_first,
                 "po_order": list(po_order)},
    }


def config_to_dict(pair: PairCandidate, config: DualOutputConfig) -> dict:
    if config.i5 is None:
        i5 = "const1"
    else:
        i5 = {"signal": config.i5[0],
              "phase": "positive" if config.i5[1] else "negative"}
    return {
        "f": pair.f_node,
        "g": pair.g_node,
        "type": pair.merge_type.value,
        "pins": {f"i{k}": s for k, s in enumerate(config.shared_pins)} | {"i5": i5},
        "f_port": config.f_port,
        "g_port": config.g_port,
        "f_polarity": "negative" if config.f_negated else "positive",
        "g_polarity": "negative" if config.g_negated else "positive",
        "lut_a": f"0x{config.lut_a.bits:08x}",
        "lut_b": f"0x{config.lut_b.bits:08x}",
        "structural_hd": config.structural_hd,
        "estimated_error": None if pair.estimated_error is None
                           else _sig9(pair.estimated_error),
    }


def result_to_dict(result: FlowResult, metric: str) -> dict:
    return {
        "feasible": result.feasible,
        "lut_count": result.lut_count,
        "exact_lut_count": result.exact_lut_count,
        "area_ratio": _sig9(result.area_ratio),
        "merged_pair_count": len(result.merged),
        "candidate_count": result.candidates,
        "base_error": _sig9(result.base_error),
        "error": error_to_dict(result.error, metric,
                               result.network.primary_outputs),
        "merged_pairs": [config_to_dict(p, c) for p, c in result.merged],
        "trace": [
            {
                "iteration": it.index,
                "n": it.n,
                "lo": it.lo,
                "hi": it.hi,
                "feasible": it.feasible,
                "matchings": [
                    {"size": mr.size, "error": _sig9(mr.error),
                     "feasible": mr.feasible}
                    for mr in it.matchings
                ],
            }
            for it in result.trace
        ],
    }
