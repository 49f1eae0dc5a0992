"""Approximate merging of two LUTs into one dual-output LUT.

The shared cell holds two 5-input LUTs A and B over the pins I0..I4. Port
O5 outputs B directly; port O6 outputs A when the select value on I5 is 1
and B otherwise (a constant-1 select turns O6 into plain A). Merging a
pair (F, G) assigns each function to a port and picks A/B contents that
minimize the structural error

    structural_hd = HD(F, F~) + HD(G, G~)

where each Hamming distance is counted over that function's own input
space. For every candidate shape the closed-form optimum is a cofactor
for the port owning the select pin and a per-minterm majority vote for
the shared B side; candidates that tie by construction (both choices have
equal structural_hd) are settled by simulating their impact on the
primary outputs. On top of the plain pair, the variants (~F, G) and
(F, ~G) are tried as well; a winning negated side is compensated exactly
by negating that input on every consumer LUT, so only signals that do not
drive a primary output may be negated. (~F, ~G) never wins anything the
others cannot reach, because negating both A and B maps it back.

structural_hd is never taken from the closed forms: every candidate is
re-scored by exhaustively evaluating the configured cell on all input
combinations.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional

from .netlist import LutNetwork, LutNode
from .pairs import MergeType, PairCandidate
from .sim import (OutputSignatures, StimulusSet, WordSpec, compute_metric,
                  output_signatures, resimulate_cone)
from .truthtab import TruthTable, _var_mask, full_mask, hamming_distance, majority3


class MergeError(Exception):
    pass


@dataclass(frozen=True)
class DualOutputConfig:
    shared_pins: tuple[str, ...]          # signals on I0..I4, in table order
    i5: Optional[tuple[str, bool]]        # (signal, positive phase); None = constant 1
    f_port: str                           # "O5" or "O6"
    g_port: str
    lut_a: TruthTable                     # contents of LUT A (the I5=1 branch of O6)
    lut_b: TruthTable                     # contents of LUT B (O5, and the I5=0 branch)
    f_negated: bool
    g_negated: bool
    structural_hd: int


@dataclass
class SimContext:
    """Everything needed to score a provisional merge at the outputs."""
    stimulus: StimulusSet
    exact_outputs: OutputSignatures
    base_signatures: dict[str, int]
    metric: str
    word: WordSpec


@dataclass(frozen=True)
class _Candidate:
    sort_key: tuple[int, int, int, int]   # (row, select index, variant, choice)
    config: DualOutputConfig


def _mux_at(pos: int, a: TruthTable, b: TruthTable, positive: bool) -> TruthTable:
    """Table selecting a (select=1) or b (select=0) on the pin at `pos`."""
    ea = a.insert_var(pos)
    eb = b.insert_var(pos)
    m1 = _var_mask(a.n + 1, pos)
    m0 = full_mask(a.n + 1) ^ m1
    if positive:
        bits = (ea.bits & m1) | (eb.bits & m0)
    else:
        bits = (eb.bits & m1) | (ea.bits & m0)
    return TruthTable(a.n + 1, bits)


def _score(f: TruthTable, g: TruthTable, f_tilde: TruthTable,
           g_tilde: TruthTable) -> int:
    return hamming_distance(f, f_tilde) + hamming_distance(g, g_tilde)


# ---------------------------------------------------------------------------
# candidate generation, one function per pair shape


def _shared6_candidates(f: TruthTable, g: TruthTable, signals: tuple[str, ...],
                        variant: int, f_neg: bool, g_neg: bool) -> list[_Candidate]:
    cands: list[_Candidate] = []

    def emit(row: int, i: int, choice: int, i5, f_port: str, g_port: str,
             a: TruthTable, b: TruthTable) -> None:
        if i5 is None:
            ft = (a if f_port == "O6" else b).insert_var(i)
            gt = (a if g_port == "O6" else b).insert_var(i)
        else:
            mux = _mux_at(i, a, b, i5[1])
            ft = mux if f_port == "O6" else b.insert_var(i)
            gt = mux if g_port == "O6" else b.insert_var(i)
        hd = _score(f, g, ft, gt)
        pins = signals[:i] + signals[i + 1:]
        cands.append(_Candidate((row, i, variant, choice),
                                DualOutputConfig(pins, i5, f_port, g_port,
                                                 a, b, f_neg, g_neg, hd)))

    for i in range(6):
        xsig = signals[i]
        fx, fxb = f.cofactor(i, True), f.cofactor(i, False)
        gx, gxb = g.cofactor(i, True), g.cofactor(i, False)
        emit(0, i, 0, (xsig, True), "O6", "O5", fx, majority3(fxb, gx, gxb))
        emit(1, i, 0, (xsig, True), "O5", "O6", gx, majority3(fx, fxb, gxb))
        emit(2, i, 0, (xsig, False), "O6", "O5", fxb, majority3(fx, gx, gxb))
        emit(3, i, 0, (xsig, False), "O5", "O6", gxb, majority3(fx, fxb, gx))
        for ai, a in enumerate((fx, gx)):
            for bi, b in enumerate((fxb, gxb)):
                emit(4, i, ai * 2 + bi, (xsig, True), "O6", "O6", a, b)
        for ai, a in enumerate((fx, fxb)):
            for bi, b in enumerate((gx, gxb)):
                emit(5, i, ai * 2 + bi, None, "O6", "O5", a, b)
    return cands


def _shared5_66_candidates(f: TruthTable, g: TruthTable,
                           shared: tuple[str, ...], m: str, n: str,
                           variant: int, f_neg: bool, g_neg: bool) -> list[_Candidate]:
    """f is over shared + (m,), g over shared + (n,), select var at index 5."""
    cands: list[_Candidate] = []
    fm, fmb = f.cofactor(5, True), f.cofactor(5, False)
    gn, gnb = g.cofactor(5, True), g.cofactor(5, False)

    def emit(row: int, choice: int, i5, f_port: str, g_port: str,
             a: TruthTable, b: TruthTable) -> None:
        # a port on O6 only ever pairs with its own odd input (or a
        # constant) on the select pin, so each member's port function
        # stays inside that member's own input space
        if f_port == "O5":
            ft = b.insert_var(5)
        elif i5 is None:
            ft = a.insert_var(5)
        else:
            ft = _mux_at(5, a, b, i5[1])
        if g_port == "O5":
            gt = b.insert_var(5)
        elif i5 is None:
            gt = a.insert_var(5)
        else:
            gt = _mux_at(5, a, b, i5[1])
        hd = _score(f, g, ft, gt)
        cands.append(_Candidate((row, 0, variant, choice),
                                DualOutputConfig(shared, i5, f_port, g_port,
                                                 a, b, f_neg, g_neg, hd)))

    emit(0, 0, (m, True), "O6", "O5", fm, majority3(fmb, gn, gnb))
    emit(1, 0, (n, True), "O5", "O6", gn, majority3(fm, fmb, gnb))
    emit(2, 0, (m, False), "O6", "O5", fmb, majority3(fm, gn, gnb))
    emit(3, 0, (n, False), "O5", "O6", gnb, majority3(fm, fmb, gn))
    for ai, a in enumerate((fm, fmb)):
        for bi, b in enumerate((gn, gnb)):
            emit(4, ai * 2 + bi, None, "O6", "O5", a, b)
    return cands


def _shared5_65_candidates(f: TruthTable, g: TruthTable,
                           shared: tuple[str, ...], m: str,
                           variant: int, f_neg: bool, g_neg: bool) -> list[_Candidate]:
    """f is 6 inputs over shared + (m,); g is 5 inputs over shared."""
    cands: list[_Candidate] = []
    fm, fmb = f.cofactor(5, True), f.cofactor(5, False)

    def emit(row: int, choice: int, i5, a: TruthTable, b: TruthTable) -> None:
        ft = a.insert_var(5) if i5 is None else _mux_at(5, a, b, i5[1])
        hd = hamming_distance(f, ft) + hamming_distance(g, b)
        cands.append(_Candidate((row, 0, variant, choice),
                                DualOutputConfig(shared, i5, "O6", "O5",
                                                 a, b, f_neg, g_neg, hd)))

    for bi, b in enumerate((fmb, g)):
        emit(0, bi, (m, True), fm, b)
    for bi, b in enumerate((fm, g)):
        emit(1, bi, (m, False), fmb, b)
    for ai, a in enumerate((fm, fmb)):
        emit(2, ai, None, a, g)
    return cands


# ---------------------------------------------------------------------------
# selection

TieBreaker = Callable[[list[DualOutputConfig]], DualOutputConfig]


def _select(cands: list[_Candidate],
            tie_breaker: Optional[TieBreaker] = None) -> DualOutputConfig:
    best_hd = min(c.config.structural_hd for c in cands)
    ties = sorted((c for c in cands if c.config.structural_hd == best_hd),
                  key=lambda c: c.sort_key)
    if len(ties) > 1 and tie_breaker is not None:
        return tie_breaker([c.config for c in ties])
    return ties[0].config


def optimize_shared6(f: TruthTable, g: TruthTable, signals: tuple[str, ...],
                     tie_breaker: Optional[TieBreaker] = None) -> DualOutputConfig:
    """Best configuration for two 6-input LUTs over the same signals."""
    if f.n != 6 or g.n != 6 or len(signals) != 6:
        raise ValueError("shared6 needs two 6-input tables over 6 signals")
    return _select(_shared6_candidates(f, g, signals, 0, False, False), tie_breaker)


def optimize_shared5_66(f: TruthTable, g: TruthTable, shared: tuple[str, ...],
                        f_unique: str, g_unique: str,
                        tie_breaker: Optional[TieBreaker] = None) -> DualOutputConfig:
    """Two 6-input LUTs sharing five signals; the odd inputs sit at index 5."""
    if f.n != 6 or g.n != 6 or len(shared) != 5:
        raise ValueError("shared5_66 needs two 6-input tables over 5 shared signals")
    return _select(_shared5_66_candidates(f, g, shared, f_unique, g_unique,
                                          0, False, False), tie_breaker)


def optimize_shared5_65(f: TruthTable, g: TruthTable, shared: tuple[str, ...],
                        f_unique: str,
                        tie_breaker: Optional[TieBreaker] = None) -> DualOutputConfig:
    """A 6-input LUT paired with a 5-input LUT over a subset of its signals."""
    if f.n != 6 or g.n != 5 or len(shared) != 5:
        raise ValueError("shared5_65 needs a 6-input and a 5-input table")
    return _select(_shared5_65_candidates(f, g, shared, f_unique,
                                          0, False, False), tie_breaker)


def _pair_tables(net: LutNetwork, pair: PairCandidate):
    fn = net.nodes[pair.f_node]
    gn = net.nodes[pair.g_node]
    if pair.merge_type is MergeType.SHARED6:
        signals = tuple(sorted(fn.fanins))
        f = fn.function.reexpress(6, [signals.index(s) for s in fn.fanins])
        g = gn.function.reexpress(6, [signals.index(s) for s in gn.fanins])
        return signals, None, None, f, g
    shared = tuple(sorted(pair.shared_inputs))
    if pair.merge_type is MergeType.SHARED5_66:
        f_order = shared + (pair.f_unique,)
        g_order = shared + (pair.g_unique,)
        f = fn.function.reexpress(6, [f_order.index(s) for s in fn.fanins])
        g = gn.function.reexpress(6, [g_order.index(s) for s in gn.fanins])
        return shared, pair.f_unique, pair.g_unique, f, g
    f_order = shared + (pair.f_unique,)
    f = fn.function.reexpress(6, [f_order.index(s) for s in fn.fanins])
    g = gn.function.reexpress(5, [shared.index(s) for s in gn.fanins])
    return shared, pair.f_unique, None, f, g


def optimize_pair(net: LutNetwork, pair: PairCandidate,
                  sim_ctx: Optional[SimContext] = None) -> DualOutputConfig:
    """Best configuration for a candidate, output negations included.

    Ties on structural_hd are settled by simulated output error when a
    simulation context is available, deterministic candidate order
    otherwise. A member that drives a primary output keeps its polarity
    (there is no downstream LUT to absorb the negation).
    """
    base, f_u, g_u, f, g = _pair_tables(net, pair)
    variants = [(0, f, g, False, False)]
    if pair.f_node not in net.po_set:
        variants.append((1, f.negate_output(), g, True, False))
    if pair.g_node not in net.po_set:
        variants.append((2, f, g.negate_output(), False, True))

    cands: list[_Candidate] = []
    for variant, fv, gv, fneg, gneg in variants:
        if pair.merge_type is MergeType.SHARED6:
            cands.extend(_shared6_candidates(fv, gv, base, variant, fneg, gneg))
        elif pair.merge_type is MergeType.SHARED5_66:
            cands.extend(_shared5_66_candidates(fv, gv, base, f_u, g_u,
                                                variant, fneg, gneg))
        else:
            cands.extend(_shared5_65_candidates(fv, gv, base, f_u,
                                                variant, fneg, gneg))

    tie_breaker = None
    if sim_ctx is not None:
        def tie_breaker(configs: list[DualOutputConfig]) -> DualOutputConfig:
            return resolve_choice_by_simulation(net, pair, configs, sim_ctx)

    return _select(cands, tie_breaker)


def resolve_choice_by_simulation(net: LutNetwork, pair: PairCandidate,
                                 candidates: list[DualOutputConfig],
                                 sim_ctx: SimContext) -> DualOutputConfig:
    """Pick the candidate whose lone merge hurts the outputs least.

    Candidates are expected to tie on structural_hd; equal simulated
    errors fall back to list order, which the callers keep deterministic.
    """
    best_err = None
    best = candidates[0]
    for cfg in candidates:
        merged = apply_merge(net, pair, cfg)
        sigs = resimulate_cone(merged, sim_ctx.stimulus, sim_ctx.base_signatures,
                               {pair.f_node, pair.g_node})
        out = output_signatures(merged, sigs, sim_ctx.stimulus.count)
        err = compute_metric(sim_ctx.metric, sim_ctx.exact_outputs, out, sim_ctx.word)
        if best_err is None or err < best_err:
            best_err, best = err, cfg
    return best


# ---------------------------------------------------------------------------
# applying merges


def _port_node(name: str, config: DualOutputConfig, port: str) -> LutNode:
    if port == "O6" and config.i5 is not None:
        sig, positive = config.i5
        fanins = config.shared_pins + (sig,)
        table = _mux_at(5, config.lut_a, config.lut_b, positive)
    elif port == "O6":
        fanins = config.shared_pins
        table = config.lut_a
    else:
        fanins = config.shared_pins
        table = config.lut_b
    supp = sorted(table.support())
    if len(supp) != table.n:
        table = table.project(supp)
        fanins = tuple(fanins[i] for i in supp)
    return LutNode(name, fanins, table)


def apply_merges(net: LutNetwork,
                 merges: list[tuple[PairCandidate, DualOutputConfig]]) -> LutNetwork:
    """Apply a compatible set of merges in one step.

    Port functions are installed first and negation compensation runs
    after all replacements, so the outcome does not depend on merge
    order within the set.
    """
    used = {m for pair in net.merges for m in pair}
    replacements: dict[str, LutNode] = {}
    negated: list[str] = []
    for pair, config in merges:
        for member in pair.members:
            if member not in net.nodes:
                raise MergeError(f"unknown node {member}")
            if member in used:
                raise MergeError(f"node {member} already merged")
            used.add(member)
        replacements[pair.f_node] = _port_node(pair.f_node, config, config.f_port)
        replacements[pair.g_node] = _port_node(pair.g_node, config, config.g_port)
        if config.f_negated:
            negated.append(pair.f_node)
        if config.g_negated:
            negated.append(pair.g_node)

    result = net.with_nodes(replacements,
                            tuple(pair.key for pair, _ in merges))
    if not negated:
        return result

    for sig in negated:
        if sig in result.po_set:
            raise MergeError(f"cannot negate primary output signal {sig}")
    nodes = dict(result.nodes)
    for sig in negated:
        for node in list(nodes.values()):
            if sig in node.fanins:
                pos = node.fanins.index(sig)
                nodes[node.output] = LutNode(node.output, node.fanins,
                                             node.function.negate_input(pos))
    return LutNetwork(result.name, result.primary_inputs, result.primary_outputs,
                      nodes, result.merges)


def apply_merge(net: LutNetwork, pair: PairCandidate,
                config: DualOutputConfig) -> LutNetwork:
    return apply_merges(net, [(pair, config)])
