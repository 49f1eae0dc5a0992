"""Bit-parallel simulation and error metrics.

Every signal is simulated for all stimulus vectors at once: the vector
outcomes are packed into one big integer per signal (bit j = value under
vector j). Exhaustive stimulus enumerates every input combination,
monte-carlo stimulus draws uniform random vectors from a seeded RNG.

Two metrics are provided. Error rate is the fraction of vectors on which
any primary output differs. The mean relative error interprets the output
vector as an unsigned word and averages |approx - exact| / max(exact, 1);
the sum is carried out exactly (integer numerators per denominator) so
the result does not depend on accumulation order.
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .netlist import LutNetwork, topological_order
from .truthtab import full_mask

DEFAULT_EXHAUSTIVE_LIMIT = 16
DEFAULT_SAMPLES = 100_000


@dataclass(frozen=True)
class WordSpec:
    """How primary outputs combine into an unsigned word.

    Weights follow the reference network's output declaration order; by
    default the first declared output is the least significant bit, and
    msb_first flips that.
    """
    msb_first: bool = False

    def weights(self, outputs: tuple[str, ...]) -> dict[str, int]:
        n = len(outputs)
        if self.msb_first:
            return {po: (n - 1 - k) for k, po in enumerate(outputs)}
        return {po: k for k, po in enumerate(outputs)}


@dataclass(frozen=True)
class StimulusSet:
    mode: str                      # "exhaustive" or "monte-carlo"
    pi_signatures: dict[str, int]  # keyed by primary input name
    count: int
    seed: int | None = None

    @staticmethod
    def exhaustive(pis: tuple[str, ...]) -> "StimulusSet":
        count = 1 << len(pis)
        # bit j of input p's signature is bit p of the vector index j
        sigs = {name: _stripe(count, p) for p, name in enumerate(pis)}
        return StimulusSet("exhaustive", sigs, count)

    @staticmethod
    def monte_carlo(pis: tuple[str, ...], count: int, seed: int) -> "StimulusSet":
        rng = random.Random(seed)
        sigs = {name: rng.getrandbits(count) for name in pis}
        return StimulusSet("monte-carlo", sigs, count, seed)

    @staticmethod
    def for_inputs(pis: tuple[str, ...], exhaustive_limit: int = DEFAULT_EXHAUSTIVE_LIMIT,
                   samples: int = DEFAULT_SAMPLES, seed: int = 0) -> "StimulusSet":
        if len(pis) <= exhaustive_limit:
            return StimulusSet.exhaustive(pis)
        return StimulusSet.monte_carlo(pis, samples, seed)


def _stripe(count: int, p: int) -> int:
    bits = 0
    period = 1 << p
    for j in range(0, count, 2 * period):
        lo = j + period
        hi = min(j + 2 * period, count)
        if lo < count:
            bits |= ((1 << (hi - lo)) - 1) << lo
    return bits


def _eval_node(table, fanin_sigs: list[int], mask: int) -> int:
    n = table.n
    if n == 0:
        return mask if table.bits else 0
    ones = table.bits.bit_count()
    invert = ones > (1 << n) // 2
    target = (table.bits ^ full_mask(n)) if invert else table.bits
    acc = 0
    while target:
        low = target & -target
        idx = low.bit_length() - 1
        target ^= low
        term = mask
        for j in range(n):
            s = fanin_sigs[j]
            term &= s if (idx >> j) & 1 else (s ^ mask)
            if not term:
                break
        acc |= term
    return (acc ^ mask) if invert else acc


def simulate(net: LutNetwork, stim: StimulusSet) -> dict[str, int]:
    """Signatures for every signal of the network."""
    mask = (1 << stim.count) - 1
    sigs: dict[str, int] = {}
    for pi in net.primary_inputs:
        sigs[pi] = stim.pi_signatures[pi]
    for node in topological_order(net):
        sigs[node.output] = _eval_node(node.function,
                                       [sigs[s] for s in node.fanins], mask)
    return sigs


def resimulate_cone(net: LutNetwork, stim: StimulusSet, base_sigs: dict[str, int],
                    changed: "set[str] | frozenset[str]") -> dict[str, int]:
    """Re-evaluate only the transitive fanout of the changed nodes.

    base_sigs must come from a network that agrees with `net` outside the
    cone of `changed`.
    """
    affected = set()
    frontier = [c for c in changed if c in net.nodes]
    while frontier:
        name = frontier.pop()
        if name in affected:
            continue
        affected.add(name)
        for consumer in net.fanouts.get(name, ()):
            if consumer not in affected:
                frontier.append(consumer)
    sigs = dict(base_sigs)
    mask = (1 << stim.count) - 1
    for node in topological_order(net):
        if node.output in affected:
            sigs[node.output] = _eval_node(node.function,
                                           [sigs[s] for s in node.fanins], mask)
    return sigs


@dataclass(frozen=True)
class OutputSignatures:
    outputs: tuple[str, ...]
    values: tuple[int, ...]
    count: int

    def by_name(self) -> dict[str, int]:
        return dict(zip(self.outputs, self.values))


def output_signatures(net: LutNetwork, sigs: dict[str, int], count: int) -> OutputSignatures:
    return OutputSignatures(tuple(net.primary_outputs),
                            tuple(sigs[po] for po in net.primary_outputs), count)


def _check_compatible(exact: OutputSignatures, approx: OutputSignatures) -> None:
    if exact.count != approx.count:
        raise ValueError("signature vector counts differ")
    if set(exact.outputs) != set(approx.outputs):
        raise ValueError("output name sets differ")


def error_rate(exact: OutputSignatures, approx: OutputSignatures) -> float:
    """Fraction of vectors on which any output bit differs."""
    _check_compatible(exact, approx)
    a = approx.by_name()
    diff = 0
    for po, sig in zip(exact.outputs, exact.values):
        diff |= sig ^ a[po]
    return diff.bit_count() / exact.count


def _unpack(sig: int, count: int) -> np.ndarray:
    data = sig.to_bytes((count + 7) // 8, "little")
    bits = np.unpackbits(np.frombuffer(data, dtype=np.uint8), bitorder="little")
    return bits[:count]


def _word_values(out: OutputSignatures, weights: dict[str, int]) -> np.ndarray:
    values = np.zeros(out.count, dtype=np.uint64)
    for po, sig in zip(out.outputs, out.values):
        w = np.uint64(weights[po])
        values |= _unpack(sig, out.count).astype(np.uint64) << w
    return values


def mred(exact: OutputSignatures, approx: OutputSignatures,
         word: WordSpec = WordSpec()) -> float:
    """Mean relative error of the output words over all vectors.

    The per-vector denominator is clamped to 1 so exact value 0 still
    contributes a finite term.
    """
    _check_compatible(exact, approx)
    if len(exact.outputs) > 63:
        raise ValueError("word interpretation limited to 63 outputs")
    weights = word.weights(exact.outputs)
    y = _word_values(exact, weights)
    approx_aligned = OutputSignatures(exact.outputs,
                                      tuple(approx.by_name()[po] for po in exact.outputs),
                                      approx.count)
    yh = _word_values(approx_aligned, weights)
    num = np.abs(yh.astype(np.int64) - y.astype(np.int64))
    den = np.maximum(y, np.uint64(1)).astype(np.int64)
    # exact accumulation: integer numerator totals grouped by denominator,
    # then one rational sum, so the result is independent of vector order
    acc = Fraction(0)
    if num.size and int(num.max()) * num.size < 2**53:
        uniq, inv = np.unique(den, return_inverse=True)
        totals = np.bincount(inv, weights=num.astype(np.float64))
        for d, t in zip(uniq, totals):
            if t:
                acc += Fraction(int(t), int(d))
    else:
        by_den: dict[int, int] = {}
        for n_i, d_i in zip(num.tolist(), den.tolist()):
            by_den[d_i] = by_den.get(d_i, 0) + n_i
        for d_i, t in sorted(by_den.items()):
            acc += Fraction(t, d_i)
    return float(acc / exact.count)


def compute_metric(metric: str, exact: OutputSignatures, approx: OutputSignatures,
                   word: WordSpec = WordSpec()) -> float:
    if metric == "er":
        return error_rate(exact, approx)
    if metric == "mred":
        return mred(exact, approx, word)
    raise ValueError(f"unknown metric {metric!r}")


@dataclass(frozen=True)
class ErrorReport:
    er: float
    mred: float | None
    mode: str
    sample_count: int
    seed: int | None
    word: WordSpec

    def value(self, metric: str) -> float:
        if metric == "er":
            return self.er
        if metric == "mred":
            if self.mred is None:
                raise ValueError("word interpretation unavailable")
            return self.mred
        raise ValueError(f"unknown metric {metric!r}")


def error_report(exact: OutputSignatures, approx: OutputSignatures,
                 stim: StimulusSet, word: WordSpec = WordSpec()) -> ErrorReport:
    er = error_rate(exact, approx)
    rel = mred(exact, approx, word) if len(exact.outputs) <= 63 else None
    return ErrorReport(er, rel, stim.mode, stim.count, stim.seed, word)
