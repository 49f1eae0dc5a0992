"""Enumeration of LUT pairs that can share one dual-output LUT.

Three shapes qualify, classified on the support-normalized network:

* shared6: two 6-input LUTs with identical input sets,
* shared5_66: two 6-input LUTs sharing exactly five inputs,
* shared5_65: a 6-input LUT and a 5-input LUT whose inputs are a subset
  of the former's.

Pairs where one member directly feeds the other are dropped (the shared
cell would have to drive its own select pin). Nodes with four or fewer
inputs are never pair members; exact decomposition covers those.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import TYPE_CHECKING, Optional

from .netlist import LutNetwork

if TYPE_CHECKING:  # pragma: no cover
    from .dualout import DualOutputConfig


class MergeType(enum.Enum):
    SHARED6 = "shared6"
    SHARED5_66 = "shared5_66"
    SHARED5_65 = "shared5_65"


@dataclass
class PairCandidate:
    f_node: str
    g_node: str
    merge_type: MergeType
    shared_inputs: frozenset[str]
    f_unique: Optional[str] = None
    g_unique: Optional[str] = None
    config: "Optional[DualOutputConfig]" = None
    estimated_error: Optional[float] = None

    @property
    def key(self) -> tuple[str, str]:
        return (self.f_node, self.g_node)

    @property
    def members(self) -> tuple[str, str]:
        return (self.f_node, self.g_node)


def _classify(net: LutNetwork, a: str, b: str) -> Optional[PairCandidate]:
    na, nb = net.nodes[a], net.nodes[b]
    sa, sb = set(na.fanins), set(nb.fanins)
    if len(sa) <= 4 or len(sb) <= 4:
        return None
    if b in sa or a in sb:
        return None
    shared = sa & sb
    if len(sa) == 6 and len(sb) == 6:
        if sa == sb:
            f, g = sorted((a, b))
            return PairCandidate(f, g, MergeType.SHARED6, frozenset(sa))
        if len(shared) == 5:
            f, g = sorted((a, b))
            fu = next(iter(set(net.nodes[f].fanins) - shared))
            gu = next(iter(set(net.nodes[g].fanins) - shared))
            return PairCandidate(f, g, MergeType.SHARED5_66, frozenset(shared),
                                 f_unique=fu, g_unique=gu)
        return None
    if {len(sa), len(sb)} == {5, 6}:
        f, g = (a, b) if len(sa) == 6 else (b, a)
        big, small = set(net.nodes[f].fanins), set(net.nodes[g].fanins)
        if small <= big:
            fu = next(iter(big - small))
            return PairCandidate(f, g, MergeType.SHARED5_65, frozenset(small),
                                 f_unique=fu)
    return None


def enumerate_pairs(net: LutNetwork) -> list[PairCandidate]:
    """All mergable pairs of a support-normalized network, sorted by name."""
    by_support: dict[frozenset[str], list[str]] = {}
    by_subset5: dict[frozenset[str], set[str]] = {}
    for name, node in net.nodes.items():
        supp = frozenset(node.fanins)
        if len(supp) == 5:
            by_support.setdefault(supp, []).append(name)
            by_subset5.setdefault(supp, set()).add(name)
        elif len(supp) == 6:
            by_support.setdefault(supp, []).append(name)
            for drop in supp:
                by_subset5.setdefault(supp - {drop}, set()).add(name)

    seen: set[tuple[str, str]] = set()
    out: list[PairCandidate] = []

    def consider(a: str, b: str) -> None:
        key = tuple(sorted((a, b)))
        if key in seen:
            return
        seen.add(key)
        cand = _classify(net, a, b)
        if cand is not None:
            out.append(cand)

    for names in by_support.values():
        if len(names) > 1:
            snames = sorted(names)
            for i, a in enumerate(snames):
                for b in snames[i + 1:]:
                    consider(a, b)
    for names in by_subset5.values():
        if len(names) > 1:
            snames = sorted(names)
            for i, a in enumerate(snames):
                for b in snames[i + 1:]:
                    consider(a, b)

    out.sort(key=lambda c: c.key)
    return out


@dataclass
class ConflictGraph:
    """Candidate pairs as edges over the participating LUTs.

    A LUT can be merged at most once (its output is driven by one dual
    output port), so any two candidates sharing a member conflict; picking
    a compatible set of merges is a matching on this graph.
    """
    vertices: tuple[str, ...]
    edges: tuple[PairCandidate, ...] = field(default_factory=tuple)


def _better(a: PairCandidate, b: PairCandidate) -> PairCandidate:
    """Collapse rule for parallel candidates over the same two nodes."""
    if a.estimated_error is not None and b.estimated_error is not None:
        if a.estimated_error != b.estimated_error:
            return a if a.estimated_error < b.estimated_error else b
    ha = a.config.structural_hd if a.config is not None else None
    hb = b.config.structural_hd if b.config is not None else None
    if ha is not None and hb is not None and ha != hb:
        return a if ha < hb else b
    return a


def build_conflict_graph(candidates: list[PairCandidate]) -> ConflictGraph:
    by_key: dict[tuple[str, str], PairCandidate] = {}
    for cand in candidates:
        key = tuple(sorted(cand.members))
        if key in by_key:
            by_key[key] = _better(by_key[key], cand)
        else:
            by_key[key] = cand
    edges = tuple(by_key[k] for k in sorted(by_key))
    vertices = sorted({v for e in edges for v in e.members})
    return ConflictGraph(tuple(vertices), edges)
