"""Maximum matchings on the pair conflict graph.

The conflict graph is a general graph (odd cycles happen as soon as three
LUTs share inputs pairwise), so a blossom-based exact matcher is needed;
networkx provides Galil's algorithm via max_weight_matching with the
cardinality flag. On top of that, several near-alternative solutions are
produced by repeatedly deleting one randomly chosen edge of the previous
solution and matching again; the deletions accumulate within one search
sequence.
"""
from __future__ import annotations

import random
from dataclasses import dataclass

import networkx as nx

from .pairs import ConflictGraph, PairCandidate


@dataclass(frozen=True)
class Matching:
    edges: tuple[PairCandidate, ...]

    @property
    def size(self) -> int:
        return len(self.edges)

    @property
    def keys(self) -> tuple[tuple[str, str], ...]:
        return tuple(sorted(tuple(sorted(e.members)) for e in self.edges))


def _solve(edge_map: dict[tuple[str, str], PairCandidate]) -> Matching:
    g = nx.Graph()
    for key in sorted(edge_map):
        g.add_edge(*key)
    mate = nx.max_weight_matching(g, maxcardinality=True)
    chosen = sorted(tuple(sorted(pair)) for pair in mate)
    return Matching(tuple(edge_map[key] for key in chosen))


def maximum_matching(graph: ConflictGraph) -> Matching:
    """One maximum-cardinality matching, deterministic for a given graph."""
    edge_map = {tuple(sorted(e.members)): e for e in graph.edges}
    if not edge_map:
        return Matching(())
    return _solve(edge_map)


def k_random_matchings(graph: ConflictGraph, k: int, rng_seed: int) -> list[Matching]:
    """Up to k maximum matchings under accumulating random edge deletions.

    After each solution one uniformly chosen edge of that solution is
    removed from the working graph before the next search. Stops early
    once no edges remain; solutions may repeat and the caller is free to
    deduplicate.
    """
    if k < 1:
        raise ValueError("k must be at least 1")
    rng = random.Random(rng_seed)
    edge_map = {tuple(sorted(e.members)): e for e in graph.edges}
    out: list[Matching] = []
    for _ in range(k):
        if not edge_map:
            break
        m = _solve(edge_map)
        out.append(m)
        victim = rng.choice(m.keys)
        del edge_map[victim]
    return out
