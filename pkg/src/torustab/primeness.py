"""Projection-level primeness witnesses.

Both filters depend only on the embedded graph, hence are constant on
unsensed equivalence classes: a 2-edge-cut of the underlying multigraph
witnesses compositeness, and for links a straight-ahead component meeting
at most one mixed vertex witnesses splitness.  These are necessary
obstructions aligned with published projection tables, not a full
topological primeness decision.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

from .errors import DomainError
from .maps import (
    LabelledMap,
    Multigraph,
    component_count,
    multigraph,
    straight_ahead_components,
)

__all__ = ["PrimenessReport", "find_two_edge_cut", "split_witnessed", "is_prime"]


@dataclass(frozen=True)
class PrimenessReport:
    """Outcome of the primeness filters for one projection.

    ``two_edge_cut`` holds 0-based indices into ``multigraph(m).edges``;
    ``split_component`` a 1-based straight-ahead component id.
    """

    two_edge_cut: tuple[int, int] | None
    split_component: int | None
    prime: bool

    def witness_json(self) -> dict | None:
        if self.prime:
            return None
        w: dict = {}
        if self.two_edge_cut is not None:
            w["two_edge_cut"] = list(self.two_edge_cut)
        if self.split_component is not None:
            w["split_component"] = self.split_component
        return w


def _connected_without(g: Multigraph, removed: tuple[int, int]) -> bool:
    adj: list[list[int]] = [[] for _ in range(g.vertex_count + 1)]
    for idx, (u, v) in enumerate(g.edges):
        if idx in removed:
            continue
        adj[u].append(v)
        adj[v].append(u)
    seen = bytearray(g.vertex_count + 1)
    seen[1] = 1
    stack = [1]
    count = 1
    while stack:
        u = stack.pop()
        for v in adj[u]:
            if not seen[v]:
                seen[v] = 1
                count += 1
                stack.append(v)
    return count == g.vertex_count


def find_two_edge_cut(g: Multigraph) -> tuple[int, int] | None:
    """First (lexicographically, by edge index) pair of edges whose removal
    disconnects ``g``, or None.  All pairs are tested directly; at the sizes
    handled here that is cheap, and determinism buys byte-identical
    rejection certificates across runs."""
    if g.vertex_count < 1:
        raise DomainError("empty multigraph")
    if not _connected_without(g, (-1, -1)):
        raise DomainError("2-edge-cut search expects a connected multigraph")
    if g.vertex_count == 1:
        return None
    for pair in combinations(range(len(g.edges)), 2):
        if not _connected_without(g, pair):
            return pair
    return None


def split_witnessed(m: LabelledMap) -> int | None:
    """Smallest straight-ahead component participating in at most one mixed
    vertex, or None.  Components never meeting a mixed vertex count as
    witnesses (they participate in zero)."""
    comps = straight_ahead_components(m)
    if len(comps) < 2:
        raise DomainError("splitness witness is defined for links only")
    comp_of: dict[int, int] = {}
    for k, orb in enumerate(comps, start=1):
        for d in orb:
            comp_of[d] = k
    counts = [0] * (len(comps) + 1)
    for v, cyc in enumerate(m.vertex_cycles(), start=1):
        c0, c1 = comp_of[cyc[0]], comp_of[cyc[1]]
        if c0 != c1:
            counts[c0] += 1
            counts[c1] += 1
    for k in range(1, len(comps) + 1):
        if counts[k] <= 1:
            return k
    return None


def is_prime(m: LabelledMap) -> PrimenessReport:
    """Primeness verdict: knots must carry no 2-edge-cut; links additionally
    must not be split-witnessed."""
    cut = find_two_edge_cut(multigraph(m))
    split = split_witnessed(m) if component_count(m) >= 2 else None
    return PrimenessReport(
        two_edge_cut=cut,
        split_component=split,
        prime=cut is None and split is None,
    )
