"""Diagrams on a fixed projection: crossing bits, the bigon rule, the
over/under participation filter for links, and writhe.

A diagram is a projection plus one bit per vertex.  For the vertex cycle
(h0 h1 h2 h3), written from its minimal dart, bit 0 means the strand
{h0, h2} passes over and bit 1 means {h1, h3} does.  Flipping every bit
produces the mirror diagram; when tabulation quotients by that symmetry the
first vertex's bit is pinned to 0.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Sequence

from .errors import DomainError, StructureError
from .maps import (
    LabelledMap,
    component_count,
    face_permutation,
    straight_ahead_components,
)

__all__ = [
    "Diagram",
    "BigonFace",
    "assignments",
    "bigon_faces",
    "bigon_reducible",
    "passes_bigon_rule",
    "participation_ok",
    "writhe",
    "diagram_symmetries",
    "canonical_bits",
]


@dataclass(frozen=True)
class Diagram:
    """A projection with a crossing bit per vertex (vertex v's bit is
    ``bits[v-1]``)."""

    projection: LabelledMap
    bits: tuple[int, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "bits", tuple(int(b) for b in self.bits))
        if len(self.bits) != self.projection.n:
            raise StructureError(
                f"need {self.projection.n} crossing bits, got {len(self.bits)}"
            )
        if any(b not in (0, 1) for b in self.bits):
            raise StructureError("crossing bits must be 0 or 1")

    def bits_string(self) -> str:
        return "".join(str(b) for b in self.bits)


@dataclass(frozen=True)
class BigonFace:
    """A degree-2 face: the 2-cycle (i j) of phi with i < j, together with
    the vertices of its two darts.  Its boundary edges are {sigma(i), j} and
    {sigma(j), i}.

    ``dart_parities`` holds the positions mod 2 of i and j inside their
    vertices' minimal-dart-first rotation cycles.  The crossing bits encode
    over/under relative to those base points, so the reduction criterion
    must compare bits relative to these parities.
    """

    darts: tuple[int, int]
    vertices: tuple[int, int]
    dart_parities: tuple[int, int]


def assignments(p: LabelledMap, global_switch: bool) -> list[tuple[int, ...]]:
    """All 2^n crossing-bit vectors, or the half with the first vertex's bit
    fixed to 0 when quotienting by the global crossing switch.  Lexicographic
    order, so output is deterministic."""
    vectors = list(product((0, 1), repeat=p.n))
    if global_switch:
        vectors = [b for b in vectors if b[0] == 0]
    return vectors


def bigon_faces(p: LabelledMap) -> list[BigonFace]:
    """All 2-cycles of the face permutation, ordered by their smaller dart."""
    phi = face_permutation(p)
    vert = p.dart_vertex()
    parity = {}
    for cyc in p.vertex_cycles():
        for pos, dart in enumerate(cyc):
            parity[dart] = pos & 1
    out = []
    for i in range(1, 4 * p.n + 1):
        j = phi(i)
        if j > i and phi(j) == i:
            out.append(
                BigonFace(
                    darts=(i, j),
                    vertices=(vert[i], vert[j]),
                    dart_parities=(parity[i], parity[j]),
                )
            )
    return out


def bigon_reducible(d: Diagram, f: BigonFace) -> bool:
    """Whether the bigon supports an immediate Reidemeister-II style
    cancellation.

    The two bigon edges {sigma(i), j} and {sigma(j), i} swap local strands
    between the vertices, so the cancelable configuration (one geometric
    strand over at both crossings) occurs exactly when

        bits[u] XOR bits[v] XOR parity(i) XOR parity(j) = 1.

    When i and j sit at equal-parity positions of their rotation cycles
    this reduces to "the two crossing bits differ".
    """
    u, v = f.vertices
    if u == v:
        raise DomainError(
            "bigon incident twice to one vertex has no two-vertex reduction"
        )
    pi, pj = f.dart_parities
    return (d.bits[u - 1] ^ d.bits[v - 1] ^ pi ^ pj) == 1


def passes_bigon_rule(d: Diagram) -> bool:
    """True iff no bigon face with two distinct vertices is reducible.
    Degenerate bigons (both darts on one vertex) do not contribute; they
    cannot occur at all on loopless projections."""
    for f in bigon_faces(d.projection):
        u, v = f.vertices
        if u != v and bigon_reducible(d, f):
            return False
    return True


def _strand_components(p: LabelledMap) -> dict[int, int]:
    comp_of: dict[int, int] = {}
    for k, orb in enumerate(straight_ahead_components(p), start=1):
        for dart in orb:
            comp_of[dart] = k
    return comp_of


def participation_ok(d: Diagram) -> bool:
    """Link filter: every straight-ahead component must occur at least once
    as the over strand and at least once as the under strand among the mixed
    vertices.  A component with a one-sided (or empty) record fails."""
    p = d.projection
    comps = straight_ahead_components(p)
    if len(comps) < 2:
        raise DomainError("participation filter is defined for links only")
    comp_of = _strand_components(p)
    over_seen = [False] * (len(comps) + 1)
    under_seen = [False] * (len(comps) + 1)
    for v, cyc in enumerate(p.vertex_cycles(), start=1):
        c0, c1 = comp_of[cyc[0]], comp_of[cyc[1]]
        if c0 == c1:
            continue
        over, under = (c0, c1) if d.bits[v - 1] == 0 else (c1, c0)
        over_seen[over] = True
        under_seen[under] = True
    return all(
        over_seen[k] and under_seen[k] for k in range(1, len(comps) + 1)
    )


def diagram_symmetries(p: LabelledMap) -> list[tuple[tuple[int, ...], tuple[int, ...]]]:
    """The action of the projection's self-equivalences on crossing bits.

    Every relabelling (or relabelling plus orientation reversal) that maps
    the labelled pair onto itself arises as a rooted normalization whose
    output reproduces the input exactly, so scanning all 8n rooted
    normalizations finds the whole action.  Each symmetry is returned as
    ``(vertex_map, flips)``: it carries a diagram with bits b to the diagram
    with ``new_bits[vertex_map[v]] = b[v] XOR flips[v]`` (0-based v).  A bit
    flips when the symmetry sends the vertex's minimal dart to the other
    strand of the image vertex; over/under data is untouched by surface
    homeomorphisms either way, so this transport is the entire action.

    The identity is always present: the input must itself be a rooted
    normal form (e.g. a canonical encoding), which the root-1 traversal
    reproduces verbatim.
    """
    from .canonical import _bfs_relabel  # local import to avoid a cycle

    alpha_img = p.alpha._img
    sigma_ref = list(p.sigma._img)
    alpha_ref = list(alpha_img)
    sigma_inv = [0] * len(sigma_ref)
    for h in range(1, len(sigma_ref)):
        sigma_inv[sigma_ref[h]] = h

    vcycles = p.vertex_cycles()
    vert = p.dart_vertex()
    pos_in_vertex = {}
    for cyc in vcycles:
        for idx, dart in enumerate(cyc):
            pos_in_vertex[dart] = idx

    found: set[tuple[tuple[int, ...], tuple[int, ...]]] = set()
    for s_img in (sigma_ref, sigma_inv):
        for root in range(1, 4 * p.n + 1):
            res = _bfs_relabel(s_img, alpha_img, root)
            if res is None:
                raise DomainError("diagram symmetries require a connected map")
            alpha_new, s_new = res
            if alpha_new != alpha_ref or s_new != sigma_ref:
                continue
            # reconstruct the relabelling realized by this traversal
            pi = [0] * (4 * p.n + 1)
            pi[root] = 1
            nxt = 2
            order = [root]
            head = 0
            while head < len(order):
                h = order[head]
                head += 1
                for nb in (s_img[h], alpha_img[h]):
                    if not pi[nb]:
                        pi[nb] = nxt
                        order.append(nb)
                        nxt += 1
            vertex_map = []
            flips = []
            for cyc in vcycles:
                image = pi[cyc[0]]
                vertex_map.append(vert[image])
                flips.append(pos_in_vertex[image] & 1)
            found.add((tuple(vertex_map), tuple(flips)))
    return sorted(found)


def canonical_bits(
    bits: tuple[int, ...],
    symmetries: list[tuple[tuple[int, ...], tuple[int, ...]]],
    global_switch: bool,
) -> tuple[int, ...]:
    """Lexicographically minimal bit vector in the orbit of ``bits`` under
    the projection symmetries, and under global complementation when the
    mirror quotient is enabled.  Assignments sharing this representative
    support the same diagram class."""
    best = None
    for vertex_map, flips in symmetries:
        image = [0] * len(bits)
        for v, b in enumerate(bits):
            image[vertex_map[v] - 1] = b ^ flips[v]
        cand = tuple(image)
        if best is None or cand < best:
            best = cand
        if global_switch:
            cand = tuple(1 - b for b in cand)
            if cand < best:
                best = cand
    assert best is not None
    return best


def writhe(d: Diagram) -> int:
    """Sum of crossing signs of the knot diagram.

    The knot is oriented by the straight-ahead traversal started at the
    smallest dart.  At each vertex let o and u be the outgoing darts of the
    over and under strands; the crossing sign is +1 when sigma(u) = o and -1
    otherwise.  The per-vertex signs do not depend on where the traversal
    starts, and the global crossing switch negates the total.
    """
    p = d.projection
    if component_count(p) != 1:
        raise DomainError("writhe is defined for knot diagrams only")
    sigma = p.sigma._img
    alpha = p.alpha._img
    # outgoing darts of one orientation: orbit of dart 1 under
    # h -> sigma^2(alpha(h))  (traverse the edge, then go straight ahead)
    out = set()
    h = 1
    while h not in out:
        out.add(h)
        h = sigma[sigma[alpha[h]]]
    total = 0
    for v, cyc in enumerate(p.vertex_cycles(), start=1):
        h0, h1, h2, h3 = cyc
        s0 = h0 if h0 in out else h2
        s1 = h1 if h1 in out else h3
        o, u = (s0, s1) if d.bits[v - 1] == 0 else (s1, s0)
        total += 1 if sigma[u] == o else -1
    return total
