"""Dart permutations and the projection-level structure of 4-regular maps.

A map is encoded on the dart set ``H = {1, ..., 4N}`` by a pair of
permutations: a fixed-point-free involution ``alpha`` pairing the two darts
of each edge, and a vertex rotation ``sigma`` whose cycles (all of length 4)
give the cyclic order of darts around vertices.  The face permutation is
``phi = sigma * alpha`` and its cycles are the oriented face boundary walks.

Composition is a *right* action throughout the package:
``compose(p, q)(h) == q(p(h))`` (first ``p``, then ``q``).

Everything here is pure and immutable; raw 1-indexed image lists (with a
dummy entry at index 0) are used internally for the hot enumeration paths.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import DomainError, StructureError

__all__ = [
    "Perm",
    "LabelledMap",
    "Multigraph",
    "compose",
    "inverse",
    "conjugate",
    "cycles",
    "standard_sigma",
    "face_permutation",
    "is_connected",
    "euler_genus",
    "component_count",
    "has_monogon",
    "has_loop",
    "multigraph",
    "mixed_vertices",
    "straight_ahead_components",
]


# ------------------------------------------------------------------
# Raw helpers on 1-indexed image lists (entry 0 unused).
# These carry no validation and are shared by the hot search loops.
# ------------------------------------------------------------------


def _compose_raw(p: Sequence[int], q: Sequence[int]) -> list[int]:
    # right action: first p, then q
    n = len(p) - 1
    return [0] + [q[p[i]] for i in range(1, n + 1)]


def _invert_raw(p: Sequence[int]) -> list[int]:
    n = len(p) - 1
    inv = [0] * (n + 1)
    for i in range(1, n + 1):
        inv[p[i]] = i
    return inv


def _count_cycles_raw(p: Sequence[int]) -> int:
    n = len(p) - 1
    seen = bytearray(n + 1)
    cnt = 0
    for i in range(1, n + 1):
        if not seen[i]:
            cnt += 1
            j = i
            while not seen[j]:
                seen[j] = 1
                j = p[j]
    return cnt


def _cycles_raw(p: Sequence[int]) -> list[tuple[int, ...]]:
    # each cycle starts at its minimal element; cycles sorted by that element
    n = len(p) - 1
    seen = bytearray(n + 1)
    out: list[tuple[int, ...]] = []
    for i in range(1, n + 1):
        if not seen[i]:
            cur = []
            j = i
            while not seen[j]:
                seen[j] = 1
                cur.append(j)
                j = p[j]
            out.append(tuple(cur))  # i is minimal: darts > i are still unseen
    return out


def _standard_sigma_raw(n: int) -> list[int]:
    sigma = [0] * (4 * n + 1)
    for v in range(n):
        a = 4 * v + 1
        sigma[a] = a + 1
        sigma[a + 1] = a + 2
        sigma[a + 2] = a + 3
        sigma[a + 3] = a
    return sigma


def _is_connected_raw(sigma: Sequence[int], alpha: Sequence[int]) -> bool:
    n = len(sigma) - 1
    if n == 0:
        return True
    seen = bytearray(n + 1)
    seen[1] = 1
    stack = [1]
    count = 1
    while stack:
        u = stack.pop()
        for v in (sigma[u], alpha[u]):
            if not seen[v]:
                seen[v] = 1
                count += 1
                stack.append(v)
    return count == n


def _orbits_raw(gens: Sequence[Sequence[int]], n: int) -> list[tuple[int, ...]]:
    """Orbits of {1..n} under a list of permutations, sorted by minimum."""
    seen = bytearray(n + 1)
    orbits: list[tuple[int, ...]] = []
    for i in range(1, n + 1):
        if seen[i]:
            continue
        seen[i] = 1
        stack = [i]
        orb = [i]
        while stack:
            u = stack.pop()
            for g in gens:
                v = g[u]
                if not seen[v]:
                    seen[v] = 1
                    orb.append(v)
                    stack.append(v)
        orb.sort()
        orbits.append(tuple(orb))
    return orbits


# ------------------------------------------------------------------
# Public permutation type and arithmetic
# ------------------------------------------------------------------


class Perm:
    """A permutation of ``{1..n}`` stored as an image list.

    ``Perm(images)`` takes the images of ``1..n`` in order (no dummy
    entry); this is also the serialization used in all dataset files.
    """

    __slots__ = ("_img",)

    def __init__(self, images: Iterable[int]):
        img = (0, *images)
        n = len(img) - 1
        seen = bytearray(n + 1)
        for v in img[1:]:
            if not isinstance(v, int) or not 1 <= v <= n or seen[v]:
                raise StructureError(f"not a bijection on 1..{n}: {img[1:]}")
            seen[v] = 1
        self._img = img

    @classmethod
    def _from_raw(cls, raw: Sequence[int]) -> "Perm":
        """Trusted constructor from a 1-indexed image list (entry 0 ignored)."""
        p = object.__new__(cls)
        p._img = tuple(raw[: len(raw)])
        return p

    @classmethod
    def identity(cls, n: int) -> "Perm":
        return cls._from_raw(list(range(n + 1)))

    @classmethod
    def from_cycles(cls, n: int, cyc: Iterable[Iterable[int]]) -> "Perm":
        """Build a permutation of {1..n} from disjoint cycles; absent darts are fixed."""
        img = list(range(n + 1))
        for c in cyc:
            c = list(c)
            for i, d in enumerate(c):
                img[d] = c[(i + 1) % len(c)]
        return cls(img[1:])

    @property
    def size(self) -> int:
        return len(self._img) - 1

    @property
    def images(self) -> tuple[int, ...]:
        """Images of 1..n; the canonical serialization of this permutation."""
        return self._img[1:]

    def __call__(self, h: int) -> int:
        return self._img[h]

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Perm) and self._img == other._img

    def __hash__(self) -> int:
        return hash(self._img)

    def __repr__(self) -> str:
        return f"Perm.from_cycles({self.size}, {[list(c) for c in cycles(self)]})"

    def is_involution(self) -> bool:
        img = self._img
        return all(img[img[h]] == h for h in range(1, len(img)))

    def is_fixed_point_free_involution(self) -> bool:
        img = self._img
        return all(img[h] != h and img[img[h]] == h for h in range(1, len(img)))


def compose(p: Perm, q: Perm) -> Perm:
    """Right-action composition: ``compose(p, q)(h) == q(p(h))``."""
    if p.size != q.size:
        raise StructureError(f"size mismatch: {p.size} vs {q.size}")
    return Perm._from_raw(_compose_raw(p._img, q._img))


def inverse(p: Perm) -> Perm:
    return Perm._from_raw(_invert_raw(p._img))


def conjugate(p: Perm, relabel: Perm) -> Perm:
    """Conjugation ``relabel * p * relabel^-1`` in the right-action convention,
    i.e. ``result(h) == relabel^-1(p(relabel(h)))``.  Preserves cycle type."""
    if p.size != relabel.size:
        raise StructureError(f"size mismatch: {p.size} vs {relabel.size}")
    rl = relabel._img
    inv = _invert_raw(rl)
    pi = p._img
    return Perm._from_raw([0] + [inv[pi[rl[h]]] for h in range(1, len(pi))])


def cycles(p: Perm) -> list[tuple[int, ...]]:
    """Cycle decomposition; each cycle starts at its minimal dart, cycles
    sorted by that dart.  This deterministic normal form is relied on by all
    downstream canonical comparisons."""
    return _cycles_raw(p._img)


def standard_sigma(n: int) -> Perm:
    """The standard vertex rotation: n consecutive 4-cycles
    (4v-3, 4v-2, 4v-1, 4v).  Vertex of dart h is ceil(h/4)."""
    if n < 1:
        raise DomainError(f"need at least one vertex, got n={n}")
    return Perm._from_raw(_standard_sigma_raw(n))


# ------------------------------------------------------------------
# Labelled maps
# ------------------------------------------------------------------


@dataclass(frozen=True)
class LabelledMap:
    """A 4-regular labelled map: dart set {1..4n}, edge involution ``alpha``,
    vertex rotation ``sigma`` (every cycle of length exactly 4)."""

    n: int
    alpha: Perm
    sigma: Perm

    def __post_init__(self) -> None:
        if self.alpha.size != 4 * self.n or self.sigma.size != 4 * self.n:
            raise StructureError(
                f"dart set must have size 4n={4 * self.n}, "
                f"got alpha on {self.alpha.size}, sigma on {self.sigma.size}"
            )
        if not self.alpha.is_fixed_point_free_involution():
            raise StructureError("alpha must be a fixed-point-free involution")
        if any(len(c) != 4 for c in cycles(self.sigma)):
            raise StructureError("every sigma cycle must have length 4")

    @classmethod
    def from_alpha_pairs(
        cls, n: int, pairs: Iterable[tuple[int, int]], sigma: Perm | None = None
    ) -> "LabelledMap":
        """Convenience constructor from the edge pairs of alpha; sigma
        defaults to the standard rotation."""
        img = [0] * (4 * n + 1)
        for a, b in pairs:
            img[a] = b
            img[b] = a
        return cls(n=n, alpha=Perm(img[1:]), sigma=sigma or standard_sigma(n))

    def vertex_cycles(self) -> list[tuple[int, int, int, int]]:
        """Sigma cycles rotated to start at their minimal dart, sorted by it.
        Vertex v (1-based) is the v-th entry."""
        return cycles(self.sigma)  # type: ignore[return-value]

    def dart_vertex(self) -> dict[int, int]:
        """Map dart -> 1-based vertex index."""
        out: dict[int, int] = {}
        for v, cyc in enumerate(self.vertex_cycles(), start=1):
            for d in cyc:
                out[d] = v
        return out

    def has_standard_sigma(self) -> bool:
        return self.sigma._img == tuple(_standard_sigma_raw(self.n))


@dataclass(frozen=True)
class Multigraph:
    """Underlying abstract multigraph: 1-based vertices, edges as unordered
    pairs; parallel edges and loops permitted."""

    vertex_count: int
    edges: tuple[tuple[int, int], ...]

    def __post_init__(self) -> None:
        for u, v in self.edges:
            if not (1 <= u <= self.vertex_count and 1 <= v <= self.vertex_count):
                raise StructureError(f"edge ({u},{v}) outside 1..{self.vertex_count}")


# ------------------------------------------------------------------
# Projection-level operations
# ------------------------------------------------------------------


def face_permutation(m: LabelledMap) -> Perm:
    """phi = sigma * alpha; its cycles are the oriented face boundary walks."""
    return compose(m.sigma, m.alpha)


def is_connected(m: LabelledMap) -> bool:
    """True iff the group generated by alpha and sigma has a single dart orbit."""
    return _is_connected_raw(m.sigma._img, m.alpha._img)


def euler_genus(m: LabelledMap) -> int:
    """Genus from Euler's formula V - E + F = 2 - 2g.

    For a torus candidate this equals 1 exactly when the face permutation
    has n cycles.
    """
    if not is_connected(m):
        raise DomainError("genus is defined for connected maps only")
    v = _count_cycles_raw(m.sigma._img)
    e = _count_cycles_raw(m.alpha._img)
    f = _count_cycles_raw(_compose_raw(m.sigma._img, m.alpha._img))
    chi = v - e + f
    if chi % 2:
        raise StructureError(f"odd Euler characteristic {chi} on a valid map")
    return (2 - chi) // 2


def component_count(m: LabelledMap) -> int:
    """Number of straight-ahead components: half the cycle count of
    rho = sigma^2 * alpha."""
    sigma2 = _compose_raw(m.sigma._img, m.sigma._img)
    rho = _compose_raw(sigma2, m.alpha._img)
    ncyc = _count_cycles_raw(rho)
    if ncyc % 2:
        raise StructureError("rho must have an even number of cycles")
    return ncyc // 2


def straight_ahead_components(m: LabelledMap) -> list[tuple[int, ...]]:
    """Dart orbits under alpha and sigma^2, sorted by minimal dart.
    Component k (1-based) of the projected curve is the k-th orbit."""
    sigma2 = _compose_raw(m.sigma._img, m.sigma._img)
    return _orbits_raw([m.alpha._img, sigma2], 4 * m.n)


def has_monogon(m: LabelledMap) -> bool:
    """True iff some face has degree 1, i.e. phi has a fixed point."""
    sigma, alpha = m.sigma._img, m.alpha._img
    return any(alpha[sigma[h]] == h for h in range(1, 4 * m.n + 1))


def has_loop(m: LabelledMap) -> bool:
    """True iff some edge joins a vertex to itself (its darts share a sigma
    cycle).  Uses the constant-time block test when sigma is standard."""
    alpha = m.alpha._img
    if m.has_standard_sigma():
        return any((h - 1) >> 2 == (alpha[h] - 1) >> 2 for h in range(1, 4 * m.n + 1))
    vert = m.dart_vertex()
    return any(vert[h] == vert[alpha[h]] for h in range(1, 4 * m.n + 1))


def multigraph(m: LabelledMap) -> Multigraph:
    """One vertex per sigma cycle, one edge per alpha orbit; edges listed in
    increasing order of their minimal dart."""
    vert = m.dart_vertex()
    alpha = m.alpha._img
    edges = []
    for h in range(1, 4 * m.n + 1):
        if h < alpha[h]:
            u, v = vert[h], vert[alpha[h]]
            edges.append((u, v) if u <= v else (v, u))
    return Multigraph(vertex_count=m.n, edges=tuple(edges))


def mixed_vertices(m: LabelledMap) -> set[int]:
    """Vertices whose four darts touch at least two straight-ahead components.

    For a 4-regular map the two strands through a vertex are the sigma^2
    orbits {h0, h2} and {h1, h3}, so it suffices to compare the components
    of two sigma-consecutive darts.
    """
    comp_of: dict[int, int] = {}
    for k, orb in enumerate(straight_ahead_components(m), start=1):
        for d in orb:
            comp_of[d] = k
    mixed = set()
    for v, cyc in enumerate(m.vertex_cycles(), start=1):
        if comp_of[cyc[0]] != comp_of[cyc[1]]:
            mixed.add(v)
    return mixed
