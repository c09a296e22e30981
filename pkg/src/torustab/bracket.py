"""State-sum evaluation of the generalized genus-one bracket.

For a diagram (P, b) a state picks one of two smoothings per crossing; the
smoothed diagram is a disjoint union of embedded circles, each either
contractible or essential on the torus.  The bracket is

    sum over states s of  a^(A(s)-B(s)) * (-a^2 - a^-2)^gamma * x^delta,

where A/B count 0/1 entries of s and gamma/delta count contractible and
essential circles of the smoothing.  All ingredients are computed from the
permutation pair: smoothings are involutions pairing darts inside vertex
blocks, circles are cycles of alpha followed by the smoothing, and
contractibility is GF(2) membership of a circle's edge-parity vector in the
span of the face boundary vectors (valid on the torus because every state
circle is embedded).

The smoothing geometry of a state depends on b and s only through the XOR
t = b XOR s, so a table of (gamma, delta) indexed by t is precomputed once
per projection and reused for every crossing assignment.  All arithmetic is
exact over the integers.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

from .diagrams import Diagram, writhe
from .errors import DomainError, ResourceError, StructureError
from .maps import LabelledMap, Perm, component_count, face_permutation

__all__ = [
    "LaurentPoly",
    "BracketPoly",
    "GeometryTable",
    "F2FaceBasis",
    "Skeleton",
    "smoothing_involution",
    "face_basis",
    "circle_geometry",
    "precompute_geometry",
    "evaluate_bracket",
    "x_polynomial",
    "skeleton",
    "canonical_key",
]

GEOMETRY_CAP = 24  # 2^n table entries; far beyond the tabulated range


# ------------------------------------------------------------------
# Exact polynomial arithmetic
# ------------------------------------------------------------------


class LaurentPoly:
    """An integer Laurent polynomial in ``a``: exponent -> coefficient,
    zero coefficients never stored."""

    __slots__ = ("_c",)

    def __init__(self, coeffs: Mapping[int, int] | None = None):
        self._c = {int(e): int(c) for e, c in (coeffs or {}).items() if c}

    @classmethod
    def _trusted(cls, coeffs: dict[int, int]) -> "LaurentPoly":
        p = object.__new__(cls)
        p._c = coeffs
        return p

    def items(self) -> list[tuple[int, int]]:
        """(exponent, coefficient) pairs in increasing exponent order."""
        return sorted(self._c.items())

    def coeff(self, e: int) -> int:
        return self._c.get(e, 0)

    def coeff_tuple(self) -> tuple[int, ...]:
        """Nonzero coefficients in increasing exponent order (the skeleton
        datum: exponents forgotten, pattern kept)."""
        return tuple(c for _, c in self.items())

    def __bool__(self) -> bool:
        return bool(self._c)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, LaurentPoly) and self._c == other._c

    def __hash__(self) -> int:
        return hash(tuple(self.items()))

    def __add__(self, other: "LaurentPoly") -> "LaurentPoly":
        out = dict(self._c)
        for e, c in other._c.items():
            s = out.get(e, 0) + c
            if s:
                out[e] = s
            else:
                out.pop(e, None)
        return LaurentPoly._trusted(out)

    def __mul__(self, other: "LaurentPoly") -> "LaurentPoly":
        out: dict[int, int] = {}
        for e1, c1 in self._c.items():
            for e2, c2 in other._c.items():
                e = e1 + e2
                s = out.get(e, 0) + c1 * c2
                if s:
                    out[e] = s
                else:
                    out.pop(e, None)
        return LaurentPoly._trusted(out)

    def scaled(self, factor: int) -> "LaurentPoly":
        if factor == 0:
            return LaurentPoly()
        return LaurentPoly._trusted({e: c * factor for e, c in self._c.items()})

    def shifted(self, k: int) -> "LaurentPoly":
        """Multiplication by a^k."""
        return LaurentPoly._trusted({e + k: c for e, c in self._c.items()})

    def mirrored(self) -> "LaurentPoly":
        """The substitution a -> a^-1."""
        return LaurentPoly._trusted({-e: c for e, c in self._c.items()})

    def __str__(self) -> str:
        if not self._c:
            return "0"
        parts = []
        for e, c in self.items():
            mono = "" if e == 0 else ("a" if e == 1 else f"a^{e}")
            if e == 0:
                term = str(c)
            elif c == 1:
                term = mono
            elif c == -1:
                term = "-" + mono
            else:
                term = f"{c}*{mono}"
            parts.append(term)
        out = parts[0]
        for term in parts[1:]:
            out += " - " + term[1:] if term.startswith("-") else " + " + term
        return out

    def to_json_dict(self) -> dict[str, int]:
        return {str(e): c for e, c in self.items()}

    @classmethod
    def from_json_dict(cls, d: Mapping[str, int]) -> "LaurentPoly":
        return cls({int(e): int(c) for e, c in d.items()})


def _laurent_pow(p: LaurentPoly, k: int) -> LaurentPoly:
    out = LaurentPoly({0: 1})
    for _ in range(k):
        out = out * p
    return out


class BracketPoly:
    """A polynomial in ``x`` whose coefficients are Laurent polynomials in
    ``a``; zero coefficient polynomials never stored."""

    __slots__ = ("_p",)

    def __init__(self, parts: Mapping[int, LaurentPoly] | None = None):
        self._p = {int(m): q for m, q in (parts or {}).items() if q}

    def items(self) -> list[tuple[int, LaurentPoly]]:
        """(x-degree, coefficient polynomial) pairs in increasing degree."""
        return sorted(self._p.items())

    def part(self, m: int) -> LaurentPoly:
        return self._p.get(m, LaurentPoly())

    def x_degrees(self) -> list[int]:
        return sorted(self._p)

    def __bool__(self) -> bool:
        return bool(self._p)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, BracketPoly) and self._p == other._p

    def __hash__(self) -> int:
        return hash(tuple(self.items()))

    def mirrored(self) -> "BracketPoly":
        """The substitution a -> a^-1 applied to every coefficient."""
        return BracketPoly({m: q.mirrored() for m, q in self._p.items()})

    def scaled_shifted(self, factor: int, shift: int) -> "BracketPoly":
        """Multiplication by ``factor * a^shift``."""
        return BracketPoly(
            {m: q.scaled(factor).shifted(shift) for m, q in self._p.items()}
        )

    def __str__(self) -> str:
        if not self._p:
            return "0"
        parts = []
        for m, q in self.items():
            if m == 0:
                parts.append(f"({q})")
            else:
                parts.append(f"({q})*x" + ("" if m == 1 else f"^{m}"))
        return " + ".join(parts)

    def serialize_bytes(self) -> bytes:
        """Deterministic sorted monomial list; the comparison/serialization
        form used to build classification keys."""
        chunks = []
        for m, q in self.items():
            coeffs = ",".join(f"{e}:{c}" for e, c in q.items())
            chunks.append(f"{m}={coeffs}")
        return ";".join(chunks).encode("ascii")

    def to_json_dict(self) -> dict[str, dict[str, int]]:
        return {str(m): q.to_json_dict() for m, q in self.items()}

    @classmethod
    def from_json_dict(cls, d: Mapping[str, Mapping[str, int]]) -> "BracketPoly":
        return cls({int(m): LaurentPoly.from_json_dict(q) for m, q in d.items()})


# ------------------------------------------------------------------
# GF(2) face span and smoothing geometry
# ------------------------------------------------------------------


@dataclass(frozen=True)
class F2FaceBasis:
    """Row-reduced GF(2) basis of the span of face boundary parity vectors,
    as integer bitmasks over edge indices."""

    rows: tuple[int, ...]
    num_edges: int

    def contains(self, vec: int) -> bool:
        x = vec
        for r in self.rows:
            x = min(x, x ^ r)
        return x == 0

    @property
    def rank(self) -> int:
        return len(self.rows)


def _edge_bits(p: LabelledMap) -> list[int]:
    """Per dart, the bitmask of its edge; edges indexed by increasing
    minimal dart."""
    alpha = p.alpha._img
    bit = [0] * (4 * p.n + 1)
    eid = 0
    for h in range(1, 4 * p.n + 1):
        if h < alpha[h]:
            bit[h] = bit[alpha[h]] = 1 << eid
            eid += 1
    return bit


def _reduce_rows(rows: list[int]) -> tuple[int, ...]:
    basis: list[int] = []
    for vec in rows:
        x = vec
        for r in basis:
            x = min(x, x ^ r)
        if x:
            basis.append(x)
            basis.sort(reverse=True)
    # eliminate each leading bit from the other rows (full row reduction)
    for i, r in enumerate(basis):
        lead = 1 << (r.bit_length() - 1)
        for j in range(len(basis)):
            if j != i and basis[j] & lead:
                basis[j] ^= r
    basis.sort(reverse=True)
    return tuple(basis)


def face_basis(p: LabelledMap) -> F2FaceBasis:
    """Mod-2 edge-traversal vectors of the face boundary walks, reduced to a
    GF(2) basis.  On a torus projection the rank is n - 1 (the faces carry a
    single relation: their sum vanishes)."""
    bit = _edge_bits(p)
    phi = face_permutation(p)
    seen = bytearray(4 * p.n + 1)
    vectors = []
    for i in range(1, 4 * p.n + 1):
        if not seen[i]:
            mask = 0
            j = i
            while not seen[j]:
                seen[j] = 1
                mask ^= bit[j]
                j = phi(j)
            vectors.append(mask)
    return F2FaceBasis(rows=_reduce_rows(vectors), num_edges=2 * p.n)


def smoothing_involution(p: LabelledMap, t: Sequence[int]) -> Perm:
    """The involution pairing darts inside each vertex block according to the
    smoothing bits ``t``: for the vertex cycle (h0 h1 h2 h3), bit 0 pairs
    (h0 h1)(h2 h3) and bit 1 pairs (h1 h2)(h3 h0).

    For a diagram with crossing bits b in state s, the smoothing involution
    is obtained at ``t = b XOR s``.
    """
    if len(t) != p.n:
        raise StructureError(f"need {p.n} smoothing bits, got {len(t)}")
    img = [0] * (4 * p.n + 1)
    for v, (h0, h1, h2, h3) in enumerate(p.vertex_cycles()):
        if t[v]:
            img[h1], img[h2] = h2, h1
            img[h3], img[h0] = h0, h3
        else:
            img[h0], img[h1] = h1, h0
            img[h2], img[h3] = h3, h2
    return Perm._from_raw(img)


def _trace_circles(
    alpha: Sequence[int], tau: Sequence[int], edge_bit: Sequence[int], basis: F2FaceBasis
) -> tuple[int, int]:
    """Count (contractible, essential) circles of the smoothed diagram whose
    dart graph has alpha-edges and tau-edges."""
    n = len(alpha) - 1
    seen = bytearray(n + 1)
    gamma = 0
    delta = 0
    for d0 in range(1, n + 1):
        if seen[d0]:
            continue
        mask = 0
        length = 0
        d = d0
        while not seen[d]:
            seen[d] = 1
            seen[alpha[d]] = 1  # the mirror-orientation cycle
            mask ^= edge_bit[d]
            length += 1
            d = tau[alpha[d]]
        # a circle traverses each edge at most once, so parity = membership
        assert mask.bit_count() == length, "state circle traversed an edge twice"
        if basis.contains(mask):
            gamma += 1
        else:
            delta += 1
    return gamma, delta


def circle_geometry(
    p: LabelledMap, t: Sequence[int], basis: F2FaceBasis
) -> tuple[int, int]:
    """(contractible, essential) circle counts of the smoothing ``t``.  The
    circle total is half the cycle count of alpha followed by the smoothing
    involution."""
    tau = smoothing_involution(p, t)
    return _trace_circles(p.alpha._img, tau._img, _edge_bits(p), basis)


@dataclass(frozen=True)
class GeometryTable:
    """Per-projection table of (gamma, delta) over all smoothing bit vectors
    t, indexed by the integer with bit v-1 equal to t's entry for vertex v.
    Independent of any crossing assignment."""

    n: int
    gammas: tuple[int, ...]
    deltas: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.gammas) != 1 << self.n or len(self.deltas) != 1 << self.n:
            raise StructureError("geometry table must have 2^n entries")

    @staticmethod
    def index(t: Sequence[int]) -> int:
        idx = 0
        for v, bit in enumerate(t):
            idx |= (1 if bit else 0) << v
        return idx

    def entry(self, t: Sequence[int]) -> tuple[int, int]:
        i = self.index(t)
        return self.gammas[i], self.deltas[i]


def precompute_geometry(p: LabelledMap, max_n: int = GEOMETRY_CAP) -> GeometryTable:
    """Smoothing geometry for all 2^n bit vectors of one projection.  One
    table serves every crossing assignment of that projection."""
    if p.n > max_n:
        raise ResourceError(
            f"geometry table would need 2^{p.n} entries (cap: 2^{max_n})"
        )
    alpha = p.alpha._img
    edge_bit = _edge_bits(p)
    basis = face_basis(p)
    vcycles = p.vertex_cycles()
    n_darts = 4 * p.n
    tau = [0] * (n_darts + 1)
    gammas = []
    deltas = []
    for t_int in range(1 << p.n):
        for v, (h0, h1, h2, h3) in enumerate(vcycles):
            if (t_int >> v) & 1:
                tau[h1], tau[h2] = h2, h1
                tau[h3], tau[h0] = h0, h3
            else:
                tau[h0], tau[h1] = h1, h0
                tau[h2], tau[h3] = h3, h2
        g, d = _trace_circles(alpha, tau, edge_bit, basis)
        gammas.append(g)
        deltas.append(d)
    return GeometryTable(n=p.n, gammas=tuple(gammas), deltas=tuple(deltas))


# ------------------------------------------------------------------
# Bracket, normalization, skeleton, classification keys
# ------------------------------------------------------------------

_LOOP_FACTOR = LaurentPoly({2: -1, -2: -1})  # weight of a contractible circle


def evaluate_bracket(
    p: LabelledMap, b: Sequence[int], table: GeometryTable
) -> BracketPoly:
    """The bracket of the diagram (p, b) as a single pass over the geometry
    table: state s contributes a^(n - 2*popcount(s)) times the circle weights
    stored for t = b XOR s."""
    n = p.n
    if len(b) != n or table.n != n:
        raise StructureError("crossing bits, projection and table sizes differ")
    b_int = GeometryTable.index(b)
    gammas, deltas = table.gammas, table.deltas

    # bucket the 2^n states by their (delta, gamma, popcount) triple and
    # expand each bucket once; exponents never collide across buckets with
    # equal delta unless summed exactly
    counts: dict[tuple[int, int, int], int] = {}
    for t_int in range(1 << n):
        key = (deltas[t_int], gammas[t_int], (b_int ^ t_int).bit_count())
        counts[key] = counts.get(key, 0) + 1

    loop_powers: dict[int, LaurentPoly] = {0: LaurentPoly({0: 1})}

    def loop_pow(k: int) -> LaurentPoly:
        if k not in loop_powers:
            loop_powers[k] = loop_pow(k - 1) * _LOOP_FACTOR
        return loop_powers[k]

    parts: dict[int, dict[int, int]] = {}
    for (delta, gamma, pc), cnt in sorted(counts.items()):
        shift = n - 2 * pc  # A(s) - B(s)
        acc = parts.setdefault(delta, {})
        for e, c in loop_pow(gamma)._c.items():
            s = acc.get(e + shift, 0) + c * cnt
            if s:
                acc[e + shift] = s
            else:
                acc.pop(e + shift, None)
    return BracketPoly(
        {m: LaurentPoly._trusted(acc) for m, acc in parts.items() if acc}
    )


def x_polynomial(d: Diagram, table: GeometryTable) -> BracketPoly:
    """The writhe-normalized polynomial for knot diagrams: the bracket
    multiplied by (-a)^(-3w), i.e. sign (-1)^w and exponent shift -3w."""
    if component_count(d.projection) != 1:
        raise DomainError("writhe normalization is defined for knots only")
    w = writhe(d)
    bracket = evaluate_bracket(d.projection, d.bits, table)
    return bracket.scaled_shifted(-1 if w % 2 else 1, -3 * w)


@dataclass(frozen=True)
class Skeleton:
    """Per x-degree, the tuple of nonzero coefficients in increasing
    a-exponent order, canonicalized under a -> a^-1 (tuple reversal) and
    global negation.  A grouping key only: distinct polynomials may share a
    skeleton."""

    entries: tuple[tuple[int, tuple[int, ...]], ...]


def skeleton(poly: BracketPoly) -> Skeleton:
    base = tuple((m, q.coeff_tuple()) for m, q in poly.items())
    variants = [
        base,
        tuple((m, t[::-1]) for m, t in base),
        tuple((m, tuple(-c for c in t)) for m, t in base),
        tuple((m, tuple(-c for c in t[::-1])) for m, t in base),
    ]
    return Skeleton(entries=min(variants))


def _shift_sign_normalized(poly: BracketPoly) -> BracketPoly:
    """Optional comparison normalization: quotient by overall ±a^k factors.
    Shifts so the minimal a-exponent over all x-degrees is zero and makes
    the first nonzero coefficient (in (x-degree, a-exponent) order)
    positive."""
    if not poly:
        return poly
    min_exp = min(e for _, q in poly.items() for e, _ in q.items())
    first = poly.items()[0][1].items()[0][1]
    return poly.scaled_shifted(-1 if first < 0 else 1, -min_exp)


def canonical_key(
    d: Diagram, table: GeometryTable, normalize_shift: bool = False
) -> bytes:
    """Classification key of a diagram: the serialization of its invariant,
    minimized over the substitution a -> a^-1 so that mirror conventions
    cannot split classes.  Knots use the writhe-normalized polynomial, links
    the bare bracket (component orientations are never chosen).

    ``normalize_shift`` additionally quotients by overall ±a^k factors; it
    is off by default and exists only for comparisons against externally
    normalized tables.
    """
    if component_count(d.projection) == 1:
        poly = x_polynomial(d, table)
    else:
        poly = evaluate_bracket(d.projection, d.bits, table)
    candidates = [poly, poly.mirrored()]
    if normalize_shift:
        candidates = [_shift_sign_normalized(q) for q in candidates]
    return min(q.serialize_bytes() for q in candidates)
