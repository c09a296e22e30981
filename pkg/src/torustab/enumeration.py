"""Enumeration of candidate torus projections for a given crossing number.

With the vertex rotation fixed in standard form, every projection class has
a representative whose edge involution is a perfect matching of the darts,
so enumeration reduces to backtracking over fixed-point-free involutions.
A canonical-construction-path rule ("activated vertices") suppresses most of
the relabelling redundancy: the smallest unused dart is paired either with
an unused dart on an already activated vertex or with the smallest unused
dart of the first vertex not yet activated.  Completed matchings are
filtered (connectedness, torus face count, and the configured loop/monogon
switches) and deduplicated by unsensed canonical encoding.

Pruning strength only affects speed, never the produced class set; the
unpruned brute-force check over all matchings lives in the self-check suite.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator

from .canonical import CanonicalEncoding, _min_normal_form
from .errors import DomainError
from .maps import (
    LabelledMap,
    Perm,
    _invert_raw,
    _is_connected_raw,
    _standard_sigma_raw,
    standard_sigma,
)

__all__ = [
    "EnumConfig",
    "enumerate_matchings",
    "is_candidate",
    "enumerate_projection_classes",
]


@dataclass(frozen=True)
class EnumConfig:
    """Projection-level switches.  The defaults (no loop edges, no monogon
    faces) reproduce the constraints used for all benchmark counts."""

    allow_loops: bool = False
    forbid_monogons: bool = True
    genus: int = 1

    def __post_init__(self) -> None:
        if self.genus != 1:
            raise DomainError("only genus 1 enumeration is supported")


def _torus_face_count_ok(sigma: list[int], alpha: list[int], n: int) -> bool:
    # count cycles of phi = sigma*alpha without materializing phi
    seen = bytearray(4 * n + 1)
    faces = 0
    for i in range(1, 4 * n + 1):
        if not seen[i]:
            faces += 1
            j = i
            while not seen[j]:
                seen[j] = 1
                j = alpha[sigma[j]]
    return faces == n


def _leaf_ok(sigma: list[int], alpha: list[int], n: int, config: EnumConfig) -> bool:
    # cheap scans first: the search-tree construction already guarantees
    # them, but the brute-force stream relies on them to reject early
    if not config.allow_loops:
        if any((h - 1) >> 2 == (alpha[h] - 1) >> 2 for h in range(1, 4 * n + 1)):
            return False
    if config.forbid_monogons:
        if any(alpha[sigma[h]] == h for h in range(1, 4 * n + 1)):
            return False
    if not _torus_face_count_ok(sigma, alpha, n):
        return False
    return _is_connected_raw(sigma, alpha)


def _accepted_matchings_raw(n: int, config: EnumConfig) -> Iterator[list[int]]:
    """Backtracking core; yields a fresh alpha image list per accepted
    matching, in deterministic depth-first order.

    Activated vertices always form the prefix 1..k (vertex blocks are
    consecutive dart ranges, so the smallest unused dart can never skip an
    unsaturated prefix vertex); the activation state is just the count k.

    The face cycles of phi = sigma*alpha close monotonically as alpha pairs
    are assigned (each pair (i, j) fixes phi at sigma^-1(i) and sigma^-1(j)),
    so a branch dies once more than n faces close, or n close while darts
    remain.  This incremental count only prunes; acceptance is always decided
    by the from-scratch leaf check, so correctness is independent of the
    pruning bookkeeping.
    """
    n_darts = 4 * n
    sigma = _standard_sigma_raw(n)
    sigma_inv = _invert_raw(sigma)
    alpha = [0] * (n_darts + 1)
    allow_loops = config.allow_loops
    forbid_monogons = config.forbid_monogons

    # phi-chain endpoints; meaningful only at chain heads/tails
    chain_start = list(range(n_darts + 1))
    chain_end = list(range(n_darts + 1))
    closed = 0  # fully closed phi cycles so far

    def search(unused: int, k: int) -> Iterator[list[int]]:
        nonlocal closed

        if unused == 0:
            # the closed count only pre-filters; acceptance is re-derived
            if closed == n and _leaf_ok(sigma, alpha, n, config):
                yield list(alpha)
            return

        low = unused & -unused
        i = low.bit_length()
        vi = (i - 1) >> 2
        k2 = k if vi < k else vi + 1

        # candidate partners: unused darts on activated vertices (the block
        # prefix), optionally without i's own block (loops) and without the
        # two partners sigma(i), sigma^-1(i) that would close a monogon
        cand_mask = unused & ((1 << (4 * k2)) - 1) & ~low
        if allow_loops:
            if forbid_monogons:
                cand_mask &= ~(1 << (sigma[i] - 1))
                cand_mask &= ~(1 << (sigma_inv[i] - 1))
        else:
            cand_mask &= ~(15 << (4 * vi))

        cands = []
        while cand_mask:
            b = cand_mask & -cand_mask
            cands.append(b.bit_length())
            cand_mask ^= b
        if k2 < n:
            cands.append(4 * k2 + 1)  # fresh vertex: all four darts unused

        for j in cands:
            alpha[i] = j
            alpha[j] = i
            next_unused = unused & ~low & ~(1 << (j - 1))
            vj = (j - 1) >> 2

            # phi edge u1 -> j
            u1 = sigma_inv[i]
            s1 = chain_start[u1]
            if s1 == j:
                closed += 1
                merged1 = None
            else:
                e1 = chain_end[j]
                chain_end[s1] = e1
                chain_start[e1] = s1
                merged1 = (s1, u1, j, e1)
            # phi edge u2 -> i
            u2 = sigma_inv[j]
            s2 = chain_start[u2]
            if s2 == i:
                closed += 1
                merged2 = None
            else:
                e2 = chain_end[i]
                chain_end[s2] = e2
                chain_start[e2] = s2
                merged2 = (s2, u2, i, e2)

            if closed < n or (closed == n and next_unused == 0):
                yield from search(next_unused, k2 if vj < k2 else k2 + 1)

            if merged2 is None:
                closed -= 1
            else:
                s2, u2, w2, e2 = merged2
                chain_end[s2] = u2
                chain_start[e2] = w2
            if merged1 is None:
                closed -= 1
            else:
                s1, u1, w1, e1 = merged1
                chain_end[s1] = u1
                chain_start[e1] = w1
            alpha[i] = 0
            alpha[j] = 0

    yield from search((1 << n_darts) - 1, 0)


def enumerate_matchings(n: int, config: EnumConfig = EnumConfig()) -> Iterator[LabelledMap]:
    """Stream of accepted labelled candidates (alpha, standard sigma), in
    deterministic depth-first order.  Candidates are not yet deduplicated up
    to unsensed equivalence."""
    if n < 1:
        raise DomainError(f"need at least one crossing, got n={n}")
    sigma = standard_sigma(n)
    for alpha_raw in _accepted_matchings_raw(n, config):
        yield LabelledMap(n=n, alpha=Perm._from_raw(alpha_raw), sigma=sigma)


def is_candidate(m: LabelledMap, config: EnumConfig = EnumConfig()) -> bool:
    """The candidate-projection test for labelled pairs (alpha, standard
    sigma): connected, torus face count, and the configured monogon and loop
    constraints."""
    if not m.has_standard_sigma():
        raise DomainError("candidate test expects the standard vertex rotation")
    return _leaf_ok(list(m.sigma._img), list(m.alpha._img), m.n, config)


def enumerate_projection_classes(
    n: int, config: EnumConfig = EnumConfig()
) -> list[CanonicalEncoding]:
    """All unsensed candidate projection classes with n crossings, sorted by
    the canonical comparison key.  Sound, complete and duplication-free."""
    if n < 1:
        raise DomainError(f"need at least one crossing, got n={n}")
    sigma = _standard_sigma_raw(n)
    sigma_inv = _invert_raw(sigma)
    found: set[tuple[tuple[int, ...], tuple[int, ...]]] = set()
    for alpha_raw in _accepted_matchings_raw(n, config):
        res = _min_normal_form(sigma, sigma_inv, alpha_raw)
        assert res is not None  # leaves are connected by construction
        found.add(res)
    return [
        CanonicalEncoding(n=n, alpha_images=a, sigma_images=s)
        for a, s in sorted(found)
    ]
