"""Seeded property suites, runnable from the CLI via ``--seed-check``.

Each check validates an internal consistency property without reference to
any tabulated counts: canonical-form invariance under random relabellings,
agreement of the pruned enumeration with a brute-force matching stream, the
circle-count conservation law, agreement of the table-driven bracket with a
slow per-state evaluator, and the mirror identity.  All randomness is drawn
from an explicitly seeded generator so failures are reproducible.
"""

from __future__ import annotations

import random
from typing import Callable, Iterator

from .bracket import BracketPoly, LaurentPoly, evaluate_bracket, face_basis, precompute_geometry
from .canonical import unsensed_canonical
from .diagrams import Diagram, assignments
from .enumeration import EnumConfig, enumerate_projection_classes, is_candidate
from .maps import (
    LabelledMap,
    Perm,
    component_count,
    conjugate,
    cycles,
    face_permutation,
    inverse,
    is_connected,
    standard_sigma,
)
from .primeness import is_prime

__all__ = [
    "all_matchings",
    "brute_force_classes",
    "random_connected_map",
    "slow_bracket",
    "run_property_checks",
]


def all_matchings(n: int) -> Iterator[list[int]]:
    """Every fixed-point-free involution on 4n darts, as an image list.
    The brute-force counterpart of the pruned matching search."""
    darts = 4 * n
    alpha = [0] * (darts + 1)

    def rec(avail: list[int]) -> Iterator[list[int]]:
        if not avail:
            yield list(alpha)
            return
        i = avail[0]
        rest = avail[1:]
        for k, j in enumerate(rest):
            alpha[i] = j
            alpha[j] = i
            yield from rec(rest[:k] + rest[k + 1 :])
            alpha[i] = 0
            alpha[j] = 0

    yield from rec(list(range(1, darts + 1)))


def brute_force_classes(n: int, config: EnumConfig = EnumConfig()):
    """Unsensed candidate classes obtained from the full matching stream,
    with no construction-path pruning at all."""
    from .enumeration import _leaf_ok
    from .maps import _invert_raw, _standard_sigma_raw
    from .canonical import _min_normal_form

    sigma = _standard_sigma_raw(n)
    sigma_inv = _invert_raw(sigma)
    found = set()
    for alpha_raw in all_matchings(n):
        if _leaf_ok(sigma, alpha_raw, n, config):
            res = _min_normal_form(sigma, sigma_inv, alpha_raw)
            assert res is not None
            found.add(res)
    return found


def random_connected_map(rng: random.Random, n: int) -> LabelledMap:
    """A uniformly drawn fixed-point-free involution against the standard
    rotation, resampled until connected."""
    sigma = standard_sigma(n)
    while True:
        darts = list(range(1, 4 * n + 1))
        rng.shuffle(darts)
        img = [0] * (4 * n + 1)
        for a, b in zip(darts[0::2], darts[1::2]):
            img[a] = b
            img[b] = a
        m = LabelledMap(n=n, alpha=Perm._from_raw(img), sigma=sigma)
        if is_connected(m):
            return m


def random_relabelling(rng: random.Random, size: int) -> Perm:
    img = list(range(1, size + 1))
    rng.shuffle(img)
    return Perm(img)


def slow_bracket(m: LabelledMap, bits: tuple[int, ...]) -> BracketPoly:
    """Per-state bracket evaluator that never builds a geometry table: for
    every state it derives the two smoothing pairings from the crossing bit
    directly, traces the circles of an explicit edge-list graph, and tests
    contractibility against the face span.  Independent of the XOR
    reindexing used by the fast path."""
    n = m.n
    vcycles = m.vertex_cycles()
    alpha = m.alpha._img
    basis = face_basis(m)
    edge_index = {}
    eid = 0
    for h in range(1, 4 * n + 1):
        if h < alpha[h]:
            edge_index[h] = edge_index[alpha[h]] = eid
            eid += 1

    loop_weight = LaurentPoly({2: -1, -2: -1})
    parts: dict[int, LaurentPoly] = {}
    for state in range(1 << n):
        # smoothing pairings straight from the definition: at a vertex with
        # rotation (h0 h1 h2 h3) and crossing bit b, the state's first
        # smoothing pairs (h_b h_{b+1})(h_{b+2} h_{b+3}) and the second
        # pairs (h_{b+1} h_{b+2})(h_{b+3} h_b)
        pair: dict[int, int] = {}
        a_count = 0
        for v, cyc in enumerate(vcycles):
            b = bits[v]
            s = (state >> v) & 1
            if s == 0:
                a_count += 1
                first, second = (b % 4, (b + 1) % 4), ((b + 2) % 4, (b + 3) % 4)
            else:
                first, second = ((b + 1) % 4, (b + 2) % 4), ((b + 3) % 4, b % 4)
            for x, y in (first, second):
                pair[cyc[x]] = cyc[y]
                pair[cyc[y]] = cyc[x]
        # explicit edge list of the smoothed diagram on the darts
        adj: dict[int, list[int]] = {h: [] for h in range(1, 4 * n + 1)}
        for h in range(1, 4 * n + 1):
            adj[h].append(alpha[h])
            adj[h].append(pair[h])
        seen: set[int] = set()
        gamma = delta = 0
        for h0 in range(1, 4 * n + 1):
            if h0 in seen:
                continue
            stack = [h0]
            comp = set()
            while stack:
                u = stack.pop()
                if u in comp:
                    continue
                comp.add(u)
                stack.extend(adj[u])
            seen |= comp
            # the circle's edges are the alpha pairs it contains
            mask = 0
            for h in comp:
                if alpha[h] in comp and h < alpha[h]:
                    mask |= 1 << edge_index[h]
            if basis.contains(mask):
                gamma += 1
            else:
                delta += 1
        weight = LaurentPoly({2 * a_count - n: 1})
        for _ in range(gamma):
            weight = weight * loop_weight
        parts[delta] = parts.get(delta, LaurentPoly()) + weight
    return BracketPoly(parts)


def _check(name: str, fn: Callable[[], None], verbose: bool) -> bool:
    try:
        fn()
    except AssertionError as exc:
        if verbose:
            print(f"FAIL {name}: {exc}")
        return False
    if verbose:
        print(f"ok   {name}")
    return True


def run_property_checks(seed: int = 20240601, verbose: bool = False) -> bool:
    """Run every property suite; returns True when all pass."""
    rng = random.Random(seed)

    def canonical_invariance() -> None:
        for _ in range(200):
            n = rng.choice((2, 3, 4))
            m = random_connected_map(rng, n)
            enc = unsensed_canonical(m)
            pi = random_relabelling(rng, 4 * n)
            sig = m.sigma if rng.random() < 0.5 else inverse(m.sigma)
            m2 = LabelledMap(n=n, alpha=conjugate(m.alpha, pi), sigma=conjugate(sig, pi))
            assert unsensed_canonical(m2) == enc, (m.alpha.images, pi.images)

    def class_separation() -> None:
        for _ in range(100):
            n = rng.choice((2, 3))
            a, b = random_connected_map(rng, n), random_connected_map(rng, n)
            inv_a = (component_count(a), sorted(len(c) for c in cycles(face_permutation(a))))
            inv_b = (component_count(b), sorted(len(c) for c in cycles(face_permutation(b))))
            if inv_a != inv_b:
                assert unsensed_canonical(a) != unsensed_canonical(b)

    def pruning_oracle() -> None:
        for n in (2, 3):
            pruned = {
                (e.alpha_images, e.sigma_images)
                for e in enumerate_projection_classes(n)
            }
            assert pruned == brute_force_classes(n), f"class sets differ at n={n}"

    def conservation() -> None:
        from .bracket import smoothing_involution
        from .maps import _count_cycles_raw, _compose_raw

        for n in (2, 3, 4):
            for enc in enumerate_projection_classes(n):
                m = enc.labelled_map()
                if not is_prime(m).prime:
                    continue
                table = precompute_geometry(m)
                for t_int in range(1 << n):
                    t = tuple((t_int >> v) & 1 for v in range(n))
                    tau = smoothing_involution(m, t)
                    pi_cycles = _count_cycles_raw(_compose_raw(m.alpha._img, tau._img))
                    g, d = table.gammas[t_int], table.deltas[t_int]
                    assert 2 * (g + d) == pi_cycles, (n, t)

    def bracket_oracle() -> None:
        for n in (2, 3):
            for enc in enumerate_projection_classes(n):
                m = enc.labelled_map()
                if not is_prime(m).prime:
                    continue
                table = precompute_geometry(m)
                for bits in assignments(m, False):
                    fast = evaluate_bracket(m, bits, table)
                    assert fast == slow_bracket(m, bits), (n, bits)

    def mirror_identity() -> None:
        for n in (2, 3):
            for enc in enumerate_projection_classes(n):
                m = enc.labelled_map()
                table = precompute_geometry(m)
                for bits in assignments(m, False):
                    flipped = tuple(1 - b for b in bits)
                    lhs = evaluate_bracket(m, flipped, table)
                    rhs = evaluate_bracket(m, bits, table).mirrored()
                    assert lhs == rhs, (n, bits)

    checks = [
        ("canonical invariance under relabelling and reversal", canonical_invariance),
        ("distinct class invariants give distinct canonical forms", class_separation),
        ("pruned enumeration equals brute-force matching stream", pruning_oracle),
        ("circle-count conservation gamma+delta = #cyc(alpha*tau)/2", conservation),
        ("table-driven bracket equals slow per-state evaluator", bracket_oracle),
        ("mirror identity under the all-crossing switch", mirror_identity),
    ]
    return all(_check(name, fn, verbose) for name, fn in checks)
