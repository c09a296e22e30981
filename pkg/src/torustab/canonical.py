"""Canonical representatives of labelled maps under relabelling, with or
without orientation reversal.

Relabelling a map conjugates (alpha, sigma) simultaneously; reversing the
orientation additionally replaces sigma by its inverse.  Instead of
minimizing over the full symmetric group, each of the 4N darts is used as
the root of a deterministic first-visit (breadth-first) relabelling, and the
canonical encoding is the lexicographic minimum of the relabelled pairs.
The minimum is taken on the concatenation alpha-images ++ sigma-images.

Two conventions are fixed here and are part of the dataset format version:

* traversal neighbor order is "sigma before alpha";
* the comparison key lists all alpha images before any sigma image.

Any fixed choice gives a complete invariant; stored datasets are only
comparable across runs made with the same choice.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .errors import DomainError, StructureError
from .maps import LabelledMap, Perm, _invert_raw

__all__ = [
    "CanonicalEncoding",
    "rooted_normalize",
    "sensed_canonical",
    "unsensed_canonical",
    "compare_encodings",
]


@dataclass(frozen=True)
class CanonicalEncoding:
    """The canonical (lexicographically minimal rooted) encoding of a map.

    This is a complete invariant of the equivalence class it was computed
    for, stable across runs, and the primary key of projection records.
    """

    n: int
    alpha_images: tuple[int, ...]
    sigma_images: tuple[int, ...]

    @property
    def key(self) -> tuple[int, ...]:
        """The comparison key: alpha images followed by sigma images."""
        return self.alpha_images + self.sigma_images

    def labelled_map(self) -> LabelledMap:
        return LabelledMap(
            n=self.n, alpha=Perm(self.alpha_images), sigma=Perm(self.sigma_images)
        )

    def to_json_dict(self) -> dict:
        return {
            "n": self.n,
            "alpha": list(self.alpha_images),
            "sigma": list(self.sigma_images),
        }

    @classmethod
    def from_json_dict(cls, d: dict) -> "CanonicalEncoding":
        return cls(
            n=int(d["n"]),
            alpha_images=tuple(d["alpha"]),
            sigma_images=tuple(d["sigma"]),
        )


def compare_encodings(a: CanonicalEncoding, b: CanonicalEncoding) -> int:
    """Total order on encodings of equal size: -1, 0 or +1 as ``a`` sorts
    before, equal to, or after ``b`` under the fixed lexicographic key."""
    if a.n != b.n:
        raise StructureError(f"cannot compare encodings with n={a.n} and n={b.n}")
    ka, kb = a.key, b.key
    return (ka > kb) - (ka < kb)


def _bfs_relabel(
    s_img: Sequence[int], alpha_img: Sequence[int], root: int
) -> tuple[list[int], list[int]] | None:
    """Relabel darts by first-visit order of the deterministic traversal.

    The root receives label 1; dequeuing darts in label order, the next
    unused labels go to s(h) first, then alpha(h).  Returns the relabelled
    (alpha, s) image lists, or None when the traversal does not exhaust the
    dart set (disconnected map).
    """
    n = len(s_img) - 1
    new = [0] * (n + 1)  # old dart -> new label
    order = [0] * (n + 1)  # new label -> old dart
    new[root] = 1
    order[1] = root
    nxt = 2
    head = 1
    while head < nxt:
        h = order[head]
        head += 1
        for nb in (s_img[h], alpha_img[h]):
            if not new[nb]:
                new[nb] = nxt
                order[nxt] = nb
                nxt += 1
    if nxt != n + 1:
        return None
    alpha_new = [0] * (n + 1)
    s_new = [0] * (n + 1)
    for old in range(1, n + 1):
        lbl = new[old]
        alpha_new[lbl] = new[alpha_img[old]]
        s_new[lbl] = new[s_img[old]]
    return alpha_new, s_new


def rooted_normalize(m: LabelledMap, root: int, reversed: bool = False) -> LabelledMap:
    """Deterministic relabelling of ``m`` with ``root`` receiving label 1.

    With ``reversed=True`` the traversal (and the stored rotation of the
    output) uses sigma^-1 in place of sigma, so the output is a candidate
    encoding of the orientation-reversed map.
    """
    if not 1 <= root <= 4 * m.n:
        raise DomainError(f"root {root} outside dart set 1..{4 * m.n}")
    s_img = _invert_raw(m.sigma._img) if reversed else list(m.sigma._img)
    res = _bfs_relabel(s_img, m.alpha._img, root)
    if res is None:
        raise DomainError("rooted normalization requires a connected map")
    alpha_new, s_new = res
    return LabelledMap(n=m.n, alpha=Perm._from_raw(alpha_new), sigma=Perm._from_raw(s_new))


def _min_normal_form(
    sigma_img: Sequence[int],
    sigma_inv_img: Sequence[int] | None,
    alpha_img: Sequence[int],
) -> tuple[tuple[int, ...], tuple[int, ...]] | None:
    """Minimum of the rooted normal forms over all roots (and over sigma
    versus sigma^-1 when ``sigma_inv_img`` is given).

    The breadth-first relabelling assigns labels in dequeue order, so the
    relabelled alpha image at position i is known after step i; candidates
    are compared against the current best incrementally and abandoned at the
    first losing position, which keeps one canonicalization close to linear
    per root in practice.  Returns None for a disconnected map.
    """
    n = len(alpha_img) - 1
    best_a: list[int] | None = None
    best_s: list[int] | None = None
    new = [0] * (n + 1)  # old dart -> new label; reset incrementally per root
    order = [0] * (n + 1)  # new label -> old dart
    alpha_new = [0] * (n + 1)
    s_new = [0] * (n + 1)

    rotations = (sigma_img,) if sigma_inv_img is None else (sigma_img, sigma_inv_img)
    for s_img in rotations:
        for root in range(1, n + 1):
            new[root] = 1
            order[1] = root
            nxt = 2
            head = 1
            # state: 0 undecided (equal so far), 1 strictly better than best
            state = 1 if best_a is None else 0
            while head < nxt:
                h = order[head]
                sn = s_img[h]
                an = alpha_img[h]
                if not new[sn]:
                    new[sn] = nxt
                    order[nxt] = sn
                    nxt += 1
                if not new[an]:
                    new[an] = nxt
                    order[nxt] = an
                    nxt += 1
                alpha_new[head] = new[an]
                s_new[head] = new[sn]
                if state == 0:
                    y = best_a[head]  # type: ignore[index]
                    if alpha_new[head] != y:
                        if alpha_new[head] < y:
                            state = 1
                        else:
                            break
                head += 1
            for idx in range(1, nxt):  # clear only the labels just assigned
                new[order[idx]] = 0
            if head < nxt:
                continue  # abandoned: lexicographically worse than best
            if nxt != n + 1:
                return None  # disconnected; every root sees the same orbit
            if state == 0:
                # alpha ties with best; concatenated key falls back to sigma
                if s_new[1:] >= best_s[1:]:  # type: ignore[index]
                    continue
            best_a, alpha_new = alpha_new, (best_a or [0] * (n + 1))
            best_s, s_new = s_new, (best_s or [0] * (n + 1))

    assert best_a is not None and best_s is not None
    return tuple(best_a[1:]), tuple(best_s[1:])


def sensed_canonical(m: LabelledMap) -> CanonicalEncoding:
    """Canonical encoding under relabelling only (orientation preserved):
    the minimum over the 4N rooted normal forms of (alpha, sigma)."""
    res = _min_normal_form(m.sigma._img, None, m.alpha._img)
    if res is None:
        raise DomainError("canonical encoding requires a connected map")
    a, s = res
    return CanonicalEncoding(n=m.n, alpha_images=a, sigma_images=s)


def unsensed_canonical(m: LabelledMap) -> CanonicalEncoding:
    """Canonical encoding under relabelling and orientation reversal: the
    minimum over 8N rooted normal forms, 4N for sigma and 4N for sigma^-1.

    Constant on unsensed equivalence classes and distinct across them, so
    set deduplication on these encodings quotients exactly by unsensed
    equivalence.
    """
    res = _min_normal_form(m.sigma._img, _invert_raw(m.sigma._img), m.alpha._img)
    if res is None:
        raise DomainError("canonical encoding requires a connected map")
    a, s = res
    return CanonicalEncoding(n=m.n, alpha_images=a, sigma_images=s)
