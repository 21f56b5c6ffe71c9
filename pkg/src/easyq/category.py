"""Categorical operations on partitions: tensor, composition, involution,
rotation, closure under all four, and bounded-size comparison."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable

import numpy as np

from . import _kernels as K
from .errors import KindMismatch, NothingToRotate, ShapeMismatch, SizeLimitExceeded
from .partitions import (
    BLACK,
    WHITE,
    CategoryLike,
    Partition,
    Product,
    _flip,
    enumerate_partitions,
    identity,
    iter_partitions,
    parse_category,
)

CLOSURE_MAX_POINTS = 8
EQUAL_MAX_POINTS = 10
PRODUCT_MAX_POINTS = 10


@dataclass(frozen=True)
class ComposeResult:
    """Outcome of a composition.

    ``loops`` counts every deleted closed block; ``loops_by_tag`` splits the
    count by block tag (1 or 2) for product partitions, and is ``(loops, 0)``
    otherwise.  When ``zero`` is set the morphism vanishes and ``partition``
    is None.
    """

    partition: Partition | None
    loops: int = 0
    zero: bool = False
    loops_by_tag: tuple[int, int] = field(default=(0, 0))


def _same_kind(a: Partition, b: Partition):
    if a.kind != b.kind:
        raise KindMismatch(f"cannot combine {a.kind} and {b.kind} partitions")


def tensor(a: Partition, b: Partition) -> Partition:
    """Horizontal juxtaposition, ``a`` on the left."""
    _same_kind(a, b)
    k, l = a.k + b.k, a.l + b.l

    def move_a(x):
        return x if x <= a.k else x + b.k

    def move_b(x):
        return x + a.k if x <= b.k else x + a.k + a.l

    blocks = [tuple(map(move_a, blk)) for blk in a.blocks] + [tuple(map(move_b, blk)) for blk in b.blocks]
    colors = None
    if a.colors is not None:
        colors = a.colors[: a.k] + b.colors[: b.k] + a.colors[a.k :] + b.colors[b.k :]
    tags = a.tags + b.tags if a.tags is not None else None
    return Partition(k, l, tuple(blocks), colors, tags).canonicalize()


def compose(a: Partition, b: Partition) -> ComposeResult:
    """The composite ``a ∘ b``: ``b`` (k -> m) is applied first, then ``a`` (m -> l).

    Diagrammatically ``b`` sits on top and its lower row is glued to the
    upper row of ``a``; blocks fuse through glued points.  Glued points must
    carry matching colours after some choice of per-block flips, otherwise
    the result is zero; glued points must also carry matching tags.
    """
    _same_kind(a, b)
    if b.l != a.k:
        raise ShapeMismatch(f"cannot compose {a.k}->{a.l} after {b.k}->{b.l}")
    k, m, l = b.k, b.l, a.l
    nb = len(b.blocks)
    lab_b, lab_a = b.labels(), a.labels()
    parent = list(range(nb + len(a.blocks)))
    parity = [0] * len(parent)

    def find(x):
        if parent[x] == x:
            return x, 0
        r, p = find(parent[x])
        parent[x], parity[x] = r, parity[x] ^ p
        return r, parity[x]

    def color(p: Partition, x: int) -> int:
        return int(p.colors is not None and p.colors[x - 1] == WHITE)

    def tag(p: Partition, lab: list[int], x: int) -> int:
        return p.tags[lab[x - 1]] if p.tags is not None else 0

    for j in range(1, m + 1):
        xb, xa = k + j, j
        if tag(b, lab_b, xb) != tag(a, lab_a, xa):
            return ComposeResult(None, zero=True)
        w = color(b, xb) ^ color(a, xa)
        (ru, pu), (rv, pv) = find(lab_b[xb - 1]), find(nb + lab_a[xa - 1])
        if ru == rv:
            if pu ^ pv != w:
                return ComposeResult(None, zero=True)
        else:
            parent[rv], parity[rv] = ru, pu ^ pv ^ w

    ext = [(lab_b[x - 1], color(b, x), x) for x in range(1, k + 1)]
    ext += [(nb + lab_a[x - 1], color(a, x), x) for x in range(m + 1, m + l + 1)]
    groups: dict[int, list[int]] = {}
    cols = []
    for pos, (node, c, _) in enumerate(ext, start=1):
        r, p = find(node)
        groups.setdefault(r, []).append(pos)
        cols.append(WHITE if c ^ p else BLACK)
    roots = list(groups)

    def node_tag(node):
        if node < nb:
            return b.tags[node] if b.tags is not None else 0
        return a.tags[node - nb] if a.tags is not None else 0

    loops = [0, 0]
    for node in range(len(parent)):
        r, _ = find(node)
        if r == node and r not in groups:
            loops[1 if node_tag(node) == 2 else 0] += 1
    colors = "".join(cols) if a.colors is not None else None
    tags = tuple(node_tag(r) for r in roots) if a.tags is not None else None
    result = Partition(k, l, tuple(tuple(groups[r]) for r in roots), colors, tags).canonicalize()
    return ComposeResult(result, sum(loops), False, tuple(loops))


def involute(p: Partition) -> Partition:
    """Turn the diagram upside down."""
    def move(x):
        return x + p.l if x <= p.k else x - p.k

    colors = p.colors[p.k :] + p.colors[: p.k] if p.colors is not None else None
    blocks = tuple(tuple(map(move, b)) for b in p.blocks)
    return Partition(p.l, p.k, blocks, colors, p.tags).canonicalize()


def rotate(p: Partition) -> Partition:
    """Move the leftmost upper point to the leftmost lower position.

    A bulleted point changes colour on the way (tag-2 points of product
    partitions carry no bullet and stay black).
    """
    if p.k == 0:
        raise NothingToRotate("rotate needs at least one upper point")

    def move(x):
        return p.k if x == 1 else x - 1 if x <= p.k else x

    colors = None
    if p.colors is not None:
        lab = p.labels()
        first = p.colors[0]
        if p.tags is None or p.tags[lab[0]] == 1:
            first = _flip(first)
        colors = p.colors[1 : p.k] + first + p.colors[p.k :]
    blocks = tuple(tuple(map(move, b)) for b in p.blocks)
    return Partition(p.k - 1, p.l + 1, blocks, colors, p.tags).canonicalize()


def rotate_back(p: Partition) -> Partition:
    """Inverse of :func:`rotate` (leftmost lower point back to the upper row)."""
    return involute(rotate(involute(p)))


# -- closure -------------------------------------------------------------------


class _Store:
    """Members grouped by shape, as encoded arrays plus a key set."""

    def __init__(self, colored: bool, tagged: bool):
        self.colored, self.tagged = colored, tagged
        self.keys: dict[tuple[int, int], set] = {}
        self.arrays: dict[tuple[int, int], tuple] = {}

    def add(self, shape, L, C, T):
        """Insert rows; return the genuinely new ones (deduplicated)."""
        if len(L) == 0:
            return None
        seen = self.keys.setdefault(shape, set())
        fresh = []
        for r, key in enumerate(K.keys(L, C, T)):
            if key not in seen:
                seen.add(key)
                fresh.append(r)
        if not fresh:
            return None
        new = (L[fresh], C[fresh], T[fresh])
        old = self.arrays.get(shape)
        self.arrays[shape] = new if old is None else tuple(np.concatenate([o, n]) for o, n in zip(old, new))
        return new


def _mask_colors(C, T, colored):
    if not colored:
        return np.zeros_like(C)
    return np.where(T == 2, 0, C).astype(np.int8)


def closure(generators: Iterable[Partition], max_points: int) -> set[Partition]:
    """Least set of partitions with at most ``max_points`` points containing
    ``generators`` and the identity, closed under tensor, compose, involute
    and rotate (results above the bound are discarded)."""
    gens = list(generators)
    if max_points > CLOSURE_MAX_POINTS:
        raise SizeLimitExceeded(f"closure is limited to {CLOSURE_MAX_POINTS} points")
    if not gens:
        raise ValueError("closure needs at least one generator")
    kinds = {g.kind for g in gens}
    if len(kinds) > 1:
        raise KindMismatch("generators must share a decoration kind")
    colored = gens[0].colors is not None
    tagged = gens[0].tags is not None
    ids = [identity(1, colored)]
    if tagged:
        ids = [Partition(1, 1, ((1, 2),), BLACK * 2 if colored else None, (t,)) for t in (1, 2)]
    store = _Store(colored, tagged)
    frontier: dict = {}
    for g in [*ids, *gens]:
        g = g.canonicalize()
        if g.size > max_points:
            continue
        shape = (g.k, g.l)
        new = store.add(shape, *K.encode([g], g.k, g.l))
        if new is not None:
            frontier[shape] = _cat(frontier.get(shape), new)

    while frontier:
        produced: dict = {}

        def emit(shape, L, C, T, mask=None):
            if mask is not None:
                L, C, T = L[mask], C[mask], T[mask]
            if len(L):
                produced.setdefault(shape, []).append((L, C, T))

        for (k, l), arr in frontier.items():
            emit((l, k), *K.involute(*arr, k, l))
            if k:
                L, C, T = K.rotate(*arr, k, l)
                emit((k - 1, l + 1), L, _mask_colors(C, T, colored), T)
        everything = dict(store.arrays)
        for s1, a1 in everything.items():
            for s2, a2 in everything.items():
                if s1[0] + s1[1] + s2[0] + s2[1] > max_points:
                    continue
                pairs = []
                if s1 in frontier:
                    pairs.append((frontier[s1], a2))
                if s2 in frontier:
                    pairs.append((a1, frontier[s2]))
                for x, y in pairs:
                    emit((s1[0] + s2[0], s1[1] + s2[1]), *K.tensor(x, *s1, y, *s2))
        for (k, m), first in everything.items():
            for (m2, l), second in everything.items():
                if m2 != m or k + l > max_points:
                    continue
                pairs = []
                if (k, m) in frontier:
                    pairs.append((frontier[(k, m)], second))
                if (m, l) in frontier:
                    pairs.append((first, frontier[(m, l)]))
                for x, y in pairs:
                    L, C, T, ok, _, _ = K.compose(x, y, k, m, l)
                    emit((k, l), L, C, T, ok)

        frontier = {}
        for shape, chunks in produced.items():
            L, C, T = (np.concatenate(parts) for parts in zip(*chunks))
            new = store.add(shape, L, C, T)
            if new is not None:
                frontier[shape] = new

    out = set()
    for (k, l), arr in store.arrays.items():
        out.update(K.decode(k, l, *arr, colored, tagged))
    return out


def _cat(old, new):
    if old is None:
        return new
    return tuple(np.concatenate([o, n]) for o, n in zip(old, new))


def members(cat: CategoryLike, max_points: int) -> set[Partition]:
    """All members of ``cat`` with at most ``max_points`` points."""
    cat = parse_category(cat)
    out = set()
    for m in range(max_points + 1):
        for k in range(m + 1):
            out.update(iter_partitions(cat, k, m - k))
    return out


def _first_difference(a: set, b: set):
    diff = a ^ b
    if not diff:
        return None
    return min(diff, key=lambda p: (p.size, p.k, p.sort_key()))


@dataclass(frozen=True)
class Comparison:
    equal: bool
    counterexample: Partition | None = None
    side: str | None = None  # "left" if only in the first argument

    def __bool__(self):
        return self.equal


def category_equal(a, b, max_points: int) -> Comparison:
    """Compare two categories (ids or explicit member sets) on every shape
    with ``k + l <= max_points``."""
    if max_points > EQUAL_MAX_POINTS:
        raise SizeLimitExceeded(f"category comparison is limited to {EQUAL_MAX_POINTS} points")
    sa = a if isinstance(a, (set, frozenset)) else members(a, max_points)
    sb = b if isinstance(b, (set, frozenset)) else members(b, max_points)
    sa = {p for p in sa if p.size <= max_points}
    sb = {p for p in sb if p.size <= max_points}
    bad = _first_difference(sa, sb)
    if bad is None:
        return Comparison(True)
    return Comparison(False, bad, "left" if bad in sa else "right")


def product_enumerate(c1, c2, k: int, l: int) -> list[Partition]:
    """Block-tagged partitions whose tag-1 part lies in ``c1`` and tag-2 part in ``c2``."""
    if k + l > PRODUCT_MAX_POINTS:
        raise SizeLimitExceeded(f"product enumeration is limited to {PRODUCT_MAX_POINTS} points")
    return enumerate_partitions(Product(parse_category(c1), parse_category(c2)), k, l)


def closedness_violation(cat: CategoryLike, max_points: int):
    """First operation result (within the bound) that leaves ``cat``, or None.

    Checks tensor, compose, involute and rotate over all members with at
    most ``max_points`` points.
    """
    cat = parse_category(cat)
    mem = members(cat, max_points)
    by_shape: dict = {}
    for p in mem:
        by_shape.setdefault((p.k, p.l), []).append(p)
    sample = next(iter(mem))
    colored, tagged = sample.colors is not None, sample.tags is not None
    store = _Store(colored, tagged)
    for shape, ps in by_shape.items():
        store.add(shape, *K.encode(ps, *shape))
    arrays = store.arrays

    def check(shape, L, C, T, what):
        if not len(L):
            return None
        known = store.keys.get(shape, set())
        for r, key in enumerate(K.keys(L, C, T)):
            if key not in known:
                p = K.decode(*shape, L[r : r + 1], C[r : r + 1], T[r : r + 1], colored, tagged)[0]
                return what, p
        return None

    for (k, l), arr in arrays.items():
        bad = check((l, k), *K.involute(*arr, k, l), "involute")
        if bad:
            return bad
        if k:
            L, C, T = K.rotate(*arr, k, l)
            bad = check((k - 1, l + 1), L, _mask_colors(C, T, colored), T, "rotate")
            if bad:
                return bad
    for s1, a1 in arrays.items():
        for s2, a2 in arrays.items():
            if sum(s1) + sum(s2) <= max_points:
                bad = check((s1[0] + s2[0], s1[1] + s2[1]), *K.tensor(a1, *s1, a2, *s2), "tensor")
                if bad:
                    return bad
    for (k, m), x in arrays.items():
        for (m2, l), y in arrays.items():
            if m2 == m and k + l <= max_points:
                L, C, T, ok, _, _ = K.compose(x, y, k, m, l)
                bad = check((k, l), L[ok], C[ok], T[ok], "compose")
                if bad:
                    return bad
    return None
