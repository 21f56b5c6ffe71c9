"""Partitions between k upper and l lower points, their decorations, and
enumeration of the standard categories.

Points are numbered 1..k on the upper row (left to right) followed by
k+1..k+l on the lower row (left to right).  Planarity is judged on the
circular word u1..uk, lk..l1, i.e. the lower row is read right to left.
"""

from __future__ import annotations

import enum
import json
import os
from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations, product
from typing import Iterator, Mapping, Union

from .errors import InvalidPartition, ParseError, SizeLimitExceeded

PLAIN_MAX_POINTS = 16
DECORATED_MAX_POINTS = 12

BLACK, WHITE = "b", "w"


def _flip(c: str) -> str:
    return WHITE if c == BLACK else BLACK


@dataclass(frozen=True)
class Partition:
    """A set partition of ``k + l`` points, optionally decorated.

    ``colors`` is a string over ``"bw"`` indexed by point - 1 (bulleted
    partitions).  ``tags`` gives a colour class 1 or 2 per block (free
    product partitions); it is aligned with ``blocks``.  Blocks are always
    stored sorted by minimal element; colours are stored as given, see
    :meth:`canonicalize`.
    """

    k: int
    l: int
    blocks: tuple[tuple[int, ...], ...]
    colors: str | None = None
    tags: tuple[int, ...] | None = None

    def __post_init__(self):
        k, l = self.k, self.l
        if not (isinstance(k, int) and isinstance(l, int)) or k < 0 or l < 0:
            raise InvalidPartition(f"bad shape ({k}, {l})")
        blocks = [tuple(sorted(int(x) for x in b)) for b in self.blocks]
        if any(len(b) == 0 for b in blocks):
            raise InvalidPartition("empty block")
        seen = [x for b in blocks for x in b]
        if sorted(seen) != list(range(1, k + l + 1)):
            if len(seen) != len(set(seen)):
                raise InvalidPartition("blocks overlap")
            raise InvalidPartition(f"blocks do not cover points 1..{k + l}")
        order = sorted(range(len(blocks)), key=lambda t: blocks[t][0])
        object.__setattr__(self, "blocks", tuple(blocks[t] for t in order))
        if self.tags is not None:
            tags = tuple(int(t) for t in self.tags)
            if len(tags) != len(blocks) or any(t not in (1, 2) for t in tags):
                raise InvalidPartition("tags must give 1 or 2 for every block")
            object.__setattr__(self, "tags", tuple(tags[t] for t in order))
        if self.colors is not None:
            colors = self.colors
            if isinstance(colors, Mapping):
                colors = "".join(colors.get(x, colors.get(str(x), BLACK)) for x in range(1, k + l + 1))
            colors = "".join(colors)
            if len(colors) != k + l or set(colors) - {BLACK, WHITE}:
                raise InvalidPartition("colors must be a b/w string with one entry per point")
            object.__setattr__(self, "colors", colors)

    # -- basic views ---------------------------------------------------------

    @property
    def size(self) -> int:
        return self.k + self.l

    @property
    def kind(self) -> str:
        if self.tags is not None:
            return "product"
        if self.colors is not None:
            return "bulleted"
        return "plain"

    @property
    def nu(self) -> int:
        """Number of blocks."""
        return len(self.blocks)

    def labels(self) -> list[int]:
        """Block index of every point, in point order."""
        lab = [0] * self.size
        for t, b in enumerate(self.blocks):
            for x in b:
                lab[x - 1] = t
        return lab

    def upper(self, block) -> tuple[int, ...]:
        return tuple(x for x in block if x <= self.k)

    def lower(self, block) -> tuple[int, ...]:
        return tuple(x for x in block if x > self.k)

    def canonicalize(self) -> Partition:
        """Flip colours block by block so that every block starts black.

        Tag-2 blocks of a product partition carry no bullets and are set to
        black throughout.
        """
        if self.colors is None:
            return self
        cols = list(self.colors)
        for t, b in enumerate(self.blocks):
            if self.tags is not None and self.tags[t] == 2:
                for x in b:
                    cols[x - 1] = BLACK
            elif cols[b[0] - 1] == WHITE:
                for x in b:
                    cols[x - 1] = _flip(cols[x - 1])
        colors = "".join(cols)
        if colors == self.colors:
            return self
        return Partition(self.k, self.l, self.blocks, colors, self.tags)

    def sort_key(self):
        return (self.blocks, self.colors or "", self.tags or ())

    def __repr__(self):
        parts = [f"{self.k}->{self.l}", " ".join("{" + ",".join(map(str, b)) + "}" for b in self.blocks)]
        if self.colors is not None:
            parts.append(self.colors)
        if self.tags is not None:
            parts.append("tags=" + "".join(map(str, self.tags)))
        return "Partition(" + " ".join(parts) + ")"


def canonicalize(p: Partition) -> Partition:
    return p.canonicalize()


def circular_order(k: int, l: int) -> list[int]:
    return list(range(1, k + 1)) + list(range(k + l, k, -1))


def is_noncrossing(p: Partition) -> bool:
    """Stack test on the circular word of the diagram."""
    lab = p.labels()
    seq = [lab[x - 1] for x in circular_order(p.k, p.l)]
    remaining = [len(b) for b in p.blocks]
    stack: list[int] = []
    opened = [False] * len(p.blocks)
    for x in seq:
        remaining[x] -= 1
        if opened[x]:
            if stack[-1] != x:
                return False
            if remaining[x] == 0:
                stack.pop()
        else:
            opened[x] = True
            if remaining[x] > 0:
                stack.append(x)
    return True


# -- categories ----------------------------------------------------------------


class Cat(enum.Enum):
    P = "p"
    NC = "nc"
    P2 = "p2"
    NC2 = "nc2"
    P12 = "p12"
    NC12 = "nc12"
    PEVEN = "p-even"
    NCEVEN = "nc-even"
    PBULLET = "p-bullet"
    NCBULLET = "nc-bullet"
    NCBULLET_EVEN = "nc-bullet-even"

    @property
    def noncrossing(self) -> bool:
        return self.value.startswith("nc")

    @property
    def bulleted(self) -> bool:
        return "bullet" in self.value

    @property
    def rule(self) -> str:
        v = self.value
        if v.endswith("even"):
            return "even"
        if v.endswith("12"):
            return "le2"
        if v.endswith("2"):
            return "pair"
        return "any"

    def block_ok(self, size: int) -> bool:
        return _RULES[self.rule](size)

    def __str__(self):
        return self.value


@dataclass(frozen=True)
class Product:
    """Free product of two categories: blocks carry a colour class 1 or 2."""

    first: Cat
    second: Cat

    def __post_init__(self):
        if not (isinstance(self.first, Cat) and isinstance(self.second, Cat)):
            raise ValueError("free products nest at most one level deep")
        if self.second.bulleted:
            raise ValueError("bullets are only supported on the first factor")

    @property
    def noncrossing(self) -> bool:
        return self.first.noncrossing and self.second.noncrossing

    @property
    def bulleted(self) -> bool:
        return self.first.bulleted

    def __str__(self):
        return f"{self.first}*{self.second}"


@dataclass(frozen=True)
class Intersection:
    members: tuple[Cat, ...]

    def __str__(self):
        return "&".join(str(c) for c in self.members)


CategoryId = Union[Cat, Product]
CategoryLike = Union[Cat, Product, Intersection]

_ALIASES = {
    "peven": "p-even",
    "nceven": "nc-even",
    "pbullet": "p-bullet",
    "ncbullet": "nc-bullet",
    "ncbulleteven": "nc-bullet-even",
    "nc-bulleteven": "nc-bullet-even",
    "nc-bullet_even": "nc-bullet-even",
}


def parse_category(text: str | CategoryLike) -> CategoryLike:
    """Parse ``nc``, ``nc-bullet*nc`` (free product) or ``nc12&nc-even``."""
    if isinstance(text, (Cat, Product, Intersection)):
        return text
    s = text.strip().lower().replace("_", "-")
    if "&" in s:
        return Intersection(tuple(_parse_simple(t) for t in s.split("&")))
    if "*" in s:
        a, b = s.split("*", 1)
        return Product(_parse_simple(a), _parse_simple(b))
    return _parse_simple(s)


def _parse_simple(s: str) -> Cat:
    s = s.strip()
    s = _ALIASES.get(s.replace("-", ""), s)
    try:
        return Cat(s)
    except ValueError:
        raise ValueError(f"unknown category {s!r}") from None


def max_points(decorated: bool) -> int:
    env = os.environ.get("EASYQ_MAX_POINTS")
    if env:
        return int(env)
    return DECORATED_MAX_POINTS if decorated else PLAIN_MAX_POINTS


def check_size(points: int, decorated: bool, limit: int | None = None):
    limit = max_points(decorated) if limit is None else limit
    if points > limit:
        raise SizeLimitExceeded(f"{points} points exceeds the limit of {limit}")


_RULES = {
    "any": lambda s: True,
    "pair": lambda s: s == 2,
    "le2": lambda s: s <= 2,
    "even": lambda s: s % 2 == 0,
}


@lru_cache(maxsize=None)
def _nc_cached(m: int, rule: str) -> tuple:
    return tuple(_nc_gen(m, rule))


def _nc_shapes(m: int, rule: str):
    if m <= 12:
        return _nc_cached(m, rule)
    return _nc_gen(m, rule)


def _nc_gen(m: int, rule: str):
    """Noncrossing partitions of positions 0..m-1 (linear order).

    The block of position 0 is chosen first; the gaps it leaves are
    partitioned independently.
    """
    if m == 0:
        yield ()
        return
    ok = _RULES[rule]
    for r in range(1, m + 1):
        if not ok(r):
            continue
        for rest in combinations(range(1, m), r - 1):
            block = (0,) + rest
            bounds = block + (m,)
            segs = [(bounds[t] + 1, bounds[t + 1]) for t in range(r)]
            parts = [_nc_shapes(b - a, rule) for a, b in segs]
            if any(len(x) == 0 for x in parts if isinstance(x, tuple)):
                continue
            for combo in product(*parts):
                blocks = [block]
                for (a, _), shape in zip(segs, combo):
                    blocks.extend(tuple(a + x for x in blk) for blk in shape)
                yield tuple(blocks)


def _all_shapes(m: int, rule: str):
    """All set partitions of positions 0..m-1 via restricted growth."""
    ok = _RULES[rule]
    cap = 2 if rule in ("pair", "le2") else m
    blocks: list[list[int]] = []

    def rec(x):
        if x == m:
            if all(ok(len(b)) for b in blocks):
                yield tuple(tuple(b) for b in blocks)
            return
        for b in blocks:
            if len(b) < cap:
                b.append(x)
                yield from rec(x + 1)
                b.pop()
        blocks.append([x])
        yield from rec(x + 1)
        blocks.pop()

    yield from rec(0)


def _base_shapes(k: int, l: int, rule: str, noncrossing: bool):
    """Canonical block tuples (point ids) for one base family."""
    m = k + l
    if noncrossing:
        order = circular_order(k, l)
        for shape in _nc_shapes(m, rule):
            blocks = [tuple(sorted(order[x] for x in blk)) for blk in shape]
            blocks.sort()
            yield tuple(blocks)
    else:
        for shape in _all_shapes(m, rule):
            yield tuple(tuple(x + 1 for x in blk) for blk in shape)


def _colorings(blocks, m: int, which=None) -> Iterator[str]:
    """Canonical colourings: the first point of each block is black.

    ``which`` limits the free choices to the given block indices; other
    blocks are black throughout.
    """
    free = [x for t, b in enumerate(blocks) if which is None or t in which for x in b[1:]]
    base = [BLACK] * m
    for choice in product(BLACK + WHITE, repeat=len(free)):
        cols = base[:]
        for x, c in zip(free, choice):
            cols[x - 1] = c
        yield "".join(cols)


def _raw(cat: CategoryId, k: int, l: int):
    """Yield (blocks, colors, tags) for every member, unsorted."""
    m = k + l
    if isinstance(cat, Cat):
        for blocks in _base_shapes(k, l, cat.rule, cat.noncrossing):
            if cat.bulleted:
                for cols in _colorings(blocks, m):
                    yield blocks, cols, None
            else:
                yield blocks, None, None
        return
    c1, c2 = cat.first, cat.second
    rule = c1.rule if c1.rule == c2.rule else "any"
    for blocks in _base_shapes(k, l, rule, cat.noncrossing):
        options = []
        for b in blocks:
            opts = [t for t, c in ((1, c1), (2, c2)) if c.block_ok(len(b))]
            if not opts:
                break
            options.append(opts)
        else:
            for tags in product(*options):
                if not cat.noncrossing and not _restrictions_ok(k, l, blocks, tags, c1, c2):
                    continue
                if c1.bulleted:
                    ones = {t for t, g in enumerate(tags) if g == 1}
                    for cols in _colorings(blocks, m, ones):
                        yield blocks, cols, tags
                else:
                    yield blocks, None, tags


def _restrictions_ok(k, l, blocks, tags, c1, c2) -> bool:
    for tag, c in ((1, c1), (2, c2)):
        if c.noncrossing:
            sub = [b for b, g in zip(blocks, tags) if g == tag]
            if sub and not is_noncrossing(_restrict(k, l, sub)):
                return False
    return True


def _restrict(k: int, l: int, sub) -> Partition:
    """The partition formed by a subset of blocks, points renumbered."""
    pts = sorted(x for b in sub for x in b)
    new = {x: t + 1 for t, x in enumerate(pts)}
    kk = sum(1 for x in pts if x <= k)
    return Partition(kk, len(pts) - kk, tuple(tuple(new[x] for x in b) for b in sub))


def check_shape(cat: CategoryLike, k: int, l: int):
    """Raise SizeLimitExceeded if ``cat(k, l)`` is beyond the enumeration guardrail."""
    _guard(parse_category(cat), k, l)


def _guard(cat: CategoryLike, k: int, l: int):
    decorated = isinstance(cat, Product) or (isinstance(cat, Cat) and cat.bulleted)
    if isinstance(cat, Intersection):
        decorated = any(c.bulleted for c in cat.members)
    check_size(k + l, decorated)


def iter_partitions(cat: CategoryLike, k: int, l: int) -> Iterator[Partition]:
    """Members of ``cat(k, l)`` in generation order (canonical, no duplicates)."""
    cat = parse_category(cat)
    _guard(cat, k, l)
    if isinstance(cat, Intersection):
        first, rest = cat.members[0], cat.members[1:]
        for p in iter_partitions(first, k, l):
            if all(belongs(p, c) for c in rest):
                yield p
        return
    for blocks, cols, tags in _raw(cat, k, l):
        yield Partition(k, l, blocks, cols, tags)


def enumerate_partitions(cat: CategoryLike, k: int, l: int) -> list[Partition]:
    """Every member of ``cat(k, l)`` exactly once, sorted by canonical encoding."""
    return sorted(iter_partitions(cat, k, l), key=Partition.sort_key)


def count(cat: CategoryLike, k: int, l: int = None) -> int:
    """``|cat(0, k)|`` (or ``|cat(k, l)|`` when ``l`` is given), by enumeration."""
    cat = parse_category(cat)
    if l is None:
        k, l = 0, k
    _guard(cat, k, l)
    if isinstance(cat, Intersection):
        return sum(1 for _ in iter_partitions(cat, k, l))
    return sum(1 for _ in _raw(cat, k, l))


def belongs(p: Partition, cat: CategoryLike) -> bool:
    """Membership predicate, independent of the enumerators."""
    cat = parse_category(cat)
    if isinstance(cat, Intersection):
        return all(belongs(p, c) for c in cat.members)
    if isinstance(cat, Cat):
        if p.tags is not None or (p.colors is not None) != cat.bulleted:
            return False
        if not all(cat.block_ok(len(b)) for b in p.blocks):
            return False
        return not cat.noncrossing or is_noncrossing(p)
    if p.tags is None or (p.colors is not None) != cat.bulleted:
        return False
    if cat.noncrossing and not is_noncrossing(p):
        return False
    for b, g in zip(p.blocks, p.tags):
        if not (cat.first if g == 1 else cat.second).block_ok(len(b)):
            return False
    return _restrictions_ok(p.k, p.l, p.blocks, p.tags, cat.first, cat.second)


# -- small constructors --------------------------------------------------------


def identity(k: int = 1, colors: bool = False) -> Partition:
    blocks = tuple((i, k + i) for i in range(1, k + 1))
    return Partition(k, k, blocks, BLACK * (2 * k) if colors else None)


def cap(colors: str | None = None) -> Partition:
    """The pair on two lower points (0 -> 2)."""
    return Partition(0, 2, ((1, 2),), colors)


def cup(colors: str | None = None) -> Partition:
    """The pair on two upper points (2 -> 0)."""
    return Partition(2, 0, ((1, 2),), colors)


# -- serialization -------------------------------------------------------------


def to_dict(p: Partition) -> dict:
    out = {"k": p.k, "l": p.l, "blocks": [list(b) for b in p.blocks]}
    if p.colors is not None:
        if p.tags is None:
            pts = range(1, p.size + 1)
        else:
            pts = sorted(x for b, g in zip(p.blocks, p.tags) if g == 1 for x in b)
        out["colors"] = {str(x): p.colors[x - 1] for x in pts}
    if p.tags is not None:
        out["blockTags"] = list(p.tags)
    return out


def serialize(p: Partition) -> str:
    return json.dumps(to_dict(p), sort_keys=True, separators=(",", ":"))


def parse(text: str) -> Partition:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, exc.pos) from None
    return from_dict(data, text)


def from_dict(data, text: str = "") -> Partition:
    def fail(msg, key=None):
        pos = text.find(f'"{key}"') if key and text else -1
        raise ParseError(msg, pos if pos >= 0 else None)

    if not isinstance(data, dict):
        fail("expected a JSON object")
    for key in ("k", "l", "blocks"):
        if key not in data:
            fail(f"missing field {key!r}")
    k, l, blocks = data["k"], data["l"], data["blocks"]
    if not (isinstance(k, int) and isinstance(l, int)):
        fail("k and l must be integers", "k")
    if not isinstance(blocks, list) or not all(
        isinstance(b, list) and all(isinstance(x, int) for x in b) for b in blocks
    ):
        fail("blocks must be a list of integer lists", "blocks")
    colors = data.get("colors")
    tags = data.get("blockTags")
    if colors is not None:
        if not isinstance(colors, dict) or set(colors.values()) - {BLACK, WHITE}:
            fail("colors must map points to 'b' or 'w'", "colors")
        colors = {int(x): c for x, c in colors.items()}
    if tags is not None and not isinstance(tags, list):
        fail("blockTags must be a list", "blockTags")
    try:
        return Partition(k, l, tuple(tuple(b) for b in blocks), colors, tuple(tags) if tags is not None else None)
    except InvalidPartition as exc:
        key = "blockTags" if "tags" in str(exc) else "colors" if "colors" in str(exc) else "blocks"
        fail(str(exc), key)
