"""Exact free-probability transforms and character-moment counts."""

from __future__ import annotations

from fractions import Fraction
from itertools import permutations, product
from math import factorial
from typing import Callable, Sequence

from .errors import SizeLimitExceeded
from .partitions import CategoryLike, Partition, iter_partitions

MAX_ORDER = 14
MAX_CHARACTER_K = 10


def _guard(K: int):
    if K > MAX_ORDER:
        raise SizeLimitExceeded(f"series are limited to order {MAX_ORDER}")


def _series(values, K):
    vals = [Fraction(v) for v in values[:K]]
    if len(vals) < K:
        raise ValueError(f"need at least {K} terms, got {len(vals)}")
    return vals


def _power_coeffs(base: list[Fraction], K: int) -> list[list[Fraction]]:
    """powers[s][j] = [x^j] base(x)^s for s, j <= K, base given by its
    coefficients base[0..K]."""
    powers = [[Fraction(1)] + [Fraction(0)] * K]
    for _ in range(K):
        prev = powers[-1]
        powers.append([sum((prev[i] * base[j - i] for i in range(j + 1)), Fraction(0)) for j in range(K + 1)])
    return powers


def moments_from_cumulants(kappa: Sequence, K: int) -> list[Fraction]:
    """m_1..m_K with m_n = sum over NC(n) of the product of block cumulants.

    Uses the functional equation m_n = sum_s kappa_s [x^(n-s)] M(x)^s,
    M(x) = 1 + sum m_j x^j, filling M in order of degree.
    """
    _guard(K)
    kap = _series(kappa, K)
    m = [Fraction(1)] + [Fraction(0)] * K
    for n in range(1, K + 1):
        powers = _power_coeffs(m[:n] + [Fraction(0)] * (K + 1 - n), K)
        m[n] = sum((kap[s - 1] * powers[s][n - s] for s in range(1, n + 1)), Fraction(0))
    return m[1:]


def cumulants_from_moments(moments: Sequence, K: int) -> list[Fraction]:
    """Inverse of :func:`moments_from_cumulants` (triangular recursion: the
    coefficient of kappa_n in m_n is 1)."""
    _guard(K)
    mom = _series(moments, K)
    M = [Fraction(1)] + mom
    powers = _power_coeffs(M, K)
    kap: list[Fraction] = []
    for n in range(1, K + 1):
        rest = sum((kap[s - 1] * powers[s][n - s] for s in range(1, n)), Fraction(0))
        kap.append(mom[n - 1] - rest)
    return kap


def free_convolve(m1: Sequence, m2: Sequence, K: int) -> list[Fraction]:
    k1, k2 = cumulants_from_moments(m1, K), cumulants_from_moments(m2, K)
    return moments_from_cumulants([a + b for a, b in zip(k1, k2)], K)


def dilate(moments: Sequence, s, K: int | None = None) -> list[Fraction]:
    """Moments of sX given those of X."""
    K = len(moments) if K is None else K
    s = Fraction(s)
    return [s**k * Fraction(v) for k, v in enumerate(moments[:K], start=1)]


def free_poisson(t, K: int) -> list[Fraction]:
    """m_k = sum over NC(k) of t^(blocks), via the Narayana numbers."""
    _guard(K)
    t = Fraction(t)
    return [sum((narayana(k, j) * t**j for j in range(1, k + 1)), Fraction(0)) for k in range(1, K + 1)]


def narayana(k: int, j: int) -> int:
    """Number of noncrossing partitions of k points with j blocks."""
    return factorial(k) * factorial(k) // (k * factorial(j) * factorial(j - 1) * factorial(k - j) * factorial(k - j + 1))


def character_count(cat: CategoryLike, k: int, weight: Callable[[int], int] | None = None) -> int:
    """sum over cat(0, k) of the product over blocks of weight(|block|)."""
    if k > MAX_CHARACTER_K:
        raise SizeLimitExceeded(f"character counts are limited to k <= {MAX_CHARACTER_K}")
    total = 0
    for p in iter_partitions(cat, 0, k):
        term = 1
        for b in p.blocks:
            term *= 1 if weight is None else weight(len(b))
        total += term
    return total


def bullet_weight(size: int) -> int:
    return 2 ** (size - 1)


def free_product_weight(size: int) -> int:
    return 2 ** (size - 1) + 1


# -- finite groups -------------------------------------------------------------------


MAX_GROUP_Q = 6
MAX_GROUP_K = 8


def finite_group_moment(group: str, q: int, k: int) -> int:
    """Exact average of trace(g)^k over S_q or the signed permutations H_q."""
    if q > MAX_GROUP_Q or k > MAX_GROUP_K:
        raise SizeLimitExceeded(f"finite group moments are limited to q <= {MAX_GROUP_Q}, k <= {MAX_GROUP_K}")
    if group not in ("Sq", "Hq"):
        raise ValueError("group must be 'Sq' or 'Hq'")
    signs = list(product((1, -1), repeat=q)) if group == "Hq" else [(1,) * q]
    total = 0
    for perm in permutations(range(q)):
        fixed = [i for i in range(q) if perm[i] == i]
        for sg in signs:
            total += sum(sg[i] for i in fixed) ** k
    order = factorial(q) * len(signs)
    avg = Fraction(total, order)
    assert avg.denominator == 1
    return int(avg)


# -- NC_join ----------------------------------------------------------------------------


MAX_JOIN = 7


def _is_joined(p: Partition) -> bool:
    """Every pair (2r-1, 2r) of upper points and of lower points shares a block."""
    lab = p.labels()
    return all(lab[x] == lab[x + 1] for x in range(0, p.k, 2)) and all(
        lab[p.k + x] == lab[p.k + x + 1] for x in range(0, p.l, 2)
    )


def ncjoin_count(k: int, l: int) -> int:
    """|NC_join(2k, 2l)|, by filtering NC(2k, 2l).

    Also confirms that collapsing joined pairs is a bijection onto NC(k, l).
    """
    if k + l > MAX_JOIN:
        raise SizeLimitExceeded(f"ncjoin counts are limited to k + l <= {MAX_JOIN}")
    joined = [p for p in iter_partitions("nc", 2 * k, 2 * l) if _is_joined(p)]
    images = {collapse(p) for p in joined}
    if len(images) != len(joined) or images != set(iter_partitions("nc", k, l)):
        raise AssertionError(f"collapsing NC_join({2 * k},{2 * l}) is not a bijection onto NC({k},{l})")
    return len(joined)


def collapse(p: Partition) -> Partition:
    """Contract each joined adjacent pair of an NC_join partition to one point."""
    lab = p.labels()
    pts = list(range(0, p.size, 2))
    new = {}
    for r, x in enumerate(pts):
        new.setdefault(lab[x], []).append(r + 1)
    return Partition(p.k // 2, p.l // 2, tuple(tuple(b) for b in new.values()))
