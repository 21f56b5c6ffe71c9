"""Brute-force reference implementations, deliberately independent of the
library's own algorithms."""

from __future__ import annotations

from fractions import Fraction
from itertools import product
from math import comb


def set_partitions(items):
    """All set partitions of a list, by inserting the first item everywhere."""
    items = list(items)
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for smaller in set_partitions(rest):
        yield [[first]] + smaller
        for i in range(len(smaller)):
            yield smaller[:i] + [[first] + smaller[i]] + smaller[i + 1 :]


def crosses_pairwise(blocks, k, l) -> bool:
    """O(m^2)-style test: two blocks cross iff a1 < b1 < a2 < b2 on the circle."""
    order = list(range(1, k + 1)) + list(range(k + l, k, -1))
    pos = {x: i for i, x in enumerate(order)}
    bl = [sorted(pos[x] for x in b) for b in blocks]
    for i in range(len(bl)):
        for j in range(len(bl)):
            if i == j:
                continue
            A, B = bl[i], bl[j]
            for a1 in A:
                for a2 in A:
                    if a1 >= a2:
                        continue
                    inside = any(a1 < b < a2 for b in B)
                    outside = any(b < a1 or b > a2 for b in B)
                    if inside and outside:
                        return True
    return False


def catalan(n: int) -> int:
    return comb(2 * n, n) // (n + 1)


def bell(n: int) -> int:
    row = [1]
    for _ in range(n):
        new = [row[-1]]
        for x in row:
            new.append(new[-1] + x)
        row = new
    return row[0]


def motzkin(n: int) -> int:
    return sum(comb(n, 2 * j) * catalan(j) for j in range(n // 2 + 1))


def nc_partitions(m: int):
    """Noncrossing set partitions of 1..m as lists of blocks."""
    for bl in set_partitions(range(1, m + 1)):
        if not crosses_pairwise(bl, 0, m):
            yield bl


def nc_weighted_sum(m: int, weight, block_ok=lambda s: True):
    total = 0
    for bl in nc_partitions(m):
        if all(block_ok(len(b)) for b in bl):
            term = 1
            for b in bl:
                term *= weight(len(b))
            total += term
    return total


def moments_by_nc_sum(kappa, K):
    """m_n = sum over NC(n) of prod kappa_|b|, by explicit enumeration."""
    out = []
    for n in range(1, K + 1):
        total = Fraction(0)
        for bl in nc_partitions(n):
            term = Fraction(1)
            for b in bl:
                term *= Fraction(kappa[len(b) - 1])
            total += term
        out.append(total)
    return out


def rank_fraction(rows) -> int:
    """Rank by plain Gaussian elimination over Fractions."""
    A = [[Fraction(x) for x in r] for r in rows]
    rank = 0
    ncol = len(A[0]) if A else 0
    for c in range(ncol):
        piv = next((r for r in range(rank, len(A)) if A[r][c] != 0), None)
        if piv is None:
            continue
        A[rank], A[piv] = A[piv], A[rank]
        for r in range(len(A)):
            if r != rank and A[r][c] != 0:
                f = A[r][c] / A[rank][c]
                A[r] = [x - f * y for x, y in zip(A[r], A[rank])]
        rank += 1
    return rank


def delta_plain_bruteforce(blocks, k, l, idx, bar):
    """The alternating rule read straight off its definition, per block."""
    for b in blocks:
        up = [idx[x - 1] for x in sorted(b) if x <= k]
        low = [idx[x - 1] for x in sorted(b) if x > k]
        lead = (up or low)[0]
        if up and low and up[0] != low[0]:
            return 0
        for seq in (up, low):
            for r, v in enumerate(seq):
                if v != (lead if r % 2 == 0 else bar(lead)):
                    return 0
    return 1


def t_matrix_bruteforce(pi, n, delta_fn):
    """Dense T by evaluating delta on every (upper, lower) index tuple."""
    rows = []
    for j in product(range(n), repeat=pi.l):
        rows.append([delta_fn(list(i) + list(j)) for i in product(range(n), repeat=pi.k)])
    return rows
