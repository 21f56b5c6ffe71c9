"""Batched partition operations on integer codes.

A batch of partitions of one shape (k, l) is a triple of int8 arrays
``(labels, colors, tags)``, each of shape ``(N, k + l)``: the block index of
every point (restricted growth, i.e. blocks numbered by first point), the
colour bit of every point (0 black, 1 white) and the tag of every point's
block (0 when untagged).  All outputs are canonical.
"""

from __future__ import annotations

import numpy as np

from .partitions import BLACK, Partition

CHUNK = 1 << 20


def encode(parts, k: int, l: int):
    m = k + l
    n = len(parts)
    L = np.zeros((n, m), dtype=np.int8)
    C = np.zeros((n, m), dtype=np.int8)
    T = np.zeros((n, m), dtype=np.int8)
    for r, p in enumerate(parts):
        for t, b in enumerate(p.blocks):
            g = p.tags[t] if p.tags is not None else 0
            for x in b:
                L[r, x - 1] = t
                T[r, x - 1] = g
        if p.colors is not None:
            C[r] = [c != BLACK for c in p.colors]
    return L, C, T


def decode(k: int, l: int, L, C, T, colored: bool, tagged: bool) -> list[Partition]:
    out = []
    for lab, col, tag in zip(L.tolist(), C.tolist(), T.tolist()):
        nb = max(lab) + 1 if lab else 0
        blocks = [[] for _ in range(nb)]
        tags = [0] * nb
        for x, (b, g) in enumerate(zip(lab, tag)):
            blocks[b].append(x + 1)
            tags[b] = g
        colors = "".join("w" if c else "b" for c in col) if colored else None
        out.append(Partition(k, l, tuple(map(tuple, blocks)), colors, tuple(tags) if tagged else None))
    return out


def keys(L, C, T) -> list[bytes]:
    arr = np.ascontiguousarray(np.concatenate([L, C, T], axis=1))
    if arr.shape[1] == 0:
        return [b""] * arr.shape[0]
    return arr.view(np.dtype((np.void, arr.shape[1]))).ravel().tolist()


def canon(L, C, T):
    """Relabel blocks by first occurrence and make every block start black."""
    n, e = L.shape
    if e == 0:
        return L, C, T
    eq = L[:, :, None] == L[:, None, :]
    first = eq.argmax(axis=2)
    is_first = first == np.arange(e)
    rank = np.cumsum(is_first, axis=1) - 1
    newL = np.take_along_axis(rank, first, axis=1).astype(np.int8)
    newC = (C ^ np.take_along_axis(C, first, axis=1)).astype(np.int8)
    return newL, newC, T


def involute(L, C, T, k: int, l: int):
    order = list(range(k, k + l)) + list(range(k))
    return canon(L[:, order], C[:, order], T[:, order])


def rotate(L, C, T, k: int, l: int):
    """Move the leftmost upper point to the leftmost lower slot, flipping its colour."""
    order = list(range(1, k)) + [0] + list(range(k, k + l))
    C2 = C.copy()
    C2[:, 0] ^= 1
    return canon(L[:, order], C2[:, order], T[:, order])


def tensor(A, ka: int, la: int, B, kb: int, lb: int):
    """All pairs (a, b) -> a (x) b; pair index is a * len(B) + b."""
    LA, CA, TA = A
    LB, CB, TB = B
    na, nb = len(LA), len(LB)
    ia = np.repeat(np.arange(na), nb)
    ib = np.tile(np.arange(nb), na)
    offs = (LA.max(axis=1) + 1 if LA.shape[1] else np.zeros(na, dtype=np.int8))[ia][:, None]
    la_, lb_ = LA[ia], LB[ib] + offs
    L = np.concatenate([la_[:, :ka], lb_[:, :kb], la_[:, ka:], lb_[:, kb:]], axis=1).astype(np.int8)
    ca_, cb_ = CA[ia], CB[ib]
    C = np.concatenate([ca_[:, :ka], cb_[:, :kb], ca_[:, ka:], cb_[:, kb:]], axis=1)
    ta_, tb_ = TA[ia], TB[ib]
    T = np.concatenate([ta_[:, :ka], tb_[:, :kb], ta_[:, ka:], tb_[:, kb:]], axis=1)
    return canon(L, C, T)


def compose(A, B, k: int, m: int, l: int):
    """Glue the lower row of every ``a`` (shape k->m) to the upper row of
    every ``b`` (shape m->l).

    Returns ``(L, C, T, ok, loops1, loops2)`` over all pairs in row-major
    order (pair index ``a * len(B) + b``).  ``ok`` is False where the result
    is the zero morphism (colour cycle with odd flip parity, or tag
    mismatch).  ``loops1``/``loops2`` count deleted closed blocks of tag 1
    (or untagged) and tag 2.
    """
    LA = A[0]
    nb = len(B[0])
    step = max(1, CHUNK // max(nb, 1))
    pieces = [
        _compose_chunk(tuple(x[s : s + step] for x in A), B, k, m, l)
        for s in range(0, max(len(LA), 1), step)
    ]
    if len(pieces) == 1:
        return pieces[0]
    return tuple(np.concatenate(parts, axis=0) for parts in zip(*pieces))


def _compose_chunk(A, B, k, m, l):
    LA, CA, TA = A
    LB, CB, TB = B
    na, nb = len(LA), len(LB)
    P = na * nb
    ia = np.repeat(np.arange(na), nb)
    ib = np.tile(np.arange(nb), na)
    off = k + m
    N = k + m + m + l
    rows = np.arange(P)

    u = LA[ia][:, k:].astype(np.int64)
    v = LB[ib][:, :m].astype(np.int64) + off
    w = (CA[ia][:, k:] ^ CB[ib][:, :m]).astype(np.int8)
    ok = np.all(TA[ia][:, k:] == TB[ib][:, :m], axis=1)

    root = np.tile(np.arange(N, dtype=np.int64), (P, 1))
    par = np.zeros((P, N), dtype=np.int8)
    changed = True
    while changed:
        changed = False
        for j in range(m):
            uj, vj, wj = u[:, j], v[:, j], w[:, j]
            ru, rv = root[rows, uj], root[rows, vj]
            pu, pv = par[rows, uj], par[rows, vj]
            s = ru < rv
            if s.any():
                changed = True
                root[rows[s], vj[s]] = ru[s]
                par[rows[s], vj[s]] = pu[s] ^ wj[s]
            s = rv < ru
            if s.any():
                changed = True
                root[rows[s], uj[s]] = rv[s]
                par[rows[s], uj[s]] = pv[s] ^ wj[s]
    for j in range(m):
        uj, vj = u[:, j], v[:, j]
        ok &= (par[rows, uj] ^ par[rows, vj]) == w[:, j]

    ext_nodes = np.concatenate([LA[ia][:, :k].astype(np.int64), LB[ib][:, m:].astype(np.int64) + off], axis=1)
    L = np.take_along_axis(root, ext_nodes, axis=1)
    C = np.concatenate([CA[ia][:, :k], CB[ib][:, m:]], axis=1) ^ np.take_along_axis(par, ext_nodes, axis=1)
    T = np.concatenate([TA[ia][:, :k], TB[ib][:, m:]], axis=1)

    # closed components: roots of used nodes that no external point reaches
    nba = (LA.max(axis=1) + 1) if LA.shape[1] else np.zeros(na, dtype=np.int64)
    nbb = (LB.max(axis=1) + 1) if LB.shape[1] else np.zeros(nb, dtype=np.int64)
    idx = np.arange(N)
    used = np.where(idx < off, idx[None, :] < nba[ia][:, None], (idx[None, :] - off) < nbb[ib][:, None])
    node_tag = np.zeros((P, N), dtype=np.int8)
    if m or k:
        node_tag[rows[:, None], LA[ia].astype(np.int64)] = TA[ia]
    if m or l:
        node_tag[rows[:, None], LB[ib].astype(np.int64) + off] = TB[ib]
    is_root = used & (root == idx[None, :])
    reached = np.zeros((P, N), dtype=bool)
    if ext_nodes.shape[1]:
        reached[rows[:, None], L] = True
    closed = is_root & ~reached
    loops2 = (closed & (node_tag == 2)).sum(axis=1)
    loops1 = closed.sum(axis=1) - loops2
    L, C, T = canon(L, C.astype(np.int8), T)
    return L, C, T, ok, loops1, loops2
