"""Partitions realized as exact intertwiner matrices over the index set J_{p,q}."""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass
from itertools import product

import numpy as np

from .errors import ShapeMismatch, SizeLimitExceeded, UnsupportedImpl
from .partitions import WHITE, CategoryLike, Partition, iter_partitions

MAX_TENSOR_DIM = 2**15
MAX_MODEL_DIM = 2**13
IMPLS = ("plain", "bulleted", "product", "generalF")


@dataclass(frozen=True)
class IndexSpace:
    """J_{p,q}: pairs (i, alpha) for i in {0, 1}, 1 <= alpha <= p, then 1..q.

    Indices are handled as positions ``0..n-1`` in the order
    (0,1), (1,1), ..., (0,p), (1,p), 1, ..., q.
    """

    p: int
    q: int

    def __post_init__(self):
        if self.p < 0 or self.q < 0 or self.p == self.q == 0:
            raise ValueError("need p, q >= 0 with p + q > 0")

    @property
    def n(self) -> int:
        return 2 * self.p + self.q

    def bar(self, pos: int) -> int:
        return pos ^ 1 if pos < 2 * self.p else pos

    def bars(self) -> np.ndarray:
        return np.array([self.bar(z) for z in range(self.n)])

    def label(self, pos: int):
        if pos < 2 * self.p:
            return (pos % 2, pos // 2 + 1)
        return pos - 2 * self.p + 1

    def position(self, label) -> int:
        if isinstance(label, tuple):
            i, alpha = label
            if i not in (0, 1) or not 1 <= alpha <= self.p:
                raise ValueError(f"no index {label} in J_{self.p}")
            return 2 * (alpha - 1) + i
        if not 1 <= label <= self.q:
            raise ValueError(f"no index {label} among 1..{self.q}")
        return 2 * self.p + label - 1

    def labels(self) -> list:
        return [self.label(z) for z in range(self.n)]


def f_matrix(p: int, q: int) -> np.ndarray:
    """F[z, y] = 1 iff y = bar(z)."""
    sp = IndexSpace(p, q)
    F = np.zeros((sp.n, sp.n), dtype=np.int64)
    F[np.arange(sp.n), sp.bars()] = 1
    return F


def c_matrix(p: int, q: int) -> np.ndarray:
    rho = np.exp(2j * np.pi / 8)
    block = np.array([[rho, rho**7], [rho**3, rho**5]]) / np.sqrt(2)
    C = np.eye(2 * p + q, dtype=complex)
    for a in range(p):
        C[2 * a : 2 * a + 2, 2 * a : 2 * a + 2] = block
    return C


# -- deltas and T-matrices -------------------------------------------------------


def default_impl(p: Partition) -> str:
    return {"plain": "plain", "bulleted": "bulleted", "product": "product"}[p.kind]


def _check_impl(pi: Partition, impl: str):
    if impl not in IMPLS:
        raise UnsupportedImpl(f"unknown implementation {impl!r}")
    wanted = {"plain": "plain", "generalF": "plain", "bulleted": "bulleted", "product": "product"}[impl]
    if pi.kind != wanted:
        raise UnsupportedImpl(f"{impl} implementation needs a {wanted} partition, got {pi.kind}")
    if impl == "generalF" and any(len(b) != 2 for b in pi.blocks):
        raise UnsupportedImpl("generalF implementation is defined for pair partitions only")


def target_dim(pi: Partition, space: IndexSpace, impl: str) -> int:
    """Dimension of the vector space the T-matrix acts on."""
    return 2 * space.p if impl == "bulleted" else space.n


def _block_options(pi: Partition, t: int, space: IndexSpace, impl: str, F=None):
    """Every admissible assignment of indices to the points of block t, as
    (values in point order, weight) pairs."""
    b = pi.blocks[t]
    up, low = pi.upper(b), pi.lower(b)
    bar = space.bar
    if impl == "plain":
        return [
            ([x if r % 2 == 0 else bar(x) for r in range(len(up))] + [x if r % 2 == 0 else bar(x) for r in range(len(low))], 1)
            for x in range(space.n)
        ]
    if impl == "bulleted":
        cols = [pi.colors[x - 1] for x in b]
        return [([bar(x) if c == WHITE else x for c in cols], 1) for x in range(2 * space.p)]
    if impl == "product":
        if pi.tags[t] == 2:
            return [([x] * len(b), 1) for x in range(2 * space.p, space.n)]
        if pi.colors is None:
            return [([x] * len(b), 1) for x in range(2 * space.p)]
        cols = [pi.colors[x - 1] for x in b]
        return [([bar(x) if c == WHITE else x for c in cols], 1) for x in range(2 * space.p)]
    # generalF: F over horizontal strings, delta over vertical ones
    n = space.n
    if up and low:
        return [([x, x], 1) for x in range(n)]
    return [([x, y], F[x, y]) for x in range(n) for y in range(n) if F[x, y] != 0]


def delta(pi: Partition, i, j, space: IndexSpace, impl: str | None = None, F=None):
    """The coefficient of e_j in T_pi(e_i).

    An index is either a position (a plain int) or a J_p label ``(i, alpha)``.
    """
    impl = impl or default_impl(pi)
    _check_impl(pi, impl)
    if len(i) != pi.k or len(j) != pi.l:
        raise ShapeMismatch(f"need {pi.k} upper and {pi.l} lower indices")
    pos = [z if isinstance(z, (int, np.integer)) and not isinstance(z, bool) else space.position(z) for z in (*i, *j)]
    if impl == "generalF" and F is None:
        F = f_matrix(space.p, space.q)
    weight = 1
    for t, b in enumerate(pi.blocks):
        vals = [pos[x - 1] for x in b]
        hit = [w for opt, w in _block_options(pi, t, space, impl, F) if opt == vals]
        if not hit:
            return 0
        weight *= hit[0]
    return weight


@dataclass(frozen=True)
class IntertwinerMatrix:
    """Dense matrix of T_pi: rows index n^l lower tuples, columns n^k upper tuples
    (first tensor factor most significant)."""

    entries: np.ndarray
    k: int
    l: int
    n: int
    p: int
    q: int

    @property
    def rows(self) -> int:
        return self.entries.shape[0]

    @property
    def cols(self) -> int:
        return self.entries.shape[1]


def t_matrix(pi: Partition, space: IndexSpace, impl: str | None = None, F=None) -> IntertwinerMatrix:
    impl = impl or default_impl(pi)
    _check_impl(pi, impl)
    n = target_dim(pi, space, impl)
    if n == 0:
        raise UnsupportedImpl("bulleted implementation needs p >= 1")
    if n**pi.k > MAX_TENSOR_DIM or n**pi.l > MAX_TENSOR_DIM:
        raise SizeLimitExceeded(f"{n}^{max(pi.k, pi.l)} exceeds {MAX_TENSOR_DIM}")
    if impl == "generalF":
        F = f_matrix(space.p, space.q) if F is None else np.asarray(F)
    dtype = np.int64 if F is None or np.issubdtype(np.asarray(F).dtype, np.integer) else np.asarray(F).dtype
    M = np.zeros((n**pi.l, n**pi.k), dtype=dtype)
    # each point's place value in its row/column index
    place = [n ** (pi.k - x) for x in range(1, pi.k + 1)] + [n ** (pi.l - (x - pi.k)) for x in range(pi.k + 1, pi.size + 1)]
    rows = np.zeros(1, dtype=np.int64)
    cols = np.zeros(1, dtype=np.int64)
    weights = np.ones(1, dtype=dtype)
    for t, b in enumerate(pi.blocks):
        opts = _block_options(pi, t, space, impl, F)
        if not opts:
            return IntertwinerMatrix(M, pi.k, pi.l, n, space.p, space.q)
        dr = np.array([sum(v * place[x - 1] for v, x in zip(vals, b) if x > pi.k) for vals, _ in opts])
        dc = np.array([sum(v * place[x - 1] for v, x in zip(vals, b) if x <= pi.k) for vals, _ in opts])
        w = np.array([wt for _, wt in opts], dtype=dtype)
        rows = (rows[:, None] + dr[None, :]).ravel()
        cols = (cols[:, None] + dc[None, :]).ravel()
        weights = (weights[:, None] * w[None, :]).ravel()
    np.add.at(M, (rows, cols), weights)
    return IntertwinerMatrix(M, pi.k, pi.l, n, space.p, space.q)


def loop_factor(loops_by_tag, space: IndexSpace, impl: str) -> int:
    """The scalar a deleted closed block contributes: n, 2p, or q by tag."""
    l1, l2 = loops_by_tag
    if impl == "bulleted":
        return (2 * space.p) ** (l1 + l2)
    if impl == "product":
        return (2 * space.p) ** l1 * space.q**l2
    return space.n ** (l1 + l2)


# -- exact rank ------------------------------------------------------------------


def exact_rank(rows) -> int:
    """Rank of an integer matrix by fraction-free (Bareiss) elimination."""
    A = [[int(x) for x in r] for r in rows]
    if not A:
        return 0
    m, ncol = len(A), len(A[0])
    rank, prev = 0, 1
    for c in range(ncol):
        piv = next((r for r in range(rank, m) if A[r][c] != 0), None)
        if piv is None:
            continue
        A[rank], A[piv] = A[piv], A[rank]
        pr = A[rank]
        for r in range(rank + 1, m):
            row = A[r]
            a = row[c]
            if a == 0:
                A[r] = [(pr[c] * row[j]) // prev for j in range(ncol)]
                continue
            A[r] = [(pr[c] * row[j] - a * pr[j]) // prev for j in range(ncol)]
        prev = pr[c]
        rank += 1
        if rank == m:
            break
    return rank


def gram_matrix(partitions, space: IndexSpace, impl: str | None = None) -> np.ndarray:
    parts = list(partitions)
    if not parts:
        return np.zeros((0, 0), dtype=np.int64)
    shapes = {(p.k, p.l) for p in parts}
    if len(shapes) > 1:
        raise ShapeMismatch("gram_rank needs partitions of one shape")
    V = np.stack([t_matrix(p, space, impl).entries.ravel() for p in parts]).astype(np.int64)
    return V @ V.T


def gram_rank(partitions, space: IndexSpace, impl: str | None = None) -> int:
    """dim span{T_pi}, as the exact rank of the integer Gram matrix."""
    return exact_rank(gram_matrix(partitions, space, impl).tolist())


def fix_dim(cat: CategoryLike, k: int, space: IndexSpace, impl: str | None = None) -> int:
    return gram_rank(iter_partitions(cat, 0, k), space, impl)


# -- intertwiner check against matrix models ---------------------------------------


def tensor_power(U: np.ndarray, k: int) -> np.ndarray:
    """U^{(x)k} as a (n^k d) x (n^k d) matrix, row index (z_1..z_k, a)."""
    n, _, d, _ = U.shape
    M = np.eye(d, dtype=complex).reshape(1, d, 1, d)
    for _ in range(k):
        M = np.einsum("ZaYc,zycb->ZzaYyb", M, U)
        s = M.shape
        M = M.reshape(s[0] * s[1], s[2], s[3] * s[4], s[5])
    N = M.shape[0] * d
    return M.reshape(N, N)


@dataclass(frozen=True)
class IntertwinerCheck:
    ok: bool
    residual: float

    def __bool__(self):
        return self.ok


def relative_residual(L: np.ndarray, R: np.ndarray) -> float:
    """||L - R||_F / max(||L||_F, ||R||_F, 1)."""
    return float(np.linalg.norm(L - R) / max(np.linalg.norm(L), np.linalg.norm(R), 1.0))


def is_intertwiner(T, U, k: int | None = None, l: int | None = None, tol: float = 1e-9) -> IntertwinerCheck:
    """Check U^{(x)l} (T (x) 1_d) = (T (x) 1_d) U^{(x)k}."""
    entries = getattr(U, "entries", U)
    entries = np.asarray(entries)
    if isinstance(T, IntertwinerMatrix):
        k = T.k if k is None else k
        l = T.l if l is None else l
        T = T.entries
    T = np.asarray(T)
    n, n2, d, _ = entries.shape
    if n != n2 or T.shape != (n**l, n**k):
        raise ShapeMismatch(f"T of shape {T.shape} does not fit n={n}, k={k}, l={l}")
    if n ** max(k, l) * d > MAX_MODEL_DIM:
        raise SizeLimitExceeded(f"n^{max(k, l)} * d exceeds {MAX_MODEL_DIM}")
    Td = np.kron(T, np.eye(d))
    left = tensor_power(entries, l) @ Td
    right = Td @ tensor_power(entries, k)
    res = relative_residual(left, right)
    return IntertwinerCheck(res <= tol, res)


# -- export ------------------------------------------------------------------------


def _entry(x):
    if isinstance(x, complex) or np.iscomplexobj(x):
        return [float(np.real(x)), float(np.imag(x))]
    if float(x).is_integer():
        return int(x)
    return float(x)


def matrix_to_json(M) -> str:
    M = np.asarray(getattr(M, "entries", M))
    data = {"rows": int(M.shape[0]), "cols": int(M.shape[1]), "entries": [[_entry(x) for x in row] for row in M]}
    return json.dumps(data, sort_keys=True)


def matrix_to_csv(M) -> str:
    M = np.asarray(getattr(M, "entries", M))
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    for row in M:
        w.writerow([json.dumps(_entry(x)) if np.iscomplexobj(x) else _entry(x) for x in row])
    return buf.getvalue()


def xi_vector(space: IndexSpace) -> np.ndarray:
    """sum_z e_z (x) e_{bar z}, as an n^2 x 1 column."""
    n = space.n
    v = np.zeros((n * n, 1), dtype=np.int64)
    for z in range(n):
        v[z * n + space.bar(z), 0] = 1
    return v


def eta_vector(space: IndexSpace) -> np.ndarray:
    """sum over J_p of e_{i alpha} plus sum of e_M."""
    return np.ones((space.n, 1), dtype=np.int64)


def hpq_map(space: IndexSpace) -> np.ndarray:
    """e_{i alpha} -> e_{i alpha} (x) e_{bar i alpha} (x) e_{i alpha}; e_M -> e_M^{(x)3}."""
    n = space.n
    T = np.zeros((n**3, n), dtype=np.int64)
    for z in range(n):
        T[(z * n + space.bar(z)) * n + z, z] = 1
    return T


def all_tuples(n: int, k: int):
    return product(range(n), repeat=k)


# -- functoriality -------------------------------------------------------------------


@dataclass(frozen=True)
class FunctorReport:
    """Outcome of comparing T_a T_b with factor * T_{a o b} over many pairs."""

    pairs: int
    failures: int
    first_failure: tuple | None = None  # (a, b, description)

    @property
    def ok(self) -> bool:
        return self.failures == 0

    def __bool__(self):
        return self.ok


def _t_stack(parts, space, impl):
    return np.stack([t_matrix(p, space, impl).entries for p in parts]).astype(np.float64)


_COMPOSITES: dict = {}


def _composite_index(cat_key, k, m, l, Bs, As, res):
    """For every pair (b, a), the position of a o b among ``res`` (-1 when
    absent), the non-zero mask and loop counts.  Cached: independent of the
    index space."""
    from . import _kernels as K

    key = (cat_key, k, m, l)
    if key not in _COMPOSITES:
        colored = Bs[0].colors is not None
        L, C, T, ok, l1, l2 = K.compose(K.encode(Bs, k, m), K.encode(As, m, l), k, m, l)
        C = np.where(T == 2, 0, C).astype(np.int8) if colored else np.zeros_like(C)
        index = {kk: r for r, kk in enumerate(K.keys(*K.encode(res, k, l)))}
        idx = np.array([index.get(kk, -1) for kk in K.keys(L, C, T)], dtype=np.int64)
        _COMPOSITES[key] = (idx, ok, l1, l2)
    return _COMPOSITES[key]


def check_functoriality(cat: CategoryLike, space: IndexSpace, max_total: int = 6, impl: str | None = None) -> FunctorReport:
    """Compare T_a T_b with loop_factor * T_{a o b} (or 0) for every b: k -> m
    and a: m -> l in ``cat`` with k + m + l <= max_total.

    Products are formed in float64 with every entry an integer far below
    2**53, so the comparison is exact.
    """
    from .category import compose
    from .partitions import enumerate_partitions, parse_category

    cat = parse_category(cat)
    pairs = failures = 0
    first = None
    members = {}

    def mem(k, l):
        if (k, l) not in members:
            members[(k, l)] = enumerate_partitions(cat, k, l)
        return members[(k, l)]

    stacks = {}

    def stack(k, l):
        if (k, l) not in stacks:
            stacks[(k, l)] = _t_stack(mem(k, l), space, impl)
        return stacks[(k, l)]

    for k in range(max_total + 1):
        for m in range(max_total + 1 - k):
            for l in range(max_total + 1 - k - m):
                Bs, As = mem(k, m), mem(m, l)
                if not Bs or not As:
                    continue
                impl_ = impl or default_impl(Bs[0])
                n = target_dim(Bs[0], space, impl_)
                TB, TA = stack(k, m), stack(m, l)
                nA, nB = len(As), len(Bs)
                lhs = TA.reshape(nA * n**l, n**m) @ TB.transpose(1, 0, 2).reshape(n**m, nB * n**k)
                lhs = lhs.reshape(nA, n**l, nB, n**k).transpose(2, 0, 1, 3)
                res = mem(k, l)
                idx, ok, l1, l2 = _composite_index(str(cat), k, m, l, Bs, As, res)
                factor = np.array([loop_factor((a, b), space, impl_) for a, b in zip(l1.tolist(), l2.tolist())], dtype=np.float64)
                factor[~ok] = 0
                outside = ok & (idx < 0)
                if res:
                    rhs = stack(k, l)[np.where(idx < 0, 0, idx)] * factor[:, None, None]
                else:
                    rhs = np.zeros((len(idx), n**l, n**k))
                bad = (lhs.reshape(len(idx), n**l, n**k) != rhs).any(axis=(1, 2)) | outside
                pairs += len(idx)
                failures += int(bad.sum())
                if first is None and bad.any():
                    r = int(np.argmax(bad))
                    b, a = Bs[r // nA], As[r % nA]
                    why = "composite outside the category" if outside[r] else f"T_a T_b != factor * T(a o b) with a o b = {compose(a, b)}"
                    first = (a, b, why)
    return FunctorReport(pairs, failures, first)
