"""Numeric block-matrix models: n x n matrices with entries in M_d(C)."""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .errors import PrecondFailed, ShapeMismatch
from .tensor_rep import IndexSpace, c_matrix, relative_residual

DEFAULT_TOL = 1e-9
PRESETS = ("Opq", "Bpq", "Spq", "Hpq", "Hspq", "H4", "magic", "cubic", "sudoku", "doubleSudoku")
RAW_PRESETS = ("H4", "magic", "cubic", "sudoku", "doubleSudoku")


@dataclass(frozen=True, eq=False)
class BlockMatrixModel:
    """``entries[z, y]`` is the d x d matrix U_{z,y}."""

    entries: np.ndarray

    def __post_init__(self):
        e = np.asarray(self.entries, dtype=complex)
        if e.ndim == 2:
            e = e[:, :, None, None]
        if e.ndim != 4 or e.shape[0] != e.shape[1] or e.shape[2] != e.shape[3]:
            raise ShapeMismatch(f"entries must have shape (n, n, d, d), got {e.shape}")
        object.__setattr__(self, "entries", e)

    @property
    def n(self) -> int:
        return self.entries.shape[0]

    @property
    def d(self) -> int:
        return self.entries.shape[2]

    def big(self) -> np.ndarray:
        """The nd x nd matrix with row index (z, a)."""
        n, d = self.n, self.d
        return self.entries.transpose(0, 2, 1, 3).reshape(n * d, n * d)

    @classmethod
    def from_big(cls, M: np.ndarray, n: int) -> BlockMatrixModel:
        d = M.shape[0] // n
        return cls(M.reshape(n, d, n, d).transpose(0, 2, 1, 3))

    def adjoint_entries(self) -> BlockMatrixModel:
        """The matrix (U_{z,y}^*), i.e. U-bar."""
        return BlockMatrixModel(self.entries.conj().transpose(0, 1, 3, 2))

    def to_json(self) -> str:
        e = self.entries
        data = {
            "n": self.n,
            "d": self.d,
            "entries": [[[[[float(x.real), float(x.imag)] for x in row] for row in e[z, y]] for y in range(self.n)] for z in range(self.n)],
        }
        return json.dumps(data, sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> BlockMatrixModel:
        data = json.loads(text)
        arr = np.array(data["entries"], dtype=float)
        model = cls(arr[..., 0] + 1j * arr[..., 1])
        if model.n != data["n"] or model.d != data["d"]:
            raise ShapeMismatch("declared n/d do not match entries")
        return model


def as_model(U) -> BlockMatrixModel:
    return U if isinstance(U, BlockMatrixModel) else BlockMatrixModel(np.asarray(U))


def _dag(X):
    return np.conj(np.swapaxes(X, -1, -2))


# -- relation checks ---------------------------------------------------------------


@dataclass(frozen=True)
class CheckReport:
    passed: bool
    residuals: dict

    def __bool__(self):
        return self.passed

    @property
    def worst(self) -> float:
        return max(self.residuals.values(), default=0.0)


def _unitary(M):
    I = np.eye(M.shape[0])
    return max(relative_residual(M @ _dag(M), I), relative_residual(_dag(M) @ M, I))


def _bar_perm(space: IndexSpace):
    return space.bars()


def _bar_relations(E, space):
    b = _bar_perm(space)
    return relative_residual(_dag(E), E[b][:, b])


def _selfadjoint(E):
    return relative_residual(E, _dag(E))


def _projections(E):
    return max(_selfadjoint(E), relative_residual(E @ E, E))


def _partial_isometries(E):
    return relative_residual(E @ _dag(E) @ E, E)


def _partial_symmetries(E):
    return max(_selfadjoint(E), relative_residual(E @ E @ E, E))


def _sums(E):
    one = np.broadcast_to(np.eye(E.shape[2]), (E.shape[0],) + E.shape[2:])
    return max(relative_residual(E.sum(axis=1), one), relative_residual(E.sum(axis=0), one))


def _cubic_products(E):
    """Products of different entries in one row or column vanish."""
    n = E.shape[0]
    worst = 0.0
    off = ~np.eye(n, dtype=bool)
    for z in range(n):
        row = np.einsum("yab,xbc->yxac", E[z], E[z])[off]
        col = np.einsum("yab,xbc->yxac", E[:, z], E[:, z])[off]
        for X in (row, col):
            worst = max(worst, float(np.linalg.norm(X)) / max(float(np.linalg.norm(E)), 1.0))
    return worst


def _block_pattern(E, pattern):
    """Residual of E against a block pattern given as a grid of block letters."""
    g = len(pattern)
    s = E.shape[0] // g
    blocks = {}
    worst = 0.0
    for r, line in enumerate(pattern):
        for c, name in enumerate(line):
            B = E[r * s : (r + 1) * s, c * s : (c + 1) * s]
            if name in blocks:
                worst = max(worst, relative_residual(B, blocks[name]))
            else:
                blocks[name] = B
    return worst


def check(U, preset: str, p: int = 0, q: int = 0, tol: float = DEFAULT_TOL) -> CheckReport:
    """Residual of each defining relation of ``preset``; passes iff all <= tol."""
    U = as_model(U)
    E = U.entries
    if preset not in PRESETS:
        raise ValueError(f"unknown preset {preset!r}; choose from {', '.join(PRESETS)}")
    res = {"unitary": _unitary(U.big())}
    if preset not in RAW_PRESETS:
        space = IndexSpace(p, q)
        if U.n != space.n:
            raise ShapeMismatch(f"model has n={U.n}, but 2p+q={space.n}")
        res["bar"] = _bar_relations(E, space)
        extra = {
            "Opq": {},
            "Bpq": {"sums": _sums},
            "Spq": {"projections": _projections},
            "Hpq": {"partialIsometries": _partial_isometries},
            "Hspq": {"partialSymmetries": _partial_symmetries},
        }[preset]
        for name, fn in extra.items():
            res[name] = fn(E)
    elif preset == "H4":
        res["barUnitary"] = _unitary(U.adjoint_entries().big())
        res["normal"] = relative_residual(E @ _dag(E), _dag(E) @ E)
        E2 = E @ E
        P = E @ _dag(E)
        res["fourthPower"] = relative_residual(E2 @ E2, P)
        res["projections"] = _projections(P)
    else:
        res["projections" if preset != "cubic" else "selfadjoint"] = (
            _projections(E) if preset != "cubic" else _selfadjoint(E)
        )
        if preset == "cubic":
            res["products"] = _cubic_products(E)
        else:
            res["sums"] = _sums(E)
        if preset == "sudoku":
            if U.n % 2:
                raise ShapeMismatch("sudoku form needs even n")
            res["pattern"] = _block_pattern(E, ["ab", "ba"])
        if preset == "doubleSudoku":
            if U.n % 4:
                raise ShapeMismatch("double sudoku form needs n divisible by 4")
            res["pattern"] = _block_pattern(E, ["PQRS", "QPSR", "RSPQ", "SRQP"])
    return CheckReport(all(v <= tol for v in res.values()), res)


def selfadjoint_entries(U, tol: float = DEFAULT_TOL) -> bool:
    return _selfadjoint(as_model(U).entries) <= tol


def bar_relations_hold(U, p: int, q: int, tol: float = DEFAULT_TOL) -> bool:
    return _bar_relations(as_model(U).entries, IndexSpace(p, q)) <= tol


# -- transforms --------------------------------------------------------------------


def conjugate_by_c(U, p: int, q: int) -> BlockMatrixModel:
    """(C (x) 1_d) U (C^* (x) 1_d)."""
    U = as_model(U)
    if U.n != 2 * p + q:
        raise ShapeMismatch(f"model has n={U.n}, but 2p+q={2 * p + q}")
    C = np.kron(c_matrix(p, q), np.eye(U.d))
    return BlockMatrixModel.from_big(C @ U.big() @ _dag(C), U.n)


def unconjugate_by_c(V, p: int, q: int) -> BlockMatrixModel:
    """Inverse of :func:`conjugate_by_c`."""
    V = as_model(V)
    C = np.kron(c_matrix(p, q), np.eye(V.d))
    return BlockMatrixModel.from_big(_dag(C) @ V.big() @ C, V.n)


def sudoku_permutation(p: int) -> list[int]:
    return [2 * a for a in range(p)] + [2 * a + 1 for a in range(p)]


def sudoku_transform(U, p: int) -> BlockMatrixModel:
    """Reorder (0,1),(1,1),...,(0,p),(1,p) as (0,1),...,(0,p),(1,1),...,(1,p)."""
    U = as_model(U)
    if U.n != 2 * p:
        raise ShapeMismatch(f"sudoku transform needs n = 2p = {2 * p}, got {U.n}")
    perm = sudoku_permutation(p)
    return BlockMatrixModel(U.entries[perm][:, perm])


def double_sudoku(U, p: int) -> BlockMatrixModel:
    """Split the partial symmetries of a sudoku-form 2p model into positive
    and negative parts, giving the 4p x 4p block magic unitary."""
    W = sudoku_transform(U, p).entries
    sq = W @ W
    plus, minus = (sq + W) / 2, (sq - W) / 2
    top = np.concatenate([plus, minus], axis=1)
    bottom = np.concatenate([minus, plus], axis=1)
    return BlockMatrixModel(np.concatenate([top, bottom], axis=0))


def quotient_projections(U, p: int, q: int, tol: float = DEFAULT_TOL) -> BlockMatrixModel:
    """Entrywise P_{z,y} = U_{z,y}^* U_{z,y}."""
    U = as_model(U)
    rep = check(U, "Hpq", p, q, tol)
    if not rep:
        raise PrecondFailed(f"model does not satisfy the Hpq relations (residual {rep.worst:.3g})")
    E = U.entries
    return BlockMatrixModel(_dag(E) @ E)


def orthogonality_residual(U) -> float:
    """Largest ||U_{y,z} U_{x,z}^*|| and ||U_{z,y}^* U_{z,x}|| over x != y."""
    E = as_model(U).entries
    n = E.shape[0]
    off = ~np.eye(n, dtype=bool)
    rows = np.einsum("yzab,xzcb->zyxac", E, E.conj())[:, off]
    cols = np.einsum("zyba,zxbc->zyxac", E.conj(), E)[:, off]
    return float(max(np.abs(rows).max(initial=0.0), np.abs(cols).max(initial=0.0)))


def classify_partial_symmetry(z: complex, k: int = 1, tol: float = 1e-9):
    """For a scalar solving z = conj(z) |z|^(2k), return which of -1, 0, 1 it is.

    Returns None when ``z`` is not a solution.
    """
    if abs(z - np.conj(z) * abs(z) ** (2 * k)) > tol:
        return None
    for v in (-1, 0, 1):
        if abs(z - v) <= max(tol, 1e-6):
            return v
    raise AssertionError(f"unexpected solution {z}")


# -- classical samplers ------------------------------------------------------------


SAMPLERS = ("O", "B", "HxS", "TorusH", "H4", "Hq", "Sq")
SAMPLER_PRESET = {"O": "Opq", "B": "Bpq", "HxS": "Spq", "TorusH": "Hpq", "H4": "Hspq", "Hq": "Hspq", "Sq": "Spq"}


def haar_orthogonal(n: int, rng: np.random.Generator) -> np.ndarray:
    if n == 0:
        return np.zeros((0, 0))
    Q, R = np.linalg.qr(rng.standard_normal((n, n)))
    return Q * np.sign(np.diag(R))


def _permutation(perm) -> np.ndarray:
    P = np.zeros((len(perm), len(perm)))
    P[np.arange(len(perm)), perm] = 1
    return P


def _signed_permutation(q: int, rng) -> np.ndarray:
    return _permutation(rng.permutation(q)) * rng.choice([-1.0, 1.0], size=q)[:, None]


def _pair_blocks(p: int, rng, block_of) -> np.ndarray:
    """2p x 2p matrix with a 2x2 block at (alpha, sigma(alpha)) for each alpha."""
    M = np.zeros((2 * p, 2 * p), dtype=complex)
    sigma = rng.permutation(p)
    for a in range(p):
        b = sigma[a]
        M[2 * a : 2 * a + 2, 2 * b : 2 * b + 2] = block_of(rng)
    return M


def _direct_sum(A, B):
    n, m = A.shape[0], B.shape[0]
    M = np.zeros((n + m, n + m), dtype=complex)
    M[:n, :n], M[n:, n:] = A, B
    return M


def _fixing_frame(v: np.ndarray) -> np.ndarray:
    """Orthonormal real basis whose leading columns span Re v and Im v."""
    n = v.shape[0]
    cols = []
    for w in (v.real, v.imag):
        for c in cols:
            w = w - (c @ w) * c
        if np.linalg.norm(w) > 1e-9:
            cols.append(w / np.linalg.norm(w))
    A = np.column_stack(cols + [np.eye(n)[:, j] for j in range(n)])
    Q, _ = np.linalg.qr(A)
    Q[:, : len(cols)] = np.column_stack(cols)
    return Q, len(cols)


def sample_classical(group: str, p: int, q: int, seed: int = 0) -> BlockMatrixModel:
    """A d = 1 element of the classical version of the named group."""
    rng = np.random.default_rng(seed)
    n = 2 * p + q
    if group == "O":
        C = c_matrix(p, q)
        return BlockMatrixModel(_dag(C) @ haar_orthogonal(n, rng) @ C)
    if group == "B":
        C = c_matrix(p, q)
        frame, s = _fixing_frame(C @ np.ones(n))
        O = frame @ _direct_sum(np.eye(s), haar_orthogonal(n - s, rng)).real @ frame.T
        return BlockMatrixModel(_dag(C) @ O @ C)
    if group == "HxS":
        F = np.array([[0, 1], [1, 0]])
        top = _pair_blocks(p, rng, lambda r: np.eye(2) if r.random() < 0.5 else F)
        return BlockMatrixModel(_direct_sum(top, _permutation(rng.permutation(q))))
    if group == "TorusH":
        def torus(r):
            z = np.exp(1j * r.uniform(0, 2 * np.pi))
            return np.diag([z, z.conjugate()]) if r.random() < 0.5 else np.array([[0, z], [z.conjugate(), 0]])

        return BlockMatrixModel(_direct_sum(_pair_blocks(p, rng, torus), _signed_permutation(q, rng)))
    if group == "H4":
        return BlockMatrixModel(_direct_sum(_pair_blocks(p, rng, lambda r: _h4_block(r.integers(4))), _signed_permutation(q, rng)))
    if group == "Hq":
        return BlockMatrixModel(_signed_permutation(q, rng))
    if group == "Sq":
        return BlockMatrixModel(_permutation(rng.permutation(q)))
    raise ValueError(f"unknown group {group!r}; choose from {', '.join(SAMPLERS)}")


def _h4_block(r: int) -> np.ndarray:
    """i^r = a + ib written as [[a, b], [b, a]]."""
    a, b = [(1, 0), (0, 1), (-1, 0), (0, -1)][r]
    return np.array([[a, b], [b, a]], dtype=complex)


def h4_complex_form(U, p: int) -> BlockMatrixModel:
    """Read a sudoku-form pair model [[a, b], [b, a]] as the p x p matrix a + ib."""
    E = sudoku_transform(BlockMatrixModel(as_model(U).entries[: 2 * p, : 2 * p]), p).entries
    return BlockMatrixModel(E[:p, :p] + 1j * E[:p, p:])


# -- witness search ----------------------------------------------------------------


def _polar(M):
    X, _, Yh = np.linalg.svd(M)
    return X @ Yh


def witness_search(p: int = 1, q: int = 1, d: int = 2, budget: int = 50, seed: int = 0, iters: int = 300, tol: float = 1e-9):
    """Look for a model of the Hpq relations with a mixing block U_{i alpha, M}
    of norm > 0.1, by alternating projections from random starts.

    Returns a validated model or None once ``budget`` restarts are spent.
    """
    if d > 6:
        raise ValueError("witness search is limited to d <= 6")
    rng = np.random.default_rng(seed)
    space = IndexSpace(p, q)
    n = space.n
    b = space.bars()
    for _ in range(budget):
        G = rng.standard_normal((n * d, n * d)) + 1j * rng.standard_normal((n * d, n * d))
        U = BlockMatrixModel.from_big(_polar(G), n)
        for _ in range(iters):
            E = U.entries
            E = (E + _dag(E[b][:, b])) / 2
            E = BlockMatrixModel.from_big(_polar(BlockMatrixModel(E).big()), n).entries
            X, s, Yh = np.linalg.svd(E)  # batched over entries
            E = (X * (s > 0.5)[..., None, :]) @ Yh
            U = BlockMatrixModel(E)
        if check(U, "Hpq", p, q, tol) and mixing_norm(U, p) > 0.1:
            return U
    return None


def mixing_norm(U, p: int) -> float:
    """Largest operator norm among the blocks U_{i alpha, M} and U_{M, i alpha}."""
    E = as_model(U).entries
    blocks = np.concatenate([E[: 2 * p, 2 * p :].reshape(-1, *E.shape[2:]), E[2 * p :, : 2 * p].reshape(-1, *E.shape[2:])])
    if len(blocks) == 0:
        return 0.0
    return float(np.linalg.norm(blocks, ord=2, axis=(1, 2)).max())
