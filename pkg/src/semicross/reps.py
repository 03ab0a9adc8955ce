"""Finite matrix realizations of the representations.

* The orbit shift representation ``sum_n S^n pi~(c_n)`` on ``l^2(Z_+) (x) C^X``
  with ``pi~(c) = diag(c o phi^m)_m``. It splits over points: the block of
  ``x`` is the weighted shift polynomial with entry ``(m + n, m)`` equal to
  ``c_n(phi^m(x))``.
* Its right counterpart ``sum_n pi~(c_n) (S*)^n``.
* The symbol of ``sum_n U^n pihat(f_n)`` in the crossed product by a
  permutation ``sigma``: per orbit ``O`` of length ``p`` the Laurent
  polynomial ``A_O(z) = sum_n z^n W^n D(f_n)`` with ``W e_r = e_{r+1 mod p}``
  and ``D(f) = diag(f(o_0), ..., f(o_{p-1}))``, ``o_r = sigma^r(o_0)``.
* A window compression of the regular representation, used as an oracle for
  the symbol.
* Covariant pairs and a validator for the covariance relation and the kind
  of the operator.

Matrices on a tensor product ``C^X (x) C^M`` use point-major indices
``x * M + m``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping

import numpy as np
import scipy.sparse as sp

from .algebra import LEFT, RIGHT, Poly, dual_side
from .dynsys import FiniteSystem, direct_limit, orbit_data, phi_power
from .errors import NotPermutationError, SemicrossError, SideMismatchError

__all__ = [
    "PAIR_TOL",
    "KINDS",
    "TruncatedOperator",
    "SymbolOperator",
    "CovariantPair",
    "PairReport",
    "orbit_shift_rep",
    "right_orbit_rep",
    "point_shift_matrix",
    "symbol_rep",
    "symbol_rep_blocks",
    "orbit_symbol",
    "regular_rep_oracle",
    "periodic_regular_oracle",
    "orbit_shift_pair",
    "regular_pair",
    "adjoint_pair",
    "validate_pair",
    "laurent_coeffs",
]

PAIR_TOL = 1e-10
KINDS = ("contractive", "isometric", "co-isometric", "unitary")


@dataclass(frozen=True)
class TruncatedOperator:
    """Dense compression of an operator on ``C^n (x) C^depth``."""

    matrix: np.ndarray
    depth: int
    size: int
    label: str = ""

    def __post_init__(self):
        if self.matrix.shape != (self.size * self.depth, self.size * self.depth):
            raise SemicrossError("matrix: shape does not match size * depth")

    def norm(self) -> float:
        if self.matrix.size == 0:
            return 0.0
        return float(np.linalg.norm(self.matrix, 2))

    def block(self, x: int) -> np.ndarray:
        s = slice(x * self.depth, (x + 1) * self.depth)
        return self.matrix[s, s]


def _require(F: Poly, side: str):
    if F.side != side:
        raise SideMismatchError(f"side: expected a {side} polynomial, got {F.side}")


def orbit_shift_rep(sys: FiniteSystem, F: Poly, M: int) -> TruncatedOperator:
    """Compression of ``sum_n S^n pi~(c_n)`` to depth ``M``."""
    _require(F, LEFT)
    if F.system != sys:
        raise SideMismatchError("system: polynomial lives over a different system")
    if M < max(F.degree + 1, 1):
        raise SemicrossError(f"depth: M={M} is below max(degree + 1, 1) = {max(F.degree + 1, 1)}")
    n = sys.n
    T = np.zeros((n * M, n * M), dtype=complex)
    traj = np.stack([phi_power(sys, m) for m in range(M)], axis=1)  # (n, M)
    for deg, c in F.coeffs.items():
        for x in range(n):
            w = c[traj[x, : M - deg]]
            rows = x * M + np.arange(deg, M)
            cols = x * M + np.arange(M - deg)
            T[rows, cols] = w
    return TruncatedOperator(T, M, n, "orbit_shift")


def right_orbit_rep(sys: FiniteSystem, F: Poly, M: int) -> TruncatedOperator:
    """Compression of ``sum_n pi~(c_n) (S*)^n`` to depth ``M``."""
    _require(F, RIGHT)
    if F.system != sys:
        raise SideMismatchError("system: polynomial lives over a different system")
    if M < max(F.degree + 1, 1):
        raise SemicrossError(f"depth: M={M} is below max(degree + 1, 1) = {max(F.degree + 1, 1)}")
    n = sys.n
    T = np.zeros((n * M, n * M), dtype=complex)
    traj = np.stack([phi_power(sys, m) for m in range(M)], axis=1)
    for deg, c in F.coeffs.items():
        for x in range(n):
            w = c[traj[x, : M - deg]]
            rows = x * M + np.arange(M - deg)
            cols = x * M + np.arange(deg, M)
            T[rows, cols] = w
    return TruncatedOperator(T, M, n, "right_orbit_shift")


def point_shift_matrix(coeffs: np.ndarray, traj: np.ndarray, M: int,
                       rows: int | None = None, cols: int | None = None) -> sp.csr_matrix:
    """Sparse block of one point for a matrix of left polynomials.

    Parameters
    ----------
    coeffs : array, shape (K, nu, nu, n)
        ``coeffs[k, i, j]`` is the degree-``k`` coefficient of entry ``(i, j)``.
    traj : int array
        ``traj[m] = phi^m(x)``, long enough for the requested columns.
    M : int
        Number of block columns when ``cols`` is not given.
    rows, cols : int, optional
        Number of block rows and columns (defaults ``M``).

    Returns
    -------
    Matrix with interleaved indices ``m * nu + i`` whose block ``(m + k, m)``
    is ``coeffs[k, :, :, traj[m]]``.
    """
    K, nu = coeffs.shape[0], coeffs.shape[1]
    rows = M if rows is None else rows
    cols = M if cols is None else cols
    r_idx, c_idx, vals = [], [], []
    ii, jj = np.meshgrid(np.arange(nu), np.arange(nu), indexing="ij")
    for k in range(K):
        ncol = min(cols, rows - k)
        if ncol <= 0:
            continue
        m = np.arange(ncol)
        w = coeffs[k][:, :, traj[:ncol]]  # (nu, nu, ncol)
        if not np.any(w):
            continue
        r_idx.append(((m + k)[None, None, :] * nu + ii[:, :, None]).ravel())
        c_idx.append((m[None, None, :] * nu + jj[:, :, None]).ravel())
        vals.append(w.ravel())
    shape = (rows * nu, cols * nu)
    if not vals:
        return sp.csr_matrix(shape, dtype=complex)
    return sp.csr_matrix((np.concatenate(vals), (np.concatenate(r_idx), np.concatenate(c_idx))),
                         shape=shape)


def laurent_coeffs(sys: FiniteSystem, laurent) -> dict[int, np.ndarray]:
    """Normalize a Laurent family (mapping or object with ``coeffs``)."""
    items = laurent.coeffs if hasattr(laurent, "coeffs") else laurent
    if not isinstance(items, Mapping):
        raise SemicrossError("laurent: expected a mapping from integers to functions")
    out = {}
    for n, f in items.items():
        arr = np.array(f, dtype=complex).reshape(-1)
        if arr.shape[0] != sys.n:
            raise SemicrossError(f"laurent[{n}]: length {arr.shape[0]} does not match {sys.n}")
        out[int(n)] = arr
    return out


@dataclass(frozen=True)
class SymbolOperator:
    """Laurent polynomial symbols ``A_O(z)``, one per orbit.

    ``blocks[o]`` maps degree ``n`` to the coefficient matrix of ``z^n`` for
    orbit ``orbits[o]``; for a ``nu x nu`` matrix of elements the block has
    side ``nu * p`` with index ``i * p + r``.
    """

    system: FiniteSystem
    orbits: tuple[tuple[int, ...], ...]
    nu: int
    blocks: tuple[dict[int, np.ndarray], ...] = field(repr=False)

    def evaluate(self, z: complex) -> list[np.ndarray]:
        out = []
        for O, blk in zip(self.orbits, self.blocks):
            s = self.nu * len(O)
            A = np.zeros((s, s), dtype=complex)
            for n, C in blk.items():
                A += z ** n * C
            out.append(A)
        return out

    def stack(self, o: int) -> tuple[np.ndarray, np.ndarray]:
        """Degrees and stacked coefficient matrices of orbit ``o``."""
        blk = self.blocks[o]
        s = self.nu * len(self.orbits[o])
        if not blk:
            return np.zeros(0, dtype=int), np.zeros((0, s, s), dtype=complex)
        degs = np.array(sorted(blk), dtype=int)
        return degs, np.stack([blk[d] for d in degs])

    def evaluate_many(self, o: int, theta: np.ndarray) -> np.ndarray:
        degs, C = self.stack(o)
        ph = np.exp(1j * np.outer(theta, degs))
        return np.einsum("gk,kab->gab", ph, C)

    def norm_at(self, z: complex) -> float:
        return max(float(np.linalg.norm(A, 2)) for A in self.evaluate(z))


def orbit_symbol(orbit, coeffs: Mapping[int, np.ndarray], nu: int | None = None
                 ) -> tuple[np.ndarray, np.ndarray]:
    """Degrees and stacked coefficients of ``A_O`` for one orbit.

    ``orbit`` lists ``o_0, sigma(o_0), ...``; ``coeffs[n]`` has shape
    ``(nu, nu, n_points)``. Block index ``i * p + r``.
    """
    p = len(orbit)
    pts = np.asarray(orbit)
    r = np.arange(p)
    if nu is None:
        nu = next(iter(coeffs.values())).shape[0] if coeffs else 1
    degs, mats = [], []
    for n in sorted(coeffs):
        vals = coeffs[n][:, :, pts]  # (nu, nu, p)
        if not np.any(vals):
            continue
        C = np.zeros((nu * p, nu * p), dtype=complex)
        for i in range(nu):
            for j in range(nu):
                C[i * p + (r + n) % p, j * p + r] = vals[i, j]
        degs.append(n)
        mats.append(C)
    if not degs:
        return np.zeros(0, dtype=int), np.zeros((0, nu * p, nu * p), dtype=complex)
    return np.array(degs, dtype=int), np.stack(mats)


def symbol_rep_blocks(sys: FiniteSystem, coeffs: Mapping[int, np.ndarray],
                      nu: int | None = None) -> SymbolOperator:
    """Symbol of a ``nu x nu`` matrix of crossed-product elements.

    ``coeffs[n]`` has shape ``(nu, nu, n_points)``.
    """
    if not sys.is_permutation:
        raise NotPermutationError("phi: the symbol representation needs a permutation")
    orbits = orbit_data(sys).cycles
    if nu is None:
        nu = next(iter(coeffs.values())).shape[0] if coeffs else 1
    blocks = []
    for O in orbits:
        degs, C = orbit_symbol(O, coeffs, nu)
        blocks.append({int(d): c for d, c in zip(degs, C)})
    return SymbolOperator(sys, orbits, nu, tuple(blocks))


def symbol_rep(sys: FiniteSystem, laurent) -> SymbolOperator:
    """Symbol of ``sum_n U^n pihat(f_n)`` over a permutation system."""
    if not sys.is_permutation:
        raise NotPermutationError("phi: the symbol representation needs a permutation")
    co = laurent_coeffs(sys, laurent)
    return symbol_rep_blocks(sys, {n: f[None, None, :] for n, f in co.items()})


def regular_rep_oracle(sys: FiniteSystem, laurent, L: int) -> TruncatedOperator:
    """Compression of ``sum_n U^n pihat(f_n)`` to ``C^X (x) C^{2L+1}``.

    Window index ``m + L`` for ``-L <= m <= L``; the entry at row
    ``(x, m + n)`` and column ``(x, m)`` is ``f_n(sigma^m(x))``.
    """
    if not sys.is_permutation:
        raise NotPermutationError("phi: the regular representation needs a permutation")
    co = laurent_coeffs(sys, laurent)
    n, W = sys.n, 2 * L + 1
    T = np.zeros((n * W, n * W), dtype=complex)
    ms = np.arange(-L, L + 1)
    powers = {m: phi_power(sys, m) for m in ms}
    for deg, f in co.items():
        for m in ms:
            if not -L <= m + deg <= L:
                continue
            vals = f[powers[m]]
            for x in range(n):
                T[x * W + m + deg + L, x * W + m + L] = vals[x]
    return TruncatedOperator(T, W, n, "regular")


def periodic_regular_oracle(sys: FiniteSystem, laurent, W: int) -> TruncatedOperator:
    """Regular representation on ``C^X (x) C^W`` with a cyclic window.

    ``W`` must be a multiple of every cycle length so that ``sigma^W = id``.
    The entry at row ``(x, (m + n) mod W)`` and column ``(x, m)`` is
    ``f_n(sigma^m(x))``. Its norm is ``max ||A_O(z)||`` over ``z^W = 1``.
    """
    if not sys.is_permutation:
        raise NotPermutationError("phi: the regular representation needs a permutation")
    if W < 1 or any(W % p for p in orbit_data(sys).periods):
        raise SemicrossError("W: must be a positive multiple of every cycle length")
    co = laurent_coeffs(sys, laurent)
    n = sys.n
    T = np.zeros((n * W, n * W), dtype=complex)
    for deg, f in co.items():
        for m in range(W):
            vals = f[phi_power(sys, m)]
            for x in range(n):
                T[x * W + (m + deg) % W, x * W + m] += vals[x]
    return TruncatedOperator(T, W, n, "periodic_regular")


@dataclass(frozen=True)
class CovariantPair:
    """Representation ``pi`` of ``C(X)`` given on the point idempotents, and ``V``.

    ``inner`` lists the indices where kind conditions are tested; ``None``
    means the whole space.
    """

    pi: tuple[np.ndarray, ...]
    V: np.ndarray
    kind: str
    side: str
    inner: np.ndarray | None = None

    @property
    def dim(self) -> int:
        return self.V.shape[0]

    def pi_of(self, f) -> np.ndarray:
        out = np.zeros_like(self.V)
        for fx, P in zip(np.asarray(f, dtype=complex), self.pi):
            if fx:
                out = out + fx * P
        return out


@dataclass(frozen=True)
class PairReport:
    homomorphism: float
    unital: float
    covariance: float
    kind: float
    tol: float = PAIR_TOL

    @property
    def violations(self) -> dict[str, float]:
        return {"homomorphism": self.homomorphism, "unital": self.unital,
                "covariance": self.covariance, "kind": self.kind}

    @property
    def holds(self) -> dict[str, bool]:
        return {k: v <= self.tol for k, v in self.violations.items()}

    @property
    def accepted(self) -> bool:
        return all(self.holds.values())

    @property
    def max_violation(self) -> float:
        return max(self.violations.values())


def _sub(A, idx):
    return A if idx is None else A[np.ix_(idx, idx)]


def validate_pair(pair: CovariantPair, sys: FiniteSystem, tol: float = PAIR_TOL) -> PairReport:
    """Measure how far ``pair`` is from a covariant pair of its kind.

    Covariance is checked on the point idempotents ``delta_x``, where
    ``alpha(delta_x)`` is the indicator of ``phi^{-1}(x)``.
    """
    d = pair.dim
    if pair.V.shape != (d, d):
        raise SemicrossError("V: expected a square matrix")
    if len(pair.pi) != sys.n:
        raise SemicrossError(f"pi: expected {sys.n} idempotents, got {len(pair.pi)}")
    if any(P.shape != (d, d) for P in pair.pi):
        raise SemicrossError("pi: idempotent shape does not match V")
    if pair.kind not in KINDS:
        raise SemicrossError(f"kind: unknown kind {pair.kind!r}")

    hom = 0.0
    for x, P in enumerate(pair.pi):
        hom = max(hom, np.max(np.abs(P @ P - P), initial=0.0),
                  np.max(np.abs(P.conj().T - P), initial=0.0))
        for y in range(x + 1, sys.n):
            hom = max(hom, np.max(np.abs(P @ pair.pi[y]), initial=0.0))
    total = sum(pair.pi) if pair.pi else np.zeros((d, d))
    unital = float(np.max(np.abs(total - np.eye(d)), initial=0.0))

    cov = 0.0
    V = pair.V
    for x in range(sys.n):
        pre = np.array([1.0 if sys.phi[y] == x else 0.0 for y in range(sys.n)])
        Px, Pa = pair.pi[x], pair.pi_of(pre)
        if pair.side == LEFT:
            r = Px @ V - V @ Pa
        else:
            r = V @ Px - Pa @ V
        cov = max(cov, float(np.max(np.abs(r), initial=0.0)))

    I = np.eye(d if pair.inner is None else len(pair.inner))
    kind = 0.0
    if pair.kind == "contractive":
        kind = max(0.0, float(np.linalg.norm(V, 2)) - 1.0) if d else 0.0
    if pair.kind in ("isometric", "unitary"):
        kind = max(kind, float(np.max(np.abs(_sub(V.conj().T @ V, pair.inner) - I), initial=0.0)))
    if pair.kind in ("co-isometric", "unitary"):
        kind = max(kind, float(np.max(np.abs(_sub(V @ V.conj().T, pair.inner) - I), initial=0.0)))
    return PairReport(float(hom), unital, cov, kind, tol)


def orbit_shift_pair(sys: FiniteSystem, M: int, margin: int = 1) -> CovariantPair:
    """The pair ``(pi~, S)`` at depth ``M + margin``, tested on the first ``M`` levels."""
    D = M + margin
    n = sys.n
    traj = np.stack([phi_power(sys, m) for m in range(D)], axis=1)
    pis = []
    for x in range(n):
        pis.append(np.diag((traj == x).astype(complex).ravel()))
    s = np.eye(D, k=-1, dtype=complex)
    S = np.kron(np.eye(n), s)
    inner = np.array([y * D + m for y in range(n) for m in range(M)])
    return CovariantPair(tuple(pis), S, "isometric", LEFT, inner)


def regular_pair(sys: FiniteSystem, L: int) -> CovariantPair:
    """``(pihat o restriction, U)`` on ``C^E (x) C^{2L+1}``, tested for ``|m| < L``.

    Idempotents of points outside the eventual image act as zero.
    """
    lim, pts = direct_limit(sys)
    e, W = lim.n, 2 * L + 1
    ms = np.arange(-L, L + 1)
    where = np.stack([np.asarray(pts)[phi_power(lim, m)] for m in ms], axis=1)  # (e, W)
    pis = [np.diag((where == x).astype(complex).ravel()) for x in range(sys.n)]
    U = np.kron(np.eye(e), np.eye(W, k=-1, dtype=complex))
    inner = np.array([y * W + m + L for y in range(e) for m in range(-L + 1, L)])
    return CovariantPair(tuple(pis), U, "unitary", LEFT, inner)


def adjoint_pair(pair: CovariantPair) -> CovariantPair:
    """``(pi, V) -> (pi, V*)``: swaps sides and isometric with co-isometric."""
    dual = {"contractive": "contractive", "isometric": "co-isometric",
            "co-isometric": "isometric", "unitary": "unitary"}
    return CovariantPair(pair.pi, pair.V.conj().T, dual[pair.kind], dual_side(pair.side),
                         pair.inner)
