"""Norm engines with certified brackets.

Two engines compute norms in the semicrossed products:

* The shift engine computes ``||sum_n S^n pi~(c_n)||``. Lower bounds come
  from compressions at doubling depths. Upper bounds come from the orbit
  symbols of the cycles and, for points with a preperiod, from a
  Cholesky certificate whose periodic tail is closed by a monotone
  Riccati recursion.
* The symbol engine computes ``sup_z ||A_O(z)||`` by branch and bound on
  the circle with certified cell bounds.

``semicrossed_norm`` and ``matrix_norm`` route each (side, kind) pair to
the engine that realizes the norm. ``CrossedElement`` holds finite sums
``sum_n U^n pihat(f_n)`` over a permutation system. It carries the Fourier
coefficient and Fejer mean operations.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping

import numpy as np
import scipy.sparse as sp

from scipy.linalg import cho_solve, eigh, solve_discrete_lyapunov
from scipy.linalg.lapack import zpbtrf, zpbtrs

from . import _banded
from .algebra import LEFT, RIGHT, MatPoly, Poly
from .dynsys import FiniteSystem, direct_limit, orbit_data, phi_power
from .errors import NotPermutationError, SemicrossError, SideMismatchError
from .reps import (KINDS, SymbolOperator, laurent_coeffs, orbit_symbol, point_shift_matrix,
                   symbol_rep, symbol_rep_blocks)

__all__ = [
    "DEFAULT_TOL",
    "DEFAULT_MAX_DEPTH",
    "DEFAULT_GRID",
    "NormResult",
    "CrossedElement",
    "shift_norm",
    "right_shift_norm",
    "symbol_norm",
    "symbol_operator_norm",
    "semicrossed_norm",
    "matrix_norm",
    "fourier_coeff",
    "fejer_sum",
    "cond_expectation",
    "periodic_depth_bound",
    "route_of",
    "dual_kind",
]

DEFAULT_TOL = 1e-6
DEFAULT_MAX_DEPTH = 2 ** 14
DEFAULT_GRID = 512
_START_DEPTH = 64
_MAX_SYMBOL_EVALS = 1 << 22


@dataclass(frozen=True)
class NormResult:
    """A norm value with a certified bracket.

    ``value`` is the best computed lower bound, so it lies in the bracket by
    construction; ``converged`` states that the bracket is within the
    requested tolerance.
    """

    value: float
    lower_bound: float
    upper_bound: float
    converged: bool
    effort: dict = field(default_factory=dict, compare=False)

    @property
    def width(self) -> float:
        return self.upper_bound - self.lower_bound

    def to_dict(self) -> dict:
        return {"value": self.value, "lower_bound": self.lower_bound,
                "upper_bound": self.upper_bound, "converged": self.converged,
                "effort": self.effort}


def _result(lower: float, upper: float, tol: float, effort: dict) -> NormResult:
    lower = max(0.0, float(lower))
    upper = max(lower, float(upper))
    return NormResult(lower, lower, upper, upper - lower <= tol, effort)


# ---------------------------------------------------------------------------
# crossed-product elements


class CrossedElement:
    """Finite sum ``sum_n U^n pihat(f_n)`` over a permutation system.

    Products follow ``U^n pihat(f) U^m pihat(g) = U^{n+m} pihat((f o sigma^m) g)``
    and adjoints ``(U^n pihat(f))* = U^{-n} pihat(conj(f) o sigma^{-n})``.
    """

    __slots__ = ("system", "_coeffs")

    def __init__(self, system: FiniteSystem, coeffs: Mapping[int, object] | None = None):
        if not system.is_permutation:
            raise NotPermutationError("phi: crossed-product elements need a permutation")
        self.system = system
        store = {}
        for n, f in laurent_coeffs(system, coeffs or {}).items():
            if np.any(f != 0):
                f.setflags(write=False)
                store[n] = f
        self._coeffs = dict(sorted(store.items()))

    @classmethod
    def unit(cls, system):
        return cls(system, {0: np.ones(system.n)})

    @classmethod
    def monomial(cls, system, n, f):
        return cls(system, {n: f})

    @classmethod
    def from_poly(cls, F: Poly) -> "CrossedElement":
        """Image of a left polynomial over a permutation system."""
        if F.side != LEFT:
            raise SideMismatchError("side: expected a left polynomial")
        return cls(F.system, F.coeffs)

    @property
    def coeffs(self) -> dict[int, np.ndarray]:
        return dict(self._coeffs)

    def support(self) -> tuple[int, ...]:
        return tuple(self._coeffs)

    @property
    def degree(self) -> int:
        """Largest ``|n|`` in the support, ``-1`` for zero."""
        return max((abs(n) for n in self._coeffs), default=-1)

    def _sigma(self, f, m):
        return np.asarray(f)[phi_power(self.system, m)]

    def __add__(self, other):
        if not isinstance(other, CrossedElement):
            return NotImplemented
        if other.system != self.system:
            raise SideMismatchError("system: operands live over different systems")
        out = dict(self._coeffs)
        for n, f in other._coeffs.items():
            out[n] = out[n] + f if n in out else f
        return CrossedElement(self.system, out)

    def __neg__(self):
        return CrossedElement(self.system, {n: -f for n, f in self._coeffs.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if np.isscalar(other):
            return CrossedElement(self.system, {n: other * f for n, f in self._coeffs.items()})
        if not isinstance(other, CrossedElement):
            return NotImplemented
        if other.system != self.system:
            raise SideMismatchError("system: operands live over different systems")
        out: dict[int, np.ndarray] = {}
        for n, f in self._coeffs.items():
            for m, g in other._coeffs.items():
                term = self._sigma(f, m) * g
                out[n + m] = out[n + m] + term if n + m in out else term
        return CrossedElement(self.system, out)

    def __rmul__(self, other):
        if np.isscalar(other):
            return self * other
        return NotImplemented

    def adjoint(self) -> "CrossedElement":
        return CrossedElement(self.system, {
            -n: self._sigma(np.conj(f), -n) for n, f in self._coeffs.items()})

    def allclose(self, other: "CrossedElement", tol: float = 1e-12) -> bool:
        keys = set(self._coeffs) | set(other._coeffs)
        z = np.zeros(self.system.n)
        return all(np.max(np.abs(self._coeffs.get(k, z) - other._coeffs.get(k, z))) <= tol
                   for k in keys)

    def symbol(self) -> SymbolOperator:
        return symbol_rep(self.system, self._coeffs)

    def __repr__(self):
        terms = ", ".join(f"{k}: {np.round(c, 6).tolist()}" for k, c in self._coeffs.items())
        return f"CrossedElement(phi={self.system.phi}, {{{terms}}})"


def fourier_coeff(elem: CrossedElement, n: int) -> np.ndarray:
    """``E(U^{-n} F)``, the degree-``n`` coefficient."""
    c = elem.coeffs.get(int(n))
    return np.zeros(elem.system.n, dtype=complex) if c is None else c.copy()


def cond_expectation(elem: CrossedElement) -> np.ndarray:
    return fourier_coeff(elem, 0)


def fejer_sum(elem: CrossedElement, N: int) -> CrossedElement:
    """Cesaro mean ``sum_{|n| <= N} (1 - |n|/(N+1)) U^n E_n(F)``."""
    if N < 0:
        raise SemicrossError("N: expected a nonnegative order")
    return CrossedElement(elem.system, {
        n: (1.0 - abs(n) / (N + 1)) * f for n, f in elem.coeffs.items() if abs(n) <= N})


# ---------------------------------------------------------------------------
# symbol engine


def _batched_norm(A: np.ndarray) -> np.ndarray:
    if A.shape[1] == 1 and A.shape[2] == 1:
        return np.abs(A[:, 0, 0])
    return np.linalg.svd(A, compute_uv=False)[:, 0]


def _orbit_sup(degs: np.ndarray, C: np.ndarray, tol: float, grid: int,
               max_evals: int = _MAX_SYMBOL_EVALS) -> tuple[float, float, dict]:
    """Certified bracket for ``sup_theta ||sum_k e^{i k theta} C_k||``.

    Every cell ``[c - h, c + h]`` gets the smaller of two upper bounds:

    * first order: ``g(c) + h * sum_k |k - k0| ||C_k||``;
    * second order: the norm of the affine part ``A(c) + t A'(c)`` is convex
      in ``t``, so it is bounded by its values at ``t = +-h``, and the
      remainder is at most ``h^2/2 * sum_k (k - k0)^2 ||C_k||``.

    A common phase ``e^{i k0 t}`` is factored out first, which leaves the
    norm unchanged. Cells whose bound cannot exceed the current maximum by
    more than ``tol`` are discarded. The others are split in two.
    """
    if degs.size == 0:
        return 0.0, 0.0, {"evaluations": 0}
    norms = np.array([np.linalg.norm(c, 2) for c in C])
    if np.all(degs == degs[0]) or np.all(norms[degs != degs[0]] == 0):
        v = float(np.linalg.norm(C[degs == degs[0]].sum(axis=0), 2))
        return v, v, {"evaluations": 1}
    k0 = float(np.sum(degs * norms) / np.sum(norms))
    shifted = degs - k0
    L1 = float(np.sum(np.abs(shifted) * norms))
    L2 = float(np.sum(shifted ** 2 * norms))

    def bounds(theta, h):
        ph = np.exp(1j * np.outer(theta, degs))
        A = np.einsum("gk,kab->gab", ph, C)
        dA = np.einsum("gk,kab->gab", ph * (1j * shifted), C)
        # common phase e^{i k0 t} does not change norms
        g = _batched_norm(A)
        up = _batched_norm(A + h[:, None, None] * dA)
        dn = _batched_norm(A - h[:, None, None] * dA)
        second = np.maximum(up, dn) + 0.5 * h ** 2 * L2
        first = g + h * L1
        return g, np.minimum(first, second)

    theta = 2 * np.pi * np.arange(grid) / grid
    h = np.full(grid, np.pi / grid)
    g, ub = bounds(theta, h)
    evals = 3 * grid
    lower = float(g.max())
    pruned_upper = lower
    rounds = 0
    while True:
        keep = ub > lower + tol
        if np.any(~keep):
            pruned_upper = max(pruned_upper, float(ub[~keep].max()))
        theta, h = theta[keep], h[keep]
        if theta.size == 0:
            upper = pruned_upper
            break
        if evals + 6 * theta.size > max_evals:
            upper = max(pruned_upper, float(ub[keep].max()))
            break
        h = h / 2
        theta = np.concatenate([theta - h, theta + h])
        h = np.concatenate([h, h])
        g, ub = bounds(theta, h)
        evals += 3 * theta.size
        lower = max(lower, float(g.max()))
        rounds += 1
    return lower, max(upper, lower), {"evaluations": int(evals), "rounds": rounds,
                                      "lipschitz": L1, "curvature": L2}


def symbol_operator_norm(op: SymbolOperator, tol: float = DEFAULT_TOL,
                         grid: int = DEFAULT_GRID) -> NormResult:
    """Max over orbits of the certified sup-norm of each orbit symbol."""
    if tol <= 0:
        raise SemicrossError("tol: must be positive")
    lo = hi = 0.0
    per = []
    for o in range(len(op.orbits)):
        degs, C = op.stack(o)
        l, u, eff = _orbit_sup(degs, C, tol, grid)
        per.append({"orbit": list(op.orbits[o]), "lower": l, "upper": u, **eff})
        lo, hi = max(lo, l), max(hi, u)
    return _result(lo, hi, tol, {"route": "symbol", "grid": grid, "orbits": per})


def symbol_norm(elem: CrossedElement, tol: float = DEFAULT_TOL,
                grid: int = DEFAULT_GRID) -> NormResult:
    return symbol_operator_norm(elem.symbol(), tol, grid)


# ---------------------------------------------------------------------------
# shift engine


def periodic_depth_bound(sys: FiniteSystem, degree: int) -> int:
    """``max_x preperiod(x) + 8 * period(x) * (degree + 1)``."""
    od = orbit_data(sys)
    return max(od.preperiod[x] + 8 * len(od.cycles[od.cycle_id[x]]) * (degree + 1)
               for x in range(sys.n))


def _trajectory(sys: FiniteSystem, x: int, length: int, od=None) -> np.ndarray:
    """``phi^m(x)`` for ``0 <= m < length``."""
    od = orbit_data(sys) if od is None else od
    pre = od.preperiod[x]
    cyc = np.asarray(od.cycles[od.cycle_id[x]])
    head = []
    y = x
    for _ in range(min(pre, length)):
        head.append(y)
        y = sys.phi[y]
    rest = length - len(head)
    if rest <= 0:
        return np.asarray(head[:length], dtype=np.intp)
    start = od.cycle_pos[x]
    tail = cyc[(start + np.arange(rest)) % len(cyc)]
    return np.concatenate([np.asarray(head, dtype=np.intp), tail]).astype(np.intp)


class _ShiftProblem:
    """Per-point data for the lower-triangular operator with coefficients ``coeffs``.

    ``coeffs[k, i, j, x]`` is the degree-``k`` coefficient of entry ``(i, j)``.
    """

    def __init__(self, sys: FiniteSystem, coeffs: np.ndarray, gram: str):
        self.sys = sys
        self.coeffs = coeffs
        self.K, self.nu = coeffs.shape[0], coeffs.shape[1]
        self.gram = gram
        self.od = orbit_data(sys)
        # spectral norm of each coefficient block at each point
        self.block_norms = np.array([[np.linalg.norm(coeffs[k, :, :, x], 2)
                                      for x in range(sys.n)] for k in range(self.K)])
        self.active = self.block_norms.max(axis=0) > 0  # column weights present
        self.points = self._representatives()

    def _representatives(self) -> list[int]:
        """Points whose block has a nonzero first column.

        A block whose first ``j`` columns vanish is the block of
        ``phi^j(x)`` moved down by ``j``; it has the same norm and smaller
        compressions, so it is skipped.
        """
        reps = []
        for x in range(self.sys.n):
            if self.active[x]:
                reps.append(x)
        return reps

    def matrix(self, x: int, M: int, extra: int = 0) -> sp.csr_matrix:
        traj = _trajectory(self.sys, x, M + extra, self.od)
        return point_shift_matrix(self.coeffs, traj, M + extra)

    def compression_band(self, x: int, M: int) -> np.ndarray:
        """Lower band of the Gram matrix of the depth-``M`` compression."""
        if self.nu == 1:
            return self._scalar_band(x, M)
        A = self.matrix(x, M)
        G = (A.conj().T @ A) if self.gram == "col" else (A @ A.conj().T)
        b = min((self.K + 1) * self.nu - 2, M * self.nu - 1)
        return _banded.band_from_sparse(G, max(b, 0))

    def _scalar_band(self, x: int, M: int) -> np.ndarray:
        d = min(self.K - 1, M - 1)
        traj = _trajectory(self.sys, x, M, self.od)
        # a[k, m] = A[m + k, m]
        a = np.zeros((d + 1, M + d), dtype=complex)
        for k in range(d + 1):
            a[k, : M - k] = self.coeffs[k, 0, 0, traj[: M - k]]
        ab = np.zeros((d + 1, M), dtype=complex, order="F")
        for l in range(d + 1):
            acc = np.zeros(M - l, dtype=complex)
            if self.gram == "col":
                # G[j + l, j] = sum_k conj(A[j + k, j + l]) A[j + k, j]
                for k in range(l, d + 1):
                    acc += np.conj(a[k - l, l: M]) * a[k, : M - l]
            else:
                # G[i + l, i] = sum_c A[i + l, c] conj(A[i, c]), c = i + l - k
                for k in range(l, d + 1):
                    lo = max(0, k - l)
                    seg = np.arange(lo, M - l)
                    c = seg + l - k
                    acc[lo:] += a[k, c] * np.conj(a[k - l, c])
            ab[l, : M - l] = acc
        ab[0] = ab[0].real
        return ab

    def point_ell1(self, x: int) -> float:
        span = self.od.preperiod[x] + len(self.od.cycles[self.od.cycle_id[x]])
        orbit = set(_trajectory(self.sys, x, span, self.od).tolist())
        idx = np.array(sorted(orbit))
        return float(self.block_norms[:, idx].max(axis=1).sum())

    def cycle_symbol_bounds(self, tol: float, grid: int) -> dict[int, tuple[float, float, dict]]:
        out = {}
        for cid, cyc in enumerate(self.od.cycles):
            co = {k: self.coeffs[k] for k in range(self.K) if np.any(self.coeffs[k][:, :, list(cyc)])}
            degs, C = orbit_symbol(cyc, co)
            out[cid] = _orbit_sup(degs, C, tol / 4, grid)
        return out

    def certificate(self, x: int, N: int, s_low: float, lower: float, hi: float,
                    tol: float) -> tuple[float, int]:
        """Smallest ``gamma`` found by bisection with a certificate for ``||T_x|| <= gamma``.

        Returns ``(inf, tests)`` when even ``hi`` cannot be certified.
        """
        cert = _TailCertificate(self, x, N)
        tries = 0

        def passes(gamma):
            nonlocal tries
            tries += 1
            return cert.passes(gamma)

        lo = max(lower, s_low)
        # search upward in doubling steps, then bisect the last interval
        step = tol / 4
        fail, good = lo, None
        while lo + step < hi and tries < 24:
            g = lo + step + 1e-15 * max(1.0, lo)
            if passes(g):
                good = g
                break
            fail = g
            step *= 2
        if good is None:
            if not passes(hi):
                return np.inf, tries
            good = hi
        while good - fail > tol / 8 and tries < 40:
            mid = 0.5 * (fail + good)
            if passes(mid):
                good = mid
            else:
                fail = mid
        return good, tries


class _TailCertificate:
    """Certificate that ``gamma^2 - T^*T`` is positive semidefinite.

    ``T`` is the block of a point ``x`` and ``G = gamma^2 - T^*T`` has scalar
    bandwidth ``b``. Eliminating the head ``[0, H)`` with ``H = N * nu``
    leaves ``gamma^2 - R^*R - Delta`` where ``R`` is the block of the cycle
    point ``phi^N(x)`` and ``Delta`` is a ``b x b`` correction in the top
    corner. Eliminating a further chunk of ``q`` indices (a whole number of
    periods, ``q >= b``) returns the same shape with
    ``Delta -> F(Delta) = C (Q0 - Delta)^{-1} C^* + D`` where ``D`` is zero
    for column Grams and a fixed PSD corner term for row Grams. ``F`` is
    monotone, so once ``F(Delta) <= Delta`` every later pivot stays
    definite and all finite sections of ``G`` are positive definite.
    """

    def __init__(self, prob: _ShiftProblem, x: int, N: int, max_steps: int = 4000):
        od = prob.od
        nu, K = prob.nu, prob.K
        self.b = b = max((K + 1) * nu - 2, 0)
        p = len(od.cycles[od.cycle_id[x]])
        self.q = q = p * nu * max(1, -(-b // (p * nu)))
        self.H = H = N * nu
        gram = self._gram_fn(prob.gram)
        T = prob.matrix(x, N, extra=K + b // nu + 2)
        GT = gram(T)
        self.head = _banded.band_from_sparse(GT[:H, :H], b)
        self.head_coupling = GT[H:H + b, :H].toarray()
        y = int(_trajectory(prob.sys, x, N + 1, od)[N])
        R = prob.matrix(y, q // nu + b // nu + 2, extra=K + 1)
        GR = gram(R).toarray()
        self.tail_Q = GR[:q, :q]
        self.tail_C = GR[q:q + b, :q]
        # the row Gram of a lower-triangular block restricted past an index
        # exceeds the Gram of the restricted block by a PSD corner term
        self.drift = GR[q:q + b, q:q + b] - GR[:b, :b]
        self.head_drift = GT[H:H + b, H:H + b].toarray() - GR[:b, :b]
        self.max_steps = max_steps

    @staticmethod
    def _gram_fn(kind):
        if kind == "col":
            return lambda A: (A.conj().T @ A).tocsr()
        return lambda A: (A @ A.conj().T).tocsr()

    def _step(self, gamma2, D):
        q, b = self.q, self.b
        Q = gamma2 * np.eye(q) - self.tail_Q
        Q[:b, :b] -= D
        try:
            Lc = np.linalg.cholesky(Q)
        except np.linalg.LinAlgError:
            return None
        C = -self.tail_C
        Y = np.linalg.solve(Lc, C.conj().T)
        out = Y.conj().T @ Y + self.drift
        return 0.5 * (out + out.conj().T)

    def passes(self, gamma: float) -> bool:
        g2 = gamma * gamma
        b, H = self.b, self.H
        ab = -self.head
        ab[0] += g2
        chol, info = zpbtrf(np.asfortranarray(ab), lower=1)
        if info != 0:
            return False
        if b == 0:
            return self._step(g2, np.zeros((0, 0))) is not None
        Ch = -self.head_coupling
        X, info = zpbtrs(chol, np.asfortranarray(Ch.conj().T), lower=1)
        if info != 0:
            return False
        D0 = Ch @ X + self.head_drift
        D0 = 0.5 * (D0 + D0.conj().T)

        def run(D, steps):
            """Iterate ``F``; ``True`` on certification, ``None`` on a failed pivot."""
            for _ in range(steps):
                Dn = self._step(g2, D)
                if Dn is None:
                    return None, D
                if np.linalg.eigvalsh(Dn - D)[-1] <= 0.0:
                    return True, Dn
                if np.max(np.abs(Dn - D)) <= 1e-15 * max(1.0, np.max(np.abs(Dn))):
                    return False, Dn
                D = Dn
            return False, D

        ok, D = run(D0, 64)
        if ok is not None and not ok:
            Df, L = self._fixed_point(g2, D)
            if Df is not None and self._dominates(g2, D0, Df, L):
                return True
            ok, D = run(D, self.max_steps)
        if ok is None:
            return False
        if ok:
            return True
        # start above both the head state and the apparent fixed point
        scale = max(1.0, float(np.max(np.abs(D))))
        eps = max(0.0, float(np.linalg.eigvalsh(D0 - D)[-1])) + 1e-9 * scale
        ok, _ = run(D + eps * np.eye(b), self.max_steps)
        return bool(ok)

    def _linearize(self, gamma2, D):
        """``F(D)`` and ``L`` with ``F(D + E) = F(D) + L E L^* + O(E^2)``."""
        q, b = self.q, self.b
        Q = gamma2 * np.eye(q) - self.tail_Q
        Q[:b, :b] -= D
        try:
            Lc = np.linalg.cholesky(Q)
        except np.linalg.LinAlgError:
            return None
        C = -self.tail_C
        Z = cho_solve((Lc, True), C.conj().T)
        FD = C @ Z + self.drift
        return 0.5 * (FD + FD.conj().T), Z[:b].conj().T

    def _fixed_point(self, gamma2, D, steps: int = 40):
        """Newton iteration for the stabilizing fixed point of ``F``."""
        L = None
        for _ in range(steps):
            lin = self._linearize(gamma2, D)
            if lin is None:
                return None, None
            FD, L = lin
            R = FD - D
            if np.max(np.abs(R)) <= 1e-15 * max(1.0, float(np.max(np.abs(FD)))):
                return D, L
            if np.max(np.abs(np.linalg.eigvals(L))) >= 1.0:
                return None, None
            step = solve_discrete_lyapunov(L, R)
            D = D + 0.5 * (step + step.conj().T)
        return D, L

    def _dominates(self, gamma2, D0, Df, L) -> bool:
        """Look for ``D* >= D0`` with ``F(D*) <= D*`` of the form ``Df + t Y``.

        ``Y - L Y L^* = I`` so the linear part of ``F`` decreases ``Df + t Y``
        by ``t I``; the checks below are exact, only the choice of ``t`` is
        heuristic.
        """
        b = self.b
        try:
            Y = solve_discrete_lyapunov(L, np.eye(b))
            Y = 0.5 * (Y + Y.conj().T)
            t0 = float(eigh(D0 - Df, Y, eigvals_only=True)[-1])
        except (np.linalg.LinAlgError, ValueError):
            return False
        scale = max(1.0, float(np.max(np.abs(Df))))
        base = max(t0, 0.0)
        for factor in (1.001, 1.1, 2.0, 8.0):
            t = base * factor + 1e-10 * scale
            Ds = Df + t * Y
            if np.linalg.eigvalsh(Ds - D0)[0] < 0.0:
                continue
            Fs = self._step(gamma2, Ds)
            if Fs is None:
                return False
            if np.linalg.eigvalsh(Fs - Ds)[-1] <= 0.0:
                return True
        return False


def _select_live(prob: _ShiftProblem, points, lower_x, upper_x) -> list[int]:
    """Points worth refining after the first depth.

    Cycle points of one cycle share the limit norm, so only the one with the
    largest compression is kept. Points whose upper bound does not exceed
    the current lower bound cannot raise the maximum.
    """
    od = prob.od
    best: dict[int, int] = {}
    keep = []
    for x in points:
        if od.preperiod[x] == 0:
            c = od.cycle_id[x]
            if c not in best or lower_x[x] > lower_x[best[c]]:
                best[c] = x
        else:
            keep.append(x)
    keep.extend(best.values())
    cur = max(lower_x.values())
    return sorted(x for x in keep if upper_x[x] > cur)


def _coeff_array_from(F) -> np.ndarray:
    if isinstance(F, Poly):
        return F.coefficient_table(max(F.degree, 0))[:, None, None, :]
    return F.coefficient_array(max(F.degree, 0))


def _shift_engine(sys: FiniteSystem, coeffs: np.ndarray, gram: str, tol: float,
                  max_depth: int, grid: int, start: int = _START_DEPTH) -> NormResult:
    if tol <= 0:
        raise SemicrossError("tol: must be positive")
    prob = _ShiftProblem(sys, coeffs, gram)
    total_l1 = float(prob.block_norms.max(axis=1).sum())
    effort = {"route": "shift" if gram == "col" else "right_shift", "depths": [],
              "lower_bounds": [], "points": list(prob.points)}
    if not prob.points:
        return _result(0.0, 0.0, tol, effort)
    od = prob.od
    cyc_bounds = prob.cycle_symbol_bounds(tol, grid)
    cyc_pts = [x for x in prob.points if od.preperiod[x] == 0]
    pre_pts = [x for x in prob.points if od.preperiod[x] > 0]
    upper_x = {x: min(cyc_bounds[od.cycle_id[x]][1], prob.point_ell1(x)) for x in cyc_pts}
    # preperiodic points start from their orbit l1 bound
    for x in pre_pts:
        upper_x[x] = prob.point_ell1(x)
    effort["cycle_symbol"] = {int(c): [v[0], v[1]] for c, v in cyc_bounds.items()}

    d = prob.K - 1
    need = periodic_depth_bound(sys, d)
    M = start
    while M < min(need, max_depth):
        M *= 2
    M = max(M, d + 1)
    vecs: dict[int, np.ndarray] = {}
    lower_x = {x: 0.0 for x in prob.points}
    lower = 0.0
    changes: list[float] = []
    stop_reason = "max_depth"
    live = list(prob.points)
    prev_rho: dict[int, float] = {}
    while True:
        for x in live:
            ab = prob.compression_band(x, M)
            v0 = vecs.get(x)
            if v0 is not None:
                v0 = np.concatenate([v0, np.zeros(ab.shape[1] - v0.size)])
            # gains below this change the norm by far less than tol
            atol = 1e-3 * tol * max(lower_x[x], 1e-3)
            rho, v = _banded.top_eigen(ab, v0, hint=prev_rho.get(x), atol=atol)
            if x in prev_rho:
                prev_rho[x] = max(rho - lower_x[x] ** 2, 0.0)
            else:
                prev_rho[x] = None
            vecs[x] = v
            lower_x[x] = max(lower_x[x], float(np.sqrt(max(rho, 0.0))))
        if len(effort["depths"]) == 0:
            live = _select_live(prob, live, lower_x, upper_x)
        else:
            cur = max(lower_x.values())
            live = [x for x in live if upper_x[x] > cur]
        new_lower = max(lower, max(lower_x.values()))
        if effort["depths"]:
            changes.append(new_lower - lower)
        lower = new_lower
        effort["depths"].append(M)
        effort["lower_bounds"].append(lower)
        upper = min(total_l1, max(upper_x.values()))
        if upper - lower <= tol:
            stop_reason = "bracket"
            break
        if len(changes) >= 2 and changes[-1] < tol and changes[-2] < tol:
            stop_reason = "doubling"
            break
        if 2 * M > max_depth:
            break
        M *= 2

    if pre_pts and upper - lower > tol:
        cert = {}
        for x in pre_pts:
            s_low = cyc_bounds[od.cycle_id[x]][0]
            # bounds below the global lower bound never decide convergence
            gamma, tries = prob.certificate(x, M, s_low, max(lower_x[x], lower), upper_x[x], tol)
            cert[int(x)] = {"gamma": gamma, "tests": tries}
            upper_x[x] = min(upper_x[x], gamma)
        effort["certificate"] = {"depth": M, "points": cert}
        upper = min(total_l1, max(upper_x.values()))
    effort["stop"] = stop_reason
    effort["depth"] = M
    return _result(lower, upper, tol, effort)


def shift_norm(sys: FiniteSystem, F, tol: float = DEFAULT_TOL,
               max_depth: int = DEFAULT_MAX_DEPTH, grid: int = DEFAULT_GRID) -> NormResult:
    """Norm of ``sum_n S^n pi~(c_n)`` for a left Poly or MatPoly."""
    if F.side != LEFT:
        raise SideMismatchError("side: shift_norm expects a left polynomial")
    if F.system != sys:
        raise SideMismatchError("system: polynomial lives over a different system")
    return _shift_engine(sys, _coeff_array_from(F), "col", tol, max_depth, grid)


def right_shift_norm(sys: FiniteSystem, F, tol: float = DEFAULT_TOL,
                     max_depth: int = DEFAULT_MAX_DEPTH, grid: int = DEFAULT_GRID) -> NormResult:
    """Norm of ``sum_n pi~(c_n) (S*)^n`` for a right Poly or MatPoly.

    The compressions of this operator are adjoints of lower-triangular
    matrices with entry blocks ``conj(c_k^{ji})``; their norms are computed
    from the row Gram matrix.
    """
    if F.side != RIGHT:
        raise SideMismatchError("side: right_shift_norm expects a right polynomial")
    if F.system != sys:
        raise SideMismatchError("system: polynomial lives over a different system")
    C = _coeff_array_from(F)
    lower_coeffs = np.conj(np.swapaxes(C, 1, 2))
    return _shift_engine(sys, lower_coeffs, "row", tol, max_depth, grid)


# ---------------------------------------------------------------------------
# routing


_DUAL_KIND = {"contractive": "contractive", "isometric": "co-isometric",
              "co-isometric": "isometric", "unitary": "unitary"}


def dual_kind(kind: str) -> str:
    """Kind paired with ``kind`` under ``(pi, V) -> (pi, V*)``."""
    if kind not in _DUAL_KIND:
        raise SemicrossError(f"kind: expected one of {', '.join(KINDS)}")
    return _DUAL_KIND[kind]


def route_of(side: str, kind: str) -> str:
    """Engine realizing the norm for a side and pair kind."""
    if kind not in KINDS:
        raise SemicrossError(f"kind: expected one of {', '.join(KINDS)}")
    if side == LEFT:
        return "shift" if kind in ("contractive", "isometric") else "symbol"
    if side == RIGHT:
        return "right_shift" if kind in ("contractive", "co-isometric") else "symbol"
    raise SemicrossError(f"side: expected 'left' or 'right', got {side!r}")


def _envelope_symbol(sys: FiniteSystem, C: np.ndarray, side: str) -> SymbolOperator:
    """Symbol over the eventual image.

    Left: ``f_n = c_n|_E``. Right: ``pihat(c) U^{*n} = U^{-n} pihat(c o sigma^{-n})``
    gives the coefficient ``(c_n|_E) o sigma^{-n}`` at ``-n``.
    """
    lim, pts = direct_limit(sys)
    pts = np.asarray(pts)
    co = {}
    for n in range(C.shape[0]):
        f = C[n][:, :, pts]
        if not np.any(f):
            continue
        if side == LEFT:
            co[n] = f
        else:
            co[-n] = f[:, :, phi_power(lim, -n)]
    return symbol_rep_blocks(lim, co, nu=C.shape[1])


def _route(sys: FiniteSystem, F, kind: str, tol: float, max_depth: int,
           grid: int) -> NormResult:
    if F.system != sys:
        raise SideMismatchError("system: polynomial lives over a different system")
    route = route_of(F.side, kind)
    if route == "shift":
        res = shift_norm(sys, F, tol, max_depth, grid)
    elif route == "right_shift":
        res = right_shift_norm(sys, F, tol, max_depth, grid)
    else:
        C = _coeff_array_from(F)
        res = symbol_operator_norm(_envelope_symbol(sys, C, F.side), tol, grid)
        bound = float(sum(max(np.linalg.norm(C[k, :, :, x], 2) for x in range(sys.n))
                          for k in range(C.shape[0])))
        if bound < res.upper_bound:
            res = _result(res.lower_bound, bound, tol, res.effort)
    res.effort.update({"side": F.side, "kind": kind})
    return res


def semicrossed_norm(sys: FiniteSystem, F: Poly, kind: str, tol: float = DEFAULT_TOL,
                     max_depth: int = DEFAULT_MAX_DEPTH, grid: int = DEFAULT_GRID) -> NormResult:
    """Norm of ``F`` in the semicrossed product of its side and ``kind``."""
    if not isinstance(F, Poly):
        raise SemicrossError("poly: expected a Poly")
    return _route(sys, F, kind, tol, max_depth, grid)


def matrix_norm(sys: FiniteSystem, M: MatPoly, kind: str, tol: float = DEFAULT_TOL,
                max_depth: int = DEFAULT_MAX_DEPTH, grid: int = DEFAULT_GRID) -> NormResult:
    """Norm of ``[F_ij]`` in the matrix level of the semicrossed product."""
    if not isinstance(M, MatPoly):
        raise SemicrossError("matpoly: expected a MatPoly")
    return _route(sys, M, kind, tol, max_depth, grid)
