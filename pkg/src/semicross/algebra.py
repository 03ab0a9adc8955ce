"""The l^1 convolution algebras over a finite system and the sharp map.

A left polynomial ``sum_n delta_n (x) c_n`` multiplies by
``(delta_n (x) c)(delta_m (x) y) = delta_{n+m} (x) (alpha^m(c) y)``; a right
polynomial ``sum_n c_n (x) delta_n`` by
``(c (x) delta_n)(y (x) delta_m) = (c alpha^n(y)) (x) delta_{n+m}``.
Coefficients are complex functions on the points of the system.

The sharp map ``(delta_n (x) c)^# = conj(c) (x) delta_n`` is an antilinear
isometric anti-isomorphism from the left algebra onto the right one. At the
matrix level it acts entrywise and transposes.
"""

from __future__ import annotations

from typing import Iterable, Mapping

import numpy as np

from .dynsys import FiniteSystem, phi_power
from .errors import SemicrossError, SideMismatchError

__all__ = [
    "EXACT_TOL",
    "LEFT",
    "RIGHT",
    "Poly",
    "MatPoly",
    "as_function",
    "alpha_power",
    "mul",
    "ell1_norm",
    "sharp",
    "sharp_mat",
    "dual_side",
]

LEFT, RIGHT = "left", "right"
EXACT_TOL = 1e-12


def dual_side(side: str) -> str:
    return RIGHT if side == LEFT else LEFT


def _check_side(side: str) -> str:
    if side not in (LEFT, RIGHT):
        raise SemicrossError(f"side: expected 'left' or 'right', got {side!r}")
    return side


def as_function(sys: FiniteSystem, f) -> np.ndarray:
    """Validate and copy a function on the points of ``sys``."""
    arr = np.array(f, dtype=complex).reshape(-1)
    if arr.shape[0] != sys.n:
        raise SemicrossError(f"values: length {arr.shape[0]} does not match system size {sys.n}")
    return arr


def alpha_power(sys: FiniteSystem, f, m: int) -> np.ndarray:
    """``f o phi^m`` for ``m >= 0``."""
    if m < 0:
        raise SemicrossError("m: exponent must be nonnegative")
    return as_function(sys, f)[phi_power(sys, m)]


class Poly:
    """Finitely supported element of the left or right l^1 algebra.

    Parameters
    ----------
    system : FiniteSystem
    side : {'left', 'right'}
    coeffs : mapping of int to array-like
        Degree to coefficient function. Coefficients that are exactly zero
        are dropped.
    """

    __slots__ = ("system", "side", "_coeffs")

    def __init__(self, system: FiniteSystem, side: str,
                 coeffs: Mapping[int, Iterable] | None = None):
        self.system = system
        self.side = _check_side(side)
        store = {}
        for deg, c in (coeffs or {}).items():
            deg = int(deg)
            if deg < 0:
                raise SemicrossError(f"deg: negative degree {deg}")
            arr = as_function(system, c)
            if np.any(arr != 0):
                arr.setflags(write=False)
                store[deg] = arr
        self._coeffs = dict(sorted(store.items()))

    @classmethod
    def zero(cls, system, side):
        return cls(system, side)

    @classmethod
    def unit(cls, system, side):
        return cls(system, side, {0: np.ones(system.n)})

    @classmethod
    def monomial(cls, system, side, deg, c):
        return cls(system, side, {deg: c})

    @property
    def coeffs(self) -> dict[int, np.ndarray]:
        return dict(self._coeffs)

    @property
    def n(self) -> int:
        return self.system.n

    def coeff(self, deg: int) -> np.ndarray:
        c = self._coeffs.get(deg)
        return np.zeros(self.n, dtype=complex) if c is None else c.copy()

    def support(self) -> tuple[int, ...]:
        return tuple(self._coeffs)

    @property
    def degree(self) -> int:
        """Largest degree present, ``-1`` for the zero polynomial."""
        return max(self._coeffs, default=-1)

    def is_zero(self) -> bool:
        return not self._coeffs

    def coefficient_table(self, degree: int | None = None) -> np.ndarray:
        """Dense array of shape ``(degree + 1, n)``."""
        d = self.degree if degree is None else degree
        out = np.zeros((max(d, 0) + 1, self.n), dtype=complex)
        for k, c in self._coeffs.items():
            if k <= d:
                out[k] = c
        return out

    def _compatible(self, other):
        if not isinstance(other, Poly):
            return NotImplemented
        if other.side != self.side:
            raise SideMismatchError(f"side: cannot combine {self.side} and {other.side} polynomials")
        if other.system != self.system:
            raise SideMismatchError("system: operands live over different systems")
        return True

    def __add__(self, other):
        if self._compatible(other) is NotImplemented:
            return NotImplemented
        out = {k: c.copy() for k, c in self._coeffs.items()}
        for k, c in other._coeffs.items():
            out[k] = out[k] + c if k in out else c.copy()
        return Poly(self.system, self.side, out)

    def __neg__(self):
        return Poly(self.system, self.side, {k: -c for k, c in self._coeffs.items()})

    def __sub__(self, other):
        if not isinstance(other, Poly):
            return NotImplemented
        return self + (-other)

    def scale(self, s: complex) -> "Poly":
        return Poly(self.system, self.side, {k: s * c for k, c in self._coeffs.items()})

    def __mul__(self, other):
        if isinstance(other, Poly):
            return mul(self, other)
        if np.isscalar(other):
            return self.scale(other)
        return NotImplemented

    def __rmul__(self, other):
        if np.isscalar(other):
            return self.scale(other)
        return NotImplemented

    def allclose(self, other: "Poly", tol: float = EXACT_TOL) -> bool:
        if self._compatible(other) is NotImplemented:
            return False
        for k in set(self._coeffs) | set(other._coeffs):
            if np.max(np.abs(self.coeff(k) - other.coeff(k))) > tol:
                return False
        return True

    def __eq__(self, other):
        if not isinstance(other, Poly):
            return NotImplemented
        if other.side != self.side or other.system != self.system:
            return False
        return self.allclose(other)

    __hash__ = None

    def __repr__(self):
        terms = ", ".join(f"{k}: {np.round(c, 6).tolist()}" for k, c in self._coeffs.items())
        return f"Poly({self.side}, phi={self.system.phi}, {{{terms}}})"

    def to_literal(self) -> dict:
        return {
            "side": self.side,
            "coeffs": [
                {"deg": k, "values": [[float(v.real), float(v.imag)] for v in c]}
                for k, c in self._coeffs.items()
            ],
        }

    @classmethod
    def from_literal(cls, obj, system: FiniteSystem, side: str | None = None) -> "Poly":
        if not isinstance(obj, dict):
            raise SemicrossError("poly: expected an object with fields 'side' and 'coeffs'")
        lit_side = obj.get("side", side)
        if lit_side is None:
            raise SemicrossError("side: missing field")
        _check_side(lit_side)
        if side is not None and lit_side != side:
            raise SemicrossError(f"side: literal is {lit_side!r} but {side!r} was requested")
        items = obj.get("coeffs")
        if not isinstance(items, list):
            raise SemicrossError("coeffs: expected a list")
        coeffs: dict[int, np.ndarray] = {}
        for i, item in enumerate(items):
            if not isinstance(item, dict) or "deg" not in item or "values" not in item:
                raise SemicrossError(f"coeffs[{i}]: expected fields 'deg' and 'values'")
            deg = item["deg"]
            if not isinstance(deg, int) or isinstance(deg, bool) or deg < 0:
                raise SemicrossError(f"coeffs[{i}].deg: expected a nonnegative integer")
            vals = item["values"]
            if not isinstance(vals, list) or len(vals) != system.n:
                raise SemicrossError(
                    f"coeffs[{i}].values: expected {system.n} [re, im] pairs")
            try:
                arr = np.array([complex(float(v[0]), float(v[1])) for v in vals])
                bad = any(len(v) != 2 for v in vals)
            except (TypeError, ValueError, IndexError):
                bad = True
            if bad:
                raise SemicrossError(f"coeffs[{i}].values: entries must be [re, im] pairs")
            if deg in coeffs:
                raise SemicrossError(f"coeffs[{i}].deg: degree {deg} repeated")
            coeffs[deg] = arr
        return cls(system, lit_side, coeffs)


def mul(F: Poly, G: Poly) -> Poly:
    """Product in the left or right l^1 algebra (both operands on one side)."""
    F._compatible(G)
    sys = F.system
    out: dict[int, np.ndarray] = {}
    for n, c in F._coeffs.items():
        for m, y in G._coeffs.items():
            if F.side == LEFT:
                term = alpha_power(sys, c, m) * y
            else:
                term = c * alpha_power(sys, y, n)
            k = n + m
            out[k] = out[k] + term if k in out else term
    return Poly(sys, F.side, out)


def ell1_norm(F) -> float:
    """``sum_n sup_x |c_n(x)|``; for a MatPoly, the sum over entries."""
    if isinstance(F, MatPoly):
        return float(sum(ell1_norm(P) for row in F.entries for P in row))
    return float(sum(np.max(np.abs(c)) for c in F._coeffs.values()))


def sharp(F: Poly) -> Poly:
    """``(delta_n (x) c)^# = conj(c) (x) delta_n``, extended antilinearly."""
    return Poly(F.system, dual_side(F.side), {k: np.conj(c) for k, c in F._coeffs.items()})


class MatPoly:
    """Square grid of polynomials over one system and one side."""

    __slots__ = ("entries",)

    def __init__(self, entries):
        rows = tuple(tuple(r) for r in entries)
        if not rows or any(len(r) != len(rows) for r in rows):
            raise SemicrossError("entries: expected a nonempty square grid")
        first = rows[0][0]
        for r in rows:
            for P in r:
                if not isinstance(P, Poly):
                    raise SemicrossError("entries: every entry must be a Poly")
                if P.side != first.side:
                    raise SideMismatchError("side: entries of a matrix must share one side")
                if P.system != first.system:
                    raise SideMismatchError("system: entries of a matrix must share one system")
        self.entries = rows

    @property
    def nu(self) -> int:
        return len(self.entries)

    @property
    def side(self) -> str:
        return self.entries[0][0].side

    @property
    def system(self) -> FiniteSystem:
        return self.entries[0][0].system

    @property
    def degree(self) -> int:
        return max(P.degree for r in self.entries for P in r)

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i][j]

    @classmethod
    def diagonal(cls, polys):
        polys = list(polys)
        z = Poly.zero(polys[0].system, polys[0].side)
        return cls([[polys[i] if i == j else z for j in range(len(polys))]
                    for i in range(len(polys))])

    def coefficient_array(self, degree: int | None = None) -> np.ndarray:
        """Array ``A[k, i, j, x]`` of the degree-``k`` coefficient of entry ``(i, j)``."""
        d = self.degree if degree is None else degree
        nu, n = self.nu, self.system.n
        A = np.zeros((max(d, 0) + 1, nu, nu, n), dtype=complex)
        for i in range(nu):
            for j in range(nu):
                A[:, i, j, :] = self.entries[i][j].coefficient_table(max(d, 0))
        return A

    def __mul__(self, other: "MatPoly") -> "MatPoly":
        if not isinstance(other, MatPoly):
            return NotImplemented
        if other.nu != self.nu:
            raise SemicrossError("nu: matrix sizes differ")
        out = []
        for i in range(self.nu):
            row = []
            for j in range(self.nu):
                acc = Poly.zero(self.system, self.side)
                for k in range(self.nu):
                    acc = acc + mul(self.entries[i][k], other.entries[k][j])
                row.append(acc)
            out.append(row)
        return MatPoly(out)

    def allclose(self, other: "MatPoly", tol: float = EXACT_TOL) -> bool:
        return other.nu == self.nu and all(
            self.entries[i][j].allclose(other.entries[i][j], tol)
            for i in range(self.nu) for j in range(self.nu))

    def __eq__(self, other):
        if not isinstance(other, MatPoly):
            return NotImplemented
        try:
            return self.allclose(other)
        except SideMismatchError:
            return False

    __hash__ = None

    def __repr__(self):
        return f"MatPoly(nu={self.nu}, side={self.side}, phi={self.system.phi})"

    def to_literal(self) -> dict:
        return {"nu": self.nu,
                "entries": [P.to_literal() for r in self.entries for P in r]}

    @classmethod
    def from_literal(cls, obj, system: FiniteSystem, side: str | None = None) -> "MatPoly":
        if not isinstance(obj, dict):
            raise SemicrossError("matpoly: expected an object with fields 'nu' and 'entries'")
        nu = obj.get("nu")
        if not isinstance(nu, int) or isinstance(nu, bool) or nu < 1:
            raise SemicrossError("nu: expected a positive integer")
        ents = obj.get("entries")
        if not isinstance(ents, list) or len(ents) != nu * nu:
            raise SemicrossError(f"entries: expected {nu * nu} polynomials in row-major order")
        polys = []
        for k, e in enumerate(ents):
            try:
                polys.append(Poly.from_literal(e, system, side))
            except SemicrossError as exc:
                raise SemicrossError(f"entries[{k}].{exc}") from None
        return cls([polys[i * nu:(i + 1) * nu] for i in range(nu)])


def sharp_mat(M: MatPoly) -> MatPoly:
    """Entrywise sharp followed by transposition: ``[F_ij]^# = [F_ji^#]``."""
    nu = M.nu
    return MatPoly([[sharp(M.entries[j][i]) for j in range(nu)] for i in range(nu)])
