"""C*-envelope identification and ideal structure for finite systems.

Envelopes are named per (side, kind): either a crossed product over a
permutation system or a full corner ``p (B_inf x Z) p`` of the crossed
product over the tail extension, with ``p = pihat(e, 0)``. The full corner
is not built; ``corner_consistency_check`` tests its norm-level
consequence, namely that zero extension to the tail system is isometric.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .algebra import LEFT, RIGHT, Poly, mul
from .dynsys import (FiniteSystem, SubsetMask, TailSystem, add_tail, direct_limit,
                     invariant_subsets, is_bi_minimal, is_minimal, orbit_data)
from .errors import ConsistencyError, NotPermutationError, SemicrossError
from .norms import DEFAULT_MAX_DEPTH, DEFAULT_TOL, CrossedElement, NormResult, shift_norm
from .reps import KINDS, orbit_shift_rep

__all__ = [
    "CornerReport",
    "EnvelopeDescriptor",
    "IdealWitness",
    "MinimalityReport",
    "SimplicityReport",
    "corner_consistency_check",
    "crossed_product_label",
    "envelope_fourier_ideals",
    "envelope_of",
    "fourier_invariant_ideals",
    "minimality_report",
    "simplicity_report",
    "validate_witness",
]

CROSSED_PRODUCT = "crossed_product"
FULL_CORNER = "full_corner"
CORNER_PROJECTION = "pihat(e,0)"

# (side, kind) pairs whose envelope is a full corner when phi is not injective
_CORNER_KINDS = {
    (LEFT, "contractive"), (LEFT, "isometric"),
    (RIGHT, "contractive"), (RIGHT, "co-isometric"),
}


def crossed_product_label(sys: FiniteSystem) -> str:
    """Name of ``C(X) x Z`` for a permutation, one summand per cycle.

    A cycle of length ``p`` contributes ``M_p(C(T))``.
    """
    if not sys.is_permutation:
        raise NotPermutationError("phi: crossed products need a permutation")
    parts = []
    for p in sorted(orbit_data(sys).periods):
        parts.append("C(T)" if p == 1 else f"M_{p}(C(T))")
    return " + ".join(parts)


@dataclass(frozen=True)
class EnvelopeDescriptor:
    """Which C*-algebra is the envelope of a semicrossed product.

    For a crossed product ``system`` is the permutation system ``(E, sigma)``
    and ``points`` lists the original points it is built on. For a full
    corner ``tail`` is the truncated tail extension that models ``B`` and
    ``system`` is ``None``, since the limit ``B_inf`` is infinite.
    """

    side: str
    kind: str
    shape: str
    injective: bool
    system: FiniteSystem | None = None
    points: tuple[int, ...] = ()
    tail: TailSystem | None = None
    projection: str | None = None

    @property
    def label(self) -> str:
        if self.shape == CROSSED_PRODUCT:
            return crossed_product_label(self.system)
        return f"{self.projection} (B_inf x Z) {self.projection}"

    def to_dict(self) -> dict:
        out = {
            "side": self.side,
            "kind": self.kind,
            "shape": self.shape,
            "injective": self.injective,
            "label": self.label,
        }
        if self.system is not None:
            out["system"] = self.system.to_literal()
            out["points"] = list(self.points)
        if self.tail is not None:
            out["tail"] = self.tail.to_literal()
            out["projection"] = self.projection
        return out


def envelope_of(sys: FiniteSystem, side: str, kind: str, tail_depth: int = 2
                ) -> EnvelopeDescriptor:
    if side not in (LEFT, RIGHT):
        raise SemicrossError(f"side: expected 'left' or 'right', got {side!r}")
    if kind not in KINDS:
        raise SemicrossError(f"kind: expected one of {', '.join(KINDS)}, got {kind!r}")
    injective = sys.is_injective
    if not injective and (side, kind) in _CORNER_KINDS:
        return EnvelopeDescriptor(side, kind, FULL_CORNER, False,
                                  tail=add_tail(sys, tail_depth),
                                  projection=CORNER_PROJECTION)
    limit, points = direct_limit(sys)
    return EnvelopeDescriptor(side, kind, CROSSED_PRODUCT, injective,
                              system=limit, points=points)


@dataclass(frozen=True)
class IdealWitness:
    """A concrete nontrivial ideal.

    ``invariant_subset``: the functions vanishing on ``subset`` generate the
    ideal; ``subset`` is a subset of ``system`` that is forward invariant
    (for the polynomial algebra) or a union of cycles (for the crossed
    product). ``symbol_evaluation``: the kernel of ``F -> A_O(z0)`` for the
    orbit with index ``orbit``.
    """

    kind: str
    system: FiniteSystem
    description: str
    subset: SubsetMask | None = None
    orbit: int | None = None
    z0: complex | None = None

    def to_dict(self) -> dict:
        out = {"kind": self.kind, "description": self.description,
               "system": self.system.to_literal()}
        if self.subset is not None:
            out["subset"] = list(self.subset.members())
        if self.orbit is not None:
            out["orbit"] = self.orbit
            out["z0"] = [float(np.real(self.z0)), float(np.imag(self.z0))]
        return out


def _subset_witness(sys: FiniteSystem, S: SubsetMask, what: str) -> IdealWitness:
    members = "{" + ", ".join(map(str, S.members())) + "}"
    return IdealWitness("invariant_subset", sys,
                        f"{what} of functions vanishing on {members}", subset=S)


def fourier_invariant_ideals(sys: FiniteSystem) -> list[IdealWitness]:
    """Fourier-invariant ideals of ``C(X) x Z``, one per nontrivial union of cycles."""
    if not sys.is_permutation:
        raise NotPermutationError("phi: Fourier-invariant ideals need a permutation")
    return [_subset_witness(sys, S, "crossed product by the ideal")
            for S in invariant_subsets(sys, "bi")]


def envelope_fourier_ideals(sys: FiniteSystem) -> list[IdealWitness]:
    """Nontrivial Fourier-invariant ideals of ``B_inf x Z``.

    When ``phi`` is onto, ``B = C(X)`` and ``B_inf x Z`` is the crossed
    product over ``(X, phi)``. Otherwise the tail functions form a
    ``beta``-invariant ideal, reported on the depth-1 tail system as the
    functions vanishing on the base points.
    """
    if sys.is_surjective:
        return fourier_invariant_ideals(sys)
    tail = add_tail(sys, 1)
    base = SubsetMask.from_members(tail.system.n, range(sys.n))
    return [IdealWitness("invariant_subset", tail.system,
                         "crossed product by the tail ideal (functions vanishing "
                         "on the base points of the depth-1 tail system)",
                         subset=base)]


@dataclass(frozen=True)
class MinimalityReport:
    system: FiniteSystem
    base_minimal: bool
    tail_minimal: bool
    limit_bi_minimal: bool
    no_fourier_ideals: bool
    tail_points: tuple[int, ...]
    witnesses: tuple[IdealWitness, ...] = field(default=())

    @property
    def minimal(self) -> bool:
        return self.base_minimal

    def to_dict(self) -> dict:
        return {
            "minimal": self.minimal,
            "base_minimal": self.base_minimal,
            "tail_minimal": self.tail_minimal,
            "limit_bi_minimal": self.limit_bi_minimal,
            "no_fourier_ideals": self.no_fourier_ideals,
            "tail_points": list(self.tail_points),
            "witnesses": [w.to_dict() for w in self.witnesses],
        }


def minimality_report(sys: FiniteSystem) -> MinimalityReport:
    """Evaluate four equivalent forms of minimality and check they agree.

    The conditions are minimality of ``(X, phi)``, minimality of the depth-1
    tail system, bi-minimality of ``(B_inf, beta_inf)`` and absence of
    nontrivial Fourier-invariant ideals. ``B_inf`` is modelled by the
    direct limit ``(E, sigma)`` together with the tail: it is bi-minimal
    exactly when the tail is empty and ``(E, sigma)`` is bi-minimal.
    """
    base = is_minimal(sys)
    tail = add_tail(sys, 1)
    tail_min = is_minimal(tail.system)
    limit, _ = direct_limit(sys)
    bi = tail.is_trivial and is_bi_minimal(limit)
    ideals = envelope_fourier_ideals(sys)
    none = not ideals
    verdicts = (base, tail_min, bi, none)
    if len(set(verdicts)) != 1:
        raise ConsistencyError(
            f"minimality conditions disagree for phi={sys.phi}: "
            f"base={base} tail={tail_min} limit={bi} ideals={none}")
    if base and not (sys.is_injective and tail.is_trivial):
        raise ConsistencyError(f"minimal system phi={sys.phi} is not injective")
    return MinimalityReport(sys, base, tail_min, bi, none, tail.tail_points, tuple(ideals))


@dataclass(frozen=True)
class SimplicityReport:
    system: FiniteSystem
    verdict: str
    witness: IdealWitness
    validated: bool
    checks: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {"verdict": self.verdict, "witness": self.witness.to_dict(),
                "validated": self.validated, "checks": dict(self.checks)}


def simplicity_report(sys: FiniteSystem) -> SimplicityReport:
    """Non-simplicity with a concrete proper ideal.

    Finite systems never give simple envelopes. A non-minimal system
    yields a forward-invariant subset; a minimal one (a single cycle) yields
    the kernel of symbol evaluation at ``z0 = 1``, which contains
    ``1 - U^p``.
    """
    subsets = invariant_subsets(sys, "forward")
    if subsets:
        witness = _subset_witness(sys, subsets[0], "ideal")
    else:
        p = sys.n
        where = "C(T)" if p == 1 else f"the {p}x{p} symbol block"
        witness = IdealWitness("symbol_evaluation", sys,
                               f"kernel of evaluation at z=1 in {where}", orbit=0, z0=1.0 + 0j)
    ok, checks = validate_witness(witness)
    return SimplicityReport(sys, "non_simple", witness, ok, checks)


def _generators_poly(sys: FiniteSystem) -> list[Poly]:
    gens = [Poly.monomial(sys, LEFT, 1, np.ones(sys.n))]
    for y in range(sys.n):
        gens.append(Poly.monomial(sys, LEFT, 0, np.eye(sys.n)[y]))
    return gens


def _validate_subset(w: IdealWitness) -> tuple[bool, dict]:
    sys, S = w.system, w.subset
    inside = S.indicator().astype(bool)
    checks = {"nontrivial": not (S.is_empty or S.is_full),
              "invariant": all(inside[sys.phi[x]] for x in S.members())}
    # the ideal is spanned by delta_n (x) delta_x with x outside S
    basis = [Poly.monomial(sys, LEFT, n, np.eye(sys.n)[x])
             for n in (0, 1) for x in range(sys.n) if not inside[x]]
    closed = True
    for J in basis:
        for g in _generators_poly(sys):
            for prod in (mul(g, J), mul(J, g)):
                for c in prod.coeffs.values():
                    closed &= bool(np.all(np.abs(c[inside]) <= 1e-12))
    checks["closed"] = closed
    checks["proper"] = bool(inside.any())
    return all(checks.values()), checks


def _validate_evaluation(w: IdealWitness) -> tuple[bool, dict]:
    sys = w.system
    if not sys.is_permutation:
        return False, {"permutation": False}
    p_len = len(orbit_data(sys).cycles[w.orbit])

    def ev(a: CrossedElement) -> np.ndarray:
        return a.symbol().evaluate(w.z0)[w.orbit]

    gens = [CrossedElement.monomial(sys, 1, np.ones(sys.n)),
            CrossedElement.monomial(sys, -1, np.ones(sys.n))]
    gens += [CrossedElement.monomial(sys, 0, np.eye(sys.n)[y]) for y in range(sys.n)]
    one = CrossedElement.unit(sys)
    k = one - CrossedElement.monomial(sys, p_len, np.ones(sys.n))
    checks = {
        "kernel_element_nonzero": bool(k.support()),
        "kernel_element_vanishes": bool(np.max(np.abs(ev(k))) <= 1e-12),
        "unit_survives": bool(np.max(np.abs(ev(one))) > 0.5),
    }
    hom = True
    closed = True
    for a in gens:
        for b in gens:
            hom &= bool(np.allclose(ev(a * b), ev(a) @ ev(b), atol=1e-12))
        closed &= bool(np.max(np.abs(ev(a * k))) <= 1e-12 and np.max(np.abs(ev(k * a))) <= 1e-12)
    checks["multiplicative"] = hom
    checks["closed"] = closed
    return all(checks.values()), checks


def validate_witness(w: IdealWitness) -> tuple[bool, dict]:
    """Check that a witness names a nonzero proper two-sided ideal."""
    if w.kind == "invariant_subset":
        return _validate_subset(w)
    if w.kind == "symbol_evaluation":
        return _validate_evaluation(w)
    raise SemicrossError(f"kind: unknown witness kind {w.kind!r}")


@dataclass(frozen=True)
class CornerReport:
    system: FiniteSystem
    tol: float
    entries: tuple[dict, ...]

    @property
    def passed(self) -> bool:
        return all(e["agree"] for e in self.entries)

    def to_dict(self) -> dict:
        return {"passed": self.passed, "tol": self.tol, "entries": list(self.entries)}


def corner_consistency_check(sys: FiniteSystem, F: Poly, tail_depths=(1, 2, 3),
                             dense_depth: int = 24, tol: float = DEFAULT_TOL,
                             max_depth: int = DEFAULT_MAX_DEPTH) -> CornerReport:
    """Compare the left contractive norm of ``F`` with that of its zero extension.

    For each tail depth ``K`` both norms come from the shift engine and must
    agree within ``2 * tol``. The depth-``dense_depth`` compressions are also
    compared; they must agree to rounding.
    """
    if F.side != LEFT:
        raise SemicrossError("side: the corner check takes a left polynomial")
    if F.system != sys:
        raise SemicrossError("system: polynomial lives over a different system")
    base: NormResult = shift_norm(sys, F, tol=tol, max_depth=max_depth)
    base_dense = orbit_shift_rep(sys, F, dense_depth).norm()
    entries = []
    for K in tail_depths:
        tail = add_tail(sys, K)
        G = Poly(tail.system, LEFT, {k: tail.extend(c) for k, c in F.coeffs.items()})
        ext = shift_norm(tail.system, G, tol=tol, max_depth=max_depth)
        ext_dense = orbit_shift_rep(tail.system, G, dense_depth).norm()
        diff = abs(base.value - ext.value)
        dense_diff = abs(base_dense - ext_dense)
        entries.append({
            "tail_depth": K,
            "base": base.to_dict(),
            "tail": ext.to_dict(),
            "difference": diff,
            "dense_difference": dense_diff,
            "agree": bool(diff <= 2 * tol and dense_diff <= 1e-10 * max(1.0, base_dense)),
        })
    return CornerReport(sys, tol, tuple(entries))
