"""Named verification checks: acceptance criteria and structural invariants.

Every check takes a ``RunConfig`` and a seeded generator and returns a
``CheckResult``. Seeds are derived from the configured seed and the check
name, so each check is reproducible on its own. ``run_checks`` returns
results sorted by name.
"""

from __future__ import annotations

import json
import math
import time
import zlib
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .algebra import LEFT, RIGHT, MatPoly, Poly, ell1_norm, mul, sharp, sharp_mat
from .config import RunConfig
from .dynsys import (FiniteSystem, TailSystem, add_tail, all_permutations, all_systems,
                     direct_limit, is_bi_minimal, is_minimal, is_single_cycle,
                     invariant_subsets, orbit_data, projective_limit, quotient_system,
                     systems_up_to)
from .envelope import (CROSSED_PRODUCT, FULL_CORNER, corner_consistency_check,
                       envelope_fourier_ideals, envelope_of, minimality_report,
                       simplicity_report)
from .norms import (CrossedElement, dual_kind, fejer_sum, matrix_norm, route_of, semicrossed_norm,
                    shift_norm, symbol_norm)
from .reps import (KINDS, orbit_shift_pair, orbit_shift_rep, periodic_regular_oracle,
                   regular_pair, regular_rep_oracle, symbol_rep, validate_pair)
from .sampling import (random_crossed, random_function, random_matpoly, random_poly,
                       random_radical_poly, random_system)

__all__ = ["ACCEPTANCE", "CHECKS", "CheckResult", "run_check", "run_checks"]

# floating-point slack for orderings that hold exactly in real arithmetic
ORDER_RTOL = 1e-12


@dataclass
class CheckResult:
    name: str
    passed: bool
    detail: str
    metrics: dict = field(default_factory=dict)
    seconds: float = 0.0

    def to_dict(self) -> dict:
        return {"name": self.name, "passed": self.passed, "detail": self.detail,
                "metrics": self.metrics, "seconds": round(self.seconds, 3)}


CheckFn = Callable[[RunConfig, np.random.Generator], tuple[bool, str, dict]]
CHECKS: dict[str, CheckFn] = {}
ACCEPTANCE: dict[str, str] = {}


def _check(name: str, acceptance: str | None = None):
    def deco(fn: CheckFn) -> CheckFn:
        CHECKS[name] = fn
        if acceptance:
            ACCEPTANCE[acceptance] = name
        return fn
    return deco


def _rng(cfg: RunConfig, name: str) -> np.random.Generator:
    return np.random.default_rng([cfg.seed, zlib.crc32(name.encode())])


def run_check(name: str, cfg: RunConfig | None = None) -> CheckResult:
    cfg = cfg or RunConfig()
    fn = CHECKS[name]
    t0 = time.perf_counter()
    try:
        passed, detail, metrics = fn(cfg, _rng(cfg, name))
    except Exception as exc:  # a crash is a failed check, not a crashed suite
        passed, detail, metrics = False, f"raised {type(exc).__name__}: {exc}", {}
    return CheckResult(name, bool(passed), detail, metrics, time.perf_counter() - t0)


def run_checks(cfg: RunConfig | None = None, names=None) -> list[CheckResult]:
    cfg = cfg or RunConfig()
    names = sorted(CHECKS if names is None else names)
    return [run_check(n, cfg) for n in names]


def _le(a: float, b: float) -> bool:
    return a <= b + ORDER_RTOL * max(1.0, abs(b))


# ---------------------------------------------------------------------------
# acceptance criteria


@_check("ac01_shift_matches_symbol", "AC1")
def _ac1(cfg, rng):
    worst, count, unconverged = 0.0, 0, 0
    for sys in systems_up_to(min(cfg.nmax, 4), permutations_only=True):
        for _ in range(50):
            F = random_poly(rng, sys, LEFT, 4)
            a = semicrossed_norm(sys, F, "contractive", **cfg.engine)
            b = semicrossed_norm(sys, F, "unitary", **cfg.engine)
            unconverged += (not a.converged) + (not b.converged)
            worst = max(worst, abs(a.value - b.value))
            count += 1
    ok = worst <= 2e-6 and unconverged == 0
    return ok, f"{count} polys, max |shift - symbol| = {worst:.2e}, unconverged = {unconverged}", \
        {"instances": count, "max_difference": worst, "unconverged": unconverged}


@_check("ac02_duality", "AC2")
def _ac2(cfg, rng):
    worst, count = 0.0, 0
    for i in range(70):
        sys = random_system(rng, min(cfg.nmax, 4))
        if i < 50:
            F = random_poly(rng, sys, LEFT, 4)
            G, norm = sharp(F), semicrossed_norm
        else:
            F = random_matpoly(rng, sys, LEFT, 2, 3)
            G, norm = sharp_mat(F), matrix_norm
        for kind in KINDS:
            a = norm(sys, F, kind, **cfg.engine)
            b = norm(sys, G, dual_kind(kind), **cfg.engine)
            worst = max(worst, abs(a.value - b.value))
            count += 1
    ok = worst <= 2e-6
    return ok, f"{count} pairs, max |left - right dual| = {worst:.2e}", \
        {"pairs": count, "max_difference": worst}


@_check("ac03_minimality_ideals", "AC3")
def _ac3(cfg, rng):
    bad, count = [], 0
    for n in range(1, min(cfg.nmax_comb, 5) + 1):
        for sys in all_systems(n):
            a = is_minimal(sys)
            b = not envelope_fourier_ideals(sys)
            c = is_single_cycle(sys)
            count += 1
            if not a == b == c:
                bad.append(sys.phi)
    return not bad, f"{count} systems, {len(bad)} disagreements" + (f", first {bad[0]}" if bad else ""), \
        {"systems": count, "disagreements": len(bad)}


_RADICAL_KINDS = ((LEFT, "co-isometric"), (LEFT, "unitary"), (RIGHT, "isometric"), (RIGHT, "unitary"))


@_check("ac04_radical_kernel", "AC4")
def _ac4(cfg, rng):
    max_radical, worst_gap, count = 0.0, -math.inf, 0
    for _ in range(40):
        sys = random_system(rng, min(cfg.nmax, 4))
        E = np.asarray(orbit_data(sys).eventual_image.members())
        for side, kind in _RADICAL_KINDS:
            R = random_radical_poly(rng, sys, side)
            max_radical = max(max_radical, semicrossed_norm(sys, R, kind, **cfg.engine).value)
            F = random_poly(rng, sys, side, 3)
            sup_e = max((float(np.max(np.abs(c[E]))) for c in F.coeffs.values()), default=0.0)
            val = semicrossed_norm(sys, F, kind, **cfg.engine).value
            worst_gap = max(worst_gap, sup_e - val)
            count += 1
    ok = max_radical <= 1e-9 and worst_gap <= 1e-6
    return ok, (f"{count} instances, max radical norm = {max_radical:.2e}, "
                f"max (sup_E |c_n| - norm) = {worst_gap:.2e}"), \
        {"instances": count, "max_radical_norm": max_radical, "max_coefficient_gap": worst_gap}


@_check("ac05_corner_consistency", "AC5")
def _ac5(cfg, rng):
    failures, worst, count = [], 0.0, 0
    for sys in systems_up_to(min(cfg.nmax, 4)):
        F = random_poly(rng, sys, LEFT, 3)
        rep = corner_consistency_check(sys, F, (1, 2, 3), tol=cfg.tol,
                                       max_depth=cfg.max_depth)
        for e in rep.entries:
            worst = max(worst, e["difference"])
        count += 1
        if not rep.passed:
            failures.append(sys.phi)
    return not failures, f"{count} systems x K=1..3, max |base - tail| = {worst:.2e}, failures = {len(failures)}", \
        {"systems": count, "max_difference": worst, "failures": len(failures)}


@_check("ac06_fejer_residual", "AC6")
def _ac6(cfg, rng):
    worst_res, increases, count = 0.0, 0, 0
    for _ in range(20):
        sys = random_system(rng, min(cfg.nmax, 4), permutation=True)
        F = random_crossed(rng, sys, int(rng.integers(0, 4)))
        D = max(F.degree, 0)
        prev = None
        for N in range(D, D + 9):
            res = symbol_norm(fejer_sum(F, N) - F, tol=cfg.tol, grid=cfg.grid).value
            worst_res = max(worst_res, res)
            if prev is not None and res > prev + 2 * cfg.tol:
                increases += 1
            prev = res
        count += 1
    ok = worst_res <= 1e-9 and increases == 0
    return ok, (f"{count} elements, max residual past the support = {worst_res:.3e}, "
                f"increases = {increases}"), \
        {"elements": count, "max_residual": worst_res, "increases": increases}


@_check("ac07_non_simple", "AC7")
def _ac7(cfg, rng):
    bad, count = [], 0
    for n in range(1, min(cfg.nmax_comb, 5) + 1):
        for sys in all_systems(n):
            rep = simplicity_report(sys)
            count += 1
            if rep.verdict != "non_simple" or not rep.validated:
                bad.append(sys.phi)
    return not bad, f"{count} systems, {len(bad)} without a validated witness", \
        {"systems": count, "failures": len(bad)}


@_check("ac08_covariant_pairs", "AC8")
def _ac8(cfg, rng):
    worst, rejected, count = 0.0, 0, 0
    for sys in systems_up_to(min(cfg.nmax, 4)):
        for pair in (orbit_shift_pair(sys, 6), regular_pair(sys, 6)):
            rep = validate_pair(pair, sys)
            worst = max(worst, rep.max_violation)
            rejected += not rep.accepted
            count += 1
    ok = rejected == 0 and worst <= 1e-10
    return ok, f"{count} pairs, rejected = {rejected}, max residual = {worst:.2e}", \
        {"pairs": count, "rejected": rejected, "max_residual": worst}


@_check("ac09_monotone_and_contractive", "AC9")
def _ac9(cfg, rng):
    drops, over, count = 0, 0, 0
    for _ in range(100):
        sys = random_system(rng, min(cfg.nmax, 4))
        F = random_poly(rng, sys, LEFT, 4)
        r = shift_norm(sys, F, **cfg.engine)
        lbs = r.effort.get("lower_bounds", [])
        drops += sum(b < a for a, b in zip(lbs, lbs[1:]))
        l1 = ell1_norm(F)
        for kind in KINDS:
            res = semicrossed_norm(sys, F, kind, **cfg.engine)
            over += not _le(res.lower_bound, l1)
        count += 1
    ok = drops == 0 and over == 0
    return ok, f"{count} instances, lower-bound drops = {drops}, norms above l1 = {over}", \
        {"instances": count, "drops": drops, "above_l1": over}


@_check("ac10_gap_witness", "AC10")
def _ac10(cfg, rng):
    sys = FiniteSystem((1, 1))
    F = Poly(sys, LEFT, {0: np.array([5.0, 1.0])})
    contr = semicrossed_norm(sys, F, "contractive", **cfg.engine).value
    coiso = semicrossed_norm(sys, F, "co-isometric", **cfg.engine).value
    ok = abs(contr - 5) <= 1e-6 and abs(coiso - 1) <= 1e-6
    return ok, f"contractive = {contr:.9f}, co-isometric = {coiso:.9f}", \
        {"contractive": contr, "co-isometric": coiso}


# ---------------------------------------------------------------------------
# dynsys


@_check("dynsys.eventual_image")
def _eventual(cfg, rng):
    bad, count = 0, 0
    for n in range(1, 7):
        for sys in all_systems(n):
            S = set(range(n))
            for _ in range(n):
                S = {sys.phi[x] for x in S}
            bad += set(orbit_data(sys).eventual_image.members()) != S
            count += 1
    return bad == 0, f"{count} systems, {bad} mismatches", {"systems": count, "mismatches": bad}


@_check("dynsys.minimality_routes")
def _min_routes(cfg, rng):
    count = 0
    for n in range(1, cfg.nmax_comb + 1):
        for sys in all_systems(n):
            is_minimal(sys)  # raises when the two routes disagree
            count += 1
    return True, f"{count} systems, enumeration and cycle test agree", {"systems": count}


@_check("dynsys.permutation_invariance")
def _perm_inv(cfg, rng):
    bad, count = 0, 0
    for n in range(1, 7):
        for sys in all_permutations(n):
            many = len(orbit_data(sys).cycles) > 1
            bad += bool(invariant_subsets(sys, "bi")) != many
            bad += is_minimal(sys) != is_bi_minimal(sys)
            count += 1
    return bad == 0, f"{count} permutations, {bad} violations", {"systems": count, "violations": bad}


@_check("dynsys.tail_structure")
def _tail_structure(cfg, rng):
    bad, count = 0, 0
    for sys in systems_up_to(cfg.nmax):
        for K in (1, 2, 3):
            tail = add_tail(sys, K)
            od = orbit_data(tail.system)
            bad += any(od.preperiod[t] < 1 for t in tail.tail_points)
            bad += quotient_system(tail.system) != quotient_system(sys)
            bad += TailSystem.from_literal(tail.to_literal()) != tail
            count += 1
    return bad == 0, f"{count} tail systems, {bad} violations", {"tails": count, "violations": bad}


@_check("dynsys.projective_limit")
def _projective(cfg, rng):
    bad, count = 0, 0
    for n in range(1, 7):
        for sys in all_permutations(n):
            bad += projective_limit(sys) != direct_limit(sys)
            count += 1
    return bad == 0, f"{count} permutations, {bad} mismatches", {"systems": count, "mismatches": bad}


# ---------------------------------------------------------------------------
# algebra


def _poly_close(A: Poly, B: Poly) -> bool:
    scale = max(1.0, ell1_norm(A), ell1_norm(B))
    return A.allclose(B, 1e-12 * scale)


@_check("algebra.ring_laws")
def _ring(cfg, rng):
    bad = 0
    for i in range(100):
        side = LEFT if i % 2 else RIGHT
        sys = random_system(rng, 4)
        F, G, H = (random_poly(rng, sys, side, 3) for _ in range(3))
        bad += not _poly_close(mul(mul(F, G), H), mul(F, mul(G, H)))
        bad += not _poly_close(mul(F, G + H), mul(F, G) + mul(F, H))
        bad += not _poly_close(mul(F + G, H), mul(F, H) + mul(G, H))
    return bad == 0, f"100 triples, {bad} violations", {"violations": bad}


@_check("algebra.ell1_submultiplicative")
def _submult(cfg, rng):
    bad = 0
    for i in range(100):
        sys = random_system(rng, 4)
        side = LEFT if i % 2 else RIGHT
        F, G = random_poly(rng, sys, side, 4), random_poly(rng, sys, side, 4)
        bad += not _le(ell1_norm(mul(F, G)), ell1_norm(F) * ell1_norm(G))
    return bad == 0, f"100 pairs, {bad} violations", {"violations": bad}


@_check("algebra.sharp_laws")
def _sharp(cfg, rng):
    bad = 0
    for _ in range(100):
        sys = random_system(rng, 4)
        F, G = random_poly(rng, sys, LEFT, 3), random_poly(rng, sys, LEFT, 3)
        bad += abs(ell1_norm(sharp(F)) - ell1_norm(F)) > 1e-12 * max(1.0, ell1_norm(F))
        bad += not sharp(sharp(F)).allclose(F, 0.0)
        bad += not _poly_close(sharp(mul(F, G)), mul(sharp(G), sharp(F)))
    return bad == 0, f"100 pairs, {bad} violations", {"violations": bad}


# ---------------------------------------------------------------------------
# reps


@_check("reps.block_decomposition")
def _blocks(cfg, rng):
    worst, count = 0.0, 0
    for sys in systems_up_to(cfg.nmax):
        F = random_poly(rng, sys, LEFT, 4)
        T = orbit_shift_rep(sys, F, 12)
        per = max(float(np.linalg.norm(T.block(x), 2)) for x in range(sys.n))
        worst = max(worst, abs(T.norm() - per) / max(1.0, per))
        count += 1
    return worst <= 1e-12, f"{count} systems, max relative difference = {worst:.2e}", \
        {"systems": count, "max_difference": worst}


@_check("reps.zero_extension")
def _zero_ext(cfg, rng):
    worst, count = 0.0, 0
    for sys in systems_up_to(cfg.nmax):
        F = random_poly(rng, sys, LEFT, 3)
        for K in (1, 2, 3):
            tail = add_tail(sys, K)
            G = Poly(tail.system, LEFT, {k: tail.extend(c) for k, c in F.coeffs.items()})
            for M in (4, 9):
                a = orbit_shift_rep(sys, F, M).norm()
                b = orbit_shift_rep(tail.system, G, M).norm()
                worst = max(worst, abs(a - b) / max(1.0, a))
                count += 1
    return worst <= 1e-12, f"{count} comparisons, max relative difference = {worst:.2e}", \
        {"comparisons": count, "max_difference": worst}


def _regular_norm(T) -> float:
    # the regular representation is block diagonal over points
    return max(float(np.linalg.norm(T.block(x), 2)) for x in range(T.size))


@_check("reps.symbol_vs_regular_L256")
def _sym_reg(cfg, rng):
    worst, count = 0.0, 0
    for sys in systems_up_to(min(cfg.nmax, 4), permutations_only=True):
        F = random_poly(rng, sys, LEFT, 4)
        s = symbol_norm(CrossedElement(sys, F.coeffs), tol=cfg.tol, grid=cfg.grid).value
        r = _regular_norm(regular_rep_oracle(sys, F.coeffs, 256))
        worst = max(worst, abs(s - r))
        count += 1
    return worst <= 1e-6, f"{count} systems, max |symbol - regular(L=256)| = {worst:.2e}", \
        {"systems": count, "max_difference": worst}


@_check("reps.symbol_vs_periodic_regular")
def _sym_per(cfg, rng):
    worst, count = 0.0, 0
    for sys in systems_up_to(min(cfg.nmax, 4), permutations_only=True):
        lcm = math.lcm(*orbit_data(sys).periods)
        W = lcm * max(1, 48 // lcm)
        co = {k: random_function(rng, sys.n) for k in range(-3, 5)}
        op = symbol_rep(sys, co)
        sup_roots = max(op.norm_at(np.exp(2j * np.pi * k / W)) for k in range(W))
        per = _regular_norm(periodic_regular_oracle(sys, co, W))
        worst = max(worst, abs(per - sup_roots) / max(1.0, per))
        count += 1
    return worst <= 1e-10, f"{count} systems, max relative difference = {worst:.2e}", \
        {"systems": count, "max_difference": worst}


@_check("reps.compression_monotone")
def _comp_mono(cfg, rng):
    drops, count = 0, 0
    for sys in systems_up_to(min(cfg.nmax, 3)):
        F = random_poly(rng, sys, LEFT, 3)
        norms = [orbit_shift_rep(sys, F, M).norm() for M in range(max(F.degree, 0) + 1, 17)]
        drops += sum(not _le(a, b) for a, b in zip(norms, norms[1:]))
        count += 1
        if sys.is_permutation:
            co = {k: random_function(rng, sys.n) for k in range(-2, 3)}
            rn = [regular_rep_oracle(sys, co, L).norm() for L in range(1, 13)]
            drops += sum(not _le(a, b) for a, b in zip(rn, rn[1:]))
            count += 1
    return drops == 0, f"{count} sequences, {drops} decreases", {"sequences": count, "decreases": drops}


# ---------------------------------------------------------------------------
# norms


@_check("norms.bounded_by_ell1")
def _bounded(cfg, rng):
    over, count = 0, 0
    for sys in systems_up_to(min(cfg.nmax, 4)):
        for side in (LEFT, RIGHT):
            F = random_poly(rng, sys, side, 3)
            l1 = ell1_norm(F)
            seen = {}
            for kind in KINDS:
                route = route_of(side, kind)
                if route not in seen:
                    seen[route] = semicrossed_norm(sys, F, kind, **cfg.engine)
                over += not _le(seen[route].lower_bound, l1)
                count += 1
    return over == 0, f"{count} norms, {over} above l1", {"norms": count, "above_l1": over}


@_check("norms.kernel_identification")
def _kernel(cfg, rng):
    bad, count = 0, 0
    for i in range(60):
        sys = random_system(rng, min(cfg.nmax, 4))
        for side, kind in ((LEFT, "unitary"), (RIGHT, "isometric")):
            F = random_radical_poly(rng, sys, side) if i % 2 else random_poly(rng, sys, side, 3)
            E = np.asarray(orbit_data(sys).eventual_image.members())
            vanishes = all(not np.any(c[E]) for c in F.coeffs.values())
            zero = semicrossed_norm(sys, F, kind, **cfg.engine).upper_bound <= 1e-12
            bad += vanishes != zero
            count += 1
    return bad == 0, f"{count} instances, {bad} mismatches", {"instances": count, "mismatches": bad}


@_check("norms.injective_agreement")
def _injective(cfg, rng):
    worst, count = 0.0, 0
    for sys in systems_up_to(min(cfg.nmax, 4), permutations_only=True):
        F = random_poly(rng, sys, LEFT, 3)
        left = [semicrossed_norm(sys, F, k, **cfg.engine).value for k in KINDS]
        right = [semicrossed_norm(sys, sharp(F), k, **cfg.engine).value for k in KINDS]
        worst = max(worst, max(left) - min(left), max(right) - min(right),
                    abs(left[0] - right[0]))
        count += 1
    return worst <= 2 * cfg.tol, f"{count} systems, max spread = {worst:.2e}", \
        {"systems": count, "max_spread": worst}


@_check("norms.quotient_isometry")
def _quotient(cfg, rng):
    worst, count = 0.0, 0
    for _ in range(40):
        sys = random_system(rng, min(cfg.nmax, 4))
        q, pts = direct_limit(sys)
        pts = list(pts)
        for side, kind in _RADICAL_KINDS:
            F = random_poly(rng, sys, side, 3)
            G = Poly(q, side, {k: c[pts] for k, c in F.coeffs.items()})
            a = semicrossed_norm(sys, F, kind, **cfg.engine).value
            b = semicrossed_norm(q, G, kind, **cfg.engine).value
            worst = max(worst, abs(a - b))
            count += 1
    return worst <= 1e-12, f"{count} instances, max difference = {worst:.2e}", \
        {"instances": count, "max_difference": worst}


# ---------------------------------------------------------------------------
# envelope and literals


@_check("envelope.minimality_equivalence")
def _min_eq(cfg, rng):
    count, minimal = 0, 0
    bad = 0
    for n in range(1, cfg.nmax_comb + 1):
        for sys in all_systems(n):
            rep = minimality_report(sys)  # raises when the four conditions disagree
            bad += rep.minimal != (sys.is_permutation and is_single_cycle(sys))
            minimal += rep.minimal
            count += 1
    return bad == 0, f"{count} systems, {minimal} minimal, {bad} not single-cycle permutations", \
        {"systems": count, "minimal": minimal, "violations": bad}


@_check("envelope.descriptors")
def _descriptors(cfg, rng):
    bad, count = 0, 0
    for n in range(1, cfg.nmax_comb + 1):
        for sys in all_systems(n):
            lim = direct_limit(sys)[0]
            d = envelope_of(sys, RIGHT, "isometric", cfg.tail_depth)
            bad += d.shape != CROSSED_PRODUCT or d.system != lim
            for side in (LEFT, RIGHT):
                for kind in KINDS:
                    e = envelope_of(sys, side, kind, cfg.tail_depth)
                    if sys.is_injective:
                        bad += e.shape != CROSSED_PRODUCT or e.system != sys
                    elif route_of(side, kind) == "symbol":
                        bad += e.shape != CROSSED_PRODUCT or e.system != lim
                    else:
                        bad += e.shape != FULL_CORNER
            count += 1
    return bad == 0, f"{count} systems x 8 descriptors, {bad} violations", \
        {"systems": count, "violations": bad}


@_check("cli.literal_roundtrip")
def _roundtrip(cfg, rng):
    bad, count = 0, 0
    for sys in systems_up_to(min(cfg.nmax, 4)):
        lit = json.loads(json.dumps(sys.to_literal()))
        bad += FiniteSystem.from_literal(lit) != sys
        tail = add_tail(sys, cfg.tail_depth)
        bad += TailSystem.from_literal(json.loads(json.dumps(tail.to_literal()))) != tail
        for side in (LEFT, RIGHT):
            F = random_poly(rng, sys, side, 3)
            back = Poly.from_literal(json.loads(json.dumps(F.to_literal())), sys)
            bad += not back.allclose(F, 0.0) or back.side != F.side
            M = random_matpoly(rng, sys, side, 2, 2)
            backm = MatPoly.from_literal(json.loads(json.dumps(M.to_literal())), sys)
            bad += not backm.allclose(M, 0.0)
        count += 1
    return bad == 0, f"{count} systems, {bad} round-trip failures", {"systems": count, "failures": bad}
