import numpy as np
import pytest

from semicross.algebra import LEFT, RIGHT, MatPoly, Poly, ell1_norm, sharp
from semicross.dynsys import FiniteSystem, quotient_system, systems_up_to
from semicross.errors import SemicrossError, SideMismatchError
from semicross.norms import (CrossedElement, cond_expectation, dual_kind, fejer_sum,
                             fourier_coeff, matrix_norm, route_of, semicrossed_norm, shift_norm,
                             symbol_norm)
from semicross.reps import KINDS, orbit_shift_rep, symbol_rep
from semicross.sampling import random_poly, random_radical_poly

ONE = FiniteSystem((0,))
SWAP = FiniteSystem((1, 0))
TWO_TO_ONE = FiniteSystem((1, 1))


def _bracket_contains(res, value, tol=1e-9):
    return res.lower_bound - tol <= value <= res.upper_bound + tol


def test_disc_algebra_element():
    F = Poly(ONE, LEFT, {0: np.array([1.0]), 1: np.array([1.0])})
    res = shift_norm(ONE, F)
    assert res.converged and res.value == pytest.approx(2.0, abs=1e-6)
    assert _bracket_contains(res, 2.0)


def test_unit_has_norm_one():
    for kind in KINDS:
        for side in (LEFT, RIGHT):
            res = semicrossed_norm(TWO_TO_ONE, Poly.unit(TWO_TO_ONE, side), kind)
            assert res.value == pytest.approx(1.0, abs=1e-9)


def test_gap_between_kinds():
    F = Poly.monomial(TWO_TO_ONE, LEFT, 0, [5.0, 1.0])
    assert semicrossed_norm(TWO_TO_ONE, F, "contractive").value == pytest.approx(5.0, abs=1e-6)
    assert semicrossed_norm(TWO_TO_ONE, F, "co-isometric").value == pytest.approx(1.0, abs=1e-6)


def test_symbol_norm_examples():
    assert symbol_norm(CrossedElement(ONE, {0: [2.0], 1: [1.0]})).value == \
        pytest.approx(3.0, abs=1e-6)
    f = np.array([0.3, -2.0 + 1j, 1.5])
    sys = FiniteSystem((1, 2, 0))
    assert symbol_norm(CrossedElement(sys, {0: f})).value == pytest.approx(np.abs(f).max())


def test_symbol_norm_against_fine_grid():
    elem = CrossedElement(SWAP, {0: [1.0, -1.0], 1: [1.0, 1.0]})
    op = symbol_rep(SWAP, elem.coeffs)
    grid = max(op.norm_at(z) for z in np.exp(2j * np.pi * np.arange(4096) / 4096))
    res = symbol_norm(elem, tol=1e-9)
    assert res.value == pytest.approx(grid, abs=1e-6)
    assert res.lower_bound <= res.upper_bound


@pytest.mark.parametrize("sys", [ONE, SWAP, TWO_TO_ONE, FiniteSystem((1, 2, 3, 3)),
                                 FiniteSystem((1, 0, 1))], ids=lambda s: str(s.phi))
def test_shift_bracket_dominates_dense_compressions(sys):
    rng = np.random.default_rng(sys.n)
    for _ in range(3):
        F = random_poly(rng, sys, LEFT, 3)
        res = shift_norm(sys, F)
        dense = orbit_shift_rep(sys, F, 300).norm()
        assert dense <= res.upper_bound + 1e-9
        assert res.upper_bound - dense <= 1e-3


def test_shift_effort_reports_depth():
    F = Poly(ONE, LEFT, {0: np.array([1.0]), 1: np.array([1.0])})
    effort = shift_norm(ONE, F).effort
    assert effort["route"] == "shift" and effort["depth"] >= 64


def test_matrix_examples():
    sys = FiniteSystem((1, 2, 0))
    F = random_poly(np.random.default_rng(0), sys, LEFT, 3)
    Z = Poly.zero(sys, LEFT)
    assert matrix_norm(sys, MatPoly([[F, Z], [Z, Z]]), "unitary").value == pytest.approx(
        semicrossed_norm(sys, F, "unitary").value, abs=2e-6)
    one = Poly.unit(sys, LEFT)
    assert matrix_norm(sys, MatPoly([[one, one], [one, one]]), "contractive").value == \
        pytest.approx(2.0, abs=1e-6)


def test_radical_polys_vanish_in_the_envelope():
    rng = np.random.default_rng(7)
    sys = FiniteSystem((1, 2, 3, 3))
    for _ in range(5):
        F = random_radical_poly(rng, sys, LEFT, 3)
        assert semicrossed_norm(sys, F, "unitary").value <= 1e-9
        assert semicrossed_norm(sys, F, "co-isometric").value <= 1e-9
        assert semicrossed_norm(sys, sharp(F), "isometric").value <= 1e-9


def test_quotient_norm_matches_restricted_system():
    sys = FiniteSystem((1, 0, 1, 2, 3))
    F = random_poly(np.random.default_rng(2), sys, LEFT, 3)
    G = Poly(quotient_system(sys), LEFT, {k: c[[0, 1]] for k, c in F.coeffs.items()})
    assert semicrossed_norm(sys, F, "unitary").value == pytest.approx(
        semicrossed_norm(G.system, G, "contractive").value, abs=2e-6)


@pytest.mark.parametrize("kind", KINDS)
def test_duality_on_a_non_injective_system(kind):
    sys = FiniteSystem((1, 2, 2))
    F = random_poly(np.random.default_rng(11), sys, LEFT, 3)
    a = semicrossed_norm(sys, F, kind).value
    b = semicrossed_norm(sys, sharp(F), dual_kind(kind)).value
    assert a == pytest.approx(b, abs=2e-6)
    assert a <= ell1_norm(F) + 1e-12


def test_routing_table():
    assert [route_of(LEFT, k) for k in KINDS] == ["shift", "shift", "symbol", "symbol"]
    assert [route_of(RIGHT, k) for k in KINDS] == ["right_shift", "symbol", "right_shift",
                                                   "symbol"]
    assert [dual_kind(k) for k in KINDS] == ["contractive", "co-isometric", "isometric",
                                             "unitary"]
    with pytest.raises(SemicrossError):
        route_of(LEFT, "normal")


def test_side_checks():
    with pytest.raises(SideMismatchError):
        shift_norm(ONE, Poly.unit(ONE, RIGHT))
    with pytest.raises(SideMismatchError):
        semicrossed_norm(SWAP, Poly.unit(ONE, LEFT), "unitary")


def test_fourier_and_fejer_coefficients():
    F = CrossedElement(SWAP, {-2: [1.0, 2.0], 0: [3.0, 0.0], 1: [0.0, 1j]})
    assert np.allclose(cond_expectation(F), [3.0, 0.0])
    assert np.allclose(fourier_coeff(F, 5), 0)
    S = fejer_sum(F, 2)
    assert np.allclose(fourier_coeff(S, 1), [0.0, 2j / 3])
    assert np.allclose(fourier_coeff(S, -2), [1 / 3, 2 / 3])
    with pytest.raises(SemicrossError):
        fejer_sum(F, -1)


def test_fejer_residual_decays_like_one_over_n():
    F = CrossedElement(ONE, {1: [1.0]})
    res = [symbol_norm(fejer_sum(F, N) - F).value for N in (1, 3, 7, 15)]
    assert res == pytest.approx([1 / 2, 1 / 4, 1 / 8, 1 / 16], abs=1e-6)


def test_crossed_product_multiplication():
    U = CrossedElement.monomial(SWAP, 1, [1.0, 1.0])
    f = CrossedElement.monomial(SWAP, 0, [2.0, 5.0])
    # U pihat(f) U* = pihat(f o sigma^{-1})
    conj = U * f * U.adjoint()
    assert np.allclose(conj.coeffs[0], [5.0, 2.0])
    assert (U * U.adjoint()).allclose(CrossedElement.unit(SWAP))


def test_left_regular_covariance_on_symbols():
    sys = FiniteSystem((1, 2, 0))
    U = CrossedElement.monomial(sys, 1, np.ones(3))
    c = np.array([1.0, 2j, -3.0])
    alpha_c = c[list(sys.phi)]
    lhs = (U.adjoint() * CrossedElement.monomial(sys, 0, c) * U).symbol()
    rhs = CrossedElement.monomial(sys, 0, alpha_c).symbol()
    for z in np.exp(1j * np.array([0.0, 1.1, 2.9])):
        assert np.allclose(lhs.evaluate(z)[0], rhs.evaluate(z)[0])
