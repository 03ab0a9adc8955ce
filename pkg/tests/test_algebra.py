import numpy as np
import pytest

from semicross.algebra import (LEFT, RIGHT, MatPoly, Poly, alpha_power, ell1_norm, mul, sharp,
                               sharp_mat)
from semicross.dynsys import FiniteSystem
from semicross.errors import SemicrossError, SideMismatchError

TWO_TO_ONE = FiniteSystem((1, 1))
THREE_CYCLE = FiniteSystem((1, 2, 0))


def test_alpha_power_examples():
    f = np.array([1.0, 2.0, 3.0])
    assert np.array_equal(alpha_power(THREE_CYCLE, f, 0), f)
    assert np.array_equal(alpha_power(TWO_TO_ONE, [1.0, 0.0], 1), [0.0, 0.0])
    assert np.array_equal(alpha_power(THREE_CYCLE, f, 2), [3.0, 1.0, 2.0])


def test_right_product_example():
    c = Poly.monomial(TWO_TO_ONE, RIGHT, 1, [1.0, 2.0])
    y = Poly.monomial(TWO_TO_ONE, RIGHT, 0, [3.0, 4.0])
    prod = mul(c, y)
    assert prod.support() == (1,)
    assert np.allclose(prod.coeff(1), [4.0, 8.0])


def test_left_product_twists_the_right_factor():
    a = Poly.monomial(THREE_CYCLE, LEFT, 1, [1.0, 2.0, 3.0])
    b = Poly.monomial(THREE_CYCLE, LEFT, 2, [5.0, 7.0, 11.0])
    # (delta_1 (x) a)(delta_2 (x) b) = delta_3 (x) alpha^2(a) b
    expected = alpha_power(THREE_CYCLE, [1.0, 2.0, 3.0], 2) * np.array([5.0, 7.0, 11.0])
    assert np.allclose(mul(a, b).coeff(3), expected)


def test_ell1_examples():
    assert ell1_norm(Poly.zero(TWO_TO_ONE, LEFT)) == 0.0
    assert ell1_norm(Poly.unit(THREE_CYCLE, LEFT)) == 1.0
    F = Poly(TWO_TO_ONE, LEFT, {0: np.array([3.0, -4j]), 2: np.array([0.0, 1.0])})
    assert ell1_norm(F) == pytest.approx(5.0)


def test_sharp_flips_side_and_conjugates():
    F = Poly(TWO_TO_ONE, LEFT, {1: np.array([1 + 2j, 3.0])})
    G = sharp(F)
    assert G.side == RIGHT
    assert np.allclose(G.coeff(1), [1 - 2j, 3.0])
    assert sharp(G) == F


def test_sharp_mat_transposes():
    P = [[Poly.monomial(THREE_CYCLE, LEFT, i + j, [i + 1j * j] * 3) for j in range(2)]
         for i in range(2)]
    M = MatPoly(P)
    S = sharp_mat(M)
    assert S.side == RIGHT
    assert S[0, 1] == sharp(M[1, 0])


def test_side_mismatch_raises():
    with pytest.raises(SideMismatchError):
        Poly.unit(TWO_TO_ONE, LEFT) + Poly.unit(TWO_TO_ONE, RIGHT)
    with pytest.raises(SideMismatchError):
        mul(Poly.unit(TWO_TO_ONE, LEFT), Poly.unit(THREE_CYCLE, LEFT))


def test_literal_roundtrip_and_errors():
    F = Poly(THREE_CYCLE, RIGHT, {0: np.array([1, 2j, 3]), 4: np.array([0, 0, -1])})
    assert Poly.from_literal(F.to_literal(), THREE_CYCLE) == F
    with pytest.raises(SemicrossError, match="values"):
        Poly.from_literal({"side": "left", "coeffs": [{"deg": 0, "values": [[1, 0]]}]},
                          THREE_CYCLE)
    with pytest.raises(SemicrossError, match="deg"):
        Poly.from_literal({"side": "left", "coeffs": [{"deg": -1, "values": []}]}, THREE_CYCLE)
    with pytest.raises(SemicrossError, match="side"):
        Poly.from_literal(F.to_literal(), THREE_CYCLE, side=LEFT)
    M = MatPoly([[F, F], [F, Poly.zero(THREE_CYCLE, RIGHT)]])
    assert MatPoly.from_literal(M.to_literal(), THREE_CYCLE) == M
