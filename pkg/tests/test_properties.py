"""Algebraic identities on random small inputs."""

import numpy as np
from hypothesis import given, settings
from hypothesis import strategies as st

from semicross.algebra import LEFT, RIGHT, MatPoly, Poly, ell1_norm, mul, sharp, sharp_mat
from semicross.dynsys import FiniteSystem, orbit_data
from semicross.norms import CrossedElement, fejer_sum, semicrossed_norm, symbol_norm
from semicross.reps import orbit_shift_rep

small = st.floats(-3, 3, allow_nan=False, allow_infinity=False)


@st.composite
def systems(draw, n_max=4, permutation=False):
    n = draw(st.integers(1, n_max))
    if permutation:
        return FiniteSystem(tuple(draw(st.permutations(range(n)))))
    return FiniteSystem(tuple(draw(st.lists(st.integers(0, n - 1), min_size=n, max_size=n))))


@st.composite
def polys(draw, sys, side, max_degree=3):
    d = draw(st.integers(0, max_degree))
    coeffs = {}
    for k in range(d + 1):
        re = draw(st.lists(small, min_size=sys.n, max_size=sys.n))
        im = draw(st.lists(small, min_size=sys.n, max_size=sys.n))
        coeffs[k] = np.array(re) + 1j * np.array(im)
    return Poly(sys, side, coeffs)


@st.composite
def poly_triples(draw, side=None):
    sys = draw(systems())
    side = side or draw(st.sampled_from([LEFT, RIGHT]))
    return tuple(draw(polys(sys, side)) for _ in range(3))


@settings(max_examples=60, deadline=None)
@given(poly_triples())
def test_associative_and_distributive(fgh):
    F, G, H = fgh
    assert mul(mul(F, G), H).allclose(mul(F, mul(G, H)), 1e-9)
    assert mul(F, G + H).allclose(mul(F, G) + mul(F, H), 1e-9)
    assert mul(F + G, H).allclose(mul(F, H) + mul(G, H), 1e-9)
    one = Poly.unit(F.system, F.side)
    assert mul(one, F).allclose(F, 0.0) and mul(F, one).allclose(F, 0.0)


@settings(max_examples=60, deadline=None)
@given(poly_triples())
def test_ell1_is_submultiplicative(fgh):
    F, G, _ = fgh
    assert ell1_norm(mul(F, G)) <= ell1_norm(F) * ell1_norm(G) * (1 + 1e-12) + 1e-12
    assert ell1_norm(F + G) <= ell1_norm(F) + ell1_norm(G) + 1e-12


@settings(max_examples=60, deadline=None)
@given(poly_triples(LEFT))
def test_sharp_reverses_products(fgh):
    F, G, _ = fgh
    assert sharp(mul(F, G)).allclose(mul(sharp(G), sharp(F)), 1e-9)
    assert sharp(sharp(F)).allclose(F, 0.0)
    assert ell1_norm(sharp(F)) == ell1_norm(F)


@settings(max_examples=30, deadline=None)
@given(st.data())
def test_sharp_mat_reverses_products(data):
    sys = data.draw(systems(3))
    M = MatPoly([[data.draw(polys(sys, LEFT, 2)) for _ in range(2)] for _ in range(2)])
    N = MatPoly([[data.draw(polys(sys, LEFT, 2)) for _ in range(2)] for _ in range(2)])
    assert sharp_mat(M * N).allclose(sharp_mat(N) * sharp_mat(M), 1e-9)


@settings(max_examples=40, deadline=None)
@given(st.data())
def test_compressions_nondecreasing_and_contractive(data):
    sys = data.draw(systems())
    F = data.draw(polys(sys, LEFT))
    norms = [orbit_shift_rep(sys, F, M).norm() for M in (F.degree + 2, 2 * F.degree + 3, 24)]
    bound = ell1_norm(F)
    for a, b in zip(norms, norms[1:]):
        assert a <= b * (1 + 1e-12) + 1e-12
    assert norms[-1] <= bound * (1 + 1e-12) + 1e-12


@settings(max_examples=30, deadline=None)
@given(st.data())
def test_norm_bracket_within_ell1(data):
    sys = data.draw(systems(3))
    F = data.draw(polys(sys, data.draw(st.sampled_from([LEFT, RIGHT])), 2))
    kind = data.draw(st.sampled_from(["contractive", "isometric", "co-isometric", "unitary"]))
    res = semicrossed_norm(sys, F, kind)
    assert res.lower_bound <= res.upper_bound
    assert res.value <= ell1_norm(F) * (1 + 1e-12) + 1e-12


@settings(max_examples=25, deadline=None)
@given(st.data())
def test_crossed_product_is_a_star_algebra(data):
    sys = data.draw(systems(3, permutation=True))
    a = CrossedElement.from_poly(data.draw(polys(sys, LEFT, 2)))
    b = CrossedElement.from_poly(data.draw(polys(sys, LEFT, 2))).adjoint()
    assert (a * b).adjoint().allclose(b.adjoint() * a.adjoint(), 1e-9)
    # C*-identity on the symbol
    na = symbol_norm(a).value
    assert abs(symbol_norm(a.adjoint() * a).value - na ** 2) <= 1e-5 * max(1.0, na ** 2)


@settings(max_examples=25, deadline=None)
@given(st.data())
def test_fejer_residual_decreases_past_support(data):
    sys = data.draw(systems(3, permutation=True))
    F = CrossedElement.from_poly(data.draw(polys(sys, LEFT, 2))).adjoint()
    D = max(F.degree, 0)
    res = [symbol_norm(fejer_sum(F, N) - F).value for N in range(D, D + 5)]
    assert all(b <= a + 2e-6 for a, b in zip(res, res[1:]))
    assert orbit_data(sys).eventual_image.is_full
