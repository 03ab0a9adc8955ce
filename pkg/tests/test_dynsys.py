import itertools

import numpy as np
import pytest

from semicross.dynsys import (FiniteSystem, SubsetMask, TailSystem, add_tail, all_systems,
                              direct_limit, invariant_subsets, is_bi_minimal, is_minimal,
                              is_single_cycle, is_topologically_free, orbit_data, phi_power,
                              projective_limit, quotient_system, radical_support, systems_up_to)
from semicross.errors import GuardError, NotPermutationError, SemicrossError


def _members(mask):
    return set(mask.members())


def test_orbit_data_collapsing_chain():
    od = orbit_data(FiniteSystem((1, 2, 3, 3)))
    assert _members(od.eventual_image) == {3}
    assert od.cycles == ((3,),)
    assert od.preperiod == (3, 2, 1, 0)


def test_orbit_data_three_cycle():
    od = orbit_data(FiniteSystem((1, 2, 0)))
    assert _members(od.eventual_image) == {0, 1, 2}
    assert od.cycles == ((0, 1, 2),)
    assert od.preperiod == (0, 0, 0)


def test_orbit_data_two_cycle_with_trees():
    sys = FiniteSystem((1, 0, 1, 2, 3))
    od = orbit_data(sys)
    assert _members(od.eventual_image) == {0, 1}
    assert od.cycles == ((0, 1),)
    # oracle: the image of phi^n stabilises after n steps
    image = set(phi_power(sys, sys.n).tolist())
    assert image == {0, 1}


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_eventual_image_is_stable_image(n):
    for sys in all_systems(n):
        od = orbit_data(sys)
        assert _members(od.eventual_image) == set(phi_power(sys, n).tolist())
        for x in range(n):
            y = int(phi_power(sys, od.preperiod[x])[x])
            assert y in od.eventual_image


def test_radical_support():
    assert _members(radical_support(FiniteSystem((1, 2, 3, 3)))) == {0, 1, 2}
    assert radical_support(FiniteSystem((2, 0, 1))).is_empty
    sys = FiniteSystem((1, 1))
    assert _members(radical_support(sys)) == {0}
    f = np.array([1.0, 0.0])
    assert np.all(f[list(sys.phi)] == 0)


def test_direct_limit():
    lim, pts = direct_limit(FiniteSystem((1, 2, 3, 3)))
    assert lim == FiniteSystem((0,)) and pts == (3,)
    perm = FiniteSystem((1, 2, 0))
    assert direct_limit(perm)[0] == perm
    lim, pts = direct_limit(FiniteSystem((1, 0, 1, 2, 3)))
    assert lim == FiniteSystem((1, 0)) and pts == (0, 1)
    assert quotient_system(FiniteSystem((1, 0, 1, 2, 3))) == FiniteSystem((1, 0))


def test_invariant_subsets():
    ident = FiniteSystem((0, 1))
    assert sorted(s.members() for s in invariant_subsets(ident)) == [(0,), (1,)]
    assert invariant_subsets(FiniteSystem((1, 2, 0))) == []
    assert [s.members() for s in invariant_subsets(FiniteSystem((1, 1)))] == [(1,)]
    bi = invariant_subsets(FiniteSystem((1, 0, 2)), "bi")
    assert sorted(s.members() for s in bi) == [(0, 1), (2,)]


def test_invariant_subsets_guards():
    with pytest.raises(NotPermutationError):
        invariant_subsets(FiniteSystem((1, 1)), "bi")
    with pytest.raises(GuardError):
        invariant_subsets(FiniteSystem(tuple(range(21))))
    with pytest.raises(SemicrossError):
        invariant_subsets(FiniteSystem((0,)), "sideways")


def test_minimality_predicates():
    cyc = FiniteSystem((1, 2, 0))
    assert is_minimal(cyc) and is_bi_minimal(cyc) and is_single_cycle(cyc)
    ident = FiniteSystem((0, 1))
    assert not is_minimal(ident)
    assert invariant_subsets(ident)[0].members() == (0,)


@pytest.mark.parametrize("n", [1, 2, 3, 4, 5])
def test_minimal_iff_single_cycle(n):
    for sys in all_systems(n):
        assert is_minimal(sys) == is_single_cycle(sys)


def test_never_topologically_free():
    for sys in systems_up_to(4):
        free, witness = is_topologically_free(sys)
        assert not free
        x, p = witness
        assert int(phi_power(sys, p)[x]) == x


def test_add_tail_examples():
    t = add_tail(FiniteSystem((1, 1)), 2)
    assert t.tail_points == (2, 3)
    assert t.system.phi[t.index(0, -1)] == 0
    assert t.system.phi[t.index(0, -2)] == t.index(0, -1)
    perm = FiniteSystem((1, 2, 0))
    assert add_tail(perm, 3).is_trivial and add_tail(perm, 3).system == perm
    t1 = add_tail(FiniteSystem((1, 2, 3, 3)), 1)
    assert t1.tail_points == (4,) and t1.system.phi[4] == 0


def test_tail_extension_is_zero_on_tail():
    t = add_tail(FiniteSystem((1, 1, 0)), 2)
    f = np.array([1.0, 2.0, 3.0])
    g = t.extend(f)
    assert np.array_equal(g[:3], f) and not np.any(g[3:])


def test_projective_limit():
    cyc = FiniteSystem((1, 2, 0))
    assert projective_limit(cyc)[0] == cyc
    one = FiniteSystem((0,))
    assert projective_limit(one)[0] == one
    mixed = FiniteSystem((1, 0, 2))
    assert projective_limit(mixed)[0] == mixed


def test_literal_validation():
    with pytest.raises(SemicrossError, match="phi"):
        FiniteSystem.from_literal({"n": 2, "phi": [0, 2]})
    with pytest.raises(SemicrossError, match="phi"):
        FiniteSystem.from_literal({"n": 3, "phi": [0, 1]})
    sys = FiniteSystem((1, 1, 0))
    assert FiniteSystem.from_literal(sys.to_literal()) == sys
    t = add_tail(sys, 2)
    assert TailSystem.from_literal(t.to_literal()) == t


def test_subset_mask_roundtrip():
    for members in itertools.combinations(range(4), 2):
        m = SubsetMask.from_members(4, members)
        assert m.members() == members
        assert set(m.complement().members()) == set(range(4)) - set(members)
        assert m.indicator().sum() == 2
