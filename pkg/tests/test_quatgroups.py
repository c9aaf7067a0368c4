"""
Tests for quaternionic subgroups, n_U, f3(U), splitting fields and the xi construction.
"""
import itertools
import random

import pytest

from wittlab.cohomology import BrauerClass2, H3Class, ModClass
from wittlab.errors import (InconsistentData, PreconditionFailed, TooManyGenerators,
                            WitnessIncomplete)
from wittlab.fields import QuadNumber, RationalFunctionField, Rationals
from wittlab.qforms import witt_is_zero
from wittlab.quatgroups import (RoleAssignment, descent_criterion, f3_of_group, n_U,
                                norm_descent, peyre_verdict, quadratic_splitting,
                                role_assignment, subgroup, xi_construct)


@pytest.fixture
def Q():
    return Rationals()


def symbols(field, *pairs):
    return [BrauerClass2.symbol(field, a, b) for a, b in pairs]


@pytest.fixture
def common_slot(Q):
    """<(-1,3), (-1,7), (-1,11)>, of order 8 and split by Q(i)."""
    return subgroup(symbols(Q, (-1, 3), (-1, 7), (-1, 11)))


def test_subgroup_order_and_presentations(Q):
    """(2,3) and (2,5) generate a group of order 4 containing (2,15)."""
    U = subgroup(symbols(Q, (2, 3), (2, 5)))
    assert U.order == 4
    assert U.quaternionic is True
    assert U.contains(BrauerClass2.symbol(Q, 2, 15))
    assert U.element(3) == BrauerClass2.symbol(Q, 2, 15)
    assert U.symbols[3] == (2, 15)


def test_dependent_generators(Q):
    """Repeated classes do not enlarge the basis."""
    U = subgroup(symbols(Q, (2, 3), (3, 2), (1, 5)))
    assert U.order == 2


def test_empty_subgroup(Q):
    """The trivial group needs an explicit field."""
    with pytest.raises(PreconditionFailed):
        subgroup([])
    U = subgroup([], field=Q)
    assert U.order == 1
    assert witt_is_zero(n_U(U))
    assert n_U(U).dim == 4


def test_too_many_generators(Q):
    """At most three generators are accepted."""
    with pytest.raises(TooManyGenerators):
        subgroup(symbols(Q, (-1, 3), (-1, 7), (-1, 11), (2, 3)))


def test_known_symbol_outside_group(Q):
    """Claimed members are checked."""
    with pytest.raises(InconsistentData):
        subgroup(symbols(Q, (2, 3)), known=[(-1, -1)])


def test_n_u_order_two(Q):
    """n_U of <(-1,-1)> is a hyperbolic plane pair plus the norm form."""
    U = subgroup(symbols(Q, (-1, -1)))
    assert n_U(U).dim == 8


def test_role_assignment(common_slot):
    """The roles satisfy Q1 + Q2 + Q3 = A."""
    roles = role_assignment(common_slot)
    assert roles == RoleAssignment(1, (2, 4, 7))
    assert roles.h == (3, 5, 6)


def test_f3_of_common_slot_group_vanishes(common_slot):
    """A common slot gives f3 = 0."""
    assert f3_of_group(common_slot).is_zero()


def test_f3_of_small_group(Q):
    """Groups of order at most 4 have trivial f3."""
    assert f3_of_group(subgroup(symbols(Q, (2, 3), (2, 5)))).is_zero()


def test_quadratic_splitting(common_slot, Q):
    """Q(i) splits every (-1, p)."""
    result = quadratic_splitting(common_slot)
    assert result
    assert result.d == -1
    assert quadratic_splitting(subgroup([], field=Q)).status == "SplitBy"


def test_peyre_verdict_small_group(Q):
    """Order at most 4 gives trivial homology."""
    verdict = peyre_verdict(subgroup(symbols(Q, (2, 3), (2, 5))))
    assert verdict.homology_order == 1


def test_peyre_verdict_split_group(common_slot):
    """A quadratic splitting field kills the homology."""
    verdict = peyre_verdict(common_slot)
    assert verdict.homology_order == 1
    assert verdict.splitting.d == -1
    assert verdict.as_dict(common_slot.field)["splitting"]["d"] == "-1"


def test_function_field_splitting():
    """<(2,t), (3,t)> is split by Q(t)(sqrt t)."""
    F = RationalFunctionField()
    t = F.variable
    U = subgroup(symbols(F, (2, t), (3, t)))
    result = quadratic_splitting(U)
    assert result.status == "SplitBy"
    assert F.format(result.d) == "t"
    assert result.witnesses == (F.coerce(2), F.coerce(3))


def test_xi_construction():
    """a=2, b=3, c=5 with x=-12+2s, y=-2+2s and C=0."""
    k = Rationals()
    x, y = QuadNumber(-12, 2, 2), QuadNumber(-2, 2, 2)
    C = BrauerClass2.zero(k)
    construction = xi_construct(2, 3, 5, x, y, C=C)
    assert construction.h.is_zero()
    assert construction.xi.is_zero()
    assert construction.group.order == 8
    assert construction.group.quaternionic is True
    assert construction.splitting.status == "SplitBy"
    assert construction.group.field.format(construction.splitting.d) == "t"
    assert construction.explicit_splitting.status == "SplitBy"
    assert construction.membership.status == "Equal"
    assert norm_descent(construction, C) is not None


@pytest.fixture
def decomposable_xi():
    """[C] = (5,3), y scaled by 3 so that C_K = (15, x)_K + (5, 3y)_K still holds."""
    k = Rationals()
    C = BrauerClass2.symbol(k, 5, 3)
    construction = xi_construct(2, 3, 5, QuadNumber(-12, 2, 2), QuadNumber(-6, 6, 2), C=C)
    return C, construction


def test_xi_with_nonzero_algebra(decomposable_xi):
    """xi = (t,5,3) is nonzero but lies in F^x.U, and F(sqrt(N(z)t)) with z = 1 splits U."""
    C, construction = decomposable_xi
    F = construction.group.field
    assert not C.is_zero()
    assert not construction.xi.is_zero()
    assert construction.xi == H3Class.symbol(F, F.variable, 5, 3)
    explicit = construction.explicit_splitting
    assert explicit.status == "SplitBy"
    assert F.format(explicit.d) == "t"
    assert explicit.witnesses == (F.coerce(2), F.coerce(3), F.coerce(5))
    assert construction.membership.status == "Equal"
    assert construction.as_dict()["xi_in_U"]["status"] == "Equal"
    assert construction.splitting.status == "SplitBy"


def test_norm_descent_tries_rational_norms(decomposable_xi):
    """z = 1 has no sqrt(a) part and is the first candidate."""
    C, construction = decomposable_xi
    assert norm_descent(construction, C) == 1


def test_xi_without_splitting_search():
    """split=False skips both splitting searches and the membership check."""
    k = Rationals()
    construction = xi_construct(2, 3, 5, QuadNumber(-12, 2, 2), QuadNumber(-2, 2, 2),
                                C=BrauerClass2.zero(k), split=False)
    assert construction.splitting is None
    assert construction.explicit_splitting is None
    assert construction.as_dict()["xi_in_U"] is None


def test_xi_rejects_rational_slots():
    """x and y must lie outside Q."""
    k = Rationals()
    with pytest.raises(PreconditionFailed):
        xi_construct(2, 3, 5, 3, QuadNumber(-2, 2, 2), C=BrauerClass2.zero(k), split=False)


def test_xi_rejects_inconsistent_algebra():
    """C_K must equal (bc, x)_K + (c, y)_K."""
    k = Rationals()
    with pytest.raises(InconsistentData):
        xi_construct(2, 3, 5, QuadNumber(-12, 2, 2), QuadNumber(-2, 2, 2),
                     C=BrauerClass2.symbol(k, -1, -1), split=False)


def test_descent_criterion(Q):
    """(-1,-1) = (-1,-1) + (2,3) + (2,3) with (2,3) split by Q(sqrt 2)."""
    C = BrauerClass2.symbol(Q, -1, -1)
    assert descent_criterion(C, 2, [(-1, -1), (2, 3), (2, 3)])
    assert not descent_criterion(C, 2, [(-1, -1), (-1, -1), (-1, -1)])
    with pytest.raises(WitnessIncomplete):
        descent_criterion(C, 2, [(-1, -1)])


def test_peyre_verdict_prefers_splitting(Q):
    """A splitting field settles the verdict before the seed is looked at."""
    U = subgroup(symbols(Q, (-1, 3), (-1, 7), (-1, 11)))
    seed = ModClass(H3Class.symbol(Q, -1, -1, -1))
    verdict = peyre_verdict(U, e3_seed=seed)
    assert verdict.homology_order == 1


SLOTS = [-1, 2, 3, 5, 7, -2, -3, 6, 11, -5]


def _common_slot_group(Q, rng):
    """A subgroup of order at most 8 generated by (x, y_i) for a random slot x."""
    x = rng.choice(SLOTS)
    ys = rng.sample([p for p in SLOTS if p != x], rng.randint(1, 3))
    known = [(x, a * b) for a, b in itertools.combinations(ys, 2)]
    if len(ys) == 3:
        known.append((x, ys[0] * ys[1] * ys[2]))
    return subgroup(symbols(Q, *((x, y) for y in ys)), known=known)


@pytest.mark.parametrize("seed", range(6))
def test_generated_groups_have_trivial_homology(Q, seed):
    """Common-slot groups are split by a quadratic extension, so H_U and f3(U) vanish."""
    U = _common_slot_group(Q, random.Random(seed))
    assert U.order <= 8
    verdict = peyre_verdict(U)
    assert verdict.homology_order == 1
    if U.order > 4:
        assert all(beta.is_split_by(verdict.splitting.d) for beta in U.elements)
    if U.order == 8:
        assert f3_of_group(U).is_zero()
