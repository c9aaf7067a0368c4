"""
Tests for Brauer classes, degree-3 classes and quotients by a subgroup.
"""
import pytest

from wittlab.cohomology import (BrauerClass2, BrauerModClass, H3Class, ModClass, brauer_add,
                                brauer_is_zero, corestriction, cup, mod_equal)
from wittlab.errors import FieldMismatch, ModulusMismatch, ZeroSlot
from wittlab.fields import Place, QuadExtension, QuadNumber, RationalFunctionField, Rationals


@pytest.fixture
def Q():
    return Rationals()


@pytest.fixture
def Qt():
    return RationalFunctionField()


def test_hamilton_quaternions(Q):
    """(-1,-1) ramifies at 2 and at the real place."""
    beta = BrauerClass2.symbol(Q, -1, -1)
    assert beta.ramification() == frozenset({Place("finite", 2), Place("real")})
    assert beta.index() == 2
    assert beta.is_split_by(-1)
    assert not beta.is_split_by(2)


def test_zero_slot(Q):
    """Quaternion symbols need units."""
    with pytest.raises(ZeroSlot):
        BrauerClass2.symbol(Q, 0, 1)


def test_common_slot_merge(Q):
    """(2,3) + (2,5) is presented by the single symbol (2,15)."""
    beta = BrauerClass2.from_symbols(Q, [(2, 3), (2, 5)])
    assert beta.merged() == [(2, 15)]
    assert beta == BrauerClass2.symbol(Q, 2, 15)


def test_sum_of_equal_classes_is_zero(Q):
    """Classes are 2-torsion."""
    beta = BrauerClass2.symbol(Q, 3, -7)
    assert (beta + beta).is_zero()
    assert (beta + beta).index() == 1


def test_brauer_class_over_function_field(Qt):
    """The residue at t of (2,t)+(3,t) is the class of 6."""
    beta = BrauerClass2.from_symbols(Qt, [(2, Qt.parse("t")), (3, Qt.parse("t"))])
    (pi,) = Qt.support([Qt.parse("t")])
    assert beta.residue(pi) == Qt.residue_field(pi).square_class(6)
    assert not beta.is_zero()


def test_function_field_class_zero_by_specialization(Qt):
    """(t,t) + (t,-1) = (t,-t) vanishes."""
    t = Qt.variable
    assert BrauerClass2.from_symbols(Qt, [(t, t), (t, -1)]).is_zero()


def test_biquaternion_index_four(Qt):
    """(-1,-1)+(t,2) has an anisotropic Albert form by Springer at t."""
    t = Qt.variable
    beta = BrauerClass2.from_symbols(Qt, [(-1, -1), (t, 2)])
    assert beta.index() == 4


def test_ramification_over_function_field_rejected(Qt):
    """Ramification sets belong to number fields."""
    with pytest.raises(FieldMismatch):
        BrauerClass2.symbol(Qt, Qt.variable, 2).ramification()


def test_h3_over_rationals(Q):
    """Degree-3 classes over Q are detected by the real place."""
    assert H3Class.symbol(Q, -1, 3, 5).is_zero()
    c = H3Class.symbol(Q, -1, -1, -1)
    assert not c.is_zero()
    assert c.real_values() == {Place("real"): 1}
    assert c + c == H3Class.zero(Q)


def test_cup_product(Q):
    """(-1).(-1,-1) is the symbol (-1,-1,-1)."""
    assert cup(-1, BrauerClass2.symbol(Q, -1, -1)) == H3Class.symbol(Q, -1, -1, -1)


def test_h3_over_function_field(Qt):
    """(t,2,5) has a nonzero residue at t."""
    t = Qt.variable
    c = H3Class.symbol(Qt, t, 2, 5)
    assert not c.is_zero()
    (pi,) = Qt.support([t])
    assert not c.residue(pi).is_zero()


def test_h3_slots_printed_by_square_class(Q, Qt):
    """t^3 prints as t and 12 as 3; the class itself is unchanged."""
    t = Qt.variable
    c = H3Class.symbol(Qt, t * t * t, -1, 12)
    assert c.as_dict()["terms"] == [{"sym": ["t", "-1", "3"]}]
    assert str(c) == "(t,-1,3)"
    assert c == H3Class.symbol(Qt, t, -1, 3)
    assert str(H3Class.symbol(Q, 4, -1, -1)) == "(1,-1,-1)"


def test_corestriction_projection_formula(Q):
    """With rational slots, cores(mu.(x,y)) is (N(mu),x,y)."""
    K = QuadExtension(Q, 2)
    mu = QuadNumber(1, 1, 2)
    assert corestriction(K, mu, 3, 5) == H3Class.symbol(Q, -1, 3, 5)


def test_corestriction_of_hyperbolic_symbol(Q):
    """A symbol with a slot 1 vanishes and so does its corestriction."""
    K = QuadExtension(Q, 2)
    assert corestriction(K, 1, K.field.generator, -1).is_zero()


def test_mod_equal_not_equal(Q):
    """(-1,-1,-1) is not in Q^x.(2,3)."""
    x = ModClass(H3Class.symbol(Q, -1, -1, -1), (BrauerClass2.symbol(Q, 2, 3),))
    y = ModClass(H3Class.zero(Q), (BrauerClass2.symbol(Q, 2, 3),))
    assert mod_equal(x, y).status == "NotEqual"


def test_mod_equal_with_multiplier(Q):
    """(-1,-1,-1) = (-1).(-1,-1) lies in Q^x.(-1,-1)."""
    modulus = (BrauerClass2.symbol(Q, -1, -1),)
    verdict = mod_equal(ModClass(H3Class.symbol(Q, -1, -1, -1), modulus),
                        ModClass(H3Class.zero(Q), modulus))
    assert verdict
    assert verdict.multipliers == (-1,)


def test_mod_equal_modulus_mismatch(Q):
    """Classes modulo different subgroups are not compared."""
    x = ModClass(H3Class.zero(Q), (BrauerClass2.symbol(Q, 2, 3),))
    y = ModClass(H3Class.zero(Q), ())
    with pytest.raises(ModulusMismatch):
        mod_equal(x, y)


def test_mod_equal_opaque_terms(Q):
    """Opaque terms that do not cancel give Unknown."""
    x = ModClass(H3Class.zero(Q), (), ("e3(h)",))
    verdict = mod_equal(x, ModClass(H3Class.zero(Q)))
    assert verdict.status == "Unknown"
    assert mod_equal(x, x).status == "Equal"


def test_brauer_mod_class(Q):
    """(2,3) is zero modulo itself but not modulo (-1,-1)."""
    beta = BrauerClass2.symbol(Q, 2, 3)
    assert BrauerModClass(beta, (beta,)).is_zero()
    assert not BrauerModClass(beta, (BrauerClass2.symbol(Q, -1, -1),)).is_zero()
    assert BrauerModClass(beta, (), ("c(h)",)).is_zero() is None


def test_brauer_wrappers(Q):
    """Functional forms of class addition and the zero test."""
    beta = brauer_add(BrauerClass2.symbol(Q, 2, 3), BrauerClass2.symbol(Q, 2, 5))
    assert beta == BrauerClass2.symbol(Q, 2, 15)
    assert brauer_is_zero(brauer_add(beta, beta))
