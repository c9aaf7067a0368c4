"""
Tests for skew-hermitian forms over quaternion algebras.
"""
import pytest

from wittlab.cohomology import H3Class
from wittlab.errors import FieldMismatch, PreconditionFailed, UnsupportedField, ZeroElement
from wittlab.fields import QuadNumberField, RationalFunctionField, Rationals
from wittlab.hermitian import (SkewHermitianForm, binary_multiple, clifford_invariant,
                               e3_additive, e3_rank2_factor, e3_relative, f3_h, herm_invariants,
                               hyperbolic_h, isometric_h, isotropic_h, morita_transfer,
                               pair_block, rank_two_blocks, role_fixed_blocks, witt_index_h)
from wittlab.quaternions import QuaternionAlgebra


@pytest.fixture
def H():
    return QuaternionAlgebra(Rationals(), -1, -1)


def herm(algebra, *entries):
    return SkewHermitianForm(algebra, tuple(entries))


def test_entries_must_be_pure(H):
    """Diagonal entries are invertible pure quaternions."""
    with pytest.raises(PreconditionFailed):
        herm(H, H.scalar(1))
    with pytest.raises(ZeroElement):
        herm(H, H.pure(0, 0, 0))


def test_parse(H):
    """Forms are read from a quaternion descriptor and coordinate triples."""
    h = SkewHermitianForm.parse(Rationals(), {"quat": {"a": "-1", "b": "-1"},
                                              "diag": [["1", "0", "0"], ["0", "1", "0"]]})
    assert h == herm(H, H.i, H.j)
    assert h.rank == 2
    assert h.absolute_rank == 4


def test_discriminant(H):
    """e1 is the product of the squares of the entries."""
    assert herm(H, H.i, H.j).e1().is_trivial()
    assert not herm(H, H.i, H.i + H.j).e1().is_trivial()


def test_binary_plane_is_hyperbolic(H):
    """<i, j> has trivial discriminant and local index 1 everywhere."""
    h = herm(H, H.i, H.j)
    assert witt_index_h(h) == 1
    assert isotropic_h(h)
    assert hyperbolic_h(h)


def test_nontrivial_discriminant_is_anisotropic(H):
    """A rank-2 form with nonsquare discriminant cannot be isotropic."""
    h = herm(H, H.i, H.i + H.j)
    assert witt_index_h(h) == 0
    assert not isotropic_h(h)


def test_rank_one(H):
    """Rank-one forms are anisotropic."""
    assert not isotropic_h(herm(H, H.i))
    assert not hyperbolic_h(herm(H, H.i))


def test_isometric(H):
    """Conjugate entries give isometric forms."""
    assert isometric_h(herm(H, H.i), herm(H, H.j))
    assert not isometric_h(herm(H, H.i), herm(H, H.i + H.j))


def test_isotropy_needs_rationals():
    """The local-global isotropy test runs over Q."""
    Q = QuaternionAlgebra(RationalFunctionField(), -1, RationalFunctionField().variable)
    with pytest.raises(UnsupportedField):
        witt_index_h(herm(Q, Q.i, Q.j))


def test_morita_transfer(H):
    """<j> transfers to <1,1> over Q(i)."""
    q = morita_transfer(herm(H, H.j), H.i)
    assert q.field == QuadNumberField(-1)
    assert q.dim == 2


def test_pair_block(H):
    """<i, j> = <i><1, 2> since (i+j) conjugates j to 2i."""
    block = pair_block(H.i, H.j)
    assert block.q == H.i
    assert block.lam == -2


def test_role_fixed_blocks(H):
    """Block Clifford classes are adjusted to sum to zero."""
    blocks = role_fixed_blocks(rank_two_blocks(herm(H, H.i, H.j)))
    assert len(blocks) == 1
    assert blocks[0].clifford().is_zero()


def test_clifford_invariant(H):
    """e2 of <i, j> vanishes modulo [Q]."""
    assert clifford_invariant(herm(H, H.i, H.j)).is_zero()


def test_binary_multiple(H):
    """<1,-3>.<i> = <i, -3i> keeps its factorisation."""
    h = binary_multiple(3, herm(H, H.i))
    assert h.diag == (H.i, H.i * -3)
    assert h.factors[0] == 3
    with pytest.raises(ZeroElement):
        binary_multiple(0, herm(H, H.i))


def test_invariant_report_over_rationals(H):
    """<i, j> has trivial e1, e2, e3 and f3."""
    report = herm_invariants(herm(H, H.i, H.j))
    assert report.flags == {"even_relative_rank": True, "e1_trivial": True,
                            "e2_trivial": True, "e3_trivial": True, "f3_trivial": True}


def test_invariant_report_stops_at_discriminant(H):
    """Nothing beyond e1 is computed for a nontrivial discriminant."""
    report = herm_invariants(herm(H, H.i, H.i + H.j))
    assert report.e2 is None
    assert report.as_dict()["flags"] == {"even_relative_rank": True, "e1_trivial": False}


def test_f3_over_function_field():
    """f3 of <1,-t>.<i, j, 2j+k> over (2,5) is (t,2,5)."""
    F = RationalFunctionField()
    t = F.variable
    Q = QuaternionAlgebra(F, 2, 5)
    g = herm(Q, Q.i, Q.j, Q.pure(0, 2, 1))
    h = binary_multiple(t, g)
    blocks = rank_two_blocks(h)
    assert [b.lam for b in blocks] == [t, t, t]
    f3 = f3_h(h)
    assert f3 == H3Class.symbol(F, t, 2, 5)
    assert not f3.is_zero()
    report = herm_invariants(h)
    assert report.flags["e3_trivial"] is None
    assert report.flags["f3_trivial"] is False


def test_e3_additive_and_relative(H):
    """e3 of two hyperbolic planes is zero, and a form has zero invariant relative to itself."""
    h = herm(H, H.i, H.j)
    assert e3_additive(h, h).value.is_zero()
    assert e3_relative(h, h).value.is_zero()
    other = QuaternionAlgebra(Rationals(), -1, 3)
    with pytest.raises(FieldMismatch):
        e3_additive(h, herm(other, other.i))


def test_e3_rank2_factor_lambda_branch(H):
    """<1, -3> times a hyperbolic plane has zero e3 and, in even rank, zero f3."""
    value, f3 = e3_rank2_factor(herm(H, H.i, H.j), lam=3)
    assert value.value.is_zero()
    assert f3.is_zero()


def test_e3_rank2_factor_needs_one_scalar(H):
    """Exactly one of lambda and mu is given; lambda is nonzero."""
    h = herm(H, H.i, H.j)
    with pytest.raises(PreconditionFailed):
        e3_rank2_factor(h)
    with pytest.raises(PreconditionFailed):
        e3_rank2_factor(h, lam=2, mu=3)
    with pytest.raises(ZeroElement):
        e3_rank2_factor(h, lam=0)
