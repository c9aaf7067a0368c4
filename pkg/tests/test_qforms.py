"""
Tests for quadratic forms over Q and Q(t).
"""
import itertools
import random

import pytest

from wittlab.cohomology import BrauerClass2
from wittlab.errors import (NotInFundamentalIdealPower, PreconditionFailed, UnsupportedField,
                            ZeroElement, ZeroSlot)
from wittlab.fields import Place, QuadExtension, RationalFunctionField, Rationals
from wittlab.qforms import (QuadraticForm, albert_form, assemble_blocks, e1, e2, e2_vanishes,
                            e3_vanishes, hasse_invariant, hyperbolic, ideal_layer, isometric,
                            isotropic, isotropic_vector, pfister, pfister_decompose_12,
                            require_ideal_power, scharlau_transfer, signatures, transfer_gram,
                            witt_decompose, witt_index, witt_is_zero)


@pytest.fixture
def Q():
    return Rationals()


@pytest.fixture
def Qt():
    return RationalFunctionField()


def form(field, *entries):
    return QuadraticForm.parse(field, [str(x) for x in entries])


def test_zero_entry_rejected(Q):
    """Forms are nondegenerate."""
    with pytest.raises(ZeroElement):
        form(Q, 1, 0)


def test_pfister_slots_nonzero(Q):
    """Pfister slots must be units."""
    with pytest.raises(ZeroSlot):
        pfister(Q, (1, 0))


def test_pfister_expansion(Q):
    """<<2,3>> expands to <1,-2,-3,6>."""
    assert sorted(pfister(Q, (2, 3)).expansion.diag) == [-3, -2, 1, 6]


def test_pfister_ramified_at_two_and_three_is_anisotropic(Q):
    """<<2,3>> is anisotropic since (2,3) ramifies at 2 and 3."""
    assert not isotropic(form(Q, 1, -2, -3, 6))


def test_isotropic_vector(Q):
    """<<2,7>> has the isotropic vector (3,1,1,0)."""
    q = form(Q, 1, -2, -7, 14)
    assert isotropic(q)
    vec = isotropic_vector(q)
    assert any(vec)
    assert q.value(vec) == 0


def _bounded_zero(diag, height):
    """A nonzero integer vector with entries in [-height, height] on which the form vanishes."""
    for vec in itertools.product(range(-height, height + 1), repeat=len(diag)):
        if any(vec) and sum(a * x * x for a, x in zip(diag, vec)) == 0:
            return vec
    return None


@pytest.mark.parametrize("seed", range(5))
def test_isotropy_against_bounded_search(Q, seed):
    """Generated ternary and quaternary forms: a small zero means isotropic, and an
    isotropic ternary form yields a certified vector."""
    rng = random.Random(seed)
    pool = [n for n in range(-10, 11) if n]
    for dim, height in ((3, 6), (3, 6), (4, 3), (4, 3)):
        diag = [rng.choice(pool) for _ in range(dim)]
        q = QuadraticForm(Q, tuple(diag))
        found = _bounded_zero(diag, height)
        if found is not None:
            assert isotropic(q), diag
        if dim == 3 and isotropic(q):
            vec = isotropic_vector(q)
            assert any(vec)
            assert q.value(vec) == 0


def test_isotropic_vector_of_anisotropic_form(Q):
    """No vector is searched for an anisotropic form."""
    with pytest.raises(PreconditionFailed):
        isotropic_vector(form(Q, 1, 1, 1, -7))


def test_sum_of_three_squares_misses_seven(Q):
    """<1,1,1,-7> is anisotropic at 2."""
    q = form(Q, 1, 1, 1, -7)
    assert witt_index(q) == 0
    assert hasse_invariant(q, Place("finite", 2)) == 1


def test_witt_decompose(Q):
    """<1,-1,2> is a hyperbolic plane plus <2>."""
    w = witt_decompose(form(Q, 1, -1, 2))
    assert w.index == 1
    assert isometric(w.kernel, form(Q, 2))
    assert not w.is_zero()


def test_witt_index_of_six_dimensional_form(Q):
    """<1,1,1,1> is isometric to <3,3,3,3>, so two planes split off."""
    q = form(Q, 1, 1, 1, 1, -3, -3)
    assert witt_index(q) == 2
    assert witt_decompose(q).kernel.dim == 2


def test_isometric(Q):
    """Isometry is decided by determinant, signatures and Hasse invariants."""
    assert isometric(form(Q, 1, 1), form(Q, 2, 2))
    assert not isometric(form(Q, 1, 1), form(Q, 1, 2))
    assert not isometric(form(Q, 1, 1), form(Q, -1, -1))


def test_signatures(Q):
    """Q has one real place."""
    assert [s for _, s in signatures(form(Q, 1, 1, -5))] == [1]


def test_ideal_layer(Q):
    """Layers of some standard forms."""
    assert ideal_layer(form(Q, 1)) == 0
    assert ideal_layer(form(Q, 1, 1)) == 1
    assert ideal_layer(pfister(Q, (2, 3)).expansion) == 2
    assert ideal_layer(pfister(Q, (-1, -1, -1)).expansion) == 3
    assert ideal_layer(hyperbolic(Q, 3)) == 4


def test_require_ideal_power_reports_layer(Q):
    """The error names the first layer that fails."""
    with pytest.raises(NotInFundamentalIdealPower) as exc_info:
        require_ideal_power(form(Q, 1, 1), 3)
    assert exc_info.value.layer == 2


def test_discriminant_and_clifford_invariant(Q):
    """e1 and e2 of <<2,3>>."""
    q = pfister(Q, (2, 3)).expansion
    assert e1(q).is_trivial()
    assert e2(q) == BrauerClass2.symbol(Q, 2, 3)


def test_albert_form_dimension(Q):
    """The Albert form of (a,b)+(c,d) has dimension six and trivial discriminant."""
    q = albert_form(Q, -1, -1, 2, 3)
    assert q.dim == 6
    assert e1(q).is_trivial()


def test_decompose_hyperbolic_12(Q):
    """A hyperbolic form splits into three copies of <<1,1>>."""
    blocks = pfister_decompose_12(hyperbolic(Q, 6))
    assert len(blocks) == 3
    assert all(n.slots == (1, 1) for _, n in blocks)
    assert witt_is_zero(assemble_blocks(blocks))


def test_decompose_12_rejects_wrong_dimension(Q):
    """Only 12-dimensional forms are decomposed."""
    with pytest.raises(PreconditionFailed):
        pfister_decompose_12(hyperbolic(Q, 4))


def test_witt_zero_over_function_field(Qt):
    """Witt triviality over Q(t) goes through residues and a specialization."""
    assert witt_is_zero(form(Qt, "t", "-t"))
    assert not witt_is_zero(form(Qt, 1, "t"))
    assert not witt_is_zero(pfister(Qt, (-1, -1)).expansion)


def test_isotropy_over_function_field_unsupported(Qt):
    """Local Witt indices need a number field."""
    with pytest.raises(UnsupportedField):
        witt_index(form(Qt, 1, "t"))


def test_layer_predicates(Q):
    """e2 decides I3 inside I2 and e3 decides I4 inside I3."""
    assert not e2_vanishes(pfister(Q, (2, 3)).expansion)
    assert e2_vanishes(hyperbolic(Q, 2))
    assert not e3_vanishes(pfister(Q, (-1, -1, -1)).expansion)
    assert e3_vanishes(hyperbolic(Q, 4))


def test_transfer_gram(Q):
    """The trace form s(xy) of Q(sqrt 2) at x = 1 is a hyperbolic plane."""
    K = QuadExtension(Q, 2)
    assert transfer_gram(K, 1) == [[0, 1], [1, 0]]


def test_scharlau_transfer(Q):
    """s(1) = 0 kills <1>; <sqrt 2> goes to <1, 2> with determinant -N(sqrt 2)."""
    K = QuadExtension(Q, 2)
    assert witt_is_zero(scharlau_transfer(K, QuadraticForm(K.field, (1,))))
    root = K.field.generator
    assert scharlau_transfer(K, QuadraticForm(K.field, (root,))) == QuadraticForm(Q, (1, 2))
    with pytest.raises(PreconditionFailed):
        scharlau_transfer(K, QuadraticForm(Q, (1,)))


def test_scharlau_transfer_follows_gram(Q):
    """<3+s> transfers to the diagonalised Gram matrix, of determinant -N(3+s) = -7."""
    K = QuadExtension(Q, 2)
    x = K.field.parse("3+s")
    assert transfer_gram(K, x) == [[1, 3], [3, 2]]
    plane = scharlau_transfer(K, QuadraticForm(K.field, (x,)))
    assert plane == QuadraticForm(Q, (1, -7))
    assert plane.determinant() == -7
