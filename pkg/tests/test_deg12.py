"""
Tests for degree-12 involutions: decompositions, e3 and f3, twists and isotropy.
"""
import itertools
import random

import pytest

from wittlab.cohomology import BrauerClass2, H3Class, cup
from wittlab.errors import (NotInFundamentalIdealPower, PreconditionFailed, SchemaError,
                            UnsupportedField)
from wittlab.fields import RationalFunctionField, Rationals
from wittlab.hermitian import SkewHermitianForm, binary_multiple, isometric_h, witt_index_h
from wittlab.qforms import (QuadraticForm, hyperbolic, isometric, pfister, signatures,
                            witt_index)
from wittlab.quaternions import QuaternionAlgebra
from wittlab.quatgroups import f3_of_group
from wittlab.deg12 import (Block4, Involution12, decompose12, e3_f3_deg12, homology_generator,
                           isotropic_decomposition_group, isotropy_by_e3, quad_split_report,
                           same_decomposition_twists, split_similar, twist, twist_correction)


@pytest.fixture
def Q():
    return Rationals()


@pytest.fixture
def split_hyperbolic(Q):
    return Involution12(form=hyperbolic(Q, 6))


@pytest.fixture
def signed_blocks(Q):
    """<<-1,-1>> - <<-1,-1>> + <<1,1>>, hyperbolic with blocks of nonzero class."""
    return Involution12.from_blocks([
        Block4.split(1, pfister(Q, (-1, -1))),
        Block4.split(-1, pfister(Q, (-1, -1))),
        Block4.split(1, pfister(Q, (1, 1))),
    ])


@pytest.fixture
def hamilton_six(Q):
    """<i, j, i, j, i, j> over (-1,-1): three hyperbolic planes."""
    H = QuaternionAlgebra(Q, -1, -1)
    return Involution12(herm=SkewHermitianForm(H, (H.i, H.j) * 3))


def test_wrong_dimension_rejected(Q):
    """Split carriers are 12-dimensional."""
    with pytest.raises(PreconditionFailed):
        Involution12(form=hyperbolic(Q, 4))


def test_form_outside_i3_rejected(Q):
    """12<1> has a nonzero Clifford invariant."""
    with pytest.raises(NotInFundamentalIdealPower) as exc_info:
        Involution12(form=QuadraticForm(Q, (1,) * 12))
    assert exc_info.value.layer == 3


def test_exactly_one_carrier():
    """Neither or both carriers is an error."""
    with pytest.raises(PreconditionFailed):
        Involution12()


def test_split_hermitian_carrier_rejected(Q):
    """A split algebra is given as a quadratic form."""
    M = QuaternionAlgebra(Q, 1, 1)
    with pytest.raises(PreconditionFailed):
        Involution12(herm=SkewHermitianForm(M, (M.i, M.j) * 3))


def test_from_blocks_needs_three(Q):
    """Exactly three blocks make a degree-12 involution."""
    block = Block4.split(1, pfister(Q, (1, 1)))
    with pytest.raises(PreconditionFailed):
        Involution12.from_blocks([block, block])


def test_decompose_split_hyperbolic(split_hyperbolic):
    """The hyperbolic form has three split blocks and a trivial group."""
    decom = decompose12(split_hyperbolic)
    assert len(decom.blocks) == 3
    assert decom.group.order == 1
    assert decom.roles() is None


def test_isotropy_of_hyperbolic_form(split_hyperbolic):
    """e3 = 0 and f3 = 0 agree with Witt index 6."""
    verdict = isotropy_by_e3(split_hyperbolic)
    assert verdict.status == "Hyperbolic"
    assert verdict.witt_index == 6
    assert verdict.as_dict(Rationals())["status"] == "Hyperbolic"


def test_invariants_of_signed_blocks(signed_blocks):
    """The given blocks are kept and U is generated by (-1,-1)."""
    invariants = e3_f3_deg12(signed_blocks)
    assert invariants.decomposition.blocks == signed_blocks.blocks
    assert invariants.decomposition.group.order == 2
    assert invariants.f3.is_zero()
    assert invariants.e3.value.is_zero()


def test_twist_changes_signature(signed_blocks, Q):
    """Scaling the first block by -1 moves the signature to -8."""
    decom = decompose12(signed_blocks)
    twisted = twist(decom, (-1, 1, 1))
    assert [s for _, s in signatures(twisted.form)] == [-8]
    assert H3Class.from_form(twisted.form) == twist_correction(decom, (-1, 1, 1))
    assert twist_correction(decom, (-1, 1, 1)) == H3Class.symbol(Q, -1, -1, -1)


def test_twist_needs_one_scalar_per_block(signed_blocks):
    """Twists take three scalars."""
    with pytest.raises(PreconditionFailed):
        twist(decompose12(signed_blocks), (-1, 1))


def test_twisted_form_is_isotropic_with_symbol(signed_blocks):
    """e3 of the twist is the symbol (-1,-1,-1); the Witt index is 2."""
    twisted = twist(decompose12(signed_blocks), (-1, 1, 1))
    verdict = isotropy_by_e3(twisted)
    assert verdict.status == "IsotropicWithSymbol"
    assert verdict.symbol == (-1, -1, -1)
    assert verdict.witt_index == 2


def test_same_decomposition_twists(signed_blocks):
    """The pool is {1, -1}, so there are eight twists."""
    options = same_decomposition_twists(decompose12(signed_blocks))
    assert len(options) == 8
    assert options[0].correction.is_zero()


def test_homology_generator_finds_hyperbolic_twist(signed_blocks):
    """Twisting the second block back undoes the signature."""
    twisted = twist(decompose12(signed_blocks), (-1, 1, 1))
    report = homology_generator(twisted)
    assert report.verdict.homology_order == 1
    assert report.twist == (1, -1, 1)


def test_split_similar(split_hyperbolic, signed_blocks):
    """Hyperbolic forms are similar to each other and not to the twist."""
    same, scalar = split_similar(split_hyperbolic.form, signed_blocks.form)
    assert same
    assert scalar is not None
    twisted = twist(decompose12(signed_blocks), (-1, 1, 1))
    assert split_similar(split_hyperbolic.form, twisted.form) == (False, None)


def test_isotropic_decomposition_group(split_hyperbolic):
    """A split carrier with trivial U qualifies."""
    assert isotropic_decomposition_group(split_hyperbolic) is not None


def test_quad_split_report(split_hyperbolic, Q):
    """The trivial group is split by Q(i), over which the form stays hyperbolic."""
    report = quad_split_report(split_hyperbolic)
    assert report.status == "SplitAndHyperbolicOver"
    assert report.as_dict(Q)["d"] == "-1"


def test_hermitian_decomposition(hamilton_six):
    """Blocks satisfy [Q] + [H] = [A]; U is generated by [A]."""
    decom = decompose12(hamilton_six)
    assert len(decom.blocks) == 3
    assert decom.group.order == 2
    assert decom.as_dict()["quat"] == hamilton_six.herm.algebra.descriptor()


def test_hermitian_isotropy(hamilton_six):
    """Three hyperbolic planes are hyperbolic."""
    assert isotropy_by_e3(hamilton_six).status == "Hyperbolic"


def test_decompose_order_must_be_permutation(hamilton_six):
    """Peel orders are permutations of the six entries."""
    with pytest.raises(PreconditionFailed):
        decompose12(hamilton_six, order=[0, 1, 2])


def test_function_field_split_form_needs_blocks():
    """Without blocks, split forms over Q(t) are not decomposed."""
    F = RationalFunctionField()
    with pytest.raises(UnsupportedField):
        decompose12(Involution12(form=hyperbolic(F, 6)))


def test_parse_blocks(Q):
    """Blocks are read from pfister slots and an optional alpha."""
    inv = Involution12.parse(Q, {"blocks": [{"pfister": ["-1", "-1"]},
                                            {"alpha": "-1", "pfister": ["-1", "-1"]},
                                            {"pfister": ["1", "1"]}]})
    assert inv.is_split
    assert len(inv.blocks) == 3


def test_parse_errors(Q):
    """Malformed involutions raise SchemaError."""
    with pytest.raises(SchemaError):
        Involution12.parse(Q, [])
    with pytest.raises(SchemaError):
        Involution12.parse(Q, {"diag": []})
    with pytest.raises(SchemaError):
        Involution12.parse(Q, {"blocks": [{"q": ["1", "0", "0"]}]})
    with pytest.raises(SchemaError):
        Involution12.parse(Q, {"quat": {"a": "-1", "b": "-1"}, "binary": {"lam": "2"}})


def test_reassemble(signed_blocks):
    """Reassembling the blocks gives back an isometric form."""
    rebuilt = decompose12(signed_blocks).reassemble()
    assert isometric(rebuilt.form, signed_blocks.form)


@pytest.fixture
def exponent_four_twist():
    """<1,-t>.<i, j, 3i+j+k> over (-1,3) over Q(t): f3 = t.[A] with [A] = (-1,3)."""
    F = RationalFunctionField()
    H = QuaternionAlgebra(F, -1, 3)
    g = SkewHermitianForm(H, (H.i, H.j, H.pure(3, 1, 1)))
    return Involution12(herm=binary_multiple(F.variable, g))


def test_f3_of_binary_multiple(exponent_four_twist):
    """f3 is t.[A], nonzero because its residue at t is [A]."""
    F = exponent_four_twist.field
    t = F.variable
    f3 = e3_f3_deg12(exponent_four_twist).f3
    assert f3 == H3Class.symbol(F, t, -1, 3)
    (pi,) = F.support([t])
    assert not f3.residue(pi).is_zero()
    assert f3.as_dict()["terms"][0]["sym"][0] == "t"


def test_quad_split_report_impossible(exponent_four_twist):
    """A nonzero f3 rules out every quadratic splitting."""
    report = quad_split_report(exponent_four_twist)
    assert report.status == "ImpossibleWithCertificate"
    assert not report.f3.is_zero()


ALGEBRAS = [(-1, -1), (-1, 3), (2, 5), (-2, -5), (3, -7)]
SCALARS = [-7, -6, -5, -3, -2, -1, 2, 3, 5, 6, 7]


def _trivial_discriminant_triple(H, rng):
    """Pure p1, p2, p3 with p1^2 p2^2 p3^2 a square, so <p1, p2, p3> has trivial e1."""
    F = H.field
    coords = [c for c in itertools.product(range(-2, 3), repeat=3) if any(c)]
    for _ in range(50):
        p1, p2 = H.pure(*rng.choice(coords)), H.pure(*rng.choice(coords))
        target = p1.square() * p2.square()
        for p3 in H.pure_quaternions(3):
            if F.is_square(target * p3.square()):
                return p1, p2, p3
    raise AssertionError(f"no triple with trivial discriminant over {H}")


def _binary_instance(F, rng, lam):
    """<1, -lam>.g over a generated quaternion algebra, with e1(g) trivial."""
    H = QuaternionAlgebra(F, *rng.choice(ALGEBRAS))
    g = SkewHermitianForm(H, _trivial_discriminant_triple(H, rng))
    return Involution12(herm=binary_multiple(lam, g))


def _common_slot_form(Q, rng):
    """<a1><<x,y1>> + <a2><<x,y2>> + <a3><<x,y1 y2>>, whose Clifford classes sum to 0."""
    x, y1, y2 = (rng.choice(SCALARS) for _ in range(3))
    alphas = [rng.choice(SCALARS) for _ in range(3)]
    blocks = [Block4.split(a, pfister(Q, (x, y))) for a, y in zip(alphas, (y1, y2, y1 * y2))]
    return Involution12.from_blocks(blocks).form


@pytest.mark.parametrize("seed", range(4))
def test_f3_of_blocks_matches_group_over_rationals(Q, seed):
    """f3 from the blocks equals f3(U) and lam.[A] on generated index-2 instances."""
    rng = random.Random(seed)
    lam = rng.choice(SCALARS)
    inv = _binary_instance(Q, rng, lam)
    invariants = e3_f3_deg12(inv)
    decom = invariants.decomposition
    assert invariants.f3 == f3_of_group(decom.group, decom.roles())
    assert invariants.f3 == cup(lam, inv.algebra_class)


@pytest.mark.parametrize("seed", range(3))
def test_f3_of_binary_multiple_over_function_field(seed):
    """Over Q(t) with lam = c.t, f3 is lam.[A], which has residue [A] at t."""
    F = RationalFunctionField()
    rng = random.Random(seed)
    lam = F.variable * rng.choice(SCALARS)
    inv = _binary_instance(F, rng, lam)
    invariants = e3_f3_deg12(inv)
    assert invariants.f3 == cup(lam, inv.algebra_class)
    assert not invariants.f3.is_zero()


def _expected_status(index):
    if index == 6:
        return {"Hyperbolic"}
    return {"Isotropic", "IsotropicWithSymbol"} if index else {"Anisotropic"}


@pytest.mark.parametrize("seed", range(4))
def test_isotropy_by_e3_matches_witt_index(Q, seed):
    """The e3/f3 verdict agrees with the Witt index on split and hermitian instances."""
    rng = random.Random(seed)
    split = Involution12(form=_common_slot_form(Q, rng))
    verdict = isotropy_by_e3(split)
    assert verdict.witt_index == witt_index(split.form)
    assert verdict.status in _expected_status(verdict.witt_index)
    herm = _binary_instance(Q, rng, rng.choice(SCALARS))
    verdict = isotropy_by_e3(herm)
    assert verdict.witt_index == 2 * witt_index_h(herm.herm)
    assert verdict.status in _expected_status(verdict.witt_index)


@pytest.mark.parametrize("seed", range(4))
def test_decompose_round_trip(Q, seed):
    """Generated block sums decompose into blocks that reassemble to the input."""
    rng = random.Random(seed)
    split = Involution12(form=_common_slot_form(Q, rng))
    herm = _binary_instance(Q, rng, rng.choice(SCALARS))
    for inv in (split, herm):
        decom = decompose12(inv)
        total = sum((b.h_class for b in decom.blocks), BrauerClass2.zero(Q))
        assert total.is_zero()
        for b in decom.blocks:
            assert b.q_class + b.h_class == inv.algebra_class
        rebuilt = decom.reassemble()
        if inv.is_split:
            assert isometric(rebuilt.form, inv.form)
        else:
            assert isometric_h(rebuilt.herm, inv.herm)
