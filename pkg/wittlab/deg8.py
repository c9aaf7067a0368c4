"""Degree-8 orthogonal involutions of trivial discriminant and their triality components."""
import dataclasses
import itertools
import json
import logging
from typing import Dict, List, Optional, Sequence, Tuple

from .cohomology import BrauerClass2, H3Class, ModClass, mod_equal
from .config import get_budget
from .deg12 import Block4, Involution12, e3_f3_deg12, hyperbolic_over
from .errors import (ConditionEqCViolated, DecompositionFailed, InconsistentData, IndexUndecided,
                     InternalInconsistency, NotInFundamentalIdealPower, NotQuaternionic,
                     ObstructedInput, PreconditionFailed, SchemaError, SearchCancelled,
                     SearchExhausted)
from .fields import Element, Field, Rationals
from .hermitian import (RankTwoBlock, SkewHermitianForm, clifford_invariant, frame_for,
                        isometric_h, pair_block, rank_two_blocks, represent_multiple)
from .qforms import (QuadraticForm, e2 as form_e2, hyperbolic, isometric, pfister,
                     require_ideal_power, witt_decompose, witt_index)
from .quaternions import Quaternion, QuaternionAlgebra
from .quatgroups import QuaternionicSubgroup, SplittingResult, quadratic_splitting, subgroup

logger = logging.getLogger(__name__)


@dataclasses.dataclass(frozen=True, eq=False)
class Involution8:
    """A degree-8 involution of trivial discriminant: an 8-dim form or a rank-4 skew-hermitian form."""

    form: Optional[QuadraticForm] = None
    herm: Optional[SkewHermitianForm] = None

    def __post_init__(self):
        if (self.form is None) == (self.herm is None):
            raise PreconditionFailed("give exactly one of a quadratic and a skew-hermitian form")
        if self.form is not None:
            if self.form.dim != 8:
                raise PreconditionFailed(f"expected an 8-dimensional form, got {self.form.dim}")
            require_ideal_power(self.form, 2)
        else:
            if self.herm.rank != 4:
                raise PreconditionFailed(f"expected relative rank 4, got {self.herm.rank}")
            if self.herm.algebra.brauer_class.is_zero():
                raise PreconditionFailed("the quaternion algebra is split; pass the quadratic form")
            if not self.herm.e1().is_trivial():
                raise NotInFundamentalIdealPower(1, "the discriminant is not trivial")

    @property
    def field(self) -> Field:
        return self.form.field if self.form is not None else self.herm.field

    @property
    def is_split(self) -> bool:
        return self.form is not None

    @property
    def algebra_class(self) -> BrauerClass2:
        if self.is_split:
            return BrauerClass2.zero(self.field)
        return self.herm.algebra.brauer_class

    def clifford_components(self) -> Tuple[Tuple[BrauerClass2, BrauerClass2], bool]:
        """
        The Brauer classes ([C⁺], [C⁻]) of the two Clifford components.

        Returns:
            Tuple: the ordered pair and the swap bit, set when the ordering by canonical
            data exchanged the two classes.
        """
        if self.is_split:
            beta = form_e2(self.form)
            return (beta, beta), False
        beta = clifford_invariant(self.herm).value
        pair = (beta, beta + self.algebra_class)
        ordered = tuple(sorted(pair, key=_canonical_key))
        return ordered, ordered[0] is not pair[0]

    @classmethod
    def parse(cls, field: Field, data: Dict) -> "Involution8":
        if not isinstance(data, dict):
            raise SchemaError("an involution is a JSON object", "")
        if "form" in data:
            return cls(form=QuadraticForm.parse(field, data["form"]))
        return cls(herm=SkewHermitianForm.parse(field, data))

    def as_dict(self) -> Dict:
        if self.is_split:
            return {"form": self.form.format()}
        return self.herm.as_dict()


def _canonical_key(beta: BrauerClass2) -> str:
    return json.dumps(beta.canonical(), sort_keys=True, default=str)


# ---------------------------------------------------------------- decomposition

@dataclasses.dataclass(frozen=True, eq=False)
class Decomposition8:
    """(Q₁,‾)⊗(Q₂,‾) ⊞ (Q₃,‾)⊗(Q₄,‾) with its decomposition group W."""

    involution: Involution8
    blocks: Tuple[Block4, Block4]
    group: QuaternionicSubgroup

    @property
    def field(self) -> Field:
        return self.involution.field

    @property
    def classes(self) -> Tuple[BrauerClass2, BrauerClass2, BrauerClass2, BrauerClass2]:
        first, second = self.blocks
        return first.q_class, first.h_class, second.q_class, second.h_class

    def as_dict(self) -> Dict:
        return {
            "algebra": self.involution.algebra_class.as_dict(),
            "blocks": [b.as_dict() for b in self.blocks],
            "group": self.group.as_dict(),
        }


def _check_index_condition(inv: Involution8):
    (plus, minus), _ = inv.clifford_components()
    small = sum(1 for beta in (inv.algebra_class, plus, minus) if beta.index() <= 2)
    if small < 2:
        raise ObstructedInput("at most one of A, C⁺, C⁻ has index at most 2")


def _subset_blocks(phi: QuadraticForm) -> Optional[Tuple[Block4, Block4]]:
    F = phi.field
    for subset in itertools.combinations(range(8), 4):
        chosen = [phi.diag[n] for n in subset]
        product = F.one
        for x in chosen:
            product = product * x
        if not F.is_square(product):
            continue
        rest = [phi.diag[n] for n in range(8) if n not in subset]
        return (_quaternary_block(F, chosen), _quaternary_block(F, rest))
    return None


def _quaternary_block(F: Field, entries: Sequence[Element]) -> Block4:
    """⟨x₁, x₂, x₃, x₄⟩ of trivial discriminant as ⟨x₁⟩⟨⟨−x₁x₂, −x₁x₃⟩⟩."""
    x1, x2, x3 = entries[0], entries[1], entries[2]
    return Block4.split(x1, pfister(F, (-x1 * x2, -x1 * x3)))


def _slot_candidates(F: Field, seeds: Sequence[Element]) -> List[Element]:
    out = [F.one, F.coerce(-1)]
    for x in seeds:
        for y in (x, -x):
            if not any(F.is_square(y / z) for z in out):
                out.append(y)
    for n in range(2, get_budget().candidate_pool):
        for y in (F.coerce(n), F.coerce(-n)):
            if not any(F.is_square(y / z) for z in out):
                out.append(y)
    return out


def _peel_split(phi: QuadraticForm) -> Tuple[Block4, Block4]:
    """A 4-dim subform ⟨x⟩⟨⟨u, v⟩⟩ of φ and its complement, over a number field."""
    F = phi.field
    pool = _slot_candidates(F, phi.diag)
    bound = get_budget().search_bound
    count = 0
    for x in phi.diag:
        for u, v in itertools.combinations_with_replacement(pool, 2):
            count += 1
            if count > bound:
                raise DecompositionFailed("no 4-dim Pfister multiple found in φ", bound,
                                          "decompose8")
            if F.is_square(u) and F.is_square(v):
                continue
            n = pfister(F, (u, v))
            psi = phi.perp(-n.expansion.scaled(x))
            index = witt_index(psi)
            if index < 4:
                continue
            rest = witt_decompose(psi).kernel.perp(hyperbolic(F, index - 4))
            logger.debug("split off ⟨%s⟩⟨⟨%s, %s⟩⟩", x, u, v)
            return Block4.split(x, n), _quaternary_block(F, rest.diag)
    raise DecompositionFailed("no 4-dim Pfister multiple found in φ", count, "decompose8")


def _certify(inv: Involution8, blocks: Sequence[Block4]):
    F = inv.field
    if inv.is_split:
        if F.is_number_field:
            rebuilt = blocks[0].form().perp(blocks[1].form())
            if not isometric(rebuilt, inv.form):
                raise InternalInconsistency("reassembled blocks are not isometric to the input")
        return
    if isinstance(F, Rationals):
        if not isometric_h(blocks[0].skew().perp(blocks[1].skew()), inv.herm):
            raise InternalInconsistency("reassembled blocks are not isometric to the input")


def _decomposition8(inv: Involution8, blocks: Sequence[Block4]) -> Decomposition8:
    first, second = blocks
    A = inv.algebra_class
    for b in blocks:
        if b.q_class + b.h_class != A:
            raise InternalInconsistency("a block does not satisfy [Q] + [H] = [A]")
    known = [b.h_class.symbols[0] for b in blocks if len(b.h_class.symbols) == 1]
    group = subgroup([first.q_class, first.h_class, second.q_class], known=known,
                     field=inv.field, allow_index_four=True)
    return Decomposition8(inv, (first, second), group)


def decompose8(inv: Involution8) -> Decomposition8:
    """Write ``inv`` as a sum of two degree-4 blocks of trivial discriminant."""
    _check_index_condition(inv)
    if inv.is_split:
        blocks = _subset_blocks(inv.form)
        if blocks is None:
            if not inv.field.is_number_field:
                raise DecompositionFailed("no diagonal subform of trivial discriminant",
                                          70, "decompose8")
            blocks = _peel_split(inv.form)
    else:
        blocks = tuple(Block4.hermitian(b) for b in rank_two_blocks(inv.herm))
    _certify(inv, blocks)
    return _decomposition8(inv, blocks)


# ---------------------------------------------------------------- triality

@dataclasses.dataclass(frozen=True, eq=False)
class TrialityTriple:
    """
    (A, σ) with its Clifford components (C⁺, σ⁺), (C⁻, σ⁻).

    Component carriers are built from the paired blocks when C⁺ and C⁻ have a quaternion
    presentation, or supplied explicitly. Built carriers fix the relative scale of the two
    summands to 1; ``carrier_source`` records which of the two happened.
    """

    decomposition: Decomposition8
    plus: BrauerClass2
    minus: BrauerClass2
    swapped: bool
    group: QuaternionicSubgroup
    plus_pairs: Tuple[Tuple[BrauerClass2, BrauerClass2], ...]
    minus_pairs: Tuple[Tuple[BrauerClass2, BrauerClass2], ...]
    hyperbolic: Optional[bool] = None
    plus_carrier: Optional[Involution8] = None
    minus_carrier: Optional[Involution8] = None
    carrier_source: Optional[str] = None

    @property
    def involution(self) -> Involution8:
        return self.decomposition.involution

    def with_carriers(self, plus: Involution8, minus: Involution8,
                      source: str = "given") -> "TrialityTriple":
        """Attach component carriers, checking their algebras and Clifford classes."""
        A = self.involution.algebra_class
        for carrier, own, expected in ((plus, self.plus, (self.minus, A)),
                                       (minus, self.minus, (A, self.plus))):
            if carrier.algebra_class != own:
                raise InconsistentData("a component carrier lives over the wrong algebra")
            components, _ = carrier.clifford_components()
            if not (_same_pair(components, expected)):
                raise InconsistentData("a component carrier has the wrong Clifford components")
        return dataclasses.replace(self, plus_carrier=plus, minus_carrier=minus,
                                   carrier_source=source)

    def as_dict(self) -> Dict:
        def pairs(items):
            return [[x.as_dict(), y.as_dict()] for x, y in items]

        return {
            "plus": self.plus.as_dict(),
            "minus": self.minus.as_dict(),
            "swapped": self.swapped,
            "V": self.group.as_dict(),
            "W": self.decomposition.group.as_dict(),
            "plus_blocks": pairs(self.plus_pairs),
            "minus_blocks": pairs(self.minus_pairs),
            "hyperbolic": self.hyperbolic,
            "carriers": {
                "plus": self.plus_carrier.as_dict() if self.plus_carrier else None,
                "minus": self.minus_carrier.as_dict() if self.minus_carrier else None,
                "source": self.carrier_source,
            },
        }


def _same_pair(x: Sequence[BrauerClass2], y: Sequence[BrauerClass2]) -> bool:
    return (x[0] == y[0] and x[1] == y[1]) or (x[0] == y[1] and x[1] == y[0])


def _is_hyperbolic8(inv: Involution8) -> Optional[bool]:
    F = inv.field
    if inv.is_split:
        return witt_index(inv.form) == 4 if F.is_number_field else None
    if isinstance(F, Rationals):
        return isometric_h(inv.herm, _hyperbolic_h(inv.herm.algebra, 2))
    return None


def _hyperbolic_h(Q: QuaternionAlgebra, planes: int) -> SkewHermitianForm:
    return SkewHermitianForm(Q, (Q.i, -Q.i) * planes)


def triality_components(dec: Decomposition8) -> TrialityTriple:
    """[C⁺] = [Q₁] + [Q₃] and [C⁻] = [Q₁] + [Q₄], with the paired blocks of each component."""
    q1, q2, q3, q4 = dec.classes
    plus, minus = q1 + q3, q1 + q4
    inv = dec.involution
    (c0, c1), _ = inv.clifford_components()
    if not _same_pair((plus, minus), (c0, c1)):
        raise InternalInconsistency("block classes do not reproduce the Clifford components")
    swapped = _canonical_key(plus) > _canonical_key(minus)
    group = subgroup([inv.algebra_class, plus], field=inv.field, allow_index_four=True)
    triple = TrialityTriple(dec, plus, minus, swapped, group,
                            ((q1, q3), (q2, q4)), ((q1, q4), (q2, q3)),
                            hyperbolic=_is_hyperbolic8(inv))
    try:
        carriers = (pair_carrier(plus, triple.plus_pairs),
                    pair_carrier(minus, triple.minus_pairs))
    except SearchCancelled:
        raise
    except (NotQuaternionic, SearchExhausted, IndexUndecided) as err:
        logger.info("component carriers not built: %s", err.message)
        return triple
    return triple.with_carriers(*carriers, source="blocks")


def _quaternion_algebra(beta: BrauerClass2) -> QuaternionAlgebra:
    if beta.index() > 2:
        raise NotQuaternionic(f"{beta} has index 4")
    symbol = beta.as_symbol()
    if symbol is None:
        raise NotQuaternionic(f"no quaternion presentation of {beta}")
    return QuaternionAlgebra(beta.field, *symbol)


def _norm_form(beta: BrauerClass2) -> QuadraticForm:
    if beta.is_zero():
        return hyperbolic(beta.field, 2)
    return _quaternion_algebra(beta).norm_form()


def pair_carrier(beta: BrauerClass2,
                 pairs: Sequence[Tuple[BrauerClass2, BrauerClass2]]) -> Involution8:
    """
    A member of ((Q_a,‾)⊗(Q_b,‾)) ⊞ ((Q_c,‾)⊗(Q_d,‾)) over the algebra of class β.

    Each pair satisfies [Q_a] + [Q_b] = β. Over a quaternion algebra D of class β the
    summand (Q_a,‾)⊗(Q_b,‾) is the block ⟨u⟩⟨1, −y⟩ with (u², y) = [Q_b]; when β = 0
    it is the norm form of Q_a.
    """
    F = beta.field
    for a, b in pairs:
        if a + b != beta:
            raise InternalInconsistency(f"paired classes do not add up to {beta}")
    if beta.is_zero():
        first, second = (_norm_form(a) for a, _ in pairs)
        return Involution8(form=first.perp(second))
    D = _quaternion_algebra(beta)
    first, second = (companion_block(D, b) for _, b in pairs)
    return Involution8(herm=first.form.perp(second.form))


# ---------------------------------------------------------------- e₃ and f₃

@dataclasses.dataclass(frozen=True, eq=False)
class Deg8Invariants:
    e3: ModClass
    f3: H3Class
    rho: Involution12
    group: QuaternionicSubgroup

    def as_dict(self) -> Dict:
        return {
            "e3": self.e3.as_dict(),
            "f3": self.f3.as_dict(),
            "rho": self.rho.as_dict(),
            "V": self.group.as_dict(),
        }


def _condition_eq_c(inv: Involution8) -> Tuple[BrauerClass2, BrauerClass2]:
    if inv.is_split:
        raise ConditionEqCViolated("A is split")
    (plus, minus), _ = inv.clifford_components()
    for beta, name in ((plus, "C⁺"), (minus, "C⁻")):
        if beta.index() != 2:
            raise ConditionEqCViolated(f"{name} = {beta} does not have index 2")
    V = subgroup([inv.algebra_class, plus], field=inv.field, allow_index_four=True)
    if V.order != 4:
        raise ConditionEqCViolated(f"V has order {V.order}, not 4")
    return plus, minus


def _slot_partner(a: Element, beta: BrauerClass2) -> Optional[Element]:
    """y with (a, y) = β."""
    F = beta.field
    symbol = beta.as_symbol()
    if symbol is not None:
        for x, y in (symbol, symbol[::-1]):
            if F.is_square(a / x):
                return y
    if not F.is_number_field:
        return None
    for n in range(1, get_budget().search_bound):
        for y in (F.coerce(n), F.coerce(-n)):
            if BrauerClass2.symbol(F, a, y) == beta:
                return y
    return None


def companion_block(Q: QuaternionAlgebra, minus: BrauerClass2) -> RankTwoBlock:
    """
    A block ⟨u⟩⟨1, −y⟩ over Q whose adjoint is (Q⁺,‾) ⊗ (Q⁻,‾).

    Its classes are H = (u², y) = [Q⁻] and (u², y·w²) = [Q⁻] + [Q] = [Q⁺].
    """
    F = Q.field
    if minus.is_zero():
        return RankTwoBlock(Q.i, F.one)
    height = get_budget().height
    for u in Q.pure_quaternions(height):
        a = u.square()
        if not a or F.is_square(a):
            continue
        if F.is_number_field and not minus.is_split_by(a):
            continue
        y = _slot_partner(a, minus)
        if y is not None:
            logger.debug("companion block ⟨%s⟩⟨1, −%s⟩", u, F.format(y))
            return RankTwoBlock(u, y)
    raise SearchExhausted("no common slot of C⁺ and C⁻ inside Q", height, "companion_block")


def rho_carrier(inv: Involution8, lam=1) -> Involution12:
    """The degree-12 involution σ ⊞ ⟨λ⟩·((Q⁺,‾) ⊗ (Q⁻,‾)) over Q."""
    plus, minus = _condition_eq_c(inv)
    Q = inv.herm.algebra
    F = inv.field
    lam = F.coerce(lam)
    if not lam:
        raise PreconditionFailed("λ must be nonzero")
    block = companion_block(Q, minus)
    extra = RankTwoBlock(block.q * lam, block.lam).form
    try:
        return Involution12(herm=inv.herm.perp(extra))
    except NotInFundamentalIdealPower as err:
        raise InternalInconsistency(f"ρ fails the degree-12 hypotheses: {err.message}")


def e3_f3_deg8(inv: Involution8, lam=1) -> Deg8Invariants:
    """e₃ modulo F^×·V and f₃ of ``inv``, read off the degree-12 carrier ρ."""
    plus, _ = _condition_eq_c(inv)
    rho = rho_carrier(inv, lam)
    invariants = e3_f3_deg12(rho)
    modulus = (inv.algebra_class, plus)
    V = subgroup(list(modulus), field=inv.field, allow_index_four=True)
    e3 = ModClass(invariants.e3.value, modulus, invariants.e3.opaque)
    return Deg8Invariants(e3, invariants.f3, rho, V)


@dataclasses.dataclass(frozen=True, eq=False)
class TrialityReport:
    values: Tuple[Deg8Invariants, Deg8Invariants, Deg8Invariants]
    e3_status: Tuple[str, str]
    f3_equal: bool
    modulus: str = "V"

    def as_dict(self) -> Dict:
        names = ("sigma", "plus", "minus")
        return {
            "invariants": {n: v.as_dict() for n, v in zip(names, self.values)},
            "e3_plus_vs_sigma": self.e3_status[0],
            "e3_minus_vs_sigma": self.e3_status[1],
            "f3_equal": self.f3_equal,
            "modulus": self.modulus,
        }


def _rebased(value: Deg8Invariants, modulus: Sequence[BrauerClass2]) -> ModClass:
    return ModClass(value.e3.value, tuple(modulus), value.e3.opaque)


def triality_e3_equality(triple: TrialityTriple) -> TrialityReport:
    """
    Compute e₃ and f₃ of the three carriers independently and compare them modulo F^×·V.

    Carriers built from blocks are only known up to rescaling one summand by λ, which moves
    e₃ by (λ)·[Q₂]. When the decomposition group W is larger than V that shift is not in
    F^×·V, so e₃ is compared modulo F^×·W instead and the report says so.
    """
    if triple.plus_carrier is None or triple.minus_carrier is None:
        raise PreconditionFailed("the triple carries no component involutions")
    values = tuple(e3_f3_deg8(x) for x in (triple.involution, triple.plus_carrier,
                                          triple.minus_carrier))
    modulus, label = values[0].e3.modulus, "V"
    W = triple.decomposition.group
    if triple.carrier_source == "blocks" and W.order > triple.group.order:
        modulus, label = W.basis, "W"
    base = _rebased(values[0], modulus)
    statuses = tuple(mod_equal(_rebased(v, modulus), base).status for v in values[1:])
    f3_equal = values[0].f3 == values[1].f3 and values[0].f3 == values[2].f3
    if "NotEqual" in statuses or not f3_equal:
        raise InconsistentData("the three involutions do not have equal invariants; "
                               "they are not a triality triple")
    return TrialityReport(values, statuses, f3_equal, label)


# ---------------------------------------------------------------- quadratic splitting

@dataclasses.dataclass(frozen=True, eq=False)
class QuadSplit8Report:
    splitting: SplittingResult
    hyperbolic: Optional[bool]
    decomposition: Decomposition8

    def as_dict(self) -> Dict:
        F = self.decomposition.field
        return {
            "splitting": self.splitting.as_dict(F),
            "hyperbolic": self.hyperbolic,
            "decomposition": self.decomposition.as_dict(),
        }


def quadsplit8(dec: Decomposition8) -> QuadSplit8Report:
    """A quadratic extension splitting W; over it the involution is split and hyperbolic."""
    split = quadratic_splitting(dec.group)
    check = hyperbolic_over(dec.involution, split.d) if split else None
    if check is False:
        raise InternalInconsistency(f"W splits over F(√{split.d}) but the involution is "
                                    "not hyperbolic there")
    return QuadSplit8Report(split, check, dec)


def _binary_factor(phi: QuadraticForm, d) -> List[Element]:
    """x₁, …, x₄ with φ ≅ ⟨1, −d⟩ ⊗ ⟨x₁, …, x₄⟩."""
    F = phi.field
    binary = QuadraticForm(F, (F.one, -F.coerce(d)))
    rest = witt_decompose(phi).kernel
    planes = (phi.dim - rest.dim) // 2
    if planes % 2:
        raise InternalInconsistency("an odd number of hyperbolic planes cannot be a multiple "
                                    "of a binary form")
    out = []
    while rest.dim:
        for x in _slot_candidates(F, rest.diag):
            psi = rest.perp(-binary.scaled(x))
            index = witt_index(psi)
            if index < 2:
                continue
            rest = witt_decompose(psi).kernel.perp(hyperbolic(F, index - 2))
            out.append(x)
            break
        else:
            raise SearchExhausted(f"no binary multiple of ⟨1, −{d}⟩ in {rest}",
                                  get_budget().candidate_pool, "quadsplit8")
    return out + [F.one, -F.one] * (planes // 2)


def _herm_chain(h: SkewHermitianForm, u: Quaternion) -> List[RankTwoBlock]:
    blocks = []
    rest = h
    while rest.rank:
        first = represent_multiple(rest, u)
        if first is None:
            raise InternalInconsistency(f"{rest} does not represent a multiple of {u}")
        mu1, rest = first
        if rest.rank == 1:
            blocks.append(pair_block(u * mu1, rest.diag[0]))
            break
        second = represent_multiple(rest, u)
        if second is None:
            raise InternalInconsistency(f"{rest} does not represent a multiple of {u}")
        mu2, rest = second
        blocks.append(RankTwoBlock(u * mu1, -mu2 / mu1))
    return blocks


def quadsplit8_converse(inv: Involution8, d) -> Decomposition8:
    """A decomposition whose group W is split by F(√d), given that A splits and the
    involution is hyperbolic over F(√d)."""
    if not isinstance(inv.field, Rationals):
        raise PreconditionFailed("the converse construction runs over ℚ")
    F = inv.field
    d = F.coerce(d)
    if hyperbolic_over(inv, d) is not True:
        raise PreconditionFailed(f"the involution is not split hyperbolic over F(√{d})")
    if inv.is_split:
        xs = _binary_factor(inv.form, d)
        blocks = tuple(Block4.split(x, pfister(F, (d, -x * y))) for x, y in (xs[:2], xs[2:]))
    else:
        u = frame_for(inv.herm.algebra, d).q
        blocks = tuple(Block4.hermitian(b) for b in _herm_chain(inv.herm, u))
    _certify(inv, blocks)
    dec = _decomposition8(inv, blocks)
    for beta in dec.classes:
        if not beta.is_split_by(d):
            raise InternalInconsistency(f"{beta} is not split by F(√{d})")
    return dec
