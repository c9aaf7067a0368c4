"""Degree-12 orthogonal involutions with trivial discriminant and Clifford invariant.

An involution is carried either by a 12-dimensional quadratic form (A split) or by a
rank-6 skew-hermitian form over a quaternion division algebra Q (index 2). Both are
decomposed into three degree-4 blocks (Q_i, H_i); the decomposition group
U = ⟨[Q₁], [Q₂], [Q₃]⟩ links e₃ and f₃ to the homology of the Peyre complex.
"""
import dataclasses
import itertools
import logging
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

from .cohomology import BrauerClass2, H3Class, MembershipVerdict, ModClass, cup, mod_equal
from .config import get_budget
from .errors import (InternalInconsistency, NotInFundamentalIdealPower, NotQuaternionic,
                     PreconditionFailed, SchemaError, SearchCancelled, SearchExhausted,
                     UnsupportedField)
from .fields import (Element, Field, QuadNumberField, Rationals, prime_support,
                     squarefree_part)
from .hermitian import (RankTwoBlock, SkewHermitianForm, binary_multiple,
                        clifford_invariant, e3_h, f3_sum, frame_for,
                        isometric_h, morita_transfer, rank_two_blocks, role_fixed_blocks,
                        witt_index_h)
from .qforms import (PfisterForm, QuadraticForm, assemble_blocks, extend_form, isometric,
                     pfister, pfister_decompose_12, require_ideal_power, witt_index,
                     witt_is_zero)
from .quaternions import QuaternionAlgebra, anticommuting, parse_pure
from .quatgroups import (PeyreVerdict, QuaternionicSubgroup, RoleAssignment, SplittingResult,
                         f3_of_group, peyre_verdict, quadratic_splitting, subgroup)

logger = logging.getLogger(__name__)


# ---------------------------------------------------------------- blocks

@dataclasses.dataclass(frozen=True, eq=False)
class Block4:
    """
    One degree-4 summand (Q_i,‾) ⊗ (H_i,‾).

    Split blocks are ⟨α⟩⟨⟨x, y⟩⟩ with Q_i = H_i = (x, y); hermitian blocks are
    ⟨q⟩⟨1, −λ⟩ with H_i = (q², λ) and Q_i = (q², λ·w²) for w anticommuting with q.
    """

    q_class: BrauerClass2
    h_class: BrauerClass2
    alpha: Optional[Element] = None
    pfister: Optional[PfisterForm] = None
    herm: Optional[RankTwoBlock] = None

    @classmethod
    def split(cls, alpha, n: PfisterForm) -> "Block4":
        if n.fold != 2:
            raise PreconditionFailed(f"split blocks need a 2-fold Pfister form, got {n}")
        beta = BrauerClass2(n.field, (tuple(n.slots),))
        return cls(beta, beta, alpha=n.field.coerce(alpha), pfister=n)

    @classmethod
    def hermitian(cls, block: RankTwoBlock) -> "Block4":
        F = block.q.algebra.field
        a = block.slot
        b = anticommuting(block.q).square()
        return cls(BrauerClass2.symbol(F, a, block.lam * b),
                   BrauerClass2.symbol(F, a, block.lam), herm=block)

    @property
    def field(self) -> Field:
        return self.q_class.field

    @property
    def is_split(self) -> bool:
        return self.herm is None

    def scaled(self, alpha) -> "Block4":
        alpha = self.field.coerce(alpha)
        if not alpha:
            raise PreconditionFailed("twisting scalars must be nonzero")
        if self.herm is None:
            return Block4.split(self.alpha * alpha, self.pfister)
        return Block4.hermitian(RankTwoBlock(self.herm.q * alpha, self.herm.lam))

    def form(self) -> QuadraticForm:
        return self.pfister.expansion.scaled(self.alpha)

    def skew(self) -> SkewHermitianForm:
        return self.herm.form

    def as_dict(self) -> Dict:
        F = self.field
        out = {"Q": self.q_class.as_dict(), "H": self.h_class.as_dict()}
        if self.herm is None:
            out["alpha"] = F.format(self.alpha)
            out["pfister"] = [F.format(x) for x in self.pfister.slots]
        else:
            out["q"] = self.herm.q.format()
            out["lam"] = F.format(self.herm.lam)
        return out


# ---------------------------------------------------------------- involutions

@dataclasses.dataclass(frozen=True, eq=False)
class Involution12:
    """
    A degree-12 involution; exactly one of ``form`` and ``herm`` is set.

    ``blocks`` remembers a block presentation when the involution was assembled from
    one; :func:`decompose12` then returns it instead of searching.
    """

    form: Optional[QuadraticForm] = None
    herm: Optional[SkewHermitianForm] = None
    blocks: Optional[Tuple[Block4, ...]] = None

    def __post_init__(self):
        if (self.form is None) == (self.herm is None):
            raise PreconditionFailed("give exactly one of a quadratic and a skew-hermitian form")
        if self.form is not None:
            if self.form.dim != 12:
                raise PreconditionFailed(f"expected a 12-dimensional form, got {self.form.dim}")
            require_ideal_power(self.form, 3)
        else:
            h = self.herm
            if h.rank != 6:
                raise PreconditionFailed(f"expected relative rank 6, got {h.rank}")
            if h.algebra.brauer_class.is_zero():
                raise PreconditionFailed(f"{h.algebra} is split; pass the quadratic form instead")
            if not h.e1().is_trivial():
                raise NotInFundamentalIdealPower(1, "the discriminant is not trivial")
            if not clifford_invariant(h).is_zero():
                raise NotInFundamentalIdealPower(2, "the Clifford invariant is not trivial")

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

    @classmethod
    def from_blocks(cls, blocks: Sequence[Block4]) -> "Involution12":
        """The sum ⊞ of three degree-4 blocks."""
        blocks = tuple(blocks)
        if len(blocks) != 3:
            raise PreconditionFailed(f"expected three blocks, got {len(blocks)}")
        if all(b.is_split for b in blocks):
            form = assemble_blocks((b.alpha, b.pfister) for b in blocks)
            return cls(form=form, blocks=blocks)
        if any(b.is_split for b in blocks):
            raise PreconditionFailed("cannot mix split and hermitian blocks")
        h = blocks[0].skew()
        for b in blocks[1:]:
            h = h.perp(b.skew())
        return cls(herm=h, blocks=blocks)

    @classmethod
    def parse(cls, field: Field, data: Dict) -> "Involution12":
        if not isinstance(data, dict):
            raise SchemaError("an involution is a JSON object", "")
        if "form" in data:
            return cls(form=QuadraticForm.parse(field, data["form"]))
        if "blocks" in data:
            return cls.from_blocks(_parse_blocks(field, data))
        if "quat" not in data:
            raise SchemaError("expected one of form, blocks or quat", "")
        if "binary" in data:
            algebra = QuaternionAlgebra.parse(field, data["quat"])
            binary = data["binary"]
            if not isinstance(binary, dict) or "lam" not in binary or "diag" not in binary:
                raise SchemaError("binary needs lam and diag", "/binary")
            g = SkewHermitianForm(algebra, tuple(parse_pure(algebra, c, f"/binary/diag/{n}")
                                                 for n, c in enumerate(binary["diag"])))
            return cls(herm=binary_multiple(field.parse(binary["lam"]), g))
        return cls(herm=SkewHermitianForm.parse(field, data))

    def as_dict(self) -> Dict:
        if self.is_split:
            return {"form": self.form.format()}
        return self.herm.as_dict()


def _parse_blocks(field: Field, data: Dict) -> List[Block4]:
    entries = data["blocks"]
    if not isinstance(entries, list):
        raise SchemaError("blocks must be a list", "/blocks")
    algebra = QuaternionAlgebra.parse(field, data["quat"]) if "quat" in data else None
    out = []
    for n, entry in enumerate(entries):
        pointer = f"/blocks/{n}"
        if not isinstance(entry, dict):
            raise SchemaError("a block is a JSON object", pointer)
        if "pfister" in entry:
            n_form = pfister(field, [field.parse(x) for x in entry["pfister"]])
            out.append(Block4.split(field.parse(entry.get("alpha", "1")), n_form))
        elif "q" in entry and algebra is not None:
            q = parse_pure(algebra, entry["q"], f"{pointer}/q")
            out.append(Block4.hermitian(RankTwoBlock(q, field.parse(entry.get("lam", "1")))))
        else:
            raise SchemaError("a block needs pfister slots, or q with a top-level quat", pointer)
    return out


# ---------------------------------------------------------------- decomposition

@dataclasses.dataclass(frozen=True, eq=False)
class Decomposition12:
    involution: Involution12
    blocks: Tuple[Block4, ...]
    group: QuaternionicSubgroup

    @property
    def field(self) -> Field:
        return self.involution.field

    @property
    def algebra_class(self) -> BrauerClass2:
        return self.involution.algebra_class

    def roles(self) -> Optional[RoleAssignment]:
        """The masks of [A] and the Q_i inside U, when U has order 8."""
        U = self.group
        if U.order != 8:
            return None
        masks = [U.mask_of(b.q_class) for b in self.blocks]
        return RoleAssignment(U.mask_of(self.algebra_class), tuple(masks))

    def reassemble(self) -> Involution12:
        return Involution12.from_blocks(self.blocks)

    def as_dict(self) -> Dict:
        """Carries "blocks" (and "quat" for hermitian blocks) so the result re-parses as an input."""
        out = {
            "algebra": self.algebra_class.as_dict(),
            "blocks": [b.as_dict() for b in self.blocks],
            "group": self.group.as_dict(),
        }
        if not self.involution.is_split:
            out["quat"] = self.involution.herm.algebra.descriptor()
        return out


def _check_block_relations(blocks: Sequence[Block4], algebra: BrauerClass2):
    total = BrauerClass2.zero(algebra.field)
    for b in blocks:
        if b.q_class + b.h_class != algebra:
            raise InternalInconsistency(f"[Q] + [H] differs from [A] for block {b.as_dict()}")
        total = total + b.h_class
    if not total.is_zero():
        raise InternalInconsistency("the classes [H_i] do not sum to zero")


def _certify_reassembly(inv: Involution12, blocks: Sequence[Block4]):
    F = inv.field
    if inv.is_split:
        if not F.is_number_field:
            logger.debug("reassembly over %s certified by construction", F)
            return
        if not isometric(assemble_blocks((b.alpha, b.pfister) for b in blocks), inv.form):
            raise InternalInconsistency("reassembled blocks are not isometric to the input")
        return
    if not isinstance(F, Rationals):
        logger.debug("reassembly over %s certified by construction", F)
        return
    h = blocks[0].skew()
    for b in blocks[1:]:
        h = h.perp(b.skew())
    if not isometric_h(h, inv.herm):
        raise InternalInconsistency("reassembled blocks are not isometric to the input")


def _decomposition(inv: Involution12, blocks: Sequence[Block4]) -> Decomposition12:
    blocks = tuple(blocks)
    A = inv.algebra_class
    _check_block_relations(blocks, A)
    known = [b.h_class.symbols[0] for b in blocks if len(b.h_class.symbols) == 1]
    if not inv.is_split:
        known.append(inv.herm.algebra.brauer_class.symbols[0])
    group = subgroup([b.q_class for b in blocks], known=known, field=inv.field)
    logger.debug("decomposition group of order %d", group.order)
    return Decomposition12(inv, blocks, group)


def _peel(h: SkewHermitianForm) -> List[Block4]:
    return [Block4.hermitian(b) for b in role_fixed_blocks(rank_two_blocks(h))]


def decompose12(inv: Involution12, order: Optional[Sequence[int]] = None) -> Decomposition12:
    """
    Split ``inv`` into three degree-4 blocks.

    Args:
        inv (Involution12): the involution.
        order (Optional[Sequence[int]]): a permutation of the diagonal entries of a
            skew-hermitian carrier, fixing the order in which rank-2 blocks are peeled.

    Returns:
        Decomposition12: blocks with [Q_i] + [H_i] = [A], Σ[H_i] = 0, and the group U.
    """
    if inv.blocks is not None and order is None:
        return _decomposition(inv, inv.blocks)
    if inv.is_split:
        if not inv.field.is_number_field:
            raise UnsupportedField("split decompositions over ℚ(t) need a block presentation")
        blocks = [Block4.split(alpha, n) for alpha, n in pfister_decompose_12(inv.form)]
    else:
        h = inv.herm
        if order is not None:
            if sorted(order) != list(range(h.rank)):
                raise PreconditionFailed(f"{list(order)} is not a permutation of the entries")
            h = SkewHermitianForm(h.algebra, tuple(h.diag[n] for n in order))
        blocks = _peel(h)
    _certify_reassembly(inv, blocks)
    return _decomposition(inv, blocks)


def decompositions(inv: Involution12) -> Iterator[Decomposition12]:
    """Decompositions reached by peeling the entries in different orders."""
    if inv.is_split or inv.blocks is not None:
        yield decompose12(inv)
        if inv.is_split:
            return
    limit = get_budget().candidate_pool
    seen = 0
    for order in itertools.permutations(range(inv.herm.rank)):
        if seen >= limit:
            break
        seen += 1
        try:
            yield decompose12(inv, order)
        except SearchCancelled:
            raise
        except SearchExhausted as err:
            logger.debug("peel order %s failed: %s", order, err)


# ---------------------------------------------------------------- e₃ and f₃

@dataclasses.dataclass(frozen=True, eq=False)
class Deg12Invariants:
    e3: ModClass
    f3: H3Class
    decomposition: Decomposition12

    def as_dict(self) -> Dict:
        return {
            "e3": self.e3.as_dict(),
            "f3": self.f3.as_dict(),
            "decomposition": self.decomposition.as_dict(),
        }


def _f3_of_blocks(decom: Decomposition12) -> H3Class:
    F = decom.field
    if decom.involution.is_split:
        return H3Class.zero(F)
    Q = decom.involution.herm.algebra
    return f3_sum([(b.herm.lam, SkewHermitianForm(Q, (b.herm.q,))) for b in decom.blocks])


def _cross_check_f3(decom: Decomposition12, f3: H3Class):
    U = decom.group
    try:
        other = f3_of_group(U, decom.roles())
    except SearchCancelled:
        raise
    except (SearchExhausted, NotQuaternionic) as err:
        logger.debug("skipping the f₃(U) cross-check: %s", err)
        return
    if other != f3:
        raise InternalInconsistency("f₃ of the blocks differs from f₃ of the decomposition group")


def _e3(inv: Involution12) -> ModClass:
    modulus = (inv.algebra_class,)
    if inv.is_split:
        return ModClass(H3Class.from_form(inv.form), modulus)
    return e3_h(inv.herm)


def e3_f3_deg12(inv: Involution12, decomposition: Optional[Decomposition12] = None
                ) -> Deg12Invariants:
    decom = decomposition or decompose12(inv)
    f3 = _f3_of_blocks(decom)
    _cross_check_f3(decom, f3)
    return Deg12Invariants(_e3(inv), f3, decom)


# ---------------------------------------------------------------- twisting

def twist(decom: Decomposition12, alphas: Sequence) -> Involution12:
    """Scale block i by α_i; U and f₃ are unchanged."""
    if len(alphas) != len(decom.blocks):
        raise PreconditionFailed(f"expected {len(decom.blocks)} scalars, got {len(alphas)}")
    return Involution12.from_blocks([b.scaled(a) for b, a in zip(decom.blocks, alphas)])


def twist_correction(decom: Decomposition12, alphas: Sequence) -> H3Class:
    """Σ (α_i)·[Q_i], the change of e₃ under :func:`twist`."""
    F = decom.field
    out = H3Class.zero(F)
    for b, alpha in zip(decom.blocks, alphas):
        alpha = F.coerce(alpha)
        if not F.is_square(alpha):
            out = out + cup(alpha, b.q_class)
    return out


@dataclasses.dataclass(frozen=True, eq=False)
class TwistOption:
    alphas: Tuple[Element, ...]
    correction: H3Class

    def as_dict(self, field: Field) -> Dict:
        return {"alphas": [field.format(a) for a in self.alphas],
                "correction": self.correction.as_dict()}


def _twist_pool(decom: Decomposition12) -> List[Element]:
    F = decom.field
    pool = [F.one, F.coerce(-1)]
    for b in decom.blocks:
        for a, c in b.q_class.symbols:
            for x in (a, c):
                if not any(F.is_square(x / y) for y in pool):
                    pool.append(x)
    return pool


def same_decomposition_twists(decom: Decomposition12, pool: Optional[Sequence] = None
                              ) -> List[TwistOption]:
    """Every twist with scalars from ``pool`` and its e₃ correction."""
    F = decom.field
    pool = [F.coerce(x) for x in pool] if pool is not None else _twist_pool(decom)
    limit = get_budget().search_bound
    out = []
    for alphas in itertools.product(pool, repeat=len(decom.blocks)):
        if len(out) >= limit:
            break
        out.append(TwistOption(tuple(alphas), twist_correction(decom, alphas)))
    return out


# ---------------------------------------------------------------- isotropy

@dataclasses.dataclass(frozen=True, eq=False)
class IsotropyVerdict:
    status: str
    symbol: Optional[Tuple[Element, Element, Element]] = None
    witt_index: Optional[int] = None
    e3: Optional[ModClass] = None
    f3: Optional[H3Class] = None
    bound: Optional[int] = None
    reason: str = ""

    def as_dict(self, field: Field) -> Dict:
        return {
            "status": self.status,
            "symbol": [field.format(x) for x in self.symbol] if self.symbol else None,
            "witt_index": self.witt_index,
            "e3": self.e3.as_dict() if self.e3 else None,
            "f3": self.f3.as_dict() if self.f3 else None,
            "bound": self.bound,
            "reason": self.reason,
        }


def _direct_index(inv: Involution12) -> Optional[int]:
    """The Witt index of the carrier, counted in the degree of A (0 to 6)."""
    F = inv.field
    if inv.is_split:
        if F.is_number_field:
            return witt_index(inv.form)
        return 6 if witt_is_zero(inv.form) else None
    if isinstance(F, Rationals):
        return 2 * witt_index_h(inv.herm)
    return None


def _direct_status(index: Optional[int]) -> Optional[str]:
    if index is None:
        return None
    if index == 6:
        return "Hyperbolic"
    return "Isotropic" if index else "Anisotropic"


def _slot_pool(F: Field, seeds: Sequence[Element]) -> List[Element]:
    size = get_budget().candidate_pool
    pool = [F.coerce(-1)]
    if F.is_number_field:
        n = 2
        while len(pool) < size and n < 10 * size:
            if squarefree_part(n) == n:
                pool.extend([F.coerce(-n), F.coerce(n)])
            n += 1
        if isinstance(F, QuadNumberField):
            pool.extend([F.generator, -F.generator])
        return pool
    atoms = [F.coerce(-1), F.variable]
    primes = set()
    for x in seeds:
        primes.update(prime_support(F.factor(x)[0]))
    atoms.extend(F.coerce(p) for p in sorted(primes))
    for n in range(1, get_budget().max_atoms + 1):
        for combo in itertools.combinations(atoms, n):
            value = F.one
            for a in combo:
                value = value * a
            if not any(F.is_square(value / y) for y in pool):
                pool.append(value)
    return pool[:size]


def _symbol_search(inv: Involution12, e3: ModClass) -> Tuple[Optional[Tuple], int]:
    """A 3-fold symbol (x, y, z) with e₃ ≡ (x, y, z) and F(√x) splitting A."""
    F = inv.field
    A = inv.algebra_class
    seeds = [x for b in A.symbols for x in b]
    pool = _slot_pool(F, seeds)
    bound = get_budget().search_bound
    count = 0
    for x in pool:
        if not A.is_zero():
            if F.is_number_field and not A.is_split_by(x):
                continue
            if not F.is_number_field and not _splits_over_function_field(A, x):
                continue
        for y, z in itertools.combinations_with_replacement(pool, 2):
            count += 1
            if count > bound:
                return None, bound
            candidate = ModClass(H3Class.symbol(F, x, y, z), e3.modulus)
            if mod_equal(e3, candidate).status == "Equal":
                return (x, y, z), count
    return None, count


def _splits_over_function_field(A: BrauerClass2, x: Element) -> bool:
    a, b = A.symbols[0]
    F = A.field
    for e in (a, b, -a * b, -F.one):
        if BrauerClass2.symbol(F, x, e) == A:
            return True
    return False


def _e3_status(inv: Involution12, e3: ModClass, f3: H3Class) -> IsotropyVerdict:
    if not f3.is_zero():
        return IsotropyVerdict("Anisotropic", e3=e3, f3=f3, reason="f₃ is not zero")
    zero = ModClass(H3Class.zero(inv.field), e3.modulus)
    verdict: MembershipVerdict = mod_equal(e3, zero)
    if verdict.status == "Equal":
        return IsotropyVerdict("Hyperbolic", e3=e3, f3=f3, reason="e₃ is trivial")
    if verdict.status == "Unknown":
        return IsotropyVerdict("Unknown", e3=e3, f3=f3, bound=verdict.bound,
                               reason=verdict.reason)
    symbol, count = _symbol_search(inv, e3)
    if symbol is not None:
        return IsotropyVerdict("IsotropicWithSymbol", symbol=symbol, e3=e3, f3=f3,
                               reason="e₃ is a symbol with a slot splitting A")
    return IsotropyVerdict("Unknown", e3=e3, f3=f3, bound=count,
                           reason="no symbol found within the bound")


def _agree(direct: str, by_e3: str) -> bool:
    if by_e3 == "Unknown":
        return True
    if by_e3 == "IsotropicWithSymbol":
        return direct == "Isotropic"
    return direct == by_e3


def isotropy_by_e3(inv: Involution12) -> IsotropyVerdict:
    """
    Hyperbolicity and isotropy of ``inv``, decided through e₃ and f₃ and, where the
    carrier allows it, directly through its Witt index; the two must agree.
    """
    invariants = e3_f3_deg12(inv)
    verdict = _e3_status(inv, invariants.e3, invariants.f3)
    index = _direct_index(inv)
    direct = _direct_status(index)
    if direct is None:
        return verdict
    if not _agree(direct, verdict.status):
        raise InternalInconsistency(f"Witt index says {direct}, e₃ says {verdict.status}")
    if verdict.status == "Unknown":
        return dataclasses.replace(verdict, status=direct, witt_index=index,
                                   reason="decided by the Witt index")
    return dataclasses.replace(verdict, witt_index=index)


def isotropic_decomposition_group(inv: Involution12) -> Optional[Decomposition12]:
    """A decomposition whose group is generated by [A] and at most one further class."""
    A = inv.algebra_class
    for decom in decompositions(inv):
        U = decom.group
        if A.is_zero() and U.order <= 2:
            return decom
        if not A.is_zero() and U.order <= 4 and U.contains(A):
            return decom
    return None


def split_similar(phi1: QuadraticForm, phi2: QuadraticForm) -> Tuple[bool, Optional[Element]]:
    """
    Whether two split degree-12 involutions are isomorphic, i.e. φ₁ ≅ ⟨c⟩φ₂.

    Decided by comparing e₃ and certified by the scalar c; both paths must agree.
    """
    first, second = Involution12(form=phi1), Involution12(form=phi2)
    F = phi1.field
    if not F.is_number_field:
        raise UnsupportedField("similarity of split involutions is decided over number fields")
    same_e3 = H3Class.from_form(phi1) == H3Class.from_form(phi2)
    scalar = None
    for c in _slot_pool(F, ())[:8] + [F.one]:
        if isometric(first.form, second.form.scaled(c)):
            scalar = c
            break
    if same_e3 != (scalar is not None):
        raise InternalInconsistency("e₃ comparison and the similarity search disagree")
    return same_e3, scalar


# ---------------------------------------------------------------- ℋ_U and splitting

@dataclasses.dataclass(frozen=True, eq=False)
class HomologyReport:
    verdict: PeyreVerdict
    decomposition: Decomposition12
    twist: Optional[Tuple[Element, ...]] = None

    def as_dict(self) -> Dict:
        F = self.decomposition.field
        return {
            "verdict": self.verdict.as_dict(F),
            "decomposition": self.decomposition.as_dict(),
            "hyperbolic_twist": [F.format(a) for a in self.twist] if self.twist else None,
        }


def _hyperbolic_twist(decom: Decomposition12, e3: ModClass) -> Optional[Tuple[Element, ...]]:
    """Scalars α_i with e₃ + Σ(α_i)·[Q_i] = 0 modulo F^×·[A]."""
    F = decom.field
    zero = ModClass(H3Class.zero(F), e3.modulus)
    for option in same_decomposition_twists(decom):
        shifted = ModClass(e3.value + option.correction, e3.modulus, e3.opaque)
        if mod_equal(shifted, zero).status == "Equal":
            return option.alphas
    return None


def homology_generator(inv: Involution12) -> HomologyReport:
    """The class of e₃ in ℋ_U and, when ℋ_U vanishes, a twist making ``inv`` hyperbolic."""
    invariants = e3_f3_deg12(inv)
    decom = invariants.decomposition
    e3 = invariants.e3
    seed = e3 if not e3.opaque else None
    verdict = peyre_verdict(decom.group, e3_seed=seed)
    twist_witness = None
    if verdict.homology_order == 1 and not e3.opaque:
        twist_witness = _hyperbolic_twist(decom, e3)
        if twist_witness is None:
            logger.warning("ℋ_U vanishes but no hyperbolic twist was found in the pool")
    return HomologyReport(verdict, decom, twist_witness)


@dataclasses.dataclass(frozen=True, eq=False)
class QuadSplitReport:
    status: str
    d: Optional[Element] = None
    splitting: Optional[SplittingResult] = None
    f3: Optional[H3Class] = None
    bound: Optional[int] = None

    def as_dict(self, field: Field) -> Dict:
        return {
            "status": self.status,
            "d": field.format(self.d) if self.d is not None else None,
            "splitting": self.splitting.as_dict(field) if self.splitting else None,
            "f3": self.f3.as_dict() if self.f3 else None,
            "bound": self.bound,
        }


def hyperbolic_over(inv, d) -> Optional[bool]:
    """
    Whether A splits and the involution is hyperbolic over F(√d); None off ℚ.

    ``inv`` is any carrier with ``form``, ``herm`` and ``is_split`` (degree 8 or 12).
    """
    F = inv.field
    if not isinstance(F, Rationals):
        return None
    d = squarefree_part(d)
    if d == 1:
        return inv.is_split and witt_is_zero(inv.form)
    if inv.is_split:
        return witt_is_zero(extend_form(inv.form, QuadNumberField(d)))
    Q = inv.herm.algebra
    if not Q.brauer_class.is_split_by(d):
        return False
    frame = frame_for(Q, d)
    return witt_is_zero(morita_transfer(inv.herm, frame.q))


def quad_split_report(inv: Involution12) -> QuadSplitReport:
    """Search a quadratic extension over which A splits and the involution is hyperbolic."""
    invariants = e3_f3_deg12(inv)
    if not invariants.f3.is_zero():
        return QuadSplitReport("ImpossibleWithCertificate", f3=invariants.f3)
    searched = 0
    bound = get_budget().search_bound
    for decom in decompositions(inv):
        searched += 1
        try:
            split = quadratic_splitting(decom.group)
        except NotQuaternionic as err:
            logger.debug("skipping a decomposition group: %s", err)
            continue
        if not split:
            bound = split.bound or bound
            continue
        check = hyperbolic_over(inv, split.d)
        if check is False:
            raise InternalInconsistency(f"U splits over F(√{split.d}) but the involution "
                                        "is not hyperbolic there")
        return QuadSplitReport("SplitAndHyperbolicOver", split.d, split, invariants.f3)
    logger.warning("no splitting decomposition group among %d decompositions", searched)
    return QuadSplitReport("NoneFound", f3=invariants.f3, bound=bound)
