"""Quaternionic subgroups U ⊂ ₂Br(F), the form n_U, f₃(U) and the homology group ℋ_U."""
import dataclasses
import itertools
import logging
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

from .cohomology import (BrauerClass2, H3Class, MembershipVerdict, ModClass, Symbol, cup,
                         mod_equal)
from .config import first_match, get_budget
from .errors import (InconsistentData, IndexUndecided, InternalInconsistency,
                     NotQuaternionic, PreconditionFailed, RoleAssignmentFailed,
                     SearchCancelled, SearchExhausted, TooManyGenerators,
                     WitnessIncomplete)
from .fields import (Element, Field, QuadExtension, RationalFunctionField, Rationals,
                     prime_support, squarefree_part)
from .qforms import (QuadraticForm, albert_form, hyperbolic, pfister, require_ideal_power,
                     scharlau_transfer, witt_decompose, witt_equal, witt_is_zero)

logger = logging.getLogger(__name__)

MAX_GENERATORS = 3


@dataclasses.dataclass(frozen=True)
class RoleAssignment:
    """[A], [Q₁..₃] and [H₁..₃] = [A] + [Q_i], as element masks of a subgroup."""

    a: int
    q: Tuple[int, int, int]

    @property
    def h(self) -> Tuple[int, int, int]:
        return tuple(self.a ^ qi for qi in self.q)


@dataclasses.dataclass(frozen=True, eq=False)
class QuaternionicSubgroup:
    """
    The subgroup generated by at most three Brauer classes.

    Elements are indexed by bit masks over ``basis``, an independent subset of the
    generators, so the sum of two elements is the XOR of their masks.
    """

    field: Field
    generators: Tuple[BrauerClass2, ...]
    basis: Tuple[BrauerClass2, ...]
    symbols: Tuple[Optional[Symbol], ...]
    quaternionic: Optional[bool]

    @property
    def order(self) -> int:
        return 2 ** len(self.basis)

    def element(self, mask: int) -> BrauerClass2:
        out = BrauerClass2.zero(self.field)
        for bit, beta in enumerate(self.basis):
            if mask >> bit & 1:
                out = out + beta
        return out

    @property
    def elements(self) -> List[BrauerClass2]:
        return [self.element(m) for m in range(self.order)]

    def mask_of(self, beta: BrauerClass2) -> Optional[int]:
        for mask in range(self.order):
            if self.element(mask) == beta:
                return mask
        return None

    def contains(self, beta: BrauerClass2) -> bool:
        return self.mask_of(beta) is not None

    def symbol_of(self, mask: int) -> Symbol:
        symbol = self.symbols[mask]
        if symbol is None:
            raise NotQuaternionic(f"no quaternion presentation of {self.element(mask)}")
        return symbol

    def norm_form(self, mask: int) -> QuadraticForm:
        if mask == 0:
            return hyperbolic(self.field, 2)
        return pfister(self.field, self.symbol_of(mask)).expansion

    def as_dict(self) -> Dict:
        F = self.field
        return {
            "order": self.order,
            "quaternionic": self.quaternionic,
            "generators": [g.as_dict() for g in self.generators],
            "elements": [[F.format(x) for x in s] if s else None for s in self.symbols],
        }


def _presentation(beta: BrauerClass2, known: Sequence[BrauerClass2]) -> Optional[Symbol]:
    if len(beta.symbols) == 1:
        return beta.symbols[0]
    for candidate in known:
        if candidate == beta:
            return candidate.symbols[0]
    try:
        return beta.as_symbol()
    except SearchCancelled:
        raise
    except SearchExhausted:
        return None


def subgroup(generators: Sequence[BrauerClass2], known: Sequence[Symbol] = (),
             field: Optional[Field] = None, allow_index_four: bool = False) -> QuaternionicSubgroup:
    """
    Build the subgroup generated by ``generators``.

    Args:
        generators: at most three classes.
        known: extra quaternion symbols claimed to lie in the subgroup; each is checked.
        field: required when ``generators`` is empty.
        allow_index_four: accept generators of index 4 (the resulting group is flagged
            as not quaternionic).
    """
    generators = tuple(generators)
    if len(generators) > MAX_GENERATORS:
        raise TooManyGenerators(f"at most {MAX_GENERATORS} generators, got {len(generators)}")
    if field is None:
        if not generators:
            raise PreconditionFailed("an empty generator list needs an explicit field")
        field = generators[0].field
    basis: List[BrauerClass2] = []
    span = [BrauerClass2.zero(field)]
    for beta in generators:
        if any(beta == x for x in span):
            continue
        basis.append(beta)
        span = span + [x + beta for x in span]
    known_classes = [BrauerClass2(field, (s,)) for s in known]
    group = QuaternionicSubgroup(field, generators, tuple(basis), (), None)
    for cls in known_classes:
        if not group.contains(cls):
            raise InconsistentData(f"{cls} does not lie in the generated subgroup")
    symbols: List[Optional[Symbol]] = [(field.one, field.one)]
    quaternionic: Optional[bool] = True
    for mask in range(1, group.order):
        beta = group.element(mask)
        symbol = _presentation(beta, known_classes)
        symbols.append(symbol)
        if symbol is not None:
            continue
        try:
            index = beta.index()
        except IndexUndecided:
            logger.debug("index of %s is undecided", beta)
            if quaternionic:
                quaternionic = None
            continue
        if index == 4:
            if mask & (mask - 1) == 0 and not allow_index_four:
                raise NotQuaternionic(f"generator {beta} has index 4")
            quaternionic = False
    return QuaternionicSubgroup(field, generators, tuple(basis), tuple(symbols), quaternionic)


def _require_quaternionic(U: QuaternionicSubgroup):
    if U.quaternionic is False:
        raise NotQuaternionic("the subgroup contains a class of index 4")
    missing = [m for m in range(U.order) if U.symbols[m] is None]
    if missing:
        raise NotQuaternionic(f"elements {[str(U.element(m)) for m in missing]} have no "
                              "quaternion presentation")


def to_quaternion(beta: BrauerClass2) -> Symbol:
    """A single symbol (a, b) presenting β."""
    symbol = beta.as_symbol()
    if symbol is not None:
        return symbol
    if beta.index() == 4:
        raise NotQuaternionic(f"{beta} has index 4")
    raise SearchExhausted(f"no quaternion symbol found for {beta}", get_budget().search_bound,
                          "to_quaternion")


def n_U(U: QuaternionicSubgroup) -> QuadraticForm:
    """Σ n_H over H ∈ U; checked to lie in I³ when the order is at least 4."""
    _require_quaternionic(U)
    form = QuadraticForm(U.field, ())
    for mask in range(U.order):
        form = form.perp(U.norm_form(mask))
    if U.order >= 4:
        require_ideal_power(form, 3)
    return form


# ---------------------------------------------------------------- roles and f₃

def role_assignments(U: QuaternionicSubgroup, a: Optional[BrauerClass2] = None
                     ) -> Iterator[RoleAssignment]:
    """Every ([A], Q₁, Q₂, Q₃) with ΣQ_i = [A] and the Q_i generating U (order 8)."""
    if U.order != 8:
        return
    if a is not None:
        mask = U.mask_of(a)
        if mask is None:
            raise RoleAssignmentFailed(f"{a} is not in the subgroup")
        a_masks = [mask]
    else:
        a_masks = list(range(1, 8))
    for am in a_masks:
        pool = [m for m in range(1, 8) if m != am]
        for q in itertools.combinations(pool, 3):
            if q[0] ^ q[1] ^ q[2] != am:
                continue
            yield RoleAssignment(am, q)


def role_assignment(U: QuaternionicSubgroup, a: Optional[BrauerClass2] = None) -> RoleAssignment:
    roles = next(role_assignments(U, a), None)
    if roles is None:
        raise RoleAssignmentFailed("no role assignment with Σ[H_i] = 0 exists")
    return roles


def _multiplier_candidates(F: Field, entries: Sequence[Element]) -> List[Element]:
    base = [F.coerce(x) for x in entries]
    out = [F.one]
    for x in base:
        out.extend([x, -x])
    for x, y in itertools.combinations(base, 2):
        out.extend([x * y, -x * y])
    return out


def _similarity_factor(diff: QuadraticForm, n_a: QuadraticForm) -> Element:
    """λ with diff = ⟨λ⟩n_A in the Witt ring."""
    F = diff.field
    if F.is_number_field:
        kernel = witt_decompose(diff).kernel
        candidates = [kernel.diag[0]] if kernel.dim else [F.one]
    else:
        candidates = _multiplier_candidates(F, diff.diag)
    budget = get_budget()
    for count, lam in enumerate(candidates):
        if count >= budget.search_bound:
            break
        if witt_is_zero(diff.perp(-n_a.scaled(lam))):
            return lam
    raise SearchExhausted("no similarity factor found", budget.search_bound, "f3_of_group")


def f3_of_group(U: QuaternionicSubgroup, roles: Optional[RoleAssignment] = None) -> H3Class:
    """
    (λ₁λ₂λ₃)·[A] with n_{Q_i} − n_{H_i} = ⟨λ_i⟩n_A, cross-checked against e₃(n_U).

    Groups of order at most 4 have trivial f₃.
    """
    _require_quaternionic(U)
    F = U.field
    if U.order < 8:
        return H3Class.zero(F)
    roles = roles or role_assignment(U)
    n_a = U.norm_form(roles.a)
    product = F.one
    for qm, hm in zip(roles.q, roles.h):
        diff = U.norm_form(qm).perp(-U.norm_form(hm))
        lam = _similarity_factor(diff, n_a)
        logger.debug("role %s: λ = %s", U.element(qm), F.format(lam))
        product = product * lam
    result = cup(product, BrauerClass2(F, (U.symbol_of(roles.a),)))
    if result != H3Class.from_form(n_U(U)):
        raise InternalInconsistency("f₃(U) disagrees with e₃(n_U)")
    return result


# ---------------------------------------------------------------- quadratic splitting

@dataclasses.dataclass(frozen=True)
class SplittingResult:
    status: str
    d: Optional[Element] = None
    witnesses: Tuple[Element, ...] = ()
    bound: Optional[int] = None

    def __bool__(self):
        return self.status == "SplitBy"

    def as_dict(self, field: Field) -> Dict:
        return {
            "status": self.status,
            "d": field.format(self.d) if self.d is not None else None,
            "witnesses": [field.format(e) for e in self.witnesses],
            "bound": self.bound,
        }


def _squarefree_candidates(limit: int) -> Iterator[int]:
    n = 2
    emitted = 0
    while emitted < limit:
        for d in (-n, n):
            if squarefree_part(d) == d:
                emitted += 1
                yield d
        n += 1


def _number_field_splitting(U: QuaternionicSubgroup, bound: int) -> SplittingResult:
    F = U.field
    candidates = (d for d in itertools.chain((-1,), _squarefree_candidates(bound))
                  if not F.is_square(d))
    d = first_match(lambda d: all(beta.is_split_by(d) for beta in U.basis), candidates,
                    "quadratic_splitting")
    if d is not None:
        return SplittingResult("SplitBy", F.coerce(d))
    return SplittingResult("NoneWithinBound", bound=bound)


def _split_witness(beta: BrauerClass2, d: Element, symbol: Symbol) -> Optional[Element]:
    """e with β = (d, e), taken from the slots of a presentation of β."""
    F = beta.field
    a, b = symbol
    for e in (a, b, -a * b, a * d, b * d, -a * b * d, -d, F.coerce(-1)):
        if BrauerClass2(F, ((d, e),)) == beta:
            return e
    return None


def _function_field_units(U: QuaternionicSubgroup, size: int) -> List[Element]:
    F = U.field
    primes = {2, 3, 5, 7}
    for symbol in U.symbols:
        if symbol is None:
            continue
        for x in symbol:
            content, _ = F.factor(x)
            primes.update(prime_support(content))
    atoms = [-1] + sorted(primes)
    pool: List[int] = [1]
    for n in range(1, get_budget().max_atoms + 1):
        for combo in itertools.combinations(atoms, n):
            value = 1
            for p in combo:
                value *= p
            pool.append(value)
            if len(pool) >= size:
                return pool
    return pool


def _function_field_splitting(U: QuaternionicSubgroup, bound: int) -> SplittingResult:
    F = U.field
    t = F.variable
    count = 0
    for u in _function_field_units(U, get_budget().candidate_pool):
        for d in (F.coerce(u), t * u):
            if F.is_square(d):
                continue
            count += 1
            if count > bound:
                return SplittingResult("NoneWithinBound", bound=bound)
            witnesses = []
            for mask in (1 << i for i in range(len(U.basis))):
                e = _split_witness(U.element(mask), d, U.symbol_of(mask))
                if e is None:
                    break
                witnesses.append(e)
            else:
                logger.debug("subgroup split by F(√%s)", F.format(d))
                return SplittingResult("SplitBy", d, tuple(witnesses))
    return SplittingResult("NoneWithinBound", bound=min(count, bound))


def quadratic_splitting(U: QuaternionicSubgroup) -> SplittingResult:
    """
    A quadratic extension F(√d) splitting every element of U.

    Over number fields the candidates are squarefree integers, checked against the
    local conditions at every ramified place. Over ℚ(t) the candidates are u and u·t
    with u ∈ ℚ, each certified by writing every generator as (d, e).
    """
    bound = get_budget().search_bound
    if U.order == 1:
        return SplittingResult("SplitBy", U.field.coerce(-1))
    if U.field.is_number_field:
        return _number_field_splitting(U, bound)
    _require_quaternionic(U)
    return _function_field_splitting(U, bound)


# ---------------------------------------------------------------- ℋ_U

@dataclasses.dataclass(frozen=True)
class PeyreVerdict:
    homology_order: Optional[int]
    generator: Optional[ModClass] = None
    splitting: Optional[SplittingResult] = None
    bound: Optional[int] = None
    reason: str = ""

    def as_dict(self, field: Field) -> Dict:
        return {
            "homology_order": self.homology_order if self.homology_order else "Unknown",
            "generator": self.generator.as_dict() if self.generator else None,
            "splitting": self.splitting.as_dict(field) if self.splitting else None,
            "bound": self.bound,
            "reason": self.reason,
        }


def _check_f3_vanishes(U: QuaternionicSubgroup):
    try:
        f3 = f3_of_group(U)
    except SearchCancelled:
        raise
    except SearchExhausted as err:
        logger.debug("skipping the f₃ check: %s", err)
        return
    if not f3.is_zero():
        raise InternalInconsistency("ℋ_U vanishes but f₃(U) does not")


def peyre_verdict(U: QuaternionicSubgroup, e3_seed: Optional[ModClass] = None) -> PeyreVerdict:
    _require_quaternionic(U)
    if U.order <= 4:
        return PeyreVerdict(1, reason="groups of order at most 4 have trivial homology")
    split = quadratic_splitting(U)
    if split:
        _check_f3_vanishes(U)
        return PeyreVerdict(1, splitting=split, reason="split by a quadratic extension")
    if e3_seed is not None:
        seed = ModClass(e3_seed.value, tuple(U.basis), e3_seed.opaque)
        zero = ModClass(H3Class.zero(U.field), tuple(U.basis))
        verdict: MembershipVerdict = mod_equal(seed, zero)
        if verdict.status == "NotEqual":
            return PeyreVerdict(2, generator=seed, splitting=split, reason=verdict.reason)
        return PeyreVerdict(None, splitting=split, bound=verdict.bound or split.bound,
                            reason=f"seed membership is {verdict.status}")
    return PeyreVerdict(None, splitting=split, bound=split.bound,
                        reason="no splitting field within the bound and no seed")


# ---------------------------------------------------------------- the ξ construction

@dataclasses.dataclass(frozen=True, eq=False)
class XiConstruction:
    """Output of :func:`xi_construct`; ``e3_transfer`` is e₃(s⋆ψ) over k."""

    extension: QuadExtension
    h: BrauerClass2
    psi: QuadraticForm
    transfer: QuadraticForm
    e3_transfer: H3Class
    xi: H3Class
    group: QuaternionicSubgroup
    splitting: Optional[SplittingResult] = None
    explicit_splitting: Optional[SplittingResult] = None
    membership: Optional[MembershipVerdict] = None

    def as_dict(self) -> Dict:
        F = self.group.field
        return {
            "K": self.extension.descriptor(),
            "H": self.h.as_dict(),
            "psi": self.psi.format(),
            "transfer": self.transfer.format(),
            "e3_transfer": self.e3_transfer.as_dict(),
            "xi": self.xi.as_dict(),
            "U": self.group.as_dict(),
            "splitting": self.splitting.as_dict(F) if self.splitting else None,
            "explicit_splitting": (self.explicit_splitting.as_dict(F)
                                   if self.explicit_splitting else None),
            "xi_in_U": self.membership.as_dict() if self.membership else None,
        }


def xi_construct(a, b, c, x, y, C: BrauerClass2, split: bool = True) -> XiConstruction:
    """
    Build H, ψ, ξ = t·[C] + e₃(s⋆ψ) and U = ⟨(a,t), (b,t), (c,N(y)t)⟩ over ℚ(t).

    Args:
        a, b, c: rationals with ℚ(√a, √b, √c) triquadratic.
        x, y: elements of K = ℚ(√a) outside ℚ with C_K = (bc, x)_K + (c, y)_K.
        C: the class [C] over ℚ.
        split: also search a quadratic splitting field of U.
    """
    k = Rationals()
    a, b, c = (k.coerce(v) for v in (a, b, c))
    K = QuadExtension(k, a)
    L = K.field
    x, y = L.coerce(x), L.coerce(y)
    if x.is_rational() or y.is_rational():
        raise PreconditionFailed("x and y must lie outside the base field")
    if C.field != k:
        raise PreconditionFailed("[C] must be a class over ℚ")
    if C.restrict(L) != BrauerClass2(L, ((b * c, x), (c, y))):
        raise InconsistentData("C_K differs from (bc, x)_K + (c, y)_K")
    h = BrauerClass2.symbol(k, c, y.norm())
    if h != BrauerClass2.symbol(k, b * c, x.norm()):
        raise InconsistentData("(bc, N(x)) and (c, N(y)) disagree")
    psi = albert_form(L, b * c, x, c, y)
    transfer = scharlau_transfer(K, psi)
    sx, sy = K.s_functional(x), K.s_functional(y)
    n_h = pfister(k, (c, y.norm())).expansion
    if not witt_equal(transfer, QuadraticForm(k, (sx, -sy)).tensor(n_h)):
        raise InternalInconsistency("s⋆ψ differs from ⟨s(x), −s(y)⟩n_H")
    e3_transfer = H3Class.symbol(k, sx * sy, c, y.norm())
    F = RationalFunctionField()
    t = F.variable
    Ny, Nx = y.norm(), x.norm()
    xi = cup(t, C.extend(F)) + H3Class.symbol(F, sx * sy, c, Ny)
    gens = [BrauerClass2.symbol(F, a, t), BrauerClass2.symbol(F, b, t),
            BrauerClass2.symbol(F, c, Ny * t)]
    known = [(a * b, t), (a * c, Ny * t), (b * c, Nx * t), (a * b * c, Nx * t)]
    U = subgroup(gens, known=[(F.coerce(p), F.coerce(q)) for p, q in known])
    if not split:
        return XiConstruction(K, h, psi, transfer, e3_transfer, xi, U)
    splitting = quadratic_splitting(U)
    if splitting:
        logger.debug("ξ construction: U split by F(√%s)", F.format(splitting.d))
    explicit = norm_splitting(K, b, c, Ny, U)
    zero = ModClass(H3Class.zero(F), tuple(U.basis))
    membership = mod_equal(ModClass(xi, tuple(U.basis)), zero)
    if explicit and membership.status == "NotEqual":
        raise InternalInconsistency("U is split by a quadratic extension but ξ ∉ F^×·U")
    return XiConstruction(K, h, psi, transfer, e3_transfer, xi, U, splitting, explicit,
                          membership)


def _small_elements(K: QuadExtension, height: int) -> Iterator[Element]:
    """Nonzero z = z₀ + z₁√a with |z_i| ≤ height, by increasing height, starting at z = 1."""
    L = K.field
    yield L.one
    for h in range(1, height + 1):
        for z0, z1 in itertools.product(range(-h, h + 1), repeat=2):
            if max(abs(z0), abs(z1)) == h and (z0, z1) != (1, 0):
                yield L.coerce(z0) + L.generator * z1


def norm_splitting(K: QuadExtension, b, c, Ny, U: QuaternionicSubgroup,
                   height: Optional[int] = None) -> SplittingResult:
    """
    F(√(N(z)t)) splitting U, with N(z) a norm from K satisfying (b, N(z)) = 0 and
    (c, N(z)) = (c, N(y)) over ℚ.

    Each generator of U is certified as (N(z)t, e). Such a z exists when [C] is
    decomposable in ℚ(√a, √b, √c)/ℚ.
    """
    k = K.base
    F = U.field
    height = height or get_budget().height
    tried = set()
    for z in _small_elements(K, height):
        u = z.norm()
        if u in tried:
            continue
        tried.add(u)
        if not (BrauerClass2.symbol(k, b, u).is_zero()
                and BrauerClass2.symbol(k, c, u * Ny).is_zero()):
            continue
        d = F.coerce(u) * F.variable
        witnesses = []
        for mask in (1 << i for i in range(len(U.basis))):
            e = _split_witness(U.element(mask), d, U.symbol_of(mask))
            if e is None:
                raise InternalInconsistency(f"F(√{F.format(d)}) fails to split "
                                            f"{U.element(mask)}")
            witnesses.append(e)
        logger.debug("U split by F(√N(z)t) with z = %s", z)
        return SplittingResult("SplitBy", d, tuple(witnesses))
    return SplittingResult("NoneWithinBound", bound=len(tried))


def descent_criterion(C: BrauerClass2, a, witnesses: Optional[Sequence[Symbol]]) -> bool:
    """
    Check C ~ A₁ ⊗ A₂ ⊗ A₃ with A₃ split by ℚ(√a), on supplied symbols A₁, A₂, A₃.
    """
    if not witnesses or len(witnesses) != 3 or any(w is None for w in witnesses):
        raise WitnessIncomplete("three quaternion witnesses A₁, A₂, A₃ are required")
    k = C.field
    algebras = [BrauerClass2(k, (tuple(k.coerce(v) for v in w),)) for w in witnesses]
    total = algebras[0] + algebras[1] + algebras[2]
    return total == C and algebras[2].is_split_by(k.coerce(a))


def norm_descent(construction: XiConstruction, C: BrauerClass2, height: Optional[int] = None
                 ) -> Optional[Element]:
    """u ∈ N(K^×) with e₃(s⋆ψ) = u·[C], searched over norms of small elements of K."""
    height = height or get_budget().height
    for z in _small_elements(construction.extension, height):
        n = z.norm()
        if construction.e3_transfer + cup(n, C) == H3Class.zero(C.field):
            return n
    return None
