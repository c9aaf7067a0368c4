"""Brauer classes of exponent 2, degree-3 classes and their quotients by F^×·U.

Degree-3 classes are handled through their Witt-ring normal form: a class is
zero exactly when its normal form, a form in I³, lies in I⁴.
"""
import dataclasses
import itertools
import logging
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple, Union

from .config import candidate_order, first_match, get_budget
from .errors import (FieldMismatch, IndexUndecided, ModulusMismatch,
                     NotCorestrictible, SearchExhausted, ZeroSlot)
from .fields import (Element, Field, Place, QuadExtension, QuadNumberField,
                     Rationals, SquareClass,
                     prime_support)
from .qforms import (QuadraticForm, albert_form, clifford_symbols, e3_vanishes,
                     extend_form, isotropic, pfister, residue_forms,
                     scharlau_transfer, signature)

logger = logging.getLogger(__name__)

Symbol = Tuple[Element, Element]


def _check_field(a: Field, b: Field):
    if a != b:
        raise FieldMismatch(f"classes over {a} and {b}")


# ---------------------------------------------------------------- degree 2

@dataclasses.dataclass(frozen=True, eq=False)
class BrauerClass2:
    """A 2-torsion Brauer class presented as a formal sum of quaternion symbols."""

    field: Field
    symbols: Tuple[Symbol, ...] = ()

    def __post_init__(self):
        symbols = []
        for a, b in self.symbols:
            a, b = self.field.coerce(a), self.field.coerce(b)
            if not a or not b:
                raise ZeroSlot("quaternion symbols need nonzero slots")
            symbols.append((a, b))
        object.__setattr__(self, "symbols", tuple(symbols))

    @classmethod
    def from_symbols(cls, field: Field, symbols: Iterable[Sequence]) -> "BrauerClass2":
        return cls(field, tuple(tuple(s) for s in symbols))

    @classmethod
    def symbol(cls, field: Field, a, b) -> "BrauerClass2":
        return cls(field, ((a, b),))

    @classmethod
    def zero(cls, field: Field) -> "BrauerClass2":
        return cls(field, ())

    def __add__(self, other: "BrauerClass2") -> "BrauerClass2":
        _check_field(self.field, other.field)
        return BrauerClass2(self.field, self.symbols + other.symbols)

    def __eq__(self, other):
        if not isinstance(other, BrauerClass2):
            return NotImplemented
        return self.field == other.field and (self + other).is_zero()

    def __hash__(self):
        if self.field.is_number_field:
            return hash(self.ramification())
        return hash(frozenset(str(pi.as_expr()) for pi, _ in self.residues()))

    def _entries(self) -> List[Element]:
        return [x for s in self.symbols for x in s]

    # -- number fields

    def local_invariant(self, v: Place) -> int:
        sign = 1
        for a, b in self.symbols:
            sign *= self.field.hilbert_symbol(a, b, v)
        return sign

    def ramification(self) -> FrozenSet[Place]:
        if not self.field.is_number_field:
            raise FieldMismatch("ramification sets are defined over number fields")
        return frozenset(v for v in self.field.bad_places(self._entries())
                         if v.kind != "complex" and self.local_invariant(v) == -1)

    # -- ℚ(t)

    def residue(self, pi) -> SquareClass:
        F = self.field
        k = F.residue_field(pi)
        value = k.one
        for a, b in self.symbols:
            value = value * F.tame_symbol(a, b, pi)
        return k.square_class(value)

    def residues(self) -> List[Tuple[object, SquareClass]]:
        out = []
        for pi in self.field.support(self._entries()):
            r = self.residue(pi)
            if not r.is_trivial():
                out.append((pi, r))
        return out

    def specialization(self, t0=None) -> "BrauerClass2":
        F = self.field
        if t0 is None:
            t0 = F.good_point(self._entries())
        return BrauerClass2(Rationals(), tuple((F.specialize(a, t0), F.specialize(b, t0))
                                               for a, b in self.symbols))

    def is_constant(self) -> bool:
        return all(self.field.coerce(x).is_constant() for x in self._entries())

    # -- common interface

    def is_zero(self) -> bool:
        if not self.symbols:
            return True
        if self.field.is_number_field:
            return not self.ramification()
        if self.residues():
            return False
        return self.specialization().is_zero()

    def canonical(self) -> Dict:
        if self.field.is_number_field:
            return {"ramification": sorted(str(v) for v in sorted(self.ramification()))}
        return {
            "residues": {str(pi.as_expr()): str(r) for pi, r in self.residues()},
            "specialization": self.specialization().canonical(),
        }

    def restrict(self, target: Union[QuadExtension, Field]) -> "BrauerClass2":
        field = target.field if isinstance(target, QuadExtension) else target
        return BrauerClass2(field, tuple((field.coerce(a), field.coerce(b))
                                         for a, b in self.symbols))

    def extend(self, field: Field) -> "BrauerClass2":
        return self.restrict(field)

    def is_split_by(self, d) -> bool:
        """Whether F(√d) splits the class (number fields)."""
        if not self.field.is_number_field:
            raise FieldMismatch("use quatgroups for splitting over ℚ(t)")
        F = self.field
        if F.is_square(d):
            return self.is_zero()
        for v in self.ramification():
            if v.kind == "complex" or F.is_local_square(d, v):
                return False
        return True

    def merged(self) -> List[Symbol]:
        """Greedy common-slot merge of the presentation."""
        F = self.field
        symbols = [s for s in self.symbols if not BrauerClass2(F, (s,)).is_zero()]
        changed = True
        while changed and len(symbols) > 1:
            changed = False
            for i, j in itertools.combinations(range(len(symbols)), 2):
                (a, b), (c, d) = symbols[i], symbols[j]
                merged = None
                for x, y, z, w in ((a, b, c, d), (a, b, d, c), (b, a, c, d), (b, a, d, c)):
                    if F.is_square(x / z):
                        merged = (x, y * w)
                        break
                if merged is None:
                    continue
                rest = [s for k, s in enumerate(symbols) if k not in (i, j)]
                if not BrauerClass2(F, (merged,)).is_zero():
                    rest.append(merged)
                symbols, changed = rest, True
                break
        return symbols

    def as_symbol(self) -> Optional[Symbol]:
        """A single quaternion symbol presenting the class, when one is found."""
        if self.is_zero():
            return (self.field.one, self.field.one)
        merged = self.merged()
        if len(merged) == 1:
            return merged[0]
        if not self.field.is_number_field:
            return None
        return _search_symbol(self)

    def index(self) -> int:
        if self.is_zero():
            return 1
        if self.field.is_number_field:
            return 2
        merged = self.merged()
        if len(merged) == 1:
            return 2
        if self.is_constant():
            return self.specialization().index()
        if len(merged) == 2:
            (a, b), (c, d) = merged
            albert = albert_form(self.field, a, b, c, d)
            if springer_anisotropic(albert):
                return 4
        raise IndexUndecided("no certificate for the index of a biquaternion class",
                              len(merged), "brauer_index")

    def as_dict(self) -> Dict:
        F = self.field
        return {
            "symbols": [[F.format(a), F.format(b)] for a, b in self.symbols],
            "canonical": self.canonical(),
        }

    def __str__(self):
        if not self.symbols:
            return "0"
        F = self.field
        return " + ".join(f"({F.format(a)},{F.format(b)})" for a, b in self.symbols)


def springer_anisotropic(q: QuadraticForm) -> bool:
    """Anisotropy certificate over ℚ(t): both residue forms anisotropic at some π."""
    for pi in q.field.support(q.diag):
        first, second = residue_forms(q, pi)
        if all(f.dim == 0 or not isotropic(f) for f in (first, second)):
            return True
    return False


def _symbol_pool(field: Field, seeds: Iterable[Element], size: int) -> List[Element]:
    primes = {2, 3, 5, 7, 11, 13}
    for x in seeds:
        primes.update(prime_support(field.norm_to_q(x)))
    pool = [field.coerce(-1)]
    for n in range(1, len(primes) + 1):
        for combo in itertools.combinations(sorted(primes), n):
            value = 1
            for p in combo:
                value *= p
            pool.extend([field.coerce(value), field.coerce(-value)])
            if len(pool) >= size:
                return pool
    if isinstance(field, QuadNumberField):
        root = field.generator
        pool.extend([root, -root, root + 1, root - 1])
    return pool


def _search_symbol(beta: BrauerClass2) -> Symbol:
    F = beta.field
    target = beta.ramification()
    budget = get_budget()
    pool = candidate_order(_symbol_pool(F, beta._entries(), budget.candidate_pool))
    pairs = itertools.islice(itertools.combinations_with_replacement(pool, 2), budget.search_bound)
    found = first_match(lambda ab: BrauerClass2(F, (ab,)).ramification() == target, pairs,
                        "as_symbol")
    if found is not None:
        logger.debug("class %s presented as (%s,%s)", beta, *found)
        return found
    raise SearchExhausted(f"no quaternion symbol found for {beta}", budget.search_bound, "as_symbol")


def brauer_add(x: BrauerClass2, y: BrauerClass2) -> BrauerClass2:
    return x + y


def brauer_index(x: BrauerClass2) -> int:
    return x.index()


def brauer_is_zero(x: BrauerClass2) -> bool:
    return x.is_zero()


def residue(beta: BrauerClass2, pi) -> SquareClass:
    return beta.residue(pi)


# ---------------------------------------------------------------- degree 3

@dataclasses.dataclass(frozen=True)
class Symbol3:
    a: Element
    b: Element
    c: Element


@dataclasses.dataclass(frozen=True)
class CoresTerm:
    """cores_{K/F}(μ·(x,y)_K)."""

    extension: QuadExtension
    mu: Element
    x: Element
    y: Element


@dataclasses.dataclass(frozen=True)
class FormTerm:
    """The class e₃ of a form in I³."""

    form: QuadraticForm


Term = Union[Symbol3, CoresTerm, FormTerm]


def _slot(field: Field, x) -> str:
    """A slot printed as its reduced square class representative, e.g. t³ as t."""
    return field.format(field.reduce_square_class(field.coerce(x)))


def _term_form(field: Field, term: Term) -> QuadraticForm:
    if isinstance(term, Symbol3):
        return pfister(field, (term.a, term.b, term.c)).expansion
    if isinstance(term, CoresTerm):
        K = term.extension
        inner = pfister(K.field, (term.mu, term.x, term.y)).expansion
        return scharlau_transfer(K, inner)
    return term.form


@dataclasses.dataclass(frozen=True, eq=False)
class H3Class:
    field: Field
    terms: Tuple[Term, ...] = ()

    @classmethod
    def zero(cls, field: Field) -> "H3Class":
        return cls(field, ())

    @classmethod
    def symbol(cls, field: Field, a, b, c) -> "H3Class":
        a, b, c = (field.coerce(x) for x in (a, b, c))
        if not (a and b and c):
            raise ZeroSlot("symbols need nonzero slots")
        return cls(field, (Symbol3(a, b, c),))

    @classmethod
    def from_form(cls, q: QuadraticForm) -> "H3Class":
        return cls(q.field, (FormTerm(q),))

    def __add__(self, other: "H3Class") -> "H3Class":
        _check_field(self.field, other.field)
        return H3Class(self.field, self.terms + other.terms)

    def __eq__(self, other):
        if not isinstance(other, H3Class):
            return NotImplemented
        return self.field == other.field and h3_zero(self + other)

    def normal_form(self) -> QuadraticForm:
        form = QuadraticForm(self.field, ())
        for term in self.terms:
            form = form.perp(_term_form(self.field, term))
        return form

    def is_zero(self) -> bool:
        return h3_zero(self)

    def extend(self, field: Field) -> "H3Class":
        """Image under a field extension (ℚ → ℚ(t) or ℚ → ℚ(√d))."""
        return H3Class(field, (FormTerm(extend_form(self.normal_form(), field)),))

    def restrict(self, K: QuadExtension) -> "H3Class":
        return self.extend(K.field)

    def residue(self, pi) -> BrauerClass2:
        """Residue at π over ℚ(t), a Brauer class over the residue field."""
        second = residue_forms(self.normal_form(), pi)[1]
        return BrauerClass2.from_symbols(second.field, clifford_symbols(second))

    def real_values(self) -> Dict[Place, int]:
        """Signature / 8 mod 2 of the normal form at every real place."""
        nf = self.normal_form()
        return {v: (signature(nf, v) // 8) % 2 for v in self.field.real_places()}

    def as_dict(self) -> Dict:
        F = self.field
        out = []
        for term in self.terms:
            if isinstance(term, Symbol3):
                out.append({"sym": [_slot(F, x) for x in (term.a, term.b, term.c)]})
            elif isinstance(term, CoresTerm):
                K = term.extension
                out.append({"cores": {"K": K.descriptor(), "mu": _slot(K.field, term.mu),
                                      "sym": [_slot(K.field, term.x), _slot(K.field, term.y)]}})
            else:
                out.append({"form": term.form.format()})
        return {"terms": out, "zero": self.is_zero()}

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for term in self.terms:
            if isinstance(term, Symbol3):
                parts.append("(" + ",".join(_slot(self.field, x) for x in (term.a, term.b, term.c)) + ")")
            elif isinstance(term, CoresTerm):
                parts.append(f"cores({term.mu}*({term.x},{term.y}))")
            else:
                parts.append(f"e3{term.form}")
        return " + ".join(parts)


def h3_zero(c: H3Class) -> bool:
    return e3_vanishes(c.normal_form())


def cup(lam, beta: BrauerClass2) -> H3Class:
    """(λ)·β for a presented Brauer class β."""
    F = beta.field
    lam = F.coerce(lam)
    return H3Class(F, tuple(Symbol3(lam, a, b) for a, b in beta.symbols))


def corestriction(K: QuadExtension, mu, x, y) -> H3Class:
    """cores_{K/F}(μ·(x,y)_K); the projection formula applies when x, y ∈ F."""
    if not isinstance(K.base, Rationals):
        raise NotCorestrictible("corestriction needs an extension of ℚ")
    L = K.field
    mu, x, y = L.coerce(mu), L.coerce(x), L.coerce(y)
    if not (mu and x and y):
        raise ZeroSlot("symbols need nonzero slots")
    if x.is_rational() and y.is_rational():
        return H3Class.symbol(K.base, mu.norm(), x.x0, y.x0)
    return H3Class(K.base, (CoresTerm(K, mu, x, y),))


# ---------------------------------------------------------------- quotients

@dataclasses.dataclass(frozen=True)
class ModClass:
    """A degree-3 class modulo F^×·U, with optional opaque (order-4) terms."""

    value: H3Class
    modulus: Tuple[BrauerClass2, ...] = ()
    opaque: Tuple[str, ...] = ()

    @property
    def field(self) -> Field:
        return self.value.field

    def __add__(self, other: "ModClass") -> "ModClass":
        _check_modulus(self, other)
        return ModClass(self.value + other.value, self.modulus, self.opaque + other.opaque)

    def as_dict(self) -> Dict:
        return {
            "value": self.value.as_dict(),
            "modulus": [b.as_dict() for b in self.modulus],
            "opaque": list(self.opaque),
        }


@dataclasses.dataclass(frozen=True)
class MembershipVerdict:
    status: str
    multipliers: Tuple[Element, ...] = ()
    bound: Optional[int] = None
    reason: str = ""

    def __bool__(self):
        return self.status == "Equal"

    def as_dict(self) -> Dict:
        return {
            "status": self.status,
            "multipliers": [str(m) for m in self.multipliers],
            "bound": self.bound,
            "reason": self.reason,
        }


def _check_modulus(x: ModClass, y: ModClass):
    if x.field != y.field:
        raise FieldMismatch(f"classes over {x.field} and {y.field}")
    if len(x.modulus) != len(y.modulus) or any(a != b for a, b in zip(x.modulus, y.modulus)):
        raise ModulusMismatch("classes are taken modulo different subgroups")


def _opaque_cancels(x: ModClass, y: ModClass) -> bool:
    counts: Dict[str, int] = {}
    for label in x.opaque + y.opaque:
        counts[label] = counts.get(label, 0) + 1
    return all(n % 2 == 0 for n in counts.values())


def _shift(diff: H3Class, modulus: Sequence[BrauerClass2], lams: Sequence) -> H3Class:
    out = diff
    for lam, beta in zip(lams, modulus):
        if lam != 1:
            out = out + cup(lam, beta)
    return out


def _number_field_multipliers(F) -> List[Element]:
    out = [F.one, -F.one]
    if isinstance(F, QuadNumberField) and F.d > 0:
        out.extend([F.generator, -F.generator])
    return out


def _number_field_verdict(diff: H3Class, modulus) -> MembershipVerdict:
    F = diff.field
    if not F.real_places():
        return MembershipVerdict("Equal", tuple(F.one for _ in modulus), reason="H3 vanishes")
    for lams in itertools.product(_number_field_multipliers(F), repeat=len(modulus)):
        if h3_zero(_shift(diff, modulus, lams)):
            return MembershipVerdict("Equal", tuple(lams))
    return MembershipVerdict("NotEqual", reason="real-place signatures never cancel")


def _residue_obstruction(diff: H3Class, modulus) -> Optional[str]:
    """A place π where ∂_π(diff) is outside the span of the (constant) modulus."""
    F = diff.field
    if not all(beta.is_constant() for beta in modulus):
        return None
    for pi in F.support(diff.normal_form().diag):
        target = diff.residue(pi)
        k = target.field
        restricted = [BrauerClass2(k, tuple((k.coerce(a.constant_value()),
                                             k.coerce(b.constant_value()))
                                            for a, b in beta.symbols))
                      for beta in modulus]
        reachable = False
        for mask in itertools.product((0, 1), repeat=len(restricted)):
            shifted = target
            for bit, beta in zip(mask, restricted):
                if bit:
                    shifted = shifted + beta
            if shifted.is_zero():
                reachable = True
                break
        if not reachable:
            return f"residue at {pi.as_expr()} is not in the span of the modulus"
    return None


def _function_field_candidates(diff: H3Class, modulus, size: int) -> List[Element]:
    F = diff.field
    entries = list(diff.normal_form().diag)
    for beta in modulus:
        entries.extend(beta._entries())
    atoms = [F.coerce(-1)]
    for pi in F.support(entries):
        atoms.append(F.coerce(pi.as_expr()))
    primes = set()
    for x in entries:
        primes.update(prime_support(F.factor(x)[0]))
    atoms.extend(F.coerce(p) for p in sorted(primes))
    pool = [F.one]
    max_atoms = get_budget().max_atoms
    for n in range(1, max_atoms + 1):
        for combo in itertools.combinations(atoms, n):
            value = F.one
            for a in combo:
                value = value * a
            pool.append(value)
            if len(pool) >= size:
                return pool
    return pool


def mod_equal(x: ModClass, y: ModClass) -> MembershipVerdict:
    """Decide x − y ∈ F^×·U; Equal and NotEqual are certified, Unknown carries the bound."""
    _check_modulus(x, y)
    if not _opaque_cancels(x, y):
        return MembershipVerdict("Unknown", bound=0, reason="opaque terms do not cancel")
    diff = x.value + y.value
    modulus = x.modulus
    if h3_zero(diff):
        return MembershipVerdict("Equal", tuple(x.field.one for _ in modulus))
    F = diff.field
    if F.is_number_field:
        return _number_field_verdict(diff, modulus)
    if not modulus:
        return MembershipVerdict("NotEqual", reason="nonzero class and trivial modulus")
    obstruction = _residue_obstruction(diff, modulus)
    if obstruction:
        return MembershipVerdict("NotEqual", reason=obstruction)
    budget = get_budget()
    pool = candidate_order(_function_field_candidates(diff, modulus, budget.candidate_pool))
    tuples = itertools.islice(itertools.product(pool, repeat=len(modulus)), budget.search_bound)
    lams = first_match(lambda m: h3_zero(_shift(diff, modulus, m)), tuples, "mod_equal")
    if lams is not None:
        logger.debug("membership certified with multipliers %s", [str(m) for m in lams])
        return MembershipVerdict("Equal", tuple(lams))
    logger.warning("membership search exhausted after %d candidates", budget.search_bound)
    return MembershipVerdict("Unknown", bound=budget.search_bound,
                             reason="multiplier search exhausted")


@dataclasses.dataclass(frozen=True)
class BrauerModClass:
    """A Brauer class modulo a subgroup, e.g. a Clifford invariant modulo [A]."""

    value: BrauerClass2
    modulus: Tuple[BrauerClass2, ...] = ()
    opaque: Tuple[str, ...] = ()

    def equals(self, other: "BrauerModClass") -> MembershipVerdict:
        if self.opaque or other.opaque:
            if sorted(self.opaque) != sorted(other.opaque):
                return MembershipVerdict("Unknown", bound=0, reason="opaque terms do not cancel")
        diff = self.value + other.value
        for mask in itertools.product((0, 1), repeat=len(self.modulus)):
            shifted = diff
            for bit, beta in zip(mask, self.modulus):
                if bit:
                    shifted = shifted + beta
            if shifted.is_zero():
                return MembershipVerdict("Equal", tuple(mask))
        return MembershipVerdict("NotEqual", reason="difference is outside the modulus")

    def is_zero(self) -> Optional[bool]:
        """None when an opaque term is present."""
        if self.opaque:
            return None
        return bool(self.equals(BrauerModClass(BrauerClass2.zero(self.value.field), self.modulus)))

    def as_dict(self) -> Dict:
        return {
            "value": self.value.as_dict(),
            "modulus": [b.as_dict() for b in self.modulus],
            "opaque": list(self.opaque),
        }
