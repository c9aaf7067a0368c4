"""Skew-hermitian forms over a quaternion algebra with its canonical involution.

A form is kept diagonal, h = ⟨p₁, …, p_r⟩ with invertible pure quaternions p_l, so
that h(x, y) = Σ x̄_l p_l y_l. Isotropy questions are answered place by place, either
by the local classification at ramified places or through the Morita transfer to a
quadratic form over a quadratic subfield F(q) ⊂ Q.
"""
import dataclasses
import logging
from typing import Dict, List, Optional, Sequence, Tuple

from .cohomology import (BrauerClass2, BrauerModClass, H3Class, ModClass, corestriction,
                         cup, mod_equal)
from .config import get_budget
from .errors import (CliffordObstruction, DecompositionFailed, FieldMismatch,
                     InternalInconsistency, NotSplittingField, PreconditionFailed,
                     SchemaError, SearchExhausted, UnsupportedField, ZeroElement)
from .fields import (Element, Field, Place, QuadExtension, QuadNumber, QuadNumberField,
                     Rationals, SquareClass, squarefree_part)
from .qforms import (QuadraticForm, clifford_symbols, e1 as form_e1, isotropic,
                     isotropic_vector, local_witt_index, signature)
from .quaternions import (Quaternion, QuaternionAlgebra, anticommuting, conjugator,
                          normalized_square, parse_pure)

logger = logging.getLogger(__name__)

Vector = List[Quaternion]


@dataclasses.dataclass(frozen=True)
class SkewHermitianForm:
    algebra: QuaternionAlgebra
    diag: Tuple[Quaternion, ...]
    # (λ, g) when the form was built as ⟨1, −λ⟩·g
    factors: Optional[Tuple[Element, "SkewHermitianForm"]] = dataclasses.field(
        default=None, compare=False)

    def __post_init__(self):
        diag = tuple(self.diag)
        for p in diag:
            if p.algebra != self.algebra:
                raise FieldMismatch("entries live in a different quaternion algebra")
            if not p.is_pure():
                raise PreconditionFailed(f"entry {p} is not a pure quaternion")
            if not p.nrd():
                raise ZeroElement(f"entry {p} is not invertible")
        object.__setattr__(self, "diag", diag)

    @classmethod
    def parse(cls, field: Field, data: Dict) -> "SkewHermitianForm":
        if not isinstance(data, dict) or "quat" not in data:
            raise SchemaError("skew-hermitian form needs a quaternion algebra", "/quat")
        algebra = QuaternionAlgebra.parse(field, data["quat"])
        entries = data.get("diag")
        if not isinstance(entries, list):
            raise SchemaError("diag must be a list of coordinate triples", "/diag")
        return cls(algebra, tuple(parse_pure(algebra, c, f"/diag/{n}") for n, c in enumerate(entries)))

    @property
    def field(self) -> Field:
        return self.algebra.field

    @property
    def rank(self) -> int:
        return len(self.diag)

    @property
    def absolute_rank(self) -> int:
        return 2 * len(self.diag)

    def perp(self, other: "SkewHermitianForm") -> "SkewHermitianForm":
        if other.algebra != self.algebra:
            raise FieldMismatch("forms over different quaternion algebras")
        return SkewHermitianForm(self.algebra, self.diag + other.diag)

    def scaled(self, c) -> "SkewHermitianForm":
        c = self.field.coerce(c)
        return SkewHermitianForm(self.algebra, tuple(p * c for p in self.diag))

    def __neg__(self) -> "SkewHermitianForm":
        return self.scaled(-1)

    def without(self, index: int) -> "SkewHermitianForm":
        return SkewHermitianForm(self.algebra, self.diag[:index] + self.diag[index + 1:])

    def value(self, x: Sequence[Quaternion], y: Sequence[Quaternion]) -> Quaternion:
        out = self.algebra.scalar(0)
        for xl, p, yl in zip(x, self.diag, y):
            out = out + xl.conj() * p * yl
        return out

    def e1(self) -> SquareClass:
        F = self.field
        value = F.one
        for p in self.diag:
            value = value * p.square()
        return F.square_class(value)

    def as_dict(self) -> Dict:
        return {"quat": self.algebra.descriptor(), "diag": [p.format() for p in self.diag]}

    def __str__(self):
        return "⟨" + ", ".join(str(p) for p in self.diag) + "⟩"


def binary_multiple(lam, g: SkewHermitianForm) -> SkewHermitianForm:
    """⟨1, −λ⟩·g, remembering the factorisation."""
    lam = g.field.coerce(lam)
    if not lam:
        raise ZeroElement("λ must be nonzero")
    diag = g.diag + tuple(p * (-lam) for p in g.diag)
    return SkewHermitianForm(g.algebra, diag, factors=(lam, g))


def _require_rationals(h: SkewHermitianForm, operation: str):
    if not isinstance(h.field, Rationals):
        raise UnsupportedField(f"{operation} is implemented over ℚ only, got {h.field}")


# ---------------------------------------------------------------- Morita transfer

@dataclasses.dataclass(frozen=True)
class MoritaFrame:
    """Q = K ⊕ K·w for K = F(q), q² = d squarefree and w anticommuting with q."""

    q: Quaternion
    w: Quaternion
    d: int

    @classmethod
    def build(cls, q: Quaternion) -> "MoritaFrame":
        if not isinstance(q.algebra.field, Rationals):
            raise UnsupportedField("Morita transfer is implemented over ℚ only")
        if not q.is_pure() or not q.nrd():
            raise PreconditionFailed(f"{q} is not an invertible pure quaternion")
        d, c = normalized_square(q)
        if d == 1:
            raise NotSplittingField(f"{q}² is a square, F({q}) is not a field")
        qn = q * (1 / c)
        return cls(qn, anticommuting(qn), d)

    @property
    def field(self) -> QuadNumberField:
        return QuadNumberField(self.d)

    @property
    def extension(self) -> QuadExtension:
        return QuadExtension(Rationals(), self.d)

    @property
    def b(self) -> Element:
        return self.w.square()

    def entry(self, p: Quaternion) -> Tuple[QuadNumber, Element]:
        """(η, x) with p = x·q + η·w, η ∈ K."""
        q, w = self.q, self.w
        k = q * w
        x = (p * q + q * p).w / (2 * self.d)
        y = (p * w + w * p).w / (2 * self.b)
        z = (p * k + k * p).w / (2 * k.square())
        return QuadNumber(y, z, self.d), x

    def embed(self, u: QuadNumber) -> Quaternion:
        u = self.field.coerce(u)
        return self.q.algebra.scalar(u.x0) + self.q * u.x1


def morita_transfer(h: SkewHermitianForm, q: Quaternion) -> QuadraticForm:
    """The 2r-dimensional form over K = F(q) whose adjoint is (Ad_h)_K."""
    frame = MoritaFrame.build(q)
    return _transfer(h, frame)


def _transfer(h: SkewHermitianForm, frame: MoritaFrame) -> QuadraticForm:
    K = frame.field
    entries = []
    for p in h.diag:
        eta, _ = frame.entry(p)
        if not eta:
            entries.extend([K.one, -K.one])
        else:
            entries.extend([eta, K.coerce(-p.square()) / eta])
    return QuadraticForm(K, tuple(entries))


def _lift(h: SkewHermitianForm, frame: MoritaFrame, vec: Sequence[QuadNumber]) -> Vector:
    """Map a vector of the (diagonal) Morita form back to Q^r."""
    K = frame.field
    out = []
    for n, p in enumerate(h.diag):
        eta, x = frame.entry(p)
        c1, c2 = K.coerce(vec[2 * n]), K.coerce(vec[2 * n + 1])
        u = c1 - c2 * K.generator * x / eta
        out.append(frame.embed(u.conj()) + frame.embed(c2) * frame.w)
    return out


# ---------------------------------------------------------------- local-global isotropy

def _bad_places(h: SkewHermitianForm) -> List[Place]:
    F = h.field
    elements = [h.algebra.a, h.algebra.b]
    for p in h.diag:
        elements.append(p.square())
        elements.extend(c for c in p.coordinates() if c)
    return F.bad_places(elements)


def _split_frame(h: SkewHermitianForm, v: Place) -> MoritaFrame:
    """A frame F(u) ⊂ Q in which the place v splits."""
    F = h.field
    height = get_budget().height
    for u in h.algebra.pure_quaternions(height):
        s = u.square()
        if s and not F.is_square(s) and F.is_local_square(s, v):
            return MoritaFrame.build(u)
    raise SearchExhausted(f"no pure quaternion splits the place {v}", height, "split_frame")


def _ramified_index(r: int, disc_is_square: bool) -> int:
    index = 0
    while r >= 4 or (r == 3 and not disc_is_square) or (r == 2 and disc_is_square):
        index += 1
        r -= 2
    return index


def local_witt_index_h(h: SkewHermitianForm, v: Place) -> int:
    _require_rationals(h, "local Witt index")
    F = h.field
    r = h.rank
    if h.algebra.brauer_class.local_invariant(v) == -1:
        if v.is_real:
            return r // 2
        return _ramified_index(r, F.is_local_square(h.e1().rep, v))
    frame = _split_frame(h, v)
    K = frame.field
    w = K.infinite_places()[0] if v.is_real else K.places_above(v.p)[0]
    return local_witt_index(_transfer(h, frame), w) // 2


def witt_index_h(h: SkewHermitianForm) -> int:
    _require_rationals(h, "Witt index")
    if h.rank < 2:
        return 0
    index = min(local_witt_index_h(h, v) for v in _bad_places(h))
    if h.rank % 2 == 0 and not h.e1().is_trivial():
        index = min(index, h.rank // 2 - 1)
    return index


def isotropic_h(h: SkewHermitianForm) -> bool:
    return witt_index_h(h) >= 1


def hyperbolic_h(h: SkewHermitianForm) -> bool:
    _require_rationals(h, "hyperbolicity")
    if h.rank % 2:
        return False
    return h.rank == 0 or witt_index_h(h) == h.rank // 2


def isometric_h(h1: SkewHermitianForm, h2: SkewHermitianForm) -> bool:
    """Witt cancellation: h₁ ≅ h₂ iff h₁ ⊥ −h₂ is hyperbolic."""
    if h1.algebra != h2.algebra:
        raise FieldMismatch("forms over different quaternion algebras")
    if h1.rank != h2.rank:
        return False
    return hyperbolic_h(h1.perp(-h2))


# ---------------------------------------------------------------- representation

def _pool(Q: QuaternionAlgebra) -> List[Quaternion]:
    return [Q.scalar(1), Q.i, Q.j, Q.k, Q.i + Q.j, Q.i + Q.k, Q.j + Q.k]


def diagonalize_h(Q: QuaternionAlgebra, gram: Sequence[Sequence[Quaternion]]) -> SkewHermitianForm:
    """Diagonalise a nondegenerate skew-hermitian Gram matrix."""
    G = [list(row) for row in gram]
    out = []
    while G:
        n = len(G)
        pivot = next((i for i in range(n) if G[i][i].nrd()), None)
        if pivot is None:
            pivot = _make_pivot(Q, G)
        a = G[pivot][pivot]
        if not a.is_pure():
            raise InternalInconsistency(f"diagonal entry {a} of a skew-hermitian matrix is not pure")
        out.append(a)
        inv = a.inverse()
        rest = [i for i in range(n) if i != pivot]
        G = [[G[k][l] - G[k][pivot] * inv * G[pivot][l] for l in rest] for k in rest]
    return SkewHermitianForm(Q, tuple(out))


def _make_pivot(Q: QuaternionAlgebra, G: List[List[Quaternion]]) -> int:
    """Replace some basis vector y_i by y_i + y_j·α so that its value is invertible."""
    n = len(G)
    for i in range(n):
        for j in range(n):
            if i == j or not G[i][j]:
                continue
            for alpha in _pool(Q):
                value = (G[i][i] + alpha.conj() * G[j][i] + G[i][j] * alpha
                         + alpha.conj() * G[j][j] * alpha)
                if not value.nrd():
                    continue
                G[i] = [G[i][l] + alpha.conj() * G[j][l] for l in range(n)]
                for row in G:
                    row[i] = row[i] + row[j] * alpha
                return i
    raise PreconditionFailed("skew-hermitian Gram matrix is degenerate")


def _unit(Q: QuaternionAlgebra, r: int, l: int) -> Vector:
    return [Q.scalar(1) if i == l else Q.scalar(0) for i in range(r)]


def _split_off(h: SkewHermitianForm, x: Vector) -> SkewHermitianForm:
    """The orthogonal complement of x, for h(x, x) invertible."""
    Q, r = h.algebra, h.rank
    hxx_inv = h.value(x, x).inverse()
    m = next(i for i in range(r) if x[i].nrd())
    basis = []
    for l in range(r):
        if l == m:
            continue
        c = hxx_inv * (x[l].conj() * h.diag[l])
        e = _unit(Q, r, l)
        basis.append([e[i] - x[i] * c for i in range(r)])
    if not basis:
        return SkewHermitianForm(Q, ())
    gram = [[h.value(y, z) for z in basis] for y in basis]
    return diagonalize_h(Q, gram)


def _represent_on_hyperbolic(h: SkewHermitianForm, v: Vector, q: Quaternion) -> Vector:
    """Given h(v, v) = 0, a vector x with h(x, x) = q."""
    Q, r = h.algebra, h.rank
    l = next(i for i in range(r) if v[i].nrd())
    w = [Q.scalar(0)] * r
    w[l] = (v[l].conj() * h.diag[l]).inverse()
    alpha = (h.value(w, w) - q) * (Q.field.one / 2)
    return [vi * alpha + wi for vi, wi in zip(v, w)]


def represent_multiple(h: SkewHermitianForm, q: Quaternion
                       ) -> Optional[Tuple[Element, SkewHermitianForm]]:
    """
    Split off a multiple of q.

    Args:
        h (SkewHermitianForm): the form.
        q (Quaternion): an invertible pure quaternion.

    Returns:
        Optional[Tuple[Element, SkewHermitianForm]]: (λ, rest) with h ≅ ⟨λq⟩ ⊥ rest, or
        None when h does not represent any multiple of q (h over F(q) is anisotropic).
    """
    if not q.is_pure() or not q.nrd():
        raise PreconditionFailed(f"{q} is not an invertible pure quaternion")
    for n, p in enumerate(h.diag):
        mu = p.proportional_to(q)
        if mu is not None:
            return mu, h.without(n)
    _require_rationals(h, "representation of multiples")
    frame = MoritaFrame.build(q)
    form = _transfer(h, frame)
    if not isotropic(form):
        logger.debug("%s is anisotropic over F(%s)", h, q)
        return None
    x = _lift(h, frame, isotropic_vector(form))
    value = h.value(x, x)
    if not value:
        x = _represent_on_hyperbolic(h, x, q)
        value = h.value(x, x)
    lam = (value * q).w / q.square()
    if value != q * lam:
        raise InternalInconsistency(f"h(x, x) = {value} is not a multiple of {q}")
    rest = _split_off(h, x)
    expected = h.e1() * h.field.square_class(q.square())
    if rest.e1() != expected:
        raise InternalInconsistency("discriminant of the complement does not match")
    logger.debug("%s represents %s·%s", h, lam, q)
    return lam, rest


# ---------------------------------------------------------------- rank-2 blocks

@dataclasses.dataclass(frozen=True)
class RankTwoBlock:
    """⟨q⟩⟨1, −λ⟩ = ⟨q, −λq⟩."""

    q: Quaternion
    lam: Element

    @property
    def form(self) -> SkewHermitianForm:
        return SkewHermitianForm(self.q.algebra, (self.q, self.q * (-self.lam)))

    @property
    def slot(self) -> Element:
        return self.q.square()

    def clifford(self) -> BrauerClass2:
        return BrauerClass2.symbol(self.q.algebra.field, self.slot, self.lam)


def pair_block(p1: Quaternion, p2: Quaternion) -> RankTwoBlock:
    """Write ⟨p1, p2⟩ of trivial discriminant as ⟨p1⟩⟨1, −λ⟩."""
    mu = p2.proportional_to(p1)
    if mu is not None:
        return RankTwoBlock(p1, -mu)
    F = p1.algebra.field
    kappa = F.sqrt(p2.square() / p1.square())
    if kappa is None:
        raise PreconditionFailed(f"⟨{p1}, {p2}⟩ has nontrivial discriminant")
    c = conjugator(p1 * kappa, p2)
    lam = -c.nrd() * kappa
    if c.conj() * p2 * c != p1 * (-lam):
        raise InternalInconsistency(f"conjugator {c} does not carry {p2} to a multiple of {p1}")
    return RankTwoBlock(p1, lam)


def _chain_blocks(g: SkewHermitianForm) -> List[RankTwoBlock]:
    blocks = []
    while g.rank:
        if g.rank == 2:
            blocks.append(pair_block(*g.diag))
            break
        for n, q in enumerate(g.diag):
            try:
                found = represent_multiple(g.without(n), q)
            except UnsupportedField:
                found = None
            if found is not None:
                lam, rest = found
                blocks.append(RankTwoBlock(q, -lam))
                g = rest
                break
        else:
            raise DecompositionFailed(f"no entry of {g} splits off a rank-2 block",
                                      g.rank, "rank_two_blocks")
    return blocks


def rank_two_blocks(h: SkewHermitianForm) -> List[RankTwoBlock]:
    """h ≅ ⊥ ⟨q_i⟩⟨1, −λ_i⟩ for h of even rank and trivial discriminant."""
    if h.rank % 2 or not h.e1().is_trivial():
        raise PreconditionFailed("rank-2 blocks need even rank and trivial discriminant")
    F = h.field
    entries = list(h.diag)
    blocks = []
    while entries:
        p = entries[0]
        partner = next((j for j in range(1, len(entries))
                        if F.is_square(p.square() * entries[j].square())), None)
        if partner is None:
            break
        blocks.append(pair_block(p, entries[partner]))
        del entries[partner]
        del entries[0]
    if entries:
        blocks.extend(_chain_blocks(SkewHermitianForm(h.algebra, tuple(entries))))
    return blocks


def role_fixed_blocks(blocks: List[RankTwoBlock]) -> List[RankTwoBlock]:
    """Blocks whose Clifford contributions sum to 0 rather than [Q]."""
    if not blocks:
        return blocks
    Q = blocks[0].q.algebra
    total = BrauerClass2.zero(Q.field)
    for block in blocks:
        total = total + block.clifford()
    if total.is_zero():
        return blocks
    if (total + Q.brauer_class).is_zero():
        first = blocks[0]
        b = anticommuting(first.q).square()
        return [RankTwoBlock(first.q, first.lam * b)] + blocks[1:]
    raise PreconditionFailed("the Clifford invariant of h is not trivial")


# ---------------------------------------------------------------- invariants

def _label(h: SkewHermitianForm, name: str) -> str:
    return f"{name}{h}"


def clifford_invariant(h: SkewHermitianForm) -> BrauerModClass:
    """e₂(h) modulo [Q], for h of trivial discriminant."""
    if not h.e1().is_trivial():
        raise PreconditionFailed("e₂ needs a trivial discriminant")
    Q = h.algebra
    if h.rank % 2:
        return BrauerModClass(BrauerClass2.zero(h.field), (Q.brauer_class,), (_label(h, "e2"),))
    value = BrauerClass2.zero(h.field)
    for block in rank_two_blocks(h):
        value = value + block.clifford()
    return BrauerModClass(value, (Q.brauer_class,))


def f3_sum(blocks: Sequence[Tuple[Element, SkewHermitianForm]]) -> H3Class:
    """f₃ of ⊥ ⟨1, −λ_i⟩h_i, i.e. λ₁^{r₁}⋯λ_m^{r_m}·[D]; needs Σ λ_i·e₁(h_i) = 0."""
    if not blocks:
        raise PreconditionFailed("f3_sum needs at least one block")
    Q = blocks[0][1].algebra
    F = Q.field
    check = BrauerClass2.zero(F)
    product = F.one
    for lam, g in blocks:
        if g.algebra != Q:
            raise FieldMismatch("blocks over different quaternion algebras")
        lam = F.coerce(lam)
        check = check + BrauerClass2.symbol(F, lam, g.e1().rep)
        if g.rank % 2:
            product = product * lam
    if not check.is_zero():
        raise CliffordObstruction("Σ λ_i·e₁(h_i) is not zero")
    if F.is_square(product):
        return H3Class.zero(F)
    return cup(product, Q.brauer_class)


def f3_h(h: SkewHermitianForm) -> H3Class:
    """f₃(h) for h of even rank with trivial e₁ and e₂."""
    blocks = role_fixed_blocks(rank_two_blocks(h))
    Q = h.algebra
    return f3_sum([(b.lam, SkewHermitianForm(Q, (b.q,))) for b in blocks])


def _e3_by_signature(h: SkewHermitianForm) -> ModClass:
    Q = h.algebra
    F = h.field
    modulus = (Q.brauer_class,)
    real = F.infinite_places()[0]
    if Q.brauer_class.local_invariant(real) == -1:
        return ModClass(H3Class.zero(F), modulus)
    frame = _split_frame(h, real)
    form = _transfer(h, frame)
    sigma = signature(form, frame.field.infinite_places()[0])
    if sigma % 8:
        logger.warning("Morita signature %d of %s is not a multiple of 8", sigma, h)
    if (sigma // 8) % 2:
        return ModClass(H3Class.symbol(F, -1, -1, -1), modulus)
    return ModClass(H3Class.zero(F), modulus)


def e3_h(h: SkewHermitianForm) -> ModClass:
    """e₃(h) modulo F^×·[Q]; opaque when no presentation is computable."""
    Q = h.algebra
    if h.rank % 2 or not h.e1().is_trivial():
        raise PreconditionFailed("e₃ needs even rank and trivial discriminant")
    e2 = clifford_invariant(h)
    if not e2.is_zero():
        raise PreconditionFailed("e₃ needs a trivial Clifford invariant")
    if h.factors is not None:
        lam, g = h.factors
        if g.e1().is_trivial():
            return e3_rank2_factor(g, lam=lam)[0]
    if isinstance(h.field, Rationals):
        return _e3_by_signature(h)
    return ModClass(H3Class.zero(h.field), (Q.brauer_class,), (_label(h, "e3"),))


def frame_for(Q: QuaternionAlgebra, delta) -> MoritaFrame:
    """A Morita frame F(u) ⊂ Q with u² in the square class of δ (over ℚ)."""
    F = Q.field
    target = squarefree_part(delta)
    height = get_budget().height
    for u in Q.pure_quaternions(height):
        s = u.square()
        if s and squarefree_part(s) == target:
            return MoritaFrame.build(u)
    raise SearchExhausted(f"no pure quaternion squares to {F.format(delta)}", height,
                          "discriminant_frame")


def e3_rank2_factor(h: SkewHermitianForm, lam=None, mu=None) -> Tuple[ModClass, H3Class]:
    """
    e₃ and f₃ of ⟨1, −λ⟩h (trivial discriminant) or ⟨1, −N(μ)⟩h (μ in the
    discriminant extension K of h).

    Returns:
        Tuple[ModClass, H3Class]: e₃ modulo F^×·[Q] and the companion f₃.
    """
    Q = h.algebra
    F = h.field
    modulus = (Q.brauer_class,)
    if (lam is None) == (mu is None):
        raise PreconditionFailed("pass exactly one of λ and μ")
    if lam is not None:
        lam = F.coerce(lam)
        if not lam:
            raise ZeroElement("λ must be nonzero")
        if not h.e1().is_trivial():
            raise PreconditionFailed("the λ formula needs a trivial discriminant")
        e2 = clifford_invariant(h)
        if e2.opaque:
            value = ModClass(H3Class.zero(F), modulus, (f"{F.format(lam)}·{e2.opaque[0]}",))
        else:
            value = ModClass(cup(lam, e2.value), modulus)
        f3 = H3Class.zero(F) if h.rank % 2 == 0 else cup(lam, Q.brauer_class)
        return value, f3
    _require_rationals(h, "the corestriction formula")
    delta = h.e1().rep
    if F.is_square(delta):
        raise PreconditionFailed("the μ formula needs a nontrivial discriminant")
    if not Q.brauer_class.is_split_by(delta):
        raise NotSplittingField(f"F(√{F.format(delta)}) does not split {Q}")
    frame = frame_for(Q, delta)
    K = frame.extension
    mu = K.field.coerce(mu)
    if not mu:
        raise ZeroElement("μ must be nonzero")
    form = _transfer(h, frame)
    if not form_e1(form).is_trivial():
        raise InternalInconsistency("Morita form over the discriminant field has nontrivial e₁")
    total = H3Class.zero(F)
    for x, y in clifford_symbols(form):
        total = total + corestriction(K, mu, x, y)
    f3 = H3Class.zero(F) if h.rank % 2 == 0 else cup(mu.norm(), Q.brauer_class)
    return ModClass(total, modulus), f3


def e3_additive(h1: SkewHermitianForm, h2: SkewHermitianForm) -> ModClass:
    """e₃(h₁ ⊥ h₂) = e₃(h₁) + e₃(h₂)."""
    if h1.algebra != h2.algebra:
        raise FieldMismatch("forms over different quaternion algebras")
    return e3_h(h1) + e3_h(h2)


def e3_relative(h1: SkewHermitianForm, h2: SkewHermitianForm, lam=None) -> ModClass:
    """
    Relative invariants.

    Without λ: e₃(h₁) − e₃(h₂). With λ: the invariant of h₁ ⊥ ⟨λ⟩h₂ relative to
    h₁ ⊥ h₂, which is λ·e₂(h₂).
    """
    if h1.algebra != h2.algebra:
        raise FieldMismatch("forms over different quaternion algebras")
    if lam is None:
        if h1 == h2:
            return ModClass(H3Class.zero(h1.field), (h1.algebra.brauer_class,))
        return e3_h(h1) + e3_h(h2)
    return e3_rank2_factor(h2, lam=lam)[0]


@dataclasses.dataclass(frozen=True)
class HermInvariantReport:
    e1: SquareClass
    e2: Optional[BrauerModClass] = None
    e3: Optional[ModClass] = None
    f3: Optional[H3Class] = None
    flags: Dict[str, Optional[bool]] = dataclasses.field(default_factory=dict)

    def as_dict(self) -> Dict:
        return {
            "e1": str(self.e1),
            "e2": self.e2.as_dict() if self.e2 else None,
            "e3": self.e3.as_dict() if self.e3 else None,
            "f3": self.f3.as_dict() if self.f3 else None,
            "flags": dict(self.flags),
        }


def herm_invariants(h: SkewHermitianForm) -> HermInvariantReport:
    e1 = h.e1()
    flags: Dict[str, Optional[bool]] = {"even_relative_rank": h.rank % 2 == 0,
                                        "e1_trivial": e1.is_trivial()}
    if not flags["e1_trivial"]:
        return HermInvariantReport(e1, flags=flags)
    e2 = clifford_invariant(h)
    flags["e2_trivial"] = e2.is_zero()
    if not (flags["even_relative_rank"] and flags["e2_trivial"]):
        return HermInvariantReport(e1, e2, flags=flags)
    e3 = e3_h(h)
    f3 = f3_h(h)
    zero = ModClass(H3Class.zero(h.field), e3.modulus)
    verdict = mod_equal(e3, zero)
    flags["e3_trivial"] = None if verdict.status == "Unknown" else bool(verdict)
    flags["f3_trivial"] = f3.is_zero()
    return HermInvariantReport(e1, e2, e3, f3, flags)
