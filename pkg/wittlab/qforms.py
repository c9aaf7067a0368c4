"""Diagonal quadratic forms and the Witt-ring machinery built on them."""
import dataclasses
import itertools
import logging
from typing import Iterable, Iterator, List, Optional, Sequence, Tuple

from .config import get_budget
from .errors import (InternalInconsistency, NotInFundamentalIdealPower, PreconditionFailed,
                     SearchExhausted, UnsupportedField, ZeroElement, ZeroSlot)
from .fields import (Element, Field, NumberField, Place, QuadExtension,
                     QuadNumberField, RationalFunctionField, Rationals,
                     SquareClass)

logger = logging.getLogger(__name__)


@dataclasses.dataclass(frozen=True)
class QuadraticForm:
    field: Field
    diag: Tuple[Element, ...]

    def __post_init__(self):
        entries = tuple(self.field.coerce(x) for x in self.diag)
        if any(not x for x in entries):
            raise ZeroElement("quadratic form entries must be nonzero")
        object.__setattr__(self, "diag", entries)

    @classmethod
    def parse(cls, field: Field, entries: Sequence) -> "QuadraticForm":
        return cls(field, tuple(field.parse(x) for x in entries))

    @property
    def dim(self) -> int:
        return len(self.diag)

    def perp(self, other: "QuadraticForm") -> "QuadraticForm":
        return QuadraticForm(self.field, self.diag + other.diag)

    def scaled(self, c) -> "QuadraticForm":
        c = self.field.coerce(c)
        return QuadraticForm(self.field, tuple(c * x for x in self.diag))

    def __neg__(self) -> "QuadraticForm":
        return self.scaled(-1)

    def tensor(self, other: "QuadraticForm") -> "QuadraticForm":
        return QuadraticForm(self.field, tuple(x * y for x in self.diag for y in other.diag))

    def determinant(self) -> Element:
        out = self.field.one
        for x in self.diag:
            out = out * x
        return out

    def signed_determinant(self) -> Element:
        d = self.determinant()
        return -d if (self.dim * (self.dim - 1) // 2) % 2 else d

    def value(self, vector: Sequence) -> Element:
        out = self.field.zero
        for a, x in zip(self.diag, vector):
            out = out + a * x * x
        return out

    def format(self) -> List[str]:
        return [self.field.format(x) for x in self.diag]

    def __str__(self):
        return "<" + ", ".join(self.format()) + ">"


@dataclasses.dataclass(frozen=True)
class PfisterForm:
    field: Field
    slots: Tuple[Element, ...]

    def __post_init__(self):
        slots = tuple(self.field.coerce(a) for a in self.slots)
        if any(not a for a in slots):
            raise ZeroSlot("Pfister slots must be nonzero")
        object.__setattr__(self, "slots", slots)

    @property
    def expansion(self) -> QuadraticForm:
        form = QuadraticForm(self.field, (self.field.one,))
        for a in self.slots:
            form = form.tensor(QuadraticForm(self.field, (self.field.one, -a)))
        return form

    @property
    def fold(self) -> int:
        return len(self.slots)

    def __str__(self):
        return "<<" + ", ".join(self.field.format(a) for a in self.slots) + ">>"


@dataclasses.dataclass(frozen=True)
class WittClass:
    field: Field
    kernel: QuadraticForm
    dim: int

    @property
    def index(self) -> int:
        return (self.dim - self.kernel.dim) // 2

    def is_zero(self) -> bool:
        return self.kernel.dim == 0


def pfister(field: Field, slots: Sequence) -> PfisterForm:
    return PfisterForm(field, tuple(slots))


def hyperbolic(field: Field, planes: int) -> QuadraticForm:
    return QuadraticForm(field, (field.one, -field.one) * planes)


def albert_form(field: Field, a, b, c, d) -> QuadraticForm:
    """The Albert form ⟨a, b, −ab, −c, −d, cd⟩ of (a,b) ⊗ (c,d)."""
    a, b, c, d = (field.coerce(x) for x in (a, b, c, d))
    return QuadraticForm(field, (a, b, -a * b, -c, -d, c * d))


# ---------------------------------------------------------------- local data

def _require_number_field(q: QuadraticForm) -> NumberField:
    if not q.field.is_number_field:
        raise UnsupportedField(f"operation needs ℚ or ℚ(√d), got {q.field}")
    return q.field


def hasse_invariant(q: QuadraticForm, v: Place) -> int:
    """∏_{i<j} (a_i, a_j)_v, computed incrementally."""
    F = _require_number_field(q)
    sign, prefix = 1, None
    for a in q.diag:
        if prefix is not None:
            sign *= F.hilbert_symbol(prefix, a, v)
            prefix = prefix * a
        else:
            prefix = a
    return sign


def signature(q: QuadraticForm, v: Place) -> int:
    F = _require_number_field(q)
    if not v.is_real:
        raise PreconditionFailed(f"place {v} is not real")
    return sum(F.real_sign(a, v) for a in q.diag)


def signatures(q: QuadraticForm) -> List[Tuple[Place, int]]:
    F = _require_number_field(q)
    return [(v, signature(q, v)) for v in F.real_places()]


def _isotropic_by_invariants(F: NumberField, n: int, d, eps: int, v: Place) -> bool:
    if n <= 1:
        return False
    if n == 2:
        return F.is_local_square(-d, v)
    if n == 3:
        return eps == F.hilbert_symbol(-1, -d, v)
    if n == 4:
        return not F.is_local_square(d, v) or eps == F.hilbert_symbol(-1, -1, v)
    return True


def local_witt_index(q: QuadraticForm, v: Place) -> int:
    F = _require_number_field(q)
    n = q.dim
    if v.kind == "complex":
        return n // 2
    if v.is_real:
        pos = sum(1 for a in q.diag if F.real_sign(a, v) > 0)
        return min(pos, n - pos)
    d, eps, index = q.determinant(), hasse_invariant(q, v), 0
    while _isotropic_by_invariants(F, n, d, eps, v):
        index += 1
        d = -d
        eps *= F.hilbert_symbol(-1, d, v)
        n -= 2
    return index


def witt_index(q: QuadraticForm) -> int:
    """Minimum of the local Witt indices, capped when the signed discriminant is global."""
    F = _require_number_field(q)
    if q.dim < 2:
        return 0
    index = min(local_witt_index(q, v) for v in F.bad_places(q.diag))
    if q.dim % 2 == 0 and not F.is_square(q.signed_determinant()):
        index = min(index, q.dim // 2 - 1)
    return index


def isotropic(q: QuadraticForm) -> bool:
    return witt_index(q) >= 1


# ---------------------------------------------------------------- linear algebra

def diagonalize(field: Field, gram: Sequence[Sequence]) -> QuadraticForm:
    """Diagonalize a nondegenerate symmetric Gram matrix by congruence."""
    g = [[field.coerce(x) for x in row] for row in gram]
    out = []
    while g:
        n = len(g)
        piv = next((i for i in range(n) if g[i][i]), None)
        if piv is None:
            pair = next(((i, j) for i in range(n) for j in range(i + 1, n) if g[i][j]), None)
            if pair is None:
                raise PreconditionFailed("degenerate Gram matrix")
            i, j = pair
            g[i] = [x + y for x, y in zip(g[i], g[j])]
            for row in g:
                row[i] = row[i] + row[j]
            piv = i
        a = g[piv][piv]
        out.append(a)
        rest = [k for k in range(n) if k != piv]
        g = [[g[k][l] - g[k][piv] * g[piv][l] / a for l in rest] for k in rest]
    return QuadraticForm(field, tuple(out))


def _bilinear(gram, x, y):
    out = x[0] * 0
    for i, xi in enumerate(x):
        if not xi:
            continue
        for j, yj in enumerate(y):
            if yj and gram[i][j]:
                out = out + xi * gram[i][j] * yj
    return out


def split_hyperbolic_plane(field: Field, gram: Sequence[Sequence], v: Sequence) -> List[List]:
    """Split off the hyperbolic plane through the isotropic vector v; return the complement Gram."""
    n = len(gram)
    gram = [[field.coerce(x) for x in row] for row in gram]
    v = [field.coerce(x) for x in v]
    unit = [[field.one if j == i else field.zero for j in range(n)] for i in range(n)]
    bv = [_bilinear(gram, v, e) for e in unit]
    k = next(i for i in range(n) if bv[i])
    w0 = [field.zero] * n
    w0[k] = 1 / bv[k]
    half = _bilinear(gram, w0, w0) / 2
    w = [w0[i] - half * v[i] for i in range(n)]
    bw = [_bilinear(gram, w, e) for e in unit]
    pivots = next((k, l) for k in range(n) for l in range(n)
                  if k != l and v[k] * w[l] - v[l] * w[k])
    basis = []
    for j in range(n):
        if j in pivots:
            continue
        x = [field.zero] * n
        x[j] = field.one
        x = [x[i] - bw[j] * v[i] - bv[j] * w[i] for i in range(n)]
        basis.append(x)
    return [[_bilinear(gram, x, y) for y in basis] for x in basis]


def _coordinates(field: Field, height: int) -> List[Element]:
    """Scalars of height exactly ``height`` used by the vector search."""
    if isinstance(field, QuadNumberField):
        out = []
        for a in range(-height, height + 1):
            for b in range(-height, height + 1):
                if max(abs(a), abs(b)) == height:
                    out.append(field.coerce(a) + field.generator * b)
        return out
    return [field.coerce(c) for c in range(-height, height + 1) if abs(c) == height]


def _vectors(field: Field, length: int) -> Iterator[List[Element]]:
    """All vectors in order of increasing height, skipping zero."""
    if length == 0:
        yield []
        return
    by_height = [[field.zero]]
    h = 0
    while True:
        h += 1
        by_height.append(_coordinates(field, h))
        pool = [c for level in by_height for c in level]
        for vec in itertools.product(pool, repeat=length):
            if any(c in by_height[h] for c in vec):
                yield list(vec)


def _search_diagonal(q: QuadraticForm, bound: int) -> Optional[List[Element]]:
    F = q.field
    a1, rest = q.diag[0], q.diag[1:]
    for count, tail in enumerate(_vectors(F, len(rest))):
        if count >= bound:
            return None
        r = -sum((a * x * x for a, x in zip(rest, tail)), F.zero) / a1
        if not r:
            return [F.zero] + tail
        root = F.sqrt(r)
        if root is not None:
            return [root] + tail
    return None


def isotropic_vector(q: QuadraticForm, bound: Optional[int] = None) -> List[Element]:
    """An explicit isotropic vector, searched on a small isotropic subform."""
    F = _require_number_field(q)
    bound = bound or get_budget().search_bound
    if not isotropic(q):
        raise PreconditionFailed(f"{q} is anisotropic")
    for size in range(2, min(q.dim, 5) + 1):
        for idx in itertools.combinations(range(q.dim), size):
            sub = QuadraticForm(F, tuple(q.diag[i] for i in idx))
            if not isotropic(sub):
                continue
            vec = _search_diagonal(sub, bound)
            if vec is None:
                raise SearchExhausted(f"no isotropic vector of {sub} found", bound, "isotropic_vector")
            out = [F.zero] * q.dim
            for i, x in zip(idx, vec):
                out[i] = x
            logger.debug("isotropic vector of %s on entries %s", q, idx)
            return out
    raise SearchExhausted(f"no isotropic subform of {q}", bound, "isotropic_vector")


def witt_decompose(q: QuadraticForm) -> WittClass:
    F = _require_number_field(q)
    index = witt_index(q)
    current = q
    for _ in range(index):
        vec = isotropic_vector(current)
        gram = [[current.diag[i] if i == j else F.zero for j in range(current.dim)]
                for i in range(current.dim)]
        rest = split_hyperbolic_plane(F, gram, vec)
        current = diagonalize(F, rest) if rest else QuadraticForm(F, ())
    return WittClass(F, current, q.dim)


def isometric(q1: QuadraticForm, q2: QuadraticForm) -> bool:
    """Complete invariants over number fields; Witt cancellation over ℚ(t)."""
    if q1.field != q2.field or q1.dim != q2.dim:
        return False
    F = q1.field
    if not F.is_number_field:
        return witt_is_zero(q1.perp(-q2))
    if q1.dim == 0:
        return True
    if not F.is_square(q1.determinant() / q2.determinant()):
        return False
    for v in F.bad_places(q1.diag + q2.diag):
        if v.is_real and signature(q1, v) != signature(q2, v):
            return False
        if v.is_finite and hasse_invariant(q1, v) != hasse_invariant(q2, v):
            return False
    return True


# ---------------------------------------------------------------- ℚ(t)

def residue_forms(q: QuadraticForm, pi) -> Tuple[QuadraticForm, QuadraticForm]:
    """First and second residue forms of q at the monic irreducible π."""
    F = q.field
    if not isinstance(F, RationalFunctionField):
        raise UnsupportedField("residues are defined over ℚ(t)")
    k = F.residue_field(pi)
    first, second = [], []
    for a in q.diag:
        e, u = F.unit_residue(a, pi)
        (second if e % 2 else first).append(u)
    return QuadraticForm(k, tuple(first)), QuadraticForm(k, tuple(second))


def specialization(q: QuadraticForm, t0=None) -> QuadraticForm:
    F = q.field
    if t0 is None:
        t0 = F.good_point(q.diag)
    return QuadraticForm(Rationals(), tuple(F.specialize(a, t0) for a in q.diag))


def witt_is_zero(q: QuadraticForm) -> bool:
    if q.dim % 2:
        return False
    F = q.field
    if F.is_number_field:
        return witt_index(q) == q.dim // 2
    for pi in F.support(q.diag):
        if not witt_is_zero(residue_forms(q, pi)[1]):
            return False
    return witt_is_zero(specialization(q))


def witt_equal(q1: QuadraticForm, q2: QuadraticForm) -> bool:
    return witt_is_zero(q1.perp(-q2))


# ---------------------------------------------------------------- Iⁿ

def clifford_sign(q: QuadraticForm, v: Place) -> int:
    """Local value of e₂(q) (as ±1) for an even-dimensional q with trivial e₁."""
    m = q.dim // 2
    sign = hasse_invariant(q, v)
    if (m * (m - 1) // 2) % 2:
        sign *= q.field.hilbert_symbol(-1, -1, v)
    return sign


def _e1_trivial(q: QuadraticForm) -> bool:
    return q.dim == 0 or q.field.is_square(q.signed_determinant())


def _e2_trivial(q: QuadraticForm) -> bool:
    F = q.field
    if q.dim == 0:
        return True
    if F.is_number_field:
        return all(clifford_sign(q, v) == 1 for v in F.bad_places(q.diag) if v.kind != "complex")
    for pi in F.support(q.diag):
        if not _e1_trivial(residue_forms(q, pi)[1]):
            return False
    return _e2_trivial(specialization(q))


def _e3_trivial(q: QuadraticForm) -> bool:
    F = q.field
    if q.dim == 0:
        return True
    if F.is_number_field:
        return all(signature(q, v) % 16 == 0 for v in F.real_places())
    for pi in F.support(q.diag):
        if not _e2_trivial(residue_forms(q, pi)[1]):
            return False
    return _e3_trivial(specialization(q))


def e2_vanishes(q: QuadraticForm) -> bool:
    """For q ∈ I²: whether q ∈ I³."""
    return _e2_trivial(q)


def e3_vanishes(q: QuadraticForm) -> bool:
    """For q ∈ I³: whether q ∈ I⁴."""
    return _e3_trivial(q)


def ideal_layer(q: QuadraticForm, top: int = 4) -> int:
    """Largest n ≤ top with q ∈ Iⁿ (Witt class)."""
    checks = (lambda f: f.dim % 2 == 0, _e1_trivial, _e2_trivial, _e3_trivial)
    for n, check in enumerate(checks[:top]):
        if not check(q):
            return n
    return top


def in_ideal_power(q: QuadraticForm, n: int) -> bool:
    return ideal_layer(q, n) >= n


def require_ideal_power(q: QuadraticForm, n: int):
    layer = ideal_layer(q, n)
    if layer < n:
        raise NotInFundamentalIdealPower(layer + 1, f"{q} is not in I^{layer + 1}")


def e1(q: QuadraticForm) -> SquareClass:
    """Signed discriminant."""
    if q.dim == 0:
        return q.field.square_class(1)
    return q.field.square_class(q.signed_determinant())


def clifford_symbols(q: QuadraticForm) -> List[Tuple[Element, Element]]:
    """Quaternion symbols whose sum is e₂(q), for even-dimensional q with trivial e₁."""
    F = q.field
    m = q.dim // 2
    symbols = []
    prefix = None
    for a in q.diag:
        if prefix is not None:
            symbols.append((prefix, a))
            prefix = prefix * a
        else:
            prefix = a
    if (m * (m - 1) // 2) % 2:
        symbols.append((F.coerce(-1), F.coerce(-1)))
    return symbols


def e2(q: QuadraticForm):
    from .cohomology import BrauerClass2

    require_ideal_power(q, 2)
    return BrauerClass2.from_symbols(q.field, clifford_symbols(q))


def e3(q: QuadraticForm):
    from .cohomology import H3Class

    require_ideal_power(q, 3)
    return H3Class.from_form(q)


# ---------------------------------------------------------------- transfer

def scharlau_transfer(K: QuadExtension, q: QuadraticForm) -> QuadraticForm:
    """s⋆(q) for the second-coordinate functional s, diagonalising each 2×2 transfer_gram."""
    if q.field != K.field:
        raise PreconditionFailed(f"form over {q.field} is not over {K.field}")
    F = K.base
    out = QuadraticForm(F, ())
    for x in q.diag:
        plane = diagonalize(F, transfer_gram(K, x))
        if plane.determinant() != -x.norm():
            raise InternalInconsistency(f"transfer of <{x}> has determinant "
                                        f"{plane.determinant()}")
        out = out.perp(plane)
    return out


def transfer_gram(K: QuadExtension, x) -> List[List]:
    """Gram matrix of (u, v) ↦ s(x·u·v) in the basis {1, √d}: [[x₁, x₀], [x₀, d·x₁]]."""
    x = K.field.coerce(x)
    root = K.field.generator
    return [[K.s_functional(x), K.s_functional(x * root)],
            [K.s_functional(x * root), K.s_functional(x * root * root)]]


def extend_form(q: QuadraticForm, field: Field) -> QuadraticForm:
    return QuadraticForm(field, tuple(field.coerce(a) for a in q.diag))


# ---------------------------------------------------------------- dimension 12

def _sign_patterns(F: NumberField) -> List[Element]:
    if isinstance(F, QuadNumberField) and F.d > 0:
        root = F.generator
        return [F.one, -F.one, root, -root]
    return [F.one, -F.one]


def pfister_decompose_12(phi: QuadraticForm) -> List[Tuple[Element, PfisterForm]]:
    """φ ≅ ⟨α₁⟩n₁ ⊥ ⟨α₂⟩n₂ ⊥ ⟨α₃⟩n₃ for a 12-dimensional φ ∈ I³ over a number field."""
    F = _require_number_field(phi)
    if phi.dim != 12:
        raise PreconditionFailed(f"expected a 12-dimensional form, got dimension {phi.dim}")
    if not in_ideal_power(phi, 3):
        raise PreconditionFailed(f"{phi} is not in I³")
    split = pfister(F, (1, 1))
    kernel = witt_decompose(phi).kernel
    if kernel.dim == 0:
        return [(F.one, split)] * 3
    if kernel.dim != 8:
        raise PreconditionFailed(f"unexpected anisotropic kernel of dimension {kernel.dim}")
    sigs = dict(signatures(kernel))
    patterns = _sign_patterns(F)
    for alpha in patterns:
        for c in patterns:
            base = pfister(F, (-1, -1))
            candidate = pfister(F, (-1, -1, c)).expansion.scaled(alpha)
            if all(signature(candidate, v) == s for v, s in sigs.items()):
                blocks = [(alpha, base), (-alpha * c, base), (F.one, split)]
                logger.debug("12-dim decomposition with alpha=%s c=%s", alpha, c)
                return blocks
    raise SearchExhausted("no Pfister multiple matches the kernel signatures",
                          len(patterns) ** 2, "pfister_decompose_12")


def assemble_blocks(blocks: Iterable[Tuple[Element, PfisterForm]]) -> QuadraticForm:
    blocks = list(blocks)
    field = blocks[0][1].field
    out = QuadraticForm(field, ())
    for alpha, n in blocks:
        out = out.perp(n.expansion.scaled(alpha))
    return out
