"""Base fields, exact scalars, square classes, places and Hilbert symbols.

Three base fields are supported: ℚ (``Rationals``), real or imaginary
quadratic fields ℚ(√d) (``QuadNumberField``) and the rational function field
ℚ(t) (``RationalFunctionField``). Scalars are sympy ``Rational`` numbers,
``QuadNumber`` pairs x₀ + x₁√d and ``RatFunc`` quotients of polynomials in t.
"""
import dataclasses
import functools
import logging
import math
import re
from typing import Dict, Iterable, List, Optional, Tuple, Union

import sympy
from sympy import Poly, Rational, factorint, integer_nthroot
from sympy.ntheory import sqrt_mod

try:
    from sympy.functions.combinatorial.numbers import legendre_symbol
except ImportError:  # sympy < 1.13
    from sympy.ntheory import legendre_symbol
from sympy.parsing.sympy_parser import parse_expr

from .errors import (FieldMismatch, SchemaError, UnsupportedField,
                     UnsupportedPlace, UnsupportedSupport, ZeroElement)

logger = logging.getLogger(__name__)

T = sympy.Symbol("t")
SQRT = sympy.Symbol("s")

_SCALAR_RE = re.compile(r"^[0-9ts+\-*/^().\s]+$")


# ---------------------------------------------------------------- integers

def rational(x) -> Rational:
    return x if isinstance(x, Rational) else Rational(x)


def squarefree_part(x) -> int:
    """Signed squarefree integer in the square class of a nonzero rational."""
    x = rational(x)
    if x == 0:
        raise ZeroElement("zero has no square class")
    n = x.p * x.q
    out = 1
    for p, e in factorint(abs(n)).items():
        if e % 2:
            out *= p
    return out if n > 0 else -out


def rational_sqrt(x) -> Optional[Rational]:
    x = rational(x)
    if x < 0:
        return None
    rp, exact_p = integer_nthroot(int(x.p), 2)
    rq, exact_q = integer_nthroot(int(x.q), 2)
    if exact_p and exact_q:
        return Rational(rp, rq)
    return None


def prime_support(x) -> List[int]:
    x = rational(x)
    if x == 0:
        return []
    return sorted(set(factorint(abs(int(x.p)))) | set(factorint(int(x.q))))


def _vp(n: int, p: int) -> int:
    n = abs(int(n))
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def split_rational(x, p: int) -> Tuple[int, Rational]:
    """Write x = p^v·u with u a p-adic unit."""
    x = rational(x)
    v = _vp(x.p, p) - _vp(x.q, p)
    return v, x / Rational(p) ** v


def unit_mod(u, m: int) -> int:
    u = rational(u)
    return (int(u.p) * pow(int(u.q), -1, m)) % m


def _legendre(u: int, p: int) -> int:
    return int(legendre_symbol(u % p, p))


def qp_hilbert(p: int, va: int, ua: int, vb: int, ub: int) -> int:
    """Hilbert symbol over ℚ_p from valuations and unit residues (mod 8 for p = 2)."""
    if p == 2:
        ua, ub = ua % 8, ub % 8

        def eps(u):
            return ((u - 1) // 2) % 2

        def omega(u):
            return ((u * u - 1) // 8) % 2

        e = eps(ua) * eps(ub) + va * omega(ub) + vb * omega(ua)
        return -1 if e % 2 else 1
    sign = -1 if (va * vb * ((p - 1) // 2)) % 2 else 1
    return sign * _legendre(ua, p) ** (vb % 2) * _legendre(ub, p) ** (va % 2)


# ---------------------------------------------------------------- elements

@dataclasses.dataclass(frozen=True)
class QuadNumber:
    """The element x0 + x1·√d of ℚ(√d)."""

    x0: Rational
    x1: Rational
    d: int

    def __post_init__(self):
        object.__setattr__(self, "x0", rational(self.x0))
        object.__setattr__(self, "x1", rational(self.x1))

    def _lift(self, other) -> "QuadNumber":
        if isinstance(other, QuadNumber):
            if other.d != self.d:
                raise FieldMismatch(f"ℚ(√{self.d}) and ℚ(√{other.d})")
            return other
        if isinstance(other, RatFunc):
            raise FieldMismatch("cannot mix ℚ(√d) and ℚ(t) scalars")
        return QuadNumber(rational(other), 0, self.d)

    def __add__(self, other):
        o = self._lift(other)
        return QuadNumber(self.x0 + o.x0, self.x1 + o.x1, self.d)

    __radd__ = __add__

    def __neg__(self):
        return QuadNumber(-self.x0, -self.x1, self.d)

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        o = self._lift(other)
        return QuadNumber(self.x0 * o.x0 + self.d * self.x1 * o.x1,
                          self.x0 * o.x1 + self.x1 * o.x0, self.d)

    __rmul__ = __mul__

    def inverse(self) -> "QuadNumber":
        n = self.norm()
        if n == 0:
            raise ZeroDivisionError("division by zero in ℚ(√d)")
        return QuadNumber(self.x0 / n, -self.x1 / n, self.d)

    def __truediv__(self, other):
        return self * self._lift(other).inverse()

    def __rtruediv__(self, other):
        return self._lift(other) * self.inverse()

    def __pow__(self, n: int):
        base = self if n >= 0 else self.inverse()
        out = QuadNumber(1, 0, self.d)
        for _ in range(abs(n)):
            out = out * base
        return out

    def __bool__(self):
        return self.x0 != 0 or self.x1 != 0

    def conj(self) -> "QuadNumber":
        return QuadNumber(self.x0, -self.x1, self.d)

    def norm(self) -> Rational:
        return self.x0 ** 2 - self.d * self.x1 ** 2

    def trace(self) -> Rational:
        return 2 * self.x0

    def is_rational(self) -> bool:
        return self.x1 == 0

    def __str__(self):
        if self.x1 == 0:
            return str(self.x0)
        coef = "" if self.x1 == 1 else "-" if self.x1 == -1 else f"{self.x1}*"
        if self.x0 == 0:
            return f"{coef}s"
        sign = "-" if self.x1 < 0 else "+"
        coef = "" if abs(self.x1) == 1 else f"{abs(self.x1)}*"
        return f"{self.x0}{sign}{coef}s"


def _qq_poly(expr) -> Poly:
    return Poly(expr, T, domain=sympy.QQ)


@dataclasses.dataclass(frozen=True)
class RatFunc:
    """A rational function num/den in t with den monic and gcd(num, den) = 1."""

    num: Poly
    den: Poly

    @classmethod
    def make(cls, num: Poly, den: Poly) -> "RatFunc":
        if den.is_zero:
            raise ZeroDivisionError("division by zero in ℚ(t)")
        if num.is_zero:
            return cls(_qq_poly(0), _qq_poly(1))
        g = num.gcd(den)
        num, den = num.exquo(g), den.exquo(g)
        lc = den.LC()
        return cls(num.quo_ground(lc), den.quo_ground(lc))

    @classmethod
    def from_expr(cls, expr) -> "RatFunc":
        n, d = sympy.fraction(sympy.cancel(sympy.together(sympy.sympify(expr))))
        if not (n.free_symbols | d.free_symbols) <= {T}:
            raise SchemaError(f"unexpected symbols in {expr}")
        return cls.make(_qq_poly(n), _qq_poly(d))

    @classmethod
    def constant(cls, c) -> "RatFunc":
        return cls.make(_qq_poly(rational(c)), _qq_poly(1))

    def _lift(self, other) -> "RatFunc":
        if isinstance(other, RatFunc):
            return other
        if isinstance(other, QuadNumber):
            raise FieldMismatch("cannot mix ℚ(t) and ℚ(√d) scalars")
        return RatFunc.constant(other)

    def __add__(self, other):
        o = self._lift(other)
        return RatFunc.make(self.num * o.den + o.num * self.den, self.den * o.den)

    __radd__ = __add__

    def __neg__(self):
        return RatFunc(-self.num, self.den)

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        o = self._lift(other)
        return RatFunc.make(self.num * o.num, self.den * o.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._lift(other)
        if o.num.is_zero:
            raise ZeroDivisionError("division by zero in ℚ(t)")
        return RatFunc.make(self.num * o.den, self.den * o.num)

    def __rtruediv__(self, other):
        return self._lift(other) / self

    def __pow__(self, n: int):
        if n < 0:
            return RatFunc.constant(1) / (self ** (-n))
        return RatFunc.make(self.num ** n, self.den ** n)

    def __bool__(self):
        return not self.num.is_zero

    def is_constant(self) -> bool:
        return self.num.is_ground and self.den.is_ground

    def constant_value(self) -> Rational:
        return rational(self.num.LC()) / rational(self.den.LC())

    def as_expr(self):
        return self.num.as_expr() / self.den.as_expr()

    def evaluate(self, theta):
        """Value at a point of ℚ or ℚ(√d); the denominator must not vanish there."""
        den = _horner(self.den, theta)
        if not den:
            raise ZeroDivisionError(f"pole at {theta}")
        return _horner(self.num, theta) / den

    def __str__(self):
        return str(sympy.factor(self.as_expr())).replace("**", "^")


def _horner(poly: Poly, theta):
    acc = theta * 0
    for c in poly.all_coeffs():
        acc = acc * theta + rational(c)
    return acc


Element = Union[Rational, QuadNumber, RatFunc]


# ---------------------------------------------------------------- places

@dataclasses.dataclass(frozen=True, order=True)
class Place:
    """A place of ℚ or ℚ(√d): real/complex embedding or a prime above p."""

    kind: str
    p: int = 0
    index: int = 0
    splitting: str = ""

    @property
    def is_finite(self) -> bool:
        return self.kind == "finite"

    @property
    def is_real(self) -> bool:
        return self.kind == "real"

    def __str__(self):
        if self.kind == "real":
            return "inf" if not self.splitting else f"inf{self.index}"
        if self.kind == "complex":
            return "C"
        if self.splitting == "split":
            return f"{self.p}.{self.index}"
        return str(self.p)


# ---------------------------------------------------------------- fields

class Field:
    kind = ""

    def coerce(self, x) -> Element:
        raise NotImplementedError

    @property
    def zero(self) -> Element:
        return self.coerce(0)

    @property
    def one(self) -> Element:
        return self.coerce(1)

    def is_zero(self, x) -> bool:
        return not self.coerce(x)

    def sqrt(self, x) -> Optional[Element]:
        raise NotImplementedError

    def is_square(self, x) -> bool:
        if self.is_zero(x):
            raise ZeroElement("zero is not a unit")
        return self.sqrt(x) is not None

    def square_class(self, x) -> "SquareClass":
        if self.is_zero(x):
            raise ZeroElement("zero has no square class")
        return SquareClass(self, self.reduce_square_class(self.coerce(x)))

    def reduce_square_class(self, x) -> Element:
        raise NotImplementedError

    def parse(self, text) -> Element:
        if not isinstance(text, str):
            return self.coerce(text)
        if not _SCALAR_RE.match(text):
            raise SchemaError(f"cannot parse scalar {text!r}")
        try:
            expr = parse_expr(text.replace("^", "**"), local_dict={"t": T, "s": SQRT})
        except (SyntaxError, TypeError, sympy.SympifyError, ZeroDivisionError):
            raise SchemaError(f"cannot parse scalar {text!r}")
        if expr.has(sympy.zoo, sympy.nan):
            raise SchemaError(f"division by zero in {text!r}")
        return self.from_expr(expr, text)

    def from_expr(self, expr, text: str) -> Element:
        raise NotImplementedError

    def format(self, x) -> str:
        return str(self.coerce(x))

    def descriptor(self) -> Dict:
        raise NotImplementedError

    @property
    def is_number_field(self) -> bool:
        return False


class NumberField(Field):
    """Common local machinery of ℚ and ℚ(√d)."""

    @property
    def is_number_field(self) -> bool:
        return True

    def infinite_places(self) -> List[Place]:
        raise NotImplementedError

    def places_above(self, p: int) -> List[Place]:
        raise NotImplementedError

    def norm_to_q(self, x) -> Rational:
        raise NotImplementedError

    def real_places(self) -> List[Place]:
        return [v for v in self.infinite_places() if v.is_real]

    def base_primes(self) -> List[int]:
        return [2]

    def bad_places(self, elements: Iterable = ()) -> List[Place]:
        """Infinite places, dyadic places and places in the support of the elements."""
        primes = set(self.base_primes())
        for x in elements:
            primes.update(prime_support(self.norm_to_q(x)))
        out = list(self.infinite_places())
        for p in sorted(primes):
            out.extend(self.places_above(p))
        return out

    def hilbert_symbol(self, a, b, v: Place) -> int:
        a, b = self.coerce(a), self.coerce(b)
        if not a or not b:
            raise ZeroElement("Hilbert symbol of zero")
        return _hilbert_cached(self, a, b, v)

    def _hilbert(self, a, b, v: Place) -> int:
        raise NotImplementedError

    def is_local_square(self, x, v: Place) -> bool:
        raise NotImplementedError

    def real_sign(self, x, v: Place) -> int:
        raise NotImplementedError


@functools.lru_cache(maxsize=200_000)
def _hilbert_cached(field: NumberField, a, b, v: Place) -> int:
    return field._hilbert(a, b, v)


@dataclasses.dataclass(frozen=True)
class Rationals(NumberField):
    kind = "Q"

    def coerce(self, x) -> Rational:
        if isinstance(x, QuadNumber):
            if x.x1 != 0:
                raise FieldMismatch("irrational element in ℚ")
            return x.x0
        if isinstance(x, RatFunc):
            if not x.is_constant():
                raise FieldMismatch("non-constant element in ℚ")
            return x.constant_value()
        return rational(x)

    def from_expr(self, expr, text):
        if not expr.is_Rational:
            raise SchemaError(f"{text!r} is not a rational number")
        return Rational(expr)

    def sqrt(self, x):
        return rational_sqrt(self.coerce(x))

    def reduce_square_class(self, x):
        return Rational(squarefree_part(x))

    def descriptor(self):
        return {"field": "Q"}

    def __str__(self):
        return "Q"

    def infinite_places(self):
        return [Place("real")]

    def places_above(self, p):
        return [Place("finite", p)]

    def norm_to_q(self, x):
        return self.coerce(x)

    def valuation(self, x, v: Place) -> int:
        return split_rational(self.coerce(x), v.p)[0]

    def real_sign(self, x, v=None):
        return 1 if self.coerce(x) > 0 else -1

    def is_local_square(self, x, v: Place) -> bool:
        x = self.coerce(x)
        if v.is_real:
            return x > 0
        val, u = split_rational(x, v.p)
        if val % 2:
            return False
        if v.p == 2:
            return unit_mod(u, 8) == 1
        return _legendre(unit_mod(u, v.p), v.p) == 1

    def _hilbert(self, a, b, v):
        if v.is_real:
            return -1 if a < 0 and b < 0 else 1
        p = v.p
        va, ua = split_rational(a, p)
        vb, ub = split_rational(b, p)
        m = 8 if p == 2 else p
        return qp_hilbert(p, va, unit_mod(ua, m), vb, unit_mod(ub, m))


@functools.lru_cache(maxsize=None)
def _split_root(d: int, p: int, k: int) -> int:
    """The 'index 0' square root of d in ℤ_p, modulo p^k."""
    if p == 2:
        k = max(k, 3)
        roots = sqrt_mod(d % 2 ** (k + 1), 2 ** (k + 1), all_roots=True)
        return next(r for r in sorted({r % 2 ** k for r in roots}) if r % 4 == 1)
    base = min(sqrt_mod(d % p, p, all_roots=True))
    roots = sqrt_mod(d % p ** k, p ** k, all_roots=True)
    return next(r for r in roots if r % p == base)


@dataclasses.dataclass(frozen=True)
class QuadNumberField(NumberField):
    d: int = -1
    kind = "Q(sqrt)"

    def __post_init__(self):
        d = int(self.d)
        if d in (0, 1) or squarefree_part(d) != d:
            raise UnsupportedField(f"d = {self.d} must be squarefree and different from 0, 1")

    def coerce(self, x) -> QuadNumber:
        if isinstance(x, QuadNumber):
            if x.d != self.d:
                raise FieldMismatch(f"element of ℚ(√{x.d}) in ℚ(√{self.d})")
            return x
        if isinstance(x, RatFunc):
            return QuadNumber(Rationals().coerce(x), 0, self.d)
        return QuadNumber(rational(x), 0, self.d)

    @property
    def generator(self) -> QuadNumber:
        return QuadNumber(0, 1, self.d)

    def from_expr(self, expr, text):
        if not expr.free_symbols <= {SQRT}:
            raise SchemaError(f"{text!r} is not an element of ℚ(√{self.d})")
        n, den = sympy.fraction(sympy.together(expr))
        modulus = Poly(SQRT ** 2 - self.d, SQRT)

        def reduce(e) -> QuadNumber:
            r = Poly(e, SQRT, domain=sympy.QQ).rem(modulus)
            coeffs = r.all_coeffs()
            x1 = coeffs[-2] if len(coeffs) > 1 else 0
            return QuadNumber(coeffs[-1], x1, self.d)

        denominator = reduce(den)
        if not denominator:
            raise SchemaError(f"division by zero in {text!r}")
        return reduce(n) / denominator

    def sqrt(self, x) -> Optional[QuadNumber]:
        x = self.coerce(x)
        if not x:
            return None
        if x.x1 == 0:
            r = rational_sqrt(x.x0)
            if r is not None:
                return self.coerce(r)
            r = rational_sqrt(x.x0 / self.d)
            return QuadNumber(0, r, self.d) if r is not None else None
        n = rational_sqrt(x.norm())
        if n is None:
            return None
        for cand in ((x.x0 + n) / 2, (x.x0 - n) / 2):
            u = rational_sqrt(cand)
            if u:
                root = QuadNumber(u, x.x1 / (2 * u), self.d)
                if root * root == x:
                    return root
        return None

    def reduce_square_class(self, x):
        if self.is_square(x):
            return self.one
        if x.x1 == 0:
            return self.coerce(squarefree_part(x.x0))
        nums = [v for v in (x.x0, x.x1) if v != 0]
        content = Rational(math.gcd(*[int(v.p) for v in nums]),
                           math.lcm(*[int(v.q) for v in nums]))
        return (x / content) * squarefree_part(content)

    def descriptor(self):
        return {"field": "Q(sqrt)", "d": self.d}

    def __str__(self):
        return f"Q(sqrt({self.d}))"

    # -- local structure

    def splitting(self, p: int) -> str:
        d = self.d
        if p == 2:
            return {1: "split", 5: "inert"}.get(d % 8, "ramified")
        if d % p == 0:
            return "ramified"
        return "split" if _legendre(d, p) == 1 else "inert"

    def infinite_places(self):
        if self.d > 0:
            return [Place("real", 0, 0, "embedding"), Place("real", 0, 1, "embedding")]
        return [Place("complex")]

    def places_above(self, p):
        kind = self.splitting(p)
        if kind == "split":
            return [Place("finite", p, 0, kind), Place("finite", p, 1, kind)]
        return [Place("finite", p, 0, kind)]

    def base_primes(self):
        return sorted({2} | set(prime_support(self.d)))

    def norm_to_q(self, x):
        return self.coerce(x).norm()

    def _integral(self, x: QuadNumber) -> Tuple[int, int, int]:
        den = int(sympy.ilcm(int(x.x0.q), int(x.x1.q)))
        return int(x.x0 * den), int(x.x1 * den), den

    def _split_data(self, x: QuadNumber, v: Place) -> Tuple[int, int]:
        """Valuation and unit residue mod p³ of x under the embedding of a split place."""
        p = v.p
        a, b, den = self._integral(x)
        m = _vp(a * a - self.d * b * b, p)
        k = m + 4
        mod = p ** k
        root = _split_root(self.d, p, k)
        if v.index == 1:
            root = -root
        value = (a + b * root) % mod
        vx = _vp(value, p)
        ux = (value // p ** vx) % p ** 3
        vd = _vp(den, p)
        ud = (den // p ** vd) % p ** 3
        return vx - vd, (ux * pow(ud, -1, p ** 3)) % p ** 3

    def uniformizer(self, v: Place) -> QuadNumber:
        if v.splitting == "inert":
            return self.coerce(v.p)
        if v.p == 2 and self.d % 4 == 3:
            return QuadNumber(1, 1, self.d)
        return self.generator

    def valuation(self, x, v: Place) -> int:
        x = self.coerce(x)
        if not x:
            raise ZeroElement("valuation of zero")
        if v.splitting == "split":
            return self._split_data(x, v)[0]
        vn = split_rational(x.norm(), v.p)[0]
        return vn // 2 if v.splitting == "inert" else vn

    def real_sign(self, x, v: Place) -> int:
        x = self.coerce(x)
        y = x.x1 if v.index == 0 else -x.x1
        if y == 0:
            return 1 if x.x0 > 0 else -1
        if x.x0 == 0 or (x.x0 > 0) == (y > 0):
            ref = x.x0 if x.x0 != 0 else y
            return 1 if ref > 0 else -1
        if x.x0 ** 2 > y ** 2 * self.d:
            return 1 if x.x0 > 0 else -1
        return 1 if y > 0 else -1

    def _residue_is_square(self, u: QuadNumber, v: Place) -> bool:
        p = v.p
        if v.splitting == "inert":
            return _legendre(unit_mod(u.norm(), p), p) == 1
        return _legendre(unit_mod(u.x0, p), p) == 1

    def _dyadic_unit_is_square(self, u: QuadNumber, v: Place) -> bool:
        e = 1 if v.splitting == "inert" else 2
        if v.splitting == "inert":
            omega = QuadNumber(Rational(1, 2), Rational(1, 2), self.d)
        else:
            omega = self.generator
        for i in range(4):
            for j in range(4):
                w = omega * j + i
                diff = u - w * w
                if not diff or self.valuation(diff, v) >= 2 * e + 1:
                    return True
        return False

    def is_local_square(self, x, v: Place) -> bool:
        x = self.coerce(x)
        if v.kind == "complex":
            return True
        if v.is_real:
            return self.real_sign(x, v) > 0
        if v.splitting == "split":
            val, u = self._split_data(x, v)
            if val % 2:
                return False
            if v.p == 2:
                return u % 8 == 1
            return _legendre(u, v.p) == 1
        val = self.valuation(x, v)
        if val % 2:
            return False
        u = x / self.uniformizer(v) ** val
        if v.p == 2:
            return self._dyadic_unit_is_square(u, v)
        return self._residue_is_square(u, v)

    def _hilbert(self, a, b, v):
        if v.kind == "complex":
            return 1
        if v.is_real:
            return -1 if self.real_sign(a, v) < 0 and self.real_sign(b, v) < 0 else 1
        if v.splitting == "split":
            va, ua = self._split_data(a, v)
            vb, ub = self._split_data(b, v)
            return qp_hilbert(v.p, va, ua, vb, ub)
        if v.p != 2:
            alpha, beta = self.valuation(a, v), self.valuation(b, v)
            c = a ** beta / b ** alpha
            if (alpha * beta) % 2:
                c = -c
            return 1 if self._residue_is_square(c, v) else -1
        # the dyadic place is unique here; use the product formula
        sign = 1
        for w in self.bad_places([a, b]):
            if w != v:
                sign *= self.hilbert_symbol(a, b, w)
        return sign


@dataclasses.dataclass(frozen=True)
class RationalFunctionField(Field):
    """ℚ(t), with scalars supported on monic irreducibles of degree ≤ 2."""

    kind = "Q(t)"

    @property
    def variable(self) -> RatFunc:
        return RatFunc.from_expr(T)

    def coerce(self, x) -> RatFunc:
        if isinstance(x, RatFunc):
            return x
        if isinstance(x, QuadNumber):
            return RatFunc.constant(Rationals().coerce(x))
        if isinstance(x, sympy.Expr) and not x.is_Rational:
            return RatFunc.from_expr(x)
        return RatFunc.constant(x)

    def from_expr(self, expr, text):
        if not expr.free_symbols <= {T}:
            raise SchemaError(f"{text!r} is not an element of ℚ(t)")
        x = RatFunc.from_expr(expr)
        if x:
            self.factor(x)
        return x

    def factor(self, x) -> Tuple[Rational, Tuple[Tuple[Poly, int], ...]]:
        x = self.coerce(x)
        if not x:
            raise ZeroElement("cannot factor zero")
        return _factor_ratfunc(x)

    def sqrt(self, x):
        x = self.coerce(x)
        if not x:
            return None
        const, factors = self.factor(x)
        root = rational_sqrt(const)
        if root is None or any(e % 2 for _, e in factors):
            return None
        out = RatFunc.constant(root)
        for pi, e in factors:
            out = out * RatFunc.make(pi, _qq_poly(1)) ** (e // 2)
        return out

    def reduce_square_class(self, x):
        const, factors = self.factor(x)
        out = RatFunc.constant(squarefree_part(const))
        for pi, e in factors:
            if e % 2:
                out = out * RatFunc.make(pi, _qq_poly(1))
        return out

    def descriptor(self):
        return {"field": "Q(t)"}

    def __str__(self):
        return "Q(t)"

    def hilbert_symbol(self, a, b, v):
        raise UnsupportedPlace("Hilbert symbols over ℚ(t) are replaced by residues")

    # -- residue machinery

    def support(self, elements: Iterable) -> List[Poly]:
        out = {}
        for x in elements:
            for pi, _ in self.factor(x)[1]:
                out[_poly_key(pi)] = pi
        return [out[k] for k in sorted(out)]

    def residue_field(self, pi: Poly) -> NumberField:
        return _residue_field(pi)[0]

    def root(self, pi: Poly):
        return _residue_field(pi)[1]

    def valuation(self, x, pi: Poly) -> int:
        x = self.coerce(x)
        return _poly_multiplicity(x.num, pi) - _poly_multiplicity(x.den, pi)

    def unit_residue(self, x, pi: Poly) -> Tuple[int, Element]:
        """Return (v_π(x), residue of x/π^v in k_π)."""
        x = self.coerce(x)
        num, en = _strip(x.num, pi)
        den, ed = _strip(x.den, pi)
        field, theta = _residue_field(pi)
        value = field.coerce(_horner(num, theta)) / field.coerce(_horner(den, theta))
        return en - ed, value

    def tame_symbol(self, a, b, pi: Poly) -> Element:
        alpha, ua = self.unit_residue(a, pi)
        beta, ub = self.unit_residue(b, pi)
        c = ua ** beta / ub ** alpha
        return -c if (alpha * beta) % 2 else c

    def good_point(self, elements: Iterable) -> int:
        """Smallest integer t0 (in the order 0, 1, -1, 2, -2, ...) avoiding every zero and pole."""
        elements = [self.coerce(x) for x in elements]
        for n in range(0, 10_000):
            t0 = (n + 1) // 2 if n % 2 else -(n // 2)
            if all(_horner(x.num, Rational(t0)) != 0 and _horner(x.den, Rational(t0)) != 0
                   for x in elements):
                return t0
        raise UnsupportedSupport("no good specialization point found")

    def specialize(self, x, t0) -> Rational:
        return self.coerce(x).evaluate(Rational(t0))


def _poly_key(pi: Poly):
    return (pi.degree(), tuple(rational(c) for c in pi.all_coeffs()))


def _poly_multiplicity(f: Poly, pi: Poly) -> int:
    return _strip(f, pi)[1]


def _strip(f: Poly, pi: Poly) -> Tuple[Poly, int]:
    e = 0
    while not f.is_zero:
        q, r = f.div(pi)
        if not r.is_zero:
            break
        f, e = q, e + 1
    return f, e


@functools.lru_cache(maxsize=50_000)
def _factor_ratfunc(x: RatFunc):
    const = Rational(1)
    factors = {}
    for part, sign in ((x.num, 1), (x.den, -1)):
        coeff, items = part.factor_list()
        const = const * rational(coeff) ** sign
        for f, e in items:
            if f.degree() > 2:
                raise UnsupportedSupport(
                    f"factor {f.as_expr()} has degree {f.degree()} > 2")
            lc = rational(f.LC())
            const = const * lc ** (sign * e)
            monic = f.monic()
            key = _poly_key(monic)
            prev = factors.get(key, (monic, 0))
            factors[key] = (monic, prev[1] + sign * e)
    items = tuple(factors[k] for k in sorted(factors) if factors[k][1] != 0)
    return const, items


@functools.lru_cache(maxsize=None)
def _residue_field(pi: Poly):
    coeffs = [rational(c) for c in pi.all_coeffs()]
    if len(coeffs) == 2:
        return Rationals(), -coeffs[1]
    if len(coeffs) != 3:
        raise UnsupportedSupport(f"residue field of {pi.as_expr()} is not supported")
    b, c = coeffs[1], coeffs[2]
    disc = b * b - 4 * c
    d = squarefree_part(disc)
    k = rational_sqrt(disc / d)
    field = QuadNumberField(d)
    return field, QuadNumber(-b / 2, k / 2, d)


# ---------------------------------------------------------------- square classes

@dataclasses.dataclass(frozen=True, eq=False)
class SquareClass:
    field: Field
    rep: Element

    def __eq__(self, other):
        if not isinstance(other, SquareClass) or other.field != self.field:
            return NotImplemented
        return self.field.is_square(self.rep / other.rep)

    def __hash__(self):
        if isinstance(self.field, QuadNumberField):
            return hash(squarefree_part(self.rep.norm()))
        return hash(self.rep)

    def __mul__(self, other: "SquareClass") -> "SquareClass":
        return self.field.square_class(self.rep * other.rep)

    def is_trivial(self) -> bool:
        return self.field.is_square(self.rep)

    def __str__(self):
        return self.field.format(self.rep)


# ---------------------------------------------------------------- extensions

@dataclasses.dataclass(frozen=True)
class QuadExtension:
    """K = F(√d) over F = ℚ with norm, conjugation and the functional s."""

    base: Field
    d: int

    def __post_init__(self):
        if not isinstance(self.base, Rationals):
            raise UnsupportedField("quadratic extensions are supported over ℚ only")
        object.__setattr__(self, "d", squarefree_part(self.d))
        if self.d == 1:
            raise UnsupportedField("d must not be a square")

    @property
    def field(self) -> QuadNumberField:
        return QuadNumberField(self.d)

    def embed(self, x) -> QuadNumber:
        return self.field.coerce(self.base.coerce(x))

    def conj(self, x) -> QuadNumber:
        return self.field.coerce(x).conj()

    def norm(self, x) -> Rational:
        return self.field.coerce(x).norm()

    def s_functional(self, x, twist=None) -> Rational:
        """Second coordinate of x in the basis {1, √d}; with ``twist`` c, returns s(c·x)."""
        x = self.field.coerce(x)
        if twist is not None:
            x = x * self.field.coerce(twist)
        return x.x1

    def descriptor(self):
        return {"d": self.d}


def field_from_descriptor(desc) -> Field:
    if not isinstance(desc, dict):
        raise SchemaError("field descriptor must be an object", "/field")
    kind = desc.get("field")
    if kind == "Q":
        return Rationals()
    if kind == "Q(t)":
        return RationalFunctionField()
    if kind == "Q(sqrt)":
        try:
            return QuadNumberField(int(desc["d"]))
        except (KeyError, TypeError, ValueError):
            raise SchemaError("Q(sqrt) descriptor needs an integer d", "/field/d")
    raise SchemaError(f"unknown field {kind!r}", "/field/field")


def square_class(field: Field, x) -> SquareClass:
    return field.square_class(x)


def hilbert_symbol(field: Field, a, b, v: Place) -> int:
    return field.hilbert_symbol(a, b, v)


def norm(K: QuadExtension, x) -> Rational:
    return K.norm(x)


def s_functional(K: QuadExtension, x) -> Rational:
    return K.s_functional(x)
