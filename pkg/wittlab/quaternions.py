"""Quaternion algebras (a, b) and their elements."""
import dataclasses
import itertools
from typing import Dict, Iterator, List, Optional, Sequence

from .errors import PreconditionFailed, SchemaError, ZeroSlot
from .fields import Element, Field, squarefree_part
from .qforms import QuadraticForm, pfister


@dataclasses.dataclass(frozen=True)
class QuaternionAlgebra:
    """Q = (a, b): i² = a, j² = b, k = ij = −ji."""

    field: Field
    a: Element
    b: Element

    def __post_init__(self):
        a, b = self.field.coerce(self.a), self.field.coerce(self.b)
        if not a or not b:
            raise ZeroSlot("quaternion algebras need nonzero slots")
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)

    @classmethod
    def parse(cls, field: Field, data: Dict) -> "QuaternionAlgebra":
        if not isinstance(data, dict) or "a" not in data or "b" not in data:
            raise SchemaError("quaternion algebra needs slots a and b", "/quat")
        return cls(field, field.parse(data["a"]), field.parse(data["b"]))

    def element(self, w=0, x=0, y=0, z=0) -> "Quaternion":
        return Quaternion(self, w, x, y, z)

    def pure(self, x=0, y=0, z=0) -> "Quaternion":
        return Quaternion(self, 0, x, y, z)

    def scalar(self, c) -> "Quaternion":
        return Quaternion(self, c, 0, 0, 0)

    @property
    def i(self) -> "Quaternion":
        return self.pure(1, 0, 0)

    @property
    def j(self) -> "Quaternion":
        return self.pure(0, 1, 0)

    @property
    def k(self) -> "Quaternion":
        return self.pure(0, 0, 1)

    @property
    def brauer_class(self):
        from .cohomology import BrauerClass2

        return BrauerClass2.symbol(self.field, self.a, self.b)

    def is_division(self) -> bool:
        return not self.brauer_class.is_zero()

    def norm_form(self) -> QuadraticForm:
        return pfister(self.field, (self.a, self.b)).expansion

    def pure_quaternions(self, height: int) -> Iterator["Quaternion"]:
        """Nonzero pure quaternions with integer coordinates, by increasing height."""
        for h in range(1, height + 1):
            for coords in itertools.product(range(-h, h + 1), repeat=3):
                if max(abs(c) for c in coords) == h:
                    yield self.pure(*coords)

    def descriptor(self) -> Dict:
        return {"a": self.field.format(self.a), "b": self.field.format(self.b)}

    def __str__(self):
        return f"({self.field.format(self.a)},{self.field.format(self.b)})"


@dataclasses.dataclass(frozen=True)
class Quaternion:
    algebra: QuaternionAlgebra
    w: Element
    x: Element
    y: Element
    z: Element

    def __post_init__(self):
        F = self.algebra.field
        for name in ("w", "x", "y", "z"):
            object.__setattr__(self, name, F.coerce(getattr(self, name)))

    def _other(self, other) -> "Quaternion":
        if isinstance(other, Quaternion):
            return other
        return self.algebra.scalar(other)

    def __add__(self, other):
        o = self._other(other)
        return Quaternion(self.algebra, self.w + o.w, self.x + o.x, self.y + o.y, self.z + o.z)

    __radd__ = __add__

    def __neg__(self):
        return Quaternion(self.algebra, -self.w, -self.x, -self.y, -self.z)

    def __sub__(self, other):
        return self + (-self._other(other))

    def __rsub__(self, other):
        return self._other(other) - self

    def __mul__(self, other):
        o = self._other(other)
        a, b = self.algebra.a, self.algebra.b
        w1, x1, y1, z1 = self.w, self.x, self.y, self.z
        w2, x2, y2, z2 = o.w, o.x, o.y, o.z
        return Quaternion(
            self.algebra,
            w1 * w2 + a * x1 * x2 + b * y1 * y2 - a * b * z1 * z2,
            w1 * x2 + x1 * w2 - b * y1 * z2 + b * z1 * y2,
            w1 * y2 + y1 * w2 + a * x1 * z2 - a * z1 * x2,
            w1 * z2 + z1 * w2 + x1 * y2 - y1 * x2,
        )

    def __rmul__(self, other):
        return self._other(other) * self

    def __truediv__(self, other):
        return self * self._other(other).inverse()

    def __bool__(self):
        return bool(self.w) or bool(self.x) or bool(self.y) or bool(self.z)

    def conj(self) -> "Quaternion":
        return Quaternion(self.algebra, self.w, -self.x, -self.y, -self.z)

    def nrd(self) -> Element:
        a, b = self.algebra.a, self.algebra.b
        return self.w * self.w - a * self.x * self.x - b * self.y * self.y + a * b * self.z * self.z

    def inverse(self) -> "Quaternion":
        n = self.nrd()
        if not n:
            raise ZeroDivisionError(f"{self} is not invertible")
        return self.conj() * (1 / n)

    def is_pure(self) -> bool:
        return not self.w

    def square(self) -> Element:
        """q² for a pure quaternion q."""
        if not self.is_pure():
            raise PreconditionFailed(f"{self} is not pure")
        return -self.nrd()

    def coordinates(self) -> List[Element]:
        return [self.w, self.x, self.y, self.z]

    def proportional_to(self, other: "Quaternion") -> Optional[Element]:
        """μ with self = μ·other, if it exists."""
        pivot = next((i for i, c in enumerate(other.coordinates()) if c), None)
        if pivot is None:
            return None
        mu = self.coordinates()[pivot] / other.coordinates()[pivot]
        return mu if self == other * mu else None

    def format(self) -> List[str]:
        F = self.algebra.field
        return [F.format(c) for c in (self.x, self.y, self.z)]

    def __str__(self):
        F = self.algebra.field
        parts = []
        for c, unit in ((self.w, ""), (self.x, "i"), (self.y, "j"), (self.z, "k")):
            if c:
                parts.append(f"({F.format(c)}){unit}" if unit else F.format(c))
        return " + ".join(parts) or "0"


def parse_pure(algebra: QuaternionAlgebra, coords: Sequence, pointer: str = "") -> Quaternion:
    if not isinstance(coords, (list, tuple)) or len(coords) != 3:
        raise SchemaError("pure quaternions are given by three coordinates", pointer)
    F = algebra.field
    return algebra.pure(*(F.parse(c) for c in coords))


def anticommuting(q: Quaternion) -> Quaternion:
    """A pure quaternion w with wq = −qw and w² ≠ 0."""
    Q = q.algebra
    a, b = Q.a, Q.b
    candidates = [Q.pure(b * q.y, -a * q.x, 0), Q.pure(b * q.z, 0, q.x), Q.pure(0, a * q.z, q.y),
                  Q.i, Q.j, Q.k]
    basis = candidates[:3]
    candidates.extend(u + v for u, v in itertools.combinations(basis, 2))
    for w in candidates:
        if w and w.nrd() and not (w * q + q * w):
            return w
    raise PreconditionFailed(f"no invertible pure quaternion anticommutes with {q}")


def conjugator(p1: Quaternion, p2: Quaternion) -> Quaternion:
    """An invertible c with c·p1·c⁻¹ = p2, for pure p1, p2 of equal square."""
    if p1.square() != p2.square():
        raise PreconditionFailed("conjugate quaternions must have equal squares")
    Q = p1.algebra
    pool = [Q.scalar(1), Q.i, Q.j, Q.k, Q.i + Q.j, Q.i + Q.k, Q.j + Q.k, Q.i + Q.j + Q.k]
    for w in pool:
        c = p2 * w + w * p1
        if c and c.nrd():
            return c
    raise PreconditionFailed(f"no invertible conjugator from {p1} to {p2}")


def normalized_square(q: Quaternion):
    """(d, c) with q² = d·c², d a squarefree integer (over ℚ)."""
    d0 = q.square()
    d = squarefree_part(d0)
    c = q.algebra.field.sqrt(d0 / d)
    return d, c
