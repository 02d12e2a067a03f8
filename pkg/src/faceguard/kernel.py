"""Exact rational scalars and the low-level 3D predicates built on them.

Scalars are ``gmpy2.mpq`` values: canonical (lowest terms, positive
denominator), hashable, and exact under + - * /.  Points and vectors are
plain 3-tuples of scalars so they hash structurally and can be used as
dictionary keys when deduplicating vertices.
"""
from __future__ import annotations

from typing import NamedTuple, Sequence, Tuple, Union

from gmpy2 import mpq

Scalar = type(mpq(0))
Point3 = Tuple[Scalar, Scalar, Scalar]
Vector3 = Point3

ZERO = mpq(0)
ONE = mpq(1)
HALF = mpq(1, 2)


def Q(value) -> Scalar:
    """Coerce an int, Fraction, string ("p/q", "n") or mpq to an exact scalar.

    Floats are rejected on purpose: they would smuggle rounding into
    predicates that must be exact.
    """
    if isinstance(value, float):
        raise TypeError("float given where an exact rational is required: %r" % value)
    if isinstance(value, str):
        return mpq(value.strip())
    if hasattr(value, "numerator") and hasattr(value, "denominator"):
        return mpq(int(value.numerator), int(value.denominator))
    return mpq(value)


def scalar_to_str(x) -> str:
    x = Q(x)
    if x.denominator == 1:
        return str(x.numerator)
    return "%d/%d" % (x.numerator, x.denominator)


def P(x, y, z) -> Point3:
    return (Q(x), Q(y), Q(z))


def sub(a: Sequence, b: Sequence) -> Vector3:
    return (a[0] - b[0], a[1] - b[1], a[2] - b[2])


def add(a: Sequence, b: Sequence) -> Vector3:
    return (a[0] + b[0], a[1] + b[1], a[2] + b[2])


def scale(a: Sequence, s) -> Vector3:
    return (a[0] * s, a[1] * s, a[2] * s)


def dot(a: Sequence, b: Sequence):
    return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]


def cross(a: Sequence, b: Sequence) -> Vector3:
    return (a[1] * b[2] - a[2] * b[1],
            a[2] * b[0] - a[0] * b[2],
            a[0] * b[1] - a[1] * b[0])


def lerp(a: Sequence, b: Sequence, t) -> Point3:
    return (a[0] + (b[0] - a[0]) * t,
            a[1] + (b[1] - a[1]) * t,
            a[2] + (b[2] - a[2]) * t)


def midpoint(a: Sequence, b: Sequence) -> Point3:
    return lerp(a, b, HALF)


def is_zero(v: Sequence) -> bool:
    return v[0] == 0 and v[1] == 0 and v[2] == 0


def sign(x) -> int:
    return (x > 0) - (x < 0)


def orient3d(p, q, r, s) -> int:
    """Sign of det(q-p, r-p, s-p); zero iff the four points are coplanar."""
    return sign(dot(cross(sub(q, p), sub(r, p)), sub(s, p)))


def collinear(a, b, c) -> bool:
    return is_zero(cross(sub(b, a), sub(c, a)))


def sign_normalized(v: Sequence) -> Vector3:
    """Scale ``v`` so its first nonzero coordinate is +1 (direction up to sign)."""
    for c in v:
        if c != 0:
            return (v[0] / c, v[1] / c, v[2] / c)
    raise ValueError("zero vector has no direction")


class Plane:
    """The plane {p : normal . p == offset}.

    Equality and hashing compare point sets, so two planes built from
    opposite normals are equal.  ``normal`` keeps the orientation it was
    built with; use :meth:`side` for the signed test.
    """

    __slots__ = ("normal", "offset", "_key")

    def __init__(self, normal: Sequence, offset):
        normal = (Q(normal[0]), Q(normal[1]), Q(normal[2]))
        if is_zero(normal):
            raise ValueError("plane normal must be non-zero")
        self.normal = normal
        self.offset = Q(offset)
        lead = next(c for c in normal if c != 0)
        self._key = (normal[0] / lead, normal[1] / lead, normal[2] / lead,
                     self.offset / lead)

    @classmethod
    def through(cls, a, b, c) -> "Plane":
        n = cross(sub(b, a), sub(c, a))
        return cls(n, dot(n, a))

    @classmethod
    def axis(cls, axis: int, value) -> "Plane":
        n = [ZERO, ZERO, ZERO]
        n[axis] = ONE
        return cls(n, value)

    def side(self, p) -> int:
        """+1 on the side the normal points to, -1 opposite, 0 on the plane."""
        return sign(dot(self.normal, p) - self.offset)

    def value(self, p):
        return dot(self.normal, p) - self.offset

    def contains(self, p) -> bool:
        return dot(self.normal, p) == self.offset

    def flipped(self) -> "Plane":
        return Plane(scale(self.normal, -1), -self.offset)

    def key(self):
        return self._key

    def __eq__(self, other):
        return isinstance(other, Plane) and self._key == other._key

    def __hash__(self):
        return hash(self._key)

    def __repr__(self):
        n = ", ".join(scalar_to_str(c) for c in self.normal)
        return "Plane((%s) . p = %s)" % (n, scalar_to_str(self.offset))


class Segment3(NamedTuple):
    a: Point3
    b: Point3

    def at(self, t) -> Point3:
        return lerp(self.a, self.b, t)


class SegmentPlaneHit(NamedTuple):
    kind: str              # "empty", "point" or "segment"
    t: Union[Scalar, None] = None
    point: Union[Point3, None] = None


def segment_plane_intersection(seg: Segment3, plane: Plane) -> SegmentPlaneHit:
    a, b = seg
    if a == b:
        raise ValueError("degenerate segment")
    va = plane.value(a)
    vb = plane.value(b)
    if va == 0 and vb == 0:
        return SegmentPlaneHit("segment")
    if (va > 0 and vb > 0) or (va < 0 and vb < 0):
        return SegmentPlaneHit("empty")
    if va == vb:  # parallel, off-plane
        return SegmentPlaneHit("empty")
    t = va / (va - vb)
    return SegmentPlaneHit("point", t, lerp(a, b, t))


class Projection(NamedTuple):
    kind: str              # "point", "at-infinity" or "undefined"
    point: Union[Point3, None] = None


def central_projection(apex, p, target: Plane) -> Projection:
    """Intersect the line apex->p with ``target``.

    The caller decides whether points behind the apex are meaningful; this
    function works on the full line.
    """
    if target.contains(apex):
        raise ValueError("apex lies on the target plane")
    if p == apex:
        return Projection("undefined")
    d = sub(p, apex)
    denom = dot(target.normal, d)
    if denom == 0:
        return Projection("at-infinity")
    t = (target.offset - dot(target.normal, apex)) / denom
    return Projection("point", lerp(apex, p, t))
