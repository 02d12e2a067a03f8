"""Stacks of axis-parallel bricks (2-reflex orthostacks).

Brick ``i`` sits directly on brick ``i-1``.  The overlap of their vertical
projections is the contact rectangle.  A contact is canonical when one
projection strictly contains the other; its type is the number of sides
on which the two projections are not flush.
"""
from __future__ import annotations

import json
import random
from dataclasses import dataclass
from typing import Dict, List, NamedTuple, Optional, Sequence, Tuple

from .arrangement import INSIDE
from .kernel import HALF, Q, scalar_to_str
from .polyhedron import Polyhedron, face_interior_point, from_boxes

LOWER_IN_UPPER = "U"   # the lower brick's projection lies inside the upper one
UPPER_IN_LOWER = "N"   # the upper brick's projection lies inside the lower one
SYMBOLS = {LOWER_IN_UPPER: "⊔", UPPER_IN_LOWER: "⊓"}


class StackError(ValueError):
    pass


def _iv(pair):
    a, b = Q(pair[0]), Q(pair[1])
    if not a < b:
        raise StackError("interval must have positive length: %r" % (pair,))
    return (a, b)


@dataclass(frozen=True)
class Brick:
    x: Tuple
    y: Tuple
    z: Tuple

    def __post_init__(self):
        object.__setattr__(self, "x", _iv(self.x))
        object.__setattr__(self, "y", _iv(self.y))
        object.__setattr__(self, "z", _iv(self.z))

    @property
    def rect(self):
        return (self.x, self.y)

    @property
    def height(self):
        return self.z[1] - self.z[0]

    def as_box(self):
        return (self.x, self.y, self.z)

    def center(self):
        return tuple((a + b) * HALF for a, b in (self.x, self.y, self.z))


def _rect_intersection(r, s):
    x = (max(r[0][0], s[0][0]), min(r[0][1], s[0][1]))
    y = (max(r[1][0], s[1][0]), min(r[1][1], s[1][1]))
    return (x, y)


def _contains(outer, inner) -> bool:
    return (outer[0][0] <= inner[0][0] and inner[0][1] <= outer[0][1]
            and outer[1][0] <= inner[1][0] and inner[1][1] <= outer[1][1])


class ContactRectangle(NamedTuple):
    level: int                     # contact between brick level and level+1
    rect: Tuple
    canonical: bool
    coplanar_faces: int            # faces of the polyhedron in the contact plane
    type: Optional[int]
    direction: Optional[str]

    @property
    def deficit(self) -> Optional[int]:
        return None if self.type is None else 5 - self.type


Signature = List[Tuple[str, int]]


class BrickStack:
    def __init__(self, bricks: Sequence):
        self.bricks: List[Brick] = [b if isinstance(b, Brick) else Brick(*b) for b in bricks]
        if not self.bricks:
            raise StackError("a stack needs at least one brick")
        for i in range(1, len(self.bricks)):
            lo, up = self.bricks[i - 1], self.bricks[i]
            if lo.z[1] != up.z[0]:
                raise StackError("bricks %d and %d are not z-adjacent" % (i - 1, i))
            r = _rect_intersection(lo.rect, up.rect)
            if not (r[0][0] < r[0][1] and r[1][0] < r[1][1]):
                raise StackError("bricks %d and %d have a zero-area contact" % (i - 1, i))
            if lo.rect == up.rect:
                raise StackError("bricks %d and %d have identical projections" % (i - 1, i))

    @property
    def k(self) -> int:
        return len(self.bricks)

    def __repr__(self):
        return "BrickStack(k=%d)" % self.k

    def __eq__(self, other):
        return isinstance(other, BrickStack) and self.bricks == other.bricks

    def to_json_dict(self) -> dict:
        return {"bricks": [{"x": [scalar_to_str(c) for c in b.x],
                            "y": [scalar_to_str(c) for c in b.y],
                            "z": [scalar_to_str(c) for c in b.z]} for b in self.bricks]}

    @classmethod
    def from_json_dict(cls, d: dict) -> "BrickStack":
        try:
            return cls([Brick(b["x"], b["y"], b["z"]) for b in d["bricks"]])
        except (KeyError, TypeError) as exc:
            raise StackError("malformed brick stack JSON: %s" % exc) from exc

    def dumps(self) -> str:
        return json.dumps(self.to_json_dict())

    @classmethod
    def loads(cls, text: str) -> "BrickStack":
        return cls.from_json_dict(json.loads(text))


def to_polyhedron(s: BrickStack) -> Polyhedron:
    return from_boxes([b.as_box() for b in s.bricks])


def _shrink_steps(outer, inner) -> List[Tuple]:
    """Rectangles leading from ``outer`` down to ``inner`` (inner inside outer).

    Each step removes one connected piece of ``outer`` minus ``inner``.  The
    remainder is disconnected only when exactly two opposite sides are
    clipped, and then the lower strip goes first.
    """
    clipped = [inner[0][0] != outer[0][0], inner[0][1] != outer[0][1],
               inner[1][0] != outer[1][0], inner[1][1] != outer[1][1]]
    if not any(clipped):
        return []
    if clipped == [True, True, False, False]:
        return [((inner[0][0], outer[0][1]), outer[1]), inner]
    if clipped == [False, False, True, True]:
        return [(outer[0], (inner[1][0], outer[1][1])), inner]
    return [inner]


def classify_contacts(s: BrickStack) -> List[ContactRectangle]:
    out = []
    for i in range(s.k - 1):
        lo, up = s.bricks[i].rect, s.bricks[i + 1].rect
        r = _rect_intersection(lo, up)
        m = len(_shrink_steps(lo, r)) + len(_shrink_steps(up, r))
        if m == 1:
            up_in_lo = r == up
            inner, outer = (up, lo) if up_in_lo else (lo, up)
            flush = sum([inner[0][0] == outer[0][0], inner[0][1] == outer[0][1],
                         inner[1][0] == outer[1][0], inner[1][1] == outer[1][1]])
            out.append(ContactRectangle(i, r, True, 1, 4 - flush,
                                        UPPER_IN_LOWER if up_in_lo else LOWER_IN_UPPER))
        else:
            out.append(ContactRectangle(i, r, False, m, None, None))
    return out


def signature(s: BrickStack) -> Signature:
    contacts = classify_contacts(s)
    bad = [c.level for c in contacts if not c.canonical]
    if bad:
        raise StackError("non-canonical contacts at levels %s" % bad)
    return [(c.direction, c.type) for c in contacts]


def signature_text(sig: Signature) -> str:
    return " ".join("%s%d" % (d, t) for d, t in sig)


def parse_signature(text: str) -> Signature:
    out = []
    for tok in text.replace(",", " ").split():
        d = {"⊔": "U", "⊓": "N"}.get(tok[0], tok[0].upper())
        if d not in (LOWER_IN_UPPER, UPPER_IN_LOWER) or not tok[1:].isdigit():
            raise StackError("bad signature token %r" % tok)
        t = int(tok[1:])
        if not 1 <= t <= 4:
            raise StackError("contact type must be 1..4, got %d" % t)
        out.append((d, t))
    return out


def face_count_formula(sig: Signature) -> int:
    return len(sig) + 1 + 5 + sum(t for _, t in sig)


# -- canonicalization --------------------------------------------------------

def _epsilon(s: BrickStack):
    vals = [b.height for b in s.bricks]
    for axis in range(2):
        coords = sorted({c for b in s.bricks for c in (b.x, b.y)[axis]})
        vals.extend(b - a for a, b in zip(coords, coords[1:]))
    return min(vals) / 4


def canonicalize(s: BrickStack) -> Tuple[BrickStack, Dict[int, int]]:
    """Replace every contact lying in m polyhedron faces by m canonical ones.

    The rectangles between the lower brick's projection and the upper one's
    are found by removing one piece of the lower projection at a time down
    to the contact rectangle, then adding the pieces of the upper
    projection.  They become thin bricks just below and just above the
    contact plane, cut out of the two original bricks, so the new solid is
    a subset of the old.  Returns the new stack and a map from its
    polyhedron's faces to the original polyhedron's faces.
    """
    contacts = classify_contacts(s)
    if all(c.canonical for c in contacts):
        return s, {i: i for i in range(to_polyhedron(s).f)}
    eps = _epsilon(s)
    cuts_below = [[] for _ in s.bricks]      # thin layers taken from a brick's top
    cuts_above = [[] for _ in s.bricks]      # thin layers taken from a brick's bottom
    for c in contacts:
        if c.canonical:
            continue
        lo, up = s.bricks[c.level], s.bricks[c.level + 1]
        down = _shrink_steps(lo.rect, c.rect)
        if down and down[-1] == up.rect:
            down.pop()      # the upper brick itself is the last step
        upward = list(reversed(_shrink_steps(up.rect, c.rect)))[1:] + [up.rect]
        for r in down:
            cuts_below[c.level].append((r, eps))
            eps = eps * HALF
        for r in upward[:-1]:
            cuts_above[c.level + 1].append((r, eps))
            eps = eps * HALF
    bricks: List[Brick] = []
    for i, b in enumerate(s.bricks):
        z0, z1 = b.z
        above = cuts_above[i]
        below = cuts_below[i]
        z = z0
        for r, e in above:
            bricks.append(Brick(r[0], r[1], (z, z + e)))
            z += e
        top = z1 - sum((e for _, e in below), Q(0))
        bricks.append(Brick(b.x, b.y, (z, top)))
        z = top
        for r, e in below:
            bricks.append(Brick(r[0], r[1], (z, z + e)))
            z += e
    s2 = BrickStack(bricks)
    heights = sorted({b.z[0] for b in s.bricks[1:]})
    return s2, _face_map(to_polyhedron(s2), to_polyhedron(s), heights)


def _orient_key(fr):
    return (fr.plane, tuple(c > 0 for c in fr.outward_normal))


def _face_map(p_new: Polyhedron, p_old: Polyhedron, contact_heights) -> Dict[int, int]:
    by_key: Dict[tuple, List[int]] = {}
    for j, fr in enumerate(p_old.faces):
        by_key.setdefault(_orient_key(fr), []).append(j)
    old_pts = [face_interior_point(p_old, j) for j in range(p_old.f)]
    out = {}
    for i, fr in enumerate(p_new.faces):
        cands = by_key.get(_orient_key(fr), [])
        if len(cands) == 1:
            out[i] = cands[0]
            continue
        q = face_interior_point(p_new, i)
        hit = [j for j in cands if p_old.face_contains(j, q) == INSIDE
               or p_new.face_contains(i, old_pts[j]) >= 0]
        if hit:
            out[i] = hit[0]
            continue
        if fr.outward_normal[0] == 0 and fr.outward_normal[1] == 0:
            # a thin layer's horizontal face came from the nearest contact plane
            up = fr.outward_normal[2] > 0
            for h in sorted(contact_heights, key=lambda h: abs(h - q[2])):
                q2 = (q[0], q[1], h)
                hit = [j for j in horizontal_faces_at(p_old, h, up)
                       if p_old.face_contains(j, q2) >= 0]
                if hit:
                    out[i] = hit[0]
                    break
        if i not in out:
            raise StackError("no corresponding face for face %d" % i)
    return out


# -- brick/face bookkeeping used by guard placement -------------------------

def brick_side_faces(s: BrickStack, p: Polyhedron, j: int) -> List[int]:
    """Indices of the vertical faces that contain the four sides of brick j."""
    b = s.bricks[j]
    zm = (b.z[0] + b.z[1]) * HALF
    xm = (b.x[0] + b.x[1]) * HALF
    ym = (b.y[0] + b.y[1]) * HALF
    pts = [(b.x[0], ym, zm), (b.x[1], ym, zm), (xm, b.y[0], zm), (xm, b.y[1], zm)]
    out = []
    for q in pts:
        for fi, fr in enumerate(p.faces):
            if fr.outward_normal[2] == 0 and p.point_on_face(fi, q) == INSIDE:
                out.append(fi)
                break
        else:
            raise StackError("side of brick %d is not on a face" % j)
    return sorted(set(out))


def horizontal_faces_at(p: Polyhedron, z, upward: bool) -> List[int]:
    return [fi for fi, fr in enumerate(p.faces)
            if fr.outward_normal[0] == 0 and fr.outward_normal[1] == 0
            and fr.plane.contains((0, 0, z)) and (fr.outward_normal[2] > 0) == upward]


def topmost_face(s: BrickStack, p: Polyhedron) -> int:
    return horizontal_faces_at(p, s.bricks[-1].z[1], True)[0]


# -- fixtures and random instances ------------------------------------------

_SIDES = ((0, 0), (0, 1), (1, 0), (1, 1))   # (axis, low/high) in lexicographic order
# flush sides per type: lexicographically first, skipping the opposite pair
# that would split the contact plane into two faces
_FLUSH = {1: _SIDES[:3], 2: (_SIDES[0], _SIDES[2]), 3: _SIDES[:1], 4: ()}


def realize_signature(sig: Signature, base=10, step=2, height=1) -> BrickStack:
    """Deterministic stack with the given signature.

    The base brick is ``base`` x ``base`` x ``height``; at each contact the
    non-flush sides move by ``step`` (inward for N, outward for U).  The
    flush sides are the lexicographically first ones, except that type 2
    keeps two adjacent sides flush.
    """
    rect = [[Q(0), Q(base)], [Q(0), Q(base)]]
    z = Q(0)
    bricks = [Brick(tuple(rect[0]), tuple(rect[1]), (z, z + height))]
    for d, t in sig:
        z += height
        moving = [sd for sd in _SIDES if sd not in _FLUSH[t]]
        new = [list(rect[0]), list(rect[1])]
        for axis, hi in moving:
            inward = 1 if d == UPPER_IN_LOWER else -1
            new[axis][hi] += (-step if hi else step) * inward
        if not (new[0][0] < new[0][1] and new[1][0] < new[1][1]):
            raise StackError("signature %s collapses the %dx%d fixture" % (signature_text(sig), base, base))
        rect = new
        bricks.append(Brick(tuple(rect[0]), tuple(rect[1]), (z, z + height)))
    return BrickStack(bricks)


def random_canonical_stack(rng: random.Random, k: int) -> BrickStack:
    size = 4 * k + 8
    rect = [[0, size], [0, size]]
    z = 0
    h = rng.randint(1, 3)
    bricks = [Brick(tuple(rect[0]), tuple(rect[1]), (z, z + h))]
    for _ in range(k - 1):
        z += h
        h = rng.randint(1, 3)
        t = rng.randint(1, 4)
        moving = rng.sample(_SIDES, t)
        while t == 2 and moving[0][0] == moving[1][0]:
            moving = rng.sample(_SIDES, t)
        widths = (rect[0][1] - rect[0][0], rect[1][1] - rect[1][0])
        can_shrink = all(widths[a] - 2 * 3 >= 2 for a in range(2))
        d = rng.choice([UPPER_IN_LOWER, LOWER_IN_UPPER]) if can_shrink else LOWER_IN_UPPER
        new = [list(rect[0]), list(rect[1])]
        for axis, hi in moving:
            amount = rng.randint(1, 3)
            inward = 1 if d == UPPER_IN_LOWER else -1
            new[axis][hi] += (-amount if hi else amount) * inward
        rect = new
        bricks.append(Brick(tuple(rect[0]), tuple(rect[1]), (z, z + h)))
    return BrickStack(bricks)


def random_stack(rng: random.Random, k: int) -> BrickStack:
    """Random stack whose contacts are usually not canonical."""
    x0, y0 = 0, 0
    w, d = rng.randint(3, 8), rng.randint(3, 8)
    z = 0
    bricks = []
    for i in range(k):
        h = rng.randint(1, 3)
        if i:
            prev = bricks[-1]
            while True:
                w2, d2 = rng.randint(3, 8), rng.randint(3, 8)
                nx = rng.randint(int(prev.x[0]) - w2 + 1, int(prev.x[1]) - 1)
                ny = rng.randint(int(prev.y[0]) - d2 + 1, int(prev.y[1]) - 1)
                if (nx, nx + w2, ny, ny + d2) != (prev.x[0], prev.x[1], prev.y[0], prev.y[1]):
                    break
            x0, y0, w, d = nx, ny, w2, d2
        bricks.append(Brick((x0, x0 + w), (y0, y0 + d), (z, z + h)))
        z += h
    return BrickStack(bricks)
