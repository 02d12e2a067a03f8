"""Exact 2D predicates and a sampled planar arrangement of segments.

The arrangement is built by a vertical sweep: the plane is cut into open
slabs between consecutive vertex abscissae, every slab is cut into
trapezoids by the segments crossing it, and trapezoids that touch across a
slab boundary (through an opening not covered by a vertical segment) are
merged with a union-find.  Each class is one 2-cell; one exact interior
sample is kept per class.  1-cells are the elementary pieces of the
segments between consecutive vertices, 0-cells are the vertices.

Only cells strictly inside the caller's region are reported.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, Iterable, Iterator, List, Sequence, Tuple

from gmpy2 import mpq

Point2 = Tuple[mpq, mpq]
Segment2 = Tuple[Point2, Point2]

HALF = mpq(1, 2)

INSIDE, BOUNDARY, OUTSIDE = 1, 0, -1


def orient2d(a, b, c) -> int:
    v = (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])
    return (v > 0) - (v < 0)


def on_segment(p, a, b) -> bool:
    """True iff p lies on the closed segment ab."""
    if (b[0] - a[0]) * (p[1] - a[1]) != (b[1] - a[1]) * (p[0] - a[0]):
        return False
    return (min(a[0], b[0]) <= p[0] <= max(a[0], b[0])
            and min(a[1], b[1]) <= p[1] <= max(a[1], b[1]))


def point_in_loops(p, loops: Iterable[Sequence[Point2]]) -> int:
    """Classify p against the region bounded by ``loops`` (even-odd rule).

    Returns INSIDE, BOUNDARY or OUTSIDE.  Works for an outer loop plus
    holes given in any orientation.
    """
    px, py = p
    inside = False
    for loop in loops:
        n = len(loop)
        for i in range(n):
            a = loop[i]
            b = loop[i + 1] if i + 1 < n else loop[0]
            ax, ay = a
            bx, by = b
            if (ay > py) != (by > py):
                # x coordinate of the crossing compared to px, exactly
                lhs = (px - ax) * (by - ay)
                rhs = (bx - ax) * (py - ay)
                if lhs == rhs:
                    return BOUNDARY
                if (lhs < rhs) == (by > ay):
                    inside = not inside
            elif ay == py == by and min(ax, bx) <= px <= max(ax, bx):
                return BOUNDARY
            elif px == ax and py == ay:
                return BOUNDARY
    return INSIDE if inside else OUTSIDE


def segment_intersection(a, b, c, d):
    """Intersection of closed segments ab and cd.

    Returns None, a single point, or ("overlap", p, q) for collinear overlap.
    """
    r = (b[0] - a[0], b[1] - a[1])
    s = (d[0] - c[0], d[1] - c[1])
    denom = r[0] * s[1] - r[1] * s[0]
    qp = (c[0] - a[0], c[1] - a[1])
    if denom == 0:
        if qp[0] * r[1] - qp[1] * r[0] != 0:
            return None
        pts = sorted([a, b])
        qts = sorted([c, d])
        lo = max(pts[0], qts[0])
        hi = min(pts[1], qts[1])
        if lo > hi:
            return None
        if lo == hi:
            return lo
        return ("overlap", lo, hi)
    t = (qp[0] * s[1] - qp[1] * s[0]) / denom
    u = (qp[0] * r[1] - qp[1] * r[0]) / denom
    if 0 <= t <= 1 and 0 <= u <= 1:
        return (a[0] + r[0] * t, a[1] + r[1] * t)
    return None


def clip_line_to_box(p, d, box, t_min=None, t_max=None):
    """Clip the parametric line p + t*d to an axis-aligned box.

    ``box`` is (xmin, ymin, xmax, ymax).  Optional bounds restrict t (use
    t_min=0 for a ray).  Returns the clipped (start, end) or None.
    """
    lo, hi = t_min, t_max
    for axis in (0, 1):
        bmin, bmax = box[axis], box[axis + 2]
        if d[axis] == 0:
            if p[axis] < bmin or p[axis] > bmax:
                return None
            continue
        t1 = (bmin - p[axis]) / d[axis]
        t2 = (bmax - p[axis]) / d[axis]
        if t1 > t2:
            t1, t2 = t2, t1
        lo = t1 if lo is None or t1 > lo else lo
        hi = t2 if hi is None or t2 < hi else hi
    if lo is None or hi is None or lo > hi:
        return None
    return ((p[0] + d[0] * lo, p[1] + d[1] * lo),
            (p[0] + d[0] * hi, p[1] + d[1] * hi))


def _line_key(a, b):
    A = b[1] - a[1]
    B = a[0] - b[0]
    C = A * a[0] + B * a[1]
    lead = A if A != 0 else B
    return (A / lead, B / lead, C / lead)


@dataclass
class Arrangement:
    """Cells of a segment arrangement that lie strictly inside the region.

    ``faces`` holds one interior sample per 2-cell, ``edges`` holds
    (start, end, sample) per 1-cell and ``vertices`` the 0-cells.
    ``face_samples[i]`` lists every sweep-trapezoid sample of 2-cell i
    (the first is ``faces[i]``), which gives independent samples of one cell.
    """
    faces: List[Point2] = field(default_factory=list)
    face_samples: List[List[Point2]] = field(default_factory=list)
    edges: List[Tuple[Point2, Point2, Point2]] = field(default_factory=list)
    vertices: List[Point2] = field(default_factory=list)

    def samples(self) -> Iterator[Tuple[int, Point2]]:
        """Yield (dimension, sample) for every cell, 2-cells first."""
        for s in self.faces:
            yield 2, s
        for _, _, s in self.edges:
            yield 1, s
        for v in self.vertices:
            yield 0, v

    def counts(self) -> Tuple[int, int, int]:
        return len(self.faces), len(self.edges), len(self.vertices)


class _UnionFind:
    def __init__(self, n):
        self.parent = list(range(n))

    def find(self, x):
        parent = self.parent
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            if ra < rb:
                self.parent[rb] = ra
            else:
                self.parent[ra] = rb


def _merge_collinear(segments: List[Segment2]):
    """Group collinear segments, union overlapping ones, keep every endpoint."""
    groups: Dict[tuple, List[Segment2]] = {}
    for a, b in segments:
        if a > b:
            a, b = b, a
        groups.setdefault(_line_key(a, b), []).append((a, b))
    merged = []
    for segs in groups.values():
        segs.sort()
        cur_a, cur_b = segs[0]
        breaks = {cur_a, cur_b}
        for a, b in segs[1:]:
            if a <= cur_b:
                breaks.add(a)
                breaks.add(b)
                if b > cur_b:
                    cur_b = b
            else:
                merged.append((cur_a, cur_b, breaks))
                cur_a, cur_b = a, b
                breaks = {a, b}
        merged.append((cur_a, cur_b, breaks))
    return merged


def arrangement_2d(segments: Iterable[Segment2],
                   region: Sequence[Point2],
                   points: Iterable[Point2] = ()) -> Arrangement:
    """Subdivide the polygon ``region`` by ``segments`` and sample every cell.

    ``region`` is a simple polygon; its boundary is part of the arrangement
    but cells on it are not reported.  Collinear overlapping segments are
    merged.  Zero-length segments and ``points`` become isolated 0-cells.
    """
    region = [tuple(p) for p in region]
    segs: List[Segment2] = []
    isolated = set(tuple(p) for p in points)
    n = len(region)
    for i in range(n):
        a, b = region[i], region[(i + 1) % n]
        if a != b:
            segs.append((a, b))
    for a, b in segments:
        a, b = tuple(a), tuple(b)
        if a == b:
            isolated.add(a)
        else:
            segs.append((a, b))

    merged = _merge_collinear(segs)
    boxes = [(min(a[0], b[0]), min(a[1], b[1]), max(a[0], b[0]), max(a[1], b[1]))
             for a, b, _ in merged]
    m = len(merged)
    for i in range(m):
        ai, bi, brk_i = merged[i]
        bx_i = boxes[i]
        for j in range(i + 1, m):
            bx_j = boxes[j]
            if (bx_i[2] < bx_j[0] or bx_j[2] < bx_i[0]
                    or bx_i[3] < bx_j[1] or bx_j[3] < bx_i[1]):
                continue
            aj, bj, brk_j = merged[j]
            hit = segment_intersection(ai, bi, aj, bj)
            if hit is None:
                continue
            if hit[0] == "overlap":  # cannot happen after merging; be safe
                for p in hit[1:]:
                    brk_i.add(p)
                    brk_j.add(p)
            else:
                brk_i.add(hit)
                brk_j.add(hit)
    for p in isolated:
        for (a, b, brk), bx in zip(merged, boxes):
            if bx[0] <= p[0] <= bx[2] and bx[1] <= p[1] <= bx[3] and on_segment(p, a, b):
                brk.add(p)

    pieces = []
    vertex_set = set(isolated)
    for a, b, brk in merged:
        pts = sorted(brk)
        vertex_set.update(pts)
        for k in range(len(pts) - 1):
            pieces.append((pts[k], pts[k + 1]))

    result = Arrangement()
    region_loops = [region]

    for p in sorted(vertex_set):
        if point_in_loops(p, region_loops) == INSIDE:
            result.vertices.append(p)
    for a, b in pieces:
        mid = ((a[0] + b[0]) * HALF, (a[1] + b[1]) * HALF)
        if point_in_loops(mid, region_loops) == INSIDE:
            result.edges.append((a, b, mid))

    result.face_samples = _sweep_faces(pieces, sorted({p[0] for p in vertex_set}), region_loops)
    result.faces = [g[0] for g in result.face_samples]
    return result


def _sweep_faces(pieces, xs, region_loops) -> List[List[Point2]]:
    if len(xs) < 2:
        return []
    xindex = {x: i for i, x in enumerate(xs)}
    nslabs = len(xs) - 1
    per_slab: List[list] = [[] for _ in range(nslabs)]
    verticals: Dict[int, list] = {}
    for a, b in pieces:  # a < b lexicographically
        if a[0] == b[0]:
            verticals.setdefault(xindex[a[0]], []).append((a[1], b[1]))
            continue
        slope = (b[1] - a[1]) / (b[0] - a[0])
        line = (a[0], a[1], slope)
        for s in range(xindex[a[0]], xindex[b[0]]):
            per_slab[s].append(line)
    for v in verticals.values():
        v.sort()

    def y_at(line, x):
        return line[1] + line[2] * (x - line[0])

    traps = []          # (slab, lower line, upper line, sample)
    slab_traps = []     # per slab: list of trapezoid ids, bottom to top
    for s in range(nslabs):
        xm = (xs[s] + xs[s + 1]) * HALF
        lines = per_slab[s]
        keyed = sorted(((y_at(l, xm), k) for k, l in enumerate(lines)))
        ids = []
        for (y0, k0), (y1, k1) in zip(keyed, keyed[1:]):
            ids.append(len(traps))
            traps.append((s, lines[k0], lines[k1], (xm, (y0 + y1) * HALF)))
        slab_traps.append(ids)

    uf = _UnionFind(len(traps))
    for s in range(nslabs - 1):
        x = xs[s + 1]
        left = [(y_at(traps[t][1], x), y_at(traps[t][2], x), t) for t in slab_traps[s]]
        right = [(y_at(traps[t][1], x), y_at(traps[t][2], x), t) for t in slab_traps[s + 1]]
        vert = verticals.get(s + 1, [])
        i = j = 0
        while i < len(left) and j < len(right):
            lo = max(left[i][0], right[j][0])
            hi = min(left[i][1], right[j][1])
            if lo < hi and _has_gap(lo, hi, vert):
                uf.union(left[i][2], right[j][2])
            if left[i][1] < right[j][1]:
                i += 1
            else:
                j += 1

    groups: Dict[int, List[Point2]] = {}
    for t in range(len(traps)):
        r = uf.find(t)
        if r not in groups:
            groups[r] = [traps[r][3]]
        if t != r:
            groups[r].append(traps[t][3])
    return [g for _, g in sorted(groups.items())
            if point_in_loops(g[0], region_loops) == INSIDE]


def _has_gap(lo, hi, vert) -> bool:
    """True iff the open interval (lo, hi) is not covered by ``vert``."""
    cur = lo
    for va, vb in vert:
        if vb <= cur:
            continue
        if va >= hi:
            break
        if va > cur:
            return True
        cur = vb
        if cur >= hi:
            return False
    return cur < hi
