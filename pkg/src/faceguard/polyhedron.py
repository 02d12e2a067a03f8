"""Polyhedra with exact vertices: validation, edges, classification, I/O.

A face is an outer loop plus optional hole loops of vertex indices.  The
outer loop winds counterclockwise seen from outside (right-hand rule gives
the outward normal) and holes wind the other way.
"""
from __future__ import annotations

import json
import logging
from collections import defaultdict
from dataclasses import dataclass, field
from functools import cached_property
from typing import Dict, Iterable, List, NamedTuple, Optional, Sequence, Tuple

import numpy as np

from .arrangement import INSIDE, orient2d, point_in_loops
from .kernel import (HALF, Plane, Q, ZERO, cross, dot, is_zero, scalar_to_str,
                     sign_normalized, sub)

log = logging.getLogger(__name__)


class PolyhedronError(ValueError):
    pass


@dataclass(frozen=True)
class FaceRecord:
    outer: Tuple[int, ...]
    holes: Tuple[Tuple[int, ...], ...] = ()
    plane: Optional[Plane] = field(default=None, compare=False, repr=False)
    outward_normal: Optional[tuple] = field(default=None, compare=False, repr=False)

    @property
    def loops(self) -> Tuple[Tuple[int, ...], ...]:
        return (self.outer,) + tuple(self.holes)


class EdgeRecord(NamedTuple):
    endpoints: Tuple[int, int]
    incident_faces: Tuple[int, int]
    dihedral: str            # "convex", "reflex" or "flat-forbidden"
    direction: tuple


class Violation(NamedTuple):
    kind: str
    where: tuple
    message: str


def newell(points: Sequence) -> tuple:
    """Twice the vector area of a closed polygon (exact)."""
    nx = ny = nz = ZERO
    n = len(points)
    for i in range(n):
        x0, y0, z0 = points[i]
        x1, y1, z1 = points[(i + 1) % n]
        nx += (y0 - y1) * (z0 + z1)
        ny += (z0 - z1) * (x0 + x1)
        nz += (x0 - x1) * (y0 + y1)
    return (nx, ny, nz)


def drop_axis(normal) -> int:
    """Coordinate to drop when projecting a face with this normal to 2D."""
    a = [abs(c) for c in normal]
    return max(range(3), key=lambda i: (a[i], -i))


def to_2d(p, axis: int):
    if axis == 0:
        return (p[1], p[2])
    if axis == 1:
        return (p[0], p[2])
    return (p[0], p[1])


def lift(uv, plane: Plane, axis: int):
    """Inverse of :func:`to_2d` for points on ``plane``."""
    n, off = plane.normal, plane.offset
    u, v = uv
    if axis == 0:
        return ((off - n[1] * u - n[2] * v) / n[0], u, v)
    if axis == 1:
        return (u, (off - n[0] * u - n[2] * v) / n[1], v)
    return (u, v, (off - n[0] * u - n[1] * v) / n[2])


def _line_key3(a, b):
    d = sign_normalized(sub(b, a))
    return (d, cross(d, a))


def split_loops_at_collinear_vertices(vertices, loops_by_face):
    """Insert every vertex lying strictly inside a loop edge into that edge.

    Only endpoints of collinear loop edges are candidates, which is enough
    for 2-manifolds: if a vertex sits on an edge of one face, the face on
    the other side has an edge ending there.
    """
    line_pts: Dict[tuple, set] = defaultdict(set)
    for loops in loops_by_face:
        for loop in loops:
            n = len(loop)
            for i in range(n):
                a, b = loop[i], loop[(i + 1) % n]
                if a == b:
                    continue
                key = _line_key3(vertices[a], vertices[b])
                line_pts[key].add(a)
                line_pts[key].add(b)
    out = []
    for loops in loops_by_face:
        new_loops = []
        for loop in loops:
            n = len(loop)
            new = []
            for i in range(n):
                a, b = loop[i], loop[(i + 1) % n]
                new.append(a)
                if a == b:
                    continue
                pa, pb = vertices[a], vertices[b]
                cand = line_pts[_line_key3(pa, pb)]
                if len(cand) <= 2:
                    continue
                d = sub(pb, pa)
                dd = dot(d, d)
                inner = []
                for c in cand:
                    if c == a or c == b:
                        continue
                    t = dot(sub(vertices[c], pa), d) / dd
                    if 0 < t < 1:
                        inner.append((t, c))
                inner.sort()
                new.extend(c for _, c in inner)
            new_loops.append(tuple(new))
        out.append(tuple(new_loops))
    return out


class Polyhedron:
    """Vertices plus faces; derived planes, edges and 2D face data are cached."""

    def __init__(self, vertices: Sequence, faces: Sequence):
        self.vertices: List[tuple] = [(Q(v[0]), Q(v[1]), Q(v[2])) for v in vertices]
        recs = []
        for f in faces:
            if isinstance(f, FaceRecord):
                outer, holes = f.outer, f.holes
            elif isinstance(f, dict):
                outer, holes = f["outer"], f.get("holes", ())
            else:
                outer, holes = f, ()
            outer = tuple(int(i) for i in outer)
            holes = tuple(tuple(int(i) for i in h) for h in holes)
            pts = [self.vertices[i] for i in outer]
            n = newell(pts)
            plane = Plane(n, dot(n, pts[0])) if not is_zero(n) else None
            recs.append(FaceRecord(outer, holes, plane, n))
        self.faces: List[FaceRecord] = recs

    @property
    def f(self) -> int:
        return len(self.faces)

    def __repr__(self):
        return "Polyhedron(V=%d, f=%d)" % (len(self.vertices), self.f)

    def __eq__(self, other):
        if not isinstance(other, Polyhedron):
            return NotImplemented
        return self.canonical_form() == other.canonical_form()

    def canonical_form(self):
        """Faces as coordinate loops, rotation- and order-independent."""
        def canon_loop(loop):
            pts = [self.vertices[i] for i in loop]
            k = pts.index(min(pts))
            return tuple(pts[k:] + pts[:k])
        faces = []
        for fr in self.faces:
            faces.append((canon_loop(fr.outer),
                          tuple(sorted(canon_loop(h) for h in fr.holes))))
        return tuple(sorted(faces))

    # -- derived geometry ---------------------------------------------------
    def loop_points(self, loop) -> List[tuple]:
        return [self.vertices[i] for i in loop]

    @cached_property
    def face_axes(self) -> List[int]:
        return [drop_axis(fr.outward_normal) for fr in self.faces]

    @cached_property
    def face_loops_2d(self) -> List[List[List[tuple]]]:
        out = []
        for fr, ax in zip(self.faces, self.face_axes):
            out.append([[to_2d(self.vertices[i], ax) for i in loop] for loop in fr.loops])
        return out

    @cached_property
    def face_bboxes(self) -> List[Tuple[tuple, tuple]]:
        out = []
        for fr in self.faces:
            pts = self.loop_points(fr.outer)
            out.append((tuple(min(p[k] for p in pts) for k in range(3)),
                        tuple(max(p[k] for p in pts) for k in range(3))))
        return out

    @cached_property
    def bbox(self):
        vs = self.vertices
        return (tuple(min(v[k] for v in vs) for k in range(3)),
                tuple(max(v[k] for v in vs) for k in range(3)))

    def face_contains(self, fi: int, p) -> int:
        """INSIDE / BOUNDARY / OUTSIDE of a point already on the face's plane."""
        lo, hi = self.face_bboxes[fi]
        for k in range(3):
            if p[k] < lo[k] or p[k] > hi[k]:
                return -1
        return point_in_loops(to_2d(p, self.face_axes[fi]), self.face_loops_2d[fi])

    def point_on_face(self, fi: int, p) -> int:
        """Like face_contains but first checks the plane."""
        if not self.faces[fi].plane.contains(p):
            return -1
        return self.face_contains(fi, p)

    @cached_property
    def split_loops(self):
        return split_loops_at_collinear_vertices(
            self.vertices, [fr.loops for fr in self.faces])

    @cached_property
    def edges(self) -> List[EdgeRecord]:
        return derive_edges(self)

    @cached_property
    def face_centroids(self) -> List[tuple]:
        """Vertex average of each outer loop (not necessarily inside the face)."""
        out = []
        for fr in self.faces:
            pts = self.loop_points(fr.outer)
            n = len(pts)
            out.append(tuple(sum((p[k] for p in pts), ZERO) / n for k in range(3)))
        return out

    # -- I/O ---------------------------------------------------------------
    def to_json_dict(self) -> dict:
        return {
            "vertices": [[scalar_to_str(c) for c in v] for v in self.vertices],
            "faces": [{"outer": list(fr.outer), "holes": [list(h) for h in fr.holes]}
                      for fr in self.faces],
        }

    @classmethod
    def from_json_dict(cls, d: dict) -> "Polyhedron":
        try:
            verts = [tuple(Q(c) for c in v) for v in d["vertices"]]
            faces = [{"outer": fd["outer"], "holes": fd.get("holes", [])} for fd in d["faces"]]
        except (KeyError, TypeError, ValueError) as exc:
            raise PolyhedronError("malformed polyhedron JSON: %s" % exc) from exc
        return cls(verts, faces)

    def dumps(self) -> str:
        return json.dumps(self.to_json_dict())

    @classmethod
    def loads(cls, text: str) -> "Polyhedron":
        return cls.from_json_dict(json.loads(text))


# -- validation and edges ---------------------------------------------------

def _directed_edges(p: Polyhedron):
    """Map (a, b) -> list of face indices traversing a->b, after T-splitting."""
    de = defaultdict(list)
    for fi, loops in enumerate(p.split_loops):
        for loop in loops:
            n = len(loop)
            for i in range(n):
                de[(loop[i], loop[(i + 1) % n])].append(fi)
    return de


def validate(p: Polyhedron) -> List[Violation]:
    out: List[Violation] = []
    for fi, fr in enumerate(p.faces):
        for loop in fr.loops:
            n = len(loop)
            if n < 3 or len(set(loop)) != n:
                out.append(Violation("degenerate-loop", (fi,), "face %d has a degenerate loop" % fi))
                continue
            pts = p.loop_points(loop)
            if is_zero(newell(pts)):
                out.append(Violation("degenerate-loop", (fi,), "face %d has a zero-area loop" % fi))
        if fr.plane is None:
            continue
        for loop in fr.loops:
            if any(not fr.plane.contains(p.vertices[i]) for i in loop):
                out.append(Violation("non-planar", (fi,), "face %d is not planar" % fi))
                break
        for h in fr.holes:
            hn = newell(p.loop_points(h))
            if dot(hn, fr.outward_normal) >= 0:
                out.append(Violation("hole-winding", (fi,), "face %d has a hole wound like its outer loop" % fi))
        used = [i for loop in fr.loops for i in loop]
        if len(used) != len(set(used)):
            log.warning("face %d has loops touching at a vertex (degenerate contact)", fi)
    if any(v.kind == "degenerate-loop" for v in out):
        return out

    de = _directed_edges(p)
    seen = set()
    for (a, b), fl in de.items():
        key = (min(a, b), max(a, b))
        if key in seen:
            continue
        seen.add(key)
        fwd = len(fl)
        bwd = len(de.get((b, a), ()))
        if fwd + bwd != 2:
            out.append(Violation("non-manifold", key, "edge %s is used %d times" % (key, fwd + bwd)))
        elif fwd == 2 or bwd == 2:
            out.append(Violation("inconsistent-winding", key, "edge %s is traversed twice in the same direction" % (key,)))
        else:
            f1, f2 = fl[0], de[(b, a)][0]
            if f1 == f2:
                out.append(Violation("self-adjacent", key, "edge %s borders face %d on both sides" % (key, f1)))
            elif p.faces[f1].plane == p.faces[f2].plane:
                out.append(Violation("coplanar-adjacent", (f1, f2),
                                     "faces %d and %d are coplanar across edge %s" % (f1, f2, key)))
    return out


def derive_edges(p: Polyhedron) -> List[EdgeRecord]:
    de = _directed_edges(p)
    edges = []
    for (a, b), fl in sorted(de.items()):
        if a > b:
            continue
        back = de.get((b, a), [])
        if len(fl) != 1 or len(back) != 1:
            raise PolyhedronError("non-manifold edge %s-%s (%s)" % (
                p.vertices[a], p.vertices[b], "used %d times" % (len(fl) + len(back))))
        f1, f2 = fl[0], back[0]
        d = sub(p.vertices[b], p.vertices[a])
        s = dot(cross(p.faces[f1].outward_normal, p.faces[f2].outward_normal), d)
        kind = "convex" if s > 0 else "reflex" if s < 0 else "flat-forbidden"
        edges.append(EdgeRecord((a, b), (f1, f2), kind, d))
    if len(edges) * 2 != sum(len(v) for v in de.values()):
        raise PolyhedronError("unpaired directed edges")
    return edges


# -- classification ---------------------------------------------------------

class OrientationProfile(NamedTuple):
    classes: List[Tuple[tuple, int]]   # (direction up to sign, face count)

    @property
    def c(self) -> int:
        return len(self.classes)

    @property
    def is_orthogonal(self) -> bool:
        if self.c != 3:
            return False
        v = [d for d, _ in self.classes]
        return dot(v[0], v[1]) == 0 and dot(v[0], v[2]) == 0 and dot(v[1], v[2]) == 0

    def is_c_oriented(self, c: int) -> bool:
        return self.c <= c


def orientation_profile(p: Polyhedron) -> OrientationProfile:
    counts: Dict[tuple, int] = defaultdict(int)
    for fr in p.faces:
        counts[sign_normalized(fr.outward_normal)] += 1
    classes = sorted(counts.items(), key=lambda kv: (-kv[1], kv[0]))
    return OrientationProfile(classes)


def reflex_directions(p: Polyhedron):
    """Reflex edge directions (up to sign) and whether they are all horizontal."""
    if not orientation_profile(p).is_orthogonal:
        raise PolyhedronError("reflex_directions needs an orthogonal polyhedron")
    dirs = {sign_normalized(e.direction) for e in p.edges if e.dihedral == "reflex"}
    return dirs, all(d[2] == 0 for d in dirs)


class EulerRecord(NamedTuple):
    V: int
    E: int
    F: int
    holes: int
    chi: int
    genus: int


def euler_characteristic(p: Polyhedron) -> List[EulerRecord]:
    """Per boundary component: V - E + F - (hole loops) = 2 - 2g.

    A face with h holes is not a disc, so each hole lowers its Euler
    contribution by one.
    """
    parent = list(range(p.f))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for e in p.edges:
        a, b = find(e.incident_faces[0]), find(e.incident_faces[1])
        if a != b:
            parent[a] = b
    comps = defaultdict(lambda: [set(), 0, 0, 0])
    for fi, fr in enumerate(p.faces):
        c = comps[find(fi)]
        c[2] += 1
        c[3] += len(fr.holes)
        for loop in p.split_loops[fi]:
            c[0].update(loop)
    for e in p.edges:
        comps[find(e.incident_faces[0])][1] += 1
    out = []
    for root in sorted(comps):
        vs, E, F, H = comps[root]
        chi = len(vs) - E + F - H
        out.append(EulerRecord(len(vs), E, F, H, chi, (2 - chi) // 2))
    return out


# -- construction -----------------------------------------------------------

def _chain_loops(edges: List[Tuple[int, int]], vertices, axis: int, normal) -> List[List[int]]:
    """Chain directed boundary edges into closed loops.

    At pinch vertices (several outgoing edges) the sharpest left turn is
    taken, which keeps loops from crossing.
    """
    out_edges: Dict[int, List[int]] = defaultdict(list)
    for a, b in edges:
        out_edges[a].append(b)
    flip = normal[axis] < 0   # 2D orientation is mirrored when the normal points down the axis

    def left_score(prev, cur, nxt):
        # smaller is further left; compare by angle class without trig
        p0, p1, p2 = (to_2d(vertices[i], axis) for i in (prev, cur, nxt))
        d1 = (p1[0] - p0[0], p1[1] - p0[1])
        d2 = (p2[0] - p1[0], p2[1] - p1[1])
        if flip:
            d1, d2 = (d1[0], -d1[1]), (d2[0], -d2[1])
        cr = d1[0] * d2[1] - d1[1] * d2[0]
        dt = d1[0] * d2[0] + d1[1] * d2[1]
        # order: left turns (cr>0), straight, right turns, reversal
        if cr > 0:
            return (0, -dt / (abs(d1[0]) + abs(d1[1])) / (abs(d2[0]) + abs(d2[1])))
        if cr == 0 and dt > 0:
            return (1, 0)
        if cr < 0:
            return (2, dt / (abs(d1[0]) + abs(d1[1])) / (abs(d2[0]) + abs(d2[1])))
        return (3, 0)

    loops = []
    remaining = sum(len(v) for v in out_edges.values())
    while remaining:
        start = min(a for a, v in out_edges.items() if v)
        loop = [start]
        prev, cur = None, start
        while True:
            cands = out_edges[cur]
            if prev is None or len(cands) == 1:
                nxt = cands[0]
            else:
                nxt = min(cands, key=lambda c: left_score(prev, cur, c))
            cands.remove(nxt)
            remaining -= 1
            prev, cur = cur, nxt
            if cur == start and (not out_edges[start] or prev is not None):
                break
            loop.append(cur)
        loops.append(loop)
    return loops


def merge_coplanar_faces(vertices, faces=None) -> Polyhedron:
    """Union adjacent coplanar faces with the same outward normal.

    Accepts a Polyhedron or a raw (vertices, faces) mesh.  Faces may be
    index lists or FaceRecords.  Vertices are deduplicated exactly and
    collinear vertices that are not a corner of any face are dropped.
    """
    if isinstance(vertices, Polyhedron):
        raw = vertices
    else:
        raw = Polyhedron(vertices, faces)
    # exact vertex dedup
    index: Dict[tuple, int] = {}
    verts: List[tuple] = []
    remap = []
    for v in raw.vertices:
        if v not in index:
            index[v] = len(verts)
            verts.append(v)
        remap.append(index[v])
    face_loops = []
    planes = []
    for fr in raw.faces:
        loops = []
        for loop in fr.loops:
            l2 = [remap[i] for i in loop]
            l2 = [x for k, x in enumerate(l2) if x != l2[k - 1]] if len(l2) > 1 else l2
            loops.append(tuple(l2))
        face_loops.append(tuple(loops))
        if fr.plane is None:
            raise PolyhedronError("degenerate face in raw mesh")
        planes.append(fr.plane)
    split = split_loops_at_collinear_vertices(verts, face_loops)

    nf = len(split)
    parent = list(range(nf))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    owner: Dict[Tuple[int, int], int] = {}
    for fi, loops in enumerate(split):
        for loop in loops:
            n = len(loop)
            for i in range(n):
                owner[(loop[i], loop[(i + 1) % n])] = fi
    same_side = {}
    for (a, b), fi in owner.items():
        g = owner.get((b, a))
        if g is None or g == fi:
            continue
        key = (min(fi, g), max(fi, g))
        if key in same_side:
            continue
        ok = planes[fi] == planes[g] and dot(raw.faces[fi].outward_normal,
                                             raw.faces[g].outward_normal) > 0
        same_side[key] = ok
        if ok:
            ra, rb = find(fi), find(g)
            if ra != rb:
                parent[max(ra, rb)] = min(ra, rb)

    groups: Dict[int, List[int]] = defaultdict(list)
    for fi in range(nf):
        groups[find(fi)].append(fi)

    merged_loops = []   # per group: (normal, list of loops)
    for root in sorted(groups):
        members = groups[root]
        normal = raw.faces[root].outward_normal
        if len(members) == 1:
            merged_loops.append((normal, [list(l) for l in split[root]]))
            continue
        directed = []
        for fi in members:
            for loop in split[fi]:
                n = len(loop)
                for i in range(n):
                    directed.append((loop[i], loop[(i + 1) % n]))
        dset = set(directed)
        boundary = [e for e in directed if (e[1], e[0]) not in dset]
        axis = drop_axis(normal)
        merged_loops.append((normal, _chain_loops(boundary, verts, axis, normal)))

    # vertices that are a true corner in at least one loop are kept
    essential = set()
    for normal, loops in merged_loops:
        for loop in loops:
            n = len(loop)
            for i in range(n):
                a, b, c = verts[loop[i - 1]], verts[loop[i]], verts[loop[(i + 1) % n]]
                if not is_zero(cross(sub(b, a), sub(c, b))) or dot(sub(b, a), sub(c, b)) < 0:
                    essential.add(loop[i])

    faces_out = []
    for normal, loops in merged_loops:
        cleaned = [[i for i in loop if i in essential] for loop in loops]
        outers, holes = [], []
        for loop in cleaned:
            s = dot(newell([verts[i] for i in loop]), normal)
            (outers if s > 0 else holes).append(loop)
        if len(outers) != 1:
            raise PolyhedronError("merged face region is disconnected (%d outer loops)" % len(outers))
        faces_out.append(FaceRecord(tuple(outers[0]), tuple(tuple(h) for h in holes)))

    used = sorted({i for fr in faces_out for loop in fr.loops for i in loop})
    new_index = {old: k for k, old in enumerate(used)}
    final_faces = [{"outer": [new_index[i] for i in fr.outer],
                    "holes": [[new_index[i] for i in h] for h in fr.holes]} for fr in faces_out]
    return Polyhedron([verts[i] for i in used], final_faces)


Box = Tuple[Tuple, Tuple, Tuple]   # ((x0, x1), (y0, y1), (z0, z1))


def from_boxes(boxes: Iterable[Box], carve: Iterable[Box] = ()) -> Polyhedron:
    """Orthogonal polyhedron bounding (union of boxes) minus (union of carve boxes).

    The solid is voxelized on the grid of all box coordinates, every
    exposed cell side becomes an oriented quad, and the quads are merged
    into maximal faces.
    """
    boxes = [tuple((Q(a), Q(b)) for a, b in bx) for bx in boxes]
    carve = [tuple((Q(a), Q(b)) for a, b in bx) for bx in carve]
    for bx in boxes + carve:
        if any(a >= b for a, b in bx):
            raise PolyhedronError("box with non-positive extent: %r" % (bx,))
    coords = [sorted({c for bx in boxes + carve for c in bx[k]}) for k in range(3)]
    idx = [{c: i for i, c in enumerate(cs)} for cs in coords]
    shape = tuple(len(cs) - 1 for cs in coords)
    filled = np.zeros(shape, dtype=bool)
    for bx in boxes:
        filled[tuple(slice(idx[k][bx[k][0]], idx[k][bx[k][1]]) for k in range(3))] = True
    for bx in carve:
        filled[tuple(slice(idx[k][bx[k][0]], idx[k][bx[k][1]]) for k in range(3))] = False
    padded = np.pad(filled, 1)

    vindex: Dict[tuple, int] = {}
    verts: List[tuple] = []

    def vid(pt):
        if pt not in vindex:
            vindex[pt] = len(verts)
            verts.append(pt)
        return vindex[pt]

    quads = []
    for axis in range(3):
        b_ax, c_ax = (axis + 1) % 3, (axis + 2) % 3
        for direction in (1, -1):
            shifted = np.roll(padded, -direction, axis=axis)
            exposed = padded & ~shifted
            exposed = exposed[1:-1, 1:-1, 1:-1]
            for cell in zip(*np.nonzero(exposed)):
                lo = [coords[k][cell[k]] for k in range(3)]
                hi = [coords[k][cell[k] + 1] for k in range(3)]
                plane_val = hi[axis] if direction == 1 else lo[axis]
                corners = []
                for bb, cc in ((lo[b_ax], lo[c_ax]), (hi[b_ax], lo[c_ax]),
                               (hi[b_ax], hi[c_ax]), (lo[b_ax], hi[c_ax])):
                    pt = [None, None, None]
                    pt[axis], pt[b_ax], pt[c_ax] = plane_val, bb, cc
                    corners.append(vid(tuple(pt)))
                if direction == -1:
                    corners.reverse()
                quads.append(corners)
    if not quads:
        raise PolyhedronError("empty solid")
    p = merge_coplanar_faces(verts, quads)
    bad = [v for v in validate(p) if v.kind == "non-manifold"]
    if bad:
        raise PolyhedronError("boxes touch along an edge: %s" % bad[0].message)
    return p


def box(x, y, z) -> Polyhedron:
    return from_boxes([(x, y, z)])


Prism = Tuple[Sequence[Tuple], object, object]


def from_prisms(prisms: Iterable[Prism]) -> Polyhedron:
    """Union of vertical prisms (footprint polygon, z_lo, z_hi).

    Footprints must have integer vertices and edges parallel to x = 0,
    y = 0 or x + y = 0.  Each unit square is split along its anti-diagonal
    into two half cells, so every such footprint is a union of half cells
    and the union is computed exactly on that grid.
    """
    prisms = [([(Q(u), Q(v)) for u, v in poly], Q(z0), Q(z1)) for poly, z0, z1 in prisms]
    if not prisms:
        raise PolyhedronError("empty solid")
    for poly, z0, z1 in prisms:
        if z0 >= z1:
            raise PolyhedronError("prism with non-positive height")
        for u, v in poly:
            if u.denominator != 1 or v.denominator != 1:
                raise PolyhedronError("prism footprints need integer vertices")
        for a, b in zip(poly, poly[1:] + poly[:1]):
            du, dv = b[0] - a[0], b[1] - a[1]
            if du and dv and du != -dv:
                raise PolyhedronError("footprint edge %r-%r is not axis or anti-diagonal" % (a, b))
    levels = sorted({z for _, z0, z1 in prisms for z in (z0, z1)})
    us = [int(u) for poly, _, _ in prisms for u, _ in poly]
    vs = [int(v) for poly, _, _ in prisms for _, v in poly]
    third, two_thirds = Q(1) / 3, Q(2) / 3

    def cell_tri(i, j, t):
        if t == 0:
            return [(i, j), (i + 1, j), (i, j + 1)]
        return [(i + 1, j), (i + 1, j + 1), (i, j + 1)]

    filled = set()
    for li in range(len(levels) - 1):
        zlo, zhi = levels[li], levels[li + 1]
        layer_polys = [poly for poly, z0, z1 in prisms if z0 <= zlo and zhi <= z1]
        for i in range(min(us), max(us)):
            for j in range(min(vs), max(vs)):
                for t, off in ((0, third), (1, two_thirds)):
                    c = (i + off, j + off)
                    if any(point_in_loops(c, [poly]) == INSIDE for poly in layer_polys):
                        filled.add((li, i, j, t))

    vindex: Dict[tuple, int] = {}
    verts: List[tuple] = []

    def vid(pt):
        pt = tuple(Q(c) for c in pt)
        if pt not in vindex:
            vindex[pt] = len(verts)
            verts.append(pt)
        return vindex[pt]

    def neighbours(i, j, t):
        # (edge start, edge end, neighbour cell) with edges ccw seen from above
        tri = cell_tri(i, j, t)
        if t == 0:
            nb = [(i, j - 1, 1), (i, j, 1), (i - 1, j, 1)]
        else:
            nb = [(i + 1, j, 0), (i, j + 1, 0), (i, j, 0)]
        return [(tri[e], tri[(e + 1) % 3], nb[e]) for e in range(3)]

    polys = []
    cells = {(i, j, t) for _, i, j, t in filled}
    for i, j, t in cells:
        tri = cell_tri(i, j, t)
        for l, z in enumerate(levels):
            below = (l - 1, i, j, t) in filled
            above = (l, i, j, t) in filled
            if below and not above:
                polys.append([vid((u, v, z)) for u, v in tri])
            elif above and not below:
                polys.append([vid((u, v, z)) for u, v in reversed(tri)])
    for li, i, j, t in filled:
        zlo, zhi = levels[li], levels[li + 1]
        for a, b, (ni, nj, nt) in neighbours(i, j, t):
            if (li, ni, nj, nt) not in filled:
                polys.append([vid((a[0], a[1], zlo)), vid((b[0], b[1], zlo)),
                              vid((b[0], b[1], zhi)), vid((a[0], a[1], zhi))])
    return merge_coplanar_faces(verts, polys)


class Piece(NamedTuple):
    """Convex block a <= x <= b, c <= y <= d, e <= z <= f, g <= x+y+z <= h."""
    x: Tuple[int, int]
    y: Tuple[int, int]
    z: Tuple[int, int]
    s: Tuple[int, int] = (-10 ** 9, 10 ** 9)

    def holds(self, p) -> bool:
        return (self.x[0] <= p[0] <= self.x[1] and self.y[0] <= p[1] <= self.y[1]
                and self.z[0] <= p[2] <= self.z[1] and self.s[0] <= sum(p) <= self.s[1])


_CUBE_PARTS = ((Q(1) / 4,) * 3, (HALF,) * 3, (Q(3) / 4,) * 3)


def _cell_facets(i, j, l, t):
    """Facets of lattice cell t of cube (i, j, l) as (corner list, neighbour cell)."""
    out = []
    base = (i, j, l)
    for ax in range(3):
        b, c = (ax + 1) % 3, (ax + 2) % 3

        def corner(a_off, b_off, c_off):
            p = [0, 0, 0]
            p[ax], p[b], p[c] = base[ax] + a_off, base[b] + b_off, base[c] + c_off
            return tuple(p)

        low_tri = [corner(0, 0, 0), corner(0, 1, 0), corner(0, 0, 1)]
        high_tri = [corner(0, 1, 0), corner(0, 1, 1), corner(0, 0, 1)]
        step = [0, 0, 0]
        step[ax] = 1
        lower = (i - step[0], j - step[1], l - step[2])
        upper = (i + step[0], j + step[1], l + step[2])
        if t == 0:
            out.append((low_tri, lower + (1,)))
        elif t == 1:
            out.append((high_tri, lower + (2,)))
            out.append(([tuple(q + s for q, s in zip(v, step)) for v in low_tri], upper + (0,)))
        else:
            out.append(([tuple(q + s for q, s in zip(v, step)) for v in high_tri], upper + (1,)))
    cube = [(i + a, j + b, l + c) for a in (0, 1) for b in (0, 1) for c in (0, 1)]
    s0 = i + j + l
    diag1 = [v for v in cube if sum(v) == s0 + 1]
    diag2 = [v for v in cube if sum(v) == s0 + 2]
    if t == 0:
        out.append((diag1, (i, j, l, 1)))
    elif t == 1:
        out.append((diag1, (i, j, l, 0)))
        out.append((diag2, (i, j, l, 2)))
    else:
        out.append((diag2, (i, j, l, 1)))
    return out


def from_pieces(pieces: Iterable[Piece]) -> Polyhedron:
    """Union of integer blocks bounded by planes x, y, z, x+y+z = const.

    Every unit cube splits along x+y+z into two corner tetrahedra and a
    middle octahedron, and each block is a union of such cells, so the
    union is computed exactly cell by cell.  The four plane classes are an
    affine image of the face directions of a regular tetrahedron.
    """
    pieces = [Piece(*[tuple(int(v) for v in rng) for rng in pc]) for pc in pieces]
    if not pieces:
        raise PolyhedronError("empty solid")
    for pc in pieces:
        if any(lo >= hi for lo, hi in (pc.x, pc.y, pc.z)) or pc.s[0] >= pc.s[1]:
            raise PolyhedronError("degenerate piece %r" % (pc,))
    filled = set()
    for pc in pieces:
        for i in range(pc.x[0], pc.x[1]):
            for j in range(pc.y[0], pc.y[1]):
                if i + j + pc.z[1] - 1 < pc.s[0] - 2 or i + j + pc.z[0] > pc.s[1]:
                    continue
                for l in range(pc.z[0], pc.z[1]):
                    for t, off in enumerate(_CUBE_PARTS):
                        if pc.holds((i + off[0], j + off[1], l + off[2])):
                            filled.add((i, j, l, t))
    if not filled:
        raise PolyhedronError("empty solid")
    vindex: Dict[tuple, int] = {}
    verts: List[tuple] = []

    def vid(pt):
        pt = tuple(Q(c) for c in pt)
        if pt not in vindex:
            vindex[pt] = len(verts)
            verts.append(pt)
        return vindex[pt]

    polys = []
    for cell in filled:
        i, j, l, t = cell
        centre = tuple(c + o for c, o in zip((i, j, l), _CUBE_PARTS[t]))
        for corners, nb in _cell_facets(i, j, l, t):
            if nb in filled:
                continue
            pts = [tuple(Q(c) for c in v) for v in corners]
            n = cross(sub(pts[1], pts[0]), sub(pts[2], pts[0]))
            if dot(n, sub(pts[0], centre)) < 0:
                pts.reverse()
            polys.append([vid(v) for v in pts])
    return merge_coplanar_faces(verts, polys)


# -- export -----------------------------------------------------------------

def _bridge_holes(outer: List[int], holes: List[List[int]], pts2) -> List[int]:
    """Splice hole loops into the outer loop through visible bridge edges."""
    poly = list(outer)
    holes = sorted(holes, key=lambda h: -max(pts2[i][0] for i in h))

    def crosses(a, b, c, d):
        pa, pb, pc, pd = pts2[a], pts2[b], pts2[c], pts2[d]
        if len({pa, pb, pc, pd}) < 4:
            return False
        o1, o2 = orient2d(pa, pb, pc), orient2d(pa, pb, pd)
        o3, o4 = orient2d(pc, pd, pa), orient2d(pc, pd, pb)
        if o1 == 0 and o2 == 0:
            return False
        return o1 * o2 <= 0 and o3 * o4 <= 0

    for hi, hole in enumerate(holes):
        k = max(range(len(hole)), key=lambda i: (pts2[hole[i]][0], pts2[hole[i]][1]))
        h = hole[k]
        others = holes[hi + 1:]
        ph = pts2[h]
        order = sorted(range(len(poly)), key=lambda i: (pts2[poly[i]][0] - ph[0]) ** 2 + (pts2[poly[i]][1] - ph[1]) ** 2)
        chosen = None
        for i in order:
            o = poly[i]
            if pts2[o] == ph:
                continue
            segs = [(poly[j], poly[(j + 1) % len(poly)]) for j in range(len(poly))]
            segs += [(hl[j], hl[(j + 1) % len(hl)]) for hl in [hole] + others for j in range(len(hl))]
            if any(crosses(h, o, a, b) for a, b in segs):
                continue
            chosen = i
            break
        if chosen is None:
            chosen = order[0]
        rotated = hole[k:] + hole[:k]
        poly = poly[:chosen + 1] + rotated + [h] + poly[chosen:]
    return poly


def _ear_clip(poly: List[int], pts2) -> List[Tuple[int, int, int]]:
    idx = list(poly)
    tris = []
    guard = 0
    while len(idx) > 3 and guard < 10 * len(poly) ** 2:
        guard += 1
        n = len(idx)
        for i in range(n):
            a, b, c = idx[i - 1], idx[i], idx[(i + 1) % n]
            pa, pb, pc = pts2[a], pts2[b], pts2[c]
            if orient2d(pa, pb, pc) <= 0:
                continue
            ok = True
            for j in idx:
                pj = pts2[j]
                if pj in (pa, pb, pc):
                    continue
                if (orient2d(pa, pb, pj) >= 0 and orient2d(pb, pc, pj) >= 0
                        and orient2d(pc, pa, pj) >= 0):
                    ok = False
                    break
            if ok:
                tris.append((a, b, c))
                del idx[i]
                break
        else:
            break
    if len(idx) == 3:
        tris.append(tuple(idx))
    return tris


def to_obj(p: Polyhedron, digits: int = 12) -> str:
    """Wavefront OBJ text (lossy decimal coordinates, triangulated faces)."""
    lines = ["# faceguard export: %d vertices, %d faces" % (len(p.vertices), p.f)]
    for v in p.vertices:
        lines.append("v " + " ".join("%.*g" % (digits, float(c)) for c in v))
    for fi, fr in enumerate(p.faces):
        ax = p.face_axes[fi]
        pts2 = {i: to_2d(p.vertices[i], ax) for loop in fr.loops for i in loop}
        outer2 = [pts2[i] for i in fr.outer]
        area2 = sum(a[0] * b[1] - b[0] * a[1] for a, b in zip(outer2, outer2[1:] + outer2[:1]))
        if area2 < 0:
            pts2 = {i: (u, -v) for i, (u, v) in pts2.items()}
        poly = _bridge_holes(list(fr.outer), [list(h) for h in fr.holes], pts2)
        for a, b, c in _ear_clip(poly, pts2):
            lines.append("f %d %d %d" % (a + 1, b + 1, c + 1))
    return "\n".join(lines) + "\n"


def face_interior_point(p: Polyhedron, fi: int):
    """An exact point in the relative interior of face ``fi``."""
    fr = p.faces[fi]
    ax = p.face_axes[fi]
    loops2 = p.face_loops_2d[fi]
    outer = loops2[0]
    n = len(outer)
    # midpoint of a short diagonal through a convex corner, shrunk until inside
    for i in range(n):
        a, b, c = outer[i - 1], outer[i], outer[(i + 1) % n]
        if orient2d(a, b, c) == 0:
            continue
        cand = ((a[0] + c[0]) * HALF, (a[1] + c[1]) * HALF)
        for _ in range(40):
            if point_in_loops(cand, loops2) == INSIDE:
                return lift(cand, fr.plane, ax)
            cand = ((cand[0] + b[0]) * HALF, (cand[1] + b[1]) * HALF)
    raise PolyhedronError("could not find an interior point of face %d" % fi)
