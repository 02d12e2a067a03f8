"""Exact point location, point-to-point visibility and face weak visibility.

Weak visibility of a face F from a point q is decided without building
visible regions.  Every polyhedron edge is projected from q onto the plane
of F.  On each cell of the resulting 2D arrangement the segment from q to a
point of the cell meets the same edges and faces, so one exact sample per
cell decides the whole cell.
"""
from __future__ import annotations

import csv
import io
import json
from typing import Dict, Iterable, List, NamedTuple, Optional, Sequence, Tuple

import numpy as np

from .arrangement import (BOUNDARY, INSIDE, Arrangement, arrangement_2d,
                          clip_line_to_box, on_segment, segment_intersection)
from .kernel import (HALF, ONE, ZERO, Q, dot, lerp, scalar_to_str, sub)
from .polyhedron import Polyhedron, face_interior_point, lift, to_2d

OPEN, CLOSED = "open", "closed"
KINDS = (OPEN, CLOSED)


class VisibilityError(ValueError):
    pass


class PointLocation(NamedTuple):
    verdict: str                      # "interior", "exterior" or "boundary"
    carrier: Optional[Tuple[str, int]] = None   # ("face"|"edge"|"vertex", index)

    @property
    def exterior(self) -> bool:
        return self.verdict == "exterior"


# -- per-polyhedron cache ----------------------------------------------------

class _Index:
    def __init__(self, p: Polyhedron):
        self.p = p
        self.normals = [fr.outward_normal for fr in p.faces]
        self.offsets = [fr.plane.offset for fr in p.faces]
        self.bboxes = p.face_bboxes
        self.vertex_id = {v: i for i, v in enumerate(p.vertices)}
        self.edges = [(p.vertices[e.endpoints[0]], p.vertices[e.endpoints[1]]) for e in p.edges]
        self._interior_pts: Dict[int, tuple] = {}
        # float copies for a conservative prefilter; exact tests decide the rest
        nf = np.array([[float(c) for c in n] for n in self.normals]).reshape(-1, 3)
        scale = np.abs(nf).max(axis=1, initial=0.0)
        scale[scale == 0] = 1.0
        self.fnormals = nf / scale[:, None]
        self.foffsets = np.array([float(o) for o in self.offsets]) / scale
        self.flo = np.array([[float(c) for c in b[0]] for b in self.bboxes]).reshape(-1, 3)
        self.fhi = np.array([[float(c) for c in b[1]] for b in self.bboxes]).reshape(-1, 3)
        self.eps = 1e-9 * (1.0 + float(np.abs(np.concatenate([self.flo, self.fhi])).max(initial=0.0)))

    def segment_candidates(self, x, y):
        """Faces whose closed region might meet the segment xy."""
        xf = np.array([float(c) for c in x])
        yf = np.array([float(c) for c in y])
        lo, hi = np.minimum(xf, yf) - self.eps, np.maximum(xf, yf) + self.eps
        keep = np.all((self.fhi >= lo) & (self.flo <= hi), axis=1)
        a = self.fnormals @ xf - self.foffsets
        b = self.fnormals @ yf - self.foffsets
        e = self.eps
        keep &= ~(((a > e) & (b > e)) | ((a < -e) & (b < -e)))
        return np.nonzero(keep)[0].tolist()

    def interior_point(self, fi):
        if fi not in self._interior_pts:
            self._interior_pts[fi] = face_interior_point(self.p, fi)
        return self._interior_pts[fi]


def _index(p: Polyhedron) -> _Index:
    idx = p.__dict__.get("_vis_index")
    if idx is None:
        idx = _Index(p)
        p.__dict__["_vis_index"] = idx
    return idx


def _as_point(q):
    return (Q(q[0]), Q(q[1]), Q(q[2]))


# -- locate --------------------------------------------------------------------

def _primes():
    n = 2
    while True:
        if all(n % d for d in range(2, int(n ** 0.5) + 1)):
            yield n
        n += 1


def faces_containing(p: Polyhedron, q) -> List[int]:
    """Faces whose closure contains q."""
    idx = _index(p)
    out = []
    for fi in range(p.f):
        lo, hi = idx.bboxes[fi]
        if not (lo[0] <= q[0] <= hi[0] and lo[1] <= q[1] <= hi[1] and lo[2] <= q[2] <= hi[2]):
            continue
        if dot(idx.normals[fi], q) == idx.offsets[fi] and p.face_contains(fi, q) >= 0:
            out.append(fi)
    return out


def locate(p: Polyhedron, q) -> PointLocation:
    q = _as_point(q)
    idx = _index(p)
    on = faces_containing(p, q)
    if on:
        if q in idx.vertex_id:
            return PointLocation("boundary", ("vertex", idx.vertex_id[q]))
        for ei, (a, b) in enumerate(idx.edges):
            if _on_segment3(q, a, b):
                return PointLocation("boundary", ("edge", ei))
        return PointLocation("boundary", ("face", on[0]))
    lo, hi = p.bbox
    if any(q[k] < lo[k] or q[k] > hi[k] for k in range(3)):
        return PointLocation("exterior")
    return PointLocation("interior" if _ray_parity(p, q) else "exterior")


def _on_segment3(q, a, b) -> bool:
    d = sub(b, a)
    w = sub(q, a)
    c = (d[1] * w[2] - d[2] * w[1], d[2] * w[0] - d[0] * w[2], d[0] * w[1] - d[1] * w[0])
    if c != (0, 0, 0):
        return False
    t = dot(w, d)
    return 0 <= t <= dot(d, d)


def _ray_parity(p: Polyhedron, q) -> bool:
    """Odd number of face crossings along a generic ray from q (q off the boundary)."""
    idx = _index(p)
    directions = [(ONE, ZERO, ZERO)]
    primes = _primes()
    attempt = 0
    while True:
        if attempt < len(directions):
            d = directions[attempt]
        else:
            delta = Q(1) / next(primes)
            d = (ONE, delta, delta * delta)
        attempt += 1
        count = 0
        generic = True
        axis_ray = d[1] == 0 and d[2] == 0
        for fi in range(p.f):
            lo, hi = idx.bboxes[fi]
            if axis_ray and (hi[0] < q[0] or not (lo[1] <= q[1] <= hi[1] and lo[2] <= q[2] <= hi[2])):
                continue
            n = idx.normals[fi]
            den = dot(n, d)
            num = idx.offsets[fi] - dot(n, q)
            if den == 0:
                if num == 0:
                    generic = False
                    break
                continue
            t = num / den
            if t <= 0:
                continue
            h = lerp(q, (q[0] + d[0], q[1] + d[1], q[2] + d[2]), t)
            c = p.face_contains(fi, h)
            if c == BOUNDARY:
                generic = False
                break
            if c == INSIDE:
                count += 1
        if generic:
            return count % 2 == 1


# -- point-to-point visibility ----------------------------------------------

def visible(p: Polyhedron, x, y, check: bool = True) -> bool:
    """True iff the closed segment xy lies in the closed polyhedron."""
    x, y = _as_point(x), _as_point(y)
    if check:
        for pt in (x, y):
            if locate(p, pt).exterior:
                raise VisibilityError("exterior endpoint %s" % (pt,))
    if x == y:
        return True
    idx = _index(p)
    d = sub(y, x)
    seg_lo = tuple(min(x[k], y[k]) for k in range(3))
    seg_hi = tuple(max(x[k], y[k]) for k in range(3))
    crossings: Dict = {}         # t -> faces whose plane the segment crosses there
    in_plane: List[int] = []
    for fi in idx.segment_candidates(x, y):
        lo, hi = idx.bboxes[fi]
        if (hi[0] < seg_lo[0] or lo[0] > seg_hi[0] or hi[1] < seg_lo[1] or lo[1] > seg_hi[1]
                or hi[2] < seg_lo[2] or lo[2] > seg_hi[2]):
            continue
        n, off = idx.normals[fi], idx.offsets[fi]
        a = dot(n, x) - off
        b = dot(n, y) - off
        if a == 0 and b == 0:
            in_plane.append(fi)
            continue
        if (a > 0 and b > 0) or (a < 0 and b < 0):
            continue
        crossings.setdefault(a / (a - b), []).append(fi)

    def cuts_at(t):
        out = []
        if t in crossings:
            pt = lerp(x, y, t)
            for fi in crossings[t]:
                c = p.face_contains(fi, pt)
                if c >= 0:
                    out.append((fi, c))
        return out

    if in_plane:
        cuts = {}
        for t in crossings:
            found = cuts_at(t)
            if found:
                cuts[t] = found
        return _visible_slow(p, x, y, cuts, in_plane)
    # walk the pieces from x towards y, stopping at the first blocked one
    t0, c0 = ZERO, cuts_at(ZERO)
    for t1 in sorted(t for t in crossings if t > 0) + [None]:
        if t1 is None:
            t1, c1 = ONE, []
        else:
            c1 = cuts_at(t1)
            if not c1 and t1 != ONE:
                continue
        verdict = _local_side(idx, c0, d, True)
        if verdict is None:
            verdict = _local_side(idx, c1, d, False)
        if verdict is None:
            if t0 == 0 and not c0:
                verdict = True   # x itself is interior
            elif t1 == 1 and not c1:
                verdict = True
            else:
                verdict = not locate(p, lerp(x, y, (t0 + t1) * HALF)).exterior
        if not verdict:
            return False
        if t1 == ONE:
            return True
        t0, c0 = t1, c1
    return True


def _local_side(idx: _Index, hits, d, after: bool):
    """Interior status of the open piece just after (or before) a single relint cut."""
    if not hits or len(hits) != 1 or hits[0][1] != INSIDE:
        return None
    s = dot(idx.normals[hits[0][0]], d)
    return s < 0 if after else s > 0


def _visible_slow(p: Polyhedron, x, y, cuts, in_plane) -> bool:
    """The segment lies in some face plane: refine by those faces' edges."""
    ts = set(cuts) | {ZERO, ONE}
    for fi in in_plane:
        ax = p.face_axes[fi]
        x2, y2 = to_2d(x, ax), to_2d(y, ax)
        dd = (y2[0] - x2[0], y2[1] - x2[1])
        k = 0 if dd[0] != 0 else 1
        for loop in p.face_loops_2d[fi]:
            n = len(loop)
            for i in range(n):
                hit = segment_intersection(x2, y2, loop[i], loop[(i + 1) % n])
                if hit is None:
                    continue
                pts = hit[1:] if hit[0] == "overlap" else (hit,)
                for h in pts:
                    ts.add((h[k] - x2[k]) / dd[k])
    ts = sorted(ts)
    for t0, t1 in zip(ts, ts[1:]):
        if locate(p, lerp(x, y, (t0 + t1) * HALF)).exterior:
            return False
    return True


# -- weak visibility of a face ----------------------------------------------

def sees_face(p: Polyhedron, F: int, kind: str, q, check: bool = True) -> bool:
    """Does some point of face F (closed, or relative interior for open) see q?"""
    if kind not in KINDS:
        raise VisibilityError("guard kind must be 'open' or 'closed', got %r" % (kind,))
    q = _as_point(q)
    if check and locate(p, q).exterior:
        raise VisibilityError("exterior point %s" % (q,))
    idx = _index(p)
    n, off = idx.normals[F], idx.offsets[F]
    side = dot(n, q) - off
    if side == 0 and p.face_contains(F, q) >= 0:
        return True
    if side > 0 and kind == OPEN:
        # every segment to a relative-interior point arrives from outside
        return False
    for y in _quick_candidates(p, idx, F, kind, q, side):
        if visible(p, q, y, check=False):
            return True
    return any(ok for _, _, ok in _cell_verdicts(p, F, kind, q, stop_at_first=True))


def _quick_candidates(p, idx, F, kind, q, side):
    pts = [idx.interior_point(F)]
    if side != 0:
        n = idx.normals[F]
        foot = lerp(q, (q[0] + n[0], q[1] + n[1], q[2] + n[2]), -side / dot(n, n))
        c = p.face_contains(F, foot)
        if c == INSIDE or (c == BOUNDARY and kind == CLOSED):
            pts.insert(0, foot)
    if kind == CLOSED:
        pts.extend(p.vertices[i] for i in p.faces[F].outer)
    return pts


def face_arrangement(p: Polyhedron, F: int, q) -> Tuple[Arrangement, int]:
    """The arrangement on plane(F) whose cells have constant visibility from q."""
    q = _as_point(q)
    idx = _index(p)
    ax = p.face_axes[F]
    plane = p.faces[F].plane
    n, off = idx.normals[F], idx.offsets[F]
    loops2 = p.face_loops_2d[F]
    us = [pt[0] for loop in loops2 for pt in loop]
    vs = [pt[1] for loop in loops2 for pt in loop]
    box = (min(us) - 1, min(vs) - 1, max(us) + 1, max(vs) + 1)
    region = [(box[0], box[1]), (box[2], box[1]), (box[2], box[3]), (box[0], box[3])]
    segs: List = []
    points: List = []
    for loop in loops2:
        for i in range(len(loop)):
            segs.append((loop[i], loop[(i + 1) % len(loop)]))
    D = off - dot(n, q)
    q2 = to_2d(q, ax)
    if D != 0:
        _project_edges(idx, n, q, D, ax, box, segs, points)
    else:
        _planar_events(idx, n, off, q, q2, ax, box, segs)
    # lines where the segment from q runs inside another face's plane
    for G in faces_containing(p, q):
        if G == F:
            continue
        line = _plane_trace(idx.normals[G], idx.offsets[G], plane, ax)
        if line is not None:
            c = clip_line_to_box(line[0], line[1], box)
            if c is not None:
                segs.append(c)
    return arrangement_2d(segs, region, points), ax


def _project_edges(idx, n, q, D, ax, box, segs, points):
    """Central projections from q of the edge parts between q and plane(F)."""
    cu, cv = [k for k in range(3) if k != ax]
    nq = dot(n, q)
    umin, vmin, umax, vmax = box
    for a, b in idx.edges:
        la = (dot(n, a) - nq) / D
        lb = (dot(n, b) - nq) / D
        if la <= 0 and lb <= 0 or la > 1 and lb > 1:
            continue
        if _on_segment3(q, a, b):
            other = b if a == q else a if b == q else None
            for w in ((other,) if other is not None else (a, b)):
                lw = (dot(n, w) - nq) / D
                if lw > 0:
                    points.append(_proj2(q, w, lw, cu, cv))
            continue
        # constraints c0 + c1*t >= 0 on p(t) = a + t(b-a)
        cons = [(la, lb - la), (1 - la, la - lb)]
        for comp, lo, hi in ((cu, umin, umax), (cv, vmin, vmax)):
            pa, pb = a[comp] - q[comp], b[comp] - q[comp]
            cons.append((pa - (lo - q[comp]) * la, (pb - pa) - (lo - q[comp]) * (lb - la)))
            cons.append(((hi - q[comp]) * la - pa, (hi - q[comp]) * (lb - la) - (pb - pa)))
        t0, t1 = ZERO, ONE
        ok = True
        for c0, c1 in cons:
            if c1 == 0:
                if c0 < 0:
                    ok = False
                    break
            elif c1 > 0:
                t0 = max(t0, -c0 / c1)
            else:
                t1 = min(t1, -c0 / c1)
            if t0 > t1:
                ok = False
                break
        if not ok:
            continue
        pa, pb = lerp(a, b, t0), lerp(a, b, t1)
        l0 = la + (lb - la) * t0
        l1 = la + (lb - la) * t1
        if l0 <= 0 or l1 <= 0:
            continue   # only possible through q itself
        s0, s1 = _proj2(q, pa, l0, cu, cv), _proj2(q, pb, l1, cu, cv)
        if s0 == s1:
            points.append(s0)
        else:
            segs.append((s0, s1))


def _proj2(q, w, lam, cu, cv):
    return (q[cu] + (w[cu] - q[cu]) / lam, q[cv] + (w[cv] - q[cv]) / lam)


def _planar_events(idx, n, off, q, q2, ax, box, segs):
    """Events for q on plane(F): cross-section edges and their shadow rays."""
    for a, b in idx.edges:
        va, vb = dot(n, a) - off, dot(n, b) - off
        if va == 0 and vb == 0:
            a2, b2 = to_2d(a, ax), to_2d(b, ax)
            if on_segment(q2, a2, b2):
                c = clip_line_to_box(a2, (b2[0] - a2[0], b2[1] - a2[1]), box)
                if c is not None:
                    segs.append(c)
                continue
            c = clip_line_to_box(a2, (b2[0] - a2[0], b2[1] - a2[1]), box, ZERO, ONE)
            if c is not None:
                segs.append(c)
            for e in (a2, b2):
                _shadow_ray(q2, e, box, segs)
        elif (va >= 0) != (vb >= 0) or va == 0 or vb == 0:
            t = va / (va - vb)
            _shadow_ray(q2, to_2d(lerp(a, b, t), ax), box, segs)


def _shadow_ray(q2, e, box, segs):
    if e == q2:
        return
    c = clip_line_to_box(e, (e[0] - q2[0], e[1] - q2[1]), box, ZERO)
    if c is not None:
        segs.append(c)


def _plane_trace(nG, offG, plane, ax):
    """Line plane(G) ∩ plane(F) in F's 2D coordinates, or None if parallel."""
    # nG . lift(u, v) - offG = A u + B v + C
    o = lift((ZERO, ZERO), plane, ax)
    pu = lift((ONE, ZERO), plane, ax)
    pv = lift((ZERO, ONE), plane, ax)
    C = dot(nG, o) - offG
    A = dot(nG, pu) - offG - C
    B = dot(nG, pv) - offG - C
    if A == 0 and B == 0:
        return None
    base = (-C / A, ZERO) if A != 0 else (ZERO, -C / B)
    return base, (-B, A)


def _cell_verdicts(p, F, kind, q, stop_at_first=False):
    """Yield (dimension, 2D sample, visible) for every cell sample lying in F."""
    arr, ax = face_arrangement(p, F, q)
    plane = p.faces[F].plane
    need = INSIDE if kind == OPEN else BOUNDARY
    # from strictly outside the plane, relative-interior points are reached
    # from the exterior side, so only boundary samples can be visible
    idx = _index(p)
    outside = dot(idx.normals[F], q) > idx.offsets[F]
    for dim, s in arr.samples():
        if outside and dim == 2:
            continue
        y = lift(s, plane, ax)
        c = p.face_contains(F, y)
        if c < need or (outside and c != BOUNDARY):
            continue
        ok = visible(p, q, y, check=False)
        yield dim, s, ok
        if ok and stop_at_first:
            return


def cell_consistency(p: Polyhedron, F: int, q, max_cells: Optional[int] = None):
    """For 2-cells inside F with two or more samples, (first verdict, second verdict) pairs."""
    arr, ax = face_arrangement(p, F, q)
    plane = p.faces[F].plane
    out = []
    for group in arr.face_samples:
        if len(group) < 2:
            continue
        ys = [lift(s, plane, ax) for s in group[:2]]
        if any(p.face_contains(F, y) != INSIDE for y in ys):
            continue
        out.append(tuple(visible(p, _as_point(q), y, check=False) for y in ys))
        if max_cells is not None and len(out) >= max_cells:
            break
    return out


# -- witnesses and incidence -------------------------------------------------

class Witness(NamedTuple):
    point: tuple
    label: str          # "critical", "structural" or "grid"
    note: str = ""


class WitnessSet:
    def __init__(self, points: Iterable = ()):
        self.points: List[Witness] = [w if isinstance(w, Witness) else Witness(_as_point(w[0]), *w[1:])
                                      for w in points]

    def __len__(self):
        return len(self.points)

    def __iter__(self):
        return iter(self.points)

    def __add__(self, other: "WitnessSet") -> "WitnessSet":
        seen = set()
        out = []
        for w in list(self.points) + list(other.points):
            if w.point not in seen:
                seen.add(w.point)
                out.append(w)
        return WitnessSet(out)

    def coords(self) -> List[tuple]:
        return [w.point for w in self.points]

    def to_json_dict(self) -> dict:
        return {"points": [{"xyz": [scalar_to_str(c) for c in w.point], "label": w.label,
                            "note": w.note} for w in self.points]}

    @classmethod
    def from_json_dict(cls, d) -> "WitnessSet":
        try:
            return cls([Witness(_as_point(e["xyz"]), e.get("label", "critical"), e.get("note", ""))
                        for e in d["points"]])
        except (KeyError, TypeError, ValueError, IndexError) as exc:
            raise VisibilityError("malformed witness JSON: %s" % exc) from exc

    def dumps(self) -> str:
        return json.dumps(self.to_json_dict())

    @classmethod
    def loads(cls, text: str) -> "WitnessSet":
        return cls.from_json_dict(json.loads(text))


def structural_witnesses(p: Polyhedron, r: int = 0) -> WitnessSet:
    """Vertices, edge midpoints, a point on each face and an r*r*r interior grid."""
    if r < 0:
        raise VisibilityError("grid resolution must be >= 0")
    pts: List[Witness] = [Witness(v, "structural", "vertex %d" % i) for i, v in enumerate(p.vertices)]
    for ei, e in enumerate(p.edges):
        a, b = p.vertices[e.endpoints[0]], p.vertices[e.endpoints[1]]
        pts.append(Witness(lerp(a, b, HALF), "structural", "edge %d midpoint" % ei))
    idx = _index(p)
    for fi, c in enumerate(p.face_centroids):
        if p.face_contains(fi, c) < 0:
            c = idx.interior_point(fi)
        pts.append(Witness(c, "structural", "face %d centroid" % fi))
    if r:
        lo, hi = p.bbox
        for i in range(r):
            for j in range(r):
                for k in range(r):
                    g = tuple(lo[a] + (hi[a] - lo[a]) * Q("%d/%d" % (2 * c + 1, 2 * r))
                              for a, c in enumerate((i, j, k)))
                    if not locate(p, g).exterior:
                        pts.append(Witness(g, "grid", "grid %d,%d,%d" % (i, j, k)))
    return WitnessSet(pts) + WitnessSet()


class IncidenceMatrix(NamedTuple):
    data: np.ndarray            # bool, shape (witnesses, faces)
    kind: str
    witness_notes: Tuple[str, ...] = ()

    @property
    def shape(self):
        return self.data.shape

    def rows(self) -> List[frozenset]:
        return [frozenset(int(j) for j in np.nonzero(r)[0]) for r in self.data]

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["witness"] + ["F%d" % j for j in range(self.data.shape[1])])
        for i, row in enumerate(self.data):
            w.writerow(["w%d" % i] + [int(v) for v in row])
        return buf.getvalue()

    @classmethod
    def from_csv(cls, text: str, kind: str = CLOSED) -> "IncidenceMatrix":
        rows = list(csv.reader(io.StringIO(text)))
        data = np.array([[v == "1" for v in r[1:]] for r in rows[1:]], dtype=bool)
        data = data.reshape(len(rows) - 1, len(rows[0]) - 1)
        return cls(data, kind)

    @classmethod
    def from_rows(cls, rows: Sequence[Iterable[int]], nfaces: int, kind: str = CLOSED):
        data = np.zeros((len(rows), nfaces), dtype=bool)
        for i, r in enumerate(rows):
            for j in r:
                data[i, j] = True
        return cls(data, kind)


def incidence(p: Polyhedron, W: WitnessSet, kind: str, faces: Optional[Sequence[int]] = None) -> IncidenceMatrix:
    """Witness x face weak-visibility matrix.  Entries are independent of each other."""
    cols = range(p.f) if faces is None else faces
    data = np.zeros((len(W), p.f), dtype=bool)
    for i, w in enumerate(W):
        if locate(p, w.point).exterior:
            raise VisibilityError("witness %d is exterior" % i)
        for j in cols:
            data[i, j] = sees_face(p, j, kind, w.point, check=False)
    return IncidenceMatrix(data, kind, tuple(w.note for w in W))


class CoverageReport(NamedTuple):
    covered: List[int]
    uncovered: List[int]

    @property
    def ok(self) -> bool:
        return not self.uncovered


def coverage_check(p: Polyhedron, guards: Iterable[int], kind: str, W: WitnessSet) -> CoverageReport:
    guards = sorted(set(guards))
    covered, uncovered = [], []
    for i, w in enumerate(W):
        if any(sees_face(p, g, kind, w.point, check=False) for g in guards):
            covered.append(i)
        else:
            uncovered.append(i)
    return CoverageReport(covered, uncovered)
