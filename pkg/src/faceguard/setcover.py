"""Set Cover to face guarding, and back.

``build_reduction`` turns a Set Cover instance into an orthogonal polyhedron
whose optimal face-guard count is the optimal cover size plus one.
``extract_cover`` rounds any guard set back to a cover.

Layout (before the final vertical flip, x to the right, z up):

* a box of air ``[0,X] x [0,2n] x [0,Z]``;
* n fissures entering the left wall at y = 1, 3, ..., 2n-1, each of width
  w < 1/4 and ending in a far wall; the distinguished point j sits in the
  middle of the far bottom edge of fissure j;
* m mountains (solid slabs across the whole depth) of increasing height,
  separated by unit valleys; the left side of mountain i is set face i.
  All but the last stay below the fissure ceiling, so a slightly falling
  line from anywhere in a fissure clears them;
* in front of each fissure j with j not in S_i, mountain i has a unit-wide
  slit running from g = w/2 above the floor to the top, so the dented set
  face stays a single face, connected along the floor strip;
* the last mountain gets a half-deep notch instead of a slit;
* a small niche shaft in the ceiling, away from every fissure.

From a distinguished point, sight lines rise.  Set face i is seen over
mountain i-1 and only through fissure j when it is not dented there.  The
model is flipped upside down at the end so that the single face seeing the
whole niche region is the bottom face.
"""
import itertools
import json
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

from .guards import GuardSolution, exact_min_guards
from .kernel import P, Q
from .polyhedron import (Polyhedron, euler_characteristic, from_boxes, orientation_profile,
                         validate)
from .visibility import (CLOSED, IncidenceMatrix, Witness, WitnessSet, coverage_check,
                         faces_containing, incidence, structural_witnesses)


class SetCoverError(ValueError):
    pass


class ReductionError(ValueError):
    pass


@dataclass(frozen=True)
class SetCoverInstance:
    n: int
    sets: Tuple[frozenset, ...]

    def __init__(self, n: int, sets: Sequence[Sequence[int]]):
        object.__setattr__(self, "n", int(n))
        object.__setattr__(self, "sets", tuple(frozenset(int(e) for e in s) for s in sets))
        if self.n < 1:
            raise SetCoverError("universe size must be >= 1")
        if not self.sets:
            raise SetCoverError("need at least one set")
        for i, s in enumerate(self.sets):
            if not s:
                raise SetCoverError("set %d is empty" % i)
            bad = sorted(e for e in s if not 1 <= e <= self.n)
            if bad:
                raise SetCoverError("set %d has elements outside 1..%d: %s" % (i, self.n, bad))

    @property
    def m(self) -> int:
        return len(self.sets)

    def to_json_dict(self) -> dict:
        return {"n": self.n, "sets": [sorted(s) for s in self.sets]}

    def dumps(self) -> str:
        return json.dumps(self.to_json_dict())

    @classmethod
    def from_json_dict(cls, d) -> "SetCoverInstance":
        return cls(d["n"], d["sets"])

    @classmethod
    def loads(cls, text: str) -> "SetCoverInstance":
        return cls.from_json_dict(json.loads(text))


def solve_setcover(sc: SetCoverInstance, cap: Optional[int] = None) -> Tuple[int, Tuple[int, ...]]:
    """Optimal cover by increasing-cardinality search.

    Returns (size, set indices); the cover is the lexicographically smallest
    among the optimal ones.
    """
    universe = frozenset(range(1, sc.n + 1))
    missing = universe - frozenset().union(*sc.sets)
    if missing:
        raise SetCoverError("uncoverable elements: %s" % sorted(missing))
    cap = sc.m if cap is None else cap
    for t in range(1, cap + 1):
        for combo in itertools.combinations(range(sc.m), t):
            if frozenset().union(*(sc.sets[i] for i in combo)) == universe:
                return t, combo
    raise SetCoverError("no cover with at most %d sets" % cap)


# -- the gadget ---------------------------------------------------------------------

def reduction_dimensions(n: int, m: int) -> Dict[str, object]:
    w = Q(1) / 4 - Q(1) / (8 * m)
    L, lip, floor_z, h = Q(4), Q(1), Q(2), Q(2)
    x0 = -(L + lip)
    alpha = [Q(6 + 2 * i) + x0 for i in range(m)]
    beta = [a + 1 for a in alpha]
    # grazing slope from D over mountain i is (i+1)*sigma; every mountain but
    # the last stays below the fissure ceiling, so the whole fissure sees past it
    sigma = h / (m * (beta[-1] - x0))
    H = [floor_z + (i + 1) * sigma * (beta[i] - x0) for i in range(m - 1)]
    H.append(floor_z + (beta[-1] - x0) / 2 + 1)
    Z = H[-1] + 2
    return {"fissure_width": w, "dent_width": Q(1), "slit_gap": w / 2, "fissure_length": L,
            "lip": lip, "fissure_floor": floor_z, "fissure_height": h, "x0": x0,
            "alpha": alpha, "beta": beta, "mountain_heights": H, "valley_width": Q(1),
            "notch_depth": Q(1) / 2, "Z": Z, "X": beta[-1] + 1, "Y": Q(2 * n),
            "niche": (alpha[0] / 2, Q(1) / 4, Q(4))}


def _gadget_boxes(sc: SetCoverInstance, d):
    n, m = sc.n, sc.m
    w, g, x0, lip = d["fissure_width"], d["slit_gap"], d["x0"], d["lip"]
    F, h, Z = d["fissure_floor"], d["fissure_height"], d["Z"]
    alpha, beta, H = d["alpha"], d["beta"], d["mountain_heights"]
    half = Q(1) / 2
    air = [((0, d["X"]), (0, d["Y"]), (0, Z))]
    for j in range(n):
        yj = 2 * j + 1
        air.append(((x0, -lip), (yj - w / 2, yj + w / 2), (F, F + h)))
        # alcove around the fissure mouth keeps the left wall off the opening
        air.append(((-lip, 0), (yj - half, yj + half), (F - 1, F + h + 1)))
    solid = []
    for i, S in enumerate(sc.sets):
        dents = [2 * j + 1 for j in range(n) if (j + 1) not in S]
        cuts = sorted({Q(0), d["Y"]} | {y - half for y in dents} | {y + half for y in dents})
        for y0, y1 in zip(cuts, cuts[1:]):
            mid = (y0 + y1) / 2
            if any(abs(mid - y) < half for y in dents):
                solid.append(((alpha[i], beta[i]), (y0, y1), (0, g)))
                if i == m - 1:
                    solid.append(((alpha[i] + d["notch_depth"], beta[i]), (y0, y1), (g, H[i])))
            else:
                solid.append(((alpha[i], beta[i]), (y0, y1), (0, H[i])))
    nx, ns, nd = d["niche"]
    air.append(((nx, nx + ns), (Q(1) / 2, Q(1) / 2 + ns), (-nd, 0)))
    return air, solid


def _flip(box, Z):
    return box[0], box[1], (Z - box[2][1], Z - box[2][0])


@dataclass
class ReductionInstance:
    setcover: SetCoverInstance
    polyhedron: Polyhedron
    distinguished: WitnessSet
    niche_witness: tuple
    set_face_indices: List[int]
    bottom_face: int
    dimensions: Dict[str, object]
    special_incidence: Optional[IncidenceMatrix] = None   # closed, rows D_1..D_n, niche
    extras: Dict = field(default_factory=dict)

    @property
    def special_witnesses(self) -> WitnessSet:
        return self.distinguished + WitnessSet([Witness(self.niche_witness, "critical", "niche")])

    def manifest(self) -> dict:
        def enc(v):
            if isinstance(v, (list, tuple)):
                return [enc(x) for x in v]
            return str(v)
        return {"setcover": self.setcover.to_json_dict(), "f": self.polyhedron.f,
                "set_faces": list(self.set_face_indices), "bottom_face": self.bottom_face,
                "dimensions": {k: enc(v) for k, v in self.dimensions.items()},
                "distinguished": [[str(c) for c in w.point] for w in self.distinguished],
                "niche_witness": [str(c) for c in self.niche_witness]}


def _unique_face(p, q, what):
    fs = faces_containing(p, q)
    if len(fs) != 1:
        raise ReductionError("%s: point lies on faces %s" % (what, fs))
    return fs[0]


def build_reduction(sc: SetCoverInstance, check: bool = True) -> ReductionInstance:
    """Polyhedron guardable by k faces iff U is a union of k-1 sets of ``sc``."""
    d = reduction_dimensions(sc.n, sc.m)
    air, solid = _gadget_boxes(sc, d)
    Z = d["Z"]
    p = from_boxes([_flip(b, Z) for b in air], [_flip(b, Z) for b in solid])
    zf = Z - d["fissure_floor"]
    D = WitnessSet([Witness(P(d["x0"], 2 * j + 1, zf), "critical", "D%d" % (j + 1))
                    for j in range(sc.n)])
    nx, ns, nd = d["niche"]
    niche = P(nx + ns / 2, Q(1) / 2 + ns / 2, Z + nd)
    g = d["slit_gap"]
    set_faces = [_unique_face(p, P(a, Q(1) / 3, Z - g / 2), "set face %d" % i)
                 for i, a in enumerate(d["alpha"])]
    bottom = _unique_face(p, P(d["X"] - Q(1) / 2, Q(1) / 3, 0), "bottom face")
    ri = ReductionInstance(sc, p, D, niche, set_faces, bottom, d)
    if check:
        audit_reduction(ri)
    return ri


def audit_reduction(ri: ReductionInstance) -> IncidenceMatrix:
    """Check the structural invariants and the closed incidence of D_1..D_n and the niche.

    Set faces must see exactly their members.  Any other face seeing two
    or more distinguished points (a mountain top, say) must see a subset of
    what one set face sees.  No face may see both a distinguished point and
    the niche.
    """
    p, sc, d = ri.polyhedron, ri.setcover, ri.dimensions
    if d["fissure_width"] >= Q(1) / 4:
        raise ReductionError("fissure width must stay below 1/4")
    problems = validate(p)
    if problems:
        raise ReductionError("invalid polyhedron: %s" % problems[0])
    if not orientation_profile(p).is_orthogonal:
        raise ReductionError("polyhedron is not orthogonal")
    eu = euler_characteristic(p)
    if len(eu) != 1 or eu[0].genus != 0:
        raise ReductionError("polyhedron is not simply connected: %s" % (eu,))
    M = incidence(p, ri.special_witnesses, CLOSED)
    A = M.data
    n = sc.n
    for i, fi in enumerate(ri.set_face_indices):
        for j in range(n):
            if bool(A[j, fi]) != ((j + 1) in sc.sets[i]):
                raise ReductionError("set face %d (face %d) vs D%d: sees=%s, member=%s"
                                     % (i, fi, j + 1, bool(A[j, fi]), (j + 1) in sc.sets[i]))
    set_cols = set(ri.set_face_indices)
    set_seen = [frozenset(j for j in range(n) if A[j, fi]) for fi in ri.set_face_indices]
    for fi in range(p.f):
        seen = [j for j in range(n) if A[j, fi]]
        if seen and A[n, fi]:
            raise ReductionError("face %d sees D%d and the niche" % (fi, seen[0] + 1))
        if fi not in set_cols and len(seen) > 1 and not any(set(seen) <= s for s in set_seen):
            raise ReductionError("face %d sees %s, which no set face covers"
                                 % (fi, ", ".join("D%d" % (j + 1) for j in seen)))
    if not A[n, ri.bottom_face]:
        raise ReductionError("bottom face %d misses the niche" % ri.bottom_face)
    ri.special_incidence = M
    return M


def _special(ri: ReductionInstance) -> IncidenceMatrix:
    if ri.special_incidence is None:
        audit_reduction(ri)
    return ri.special_incidence


def extract_cover(ri: ReductionInstance, guards) -> Tuple[int, ...]:
    """Round a guard set covering D_1..D_n and the niche into a set cover.

    1. drop guards that see no distinguished point (the niche guard is one);
    2. a guard whose distinguished points are all seen by one set face is
       replaced by that set face (lowest index first);
    3. any other guard sees a single point (the audit guarantees it) and
       is replaced by a set face seeing that point.
    """
    faces = guards.faces if isinstance(guards, GuardSolution) else tuple(guards)
    M = _special(ri)
    A, n = M.data, ri.setcover.n
    if not any(A[n, g] for g in faces):
        raise ReductionError("guards do not cover the niche witness")
    missing = [j + 1 for j in range(n) if not any(A[j, g] for g in faces)]
    if missing:
        raise ReductionError("guards do not cover distinguished points %s" % missing)
    col_of = {fi: i for i, fi in enumerate(ri.set_face_indices)}
    seen_by = [frozenset(j for j in range(n) if A[j, fi]) for fi in ri.set_face_indices]
    chosen = set()
    for g in faces:
        pts = frozenset(j for j in range(n) if A[j, g])
        if not pts:
            continue
        if g in col_of:
            chosen.add(col_of[g])
            continue
        sup = [i for i, s in enumerate(seen_by) if pts <= s]
        if sup:
            chosen.add(sup[0])
            continue
        for j in sorted(pts):
            cands = [i for i, s in enumerate(seen_by) if j in s]
            if not cands:
                raise SetCoverError("instance unsolvable: no set face sees D%d" % (j + 1))
            chosen.add(cands[0])
    cover = tuple(sorted(chosen))
    covered = frozenset().union(*(ri.setcover.sets[i] for i in cover))
    if covered != frozenset(range(1, n + 1)):
        raise AssertionError("extracted sets miss %s" % sorted(set(range(1, n + 1)) - covered))
    if len(cover) > len(faces) - 1:
        raise AssertionError("cover of size %d from %d guards" % (len(cover), len(faces)))
    return cover


@dataclass
class RoundTrip:
    kind: str
    setcover_min: int
    lower: int                  # exact minimum over D_1..D_n and the niche
    upper_guards: Tuple[int, ...]
    witnesses: int
    uncovered: List[int]

    @property
    def exact_min(self) -> Optional[int]:
        """Exact minimum over all witnesses, when the two bounds meet."""
        if not self.uncovered and len(self.upper_guards) == self.lower:
            return self.lower
        return None

    @property
    def ok(self) -> bool:
        return self.exact_min == self.setcover_min + 1


def round_trip(ri: ReductionInstance, kind: str = CLOSED, resolution: int = 0) -> RoundTrip:
    """Exact guard minimum over distinguished, niche and structural witnesses.

    The minimum over the distinguished and niche rows is a lower bound for
    the full witness set.  The optimal cover's set faces plus the bottom
    face give an upper bound once coverage of every witness is checked.
    When both meet, that value is the exact minimum.
    """
    M = _special(ri) if kind == CLOSED else incidence(ri.polyhedron, ri.special_witnesses, kind)
    lower = exact_min_guards(M, cap=ri.setcover.m + 1).size
    t, cover = solve_setcover(ri.setcover)
    guards = tuple(sorted([ri.set_face_indices[i] for i in cover] + [ri.bottom_face]))
    W = ri.special_witnesses + structural_witnesses(ri.polyhedron, resolution)
    rep = coverage_check(ri.polyhedron, guards, kind, W)
    return RoundTrip(kind, t, lower, guards, len(W), rep.uncovered)


def random_instance(rng, n_max: int = 5, m_max: int = 4) -> SetCoverInstance:
    """A coverable instance with n <= n_max and m <= m_max."""
    n = rng.randint(1, n_max)
    m = rng.randint(1, m_max)
    while True:
        sets = []
        for _ in range(m):
            k = rng.randint(1, n)
            sets.append(sorted(rng.sample(range(1, n + 1), k)))
        if set().union(*map(set, sets)) == set(range(1, n + 1)):
            return SetCoverInstance(n, sets)


def size_constant(instances: Sequence[SetCoverInstance]) -> float:
    """max f / (m n) over the given instances."""
    return max(build_reduction(sc, check=False).polyhedron.f / (sc.m * sc.n) for sc in instances)


__all__ = ["SetCoverInstance", "SetCoverError", "ReductionError", "ReductionInstance", "RoundTrip",
           "solve_setcover", "build_reduction", "audit_reduction", "extract_cover", "round_trip",
           "reduction_dimensions", "random_instance", "size_constant"]
