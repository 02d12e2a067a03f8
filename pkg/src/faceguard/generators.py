"""Parametric lower-bound families, each shipped with its critical witnesses.

Every generator checks its own contracts (face count, classification,
lower-bound certificate) unless called with ``check=False``.
"""
from dataclasses import dataclass, field
from typing import Dict, List, Optional

from .guards import certify_lower_bound
from .kernel import P, Q
from .orthostack import Brick, BrickStack, signature, signature_text, to_polyhedron
from .polyhedron import (Piece, Polyhedron, euler_characteristic, from_boxes, from_pieces,
                         orientation_profile, reflex_directions, validate)
from .visibility import CLOSED, OPEN, Witness, WitnessSet, incidence, structural_witnesses

FAMILIES = ("fig3", "fig4", "fig5", "fig6", "lower_orthostack", "figvis")


class ContractError(ValueError):
    """A generated instance failed one of its contracts; ``instance`` holds it."""

    def __init__(self, msg, instance=None):
        super().__init__(msg)
        self.instance = instance


@dataclass
class GeneratedInstance:
    polyhedron: Polyhedron
    critical: WitnessSet
    family: str
    k: int
    expected_f: int
    expected_lower_bound: Optional[int]
    kind: str
    extras: Dict = field(default_factory=dict)

    def manifest(self) -> dict:
        return {"family": self.family, "k": self.k, "f": self.expected_f,
                "bound": self.expected_lower_bound, "kind": self.kind}


def _relabel(W, label="critical") -> WitnessSet:
    return WitnessSet([Witness(w.point, label, w.note) for w in W])


def check_contracts(inst: GeneratedInstance, classification=None) -> None:
    """Raise ContractError unless f, classification and certificate all hold."""
    p = inst.polyhedron
    if validate(p):
        raise ContractError("%s(%d): invalid polyhedron" % (inst.family, inst.k), inst)
    if p.f != inst.expected_f:
        raise ContractError("%s(%d): f=%d, expected %d" % (inst.family, inst.k, p.f, inst.expected_f),
                            inst)
    if classification is not None and not classification(p):
        raise ContractError("%s(%d): classification check failed" % (inst.family, inst.k), inst)
    if inst.expected_lower_bound is not None:
        got = certify_lower_bound(p, inst.critical, inst.kind)
        inst.extras["certified_bound"] = got
        if got != inst.expected_lower_bound:
            raise ContractError("%s(%d): certified bound %d, expected %d"
                                % (inst.family, inst.k, got, inst.expected_lower_bound), inst)


def _need_k(k):
    if int(k) != k or k < 1:
        raise ValueError("k must be a positive integer, got %r" % (k,))


# -- orthogonal families ------------------------------------------------------

def fig3_boxes(k: int):
    boxes = [((0, 6), (0, 2 * k + 1), (0, 1))]
    for i in range(k):
        y = (2 * i + 1, 2 * i + 2)
        boxes += [((1, 2), y, (1, 4)), ((2, 5), y, (3, 4))]
    return boxes


def gen_fig3(k: int, check: bool = True) -> GeneratedInstance:
    """Flat base brick with k standing L-prisms; one witness under each L's overhang."""
    _need_k(k)
    p = from_boxes(fig3_boxes(k))
    W = WitnessSet([Witness((Q(9) / 2, Q(4 * i + 3) / 2, Q(7) / 2), "critical", "L %d notch" % i)
                    for i in range(k)])
    inst = GeneratedInstance(p, W, "fig3", k, 7 * k + 6, k, CLOSED)
    if check:
        def ortho_2reflex(q):
            return orientation_profile(q).is_orthogonal and reflex_directions(q)[1]
        check_contracts(inst, ortho_2reflex)
        M = incidence(p, W, CLOSED)
        for i in range(k):
            seen = {j for j in range(p.f) if M.data[i, j]}
            if len(seen) != 7:
                raise ContractError("fig3(%d): notch %d seen by %d faces" % (k, i, len(seen)), inst)
    return inst


def fig4_stack(k: int, L=20, h=1, s=18) -> BrickStack:
    return BrickStack([Brick((i * s, i * s + L), (i * s, i * s + L), (i * h, (i + 1) * h))
                       for i in range(k)])


def gen_fig4(k: int, L=20, h=1, s=18, check: bool = True, max_doublings: int = 6) -> GeneratedInstance:
    """k flat bricks with small diagonal corner overlaps; needs k open guards.

    Witnesses are the edge midpoints of the polyhedron.  When the certificate
    falls short, L and s are doubled (at most ``max_doublings`` times).
    """
    _need_k(k)
    for _ in range(max_doublings + 1):
        st = fig4_stack(k, L, h, s)
        p = to_polyhedron(st)
        W = _relabel(w for w in structural_witnesses(p, 0) if w.note.startswith("edge"))
        inst = GeneratedInstance(p, W, "fig4", k, 6 * k, k, OPEN,
                                 {"stack": st, "dimensions": {"L": L, "h": h, "s": s}})
        if not check:
            return inst
        try:
            check_contracts(inst, lambda q: orientation_profile(q).is_orthogonal)
            return inst
        except ContractError as e:
            if "certified bound" not in str(e):
                raise
            last = e
        L, s = 2 * L, 2 * s
    raise ContractError("%s (last dimensions L=%d s=%d)" % (last, L // 2, s // 2), last.instance)


def lower_orthostack_stack(k: int, a=1, b=4, h=1) -> BrickStack:
    """Staircase alternating big (b x b) and small (a x a) square bricks.

    Consecutive bricks share one corner, so each contact is flush on two sides.
    """
    bricks, prev = [], None
    for i in range(k):
        if i == 0:
            r = (0, b)
        elif i % 2 == 0:
            r = (prev[1] - b, prev[1])
        else:
            r = (prev[0], prev[0] + a)
        bricks.append(Brick(r, r, (i * h, (i + 1) * h)))
        prev = r
    return BrickStack(bricks)


def gen_lower_orthostack(k: int, check: bool = True) -> GeneratedInstance:
    _need_k(k)
    st = lower_orthostack_stack(k)
    p = to_polyhedron(st)
    W = WitnessSet([Witness(b.center(), "critical", "brick %d center" % i)
                    for i, b in enumerate(st.bricks)])
    inst = GeneratedInstance(p, W, "lower_orthostack", k, 3 * k + 3, -(-k // 3), CLOSED,
                             {"stack": st, "signature": signature_text(signature(st))})
    if check:
        check_contracts(inst, lambda q: orientation_profile(q).is_orthogonal)
        M = incidence(p, W, CLOSED)
        if k > 1 and int(M.data.sum(0).max()) > 3:
            raise ContractError("lower_orthostack(%d): a face sees four centers" % k, inst)
    return inst


# -- 4-oriented families ----------------------------------------------------------
# Solids are unions of lattice pieces bounded by x, y, z and x+y+z.  A piece
# with all four upper/lower bounds tight is a tetrahedron whose tip points
# towards +(1,1,1); any four classes in general position are affinely
# equivalent to these, and visibility is affine invariant.

def _tet(tip, n, s_hi=0, x_lo=0):
    a, b, c = tip
    return Piece((a - n + x_lo, a), (b - n, b), (c - n, c), (a + b + c - n, a + b + c + s_hi))


def _shift(pc: Piece, d) -> Piece:
    a, b, c = d
    t = a + b + c
    return Piece((pc.x[0] + a, pc.x[1] + a), (pc.y[0] + b, pc.y[1] + b),
                 (pc.z[0] + c, pc.z[1] + c), (pc.s[0] + t, pc.s[1] + t))


FIG6_STEP, FIG6_SIZE = (-6, -1, 6), 8


def fig6_pieces(k: int) -> List[Piece]:
    """Chain of overlapping tetrahedra; the first tip and the last x-vertex are cut off."""
    out = []
    for i in range(k):
        tip = tuple(i * d for d in FIG6_STEP)
        out.append(_tet(tip, FIG6_SIZE, s_hi=-1 if i == 0 else 0,
                        x_lo=1 if i == k - 1 else 0))
    return out


FIG5_STEP, FIG5_SIZE = (2, -5, 1), 6
FIG5_LINK = Piece((-1, 2), (-7, -6), (-6, 0))


def fig5_pieces(k: int) -> List[Piece]:
    """Separated tetrahedra joined by a thin slab; the slab keeps closed faces apart."""
    if k == 1:
        return [Piece((-5, 0), (-5, 0), (-6, 0), (-6, -1))]
    out = [_tet(tuple(i * d for d in FIG5_STEP), FIG5_SIZE) for i in range(k)]
    out += [_shift(FIG5_LINK, tuple(i * d for d in FIG5_STEP)) for i in range(k - 1)]
    return out


def _four_oriented(family, k, pieces, expected_f, kind, check):
    p = from_pieces(pieces)
    W = _relabel(structural_witnesses(p, 0))
    inst = GeneratedInstance(p, W, family, k, expected_f, k, kind, {"pieces": pieces})
    if check:
        def four(q):
            return orientation_profile(q).c == 4 and len(euler_characteristic(q)) == 1
        check_contracts(inst, four)
    return inst


def gen_fig5(k: int, check: bool = True) -> GeneratedInstance:
    _need_k(k)
    return _four_oriented("fig5", k, fig5_pieces(k), 5 * k + 2, CLOSED, check)


def gen_fig6(k: int, check: bool = True) -> GeneratedInstance:
    _need_k(k)
    return _four_oriented("fig6", k, fig6_pieces(k), 4 * k + 2, OPEN, check)


# -- quadric shadow ----------------------------------------------------------------

FIGVIS_BOXES = (
    ((1, 20), (-4, 0), (0, 3)),     # hall; its floor is the bottom face, edge a on the x-axis
    ((1, 20), (0, 2), (-1, 3)),     # sunken half of the hall, so a is reflex
    ((0, 1), (1, 2), (-1, 1)),      # low passage: edge c at x=1,y=1, ceiling edge b at x=0,z=1
    ((-2, 0), (1, 2), (0, 3)),      # pocket room
)
POCKET = ((-2, 0), (1, 2), (1, 3))


def figvis_quadric(q):
    x, y, z = q
    return x * y - x * z + y * z - y


def bottom_face(p: Polyhedron) -> int:
    """The z=0 face bounded by the x-axis."""
    for i, fr in enumerate(p.faces):
        pts = p.loop_points(fr.outer)
        if fr.outward_normal[2] < 0 and all(v[2] == 0 and v[1] <= 0 for v in pts):
            return i
    raise ValueError("no bottom face")


def pocket_samples(n: int = 40, seed: int = 0) -> List[tuple]:
    """Points of the pocket with denominators 97, none on the quadric."""
    import random
    rng = random.Random(seed)
    out = []
    while len(out) < n:
        q = P(*[lo + (hi - lo) * Q(rng.randint(1, 96)) / 97 for lo, hi in POCKET])
        if figvis_quadric(q) != 0:
            out.append(q)
    return out


def gen_figvis(n_samples: int = 40) -> GeneratedInstance:
    """Orthogonal polyhedron whose bottom face misses a pocket bounded by xy-xz+yz-y=0.

    A pocket point is visible from the bottom face iff the quadric is negative there.
    """
    p = from_boxes(FIGVIS_BOXES)
    samples = pocket_samples(n_samples)
    W = WitnessSet([Witness(q, "hidden" if figvis_quadric(q) > 0 else "visible", "pocket %d" % i)
                    for i, q in enumerate(samples)])
    return GeneratedInstance(p, W, "figvis", 0, p.f, None, CLOSED,
                             {"bottom_face": bottom_face(p), "pocket": POCKET})


def generate(family: str, k: int = 1, check: bool = True) -> GeneratedInstance:
    if family == "figvis":
        return gen_figvis()
    table = {"fig3": gen_fig3, "fig4": gen_fig4, "fig5": gen_fig5, "fig6": gen_fig6,
             "lower_orthostack": gen_lower_orthostack}
    if family not in table:
        raise ValueError("unknown family %r (choose from %s)" % (family, ", ".join(FAMILIES)))
    return table[family](k, check=check)
