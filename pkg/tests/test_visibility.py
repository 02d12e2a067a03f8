import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from faceguard.generators import (figvis_quadric, gen_fig4, gen_fig5, gen_figvis,
                                  gen_lower_orthostack, pocket_samples)
from faceguard.guards import exact_min_guards, place_orthostack_closed
from faceguard.kernel import P, Q
from faceguard.orthostack import Brick, BrickStack, to_polyhedron
from faceguard.polyhedron import box
from faceguard.visibility import (CLOSED, OPEN, IncidenceMatrix, VisibilityError, Witness,
                                  WitnessSet, cell_consistency, coverage_check, faces_containing,
                                  incidence, locate, sees_face, structural_witnesses, visible)


def type4():
    return to_polyhedron(BrickStack([Brick((0, 10), (0, 10), (0, 1)), Brick((3, 7), (3, 7), (1, 2))]))


def face_with(p, normal_sign, axis, value):
    for i, fr in enumerate(p.faces):
        n = fr.outward_normal
        if n[axis] * normal_sign > 0 and all(v[axis] == value for v in p.loop_points(fr.outer)):
            return i
    raise LookupError


def test_locate(cube):
    assert locate(cube, (Q(1) / 2,) * 3).verdict == "interior"
    top = face_with(cube, 1, 2, 1)
    assert locate(cube, P(Q(1) / 2, Q(1) / 2, 1)) == ("boundary", ("face", top))
    assert locate(cube, P(1, 0, 0)).carrier[0] == "vertex"
    assert locate(cube, P(Q(1) / 2, 0, 0)).carrier[0] == "edge"
    assert locate(cube, P(2, 0, 0)).verdict == "exterior"


def test_locate_in_notched_solid():
    p = type4()
    assert locate(p, P(1, 1, Q(3) / 2)).exterior
    assert locate(p, P(5, 5, Q(3) / 2)).verdict == "interior"


def test_visible_basics(cube):
    assert visible(cube, P(0, 0, 0), P(1, 1, 1))
    assert visible(cube, P(0, Q(1) / 3, 1), P(1, 1, Q(1) / 5))
    # both endpoints on the top face: the segment stays on the boundary
    assert visible(cube, P(0, 0, 1), P(1, Q(1) / 2, 1))
    with pytest.raises(VisibilityError):
        visible(cube, P(0, 0, 0), P(2, 0, 0))


def test_visible_blocked_by_reflex_ring():
    p = type4()
    # the segment meets z=1 at (3/2, 3/2), outside the contact square [3,7]^2
    assert not visible(p, P(0, 0, 0), P(3, 3, 2))
    # here it meets z=1 at (13/2, 7/2), inside the square
    assert visible(p, P(10, 0, 0), P(3, 7, 2))


def test_sees_face_cube(cube):
    bottom = face_with(cube, -1, 2, 0)
    assert sees_face(cube, bottom, CLOSED, P(Q(1) / 2, Q(1) / 2, 1))
    assert sees_face(cube, bottom, OPEN, P(Q(1) / 2, Q(1) / 2, 0))


def test_fig4_needs_one_open_face_per_brick():
    inst = gen_fig4(2)
    p = inst.polyhedron
    M = incidence(p, inst.critical, OPEN)
    assert exact_min_guards(M).size == 2
    for F in range(p.f):
        assert not coverage_check(p, [F], OPEN, inst.critical).ok


def test_fig4_brick_centers_are_co_visible():
    # with diagonal corner overlaps, the bottom face sees the upper center:
    # the segment from (0,0,0) meets z=1 two thirds of the way, inside the overlap
    inst = gen_fig4(2)
    p = inst.polyhedron
    bottom = face_with(p, -1, 2, 0)
    centers = [b.center() for b in inst.extras["stack"].bricks]
    assert all(sees_face(p, bottom, OPEN, c) for c in centers)


def test_fig5_needs_two_closed_faces():
    inst = gen_fig5(2)
    M = incidence(inst.polyhedron, inst.critical, CLOSED)
    assert exact_min_guards(M).size == 2


def test_single_brick_centroid_row():
    p = box((0, 2), (0, 3), (0, 1))
    M = incidence(p, WitnessSet([Witness(P(1, Q(3) / 2, Q(1) / 2), "critical")]), CLOSED)
    assert M.data.all()


def test_cube_bottom_face_covers_everything(cube):
    W = structural_witnesses(cube, 3)
    assert len(W) == 26 + 27
    bottom = face_with(cube, -1, 2, 0)
    assert coverage_check(cube, [bottom], OPEN, W).ok


def test_structural_counts(cube):
    assert len(structural_witnesses(cube, 0)) == 26
    assert len(structural_witnesses(cube, 1)) == 27
    with pytest.raises(VisibilityError):
        structural_witnesses(cube, -1)


def test_lower_orthostack_witnesses_and_coverage():
    inst = gen_lower_orthostack(5)
    p = inst.polyhedron
    W = structural_witnesses(p, 2)
    assert all(not locate(p, w.point).exterior for w in W)
    sol = place_orthostack_closed(inst.extras["stack"])
    assert sol.size <= 2
    assert coverage_check(p, sol.faces, CLOSED, W).ok


def test_open_implies_closed_with_strict_witness():
    p = type4()
    corner = P(10, 0, 0)
    side = face_with(p, -1, 1, 3)     # upper brick side facing -y
    assert sees_face(p, side, CLOSED, corner)
    assert not sees_face(p, side, OPEN, corner)
    for w in structural_witnesses(p, 0):
        for F in range(p.f):
            if sees_face(p, F, OPEN, w.point):
                assert sees_face(p, F, CLOSED, w.point)


def test_exterior_witness_rejected(cube):
    with pytest.raises(VisibilityError):
        incidence(cube, WitnessSet([Witness(P(3, 3, 3), "critical")]), CLOSED)


def test_figvis_quadric_sign():
    inst = gen_figvis(n_samples=24)
    p, F = inst.polyhedron, inst.extras["bottom_face"]
    labels = {w.label for w in inst.critical}
    assert labels == {"hidden", "visible"}
    for w in inst.critical:
        assert sees_face(p, F, CLOSED, w.point) == (figvis_quadric(w.point) < 0)


def test_figvis_bottom_face_misses_only_the_pocket_side():
    inst = gen_figvis(n_samples=1)
    p, F = inst.polyhedron, inst.extras["bottom_face"]
    W = structural_witnesses(p, 2)
    rep = coverage_check(p, [F], CLOSED, W)
    hidden = [W.points[i].point for i in rep.uncovered]
    assert hidden
    # everything hidden lies in the pocket room or the passage leading to it
    assert all(q[0] <= 1 and q[1] >= 1 for q in hidden)
    assert len(rep.covered) > 2 * len(hidden)


def test_pocket_samples_are_deterministic():
    assert pocket_samples(5, seed=1) == pocket_samples(5, seed=1)
    assert all(figvis_quadric(q) != 0 for q in pocket_samples(30))


def test_witness_json_and_csv_round_trip(cube):
    W = structural_witnesses(cube, 1)
    W2 = WitnessSet.loads(W.dumps())
    assert W2.coords() == W.coords()
    M = incidence(cube, W, CLOSED)
    assert (IncidenceMatrix.from_csv(M.to_csv()).data == M.data).all()
    with pytest.raises(VisibilityError):
        WitnessSet.from_json_dict({"points": [{"xyz": ["1"]}]})


def test_cell_consistency_on_fig4():
    p = gen_fig4(2).polyhedron
    pairs = []
    for F in range(p.f):
        pairs += cell_consistency(p, F, P(10, 10, Q(1) / 2))
    assert pairs and all(a == b for a, b in pairs)


def interior_points(p, rng, n):
    lo, hi = p.bbox
    out = []
    while len(out) < n:
        q = tuple(a + (b - a) * Q(rng.randint(0, 40)) / 40 for a, b in zip(lo, hi))
        if not locate(p, q).exterior:
            out.append(q)
    return out


@given(st.integers(0, 10 ** 6))
def test_symmetry(seed):
    rng = random.Random(seed)
    p = type4()
    a, b = interior_points(p, rng, 2)
    assert visible(p, a, b) == visible(p, b, a)


@given(st.integers(0, 10 ** 6))
def test_brick_is_convex(seed):
    rng = random.Random(seed)
    p = box((0, 3), (0, 2), (0, 1))
    a, b = interior_points(p, rng, 2)
    assert visible(p, a, b)


def test_faces_containing_corner(cube):
    assert len(faces_containing(cube, P(0, 0, 0))) == 3
