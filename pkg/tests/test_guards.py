import math
from itertools import combinations
import random

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from faceguard.generators import gen_fig4, gen_fig6, gen_lower_orthostack
from faceguard.guards import (EXCEEDS_CAP, GuardError, GuardSolution, c_oriented_bound,
                              certify_lower_bound, exact_min_guards, greedy_min_guards,
                              greedy_ratio_ok, orthostack_bound, orthostack_plan,
                              place_c_oriented, place_orthostack_closed)
from faceguard.orthostack import (Brick, BrickStack, random_canonical_stack, to_polyhedron,
                                  topmost_face)
from faceguard.polyhedron import orientation_profile
from faceguard.visibility import CLOSED, OPEN, IncidenceMatrix, coverage_check, structural_witnesses


def matrix(rows, kind=CLOSED):
    return IncidenceMatrix(np.array(rows, dtype=bool), kind)


@pytest.mark.parametrize("f, c, expected", [(6, 3, 1), (6, 4, 1), (12, 4, 3), (14, 4, 3), (7, 3, 1)])
def test_c_oriented_bound(f, c, expected):
    assert c_oriented_bound(f, c) == expected
    assert c_oriented_bound(f, c) == math.floor(f / 2 - f / c)


def test_orthostack_bound():
    assert [orthostack_bound(f) for f in (6, 12, 13, 20)] == [1, 1, 2, 3]


def test_cube_needs_one_guard(cube):
    sol = place_c_oriented(cube, OPEN)
    assert sol.size == 1 and sol.bound == 1
    assert coverage_check(cube, sol.faces, OPEN, structural_witnesses(cube, 2)).ok


def test_c_oriented_rejects_bad_kind(cube):
    with pytest.raises(GuardError):
        place_c_oriented(cube, "half-open")


@pytest.mark.parametrize("k", [1, 2, 3])
def test_c_oriented_on_fig4(k):
    inst = gen_fig4(k)
    p = inst.polyhedron
    sol = place_c_oriented(p, OPEN)
    assert sol.size <= c_oriented_bound(p.f, orientation_profile(p).c)
    assert coverage_check(p, sol.faces, OPEN, structural_witnesses(p, 1)).ok


def test_c_oriented_on_fig6():
    p = gen_fig6(2).polyhedron
    sol = place_c_oriented(p, OPEN)
    assert sol.size <= p.f // 4
    assert coverage_check(p, sol.faces, OPEN, structural_witnesses(p, 1)).ok


def test_exact_min_small():
    M = matrix([[1, 1, 0, 0], [0, 1, 1, 0], [0, 0, 1, 1], [1, 0, 0, 1]])
    sol = exact_min_guards(M)
    assert sol.faces == (0, 2)
    assert exact_min_guards(M, cap=1) is EXCEEDS_CAP
    assert not EXCEEDS_CAP


def test_uncoverable_row_raises():
    with pytest.raises(GuardError):
        exact_min_guards(matrix([[1, 0], [0, 0]]))
    with pytest.raises(GuardError):
        greedy_min_guards(matrix([[0, 0]]))


def test_greedy_is_not_always_optimal():
    # column 2 covers the most rows, but columns 0 and 1 already suffice
    rows = [[1, 0, 1], [1, 0, 1], [0, 1, 1], [0, 1, 1], [1, 0, 0], [0, 1, 0]]
    M = matrix(rows)
    assert exact_min_guards(M).faces == (0, 1)
    assert greedy_min_guards(M).faces == (0, 1, 2)
    assert greedy_ratio_ok(M)


def test_solution_json_round_trip():
    sol = GuardSolution((3, 1), CLOSED, "exact", 2, ("x",))
    back = GuardSolution.from_json_dict(sol.to_json_dict())
    assert back.faces == (1, 3) and back.flags == ("x",) and back.bound == 2


def test_certify_lower_bound_on_cube(cube):
    assert certify_lower_bound(cube, structural_witnesses(cube, 1), CLOSED) == 1


@pytest.mark.parametrize("k", [2, 4, 6])
def test_orthostack_placement_on_staircase(k):
    inst = gen_lower_orthostack(k)
    s = inst.extras["stack"]
    p = inst.polyhedron
    sol = place_orthostack_closed(s)
    assert sol.method == "orthostack7"
    assert sol.size <= orthostack_bound(p.f)
    assert topmost_face(s, p) not in sol.faces
    assert coverage_check(p, sol.faces, CLOSED, structural_witnesses(p, 2)).ok


def test_orthostack_single_brick():
    s = BrickStack([Brick((0, 2), (0, 2), (0, 1))])
    sol = place_orthostack_closed(s)
    p = to_polyhedron(s)
    assert sol.size == 1 and topmost_face(s, p) not in sol.faces
    assert orthostack_plan(s)


def test_orthostack_random_stacks():
    rng = random.Random(5)
    for _ in range(4):
        s = random_canonical_stack(rng, rng.randint(2, 5))
        p = to_polyhedron(s)
        sol = place_orthostack_closed(s)
        assert sol.size <= orthostack_bound(p.f)
        assert topmost_face(s, p) not in sol.faces


@given(st.lists(st.lists(st.booleans(), min_size=5, max_size=5), min_size=1, max_size=7))
def test_exact_is_minimal_and_greedy_within_log_factor(rows):
    data = np.array(rows, dtype=bool)
    data[:, 4] = True    # keep every row coverable
    M = IncidenceMatrix(data, CLOSED)
    e = exact_min_guards(M, cap=5)
    assert data[:, list(e.faces)].any(axis=1).all()
    for r in range(e.size):
        for cols in combinations(range(5), r):
            assert not data[:, list(cols)].any(axis=1).all()
    g = greedy_min_guards(M)
    assert data[:, list(g.faces)].any(axis=1).all()
    assert g.size <= e.size * (1 + math.log(len(rows)))
