import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from faceguard.guards import GuardSolution
from faceguard.kernel import Q
from faceguard.polyhedron import orientation_profile
from faceguard.setcover import (ReductionError, SetCoverError, SetCoverInstance, build_reduction,
                                extract_cover, random_instance, reduction_dimensions, round_trip,
                                solve_setcover)
from faceguard.visibility import CLOSED, OPEN, sees_face

EXAMPLE = SetCoverInstance(4, [[2, 4], [1, 3], [2]])


@pytest.fixture(scope="module")
def example():
    return build_reduction(EXAMPLE)


@pytest.fixture(scope="module")
def tiny():
    return build_reduction(SetCoverInstance(1, [[1]]))


def test_instance_validation():
    with pytest.raises(SetCoverError):
        SetCoverInstance(0, [[1]])
    with pytest.raises(SetCoverError):
        SetCoverInstance(2, [])
    with pytest.raises(SetCoverError):
        SetCoverInstance(2, [[1], []])
    with pytest.raises(SetCoverError):
        SetCoverInstance(2, [[1, 3]])
    assert SetCoverInstance.loads(EXAMPLE.dumps()) == EXAMPLE


def test_solve_example():
    assert solve_setcover(EXAMPLE) == (2, (0, 1))
    with pytest.raises(SetCoverError):
        solve_setcover(SetCoverInstance(3, [[1], [2]]))
    with pytest.raises(SetCoverError):
        solve_setcover(EXAMPLE, cap=1)


def test_dimensions():
    d = reduction_dimensions(4, 3)
    assert d["fissure_width"] < Q(1) / 4
    assert d["slit_gap"] == d["fissure_width"] / 2
    assert d["mountain_heights"] == sorted(d["mountain_heights"])
    assert d["Y"] == 8


def test_example_layout(example):
    assert len(example.set_face_indices) == 3
    assert len(example.distinguished) == 4
    assert orientation_profile(example.polyhedron).is_orthogonal
    M = example.special_incidence
    # rows D1..D4, niche; the set faces see exactly their members
    for i, fi in enumerate(example.set_face_indices):
        assert {j + 1 for j in range(4) if M.data[j, fi]} == set(EXAMPLE.sets[i])
    assert M.data[4, example.bottom_face]


def test_example_extraction(example):
    s = example.set_face_indices
    guards = [s[0], s[1], example.bottom_face]
    assert extract_cover(example, guards) == (0, 1)
    assert extract_cover(example, GuardSolution(tuple(guards), CLOSED, "manual")) == (0, 1)


def test_extraction_preconditions(example):
    s = example.set_face_indices
    with pytest.raises(ReductionError):
        extract_cover(example, [s[0], s[1]])
    with pytest.raises(ReductionError):
        extract_cover(example, [s[0], example.bottom_face])


def test_private_guards_are_replaced(example):
    # one private face per distinguished point, plus the bottom face
    M = example.special_incidence
    set_cols = set(example.set_face_indices)
    guards = [example.bottom_face]
    for j in range(4):
        private = [f for f in range(M.data.shape[1]) if M.data[j, f] and f not in set_cols]
        assert private
        guards.append(private[0])
    cover = extract_cover(example, guards)
    assert set().union(*(EXAMPLE.sets[i] for i in cover)) == {1, 2, 3, 4}
    assert len(cover) <= 4


def test_manifest(example):
    man = example.manifest()
    assert man["f"] == example.polyhedron.f
    assert man["set_faces"] == example.set_face_indices
    assert len(man["distinguished"]) == 4


def test_tiny_round_trip(tiny):
    rt = round_trip(tiny)
    assert (rt.setcover_min, rt.lower, rt.exact_min) == (1, 2, 2)
    assert rt.ok
    assert tiny.polyhedron.f <= 30


def test_tiny_open_round_trip(tiny):
    assert round_trip(tiny, OPEN).ok


def test_niche_and_distinguished_are_separated(tiny):
    p = tiny.polyhedron
    (d,) = tiny.distinguished
    for F in range(p.f):
        assert not (sees_face(p, F, CLOSED, d.point) and sees_face(p, F, CLOSED, tiny.niche_witness))


@given(st.integers(0, 10 ** 6))
def test_random_instances_are_coverable(seed):
    sc = random_instance(random.Random(seed))
    assert 1 <= sc.n <= 5 and 1 <= sc.m <= 4
    t, combo = solve_setcover(sc)
    assert t == len(combo) <= sc.m
    assert set().union(*(sc.sets[i] for i in combo)) == set(range(1, sc.n + 1))
