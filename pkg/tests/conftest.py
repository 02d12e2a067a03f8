import logging

import pytest
from hypothesis import settings

from faceguard.kernel import Q
from faceguard.polyhedron import Polyhedron, box

settings.register_profile("repo", deadline=None, max_examples=60)
settings.load_profile("repo")
logging.getLogger("faceguard").setLevel(logging.ERROR)

CUBE_V = [(0, 0, 0), (1, 0, 0), (1, 1, 0), (0, 1, 0), (0, 0, 1), (1, 0, 1), (1, 1, 1), (0, 1, 1)]
CUBE_F = [[0, 3, 2, 1], [4, 5, 6, 7], [0, 1, 5, 4], [1, 2, 6, 5], [2, 3, 7, 6], [3, 0, 4, 7]]


def cube_mesh():
    return [tuple(Q(c) for c in v) for v in CUBE_V], [{"outer": f, "holes": []} for f in CUBE_F]


@pytest.fixture
def cube():
    return box((0, 1), (0, 1), (0, 1))


@pytest.fixture
def raw_cube():
    v, f = cube_mesh()
    return Polyhedron(v, f)


# one line per acceptance criterion, filled in by test_acceptance.py
ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[2].rstrip(":"))):
            terminalreporter.write_line(line)
