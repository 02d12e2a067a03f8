"""Exact face-guard computations for polyhedra and orthostacks."""
from .kernel import P, Plane, Q, Scalar
from .polyhedron import (FaceRecord, Polyhedron, PolyhedronError, derive_edges,
                         euler_characteristic, from_boxes, merge_coplanar_faces,
                         orientation_profile, reflex_directions, validate)
from .orthostack import Brick, BrickStack, canonicalize, signature, to_polyhedron
from .visibility import (CLOSED, OPEN, Witness, WitnessSet, coverage_check, incidence,
                         sees_face, structural_witnesses, visible)
from .guards import (GuardSolution, certify_lower_bound, exact_min_guards, greedy_min_guards,
                     place_c_oriented, place_orthostack_closed)
from .generators import ContractError, GeneratedInstance, generate
from .setcover import SetCoverInstance, build_reduction, extract_cover, solve_setcover

__version__ = "0.1.0"

__all__ = [
    "P", "Plane", "Q", "Scalar", "FaceRecord", "Polyhedron", "PolyhedronError", "derive_edges",
    "euler_characteristic", "from_boxes", "merge_coplanar_faces", "orientation_profile",
    "reflex_directions", "validate", "Brick", "BrickStack", "canonicalize", "signature",
    "to_polyhedron", "CLOSED", "OPEN", "Witness", "WitnessSet", "coverage_check", "incidence",
    "sees_face", "structural_witnesses", "visible", "GuardSolution", "certify_lower_bound",
    "exact_min_guards", "greedy_min_guards", "place_c_oriented", "place_orthostack_closed",
    "ContractError", "GeneratedInstance", "generate", "SetCoverInstance", "build_reduction",
    "extract_cover", "solve_setcover",
]
