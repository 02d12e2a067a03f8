"""Set Cover -> polyhedron -> guards -> Set Cover, on U={1,2,3,4}, S={{2,4},{1,3},{2}}."""
import time

from faceguard.guards import exact_min_guards
from faceguard.setcover import (SetCoverInstance, build_reduction, extract_cover, round_trip,
                                solve_setcover)

sc = SetCoverInstance(4, [[2, 4], [1, 3], [2]])
t, cover = solve_setcover(sc)
print("optimal cover:", [sorted(sc.sets[i]) for i in cover])

t0 = time.perf_counter()
ri = build_reduction(sc)
print("polyhedron: %d faces, set faces %s, bottom face %d (%.1fs)"
      % (ri.polyhedron.f, ri.set_face_indices, ri.bottom_face, time.perf_counter() - t0))

sol = exact_min_guards(ri.special_incidence, cap=sc.m + 1)
print("minimum guards on the distinguished points and the niche:", sol.faces)
back = extract_cover(ri, sol)
print("rounded back to sets:", [sorted(sc.sets[i]) for i in back])

rt = round_trip(ri)
print("guards %s cover all %d witnesses: %s" % (rt.upper_guards, rt.witnesses, not rt.uncovered))
print("exact minimum %s = optimal cover %d + 1: %s" % (rt.exact_min, t, rt.ok))
