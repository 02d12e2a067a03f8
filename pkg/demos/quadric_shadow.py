"""The bottom face of a small orthogonal polyhedron misses a region bounded by a quadric.

Samples the pocket room and compares the engine's verdict with the sign of
xy - xz + yz - y.
"""
from faceguard.generators import figvis_quadric, gen_figvis
from faceguard.visibility import CLOSED, sees_face

inst = gen_figvis(n_samples=30)
p, F = inst.polyhedron, inst.extras["bottom_face"]
print("polyhedron with %d faces, bottom face %d" % (p.f, F))

agree = 0
for w in inst.critical:
    seen = sees_face(p, F, CLOSED, w.point)
    q = figvis_quadric(w.point)
    agree += seen == (q < 0)
    print("%-28s quadric %+8.3f  %s" % (tuple(round(float(c), 3) for c in w.point), float(q),
                                        "seen" if seen else "hidden"))
print("%d of %d samples agree with the quadric's sign" % (agree, len(inst.critical)))
