"""Lower-bound families next to the guard counts the algorithms achieve."""
import sys

from faceguard.bench import bench

max_k = int(sys.argv[1]) if len(sys.argv) > 1 else 2
rep = bench(max_k)
print(rep.table())
for r in rep.rows:
    if r.note:
        print("%s(%d): %s" % (r.family, r.k, r.note))
