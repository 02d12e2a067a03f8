"""Bounds table at desk scale: generated families against their formulas."""
import json
import time
from dataclasses import asdict, dataclass
from typing import List, Optional

from .generators import ContractError, generate
from .guards import (EXCEEDS_CAP, GuardError, c_oriented_bound, exact_min_guards,
                     orthostack_bound, place_c_oriented, place_orthostack_closed)
from .polyhedron import orientation_profile
from .visibility import coverage_check, incidence, structural_witnesses

SCHEMA = "bench/1"

# family -> (kind, lower formula, tight?)
ROWS = {
    "fig4": ("open", lambda f: f // 6, True),
    "fig6": ("open", lambda f: f // 4, True),
    "fig3": ("closed", lambda f: f // 7, False),
    "fig5": ("closed", lambda f: f // 5, False),
    "lower_orthostack": ("closed", lambda f: (f + 3) // 9, False),
}


@dataclass
class BenchRow:
    family: str
    kind: str
    k: int
    f: Optional[int]
    lower: Optional[int]
    algorithmic: Optional[int]
    exact: Optional[int]
    formula_lower: Optional[int]
    formula_upper: Optional[int]
    verdict: str
    note: str = ""
    seconds: float = 0.0


@dataclass
class BenchReport:
    rows: List[BenchRow]
    max_k: int

    @property
    def passed(self) -> bool:
        return all(r.verdict == "pass" for r in self.rows)

    def to_json_dict(self, timings: bool = False) -> dict:
        rows = []
        for r in self.rows:
            d = asdict(r)
            if not timings:
                d.pop("seconds")
            rows.append(d)
        return {"schema": SCHEMA, "max_k": self.max_k, "rows": rows}

    def dumps(self) -> str:
        return json.dumps(self.to_json_dict(), indent=1, sort_keys=True)

    def table(self) -> str:
        head = ("family", "kind", "k", "f", "lower", "exact", "algo", "f_lo", "f_up", "verdict")
        body = [(r.family, r.kind, r.k, r.f, r.lower, r.exact, r.algorithmic, r.formula_lower,
                 r.formula_upper, r.verdict) for r in self.rows]
        body = [tuple("-" if v is None else str(v) for v in row) for row in body]
        widths = [max(len(str(x)) for x in col) for col in zip(head, *body)]
        lines = ["  ".join(str(x).ljust(w) for x, w in zip(row, widths)).rstrip()
                 for row in [head] + body]
        return "\n".join(lines)


def bench_row(family: str, k: int) -> BenchRow:
    kind, lower_formula, tight = ROWS[family]
    t0 = time.perf_counter()
    row = BenchRow(family, kind, k, None, None, None, None, None, None, "fail")
    try:
        inst = generate(family, k)
    except ContractError as exc:
        row.note = str(exc)
        if exc.instance is not None:
            row.f = exc.instance.polyhedron.f
        row.seconds = time.perf_counter() - t0
        return row
    p = inst.polyhedron
    row.f = p.f
    row.lower = inst.extras["certified_bound"]
    row.formula_lower = lower_formula(p.f)
    try:
        if family == "lower_orthostack":
            sol = place_orthostack_closed(inst.extras["stack"])
            row.formula_upper = orthostack_bound(p.f)
        else:
            sol = place_c_oriented(p, kind)
            row.formula_upper = c_oriented_bound(p.f, orientation_profile(p).c)
    except GuardError as exc:
        row.note = "placement failed: %s" % exc
        row.seconds = time.perf_counter() - t0
        return row
    row.algorithmic = sol.size
    W = inst.critical + structural_witnesses(p, 0)
    if not coverage_check(p, sol.faces, kind, W).ok:
        row.note = "placement leaves witnesses uncovered"
    ex = exact_min_guards(incidence(p, W, kind), cap=sol.size)
    row.exact = None if ex is EXCEEDS_CAP else ex.size
    ok = (not row.note and row.exact is not None
          and row.formula_lower <= row.lower <= row.exact <= row.algorithmic <= row.formula_upper)
    if ok and tight and row.lower != row.algorithmic:
        ok = False
        row.note = "tight row with lower %d < upper %d" % (row.lower, row.algorithmic)
    row.verdict = "pass" if ok else "fail"
    row.seconds = time.perf_counter() - t0
    return row


def bench(max_k: int = 3, families=None) -> BenchReport:
    if max_k < 1:
        raise ValueError("max_k must be >= 1")
    fams = list(ROWS) if families is None else list(families)
    rows = [bench_row(fam, k) for fam in fams for k in range(1, max_k + 1)]
    return BenchReport(rows, max_k)
