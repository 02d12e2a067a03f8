"""Command-line interface: ``faceguard <command> ...``.

Exit codes: 0 success, 1 failed check or semantic error, 2 usage or input error.
"""
import argparse
import json
import logging
import os
import sys

from . import bench as benchmod
from .generators import FAMILIES, ContractError, generate
from .guards import (EXCEEDS_CAP, GuardError, certify_lower_bound,
                     exact_min_guards, greedy_min_guards, place_c_oriented,
                     place_orthostack_closed)
from .orthostack import BrickStack, StackError
from .polyhedron import (Polyhedron, PolyhedronError, euler_characteristic, orientation_profile,
                         reflex_directions, to_obj, validate)
from .setcover import ReductionError, SetCoverError, SetCoverInstance, build_reduction
from .visibility import KINDS, VisibilityError, WitnessSet, coverage_check, incidence, structural_witnesses

DEFAULT_RESOLUTION = 2


class UsageError(Exception):
    pass


def _read_json(path):
    try:
        with open(path) as fh:
            return json.load(fh)
    except OSError as exc:
        raise UsageError("cannot read %s: %s" % (path, exc.strerror))
    except json.JSONDecodeError as exc:
        raise UsageError("malformed JSON in %s: %s" % (path, exc))


def _load_poly(path) -> Polyhedron:
    try:
        return Polyhedron.from_json_dict(_read_json(path))
    except PolyhedronError as exc:
        raise UsageError(str(exc))


def _witnesses(spec, poly_path, p) -> WitnessSet:
    if spec is None:
        spec = "structural:%d" % DEFAULT_RESOLUTION
    if spec.startswith("structural"):
        _, _, r = spec.partition(":")
        try:
            return structural_witnesses(p, int(r or 0))
        except ValueError:
            raise UsageError("bad witness spec %r" % spec)
    if spec == "critical":
        spec = os.path.join(os.path.dirname(os.path.abspath(poly_path)), "critical.json")
    try:
        return WitnessSet.from_json_dict(_read_json(spec))
    except (KeyError, TypeError, ValueError) as exc:
        raise UsageError("malformed witness file %s: %s" % (spec, exc))


def _emit(obj, out=None):
    text = json.dumps(obj, indent=1, sort_keys=True)
    if out:
        with open(out, "w") as fh:
            fh.write(text + "\n")
    print(text)


def _write(dirname, name, text):
    os.makedirs(dirname, exist_ok=True)
    with open(os.path.join(dirname, name), "w") as fh:
        fh.write(text + "\n")


def cmd_validate(a):
    problems = validate(_load_poly(a.poly))
    for msg in problems:
        print(msg)
    if not problems:
        print("ok")
    return 1 if problems else 0


def cmd_classify(a):
    p = _load_poly(a.poly)
    problems = validate(p)
    if problems:
        print(problems[0], file=sys.stderr)
        return 1
    prof = orientation_profile(p)
    _, two_reflex = reflex_directions(p)
    eu = euler_characteristic(p)
    _emit({"f": p.f, "c": prof.c, "orthogonal": prof.is_orthogonal,
           "two_reflex": bool(prof.is_orthogonal and two_reflex),
           "components": len(eu), "genus": [r.genus for r in eu]})
    return 0


def cmd_generate(a):
    status = 0
    try:
        inst = generate(a.family, a.k)
    except ContractError as exc:
        print("contract failed: %s" % exc, file=sys.stderr)
        if exc.instance is None:
            return 1
        inst, status = exc.instance, 1
    _write(a.out, "poly.json", inst.polyhedron.dumps())
    _write(a.out, "critical.json", inst.critical.dumps())
    if "stack" in inst.extras:
        _write(a.out, "stack.json", inst.extras["stack"].dumps())
    man = inst.manifest()
    if "certified_bound" in inst.extras:
        man["certified_bound"] = inst.extras["certified_bound"]
    _write(a.out, "manifest.json", json.dumps(man, indent=1, sort_keys=True))
    print(json.dumps(man, sort_keys=True))
    return status


def _load_stack(a):
    path = a.stack or os.path.join(os.path.dirname(os.path.abspath(a.poly)), "stack.json")
    try:
        return BrickStack.from_json_dict(_read_json(path))
    except (StackError, KeyError, TypeError) as exc:
        raise UsageError("bad brick stack %s: %s" % (path, exc))


def cmd_solve(a):
    p = _load_poly(a.poly)
    W = _witnesses(a.witnesses, a.poly, p)
    if a.algo == "coriented":
        sol = place_c_oriented(p, a.kind)
    elif a.algo == "orthostack7":
        if a.kind != "closed":
            raise UsageError("orthostack7 places closed guards only")
        sol = place_orthostack_closed(_load_stack(a))
    elif a.algo == "greedy":
        sol = greedy_min_guards(incidence(p, W, a.kind))
    else:
        sol = exact_min_guards(incidence(p, W, a.kind), cap=p.f)
        if sol is EXCEEDS_CAP:
            print("no cover found", file=sys.stderr)
            return 1
    rep = coverage_check(p, sol.faces, a.kind, W)
    out = sol.to_json_dict()
    out.update({"size": sol.size, "witnesses": len(W), "uncovered": rep.uncovered})
    _emit(out, a.out)
    return 0 if rep.ok else 1


def _faces(text):
    try:
        return [int(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise UsageError("--faces wants comma-separated integers, got %r" % text)


def cmd_verify(a):
    p = _load_poly(a.poly)
    faces = _faces(a.faces)
    bad = [g for g in faces if not 0 <= g < p.f]
    if bad:
        raise UsageError("face indices out of range: %s" % bad)
    W = _witnesses(a.witnesses, a.poly, p)
    rep = coverage_check(p, faces, a.kind, W)
    _emit({"faces": faces, "kind": a.kind, "witnesses": len(W), "covered": len(rep.covered),
           "uncovered": rep.uncovered, "ok": rep.ok})
    return 0 if rep.ok else 1


def cmd_certify_lower(a):
    p = _load_poly(a.poly)
    W = _witnesses(a.witnesses, a.poly, p)
    bound = certify_lower_bound(p, W, a.kind)
    _emit({"kind": a.kind, "witnesses": len(W), "lower_bound": bound})
    return 0


def cmd_reduce(a):
    try:
        sc = SetCoverInstance.from_json_dict(_read_json(a.setcover))
    except (KeyError, TypeError) as exc:
        raise UsageError("malformed set cover JSON: %s" % exc)
    ri = build_reduction(sc, check=not a.no_check)
    _write(a.out, "poly.json", ri.polyhedron.dumps())
    _write(a.out, "critical.json", ri.special_witnesses.dumps())
    man = ri.manifest()
    _write(a.out, "manifest.json", json.dumps(man, indent=1, sort_keys=True))
    print(json.dumps({"f": man["f"], "set_faces": man["set_faces"],
                      "bottom_face": man["bottom_face"]}, sort_keys=True))
    return 0


def cmd_export(a):
    p = _load_poly(a.poly)
    with open(a.obj, "w") as fh:
        fh.write(to_obj(p))
    print("wrote %s (%d faces)" % (a.obj, p.f))
    return 0


def cmd_bench(a):
    rep = benchmod.bench(a.max_k)
    print(rep.table())
    os.makedirs(a.out, exist_ok=True)
    with open(os.path.join(a.out, "bench.json"), "w") as fh:
        fh.write(rep.dumps() + "\n")
    with open(os.path.join(a.out, "bench.txt"), "w") as fh:
        fh.write(rep.table() + "\n")
    return 0 if rep.passed else 1


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="faceguard", description=__doc__.splitlines()[0])
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="command", required=True)

    def cmd(name, fn, help_):
        s = sub.add_parser(name, help=help_)
        s.set_defaults(fn=fn)
        return s

    def kind(s, default="closed"):
        s.add_argument("--kind", choices=KINDS, default=default)

    s = cmd("validate", cmd_validate, "check a polyhedron file")
    s.add_argument("poly")
    s = cmd("classify", cmd_classify, "orientation classes, orthogonality, 2-reflex, genus")
    s.add_argument("poly")
    s = cmd("generate", cmd_generate, "write a lower-bound family instance")
    s.add_argument("family", choices=FAMILIES)
    s.add_argument("--k", type=int, default=1)
    s.add_argument("-o", "--out", default=".")
    s = cmd("solve", cmd_solve, "place face guards")
    s.add_argument("poly")
    s.add_argument("--algo", choices=("coriented", "orthostack7", "greedy", "exact"), default="exact")
    kind(s)
    s.add_argument("--witnesses", help="file, 'critical' or structural:R (default structural:2)")
    s.add_argument("--stack", help="brick stack JSON for orthostack7")
    s.add_argument("-o", "--out")
    s = cmd("verify", cmd_verify, "check that faces see every witness")
    s.add_argument("poly")
    s.add_argument("--faces", required=True)
    kind(s)
    s.add_argument("--witnesses")
    s = cmd("certify-lower", cmd_certify_lower, "lower bound from a witness set")
    s.add_argument("poly")
    s.add_argument("--witnesses", required=True)
    kind(s)
    s = cmd("reduce", cmd_reduce, "build the polyhedron for a set cover instance")
    s.add_argument("setcover")
    s.add_argument("-o", "--out", default=".")
    s.add_argument("--no-check", action="store_true", help="skip the incidence audit")
    s = cmd("export", cmd_export, "write a Wavefront OBJ")
    s.add_argument("poly")
    s.add_argument("--obj", required=True)
    s = cmd("bench", cmd_bench, "bounds table for the generated families")
    s.add_argument("--max-k", type=int, default=3)
    s.add_argument("-o", "--out", default=".")
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    try:
        a = ap.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    logging.basicConfig(level=logging.INFO if a.verbose else logging.ERROR,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return a.fn(a)
    except UsageError as exc:
        print("error: %s" % exc, file=sys.stderr)
        return 2
    except (GuardError, VisibilityError, SetCoverError, ReductionError, ValueError) as exc:
        print("error: %s" % exc, file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
