"""Batch front end: load structures, run the validators, emit reports.

Targets are builtin names or JSON files (see docs/formats.md). Exit codes:
0 all checks pass, 1 a verified violation, 2 unusable input or config,
3 a requested computation does not fit inside the truncation.
"""

import argparse
import json
import os
import sys
import time

from . import jsonio
from .adjoint import (L, check_triangles, counit_report, hat_L,
                      hat_unit_report, unit_report, witness_hat_unit_failure)
from .catoperad import (BUILTIN_OPERADS, associativity_operad, barratt_eccles,
                        freeness_report, validate_operad)
from .dalgebra import (free_algebra, terminal_algebra, underlying,
                       validate_algebra, z2_discrete_algebra)
from .dmulticat import (from_nonsymmetric, from_symmetric, terminal_multicat,
                        validate_classical, validate_multicat)
from .errors import BoundExceeded, StructuralError
from .fincat import terminal_category, validate_category
from .finset import canon_key
from .opmonad import canonicalize
from .report import (DEFAULT_TRUNCATE, RunConfig, build, check, emit,
                     exit_code, from_validator)

MULTICAT_BUILTINS = ("terminal", "terminal_symmetric", "terminal_nonsymmetric")
ALGEBRA_BUILTINS = ("z2_discrete", "terminal", "free")


def build_parser():
    p = argparse.ArgumentParser(
        prog="gmcat",
        description="Validate finite operads of categories, multicategories "
                    "over them, and their algebras; enumerate free-algebra "
                    "hom-sets and check the adjunction identities.")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--operad", metavar="NAME|PATH",
                        help="ambient operad (builtin name or operad JSON)")
        sp.add_argument("--truncate", type=int, default=DEFAULT_TRUNCATE,
                        help="builtin operad truncation level")
        sp.add_argument("--bound", type=int, default=None,
                        help="arity bound for checks (default $GMCAT_BOUND or 3)")
        sp.add_argument("--seed", type=int, default=0,
                        help="seed for sampled coherence checks")
        sp.add_argument("--hom", nargs=2, metavar=("SRC", "TGT"),
                        help="hom-set to enumerate: arity or JSON label list")
        sp.add_argument("--hat", action="store_true",
                        help="use the provisional construction (no quotient)")
        sp.add_argument("--require-sigma-free", action="store_true",
                        dest="require_sigma_free",
                        help="fail unless every level action is free")
        sp.add_argument("--out", metavar="PATH",
                        help="write the JSON report here instead of stdout")

    v = sub.add_parser("validate", help="run a structure's validator")
    v.add_argument("kind", choices=["operad", "multicat", "algebra"])
    v.add_argument("target", help="builtin name or JSON path")
    common(v)

    f = sub.add_parser("free", help="enumerate a hom-set of the free algebra")
    f.add_argument("target", help="multicategory: builtin name or JSON path")
    common(f)

    u = sub.add_parser("underlying",
                       help="validate an algebra and dump its multicategory")
    u.add_argument("target", help="algebra: builtin name or JSON path")
    common(u)

    c = sub.add_parser("check-adjunction",
                       help="unit, counit, and triangle identities")
    c.add_argument("multicat", help="builtin name or JSON path")
    c.add_argument("algebra", help="builtin name or JSON path")
    common(c)
    return p


def _config(args):
    targets = {"validate": lambda a: (a.kind, a.target),
               "free": lambda a: (a.target,),
               "underlying": lambda a: (a.target,),
               "check-adjunction": lambda a: (a.multicat, a.algebra)}
    return RunConfig(command=args.command, targets=targets[args.command](args),
                     operad=args.operad, truncate=args.truncate,
                     bound=args.bound, seed=args.seed,
                     hom=tuple(args.hom) if args.hom else None, hat=args.hat,
                     require_sigma_free=args.require_sigma_free, out=args.out)


# ---------------------------------------------------------------------------
# target loading

def _load_doc(path, kinds):
    if not os.path.exists(path):
        raise FileNotFoundError(f"no such file: {path}")
    doc = jsonio.load(path)
    if "kind" not in doc and isinstance(doc.get("dump"), dict):
        doc = doc["dump"]  # accept a report file produced with --out
    if doc.get("kind") not in kinds:
        raise StructuralError(
            f"{path}: expected one of {sorted(kinds)}, got {doc.get('kind')!r}")
    return doc


def _operad_for(cfg):
    name = cfg.operad or "barratt_eccles"
    if name in BUILTIN_OPERADS:
        op = BUILTIN_OPERADS[name](cfg.truncate)
    else:
        op = jsonio.decode_operad(_load_doc(name, {"operad"}))
    if op.max_level < cfg.bound:
        raise StructuralError(
            f"operad truncation {op.max_level} below arity bound {cfg.bound}")
    return op


def _operad_target(target, cfg):
    if target in BUILTIN_OPERADS:
        return BUILTIN_OPERADS[target](cfg.truncate)
    return jsonio.decode_operad(_load_doc(target, {"operad"}))


def _multicat_target(target, cfg):
    """Returns (multicat or None, checks accumulated while loading)."""
    if target == "terminal":
        return terminal_multicat(_operad_for(cfg)), []
    if target == "terminal_symmetric":
        return terminal_multicat(barratt_eccles(cfg.truncate)), []
    if target == "terminal_nonsymmetric":
        return terminal_multicat(associativity_operad(cfg.truncate)), []
    doc = _load_doc(target, {"dmulticat", "classical_multicat"})
    if doc["kind"] == "dmulticat":
        return jsonio.decode_multicat(doc), []
    cm = jsonio.decode_classical(doc)
    symmetric = doc.get("symmetric", bool(cm.act))
    pre = from_validator("classical multicategory axioms",
                         validate_classical(cm, symmetric))
    if pre["status"] != "pass":
        return None, [pre]
    if cfg.operad:
        M = (from_symmetric if symmetric else from_nonsymmetric)(
            cm, _operad_for(cfg))
    elif symmetric:
        M = from_symmetric(cm, barratt_eccles(cfg.truncate))
    else:
        M = from_nonsymmetric(cm, associativity_operad(cfg.truncate))
    return M, [pre]


def _algebra_target(target, cfg):
    if target in ("z2_discrete", "z2"):
        return z2_discrete_algebra(_operad_for(cfg))
    if target == "terminal":
        return terminal_algebra(_operad_for(cfg))
    if target == "free":
        return free_algebra(_operad_for(cfg), terminal_category(), cfg.bound)
    return jsonio.decode_algebra(_load_doc(target, {"algebra"}))


def _object_spec(spec, M, op):
    """An object of the free algebra: an arity, or a JSON list of labels."""
    try:
        n = int(spec)
    except ValueError:
        try:
            labels = json.loads(spec)
        except json.JSONDecodeError:
            raise StructuralError(
                f"hom spec {spec!r} is neither an arity nor a JSON list")
        if not isinstance(labels, list):
            raise StructuralError(f"hom spec {spec!r} must be a JSON list")
        labels = tuple(jsonio.load_label(x) for x in labels)
    else:
        if len(M.objects) != 1:
            raise StructuralError(
                "arity shorthand needs a single-object multicategory")
        labels = (M.objects[0],) * n
    for x in labels:
        if x not in M.objects:
            raise StructuralError(f"{x!r} is not an object of the multicategory")
    d0 = min(op.elements(0, len(labels)), key=canon_key)
    return canonicalize(op, 0, len(labels), d0, labels)


# ---------------------------------------------------------------------------
# commands

def cmd_validate(cfg):
    kind, target = cfg.targets
    checks = []
    if kind == "operad":
        op = _operad_target(target, cfg)
        checks.append(from_validator("operad laws", validate_operad(op)))
        if cfg.require_sigma_free:
            checks.append(from_validator("sigma freeness",
                                         freeness_report(op), "witnesses"))
    elif kind == "multicat":
        M, checks = _multicat_target(target, cfg)
        if M is not None:
            checks.append(from_validator(
                "multicategory axioms", validate_multicat(M, seed=cfg.seed)))
    else:
        A = _algebra_target(target, cfg)
        checks.append(from_validator("carrier category laws",
                                     validate_category(A.carrier)))
        checks.append(from_validator("algebra laws",
                                     validate_algebra(A, cfg.bound)))
    return build(cfg, checks)


def cmd_free(cfg):
    if cfg.hom is None:
        raise StructuralError("free needs --hom SRC TGT")
    M, checks = _multicat_target(cfg.targets[0], cfg)
    if M is None:
        return build(cfg, checks)
    op = M.operad
    a = _object_spec(cfg.hom[0], M, op)
    b = _object_spec(cfg.hom[1], M, op)
    lz = hat_L(M) if cfg.hat else L(M)
    try:
        classes = lz.hom(a, b)
    except BoundExceeded as exc:
        checks.append(check("hom enumeration", False, [str(exc)],
                            bound_exceeded=True))
        return build(cfg, checks)
    if cfg.hat:
        listing = [{"morphism": repr(h)} for h in classes]
    else:
        listing = [{"representative": repr(c.rep), "members": len(c.members)}
                   for c in classes]
    checks.append(check("hom enumeration", True,
                        counts={"classes": len(classes)}))
    dump = {"source": repr(a), "target": repr(b),
            "count": len(classes), "classes": listing}
    return build(cfg, checks, dump)


def cmd_underlying(cfg):
    A = _algebra_target(cfg.targets[0], cfg)
    checks = [from_validator("carrier category laws",
                             validate_category(A.carrier)),
              from_validator("algebra laws", validate_algebra(A, cfg.bound))]
    if any(c["status"] == "fail" for c in checks):
        return build(cfg, checks)
    U = underlying(A, cfg.bound)
    by_arity = {}
    for w in U.morphisms:
        by_arity[U.arity(w)] = by_arity.get(U.arity(w), 0) + 1
    checks.append(check("underlying multimorphisms", True,
                        counts={"morphisms": len(U.morphisms),
                                **{f"arity_{n}": c
                                   for n, c in sorted(by_arity.items())}}))
    dump = jsonio.encode_multicat(U)
    dump["morphisms_by_arity"] = {str(n): c for n, c in sorted(by_arity.items())}
    return build(cfg, checks, dump)


def cmd_check_adjunction(cfg):
    M, checks = _multicat_target(cfg.targets[0], cfg)
    if M is None:
        return build(cfg, checks)
    A = _algebra_target(cfg.targets[1], cfg)
    if (M.operad.name, M.operad.max_level) != (A.operad.name,
                                               A.operad.max_level):
        raise StructuralError(
            f"operad mismatch: multicategory over {M.operad.name}"
            f"({M.operad.max_level}), algebra over {A.operad.name}"
            f"({A.operad.max_level})")
    dump = None
    if cfg.hat:
        rep = hat_unit_report(M)
        checks.append(from_validator("unit checklist (provisional)", rep))
        if not rep["ok"]:
            w = witness_hat_unit_failure(M)
            if w is not None:
                dump = {"unit_defect": {k: repr(v) for k, v in w.items()}}
    else:
        checks.append(from_validator("unit multicategory-map checklist",
                                     unit_report(M)))
    checks.append(from_validator("counit algebra map",
                                 counit_report(A, bound=cfg.bound)))
    tri = check_triangles(M, A, bound=cfg.bound)
    checks.append(check("triangle identities", tri["ok"],
                        tri["triangle_U"] + tri["triangle_L"],
                        counts={"checked_U": tri["checked_U"],
                                "checked_L": tri["checked_L"],
                                "bounded": tri["bounded"]}))
    return build(cfg, checks, dump)


_COMMANDS = {"validate": cmd_validate, "free": cmd_free,
             "underlying": cmd_underlying,
             "check-adjunction": cmd_check_adjunction}


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        cfg = _config(args)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    t0 = time.perf_counter()
    try:
        report = _COMMANDS[cfg.command](cfg)
    except json.JSONDecodeError as exc:
        print(f"error: JSON parse failure: {exc}", file=sys.stderr)
        return 2
    except (FileNotFoundError, StructuralError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except BoundExceeded as exc:
        print(f"bound exceeded: {exc}", file=sys.stderr)
        return 3
    emit(report, cfg, time.perf_counter() - t0)
    return exit_code(report)


if __name__ == "__main__":
    sys.exit(main())
