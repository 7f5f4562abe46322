"""JSON round trips for every structure kind the command line accepts.

Labels are arbitrary JSON values; lists decode to tuples so composite
labels like ["t", 2] round-trip. A monad element used *as a label* (the
carrier of a free algebra, the morphisms of an underlying multicategory)
is wrapped as {"elem": {...}} and needs the ambient operad to decode.
Tables whose keys are not strings are stored as entry lists
([key parts..., value]) rather than JSON objects. Operads over a builtin
are stored by reference ({"builtin": name, "truncate": N}); anything else
gets explicit tables, which only scales to small truncations.
"""

import json

from .catoperad import BUILTIN_OPERADS, operad_tables, tabulated_operad
from .dalgebra import DAlgebra
from .dmulticat import ClassicalMulticat, DMulticat
from .errors import BoundExceeded, StructuralError
from .fincat import Presheaf, category
from .opmonad import MonadElem, all_elements, melem


def dump_label(v):
    if isinstance(v, MonadElem):
        return {"elem": encode_elem(v)}
    if isinstance(v, tuple):
        return [dump_label(x) for x in v]
    return v


def load_label(v, op=None):
    if isinstance(v, dict):
        if op is None or "elem" not in v:
            raise StructuralError(f"label {v!r} needs an ambient operad")
        return decode_elem(op, v["elem"])
    if isinstance(v, list):
        return tuple(load_label(x, op) for x in v)
    return v


def _entries(table, op_hint=None):
    return sorted(([dump_label(k), dump_label(v)] for k, v in table.items()),
                  key=repr)


def encode_elem(e):
    return {"j": e.j, "n": e.n, "d": dump_label(e.d),
            "xs": [dump_label(x) for x in e.xs]}


def decode_elem(op, doc):
    return melem(op, doc["j"], load_label(doc["d"]),
                 tuple(load_label(x, op) for x in doc["xs"]))


# ---------------------------------------------------------------------------
# categories and presheaves

def encode_category(C):
    return {"kind": "category",
            "objects": [dump_label(x) for x in C.objects],
            "morphisms": [dump_label(f) for f in C.morphisms],
            "src": _entries(C.src),
            "tgt": _entries(C.tgt),
            "ident": _entries(C.ident),
            "comp": [[dump_label(f), dump_label(g), dump_label(h)]
                     for (f, g), h in sorted(C.comp.items(), key=repr)]}


def decode_category(doc, op=None):
    lab = lambda v: load_label(v, op)
    return category(
        [lab(x) for x in doc["objects"]],
        [lab(f) for f in doc["morphisms"]],
        {lab(f): lab(a) for f, a in doc["src"]},
        {lab(f): lab(a) for f, a in doc["tgt"]},
        {lab(a): lab(f) for a, f in doc["ident"]},
        {(lab(f), lab(g)): lab(h) for f, g, h in doc["comp"]})


def encode_presheaf(P):
    return {"kind": "presheaf",
            "base": encode_category(P.base),
            "carrier": [dump_label(x) for x in P.carrier],
            "eps": _entries(P.eps),
            "act": [[dump_label(x), dump_label(f), dump_label(y)]
                    for (x, f), y in sorted(P.act.items(), key=repr)]}


def decode_presheaf(doc):
    return Presheaf(
        decode_category(doc["base"]),
        tuple(load_label(x) for x in doc["carrier"]),
        {load_label(x): load_label(a) for x, a in doc["eps"]},
        {(load_label(x), load_label(f)): load_label(y)
         for x, f, y in doc["act"]})


# ---------------------------------------------------------------------------
# operads

def encode_operad(op):
    if op.name in BUILTIN_OPERADS:
        ref = BUILTIN_OPERADS[op.name](op.max_level)
        if ref.levels == op.levels:
            return {"kind": "operad", "builtin": op.name,
                    "truncate": op.max_level}
    act_table, comp_table = operad_tables(op)
    return {"kind": "operad", "name": op.name, "max_level": op.max_level,
            "unit": dump_label(op.unit),
            "levels": [encode_category(L) for L in op.levels],
            "action": [[j, n, list(s), dump_label(x), dump_label(y)]
                       for (j, n, s, x), y in sorted(act_table.items(), key=repr)],
            "composition": [[j, k, dump_label(x),
                             [[m, dump_label(y)] for m, y in inners],
                             dump_label(z)]
                            for (j, k, x, inners), z
                            in sorted(comp_table.items(), key=repr)]}


def decode_operad(doc):
    if "builtin" in doc:
        name = doc["builtin"]
        if name not in BUILTIN_OPERADS:
            raise StructuralError(f"unknown builtin operad {name!r}")
        return BUILTIN_OPERADS[name](doc.get("truncate", 4))
    act_table = {(j, n, tuple(s), load_label(x)): load_label(y)
                 for j, n, s, x, y in doc["action"]}
    comp_table = {(j, k, load_label(x),
                   tuple((m, load_label(y)) for m, y in inners)): load_label(z)
                  for j, k, x, inners, z in doc["composition"]}
    return tabulated_operad(doc["name"], doc["max_level"],
                            [decode_category(L) for L in doc["levels"]],
                            load_label(doc["unit"]), act_table, comp_table)


# ---------------------------------------------------------------------------
# multicategories

def encode_multicat(M):
    return {"kind": "dmulticat",
            "operad": encode_operad(M.operad),
            "objects": [dump_label(x) for x in M.objects],
            "morphisms": [dump_label(f) for f in M.morphisms],
            "tgt": _entries(M.tgt),
            "src": [[dump_label(f), encode_elem(e)]
                    for f, e in sorted(M.src.items(), key=repr)],
            "ident": _entries(M.ident),
            "source_action": [[dump_label(f), encode_elem(d), dump_label(g)]
                              for (f, d), g in sorted(M.source_action.items(),
                                                      key=repr)],
            "composition": [[dump_label(f), encode_elem(p), dump_label(g)]
                            for (f, p), g in sorted(M.composition.items(),
                                                    key=repr)]}


def decode_multicat(doc):
    op = decode_operad(doc["operad"])
    lab = lambda v: load_label(v, op)
    return DMulticat(
        op,
        tuple(lab(x) for x in doc["objects"]),
        tuple(lab(f) for f in doc["morphisms"]),
        {lab(f): lab(a) for f, a in doc["tgt"]},
        {lab(f): decode_elem(op, e) for f, e in doc["src"]},
        {lab(x): lab(f) for x, f in doc["ident"]},
        {(lab(f), decode_elem(op, d)): lab(g)
         for f, d, g in doc["source_action"]},
        {(lab(f), decode_elem(op, p)): lab(g)
         for f, p, g in doc["composition"]})


def encode_classical(cm, symmetric=None):
    return {"kind": "classical_multicat",
            "symmetric": bool(cm.act) if symmetric is None else symmetric,
            "objects": [dump_label(x) for x in cm.objects],
            "morphisms": [dump_label(f) for f in cm.morphisms],
            "src": [[dump_label(f), [dump_label(x) for x in xs]]
                    for f, xs in sorted(cm.src.items(), key=repr)],
            "tgt": _entries(cm.tgt),
            "ident": _entries(cm.ident),
            "comp": [[dump_label(f), [dump_label(g) for g in gs], dump_label(h)]
                     for (f, gs), h in sorted(cm.comp.items(), key=repr)],
            "act": [[dump_label(f), list(s), dump_label(g)]
                    for (f, s), g in sorted(cm.act.items(), key=repr)]}


def decode_classical(doc):
    return ClassicalMulticat(
        tuple(load_label(x) for x in doc["objects"]),
        tuple(load_label(f) for f in doc["morphisms"]),
        {load_label(f): tuple(load_label(x) for x in xs)
         for f, xs in doc["src"]},
        {load_label(f): load_label(a) for f, a in doc["tgt"]},
        {load_label(a): load_label(f) for a, f in doc["ident"]},
        {(load_label(f), tuple(load_label(g) for g in gs)): load_label(h)
         for f, gs, h in doc["comp"]},
        {(load_label(f), tuple(s)): load_label(g)
         for f, s, g in doc.get("act", [])})


# ---------------------------------------------------------------------------
# algebras (tabulated within a stated bound)

def encode_algebra(A, bound):
    C = A.carrier
    xi0, xi1 = [], []
    for e in all_elements(A.operad, 0, C.objects, bound):
        try:
            xi0.append([encode_elem(e), dump_label(A.xi0(e))])
        except BoundExceeded:
            pass
    for e in all_elements(A.operad, 1, C.morphisms, bound):
        try:
            xi1.append([encode_elem(e), dump_label(A.xi1(e))])
        except BoundExceeded:
            pass
    return {"kind": "algebra", "name": A.name, "bound": bound,
            "operad": encode_operad(A.operad),
            "carrier": encode_category(C), "xi0": xi0, "xi1": xi1}


def decode_algebra(doc):
    op = decode_operad(doc["operad"])
    C = decode_category(doc["carrier"], op)
    bound = doc["bound"]
    t0 = {decode_elem(op, e): load_label(v, op) for e, v in doc["xi0"]}
    t1 = {decode_elem(op, e): load_label(v, op) for e, v in doc["xi1"]}

    def lookup(table, degree):
        # absent entries are partiality, not corruption: the encoder skips
        # instances whose value leaves a truncated carrier
        def xi(e):
            if e.n > bound:
                raise BoundExceeded(
                    f"arity {e.n} beyond tabulated bound {bound}")
            if e not in table:
                raise BoundExceeded(
                    f"degree-{degree} action not tabulated at {e!r}")
            return table[e]
        return xi

    return DAlgebra(op, C, lookup(t0, 0), lookup(t1, 1),
                    doc.get("name", "tabulated"))


# ---------------------------------------------------------------------------
# file plumbing

_DECODERS = {"category": decode_category,
             "presheaf": decode_presheaf,
             "operad": decode_operad,
             "dmulticat": decode_multicat,
             "classical_multicat": decode_classical,
             "algebra": decode_algebra}


def decode(doc):
    kind = doc.get("kind")
    if kind not in _DECODERS:
        raise StructuralError(f"unknown or missing structure kind {kind!r}")
    return _DECODERS[kind](doc)


def load(path):
    with open(path) as fh:
        doc = json.load(fh)
    if not isinstance(doc, dict):
        raise StructuralError("top-level JSON value must be an object")
    return doc


def save(doc, path):
    with open(path, "w") as fh:
        json.dump(doc, fh, indent=2, sort_keys=True)
        fh.write("\n")
