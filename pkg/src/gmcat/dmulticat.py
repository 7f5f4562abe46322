"""Multicategories whose source lists live in the object monad.

A multimorphism f has a single target object and a whole monad element of
sources; the operad acts on sources through a presheaf action psi1 over the
category {D0 M0, D1 M0}, and composition gamma takes a morphism together
with an object-monad element of morphisms filling its source slots. All
enumeration is bounded by the largest source arity appearing in the data,
so finite inputs need no user-facing truncation.
"""

import random
from dataclasses import dataclass, field, replace
from itertools import product

from .errors import StructuralError
from .fincat import Presheaf, transport_presheaf, validate_presheaf
from .finset import Perm, block_perm, canon_key, identity_perm, perms
from .opmonad import (T_D, all_elements, canonicalize, elements_of, eta,
                      map_elem, melem, monad_set_category, mu)


@dataclass(frozen=True)
class DMulticat:
    """Finite multicategory over a sigma-free operad, with explicit tables."""

    operad: object
    objects: tuple
    morphisms: tuple
    tgt: dict
    src: dict            # f -> object-monad element over objects
    ident: dict          # x -> unary morphism
    source_action: dict  # (f, delta) -> f' for morphism-monad delta with T_D(delta) = src(f)
    composition: dict    # (f, Phi) -> f' for object-monad Phi over morphisms

    def arity(self, f):
        return self.src[f].n

    @property
    def cap(self):
        return max((e.n for e in self.src.values()), default=0)

    def act(self, f, delta):
        key = (f, delta)
        if key not in self.source_action:
            raise StructuralError(f"source action undefined on {key!r}")
        return self.source_action[key]

    def compose(self, f, phis):
        key = (f, phis)
        if key not in self.composition:
            raise StructuralError(f"composition undefined on {key!r}")
        return self.composition[key]


def enumerate_M2(M):
    """Composable pairs: (f, Phi) with src(f) = D0 tgt(Phi), flatten within cap."""
    op, out = M.operad, []
    for f in M.morphisms:
        s = M.src[f]
        for Phi in elements_of(op, 0, M.morphisms, s.n):
            if map_elem(op, M.tgt.get, Phi) != s:
                continue
            if sum(M.src[g].n for g in Phi.xs) <= M.cap:
                out.append((f, Phi))
    return tuple(out)


def enumerate_M3(M):
    """Composable triples: (pair, Psi) with Psi an object-monad element of
    pairs whose first components recover the pair's filling."""
    op, out = M.operad, []
    m2 = enumerate_M2(M)
    by_first = {}
    for w in m2:
        by_first.setdefault(w[0], []).append(w)
    for f, Phi in m2:
        slots = [by_first.get(g, ()) for g in Phi.xs]
        if any(not s for s in slots):
            continue
        for combo in product(*slots):
            total = sum(mu(op, map_elem(op, M.src.get, W[1])).n for W in combo)
            if total > M.cap:
                continue
            Psi = canonicalize(op, 0, Phi.n, Phi.d, combo)
            out.append(((f, Phi), Psi))
    seen, uniq = set(), []
    for w in out:
        if w not in seen:
            seen.add(w)
            uniq.append(w)
    return tuple(uniq)


def gamma_T(M, w):
    """Compose the outer pair first; the inner fillings concatenate."""
    (f, Phi), Psi = w
    op = M.operad
    return (M.compose(f, Phi), mu(op, map_elem(op, lambda W: W[1], Psi)))


def gamma_S(M, w):
    """Compose the inner pairs first; the outer shape is unchanged."""
    (f, Phi), Psi = w
    op = M.operad
    return (f, map_elem(op, lambda W: M.compose(W[0], W[1]), Psi))


def _psi_presheaf(M, base=None):
    op = M.operad
    DC = base if base is not None else monad_set_category(op, M.objects, M.cap)
    return Presheaf(DC, tuple(M.morphisms), dict(M.src), dict(M.source_action))


def over_point_form(M):
    """The equivalent presheaf over the one-object-per-arity base, obtained by
    transporting the stored action across the arity-collapsing cover."""
    op = M.operad
    from .fincat import CatFunctor
    DC = monad_set_category(op, M.objects, M.cap)
    DP = monad_set_category(op, ("*",), M.cap)
    squash = lambda e: map_elem(op, lambda x: "*", e)
    DF = CatFunctor(DC, DP, {X: squash(X) for X in DC.objects},
                    {E: squash(E) for E in DC.morphisms})
    eps_factor = {f: squash(M.src[f]) for f in M.morphisms}
    return transport_presheaf(DF, _psi_presheaf(M, base=DC), eps_factor)


def validate_multicat(M, coherence_budget=2000, seed=0):
    """Every axiom of the structure, in bounded exhaustive form."""
    op = M.operad
    failures = []
    if M.cap > op.max_level:
        raise StructuralError("morphism arity exceeds the operad truncation")

    for x in M.objects:
        i = M.ident[x]
        if M.src[i] != eta(op, 0, x):
            failures.append(("identity source is not the unit element", x))
        if M.tgt[i] != x:
            failures.append(("identity target moved", x))

    psi_rep = validate_presheaf(_psi_presheaf(M))
    for fail in psi_rep["failures"]:
        failures.append(("source action: " + fail[0],) + tuple(fail[1:]))
    for (f, delta), f2 in M.source_action.items():
        if M.tgt[f2] != M.tgt[f]:
            failures.append(("source action moved a target", (f, delta)))

    m2 = enumerate_M2(M)
    have, want = set(M.composition), set(m2)
    for key in want - have:
        failures.append(("composition missing on composable pair", key))
    for key in have - want:
        failures.append(("composition defined outside composable pairs", key))

    for f, Phi in want & have:
        g = M.composition[(f, Phi)]
        if M.tgt[g] != M.tgt[f]:
            failures.append(("composite target moved", (f, Phi)))
        if M.src[g] != mu(op, map_elem(op, M.src.get, Phi)):
            failures.append(("composite source is not the flattened sources", (f, Phi)))

    for f in M.morphisms:
        filler = map_elem(op, M.ident.get, M.src[f])
        if M.composition.get((f, filler)) != f:
            failures.append(("right unit fails", f))
        unit_pair = (M.ident[M.tgt[f]], eta(op, 0, f))
        if M.arity(f) <= M.cap and M.composition.get(unit_pair) != f:
            failures.append(("left unit fails", f))

    m3 = enumerate_M3(M)
    for w in m3:
        a, b = gamma_T(M, w), gamma_S(M, w)
        if M.composition.get(a) != M.composition.get(b):
            failures.append(("associativity fails", w))

    coh = _coherence_triples(M, coherence_budget, seed)
    for f, Phi, deltas in coh:
        k = Phi.n
        lhs_delta = mu(op, canonicalize(op, 1, k, op.level(k).ident[Phi.d], deltas))
        lhs = M.source_action.get((M.composition[(f, Phi)], lhs_delta))
        Phi2 = canonicalize(op, 0, k, Phi.d,
                            tuple(M.source_action[(g, d)] for g, d in zip(Phi.xs, deltas)))
        rhs = M.composition.get((f, Phi2))
        if lhs is None or lhs != rhs:
            failures.append(("action does not interchange with composition",
                             (f, Phi, deltas)))
    return {"ok": not failures, "failures": failures,
            "m2": len(m2), "m3": len(m3), "coherence_checked": len(coh)}


def _coherence_triples(M, budget, seed):
    """Pairs from M2 with one action morphism chosen per source slot."""
    op = M.operad
    deltas_at = {}
    for n in range(M.cap + 1):
        for X in all_elements(op, 0, M.objects, n):
            deltas_at.setdefault(X, [])
        for d in elements_of(op, 1, M.objects, n):
            deltas_at.setdefault(T_D(op, d), []).append(d)
    combos = []
    for f, Phi in enumerate_M2(M):
        if (f, Phi) not in M.composition:
            continue
        slots = [deltas_at.get(M.src[g], ()) for g in Phi.xs]
        if any(not s for s in slots):
            continue
        count = 1
        for s in slots:
            count *= len(s)
        combos.append((f, Phi, slots, count))
    total = sum(c for *_, c in combos)
    out = []
    if total <= budget:
        for f, Phi, slots, _ in combos:
            for choice in product(*slots):
                out.append((f, Phi, tuple(choice)))
    else:
        rng = random.Random(seed)
        for _ in range(budget):
            f, Phi, slots, _ = rng.choice(combos)
            out.append((f, Phi, tuple(rng.choice(s) for s in slots)))
    return out


# ---------------------------------------------------------------------------
# classical inputs

@dataclass(frozen=True)
class ClassicalMulticat:
    """Multimorphisms with literal source lists; the symmetric case carries a
    right permutation action: src(act(f,s)) = s.permuted(src(f)),
    act(act(f,s),t) = act(f, s.compose(t))."""

    objects: tuple
    morphisms: tuple
    src: dict    # f -> tuple of objects
    tgt: dict    # f -> object
    ident: dict  # x -> f
    comp: dict   # (f, (g1..gk)) -> f'
    act: dict = field(default_factory=dict)  # (f, sigma images) -> f'


def validate_classical(cm, symmetric):
    failures = []
    cap = max((len(cm.src[f]) for f in cm.morphisms), default=0)
    for x in cm.objects:
        i = cm.ident.get(x)
        if i is None or cm.src[i] != (x,) or cm.tgt[i] != x:
            failures.append(("bad identity", x))
    if symmetric:
        for f in cm.morphisms:
            n = len(cm.src[f])
            for s in perms(n):
                g = cm.act.get((f, s.images))
                if g is None or cm.src[g] != s.permuted(cm.src[f]) or cm.tgt[g] != cm.tgt[f]:
                    failures.append(("action missing or moves endpoints", (f, s.images)))
            for s in perms(n):
                for t in perms(n):
                    lhs = cm.act.get((cm.act.get((f, s.images)), t.images))
                    if lhs != cm.act.get((f, s.compose(t).images)):
                        failures.append(("action law fails", (f, s.images, t.images)))

    def fillings(f):
        slots = [[g for g in cm.morphisms if cm.tgt[g] == x] for x in cm.src[f]]
        for combo in product(*slots):
            if sum(len(cm.src[g]) for g in combo) <= cap:
                yield combo

    for f in cm.morphisms:
        for combo in fillings(f):
            h = cm.comp.get((f, combo))
            if h is None:
                failures.append(("composition missing", (f, combo)))
                continue
            if cm.tgt[h] != cm.tgt[f]:
                failures.append(("composite target moved", (f, combo)))
            want = tuple(x for g in combo for x in cm.src[g])
            if cm.src[h] != want:
                failures.append(("composite sources are not concatenated", (f, combo)))
        if cm.comp.get((f, tuple(cm.ident[x] for x in cm.src[f]))) != f:
            failures.append(("right unit fails", f))
        if cm.comp.get((cm.ident[cm.tgt[f]], (f,))) != f:
            failures.append(("left unit fails", f))

    for (f, combo), h in list(cm.comp.items()):
        inner = [list(fillings(g)) for g in combo]
        for pick in product(*inner):
            flat = tuple(g2 for fill in pick for g2 in fill)
            if sum(len(cm.src[g2]) for g2 in flat) > cap:
                continue
            one = cm.comp.get((h, flat))
            stepwise = tuple(cm.comp.get((g, fill)) for g, fill in zip(combo, pick))
            two = cm.comp.get((f, stepwise)) if all(s is not None for s in stepwise) else None
            if one is None or one != two:
                failures.append(("associativity fails", (f, combo, pick)))

    if symmetric:
        for (f, combo), h in list(cm.comp.items()):
            n = len(combo)
            sizes = tuple(len(cm.src[g]) for g in combo)
            for s in perms(n):
                lhs = cm.comp.get((cm.act[(f, s.images)], s.permuted(combo)))
                blk = block_perm(s, s.permuted(sizes))
                if lhs != cm.act.get((h, blk.images)):
                    failures.append(("composition not equivariant", (f, combo, s.images)))
    return {"ok": not failures, "failures": failures, "cap": cap}


def _encode(cm, op, symmetric):
    rep = validate_classical(cm, symmetric)
    if not rep["ok"]:
        raise StructuralError(f"classical axioms fail: {rep['failures'][0]}")
    cap = rep["cap"]
    if cap > op.max_level:
        raise StructuralError("arity exceeds the operad truncation")
    src = {f: melem(op, 0, _level_unit_obj(op, len(cm.src[f])), cm.src[f])
           for f in cm.morphisms}
    action = {}
    for f in cm.morphisms:
        n = len(cm.src[f])
        for delta in elements_of(op, 1, cm.objects, n):
            if T_D(op, delta) != src[f]:
                continue
            r = _left_coset_perm(op, delta, src[f])
            if symmetric:
                action[(f, delta)] = cm.act[(f, r.inverse().images)]
            else:
                if not r.is_identity:
                    raise StructuralError("non-identity action morphism over a discrete operad")
                action[(f, delta)] = f
    composition = {}
    M_half = DMulticat(op, tuple(cm.objects), tuple(cm.morphisms),
                       dict(cm.tgt), src, dict(cm.ident), action, {})
    for f, Phi in enumerate_M2(M_half):
        sigma = _align_to_identity(op, Phi)
        fillers = sigma.permuted(Phi.xs)
        if tuple(cm.tgt[g] for g in fillers) != cm.src[f]:
            raise StructuralError("filling misaligned with literal sources")
        composition[(f, Phi)] = cm.comp[(f, fillers)]
    return replace(M_half, composition=composition)


def _level_unit_obj(op, n):
    """The object of level n sitting over the identity arrangement."""
    objs = sorted(op.elements(0, n), key=canon_key)
    if op.name == "barratt_eccles":
        return tuple(range(1, n + 1))
    return objs[0] if len(objs) == 1 else identity_perm(n).images


def _align_to_identity(op, e):
    """The permutation carrying e's canonical d-part to the level unit object."""
    from .opmonad import align_sigma
    target = _level_unit_obj(op, e.n)
    s = align_sigma(op, 0, e.n, e.d, target)
    if s is None:
        raise StructuralError("element does not align with the unit arrangement")
    return s


def _left_coset_perm(op, delta, src_elem):
    """For a morphism element with target src_elem, the permutation r such that
    delta has a representative (unit -> r-arrangement) over the literal sources."""
    n = delta.n
    L = op.level(n)
    for s in perms(n):
        m = op.act(1, n, s, delta.d)
        if L.tgt[m] == _level_unit_obj(op, n) and s.permuted(delta.xs) == src_elem.xs:
            if op.name == "barratt_eccles":
                return Perm(L.src[m])
            return identity_perm(n)
    raise StructuralError("could not align action morphism")


def from_symmetric(cm, op=None):
    """Encode a classical symmetric multicategory over the permutation operad."""
    if op is None:
        from .catoperad import barratt_eccles
        cap = max((len(cm.src[f]) for f in cm.morphisms), default=0)
        op = barratt_eccles(max(cap, 1))
    return _encode(cm, op, symmetric=True)


def from_nonsymmetric(cm, op=None):
    """Encode a classical non-symmetric multicategory over the word operad."""
    if op is None:
        from .catoperad import associativity_operad
        cap = max((len(cm.src[f]) for f in cm.morphisms), default=0)
        op = associativity_operad(max(cap, 1))
    return _encode(cm, op, symmetric=False)


# ---------------------------------------------------------------------------
# stock examples

def terminal_multicat(op, cap=None):
    """One object; exactly one morphism out of every canonical source element."""
    cap = op.max_level if cap is None else cap
    objects = ("*",)
    morphisms = tuple(("t", n) for n in range(cap + 1))
    src = {("t", n): melem(op, 0, _level_unit_obj(op, n), ("*",) * n)
           for n in range(cap + 1)}
    tgt = {f: "*" for f in morphisms}
    ident = {"*": ("t", 1)}
    action = {}
    for f in morphisms:
        n = f[1]
        for delta in elements_of(op, 1, objects, n):
            if T_D(op, delta) == src[f]:
                action[(f, delta)] = f
    M_half = DMulticat(op, objects, morphisms, tgt, src, ident, action, {})
    composition = {(f, Phi): ("t", mu(op, map_elem(op, src.get, Phi)).n)
                   for f, Phi in enumerate_M2(M_half)}
    return replace(M_half, composition=composition)
