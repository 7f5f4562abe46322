"""The free algebra on a multicategory, in two stages.

Stage one pairs a list of multimorphisms with rearrangement data drawn from
the operad; composition threads the data past the lists via the interchange
lift. The unit into this provisional construction preserves everything
except the rearrangement action. Stage two quotients each hom-set by the
relation that attaching data to the sources equals absorbing it into the
stored data; the quotient is computed by union-find closure inside one
hom-set at a time, which is what keeps everything finite and decidable.
"""

from dataclasses import dataclass, field
from itertools import product

from .dalgebra import DAlgebra
from .dmulticat import enumerate_M2
from .errors import BoundExceeded, StructuralError
from .fincat import category
from .finset import canon_key
from .opmonad import (I_D, S_D, T_D, align_sigma, all_elements, canonicalize,
                      chi, elements_of, eta, gamma_D, map_elem, mu, mu_raw)


@dataclass(frozen=True)
class HatMorphism:
    phi: object    # object-level element over multimorphisms
    sigma: object  # morphism-level element over objects

    def _canon_key(self):
        return (9, self.phi._canon_key(), self.sigma._canon_key())

    def __repr__(self):
        return f"Hat({self.phi!r}, {self.sigma!r})"


@dataclass(frozen=True)
class LMorphism:
    rep: HatMorphism
    members: tuple = field(compare=False)

    def _canon_key(self):
        return (10,) + self.rep._canon_key()

    def __repr__(self):
        return f"Cls({self.rep!r} ~{len(self.members)})"


def flat_source(op, M, phi):
    """The flattened sources of a multimorphism list, one monad element."""
    return mu(op, map_elem(op, M.src.get, phi))


def list_target(op, M, phi):
    return map_elem(op, M.tgt.get, phi)


def hat_target(op, M, hat):
    return list_target(op, M, hat.phi)


def hat_source(op, hat):
    return S_D(op, hat.sigma)


def make_hat(op, M, phi, sigma):
    if phi.j != 0 or sigma.j != 1:
        raise StructuralError("hat morphism needs (object-level, morphism-level) parts")
    if flat_source(op, M, phi) != T_D(op, sigma):
        raise StructuralError("hat morphism condition fails: "
                              "flattened sources differ from the data's target")
    return HatMorphism(phi, sigma)


# ---------------------------------------------------------------------------
# composition in the provisional construction

def _regroup(op, M, outer, inner):
    """Split a rearranged flat list under the outer slots and compose slotwise."""
    srcs = tuple(M.src[g] for g in outer.xs)
    n, d_flat, xs_flat = mu_raw(op, 0, outer.n, outer.d, srcs)
    u = align_sigma(op, 0, n, inner.d, d_flat)
    if u is None:
        raise StructuralError("regrouping failed: flat list off the orbit")
    arranged = u.inverse().permuted(inner.xs)
    if tuple(M.tgt[g] for g in arranged) != xs_flat:
        raise StructuralError("regrouping failed: targets disagree")
    out, off = [], 0
    for g, s in zip(outer.xs, srcs):
        block = canonicalize(op, 0, s.n, s.d, tuple(arranged[off:off + s.n]))
        off += s.n
        out.append(M.compose(g, block))
    return canonicalize(op, 0, outer.n, outer.d, tuple(out))


def hat_compose(op, M, f, g):
    """f after g: interchange f's data past g's list, then compose slotwise."""
    if hat_source(op, f) != hat_target(op, M, g):
        raise StructuralError("hat morphisms not composable")
    moved_list, moved_data = chi(op, f.sigma, g.phi, M.src.get, M.tgt.get)
    return make_hat(op, M, _regroup(op, M, f.phi, moved_list),
                    gamma_D(op, moved_data, g.sigma))


def hat_ident(op, M, a):
    return HatMorphism(map_elem(op, M.ident.get, a), I_D(op, a))


def hat_xi1(op, M, E):
    """The morphism-level action: flatten lists along targets, flatten data."""
    lists = map_elem(op, lambda h: h.phi, E)
    datas = map_elem(op, lambda h: h.sigma, E)
    return make_hat(op, M, mu(op, T_D(op, lists)), mu(op, datas))


# ---------------------------------------------------------------------------
# lazy algebra with per-hom-set memoization

@dataclass
class LazyDAlgebra:
    operad: object
    M: object
    quotient: bool
    name: str = ""
    _cache: dict = field(default_factory=dict, repr=False)

    # -- enumeration --------------------------------------------------------
    def objects_upto(self, bound):
        return all_elements(self.operad, 0, self.M.objects, bound)

    def _phis(self, n):
        """All multimorphism lists of a given length, with target and
        flattened source precomputed (skipping flattenings past truncation)."""
        key = ("phi", n)
        if key not in self._cache:
            op, M = self.operad, self.M
            rows = []
            for phi in elements_of(op, 0, M.morphisms, n):
                if sum(M.src[g].n for g in phi.xs) > op.max_level:
                    continue
                rows.append((phi, list_target(op, M, phi),
                             flat_source(op, M, phi)))
            self._cache[key] = tuple(rows)
        return self._cache[key]

    def _sigmas(self, n):
        key = ("sig", n)
        if key not in self._cache:
            op, M = self.operad, self.M
            by_ends, by_tgt = {}, {}
            for s in elements_of(op, 1, M.objects, n):
                by_ends.setdefault((S_D(op, s), T_D(op, s)), []).append(s)
                by_tgt.setdefault(T_D(op, s), []).append(s)
            self._cache[key] = (by_ends, by_tgt)
        return self._cache[key]

    def hom_hat(self, a, b):
        key = ("hom", a, b)
        if key not in self._cache:
            out = []
            for phi, tgt_b, flat in self._phis(b.n):
                if tgt_b != b or flat.n != a.n:
                    continue
                for s in self._sigmas(a.n)[0].get((a, flat), ()):
                    out.append(HatMorphism(phi, s))
            out.sort(key=canon_key)
            self._cache[key] = tuple(out)
        return self._cache[key]

    # -- the coequalizer relation -------------------------------------------
    def relation_instances(self, a, b):
        """Both legs of every relation instance landing in hom(a, b)."""
        op, M = self.operad, self.M
        for phi, tgt_b, flat in self._phis(b.n):
            if tgt_b != b or flat.n != a.n:
                continue
            slots = [self._sigmas(s.n)[1].get(s, ())
                     for s in (M.src[g] for g in phi.xs)]
            if any(not c for c in slots):
                continue
            lvl = op.level(phi.n)
            for taus in product(*slots):
                acted = tuple(M.source_action[(g, t)]
                              for g, t in zip(phi.xs, taus))
                attached = canonicalize(op, 0, phi.n, phi.d, acted)
                absorbed = canonicalize(
                    op, 1, *mu_raw(op, 1, phi.n, lvl.ident[phi.d], taus))
                for s in self._sigmas(a.n)[0].get((a, S_D(op, absorbed)), ()):
                    yield (HatMorphism(attached, s),
                           HatMorphism(phi, gamma_D(op, absorbed, s)))

    def _closure(self, a, b):
        key = ("cls", a, b)
        if key not in self._cache:
            items = self.hom_hat(a, b)
            parent = {h: h for h in items}

            def find(h):
                while parent[h] != h:
                    parent[h] = parent[parent[h]]
                    h = parent[h]
                return h

            for lhs, rhs in self.relation_instances(a, b):
                if lhs not in parent or rhs not in parent:
                    raise StructuralError("relation leg left its hom-set")
                ra, rb = find(lhs), find(rhs)
                if ra != rb:
                    parent[max(ra, rb, key=canon_key)] = min(ra, rb,
                                                             key=canon_key)
            buckets = {}
            for h in items:
                buckets.setdefault(find(h), []).append(h)
            classes, lookup = [], {}
            for members in buckets.values():
                members.sort(key=canon_key)
                cls = LMorphism(members[0], tuple(members))
                classes.append(cls)
                for h in members:
                    lookup[h] = cls
            classes.sort(key=canon_key)
            self._cache[key] = (tuple(classes), lookup)
        return self._cache[key]

    def class_of(self, hat):
        a = hat_source(self.operad, hat)
        b = hat_target(self.operad, self.M, hat)
        lookup = self._closure(a, b)[1]
        if hat not in lookup:
            raise StructuralError("morphism missing from its hom-set closure")
        return lookup[hat]

    # -- categorical interface ----------------------------------------------
    def hom(self, a, b):
        return self._closure(a, b)[0] if self.quotient else self.hom_hat(a, b)

    def ident(self, a):
        h = hat_ident(self.operad, self.M, a)
        return self.class_of(h) if self.quotient else h

    def compose(self, f, g):
        if self.quotient:
            return self.class_of(
                hat_compose(self.operad, self.M, f.rep, g.rep))
        return hat_compose(self.operad, self.M, f, g)

    def src(self, h):
        return hat_source(self.operad, h.rep if self.quotient else h)

    def tgt(self, h):
        return hat_target(self.operad, self.M, h.rep if self.quotient else h)

    def xi0(self, e):
        return mu(self.operad, e)

    def xi1(self, e):
        if self.quotient:
            hat = hat_xi1(self.operad, self.M,
                          map_elem(self.operad, lambda c: c.rep, e))
            return self.class_of(hat)
        return hat_xi1(self.operad, self.M, e)

    def eq(self, h1, h2):
        return h1 == h2


def hat_L(M):
    return LazyDAlgebra(M.operad, M, quotient=False, name="hat_L")


def L(M):
    return LazyDAlgebra(M.operad, M, quotient=True, name="L")


_instances = {}


def _lazy_for(M, quotient=True):
    key = (id(M), quotient)
    if key not in _instances:
        _instances[key] = L(M) if quotient else hat_L(M)
    return _instances[key]


def coeq_equiv(M, e1, e2):
    """Decide the hom-set closure relation between two provisional morphisms."""
    op = M.operad
    if hat_source(op, e1) != hat_source(op, e2) or \
       hat_target(op, M, e1) != hat_target(op, M, e2):
        return False
    lz = _lazy_for(M)
    return lz.class_of(e1) == lz.class_of(e2)


def validate_coeq_fork(M, a, b):
    """Leg endpoints and the reflexive section, on every generated instance."""
    op = M.operad
    lz = _lazy_for(M)
    failures, instances = [], 0
    for lhs, rhs in lz.relation_instances(a, b):
        instances += 1
        for leg in (lhs, rhs):
            if hat_source(op, leg) != a or hat_target(op, M, leg) != b:
                failures.append(("leg moves an endpoint", leg))
    for h in lz.hom_hat(a, b):
        taus = tuple(I_D(op, M.src[g]) for g in h.phi.xs)
        acted = tuple(M.source_action[(g, t)] for g, t in zip(h.phi.xs, taus))
        lvl = op.level(h.phi.n)
        absorbed = canonicalize(
            op, 1, *mu_raw(op, 1, h.phi.n, lvl.ident[h.phi.d], taus))
        sec_l = HatMorphism(canonicalize(op, 0, h.phi.n, h.phi.d, acted),
                            h.sigma)
        sec_r = HatMorphism(h.phi, gamma_D(op, absorbed, h.sigma))
        if sec_l != h or sec_r != h:
            failures.append(("identity data is not a common section", h))
    return {"ok": not failures, "failures": failures, "instances": instances}


def descent_report(M, bound=2):
    """Composition and the action land in the same class whichever member
    of each class represents it."""
    op = M.operad
    lz = _lazy_for(M)
    objs = lz.objects_upto(bound)
    failures, pairs = [], 0
    for a in objs:
        for b in objs:
            for c in objs:
                for cf in lz.hom(b, c):
                    for cg in lz.hom(a, b):
                        expected = lz.compose(cf, cg)
                        pairs += 1
                        for f in cf.members:
                            for g in cg.members:
                                got = lz.class_of(hat_compose(op, M, f, g))
                                if got != expected:
                                    failures.append(
                                        ("composite depends on members",
                                         (cf, cg, f, g)))
    members = tuple(h for a in objs for b in objs
                    for cls in lz.hom(a, b) for h in cls.members)
    acted = 0
    for E in all_elements(op, 1, members, 2):
        if sum(hat_source(op, h).n for h in E.xs) > bound or \
           sum(hat_target(op, M, h).n for h in E.xs) > bound:
            continue
        acted += 1
        if lz.class_of(hat_xi1(op, M, E)) != lz.xi1(
                map_elem(op, lz.class_of, E)):
            failures.append(("action depends on members", E))
    return {"ok": not failures, "failures": failures,
            "pairs": pairs, "action_elems": acted}


# ---------------------------------------------------------------------------
# materialization

def to_algebra(lazy, bound):
    """Freeze the lazy algebra into tables on objects within the bound."""
    op = lazy.operad
    objs = lazy.objects_upto(bound)
    mors, src, tgt = [], {}, {}
    for a in objs:
        for b in objs:
            for h in lazy.hom(a, b):
                mors.append(h)
                src[h], tgt[h] = a, b
    ident = {a: lazy.ident(a) for a in objs}
    comp = {}
    for f in mors:
        for g in mors:
            if src[f] == tgt[g]:
                comp[(f, g)] = lazy.compose(f, g)
    carrier = category(objs, mors, src, tgt, ident, comp)
    inside = frozenset(mors)

    def xi0(e):
        out = lazy.xi0(e)
        if out.n > bound:
            raise BoundExceeded(f"flattening to arity {out.n} leaves the "
                                f"materialized carrier (bound {bound})")
        return out

    def xi1(e):
        out = lazy.xi1(e)
        if out not in inside:
            raise BoundExceeded("action lands outside the materialized carrier")
        return out

    return DAlgebra(op, carrier, xi0, xi1, name=lazy.name)


# ---------------------------------------------------------------------------
# unit

def unit_object(op, x):
    return eta(op, 0, x)


def unit_hat(op, M, f):
    return make_hat(op, M, eta(op, 0, f), I_D(op, M.src[f]))


def _ul_ident(lazy, a):
    return (lazy.ident(a), eta(lazy.operad, 0, a))


def _ul_act(lazy, w, delta):
    op = lazy.operad
    moved = lazy.xi1(map_elem(op, lazy.ident, delta))
    return (lazy.compose(w[0], moved), S_D(op, delta))


def _ul_compose(lazy, w, Phi):
    op = lazy.operad
    mids = map_elem(op, lambda v: v[0], Phi)
    filled = lazy.xi1(canonicalize(op, 1, mids.n,
                                   op.level(mids.n).ident[mids.d], mids.xs))
    return (lazy.compose(w[0], filled),
            mu(op, map_elem(op, lambda v: v[1], Phi)))


def _map_checklist(M, lazy):
    """The multicategory-map laws for the unit into the given construction."""
    op = M.operad
    e0 = lambda x: unit_object(op, x)

    def u1(f):
        h = unit_hat(op, M, f)
        return lazy.class_of(h) if lazy.quotient else h

    def upair(f):
        return (u1(f), map_elem(op, e0, M.src[f]))

    failures = []
    for f in M.morphisms:
        w = upair(f)
        if lazy.tgt(w[0]) != e0(M.tgt[f]):
            failures.append(("target not preserved", f))
        if lazy.xi0(w[1]) != lazy.src(w[0]):
            failures.append(("source not preserved", f))
    for x in M.objects:
        if upair(M.ident[x]) != _ul_ident(lazy, e0(x)):
            failures.append(("identity not preserved", x))
    for f, Phi in enumerate_M2(M):
        lhs = upair(M.compose(f, Phi))
        rhs = _ul_compose(lazy, upair(f), map_elem(op, upair, Phi))
        if lhs != rhs:
            failures.append(("composition not preserved", (f, Phi)))
    for (f, delta), out in sorted(M.source_action.items(), key=canon_key):
        lhs = upair(out)
        rhs = _ul_act(lazy, upair(f), map_elem(op, e0, delta))
        if lhs != rhs:
            failures.append(("action not preserved", (f, delta)))
    return {"ok": not failures, "failures": failures,
            "morphisms": len(M.morphisms), "pairs": len(enumerate_M2(M)),
            "action_pairs": len(M.source_action)}


def unit_report(M):
    return _map_checklist(M, _lazy_for(M))


def hat_unit_report(M):
    return _map_checklist(M, _lazy_for(M, quotient=False))


def witness_hat_unit_failure(M):
    """First action pair the provisional unit fails on, if any."""
    op = M.operad
    lz = _lazy_for(M, quotient=False)
    e0 = lambda x: unit_object(op, x)
    for (f, delta), out in sorted(M.source_action.items(), key=canon_key):
        lhs = unit_hat(op, M, out)
        w = (unit_hat(op, M, f), map_elem(op, e0, M.src[f]))
        rhs = _ul_act(lz, w, map_elem(op, e0, delta))[0]
        if lhs != rhs:
            return {"f": f, "delta": delta, "lhs": lhs, "rhs": rhs}
    return None


# ---------------------------------------------------------------------------
# counit

def counit_object(A, X):
    return A.xi0(X)


def counit_hat(A, hat):
    """Evaluate a provisional morphism over the underlying multicategory."""
    op, C = A.operad, A.carrier
    tops = map_elem(op, lambda w: w[0], hat.phi)
    g_top = A.xi1(canonicalize(op, 1, tops.n,
                               op.level(tops.n).ident[tops.d], tops.xs))
    moved = A.xi1(map_elem(op, C.ident.get, hat.sigma))
    return C.comp[(g_top, moved)]


def counit_report(A, bound=2):
    """Class-constancy, functoriality, and the algebra-map law of the counit."""
    from .dalgebra import underlying
    op = A.operad
    U = underlying(A, bound)
    LU = _lazy_for(U)
    objs = LU.objects_upto(bound)
    failures, classes_seen, bounded = [], 0, 0
    eps = {}
    for a in objs:
        for b in objs:
            for cls in LU.hom(a, b):
                classes_seen += 1
                try:
                    values = {counit_hat(A, m) for m in cls.members}
                except BoundExceeded:
                    bounded += 1  # evaluation leaves a truncated carrier
                    continue
                if len(values) != 1:
                    failures.append(("not constant on a class", cls))
                    continue
                eps[cls] = values.pop()
                if A.carrier.src[eps[cls]] != counit_object(A, a) or \
                   A.carrier.tgt[eps[cls]] != counit_object(A, b):
                    failures.append(("endpoint mismatch", cls))
    for a in objs:
        if LU.ident(a) not in eps:
            bounded += 1
        elif eps[LU.ident(a)] != A.carrier.ident[counit_object(A, a)]:
            failures.append(("identity not preserved", a))
    for f, fa in eps.items():
        for g, ga in eps.items():
            if LU.src(f) == LU.tgt(g):
                try:
                    h = LU.compose(f, g)
                except BoundExceeded:
                    bounded += 1
                    continue
                if h not in eps:
                    bounded += 1
                elif eps[h] != A.carrier.comp[(fa, ga)]:
                    failures.append(("composition not preserved", (f, g)))
    mors = tuple(eps)
    checked = 0
    for E in all_elements(op, 1, mors, 2):
        if sum(LU.src(c).n for c in E.xs) > bound or \
           sum(LU.tgt(c).n for c in E.xs) > bound:
            continue
        try:
            lhs = LU.xi1(E)
            rhs = A.xi1(map_elem(op, eps.get, E))
        except BoundExceeded:
            bounded += 1
            continue
        if lhs not in eps:
            bounded += 1
        elif eps[lhs] != rhs:
            failures.append(("action not preserved", E))
        else:
            checked += 1
    return {"ok": not failures, "failures": failures, "classes": classes_seen,
            "action_checked": checked, "bounded": bounded}


# ---------------------------------------------------------------------------
# triangle identities

def check_triangles(M, A, bound=2):
    """Both adjunction triangles, exhaustively within the bound."""
    from .dalgebra import underlying
    op = M.operad
    fail_U, fail_L = [], []

    bounded = 0
    UA = underlying(A, bound)
    LUA = _lazy_for(UA)
    e0A = lambda x: unit_object(UA.operad, x)
    for w in UA.morphisms:
        try:
            cls = LUA.class_of(unit_hat(UA.operad, UA, w))
            back = (counit_hat(A, cls.rep),
                    map_elem(UA.operad, A.xi0,
                             map_elem(UA.operad, e0A, w[1])))
            if back != w:
                fail_U.append(("round trip moves a multimorphism", w, back))
        except BoundExceeded:
            bounded += 1  # instance leaves a truncated carrier
        except Exception as exc:  # fault diagnostics, not control flow
            fail_U.append(("round trip broke", w, repr(exc)))

    LM = _lazy_for(M)
    e0 = lambda x: unit_object(op, x)

    def u1(g):
        return LM.class_of(unit_hat(op, M, g))

    objs = LM.objects_upto(bound)
    for a in objs:
        for b in objs:
            for cls in LM.hom(a, b):
                try:
                    rep = cls.rep
                    phi2 = map_elem(op, lambda g: (u1(g),
                                                   map_elem(op, e0, M.src[g])),
                                    rep.phi)
                    hat2 = HatMorphism(phi2, map_elem(op, e0, rep.sigma))
                    tops = map_elem(op, lambda v: v[0], hat2.phi)
                    g_top = LM.xi1(canonicalize(
                        op, 1, tops.n, op.level(tops.n).ident[tops.d],
                        tops.xs))
                    moved = LM.xi1(map_elem(op, LM.ident, hat2.sigma))
                    if LM.compose(g_top, moved) != cls:
                        fail_L.append(("round trip moves a class", cls))
                except BoundExceeded:
                    bounded += 1
                except Exception as exc:
                    fail_L.append(("round trip broke", cls, repr(exc)))
    return {"ok": not (fail_U or fail_L),
            "triangle_U": fail_U, "triangle_L": fail_L,
            "checked_U": len(UA.morphisms),
            "checked_L": sum(len(LM.hom(a, b)) for a in objs for b in objs),
            "bounded": bounded}
