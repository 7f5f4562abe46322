"""Finite sets, functions, permutations, and group actions.

Everything downstream leans on three things defined here: a total canonical
order on labels (`canon_key`), block permutations/sums, and free-action
orbit canonicalization.
"""

from dataclasses import dataclass, field
from functools import lru_cache
from itertools import permutations as _itperms

from .errors import FreenessError, StructuralError


def canon_key(x):
    """Total order key across the label types we use (ints, strs, tuples, keyed objects)."""
    if x is None:
        return (0,)
    if isinstance(x, bool):
        return (1, int(x))
    if isinstance(x, int):
        return (2, x)
    if isinstance(x, str):
        return (3, x)
    if isinstance(x, (tuple, list)):
        return (4, len(x), tuple(canon_key(v) for v in x))
    if isinstance(x, frozenset):
        return (5, len(x), tuple(sorted(canon_key(v) for v in x)))
    ck = getattr(x, "_canon_key", None)
    if ck is not None:
        return ck()
    raise TypeError(f"no canonical order for {type(x).__name__}")


def sort_labels(xs):
    return tuple(sorted(xs, key=canon_key))


# ---------------------------------------------------------------------------
# permutations

@dataclass(frozen=True, order=False)
class Perm:
    """Permutation of {1..n}, stored as the tuple of images (images[i-1] = sigma(i+0))."""

    images: tuple

    def __post_init__(self):
        n = len(self.images)
        if sorted(self.images) != list(range(1, n + 1)):
            raise StructuralError(f"not a permutation of 1..{n}: {self.images}")

    @property
    def n(self):
        return len(self.images)

    def __call__(self, i):
        return self.images[i - 1]

    def compose(self, other):
        """self after other: (self*other)(i) = self(other(i))."""
        return Perm(tuple(self.images[j - 1] for j in other.images))

    def inverse(self):
        inv = [0] * self.n
        for i, j in enumerate(self.images, start=1):
            inv[j - 1] = i
        return Perm(tuple(inv))

    @property
    def is_identity(self):
        return all(j == i + 1 for i, j in enumerate(self.images))

    def permuted(self, xs):
        """Tuple whose i-th entry is xs[sigma(i)-1]; this is the inverse-placement action."""
        return tuple(xs[j - 1] for j in self.images)

    def placed(self, xs):
        """Tuple with xs[i-1] placed at position sigma(i); inverse of permuted."""
        out = [None] * self.n
        for i, j in enumerate(self.images, start=1):
            out[j - 1] = xs[i - 1]
        return tuple(out)

    def _canon_key(self):
        return (6, self.n, self.images)

    def __repr__(self):
        return f"Perm{self.images}"


def identity_perm(n):
    return Perm(tuple(range(1, n + 1)))


@lru_cache(maxsize=None)
def perms(n):
    """All of Sym(n) in lexicographic image order."""
    return tuple(Perm(p) for p in _itperms(range(1, n + 1)))


def block_perm(sigma, sizes):
    """Permute consecutive blocks of the given sizes by sigma (block i lands at slot sigma(i))."""
    if sigma.n != len(sizes):
        raise StructuralError("block_perm: arity mismatch")
    inv = sigma.inverse()
    off_src, acc = [], 0
    for s in sizes:
        off_src.append(acc)
        acc += s
    off_tgt, acc = [], 0
    for m in range(1, len(sizes) + 1):
        off_tgt.append(acc)
        acc += sizes[inv(m) - 1]
    images = [0] * acc
    for i, s in enumerate(sizes, start=1):
        base = off_tgt[sigma(i) - 1]
        for r in range(s):
            images[off_src[i - 1] + r] = base + r + 1
    return Perm(tuple(images))


def block_sum(parts):
    """Disjoint union of permutations acting on consecutive blocks."""
    images, off = [], 0
    for p in parts:
        images.extend(off + j for j in p.images)
        off += p.n
    return Perm(tuple(images))


# ---------------------------------------------------------------------------
# finite sets and functions

@dataclass(frozen=True)
class FinSet:
    """Finite set of labels kept in canonical sorted order."""

    elems: tuple

    def __post_init__(self):
        if len(set(map(canon_key, self.elems))) != len(self.elems):
            raise StructuralError("duplicate labels in FinSet")

    def __contains__(self, x):
        return x in self.elems

    def __iter__(self):
        return iter(self.elems)

    def __len__(self):
        return len(self.elems)


def finset(xs):
    return FinSet(sort_labels(xs))


@dataclass
class FinFn:
    """Function between finite sets given by an explicit table."""

    src: FinSet
    tgt: FinSet
    table: dict

    def __post_init__(self):
        for x in self.src:
            if x not in self.table:
                raise StructuralError(f"FinFn missing value at {x!r}")
            if self.table[x] not in self.tgt:
                raise StructuralError(f"FinFn value {self.table[x]!r} outside codomain")

    def __call__(self, x):
        return self.table[x]


def fn(src, tgt, mapping):
    return FinFn(src, tgt, {x: mapping(x) for x in src})


def pullback(f, g):
    """Pullback of the cospan f: A -> Z <- B :g, with literal-pair labels."""
    if f.tgt != g.tgt:
        raise StructuralError("pullback: cospan codomains differ")
    pairs = [(a, b) for a in f.src for b in g.src if canon_key(f(a)) == canon_key(g(b))]
    P = finset(pairs)
    p1 = fn(P, f.src, lambda w: w[0])
    p2 = fn(P, g.src, lambda w: w[1])
    return P, p1, p2


class UnionFind:
    def __init__(self, items):
        self.parent = {x: x for x in items}

    def find(self, x):
        r = x
        while self.parent[r] != r:
            r = self.parent[r]
        while self.parent[x] != r:
            self.parent[x], x = r, self.parent[x]
        return r

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            # keep the canonically smaller representative as root
            if canon_key(rb) < canon_key(ra):
                ra, rb = rb, ra
            self.parent[rb] = ra
            return True
        return False

    def classes(self):
        out = {}
        for x in self.parent:
            out.setdefault(self.find(x), []).append(x)
        return {r: sort_labels(v) for r, v in out.items()}


def coequalizer(f, g):
    """Coequalizer of f, g: A -> B; classes are labeled by their minimal member."""
    if f.src != g.src or f.tgt != g.tgt:
        raise StructuralError("coequalizer: parallel pair required")
    uf = UnionFind(f.tgt.elems)
    for a in f.src:
        uf.union(f(a), g(a))
    cls = uf.classes()
    label = {x: min(members, key=canon_key) for root, members in cls.items() for x in members}
    Q = finset(set(label.values()))
    q = fn(f.tgt, Q, lambda b: label[b])
    return Q, q


def is_pullback(P, p1, p2, f, g):
    """Exhaustive universal-property check; returns (ok, witness)."""
    for w in P:
        if canon_key(f(p1(w))) != canon_key(g(p2(w))):
            return False, ("square does not commute", w)
    index = {}
    for w in P:
        index.setdefault((canon_key(p1(w)), canon_key(p2(w))), []).append(w)
    for a in f.src:
        for b in g.src:
            if canon_key(f(a)) == canon_key(g(b)):
                hits = index.get((canon_key(a), canon_key(b)), [])
                if len(hits) != 1:
                    return False, ("lift not unique" if hits else "lift missing", (a, b))
    for ws in index.values():
        if len(ws) > 1:
            return False, ("projections not jointly injective", ws)
    return True, None


def is_coequalizer(Q, q, f, g):
    """Check q coequalizes (f,g) and its fibers are exactly the generated classes."""
    for a in f.src:
        if canon_key(q(f(a))) != canon_key(q(g(a))):
            return False, ("fork does not commute", a)
    uf = UnionFind(f.tgt.elems)
    for a in f.src:
        uf.union(f(a), g(a))
    want = {frozenset(map(canon_key, v)) for v in uf.classes().values()}
    fibers = {}
    for b in f.tgt:
        fibers.setdefault(canon_key(q(b)), set()).add(canon_key(b))
    if set(map(frozenset, fibers.values())) != want:
        return False, ("fibers differ from generated congruence", None)
    if len(fibers) != len(Q):
        return False, ("quotient map not surjective", None)
    return True, None


# ---------------------------------------------------------------------------
# group actions

@dataclass
class GroupAction:
    """Left action of a finite permutation group on a finite label set.

    Law checked on construction: act(s*t, x) = act(s, act(t, x)); eager
    freeness check when `free` is set.
    """

    group: tuple
    carrier: tuple
    table: dict
    free: bool = False
    _validated: bool = field(default=False, repr=False)

    def __post_init__(self):
        rep = self.validate()
        if not rep["ok"]:
            raise StructuralError(f"invalid group action: {rep['failures'][0]}")
        if self.free:
            w = self.freeness_witness()
            if w is not None:
                raise FreenessError(f"action not free: {w[0]!r} fixes {w[1]!r}", witness=w)
        self._validated = True

    def act(self, s, x):
        return self.table[(s, x)]

    def validate(self):
        failures = []
        gset = set(self.group)
        ident = identity_perm(self.group[0].n) if self.group else None
        if ident not in gset:
            failures.append("identity missing from group")
        for s in self.group:
            for t in self.group:
                if s.compose(t) not in gset:
                    failures.append(f"group not closed under {s}, {t}")
                    break
        for x in self.carrier:
            if ident is not None and canon_key(self.act(ident, x)) != canon_key(x):
                failures.append(f"identity moves {x!r}")
        for s in self.group:
            for t in self.group:
                for x in self.carrier:
                    if canon_key(self.act(s.compose(t), x)) != canon_key(self.act(s, self.act(t, x))):
                        failures.append(f"action law fails at ({s}, {t}, {x!r})")
                        break
        for s in self.group:
            seen = {canon_key(self.act(s, x)) for x in self.carrier}
            if len(seen) != len(self.carrier):
                failures.append(f"{s} does not act bijectively")
        return {"ok": not failures, "failures": failures}

    def freeness_witness(self):
        """A pair (sigma, x) with sigma != id and sigma.x = x, or None."""
        for s in self.group:
            if s.is_identity:
                continue
            for x in self.carrier:
                if canon_key(self.act(s, x)) == canon_key(x):
                    return (s, x)
        return None

    def orbit(self, x):
        return sort_labels({self.act(s, x) for s in self.group})


def verify_free(action):
    return action.freeness_witness() is None


def orbit_canonicalize(action, x):
    """Minimal member of the orbit of x; demands a free action."""
    w = action.freeness_witness()
    if w is not None:
        raise FreenessError(f"orbit_canonicalize needs a free action; {w[0]!r} fixes {w[1]!r}", witness=w)
    return min(action.orbit(x), key=canon_key)


def orbit_quotient(action):
    """Quotient set of an action with min-member labels, plus the projection."""
    X = finset(action.carrier)
    label = {x: min(action.orbit(x), key=canon_key) for x in action.carrier}
    Q = finset(set(label.values()))
    return Q, fn(X, Q, lambda x: label[x])


def is_equivariant(f, act_a, act_b):
    for s in act_a.group:
        for x in act_a.carrier:
            if canon_key(f(act_a.act(s, x))) != canon_key(act_b.act(s, f(x))):
                return False
    return True


def diagonal_action(act_a, act_b, carrier):
    """Diagonal action on a set of (a, b) pairs."""
    table = {(s, w): (act_a.act(s, w[0]), act_b.act(s, w[1]))
             for s in act_a.group for w in carrier}
    return GroupAction(act_a.group, tuple(carrier), table)


def orbit_pullback_report(f, g, act_a, act_b, act_z):
    """Compare orbits(pullback) against pullback(orbits) for an equivariant cospan."""
    rep = {"ok": True, "failures": []}
    if not (is_equivariant(f, act_a, act_z) and is_equivariant(g, act_b, act_z)):
        rep["ok"] = False
        rep["failures"].append("cospan not equivariant")
        return rep
    P, p1, p2 = pullback(f, g)
    act_p = diagonal_action(act_a, act_b, P.elems)
    QP, qp = orbit_quotient(act_p)
    QA, qa = orbit_quotient(act_a)
    QB, qb = orbit_quotient(act_b)
    QZ, qz = orbit_quotient(act_z)
    fbar = fn(QA, QZ, lambda a: qz(f(a)))
    gbar = fn(QB, QZ, lambda b: qz(g(b)))
    for a in act_a.carrier:
        if canon_key(fbar(qa(a))) != canon_key(qz(f(a))):
            rep["ok"] = False
            rep["failures"].append(("quotient of f not well-defined", a))
            return rep
    for b in act_b.carrier:
        if canon_key(gbar(qb(b))) != canon_key(qz(g(b))):
            rep["ok"] = False
            rep["failures"].append(("quotient of g not well-defined", b))
            return rep
    PQ, r1, r2 = pullback(fbar, gbar)
    # comparison map [ (a,b) ] -> ([a],[b]) must be a bijection
    image = {}
    for w in QP:
        image.setdefault(canon_key((qa(w[0]), qb(w[1]))), []).append(w)
    for k, ws in image.items():
        if len(ws) > 1:
            rep["ok"] = False
            rep["failures"].append(("comparison map not injective", ws))
    want = {canon_key((u, v)) for (u, v) in PQ}
    got = set(image)
    if got != want:
        rep["ok"] = False
        missing = [uv for uv in PQ if canon_key(uv) not in got]
        rep["failures"].append(("comparison map not surjective", missing))
    return rep
