"""Truncated operads of finite categories with per-level symmetric actions.

Composition is a procedure, not a table: builtins have closed forms and
tabulated user operads wrap dict lookups. Levels are plain FinCategory
values; the level-n action is by right translation and is expected (but
not assumed) to be free.

Law validation enumerates composable families by *total arity*: the total
arity of a family is the sum of the arities of every operad element
appearing in it (the outer element plus all inner elements, across all
layers). validate_operad checks unit laws on every element of every level,
and associativity, functoriality, and both equivariance laws on all
families of total arity up to the bound (default: the truncation level).
"""

from dataclasses import dataclass, field
from functools import lru_cache
from itertools import product

from .errors import BoundExceeded, StructuralError
from .finset import GroupAction, Perm, block_perm, block_sum, perms
from .fincat import category, validate_category


@lru_cache(maxsize=None)
def _mul(a, b):
    """Image tuple of the composite a after b."""
    return tuple(a[j - 1] for j in b)


@lru_cache(maxsize=None)
def _block_perm_images(a, sizes):
    return block_perm(Perm(a), sizes).images


@lru_cache(maxsize=None)
def _block_sum_images(parts):
    images, off = [], 0
    for p in parts:
        images.extend(off + j for j in p)
        off += len(p)
    return tuple(images)


@dataclass
class CatOperad:
    name: str
    max_level: int
    levels: tuple  # FinCategory per arity 0..max_level
    unit: object   # object of level 1
    _act: object   # (j, n, sigma, x) -> x . sigma  (right action; j=0 objects, j=1 morphisms)
    _compose: object  # (j, k, x, inners) -> element of level sum(n_i); inners = ((n_i, x_i), ...)
    _canon_cache: dict = field(default_factory=dict, repr=False)
    _align_cache: dict = field(default_factory=dict, repr=False)

    def level(self, n):
        if not 0 <= n <= self.max_level:
            raise BoundExceeded(f"level {n} outside truncation {self.max_level}")
        return self.levels[n]

    def elements(self, j, n):
        L = self.level(n)
        return L.objects if j == 0 else L.morphisms

    def act(self, j, n, sigma, x):
        if sigma.n != n:
            raise StructuralError(f"action arity mismatch at level {n}")
        return self._act(j, n, sigma, x)

    def compose(self, j, k, x, inners):
        if len(inners) != k:
            raise StructuralError(f"composition expects {k} inner elements")
        total = sum(n for n, _ in inners)
        if total > self.max_level:
            raise BoundExceeded(
                f"composite arity {total} exceeds truncation {self.max_level}")
        return self._compose(j, k, x, tuple(inners))

    @property
    def unit_mor(self):
        return self.levels[1].ident[self.unit]

    def id_mor(self, n, d):
        return self.levels[n].ident[d]

    def sigma_action(self, j, n):
        """The level-n action packaged for the orbit tools (as a left action)."""
        carrier = self.elements(j, n)
        table = {(s, x): self.act(j, n, s.inverse(), x) for s in perms(n) for x in carrier}
        return GroupAction(perms(n), tuple(carrier), table)


# ---------------------------------------------------------------------------
# builtins

def _chaotic_level(n):
    objs = [p.images for p in perms(n)]
    mors = [(a, b) for a in objs for b in objs]
    return category(objs, mors, {m: m[0] for m in mors}, {m: m[1] for m in mors},
                    {o: (o, o) for o in objs},
                    {((b, c), (a, b2)): (a, c)
                     for (b, c) in mors for (a, b2) in mors if b2 == b})


def _discrete_level(n):
    objs = [p.images for p in perms(n)]
    return category(objs, objs, {o: o for o in objs}, {o: o for o in objs},
                    {o: o for o in objs}, {(o, o): o for o in objs})


def _terminal_level():
    return category(("*",), ("id",), {"id": "*"}, {"id": "*"}, {"*": "id"},
                    {("id", "id"): "id"})


def _perm_compose_obj(a_images, inners):
    sizes = tuple(n for n, _ in inners)
    return _mul(_block_perm_images(a_images, sizes),
                _block_sum_images(tuple(x for _, x in inners)))


def barratt_eccles(N):
    """Translation groupoids of the symmetric groups, one per arity."""

    def act(j, n, sigma, x):
        if j == 0:
            return _mul(x, sigma.images)
        return (_mul(x[0], sigma.images), _mul(x[1], sigma.images))

    def compose(j, k, x, inners):
        if j == 0:
            return _perm_compose_obj(x, inners)
        src = _perm_compose_obj(x[0], tuple((n, y[0]) for n, y in inners))
        tgt = _perm_compose_obj(x[1], tuple((n, y[1]) for n, y in inners))
        return (src, tgt)

    return CatOperad("barratt_eccles", N, tuple(_chaotic_level(n) for n in range(N + 1)),
                     (1,), act, compose)


def associativity_operad(N):
    """Discrete symmetric groups: the operad for monoids with permuted inputs."""

    def act(j, n, sigma, x):
        return _mul(x, sigma.images)

    def compose(j, k, x, inners):
        return _perm_compose_obj(x, inners)

    return CatOperad("associativity", N, tuple(_discrete_level(n) for n in range(N + 1)),
                     (1,), act, compose)


def commutative_operad(N):
    """Terminal levels; satisfies the operad laws but is not sigma-free (negative control)."""

    def act(j, n, sigma, x):
        return x

    def compose(j, k, x, inners):
        return "*" if j == 0 else "id"

    return CatOperad("commutative", N, tuple(_terminal_level() for _ in range(N + 1)),
                     "*", act, compose)


BUILTIN_OPERADS = {
    "barratt_eccles": barratt_eccles,
    "associativity": associativity_operad,
    "commutative": commutative_operad,
}


def tabulated_operad(name, max_level, levels, unit, act_table, comp_table):
    """Wrap explicit lookup tables; they must cover every call within the
    truncation (operad_tables produces exactly that coverage)."""

    def act(j, n, sigma, x):
        key = (j, n, sigma.images, x)
        if key not in act_table:
            raise StructuralError(f"action table missing {key!r}")
        return act_table[key]

    def compose(j, k, x, inners):
        key = (j, k, x, inners)
        if key not in comp_table:
            raise StructuralError(f"composition table missing {key!r}")
        return comp_table[key]

    return CatOperad(name, max_level, tuple(levels), unit, act, compose)


def operad_tables(op):
    """Explicit action and composition tables over the whole truncation."""
    act_table = {(j, n, s.images, x): op.act(j, n, s, x)
                 for n in range(op.max_level + 1) for j in (0, 1)
                 for s in perms(n) for x in op.elements(j, n)}
    comp_table = {}
    for j in (0, 1):
        for k in range(op.max_level + 1):
            for profile in _profiles(k, op.max_level, op.max_level):
                pools = [tuple((m, y) for y in op.elements(j, m)) for m in profile]
                for x in op.elements(j, k):
                    for inners in product(*pools):
                        comp_table[(j, k, x, inners)] = op.compose(j, k, x, inners)
    return act_table, comp_table


# ---------------------------------------------------------------------------
# validation

def _profiles(slots, budget, cap):
    """All tuples of `slots` arities with sum <= budget, each <= cap."""
    if slots == 0:
        yield ()
        return
    for first in range(min(budget, cap) + 1):
        for rest in _profiles(slots - 1, budget - first, cap):
            yield (first,) + rest


def composable_families(op, j, total_arity):
    """(k, a, inners) with k + sum(inner arities) <= total_arity."""
    for k in range(1, min(op.max_level, total_arity) + 1):
        for profile in _profiles(k, min(total_arity - k, op.max_level), op.max_level):
            pools = [tuple((n, x) for x in op.elements(j, n)) for n in profile]
            for a in op.elements(j, k):
                for inners in product(*pools):
                    yield k, a, inners


def is_sigma_free(op):
    return freeness_report(op)["ok"]


def freeness_report(op):
    """Freeness of every level action on objects and morphisms, with witnesses."""
    witnesses = []
    for n in range(op.max_level + 1):
        for j in (0, 1):
            for s in perms(n):
                if s.is_identity:
                    continue
                hit = next((x for x in op.elements(j, n) if op.act(j, n, s, x) == x), None)
                if hit is not None:
                    witnesses.append({"level": n, "j": j,
                                      "sigma": s.images, "fixed_point": hit})
                    break
    return {"ok": not witnesses, "witnesses": witnesses}


def validate_operad(op, total_arity=None):
    """Category, action, unit, associativity, functoriality, and equivariance checks.

    Families are enumerated up to the given total arity (default: the
    truncation level), total arity being the sum over every element in the
    family as described in the module docstring. Unit laws run over every
    element of every level regardless.
    """
    bound = op.max_level if total_arity is None else total_arity
    failures = []
    counts = {"families": 0, "e1": 0, "e2": 0, "assoc": 0, "functor": 0}

    for n in range(op.max_level + 1):
        rep = validate_category(op.level(n))
        if not rep["ok"]:
            failures.append(("level not a category", (n, rep["failures"][0])))

    # actions act by automorphism functors and satisfy the group law
    for n in range(op.max_level + 1):
        L = op.level(n)
        for s in perms(n):
            for o in L.objects:
                i_img = op.act(1, n, s, L.ident[o])
                if i_img != L.ident.get(op.act(0, n, s, o)):
                    failures.append(("action breaks identities", (n, s.images, o)))
            for f in L.morphisms:
                sf = op.act(1, n, s, f)
                if L.src.get(sf) != op.act(0, n, s, L.src[f]) or \
                   L.tgt.get(sf) != op.act(0, n, s, L.tgt[f]):
                    failures.append(("action breaks endpoints", (n, s.images, f)))
        for s in perms(n):
            for t in perms(n):
                st = s.compose(t)  # right action: x.(s o t) = (x.s).t
                for f in L.morphisms:
                    if op.act(1, n, st, f) != op.act(1, n, t, op.act(1, n, s, f)):
                        failures.append(("action law fails", (n, s.images, t.images, f)))
                        break

    # unit laws on every element of every level
    for n in range(op.max_level + 1):
        for j in (0, 1):
            one = op.unit if j == 0 else op.unit_mor
            for x in op.elements(j, n):
                if op.compose(j, 1, one, ((n, x),)) != x:
                    failures.append(("left unit fails", (n, j, x)))
                if op.compose(j, n, x, tuple((1, one) for _ in range(n))) != x:
                    failures.append(("right unit fails", (n, j, x)))

    for j in (0, 1):
        for k, a, inners in composable_families(op, j, bound):
            counts["families"] += 1
            sizes = tuple(n for n, _ in inners)
            total = sum(sizes)
            gab = op.compose(j, k, a, inners)

            # equivariance in the outer slot
            for s in perms(k):
                counts["e1"] += 1
                a_s = op.act(j, k, s, a)
                inners_s = s.permuted(inners)
                lhs = op.compose(j, k, a_s, inners_s)
                rhs = op.act(j, total, block_perm(s, s.permuted(sizes)), gab)
                if lhs != rhs:
                    failures.append(("equivariance (outer) fails", (k, j, a, inners, s.images)))

            # equivariance in the inner slots
            for taus in product(*[perms(n) for n in sizes]):
                counts["e2"] += 1
                inners_t = tuple((n, op.act(j, n, t, x))
                                 for (n, x), t in zip(inners, taus))
                lhs = op.compose(j, k, a, inners_t)
                rhs = op.act(j, total, block_sum(taus), gab)
                if lhs != rhs:
                    failures.append(("equivariance (inner) fails",
                                     (k, j, a, inners, tuple(t.images for t in taus))))

            # associativity against one further layer
            leftover = bound - k - total
            pools = []
            for n, _ in inners:
                pools.append(tuple(_inner_families(op, j, n, leftover)))
            for cs in product(*pools):
                flat = tuple(c for block in cs for c in block)
                if sum(m for m, _ in flat) > op.max_level:
                    continue
                if sum(m for m, _ in flat) > leftover:
                    continue
                counts["assoc"] += 1
                lhs = op.compose(j, total, gab, flat)
                collapsed = tuple(
                    (sum(m for m, _ in block), op.compose(j, n, x, block))
                    for (n, x), block in zip(inners, cs))
                rhs = op.compose(j, k, a, collapsed)
                if lhs != rhs:
                    failures.append(("associativity fails", (k, j, a, inners, cs)))

    # composition is a functor level-wise
    for k, a, inners in composable_families(op, 0, bound):
        sizes = tuple(n for n, _ in inners)
        ids = op.compose(1, k, op.id_mor(k, a),
                         tuple((n, op.id_mor(n, x)) for n, x in inners))
        if ids != op.id_mor(sum(sizes), op.compose(0, k, a, inners)):
            failures.append(("composition breaks identities", (k, a, inners)))
    for k, a, inners in composable_families(op, 1, bound):
        counts["functor"] += 1
        Lk = op.level(k)
        sizes = tuple(n for n, _ in inners)
        for a2 in (m for m in Lk.morphisms if Lk.tgt[m] == Lk.src[a]):
            pair_pools = [tuple(m for m in op.level(n).morphisms
                                if op.level(n).tgt[m] == op.level(n).src[x])
                          for n, x in inners]
            for seconds in product(*pair_pools):
                lhs = op.compose(1, k, Lk.comp[(a, a2)],
                                 tuple((n, op.level(n).comp[(x, y)])
                                       for (n, x), y in zip(inners, seconds)))
                rhs_top = op.compose(1, k, a, inners)
                rhs_bot = op.compose(1, k, a2, tuple(zip(sizes, seconds)))
                L_tot = op.level(sum(sizes))
                if lhs != L_tot.comp.get((rhs_top, rhs_bot)):
                    failures.append(("composition breaks composites",
                                     (k, a, a2, inners, seconds)))

    return {"ok": not failures, "failures": failures, "checked": counts,
            "total_arity": bound}


def _inner_families(op, j, n, budget):
    """Profiles of inner elements filling the n slots of one block, total arity <= budget."""
    for profile in _profiles(n, min(budget, op.max_level), op.max_level):
        pools = [tuple((m, x) for x in op.elements(j, m)) for m in profile]
        for combo in product(*pools):
            yield combo


def simplicial_degree_operad(op, degree):
    """The set-operad of nerve degree 0 (objects) or 1 (morphisms), as discrete levels."""
    if degree not in (0, 1):
        raise StructuralError("only simplicial degrees 0 and 1 are materialized")

    def lvl(n):
        xs = op.elements(degree, n)
        return category(xs, xs, {x: x for x in xs}, {x: x for x in xs},
                        {x: x for x in xs}, {(x, x): x for x in xs})

    def act(j, n, sigma, x):
        return op.act(degree, n, sigma, x)

    def compose(j, k, x, inners):
        return op.compose(degree, k, x, inners)

    unit = op.unit if degree == 0 else op.unit_mor
    return CatOperad(f"{op.name}/nerve{degree}", op.max_level,
                     tuple(lvl(n) for n in range(op.max_level + 1)), unit, act, compose)
