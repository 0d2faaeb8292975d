"""Finite groups as explicit multiplication tables, with subgroup machinery.

Everything here is brute force on purpose: subgroups are boolean masks over
element indices and every structural claim is decided by enumeration.
"""

from __future__ import annotations

import itertools
from math import gcd

import numpy as np

# Largest group the oracle agrees to tabulate.
ENUMERATION_GUARD = 10**4
# Up to this size associativity is checked on all triples, above it by
# Light's test on a generating set.
FULL_ASSOCIATIVITY_LIMIT = 128


class OracleError(Exception):
    pass


class GuardExceeded(OracleError):
    pass


class PreconditionError(OracleError):
    """A lemma's hypotheses do not hold for the given instance."""


class ConstructionError(OracleError):
    """A claim that must hold for a correct construction failed."""


class SubgroupMask:
    """A subset of element indices, normally a subgroup."""

    __slots__ = ("mask", "_key")

    def __init__(self, mask):
        self.mask = np.array(mask, dtype=bool)
        self.mask.setflags(write=False)
        self._key = None

    @property
    def key(self):
        if self._key is None:
            self._key = np.packbits(self.mask).tobytes()
        return self._key

    def __len__(self):
        return int(self.mask.sum())

    def __contains__(self, idx):
        return bool(self.mask[idx])

    def __eq__(self, other):
        return isinstance(other, SubgroupMask) and self.key == other.key

    def __hash__(self):
        return hash(self.key)

    def __le__(self, other):
        return not np.any(self.mask & ~other.mask)

    def __and__(self, other):
        return SubgroupMask(self.mask & other.mask)

    @property
    def elements(self):
        return np.flatnonzero(self.mask)

    def __repr__(self):
        return f"SubgroupMask(order={len(self)})"


class AutomorphismMap:
    """A permutation of element indices that respects the table."""

    __slots__ = ("perm", "order")

    def __init__(self, perm, group=None):
        self.perm = np.asarray(perm, dtype=np.int64)
        if group is not None and not group.is_automorphism(self.perm):
            raise OracleError("map does not respect the multiplication table")
        self.order = _perm_order(self.perm)

    def __call__(self, idx):
        return self.perm[idx]

    def compose(self, other):
        """``self`` after ``other``."""
        return AutomorphismMap(self.perm[other.perm])

    def __repr__(self):
        return f"AutomorphismMap(order={self.order})"


def _perm_order(perm):
    seen = np.zeros(len(perm), dtype=bool)
    order = 1
    for start in range(len(perm)):
        if seen[start]:
            continue
        length = 0
        j = start
        while not seen[j]:
            seen[j] = True
            j = perm[j]
            length += 1
        order = order * length // gcd(order, length)
    return order


class OracleGroup:
    """Element list plus full multiplication table (indices)."""

    def __init__(self, table, elements=None, name="G", generators=None, check=True):
        table = np.asarray(table)
        n = table.shape[0]
        if table.shape != (n, n):
            raise OracleError("multiplication table must be square")
        if n > ENUMERATION_GUARD:
            raise GuardExceeded(f"{n} elements exceed the enumeration guard {ENUMERATION_GUARD}")
        self.table = table.astype(np.int32 if n < 2**31 else np.int64)
        self.table.setflags(write=False)
        self.n = n
        self.name = name
        self.elements = list(range(n)) if elements is None else list(elements)
        if len(self.elements) != n:
            raise OracleError("element list and table sizes differ")
        ids = [e for e in range(n) if np.array_equal(self.table[e], np.arange(n))]
        if len(ids) != 1:
            raise OracleError("table has no two-sided identity")
        self.identity = ids[0]
        self.inverse = np.argmax(self.table == self.identity, axis=1)
        self.generators = list(generators) if generators is not None else None
        if check:
            self.check_axioms()

    def __len__(self):
        return self.n

    def __repr__(self):
        return f"OracleGroup({self.name!r}, order={self.n})"

    # axioms

    def check_axioms(self):
        t = self.table
        n = self.n
        if t.min() < 0 or t.max() >= n:
            raise OracleError("table is not closed")
        srt = np.sort(t, axis=1)
        if not (srt == np.arange(n)).all() or not (np.sort(t, axis=0) == np.arange(n)[:, None]).all():
            raise OracleError("table is not a Latin square")
        if not np.array_equal(t[:, self.identity], np.arange(n)):
            raise OracleError("identity is not two-sided")
        if not (t[np.arange(n), self.inverse] == self.identity).all():
            raise OracleError("missing inverses")
        if n <= FULL_ASSOCIATIVITY_LIMIT:
            lhs = t[t[:, :, None], np.arange(n)[None, None, :]]
            rhs = t[np.arange(n)[:, None, None], t[None, :, :]]
            if not np.array_equal(lhs, rhs):
                raise OracleError("table is not associative")
        else:
            gens = self.generating_set()
            col = np.arange(n)
            for g in gens:
                # (x g) y == x (g y) for all x, y, for every generator g
                lhs = t[t[:, g]][:, col]
                rhs = t[:, t[g]]
                if not np.array_equal(lhs, rhs):
                    raise OracleError("table is not associative (Light's test)")
        return True

    # basic arithmetic

    def mul(self, a, b):
        return int(self.table[a, b])

    def inv(self, a):
        return int(self.inverse[a])

    def commutator(self, a, b):
        t, inv = self.table, self.inverse
        return t[t[inv[a], inv[b]], t[a, b]]

    def conjugate(self, a, g):
        t = self.table
        return t[t[self.inverse[g], a], g]

    def power(self, a, k):
        result = self.identity
        for _ in range(k % self.element_order(a)):
            result = self.table[result, a]
        return int(result)

    def element_order(self, a):
        k, x = 1, a
        while x != self.identity:
            x = self.table[x, a]
            k += 1
        return k

    def element_orders(self):
        orders = np.ones(self.n, dtype=np.int64)
        x = np.arange(self.n)
        k = 1
        alive = x != self.identity
        while alive.any():
            k += 1
            x = np.where(alive, self.table[x, np.arange(self.n)], x)
            done = alive & (x == self.identity)
            orders[done] = k
            alive &= ~done
        return orders

    # subgroups

    def mask(self, indices=()):
        m = np.zeros(self.n, dtype=bool)
        m[np.asarray(list(indices), dtype=np.int64)] = True
        return m

    def whole(self):
        return SubgroupMask(np.ones(self.n, dtype=bool))

    def trivial(self):
        return SubgroupMask(self.mask([self.identity]))

    def generate(self, gens, start=None):
        """Subgroup generated by ``gens`` (and by ``start`` if given)."""
        mask = np.zeros(self.n, dtype=bool)
        mask[self.identity] = True
        if start is not None:
            mask |= start.mask if isinstance(start, SubgroupMask) else np.asarray(start, dtype=bool)
        kept = [] if start is None else list(self.generating_set(SubgroupMask(mask)))
        for g in np.asarray(list(gens), dtype=np.int64).ravel():
            if mask[g]:
                continue
            kept.append(int(g))
            karr = np.asarray(kept, dtype=np.int64)
            frontier = np.flatnonzero(mask)
            while frontier.size:
                prods = self.table[frontier[:, None], karr[None, :]].ravel()
                new = np.unique(prods[~mask[prods]])
                mask[new] = True
                frontier = new
        return SubgroupMask(mask)

    def generating_set(self, sub=None):
        """Greedy generating set of ``sub`` (default: the whole group)."""
        if sub is None and self.generators is not None:
            return list(self.generators)
        members = np.arange(self.n) if sub is None else sub.elements
        mask = np.zeros(self.n, dtype=bool)
        mask[self.identity] = True
        gens = []
        for g in members:
            if mask[g]:
                continue
            gens.append(int(g))
            mask = self.generate(gens).mask.copy()
        return gens

    def is_subgroup(self, sub):
        els = sub.elements
        if not sub.mask[self.identity]:
            return False
        if not sub.mask[self.inverse[els]].all():
            return False
        return bool(sub.mask[self.table[np.ix_(els, els)]].all())

    def conjugacy_class(self, a):
        return np.unique(self.conjugate(a, np.arange(self.n)))

    def conjugacy_class_reps(self):
        seen = np.zeros(self.n, dtype=bool)
        reps = []
        for a in range(self.n):
            if not seen[a]:
                reps.append(a)
                seen[self.conjugacy_class(a)] = True
        return reps

    def is_normal(self, sub):
        els = sub.elements
        conj = self.conjugate(els[:, None], np.arange(self.n)[None, :])
        return bool(sub.mask[conj].all())

    def normal_closure(self, indices, automorphisms=()):
        """Smallest normal (and automorphism-invariant) subgroup containing ``indices``."""
        seeds = np.unique(np.asarray(list(indices), dtype=np.int64))
        autos = [a.perm for a in automorphisms]
        while True:
            sub = self.generate(seeds)
            els = sub.elements
            images = [self.conjugate(els[:, None], np.arange(self.n)[None, :]).ravel()]
            images += [perm[els] for perm in autos]
            allimg = np.unique(np.concatenate(images))
            if sub.mask[allimg].all():
                return sub
            seeds = allimg

    def center(self):
        t = self.table
        return SubgroupMask((t == t.T).all(axis=1))

    def centralizer(self, sub):
        els = sub.elements if isinstance(sub, SubgroupMask) else np.asarray(list(sub), dtype=np.int64)
        t = self.table
        return SubgroupMask((t[:, els] == t[els, :].T).all(axis=1))

    def commutator_subgroup(self, x, y=None):
        """``[X, Y]``, generated by all commutators [x, y]."""
        y = x if y is None else y
        xe, ye = x.elements, y.elements
        if len(xe) * len(ye) <= 4 * 10**6:
            comms = self.commutator(xe[:, None], ye[None, :]).ravel()
            return self.generate(np.unique(comms))
        # [X, Y] is the normal closure in <X, Y> of commutators of generators
        gx, gy = self.generating_set(x), self.generating_set(y)
        seeds = {int(self.commutator(a, b)) for a in gx for b in gy}
        ambient = self.generate(gx + gy)
        sub = self.generate(seeds)
        gens = self.generating_set(ambient)
        while True:
            els = sub.elements
            conj = self.conjugate(els[:, None], np.asarray(gens)[None, :]).ravel()
            if sub.mask[conj].all():
                return sub
            sub = self.generate(conj, start=sub)

    def derived_subgroup(self, sub=None):
        sub = self.whole() if sub is None else sub
        return self.commutator_subgroup(sub, sub)

    def subgroup_center(self, sub):
        return sub & self.centralizer(sub)

    def is_abelian(self, sub=None):
        els = np.arange(self.n) if sub is None else sub.elements
        t = self.table[np.ix_(els, els)]
        return bool((t == t.T).all())

    def product_set(self, h, k):
        prods = self.table[np.ix_(h.elements, k.elements)].ravel()
        return SubgroupMask(self.mask(np.unique(prods)))

    def join(self, h, k):
        return self.generate(self.generating_set(k), start=h)

    def commutator_with(self, sub, autos):
        """``[H, A]``, generated by h^-1 h^alpha for h in H, alpha in A."""
        els = sub.elements
        seeds = [self.table[self.inverse[els], a.perm[els]] for a in autos]
        if not seeds:
            return self.trivial()
        return self.generate(np.unique(np.concatenate(seeds)))

    def fixed_points(self, autos):
        mask = np.ones(self.n, dtype=bool)
        for a in autos:
            mask &= a.perm == np.arange(self.n)
        return SubgroupMask(mask)

    def is_automorphism(self, perm):
        perm = np.asarray(perm)
        if sorted(perm.tolist()) != list(range(self.n)):
            return False
        return bool((self.table[perm[:, None], perm[None, :]] == perm[self.table]).all())

    def is_invariant(self, sub, autos):
        return all(sub.mask[a.perm[sub.elements]].all() for a in autos)

    # lattices

    def normal_subgroups(self, automorphisms=()):
        """All normal subgroups (A-invariant ones if automorphisms are given)."""
        pieces = {}
        for rep in self.conjugacy_class_reps():
            if rep == self.identity:
                continue
            ncl = self.normal_closure([rep], automorphisms)
            pieces.setdefault(ncl.key, ncl)
        pieces = list(pieces.values())
        trivial = self.trivial()
        lattice = {trivial.key: trivial}
        queue = [trivial]
        while queue:
            cur = queue.pop()
            for piece in pieces:
                if piece <= cur:
                    continue
                joined = self.join(cur, piece)
                if joined.key not in lattice:
                    lattice[joined.key] = joined
                    queue.append(joined)
        return sorted(lattice.values(), key=len)

    def minimal_normal_subgroups(self, normals=None):
        normals = self.normal_subgroups() if normals is None else normals
        nontrivial = [s for s in normals if len(s) > 1]
        return [
            s for s in nontrivial if not any(o != s and o <= s for o in nontrivial)
        ]

    # construction helpers

    def subgroup_table(self, sub, name=None):
        """The subgroup as a standalone :class:`OracleGroup` (indices reindexed)."""
        els = sub.elements
        index = -np.ones(self.n, dtype=np.int64)
        index[els] = np.arange(len(els))
        table = index[self.table[np.ix_(els, els)]]
        return OracleGroup(table, [self.elements[e] for e in els], name or f"{self.name}|sub")


def is_coprime(a, b):
    return gcd(a, b) == 1


def closure(generators, mul, identity, key=None, guard=ENUMERATION_GUARD):
    """Breadth-first closure of ``generators`` under right multiplication.

    Returns the element list (identity first) and the index map keyed by
    ``key(element)``.
    """
    key = key or (lambda e: e)
    elements = [identity]
    index = {key(identity): 0}
    frontier = [identity]
    while frontier:
        nxt = []
        for x in frontier:
            for g in generators:
                y = mul(x, g)
                k = key(y)
                if k not in index:
                    if len(elements) >= guard:
                        raise GuardExceeded(f"closure exceeds {guard} elements")
                    index[k] = len(elements)
                    elements.append(y)
                    nxt.append(y)
        frontier = nxt
    return elements, index


def table_from_mul(elements, index, mul, key=None):
    key = key or (lambda e: e)
    n = len(elements)
    table = np.empty((n, n), dtype=np.int64)
    for i, a in enumerate(elements):
        for j, b in enumerate(elements):
            table[i, j] = index[key(mul(a, b))]
    return table


def table_from_generators(elements, index, generators, mul, key=None):
    """Cayley table from right-multiplication columns of ``generators`` only.

    Uses ``x (y g) = (x y) g``, so only ``n * len(generators)`` calls to ``mul``
    are made; the rest is array indexing.  ``elements[0]`` must be the identity.
    """
    key = key or (lambda e: e)
    n = len(elements)
    cols = [np.array([index[key(mul(x, g))] for x in elements], dtype=np.int64) for g in generators]
    table = -np.ones((n, n), dtype=np.int64)
    table[:, 0] = np.arange(n)
    frontier = [0]
    while frontier:
        nxt = []
        for x in frontier:
            for col in cols:
                y = col[x]
                if table[0, y] < 0:
                    table[:, y] = col[table[:, x]]
                    nxt.append(y)
        frontier = nxt
    if (table < 0).any():
        raise OracleError("generators do not generate the element list")
    return table


def all_tuples(radices):
    return np.array(list(itertools.product(*[range(r) for r in radices])), dtype=np.int64).reshape(
        -1, len(radices)
    )
