"""Exact arithmetic in the groups G_1 <= G_2 <= ... of the soluble tower.

G_1 is cyclic of order p_1.  For i >= 2, G_i = D_i x| G_{i-1} where D_i is
the orbit-sum-zero part of the central product of |G_{i-1}| extra-special
groups of order p_i^3, one factor per element of G_{i-1}.

An element of G_i is stored in normal form ``d_i d_{i-1} ... d_2 e_1`` as a
tuple ``(e_1, d_2, ..., d_i)``: ``e_1`` is an exponent mod p_1 and each
``d_k`` is a :class:`LevelVector` (or ``None`` when trivial) whose keys are
elements of G_{k-1}.  Trailing trivial levels are trimmed, so the natural
embedding G_i <= G_{i+1} changes nothing but the declared ambient level.

Conventions (fixed once, property-tested everywhere):

* level product ``(P, c)(P', c') = (P + P', c + c' + sum_j y_j x'_j)``;
* conjugation ``d^g = g^-1 d g`` moves the factor at key ``j`` to ``j g``;
* commutators are ``[x, y] = x^-1 y^-1 x y``.
"""

from __future__ import annotations

import random
from functools import lru_cache
from math import gcd

from .config import TowerConfig


class TowerError(ValueError):
    pass


class LevelVector:
    """One level's datum: sparse ``key -> (x, y)`` over F_p plus a shared center.

    ``pairs`` never stores ``(0, 0)``.  Instances are immutable.
    """

    __slots__ = ("level", "prime", "pairs", "center", "_hash")

    def __init__(self, level, prime, pairs, center=0):
        self.level = level
        self.prime = prime
        self.pairs = pairs
        self.center = center
        self._hash = None

    @classmethod
    def make(cls, level, prime, pairs=None, center=0):
        """Reduce residues mod ``prime`` and drop zero pairs."""
        clean = {}
        for key, (x, y) in (pairs or {}).items():
            x, y = x % prime, y % prime
            if x or y:
                clean[key] = (x, y)
        return cls(level, prime, clean, center % prime)

    def is_trivial(self):
        return not self.pairs and not self.center

    def __eq__(self, other):
        if self is other:
            return True
        if not isinstance(other, LevelVector):
            return NotImplemented
        return (
            self.level == other.level
            and self.center == other.center
            and self.pairs == other.pairs
        )

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.level, self.center, frozenset(self.pairs.items())))
        return self._hash

    def __repr__(self):
        return f"LevelVector(level={self.level}, pairs={len(self.pairs)}, center={self.center})"


def _trim(levels):
    n = len(levels)
    while n > 1 and levels[n - 1] is None:
        n -= 1
    return levels if n == len(levels) else levels[:n]


def _is_identity(levels):
    return len(levels) == 1 and levels[0] == 0


class GroupElement:
    """An element of G_level.  Equality and hashing ignore the ambient level."""

    __slots__ = ("tower", "levels", "level", "_hash", "_enc")

    def __init__(self, tower, levels, level=None):
        self.tower = tower
        self.levels = levels
        self.level = len(levels) if level is None else max(level, len(levels))
        self._hash = None
        self._enc = None

    @property
    def depth(self):
        """Highest nontrivial level (1 for the identity)."""
        return len(self.levels)

    @property
    def exponent(self):
        return self.levels[0]

    def level_vector(self, k):
        """The level-k datum, or ``None`` when trivial."""
        if k < 2 or k > len(self.levels):
            return None
        return self.levels[k - 1]

    def is_identity(self):
        return _is_identity(self.levels)

    def __eq__(self, other):
        if self is other:
            return True
        if not isinstance(other, GroupElement):
            return NotImplemented
        return self.levels == other.levels and (
            self.tower is other.tower or self.tower.primes == other.tower.primes
        )

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(self.levels)
        return self._hash

    def __mul__(self, other):
        return self.tower.multiply(self, other)

    def __pow__(self, n):
        return self.tower.power(self, n)

    def inverse(self):
        return self.tower.inverse(self)

    def encode(self):
        return self.tower.encode(self)

    def __lt__(self, other):
        return self.encode() < other.encode()

    def __repr__(self):
        from .encoding import format_element

        return f"<G_{self.level} {format_element(self)}>"


class Tower:
    """The finite stages G_1, ..., G_L of one configured tower."""

    def __init__(self, config: TowerConfig, cache_size: int = 1 << 16):
        self.config = config
        self.primes = config.primes[: config.max_level]
        self.max_level = config.max_level
        self._mul_cached = lru_cache(maxsize=cache_size)(self._mul_levels)
        self._inv_cached = lru_cache(maxsize=cache_size)(self._inv_levels)

    def __repr__(self):
        return f"Tower(primes={self.primes})"

    def prime(self, level):
        return self.primes[level - 1]

    # construction

    def _check_level(self, level):
        if not 1 <= level <= self.max_level:
            raise TowerError(f"level {level} outside configured range [1, {self.max_level}]")

    def _wrap(self, levels, level=None):
        return GroupElement(self, levels, level)

    def identity(self, level=1):
        self._check_level(level)
        return self._wrap((0,), level)

    def element(self, e1=0, levels=None, level=None, check=True):
        """Build an element from ``e1`` and ``{k: (pairs, center)}``.

        ``pairs`` maps G_{k-1} elements to ``(x, y)``.  With ``check`` the
        D_k-membership of every level is enforced.
        """
        levels = levels or {}
        top = max(levels, default=1)
        self._check_level(max(top, level or 1))
        data = [e1 % self.primes[0]] + [None] * (top - 1)
        for k, datum in levels.items():
            if k < 2:
                raise TowerError("level vectors start at level 2")
            pairs, center = datum if isinstance(datum, tuple) else (datum, 0)
            vec = self.level_vector(k, pairs, center)
            if check and not self.level_vector_validate(vec):
                raise TowerError(f"level {k} vector is not in D_{k}: orbit sums must vanish")
            data[k - 1] = None if vec.is_trivial() else vec
        return self._wrap(_trim(tuple(data)), level)

    def level_vector(self, level, pairs=None, center=0):
        if level < 2:
            raise TowerError("level vectors start at level 2")
        self._check_level(level)
        keys = {}
        for key, xy in (pairs or {}).items():
            key = self._coerce_key(key, level)
            keys[key] = xy
        return LevelVector.make(level, self.prime(level), keys, center)

    def _coerce_key(self, key, level):
        if not isinstance(key, GroupElement) or key.tower.primes != self.primes:
            raise TowerError(f"level-{level} keys must be elements of this tower")
        if key.depth > level - 1:
            raise TowerError(f"level-{level} key of depth {key.depth} is not in G_{level - 1}")
        if key.level != level - 1:
            key = self._wrap(key.levels, level - 1)
        return key

    def center_generator(self, i):
        """Generator of R_i: exponent 1 at level 1, the center coordinate above."""
        self._check_level(i)
        if i == 1:
            return self._wrap((1 % self.primes[0],), 1)
        vec = LevelVector(i, self.prime(i), {}, 1)
        return self._wrap((0,) + (None,) * (i - 2) + (vec,), i)

    # level arithmetic

    def _vec_mul(self, u, v, k):
        if u is None:
            return v
        if v is None:
            return u
        p = self.primes[k - 1]
        pairs = dict(u.pairs)
        cocycle = 0
        for key, (x, y) in v.pairs.items():
            old = pairs.get(key)
            if old is None:
                pairs[key] = (x, y)
                continue
            cocycle += old[1] * x
            nx, ny = (old[0] + x) % p, (old[1] + y) % p
            if nx or ny:
                pairs[key] = (nx, ny)
            else:
                del pairs[key]
        center = (u.center + v.center + cocycle) % p
        if not pairs and not center:
            return None
        return LevelVector(k, p, pairs, center)

    def _vec_inv(self, u, k):
        p = self.primes[k - 1]
        pairs = {}
        cocycle = 0
        for key, (x, y) in u.pairs.items():
            cocycle += x * y
            pairs[key] = ((-x) % p, (-y) % p)
        return LevelVector(k, p, pairs, (cocycle - u.center) % p)

    def _translate(self, u, g_levels):
        """Relabel keys j -> j g (g in G_{k-1} given as a level tuple)."""
        if u is None or not u.pairs or _is_identity(g_levels):
            return u
        k = u.level
        pairs = {}
        for key, xy in u.pairs.items():
            pairs[self._wrap(self._mul_cached(key.levels, g_levels), k - 1)] = xy
        return LevelVector(k, u.prime, pairs, u.center)

    def _mul_levels(self, a, b):
        la, lb = len(a), len(b)
        out = [(a[0] + b[0]) % self.primes[0]]
        for k in range(2, max(la, lb) + 1):
            da = a[k - 1] if k <= la else None
            db = b[k - 1] if k <= lb else None
            if db is not None and db.pairs:
                prefix = _trim(a[: k - 1])
                if not _is_identity(prefix):
                    db = self._translate(db, self._inv_cached(prefix))
            out.append(self._vec_mul(da, db, k))
        return _trim(tuple(out))

    def _inv_levels(self, a):
        out = [(-a[0]) % self.primes[0]]
        for k in range(2, len(a) + 1):
            d = a[k - 1]
            if d is None:
                out.append(None)
                continue
            out.append(self._translate(self._vec_inv(d, k), _trim(a[: k - 1])))
        return tuple(out)

    def _same_tower(self, *elems):
        for e in elems:
            if not isinstance(e, GroupElement):
                raise TypeError(f"expected a GroupElement, got {type(e).__name__}")
            if e.tower is not self and e.tower.primes != self.primes:
                raise TowerError("elements belong to towers with different configurations")

    # group operations

    def multiply(self, a, b):
        self._same_tower(a, b)
        return self._wrap(self._mul_cached(a.levels, b.levels), max(a.level, b.level))

    def inverse(self, a):
        self._same_tower(a)
        return self._wrap(self._inv_cached(a.levels), a.level)

    def power(self, a, n):
        self._same_tower(a)
        base = a.levels
        if n < 0:
            base, n = self._inv_cached(base), -n
        result = (0,)
        while n:
            if n & 1:
                result = self._mul_cached(result, base)
            n >>= 1
            if n:
                base = self._mul_cached(base, base)
        return self._wrap(result, a.level)

    def commutator(self, a, b):
        """``[a, b] = a^-1 b^-1 a b``."""
        self._same_tower(a, b)
        inv = self._inv_cached
        levels = self._mul_cached(
            self._mul_cached(inv(a.levels), inv(b.levels)),
            self._mul_cached(a.levels, b.levels),
        )
        return self._wrap(levels, max(a.level, b.level))

    def conjugate(self, a, g):
        """``a^g = g^-1 a g``."""
        self._same_tower(a, g)
        levels = self._mul_cached(self._mul_cached(self._inv_cached(g.levels), a.levels), g.levels)
        return self._wrap(levels, max(a.level, g.level))

    def order(self, a):
        self._same_tower(a)
        return self._order_levels(a.levels)

    def _order_levels(self, levels):
        if len(levels) == 1:
            p = self.primes[0]
            return p // gcd(p, levels[0]) if levels[0] else 1
        k = len(levels)
        n0 = self._order_levels(_trim(levels[: k - 1]))
        d = self._wrap(levels).__pow__(n0).levels
        if _is_identity(d):
            return n0
        q = self.primes[k - 1]
        if _is_identity(self._wrap(d).__pow__(q).levels):
            return n0 * q
        return n0 * q * q

    def embed(self, a, target_level):
        self._same_tower(a)
        self._check_level(target_level)
        if target_level < a.level:
            raise TowerError(f"cannot embed an element of G_{a.level} into G_{target_level}")
        return self._wrap(a.levels, target_level)

    def project(self, a, k):
        """Image in G_{k-1} under the splitting G_i = T_ik x| G_{k-1}."""
        self._same_tower(a)
        if not 2 <= k <= a.level + 1:
            raise TowerError(f"projection index {k} outside [2, {a.level + 1}]")
        return self._wrap(_trim(a.levels[: k - 1]), k - 1)

    def in_T(self, a, k):
        """True iff levels 1..k-1 of ``a`` are trivial, i.e. a lies in T_k."""
        self._same_tower(a)
        if k < 2:
            raise TowerError("T_k is defined for k >= 2")
        if a.levels[0]:
            return False
        return all(v is None for v in a.levels[1 : k - 1])

    def is_central_in_level(self, a):
        """True iff ``a`` is a power of the top center generator (no pairs)."""
        v = a.levels[-1]
        return (
            len(a.levels) >= 2
            and v is not None
            and not v.pairs
            and all(x is None for x in a.levels[1:-1])
            and a.levels[0] == 0
        )

    # orbits and validation

    def orbit_rep(self, key, k):
        """Canonical member of ``key * R_{k-1}``: the level-(k-1) center set to 0."""
        if k - 1 == 1:
            return self._wrap((0,), 1)
        lv = key.levels
        if len(lv) < k - 1:
            return key
        d = lv[k - 2]
        if d is None or not d.center:
            return key
        new = None if not d.pairs else LevelVector(d.level, d.prime, d.pairs, 0)
        return self._wrap(_trim(lv[: k - 2] + (new,)), k - 1)

    def orbit_shift(self, key, k, t):
        """``key * r^t`` with r the generator of R_{k-1}."""
        if k - 1 == 1:
            p = self.primes[0]
            return self._wrap(((key.levels[0] + t) % p,), 1)
        p = self.prime(k - 1)
        lv = key.levels + (None,) * (k - 1 - len(key.levels))
        d = lv[k - 2]
        pairs = d.pairs if d is not None else {}
        center = ((d.center if d is not None else 0) + t) % p
        new = LevelVector(k - 1, p, pairs, center) if (pairs or center) else None
        return self._wrap(_trim(lv[: k - 2] + (new,)), k - 1)

    def level_vector_validate(self, v):
        """True iff every R_{k-1}-orbit of keys has pair sum (0, 0)."""
        if not isinstance(v, LevelVector):
            raise TowerError(f"expected a LevelVector, got {type(v).__name__}")
        k, p = v.level, v.prime
        if not 2 <= k <= self.max_level or p != self.prime(k):
            raise TowerError(f"level vector at level {k} does not belong to this tower")
        if not (isinstance(v.center, int) and 0 <= v.center < p):
            return False
        sums = {}
        for key, xy in v.pairs.items():
            if not isinstance(key, GroupElement) or key.tower.primes != self.primes:
                raise TowerError("malformed key: not an element of this tower")
            if key.depth > k - 1 or not self.validate(key):
                raise TowerError(f"malformed key: not a valid element of G_{k - 1}")
            x, y = xy
            if not (0 <= x < p and 0 <= y < p) or not (x or y):
                return False
            rep = self.orbit_rep(key, k)
            sx, sy = sums.get(rep, (0, 0))
            sums[rep] = ((sx + x) % p, (sy + y) % p)
        return all(s == (0, 0) for s in sums.values())

    def validate(self, a):
        """Full structural check of an element: residues, canonical form, D_k membership."""
        lv = a.levels
        if not lv or not (isinstance(lv[0], int) and 0 <= lv[0] < self.primes[0]):
            return False
        if len(lv) > self.max_level or (len(lv) > 1 and lv[-1] is None):
            return False
        for k, v in enumerate(lv[1:], start=2):
            if v is None:
                continue
            if v.is_trivial() or v.level != k or not self.level_vector_validate(v):
                return False
        return True

    def noncommuting_partner(self, y):
        """A sparse w in D_k with [y, w] != 1, for y in D_k with nonzero pairs.

        Candidates pair a key of ``y`` with another key of its R_{k-1}-orbit.
        Returns ``None`` when no candidate fails to commute.
        """
        k = y.depth
        v = y.levels[-1]
        if k < 2 or v is None:
            return None
        p_below = self.prime(k - 1)
        for key in sorted(v.pairs, key=lambda e: e.encode()):
            for t in range(1, p_below):
                other = self.orbit_shift(key, k, t)
                for coord in ((0, 1), (1, 0)):
                    neg = (-coord[0], -coord[1])
                    w = self.element(levels={k: ({key: coord, other: neg}, 0)}, level=k)
                    if not self.commutator(y, w).is_identity():
                        return w
        return None

    def construct_noncentral(self, u):
        """A non-central element of order p_u in the identity's orbit factor of D_u.

        Built as ``[a, r]`` with ``a`` the pair (1, 0) at the identity key and
        ``r`` generating R_{u-1}; a bounded search over central adjustments
        guards the order and centrality checks.
        """
        if not 2 <= u <= self.max_level:
            raise TowerError(f"construct_noncentral needs 2 <= u <= {self.max_level}")
        q = self.prime(u)
        ident = self._wrap((0,), u - 1)
        lifted = LevelVector(u, q, {ident: (1, 0)}, 0)
        a = self._wrap((0,) + (None,) * (u - 2) + (lifted,), u)
        r = self.embed(self.center_generator(u - 1), u)
        y0 = self.commutator(a, r)
        z = self.center_generator(u)
        for c in range(q):
            y = self.multiply(y0, self.power(z, c))
            if (
                self.level_vector_validate(y.levels[-1])
                and self.order(y) == q
                and self.noncommuting_partner(y) is not None
            ):
                return y
        raise TowerError(f"no non-central element of order {q} found in E_1 of D_{u}")

    # random sampling

    def random_element(self, level, sparsity=4, seed=None):
        """Deterministic random element of G_level with <= sparsity keys per level."""
        self._check_level(level)
        rng = seed if isinstance(seed, random.Random) else random.Random(seed)
        return self._wrap(self._random_levels(level, sparsity, rng), level)

    def random_level_vector(self, k, sparsity, rng, center=None):
        p = self.prime(k)
        p_below = self.primes[k - 2]
        pairs = {}
        budget = sparsity
        key_sparsity = max(2, sparsity // 2)
        while budget >= 2:
            base = self._wrap(self._random_levels(k - 1, key_sparsity, rng), k - 1)
            size = rng.randint(2, min(budget, p_below))
            shifts = rng.sample(range(p_below), size)
            sx = sy = 0
            for i, t in enumerate(shifts):
                key = self.orbit_shift(base, k, t)
                if i < size - 1:
                    x, y = rng.randrange(p), rng.randrange(p)
                    sx, sy = sx + x, sy + y
                else:
                    x, y = -sx, -sy
                old = pairs.get(key, (0, 0))
                pairs[key] = (old[0] + x, old[1] + y)
            budget -= size
        if center is None:
            center = rng.randrange(p)
        vec = LevelVector.make(k, p, pairs, center)
        return None if vec.is_trivial() else vec

    def _random_levels(self, level, sparsity, rng):
        out = [rng.randrange(self.primes[0])]
        for k in range(2, level + 1):
            out.append(self.random_level_vector(k, sparsity, rng))
        return _trim(tuple(out))

    # serialization

    def encode(self, a):
        from .encoding import encode

        return encode(a)

    def decode(self, data):
        from .encoding import decode

        return decode(self, data)
