"""Small concrete groups given by coordinates, tabulated with numpy.

Each family returns an :class:`OracleGroup` whose ``coords`` attribute holds
the coordinate tuple of every element, so automorphisms can be written as
vectorised coordinate maps and turned into index permutations.
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np

from .groups import AutomorphismMap, GuardExceeded, ENUMERATION_GUARD, OracleGroup, all_tuples

_CHUNK = 1 << 21


def coordinate_group(radices, mul_vec, name, generator_coords=None):
    radices = tuple(int(r) for r in radices)
    n = int(np.prod(radices))
    if n > ENUMERATION_GUARD:
        raise GuardExceeded(f"{name} has {n} elements, above the guard {ENUMERATION_GUARD}")
    coords = all_tuples(radices)
    strides = np.array([int(np.prod(radices[i + 1 :])) for i in range(len(radices))], dtype=np.int64)

    def index_of(c):
        return (np.asarray(c, dtype=np.int64) * strides).sum(axis=-1)

    table = np.empty((n, n), dtype=np.int32)
    rows = max(1, _CHUNK // n)
    for start in range(0, n, rows):
        a = coords[start : start + rows]
        prod = mul_vec(np.repeat(a, n, axis=0), np.tile(coords, (len(a), 1)))
        table[start : start + len(a)] = index_of(prod).reshape(len(a), n)
    gens = None
    if generator_coords is not None:
        gens = [int(index_of(g)) for g in generator_coords]
    group = OracleGroup(table, [tuple(int(v) for v in c) for c in coords], name, gens)
    group.coords = coords
    group.index_of = index_of
    group.radices = radices
    return group


def coordinate_automorphism(group, fn):
    """Automorphism induced by the vectorised coordinate map ``fn``."""
    return AutomorphismMap(group.index_of(fn(group.coords.copy())), group)


def _unit_vectors(radices):
    eye = np.eye(len(radices), dtype=np.int64)
    return [eye[i] for i in range(len(radices))]


@lru_cache(maxsize=None)
def abelian(orders):
    """Direct product of cyclic groups Z_{o_1} x ... x Z_{o_d}."""
    mods = np.asarray(orders, dtype=np.int64)

    def mul(a, b):
        return (a + b) % mods

    return coordinate_group(orders, mul, f"Abelian{tuple(orders)}", _unit_vectors(orders))


def cyclic(n):
    return abelian((n,))


@lru_cache(maxsize=None)
def heisenberg_central_product(p, m):
    """Central product of m extra-special groups of order p^3 (one shared center).

    Coordinates ``(x_1..x_m, y_1..y_m, c)`` with cocycle ``sum_i y_i x'_i``;
    at p = 2 each factor is dihedral of order 8.
    """

    def mul(a, b):
        out = (a + b) % p
        cross = (a[:, m : 2 * m] * b[:, :m]).sum(axis=1)
        out[:, 2 * m] = (a[:, 2 * m] + b[:, 2 * m] + cross) % p
        return out

    radices = (p,) * (2 * m + 1)
    gens = _unit_vectors(radices)[: 2 * m]
    return coordinate_group(radices, mul, f"Extraspecial({p}^{2 * m + 1}, {m} factors)", gens)


def heisenberg(p):
    return heisenberg_central_product(p, 1)


def factor_shift(group, m, p, shift=1, scalings=None):
    """Cyclic shift of the m factors, optionally with x -> l x, y -> l^-1 y per factor."""
    lam = np.ones(m, dtype=np.int64) if scalings is None else np.asarray(scalings, dtype=np.int64)
    laminv = np.array([pow(int(v), -1, p) for v in lam], dtype=np.int64)

    def fn(c):
        out = c.copy()
        for i in range(m):
            j = (i + shift) % m
            out[:, j] = c[:, i] * lam[i] % p
            out[:, m + j] = c[:, m + i] * laminv[i] % p
        return out

    return coordinate_automorphism(group, fn)


def similitude(group, m, p, lam, mu):
    """(x, y, c) -> (lam x, mu y, lam mu c) on every factor."""

    def fn(c):
        out = c.copy()
        out[:, :m] = c[:, :m] * lam % p
        out[:, m : 2 * m] = c[:, m : 2 * m] * mu % p
        out[:, 2 * m] = c[:, 2 * m] * lam * mu % p
        return out

    return coordinate_automorphism(group, fn)


@lru_cache(maxsize=None)
def dihedral(n):
    """Dihedral group of order 2n as pairs (k, s): r^k s^s."""

    def mul(a, b):
        sign = np.where(a[:, 1] == 0, 1, -1)
        return np.stack([(a[:, 0] + sign * b[:, 0]) % n, (a[:, 1] + b[:, 1]) % 2], axis=1)

    return coordinate_group((n, 2), mul, f"Dihedral({2 * n})", [(1, 0), (0, 1)])


@lru_cache(maxsize=None)
def metacyclic(n, k, u):
    """Z_n x| Z_k with the generator of Z_k acting by multiplication by u."""
    if pow(u, k, n) != 1 % n:
        raise ValueError(f"u = {u} does not have order dividing {k} mod {n}")
    upow = np.array([pow(u, b, n) for b in range(k)], dtype=np.int64)

    def mul(a, b):
        return np.stack([(a[:, 0] + upow[a[:, 1]] * b[:, 0]) % n, (a[:, 1] + b[:, 1]) % k], axis=1)

    return coordinate_group((n, k), mul, f"Metacyclic({n},{k},{u})", [(1, 0), (0, 1)])


def scale_first(group, w, n):
    """(a, rest) -> (w a mod n, rest)."""

    def fn(c):
        out = c.copy()
        out[:, 0] = c[:, 0] * w % n
        return out

    return coordinate_automorphism(group, fn)


def linear_automorphism(group, matrix, mods):
    """Linear map on the coordinates of an abelian group (row vectors times matrix^T)."""
    matrix = np.asarray(matrix, dtype=np.int64)
    mods = np.asarray(mods, dtype=np.int64)

    def fn(c):
        return (c @ matrix.T) % mods

    return coordinate_automorphism(group, fn)


def direct_product(g, h, name=None):
    ng, nh = g.n, h.n
    if ng * nh > ENUMERATION_GUARD:
        raise GuardExceeded(f"direct product of order {ng * nh} exceeds the guard")
    ig = np.repeat(np.arange(ng), nh)
    ih = np.tile(np.arange(nh), ng)
    table = g.table[ig[:, None], ig[None, :]] * nh + h.table[ih[:, None], ih[None, :]]
    gens = [int(x) * nh + h.identity for x in g.generating_set()]
    gens += [g.identity * nh + int(y) for y in h.generating_set()]
    elements = [(a, b) for a in g.elements for b in h.elements]
    return OracleGroup(table, elements, name or f"{g.name} x {h.name}", gens)


def product_automorphism(g, h, alpha, beta, product):
    """alpha x beta on ``product = direct_product(g, h)``."""
    nh = h.n
    ig = np.repeat(np.arange(g.n), nh)
    ih = np.tile(np.arange(nh), g.n)
    return AutomorphismMap(alpha.perm[ig] * nh + beta.perm[ih], product)


def identity_automorphism(group):
    return AutomorphismMap(np.arange(group.n), group)
