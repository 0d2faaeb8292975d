"""Brute-force checks of the auxiliary group-theoretic lemmas.

Every check first verifies its hypotheses by enumeration and raises
:class:`PreconditionError` when they fail; it never passes silently on an
inadmissible instance.  Results are :class:`LemmaResult` objects, truthy
exactly when the claimed conclusion holds.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import families
from .groups import AutomorphismMap, PreconditionError, SubgroupMask, is_coprime
from .report import Report


@dataclass
class LemmaResult:
    passed: bool
    data: dict = field(default_factory=dict)

    def __bool__(self):
        return self.passed


def automorphism_group(G, autos):
    """All elements of the group generated by ``autos`` (as permutations)."""
    ident = np.arange(G.n)
    seen = {ident.tobytes(): ident}
    frontier = [ident]
    while frontier:
        nxt = []
        for perm in frontier:
            for a in autos:
                img = a.perm[perm]
                key = img.tobytes()
                if key not in seen:
                    seen[key] = img
                    nxt.append(img)
        frontier = nxt
    return [AutomorphismMap(p) for p in seen.values()]


def _require_coprime(G, order, what="automorphism group"):
    if not is_coprime(order, G.n):
        raise PreconditionError(f"{what} of order {order} is not coprime to |G| = {G.n}")


def check_coprime_identities(G, A, report=None):
    """The coprime-action identities (1)-(4) for a group of automorphisms ``A``.

    ``A`` is a list of generating automorphisms; items hold over the full
    group they generate.
    """
    for a in A:
        if not G.is_automorphism(a.perm):
            raise PreconditionError("a generator is not an automorphism of G")
    group_a = automorphism_group(G, A)
    _require_coprime(G, len(group_a))
    report = report if report is not None else Report(f"coprime identities on {G.name}")

    whole = G.whole()
    GA = G.commutator_with(whole, A)
    C = G.fixed_points(A)
    report.check("(2) G = [G,A] C_G(A)", G.product_set(GA, C) == whole, f"|[G,A]|={len(GA)} |C|={len(C)}")
    if G.is_abelian():
        direct = len(GA & C) == 1 and G.product_set(GA, C) == whole
        report.check("(3) G = [G,A] x C_G(A) (abelian)", direct)
    else:
        report.skip("(3) G = [G,A] x C_G(A) (abelian)", "G is not abelian")
    report.check("(4) [[G,A],A] = [G,A]", G.commutator_with(GA, A) == GA)

    normals = G.normal_subgroups(automorphisms=A)
    ok = True
    for N in normals:
        # preimage of C_{G/N}(A): g with g^-1 g^alpha in N for every generator alpha
        pre = np.ones(G.n, dtype=bool)
        idx = np.arange(G.n)
        for a in A:
            pre &= N.mask[G.table[G.inverse[idx], a.perm[idx]]]
        if SubgroupMask(pre) != G.product_set(C, N):
            ok = False
            break
    report.check("(1) C_{G/N}(A) = C_G(A)N/N for all A-invariant normal N", ok, f"{len(normals)} subgroups N")
    return report


def is_metabelian(G):
    return len(G.derived_subgroup(G.derived_subgroup())) == 1


def check_zuzu(G, B, a):
    """[B, a] is normal in G when G is metabelian and B >= G' is abelian."""
    if not is_metabelian(G):
        raise PreconditionError("G is not metabelian")
    if not G.is_subgroup(B):
        raise PreconditionError("B is not a subgroup")
    if not G.is_abelian(B):
        raise PreconditionError("B is not abelian")
    if not G.derived_subgroup() <= B:
        raise PreconditionError("B does not contain G'")
    Ba = G.generate(np.unique(G.commutator(B.elements, a)))
    return LemmaResult(G.is_normal(Ba), {"|[B,a]|": len(Ba), "|B|": len(B)})


def check_gran(G, alpha):
    """[Z, alpha] <= Z(G) for Z = Z([G, alpha]) when G' <= C_G(alpha), coprime."""
    _require_coprime(G, alpha.order, "automorphism")
    C = G.fixed_points([alpha])
    if not G.derived_subgroup() <= C:
        raise PreconditionError("G' is not centralised by alpha")
    GA = G.commutator_with(G.whole(), [alpha])
    Z = G.subgroup_center(GA)
    ZA = G.commutator_with(Z, [alpha])
    return LemmaResult(ZA <= G.center(), {"|[G,a]|": len(GA), "|Z|": len(Z), "|[Z,a]|": len(ZA)})


def _summand_orders(p, base_order, summand):
    if summand == "cyclic":
        return (base_order,)
    k, rest = 0, base_order
    while rest % p == 0:
        rest //= p
        k += 1
    if rest != 1:
        raise PreconditionError(f"{base_order} is not a power of {p}")
    return (p,) * k


def check_elem(p, m, base_order, summand="elementary", shift=1):
    """Index of [G, alpha] equals |G_1| for alpha cycling m isomorphic summands."""
    if m < 1:
        raise PreconditionError("need at least one summand")
    if not is_coprime(m, base_order):
        raise PreconditionError(f"shift of order {m} is not coprime to |G| = {base_order}^{m}")
    if m > 1 and not is_coprime(shift, m):
        raise PreconditionError("shift must generate the cyclic permutation of the summands")
    orders = _summand_orders(p, base_order, summand)
    d = len(orders)
    G = families.abelian(orders * m)
    mods = np.asarray(orders * m, dtype=np.int64)

    def fn(c):
        out = c.copy()
        for i in range(m):
            j = (i + shift) % m
            out[:, j * d : (j + 1) * d] = c[:, i * d : (i + 1) * d]
        return out % mods

    alpha = families.coordinate_automorphism(G, fn)
    if alpha.order != m:
        raise PreconditionError("alpha does not have order m")
    GA = G.commutator_with(G.whole(), [alpha])
    index = G.n // len(GA)
    return LemmaResult(index == base_order, {"|G|": G.n, "|[G,a]|": len(GA), "index": index})


def is_extraspecial(G, sub=None):
    """p-group with H' = Z(H) of prime order."""
    sub = G.whole() if sub is None else sub
    order = len(sub)
    prime = next(q for q in range(2, order + 1) if order % q == 0)
    rest = order
    while rest % prime == 0:
        rest //= prime
    if rest != 1:
        return False
    derived = G.derived_subgroup(sub)
    center = G.subgroup_center(sub)
    return derived == center and len(center) == prime


def check_extraelem(p, m, shift=1, scalings=None):
    """[G, alpha] is extra-special of index p^2 for G a central product of m factors."""
    if m < 2:
        raise PreconditionError("need at least two factors")
    if not is_coprime(m, p):
        raise PreconditionError(f"shift of order {m} is not coprime to |G| = {p}^{2 * m + 1}")
    if scalings is not None and p == 2 and any(s % 2 != 1 for s in scalings):
        raise PreconditionError("scalings must be units")
    G = families.heisenberg_central_product(p, m)
    alpha = families.factor_shift(G, m, p, shift, scalings)
    if alpha.order != m:
        raise PreconditionError(f"alpha has order {alpha.order}, not {m}")
    if not G.derived_subgroup() <= G.fixed_points([alpha]):
        raise PreconditionError("alpha does not fix G'")
    GA = G.commutator_with(G.whole(), [alpha])
    extra = is_extraspecial(G, GA)
    index = G.n // len(GA)
    data = {"|G|": G.n, "|[G,a]|": len(GA), "index": index, "extraspecial": extra}
    return LemmaResult(extra and index == p * p, data)
