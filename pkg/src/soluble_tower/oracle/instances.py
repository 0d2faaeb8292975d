"""Seeded generators of admissible lemma instances and the suite runner.

An instance is a plain dict (so instance lists can be compared and printed);
:func:`run_instance` materializes the groups and calls the matching check.
"""

from __future__ import annotations

import itertools
import math
import random

import numpy as np

from ..config import TowerConfig
from . import families, lemmas
from .groups import PreconditionError, is_coprime
from .report import Report
from .stage import stage_lattice_report

LEMMAS = ("zuzu", "coprime", "gran", "elem", "extraelem")

EXTRAELEM_SHAPES = ((2, 3), (2, 5), (3, 2), (5, 2))


def _unit_order(w, n):
    k, x = 1, w % n
    while x != 1 % n:
        x = x * w % n
        k += 1
    return k


def _coprime_units(n, modulus_of_group):
    """Units w mod n whose multiplicative order is coprime to |G|."""
    return [w for w in range(1, n) if math.gcd(w, n) == 1 and is_coprime(_unit_order(w, n), modulus_of_group)]


def _matrix_order(mat, p):
    ident = np.eye(len(mat), dtype=np.int64)
    cur, k = np.array(mat, dtype=np.int64) % p, 1
    while not (cur == ident).all():
        cur = cur @ np.array(mat, dtype=np.int64) % p
        k += 1
        if k > 10**4:
            return None
    return k


def _det_mod(mat, p):
    total = 0
    for perm in itertools.permutations(range(len(mat))):
        inversions = sum(perm[a] > perm[b] for a in range(len(perm)) for b in range(a + 1, len(perm)))
        total += (-1) ** inversions * math.prod(mat[r][perm[r]] for r in range(len(mat)))
    return total % p


def _random_coprime_matrix(rng, p, d):
    """Random invertible d x d matrix mod p whose order is coprime to p."""
    while True:
        mat = [[rng.randrange(p) for _ in range(d)] for _ in range(d)]
        if _det_mod(mat, p) == 0:
            continue
        order = _matrix_order(mat, p)
        if order is not None and is_coprime(order, p):
            return mat


def _zuzu_instance(rng):
    kind = rng.choice(["dihedral", "metacyclic", "heisenberg", "abelian"])
    if kind == "dihedral":
        n = rng.randrange(2, 21)
        return {"lemma": "zuzu", "family": "dihedral", "n": n, "a": rng.randrange(2 * n)}
    if kind == "metacyclic":
        n = rng.choice([5, 7, 9, 13])
        u = rng.choice([w for w in range(2, n) if math.gcd(w, n) == 1])
        k = _unit_order(u, n)
        return {"lemma": "zuzu", "family": "metacyclic", "n": n, "k": k, "u": u, "a": rng.randrange(n * k)}
    if kind == "heisenberg":
        p = rng.choice([2, 3, 5])
        return {"lemma": "zuzu", "family": "heisenberg", "p": p, "a": rng.randrange(p**3)}
    orders = tuple(rng.choice([2, 3, 4, 5]) for _ in range(rng.randrange(1, 4)))
    n = math.prod(orders)
    gens = sorted({rng.randrange(n) for _ in range(rng.randrange(1, 3))})
    return {"lemma": "zuzu", "family": "abelian", "orders": orders, "B": gens, "a": rng.randrange(n)}


def _coprime_instance(rng, lemma="coprime"):
    kinds = ["cyclic", "abelian", "heisenberg", "dihedral"]
    if lemma == "gran":
        kinds = ["cyclic", "abelian", "heisenberg", "central"]
    kind = rng.choice(kinds)
    if kind == "cyclic":
        n = rng.choice([3, 5, 7, 9, 11, 13, 25, 27])
        w = rng.choice(_coprime_units(n, n))
        return {"lemma": lemma, "family": "cyclic", "n": n, "w": w}
    if kind == "abelian":
        p, d = rng.choice([(2, 2), (3, 2), (5, 2), (2, 3), (3, 3)])
        return {"lemma": lemma, "family": "abelian", "p": p, "d": d, "matrix": _random_coprime_matrix(rng, p, d)}
    if kind == "heisenberg":
        p = rng.choice([3, 5, 7])
        lam = rng.randrange(1, p)
        mu = pow(lam, -1, p) if lemma == "gran" else rng.randrange(1, p)
        return {"lemma": lemma, "family": "heisenberg", "p": p, "lam": lam, "mu": mu}
    if kind == "dihedral":
        n = rng.choice([3, 5, 7, 9, 15])
        w = rng.choice(_coprime_units(n, 2 * n))
        return {"lemma": lemma, "family": "dihedral", "n": n, "w": w}
    p, m = rng.choice([(3, 2), (2, 3)])
    scalings = [rng.randrange(1, p) for _ in range(m)]
    return {"lemma": lemma, "family": "central", "p": p, "m": m, "shift": 1 if m == 2 else rng.choice([1, 2]), "scalings": scalings}


def _elem_instance(rng):
    while True:
        p = rng.choice([2, 3, 5, 7])
        summand = rng.choice(["elementary", "cyclic"])
        base = p ** rng.choice([1, 1, 2])
        m = rng.choice([k for k in range(1, 7) if is_coprime(k, p)])
        if base**m <= 4096:
            break
    shifts = [s for s in range(1, max(m, 2)) if is_coprime(s, m)] if m > 1 else [1]
    return {"lemma": "elem", "p": p, "m": m, "base_order": base, "summand": summand, "shift": rng.choice(shifts)}


def _extraelem_instance(rng):
    p, m = rng.choice(EXTRAELEM_SHAPES)
    shift = rng.choice([s for s in range(1, m) if is_coprime(s, m)])
    # alpha^m scales every factor by the product of the scalings; order m needs it to be 1
    scalings = [rng.randrange(1, p) for _ in range(m - 1)]
    scalings.append(pow(math.prod(scalings), -1, p))
    return {"lemma": "extraelem", "p": p, "m": m, "shift": shift, "scalings": scalings}


_GENERATORS = {
    "zuzu": _zuzu_instance,
    "coprime": _coprime_instance,
    "gran": lambda rng: _coprime_instance(rng, "gran"),
    "elem": _elem_instance,
    "extraelem": _extraelem_instance,
}


def lemma_instances(seed, count, names=LEMMAS):
    """Deterministic list of ``count`` instances per lemma."""
    out = []
    for name in names:
        rng = random.Random(f"{seed}:{name}")
        out += [_GENERATORS[name](rng) for _ in range(count)]
    return out


def _coprime_group(inst):
    fam = inst["family"]
    if fam == "cyclic":
        G = families.cyclic(inst["n"])
        return G, [families.scale_first(G, inst["w"], inst["n"])]
    if fam == "abelian":
        G = families.abelian((inst["p"],) * inst["d"])
        return G, [families.linear_automorphism(G, inst["matrix"], G.radices)]
    if fam == "heisenberg":
        G = families.heisenberg(inst["p"])
        return G, [families.similitude(G, 1, inst["p"], inst["lam"], inst["mu"])]
    if fam == "dihedral":
        G = families.dihedral(inst["n"])
        return G, [families.scale_first(G, inst["w"], inst["n"])]
    G = families.heisenberg_central_product(inst["p"], inst["m"])
    return G, [families.factor_shift(G, inst["m"], inst["p"], inst["shift"], inst["scalings"])]


def _zuzu_args(inst):
    fam = inst["family"]
    if fam == "dihedral":
        G = families.dihedral(inst["n"])
        B = G.generate([int(G.index_of((1, 0)))])
    elif fam == "metacyclic":
        G = families.metacyclic(inst["n"], inst["k"], inst["u"])
        B = G.generate([int(G.index_of((1, 0)))])
    elif fam == "heisenberg":
        G = families.heisenberg(inst["p"])
        B = G.generate([int(G.index_of((0, 1, 0))), int(G.index_of((0, 0, 1)))])
    else:
        G = families.abelian(tuple(inst["orders"]))
        B = G.generate(inst["B"])
    return G, B, inst["a"]


def run_instance(inst):
    name = inst["lemma"]
    if name == "zuzu":
        return lemmas.check_zuzu(*_zuzu_args(inst))
    if name == "coprime":
        G, A = _coprime_group(inst)
        rep = lemmas.check_coprime_identities(G, A)
        return lemmas.LemmaResult(rep.passed, rep.counts())
    if name == "gran":
        G, A = _coprime_group(inst)
        return lemmas.check_gran(G, A[0])
    if name == "elem":
        return lemmas.check_elem(inst["p"], inst["m"], inst["base_order"], inst["summand"], inst["shift"])
    if name == "extraelem":
        return lemmas.check_extraelem(inst["p"], inst["m"], inst["shift"], inst["scalings"])
    raise ValueError(f"unknown lemma {name!r}")


def describe(inst):
    return ",".join(f"{k}={v}" for k, v in inst.items() if k != "lemma").replace(" ", "")


def run_lemma_suite(seed=0, count=50, names=LEMMAS, stages=((2, 3), (3, 2)), verbose=False):
    """One PASS/FAIL line per lemma with instance counts (per-instance lines if verbose)."""
    report = Report(f"lemma suite, {count} instances each", seed)
    if count <= 0:
        return report
    for name in names:
        insts = lemma_instances(seed, count, (name,))
        failed, rejected = [], []
        for inst in insts:
            try:
                ok = bool(run_instance(inst))
            except PreconditionError as exc:
                rejected.append(f"{describe(inst)}: {exc}")
                continue
            if verbose:
                report.check(f"{name} [{describe(inst)}]", ok)
            if not ok:
                failed.append(describe(inst))
        passed = not failed and not rejected
        detail = f"{len(insts) - len(failed) - len(rejected)}/{len(insts)} pass"
        if rejected:
            detail += f"; generator produced inadmissible instance: {rejected[0]}"
        if failed:
            detail += f"; first failure: {failed[0]}"
        report.check(f"{name}: all admissible instances", passed, detail)
    p2m3 = lemmas.check_extraelem(2, 3)
    report.check(
        "p=2, m=3 arithmetic: orders 2^7 and 2^5",
        p2m3.data["|G|"] == 2**7 and p2m3.data["|[G,a]|"] == 2**5,
        f"|G| = {p2m3.data['|G|']}, |[G,a]| = {p2m3.data['|[G,a]|']}",
    )
    for primes in stages:
        sub, _ = stage_lattice_report(TowerConfig(primes), 2)
        report.extend(sub, prefix=f"stage {primes}: ")
    return report

