"""Randomized property suite for tower arithmetic, plus stage crosschecks.

Each invariant becomes one report line with its sample count.  The tower is a
parameter so a deliberately broken tower can be fed in as a negative control.
"""

from __future__ import annotations

import random

from . import sizes
from .encoding import decode, encode
from .oracle.groups import ENUMERATION_GUARD, OracleError
from .oracle.report import Report
from .oracle.stage import crosscheck_stage, stage_lattice_report
from .tower import Tower


def _prime_factors(n):
    out, d = set(), 2
    while d * d <= n:
        while n % d == 0:
            out.add(d)
            n //= d
        d += 1
    if n > 1:
        out.add(n)
    return out


def _count(report, claim, samples, predicate):
    """Run ``predicate`` on every sample and record one line with the tally."""
    bad = 0
    first = None
    for s in samples:
        try:
            ok = predicate(*s) if isinstance(s, tuple) else predicate(s)
        except Exception as exc:  # a crash is a failure of the invariant
            ok = False
            first = first or f"{type(exc).__name__}: {exc}"
        if not ok:
            bad += 1
    n = len(samples)
    detail = f"{n - bad}/{n}"
    if first:
        detail += f"; {first}"
    return report.check(claim, bad == 0, detail)


def _center_value(tower, c, k):
    v = c.level_vector(k)
    return 0 if v is None else v.center


def run_property_suite(tower, seed=0, samples=1000, sparsity=4, levels=None, report=None):
    """Group axioms, semidirect consistency, D_k closure and projection laws."""
    report = report if report is not None else Report("tower property suite", seed)
    rng = random.Random(seed)
    levels = levels or range(1, tower.max_level + 1)

    def rand(level, n):
        return [tower.random_element(level, sparsity, rng) for _ in range(n)]

    for L in levels:
        small = max(1, samples // 5)
        trip = list(zip(rand(L, samples), rand(L, samples), rand(L, samples)))
        mul, inv, ident = tower.multiply, tower.inverse, tower.identity(L)
        _count(report, f"G_{L}: associativity", trip, lambda a, b, c: mul(mul(a, b), c) == mul(a, mul(b, c)))
        singles = [a for a, _, _ in trip]
        _count(report, f"G_{L}: identity law", singles, lambda a: mul(ident, a) == a and mul(a, ident) == a)
        _count(report, f"G_{L}: inverse law", singles, lambda a: mul(a, inv(a)).is_identity() and mul(inv(a), a).is_identity())
        _count(report, f"G_{L}: inverse is an involution", singles, lambda a: inv(inv(a)) == a)
        _count(report, f"G_{L}: elements are valid", singles, tower.validate)
        _count(report, f"G_{L}: canonical encoding round-trips", singles, lambda a: decode(tower, encode(a)) == a)
        pairs = [(a, b) for a, b, _ in trip]
        _count(report, f"G_{L}: products and inverses stay valid", pairs, lambda a, b: tower.validate(mul(a, b)) and tower.validate(inv(a)))
        _count(
            report,
            f"G_{L}: conjugates stay valid and compose (a^g)^h = a^(gh)",
            trip,
            lambda a, g, h: tower.validate(tower.conjugate(a, g))
            and tower.conjugate(tower.conjugate(a, g), h) == tower.conjugate(a, mul(g, h)),
        )

        def order_ok(a):
            n = tower.order(a)
            if not tower.power(a, n).is_identity():
                return False
            return all(not tower.power(a, n // p).is_identity() for p in _prime_factors(n))

        _count(report, f"G_{L}: order is exact", singles[:small], order_ok)
        z = tower.embed(tower.center_generator(L), L)
        _count(report, f"G_{L}: center_generator({L}) is central", singles[:small], lambda a: tower.commutator(z, a).is_identity())
        report.check(f"G_{L}: center_generator({L}) has order p_{L}", tower.order(z) == tower.prime(L))
        if L >= 2:
            for k in range(2, L + 1):
                _count(
                    report,
                    f"G_{L}: projection to G_{k - 1} is a homomorphism",
                    pairs,
                    lambda a, b, k=k: tower.project(mul(a, b), k) == mul(tower.project(a, k), tower.project(b, k)),
                )
                _count(
                    report,
                    f"G_{L}: in_T(., {k}) iff trivial projection to G_{k - 1}",
                    singles[:small],
                    lambda a, k=k: tower.in_T(a, k) == tower.project(a, k).is_identity(),
                )
            vecs = [tower.random_element(L, sparsity, rng) for _ in range(3 * small)]
            vecs = [tower.element(levels={L: (v.level_vector(L).pairs, v.level_vector(L).center)}, level=L) for v in vecs if v.level_vector(L) is not None]
            tri = list(zip(vecs[0::3], vecs[1::3], vecs[2::3]))

            def bilinear(u1, u2, w):
                c = tower.commutator
                cv = lambda x, y: _center_value(tower, c(x, y), L)
                if not (tower.is_central_in_level(c(u1, w)) or c(u1, w).is_identity()):
                    return False
                p = tower.prime(L)
                return cv(mul(u1, u2), w) == (cv(u1, w) + cv(u2, w)) % p and cv(u1, w) == (-cv(w, u1)) % p

            _count(report, f"D_{L}: commutators are central, bilinear and antisymmetric", tri, bilinear)
        nontrivial = [a for a in singles[:small] if not a.is_identity()]
        _count(
            report,
            f"G_{L}: nontrivial elements survive in a finite quotient G_j",
            nontrivial,
            lambda a: not tower.project(a, a.depth + 1).is_identity(),
        )
    return report


def run_size_accounting(primes, report=None):
    report = report if report is not None else Report("size accounting")
    for k, (p, dim) in enumerate(sizes.level_dimensions(primes), start=1):
        if k == 1:
            continue
        if dim is None:
            report.skip(f"dim D_{k}", "too large to write down")
            continue
        prev = sizes.group_order(primes, k - 1)
        pk = primes[k - 2]
        if prev is not None:
            report.check(f"dim D_{k} = 1 + (2p_{k - 1} - 2)|G_{k - 1}|/p_{k - 1}", dim == 1 + (2 * pk - 2) * prev // pk, f"{dim}")
    return report


def run_selftest(config, seed=0, samples=1000, tower=None, sparsity=4):
    """Property suite plus, for enumerable stages, both-way crosschecks and lattice facts."""
    tower = tower if tower is not None else Tower(config)
    report = Report(f"selftest for primes {tuple(tower.primes)}", seed)
    run_property_suite(tower, seed, samples, sparsity, report=report)
    run_size_accounting(tuple(tower.primes), report)
    for i in (1, 2):
        if i > tower.max_level:
            break
        order = sizes.group_order(tower.primes, i)
        if order is None or order > ENUMERATION_GUARD:
            report.skip(f"stage {i} crosscheck", f"|G_{i}| beyond the enumeration guard")
            continue
        try:
            report.extend(crosscheck_stage(tower, i), prefix=f"stage {i}: ")
            if i == 2:
                sub, _ = stage_lattice_report(tower, 2)
                report.extend(sub, prefix="stage 2: ")
        except OracleError as exc:
            report.check(f"stage {i} crosscheck", False, str(exc))
    return report
