"""Exact order and dimension bookkeeping for the stages of the tower.

dim D_i = 1 + (2 p_{i-1} - 2) |G_{i-1}| / p_{i-1}, and |G_i| = |D_i| |G_{i-1}|.
|G_i| itself quickly stops being a representable integer (|G_4| for primes
(2,3,2,3) already has ~10^22 digits), so orders are kept as prime-exponent
maps and only the dimension that needs the exact previous order is refused
when that order is out of reach.
"""

from __future__ import annotations

import math

# |G_{i-1}| must fit in this many bits for dim D_i to be computed exactly.
MAX_ORDER_BITS = 1 << 16


def _bits(exponents):
    return sum(e * math.log2(p) for p, e in exponents.items())


def level_dimensions(primes, upto=None):
    """List of (p_i, dim_i) for levels 1..upto; dim is ``None`` once infeasible.

    Level 1 contributes dimension 1 (G_1 is cyclic of order p_1).
    """
    upto = len(primes) if upto is None else upto
    dims = []
    exponents = {}
    for i in range(1, upto + 1):
        p = primes[i - 1]
        if i == 1:
            dim = 1
        elif exponents is None or _bits(exponents) > MAX_ORDER_BITS:
            dim = None
        else:
            prev = math.prod(q**e for q, e in exponents.items())
            below = primes[i - 2]
            dim = 1 + (2 * below - 2) * (prev // below)
        dims.append((p, dim))
        if dim is None:
            exponents = None
        else:
            exponents[p] = exponents.get(p, 0) + dim
    return dims


def order_exponents(primes, level):
    """|G_level| as ``{prime: exponent}``, or ``None`` when some dim is infeasible."""
    exponents = {}
    for p, dim in level_dimensions(primes, level):
        if dim is None:
            return None
        exponents[p] = exponents.get(p, 0) + dim
    return exponents


def group_order(primes, level, max_bits=MAX_ORDER_BITS):
    """|G_level| as an int, or ``None`` when it is too large to write down."""
    exponents = order_exponents(primes, level)
    if exponents is None or _bits(exponents) > max_bits:
        return None
    return math.prod(p**e for p, e in exponents.items())


def d_dimension(primes, level):
    if level < 2:
        raise ValueError("D_i is defined for i >= 2")
    return level_dimensions(primes, level)[-1][1]


def order_formula(primes, level):
    """Human-readable exact formula for |G_level|."""
    exponents = order_exponents(primes, level)
    if exponents is not None:
        return " * ".join(f"{p}^{e}" for p, e in sorted(exponents.items()))
    i = level
    p, below = primes[i - 1], primes[i - 2]
    return f"{p}^(1 + {2 * below - 2}*|G_{i - 1}|/{below}) * |G_{i - 1}|, |G_{i - 1}| = {order_formula(primes, i - 1)}"
