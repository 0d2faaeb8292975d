"""Sparse group-algebra elements K[G] and two-sided membership certificates."""

from __future__ import annotations

from dataclasses import dataclass, field

from .fields import Field, FieldError
from .tower import GroupElement, Tower


class AlgebraError(ValueError):
    pass


class AlgebraElement:
    """Finitely supported map from tower elements to scalars of one field.

    Zero coefficients are never stored.  Group elements compare by their
    levels, so the same element at different ambient levels is one term.
    """

    __slots__ = ("field", "tower", "terms")

    def __init__(self, field: Field, tower: Tower, terms=None):
        self.field = field
        self.tower = tower
        self.terms = {}
        for g, c in (terms.items() if isinstance(terms, dict) else terms or ()):
            self._accumulate(g, field(c) if not field.is_normalized(c) else c)

    def _accumulate(self, g, c):
        if not isinstance(g, GroupElement):
            raise AlgebraError(f"support elements must be GroupElements, got {type(g).__name__}")
        if g.tower.primes != self.tower.primes:
            raise AlgebraError("support element from a different tower")
        new = self.field.add(self.terms.get(g, self.field.zero), c)
        if new:
            self.terms[g] = new
        else:
            self.terms.pop(g, None)

    # constructors

    @classmethod
    def zero(cls, field, tower):
        return cls(field, tower)

    @classmethod
    def one(cls, field, tower):
        return cls.monomial(field, tower.identity(1))

    @classmethod
    def monomial(cls, field, g, c=1):
        return cls(field, g.tower, [(g, c)])

    def _new(self, terms=()):
        out = AlgebraElement(self.field, self.tower)
        for g, c in terms:
            out._accumulate(g, c)
        return out

    # inspection

    def is_zero(self):
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __len__(self):
        return len(self.terms)

    def coefficient(self, g):
        return self.terms.get(g, self.field.zero)

    def support(self):
        """Support elements in canonical (encoding) order."""
        return sorted(self.terms, key=lambda g: g.encode())

    def items(self):
        return [(g, self.terms[g]) for g in self.support()]

    def __eq__(self, other):
        if not isinstance(other, AlgebraElement):
            return NotImplemented
        return self.field == other.field and self.terms == other.terms

    def __hash__(self):
        return hash((self.field, frozenset(self.terms.items())))

    def __repr__(self):
        if not self.terms:
            return f"0 in {self.field!r}[G]"
        parts = [f"{self.field.format(c)}*{g!r}" for g, c in self.items()]
        return " + ".join(parts)

    # ring operations

    def _check(self, other):
        if not isinstance(other, AlgebraElement):
            raise AlgebraError(f"expected an AlgebraElement, got {type(other).__name__}")
        if other.field != self.field:
            raise FieldError(f"field mismatch: {self.field!r} vs {other.field!r}")
        if other.tower.primes != self.tower.primes:
            raise AlgebraError("tower configuration mismatch")

    def __add__(self, other):
        self._check(other)
        out = self._new(self.terms.items())
        for g, c in other.terms.items():
            out._accumulate(g, c)
        return out

    def __neg__(self):
        return self.scale(-1)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c):
        c = self.field(c)
        if not c:
            return self._new()
        return self._new((g, self.field.mul(c, v)) for g, v in self.terms.items())

    def __mul__(self, other):
        if isinstance(other, AlgebraElement):
            self._check(other)
            mul, fmul = self.tower.multiply, self.field.mul
            return self._new(
                (mul(g, h), fmul(c, d)) for g, c in self.terms.items() for h, d in other.terms.items()
            )
        return self.scale(other)

    __rmul__ = scale

    def left(self, g):
        """``g * self``."""
        mul = self.tower.multiply
        return self._new((mul(g, h), c) for h, c in self.terms.items())

    def right(self, g):
        """``self * g``."""
        mul = self.tower.multiply
        return self._new((mul(h, g), c) for h, c in self.terms.items())

    def two_sided(self, g, h, c=1):
        """``c * g * self * h``."""
        mul, fmul = self.tower.multiply, self.field.mul
        c = self.field(c)
        return self._new((mul(mul(g, x), h), fmul(c, v)) for x, v in self.terms.items())

    def conjugate(self, g):
        """``g^-1 * self * g`` termwise."""
        conj = self.tower.conjugate
        return self._new((conj(x, g), c) for x, c in self.terms.items())


def algebra_add(a, b):
    return a + b


def algebra_scale(a, c):
    return a.scale(c)


def algebra_mul(a, b):
    return a * b


def conjugate_algebra(alpha, g):
    return alpha.conjugate(g)


def support_min_level(alpha):
    """Least t with every support element in G_t."""
    if alpha.is_zero():
        raise AlgebraError("zero element")
    return max(g.depth for g in alpha.terms)


def group_minus_one(field, z):
    """The algebra element ``z - 1``."""
    return AlgebraElement(field, z.tower, [(z, 1), (z.tower.identity(1), -1)])


@dataclass
class Certificate:
    """Triples (scalar, g, h) claimed to satisfy sum scalar * g * alpha * h = z - 1."""

    target: GroupElement
    triples: list = field(default_factory=list)

    def __len__(self):
        return len(self.triples)


def merge_triples(field, triples):
    """Combine triples with equal (g, h) and drop zero scalars, in canonical order."""
    acc = {}
    for lam, g, h in triples:
        key = (g, h)
        acc[key] = field.add(acc.get(key, field.zero), field(lam))
    out = [(lam, g, h) for (g, h), lam in acc.items() if lam]
    out.sort(key=lambda t: (t[1].encode(), t[2].encode()))
    return out


def compose_triples(field, outer, inner):
    """If beta = sum(outer) applied to gamma and gamma = sum(inner) applied to alpha,
    return triples expressing beta in terms of alpha."""
    out = []
    for mu, g2, h2 in outer:
        mul = g2.tower.multiply
        for lam, g1, h1 in inner:
            out.append((field.mul(field(mu), field(lam)), mul(g2, g1), mul(h1, h2)))
    return out


def expand_triples(alpha, triples):
    """Sparse expansion of sum lam * g * alpha * h."""
    out = AlgebraElement(alpha.field, alpha.tower)
    mul, fmul = alpha.tower.multiply, alpha.field.mul
    for lam, g, h in triples:
        lam = alpha.field(lam)
        for x, c in alpha.terms.items():
            out._accumulate(mul(mul(g, x), h), fmul(lam, c))
    return out


def certificate_difference(alpha, cert):
    """Expansion minus (z - 1); zero exactly when the certificate is valid."""
    return expand_triples(alpha, cert.triples) - group_minus_one(alpha.field, cert.target)


def verify_certificate(alpha, cert):
    """True iff the triples expand exactly to ``cert.target - 1``."""
    try:
        return certificate_difference(alpha, cert).is_zero()
    except (AlgebraError, FieldError, ValueError):
        return False
