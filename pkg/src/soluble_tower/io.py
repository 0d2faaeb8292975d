"""Text file formats for algebra elements, certificates and collapse traces.

Algebra file::

    # comments start with '#'
    field 3                 # 0 for the rationals, else a prime
    primes 2 3 2 3 2        # optional; must match the tower if present
    0100 1                  # <hex canonical encoding> <scalar>
    0101 1

Certificate file::

    field 3
    primes 2 3 2 3 2
    target <hex>
    triple <scalar> <hex g> <hex h>

Scalars are integers or ``a/b`` fractions.  Writers emit canonical order, so
identical inputs give byte-identical files.
"""

from __future__ import annotations

from pathlib import Path

from .algebra import AlgebraElement, Certificate
from .encoding import DecodeError, format_element, from_hex, to_hex
from .fields import Field, FieldError


class FormatError(ValueError):
    pass


def _lines(text):
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield lineno, line.split()


def _header(tokens, lineno, tower, state):
    head = tokens[0]
    if head == "field":
        if len(tokens) != 2:
            raise FormatError(f"line {lineno}: expected 'field <char>'")
        try:
            state["field"] = Field(int(tokens[1]))
        except (ValueError, FieldError) as exc:
            raise FormatError(f"line {lineno}: bad field: {exc}") from None
        return True
    if head == "primes":
        try:
            primes = tuple(int(t) for t in tokens[1:])
        except ValueError:
            raise FormatError(f"line {lineno}: non-integer prime") from None
        if primes != tuple(tower.primes):
            raise FormatError(f"line {lineno}: file primes {primes} do not match the tower {tuple(tower.primes)}")
        return True
    return False


def _element(tower, token, lineno):
    try:
        return from_hex(tower, token)
    except (DecodeError, ValueError) as exc:
        raise FormatError(f"line {lineno}: bad element encoding {token!r}: {exc}") from None


def _scalar(fld, token, lineno):
    try:
        return fld(token)
    except (ValueError, ZeroDivisionError, FieldError) as exc:
        raise FormatError(f"line {lineno}: bad scalar {token!r}: {exc}") from None


def parse_algebra(text, tower):
    state = {"field": None}
    terms = []
    for lineno, tokens in _lines(text):
        if _header(tokens, lineno, tower, state):
            continue
        if state["field"] is None:
            raise FormatError(f"line {lineno}: 'field' must come before the terms")
        if len(tokens) != 2:
            raise FormatError(f"line {lineno}: expected '<hex> <scalar>'")
        terms.append((_element(tower, tokens[0], lineno), _scalar(state["field"], tokens[1], lineno)))
    if state["field"] is None:
        raise FormatError("empty algebra file: no 'field' line")
    if not terms:
        raise FormatError("algebra file has no terms")
    return AlgebraElement(state["field"], tower, terms)


def format_algebra(alpha):
    lines = [f"field {alpha.field.char}", "primes " + " ".join(map(str, alpha.tower.primes))]
    lines += [f"{to_hex(g)} {alpha.field.format(c)}" for g, c in alpha.items()]
    return "\n".join(lines) + "\n"


def parse_certificate(text, tower):
    state = {"field": None}
    target = None
    triples = []
    for lineno, tokens in _lines(text):
        if _header(tokens, lineno, tower, state):
            continue
        if tokens[0] == "target" and len(tokens) == 2:
            if target is not None:
                raise FormatError(f"line {lineno}: duplicate target")
            target = _element(tower, tokens[1], lineno)
        elif tokens[0] == "triple" and len(tokens) == 4:
            fld = state["field"] or Field(0)
            triples.append(
                (_scalar(fld, tokens[1], lineno), _element(tower, tokens[2], lineno), _element(tower, tokens[3], lineno))
            )
        else:
            raise FormatError(f"line {lineno}: expected 'target <hex>' or 'triple <scalar> <hex> <hex>'")
    if target is None:
        raise FormatError("certificate has no target")
    return Certificate(target, triples), state["field"]


def format_certificate(cert, fld, tower):
    lines = [f"field {fld.char}", "primes " + " ".join(map(str, tower.primes)), f"target {to_hex(cert.target)}"]
    lines += [f"triple {fld.format(lam)} {to_hex(g)} {to_hex(h)}" for lam, g, h in cert.triples]
    return "\n".join(lines) + "\n"


def _el(g):
    return "-" if g is None else f"{to_hex(g)}  {format_element(g)}"


def format_trace(trace):
    """All trace fields in readable text (timings excluded, for reproducibility)."""
    out = [
        f"t = {trace.t}",
        f"u = {trace.u}",
        f"v = {trace.v}",
        f"q = {trace.q}",
        f"char K = {trace.char}",
        f"translation s0 = {_el(trace.translation)}",
        f"support size n + 1 = {len(trace.support)}",
    ]
    for i, (g, k) in enumerate(zip(trace.support, trace.k)):
        out.append(f"  x_{i}^-1 = {_el(g)}   k_{i} = {k}")
    out.append(f"y = {_el(trace.y)}")
    for i, (y, z) in enumerate(zip(trace.y_list, trace.z_list)):
        out.append(f"  y_{i} = {_el(y)}")
        out.append(f"  z_{i} = {_el(z)}")
    out.append("conjugates y_i^{x_j} -> orbit factor")
    for (i, j), reps in trace.conjugate_factors:
        out.append(f"  ({i},{j}) -> {' '.join(r.hex() for r in reps)}")
    out.append("beta_s support sizes: " + ", ".join(f"s={s}:{n}" for s, n in trace.beta_supports))
    out.append(f"beta_0 sign = {trace.beta0_sign:+d}")
    if trace.alpha0 is not None:
        out.append(f"alpha_0 ({len(trace.alpha0)} terms)")
        for g, c in trace.alpha0.items():
            out.append(f"  {c} * {_el(g)}")
    out.append(f"|A| = {len(trace.A)}")
    for i, (a, li) in enumerate(zip(trace.A, trace.l)):
        out.append(f"  a_{i} = {_el(a)}   l_{i} = {li}")
    out.append(f"b = {_el(trace.b)}")
    for i, b in enumerate(trace.b_list):
        out.append(f"  b_{i} = {_el(b)}")
    out.append(f"|B| = {trace.B_order}")
    out.append("|C_B(a_i)| = " + " ".join(map(str, trace.centralizer_orders)))
    out.append(f"z = {_el(trace.z)}")
    out.append(f"scale (l_0 |B|)^-1 = {trace.scale}")
    out.append(f"path = {trace.path}")
    out.append(f"direct beta = analytic beta: {trace.direct_equals_analytic}")
    out.append(f"(z - 1) beta = l_0 |B| (z - 1): {trace.final_identity}")
    out.append(f"certificate triples = {trace.certificate_size}")
    for note in trace.notes:
        out.append(f"note: {note}")
    return "\n".join(out) + "\n"


def read_text(path):
    return Path(path).read_text()


def write_text(path, text):
    Path(path).write_text(text)
