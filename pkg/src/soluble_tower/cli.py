"""Command-line entry points.

Exit codes: 0 all checks pass, 1 verification failure, 2 configuration,
input or hypothesis error.  Every invocation ends with a JSON run manifest.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from dataclasses import asdict, dataclass, field

from . import sizes
from .algebra import AlgebraError, certificate_difference, verify_certificate
from .collapse import GUARD_A, GUARD_EXPANSION, CollapseError, finite_index_witness, ideal_collapse
from .config import ConfigError, TowerConfig, load_config
from .encoding import format_element
from .fields import FieldError
from .io import FormatError, format_certificate, format_trace, parse_algebra, parse_certificate, read_text, write_text
from .oracle.groups import ENUMERATION_GUARD, OracleError
from .tower import Tower, TowerError

EXIT_OK, EXIT_FAIL, EXIT_ERROR = 0, 1, 2
DEFAULT_PRIMES = (2, 3, 2, 3, 2)


@dataclass
class RunManifest:
    command: str
    config: str | None
    primes: list
    seed: int
    guards: dict
    outputs: dict = field(default_factory=dict)
    summary: dict = field(default_factory=dict)
    elapsed_seconds: float = 0.0
    exit_code: int = 0

    def render(self):
        return "--- manifest ---\n" + json.dumps(asdict(self), sort_keys=True) + "\n"


def _config(args):
    if args.config:
        return load_config(args.config)
    return TowerConfig(DEFAULT_PRIMES, rng_seed=args.seed or 0)


def _seed(args, config):
    return args.seed if args.seed is not None else config.rng_seed


def cmd_build(args, config, out):
    primes = tuple(config.primes[: config.max_level])
    lines = []
    for level, (p, dim) in enumerate(sizes.level_dimensions(primes), start=1):
        order = sizes.group_order(primes, level)
        flag = "enumerable" if order is not None and order <= ENUMERATION_GUARD else "not enumerable"
        size = str(order) if order is not None else sizes.order_formula(primes, level)
        lines.append(f"level {level}: |G_{level}| = {size} (p_{level} = {p}, {flag})")
        if level >= 2:
            if dim is None:
                lines.append(f"level {level}: dim(D_{level}) too large to write down")
            else:
                lines.append(f"level {level}: dim(D_{level}) = {dim} coordinates, |D_{level}| = {p}^{dim}")
    text = "\n".join(lines) + "\n"
    out.write(text)
    if args.out:
        write_text(args.out, text)
    return EXIT_OK, {"levels": len(primes)}


def _emit_report(report, args, out):
    out.write(report.render(timing=True))
    if args.out:
        write_text(args.out, report.render(timing=False))
    return (EXIT_OK if report.passed else EXIT_FAIL), report.summary()


def cmd_selftest(args, config, out, tower=None):
    from .selftest import run_selftest

    report = run_selftest(config, _seed(args, config), args.samples, tower=tower)
    return _emit_report(report, args, out)


def cmd_lemmas(args, config, out):
    from .oracle.instances import run_lemma_suite

    report = run_lemma_suite(_seed(args, config), args.count, stages=((2, 3), (3, 2)) if args.count > 0 else ())
    return _emit_report(report, args, out)


def cmd_collapse(args, config, out):
    tower = Tower(config)
    alpha = parse_algebra(read_text(args.algebra), tower)
    z, cert, trace = ideal_collapse(
        alpha, config, guard_a=args.guard_A, guard_expansion=args.guard_expansion, allow_analytic=args.allow_analytic
    )
    witness = finite_index_witness(z, trace.v)
    trace.notes.append(f"finite index witness: [z, w] = center_generator({trace.v})^{witness.exponent}")
    trace.notes.append(f"index bound |G_{trace.v}| = {witness.index_formula}")
    outputs = {}
    if args.trace:
        write_text(args.trace, format_trace(trace))
        outputs["trace"] = args.trace
    if cert is None:
        out.write("analytic path only: no expanded certificate written\n")
        out.write(f"z = {format_element(z)}\n")
        return EXIT_OK if trace.final_identity else EXIT_FAIL, {"path": trace.path, "verified": None}
    ok = verify_certificate(alpha, cert)
    text = format_certificate(cert, alpha.field, tower)
    if args.out:
        write_text(args.out, text)
        outputs["certificate"] = args.out
    out.write(f"t = {trace.t}, (u, v, q) = ({trace.u}, {trace.v}, {trace.q})\n")
    out.write(f"|A| = {len(trace.A)}, |B| = {trace.B_order}, path = {trace.path}\n")
    out.write(f"z = {format_element(z)} (order {tower.order(z)})\n")
    out.write(f"certificate: {len(cert)} triples, verified = {ok}\n")
    out.write(f"[z, w] = center_generator({trace.v})^{witness.exponent}; |G_{trace.v}| = {witness.index_formula}\n")
    summary = {"verified": ok, "triples": len(cert), "u": trace.u, "v": trace.v, "q": trace.q, "outputs": outputs}
    return (EXIT_OK if ok else EXIT_FAIL), summary


def cmd_verify(args, config, out):
    tower = Tower(config)
    alpha = parse_algebra(read_text(args.algebra), tower)
    cert, fld = parse_certificate(read_text(args.certificate), tower)
    if fld is not None and fld != alpha.field:
        out.write(f"FAIL field mismatch: certificate over {fld!r}, algebra over {alpha.field!r}\n")
        return EXIT_FAIL, {"verified": False}
    diff = certificate_difference(alpha, cert)
    if diff.is_zero():
        out.write(f"PASS certificate verified ({len(cert)} triples)\n")
        return EXIT_OK, {"verified": True}
    g, c = diff.items()[0]
    out.write(f"FAIL first differing term: coefficient {c} at {format_element(g)}\n")
    return EXIT_FAIL, {"verified": False, "differing_terms": len(diff)}


def build_parser():
    parser = argparse.ArgumentParser(prog="soluble-tower", description=__doc__.splitlines()[0])
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="tower config file (key = value lines)")
    common.add_argument("--seed", type=int, default=None, help="override the config seed")
    common.add_argument("--guard-A", dest="guard_A", type=int, default=GUARD_A)
    common.add_argument("--guard-expansion", type=int, default=GUARD_EXPANSION)
    common.add_argument("--out", help="output file (report or certificate)")
    common.add_argument("--trace", help="trace output file (collapse)")
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("build", parents=[common], help="per-level sizes and dimensions")
    p = sub.add_parser("selftest", parents=[common], help="property suites and stage crosschecks")
    p.add_argument("--samples", type=int, default=1000)
    p = sub.add_parser("lemmas", parents=[common], help="randomized lemma instances")
    p.add_argument("--count", type=int, default=50)
    p = sub.add_parser("collapse", parents=[common], help="ideal collapse with certificate")
    p.add_argument("algebra")
    p.add_argument("--allow-analytic", action="store_true", help="accept the analytic path beyond the expansion guard")
    p = sub.add_parser("verify", parents=[common], help="re-expand a certificate")
    p.add_argument("algebra")
    p.add_argument("certificate")
    return parser


COMMANDS = {
    "build": cmd_build,
    "selftest": cmd_selftest,
    "lemmas": cmd_lemmas,
    "collapse": cmd_collapse,
    "verify": cmd_verify,
}


def main(argv=None, out=None, err=None, tower=None):
    out = out or sys.stdout
    err = err or sys.stderr
    args = build_parser().parse_args(argv)
    clock = time.perf_counter()
    manifest = RunManifest(
        command=args.command,
        config=args.config,
        primes=[],
        seed=0,
        guards={"A": args.guard_A, "expansion": args.guard_expansion, "enumeration": ENUMERATION_GUARD},
        outputs={k: v for k, v in (("out", args.out), ("trace", args.trace)) if v},
    )
    try:
        config = _config(args)
        manifest.primes = list(config.primes[: config.max_level])
        manifest.seed = _seed(args, config)
        if args.command == "selftest":
            code, summary = cmd_selftest(args, config, out, tower=tower)
        else:
            code, summary = COMMANDS[args.command](args, config, out)
    except CollapseError as exc:
        err.write(f"error: {exc}\n")
        if exc.condition:
            err.write(f"violated condition: {exc.condition}\n")
        code, summary = EXIT_ERROR, {"error": str(exc), "condition": exc.condition}
    except (ConfigError, FormatError, AlgebraError, FieldError, TowerError, OracleError, OSError) as exc:
        err.write(f"error: {exc}\n")
        code, summary = EXIT_ERROR, {"error": str(exc)}
    manifest.summary = summary
    manifest.exit_code = code
    manifest.elapsed_seconds = round(time.perf_counter() - clock, 3)
    out.write(manifest.render())
    return code


if __name__ == "__main__":
    sys.exit(main())
