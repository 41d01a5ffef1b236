"""
Command-line front end: ``construct``, ``verify``, ``quantize``,
``spectrum`` and ``identities``.

Exit codes: 0 when every check passes, 1 on a verification failure,
2 on usage or precondition errors.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from typing import Sequence

from . import fock, quantize, setfactory, verify
from .polycore import Polynomial
from .setfactory import IntegrableSet, PreconditionError

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2

FAMILIES = ("exceptional", "simple", "general", "mixed", "rij", "trivial", "partition")
SUITES = ("involution", "independence", "identities", "closure", "rep", "kernel")


class UsageError(Exception):
    pass


def default_seed() -> int:
    raw = os.environ.get("RESONANZA_SEED")
    if raw is None:
        return 0
    try:
        return int(raw)
    except ValueError:
        raise UsageError(f"RESONANZA_SEED={raw!r} is not an integer")


def int_list(s: str) -> list[int]:
    try:
        return [int(x) for x in s.replace(" ", "").split(",") if x != ""]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {s!r}")


def vector_list(s: str) -> list[list[int]]:
    """``"1,2;1,0"`` -> ``[[1, 2], [1, 0]]``."""
    return [int_list(part) for part in s.split(";") if part.strip()]


# ---------------------------------------------------------------------------
# I/O helpers


def _write(text: str, path: str | None):
    if path in (None, "-"):
        sys.stdout.write(text if text.endswith("\n") else text + "\n")
    else:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text if text.endswith("\n") else text + "\n")


def _read_json(path: str):
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read {path}: {exc}")


def load_set(path: str) -> IntegrableSet:
    return IntegrableSet.from_dict(_read_json(path))


# ---------------------------------------------------------------------------
# construct


def build_from_args(a) -> IntegrableSet:
    fam = a.family
    l = a.freq
    if fam == "exceptional":
        if l is not None and tuple(setfactory.normalize_frequencies(l)) != (1, 1, 2):
            raise PreconditionError("the exceptional set requires l = (1, 1, 2)")
        return setfactory.build_exceptional_set()
    if l is None:
        raise UsageError("--freq is required")
    if fam == "simple":
        if not a.d or len(a.d) != 2:
            raise UsageError("--d d1,d2 is required for the simple family")
        return setfactory.build_simple_set(l, *a.d)
    if fam == "trivial":
        return setfactory.build_trivial_set(l)
    if fam == "rij":
        return setfactory.build_rij_set(l)
    if fam in ("general", "mixed"):
        kw = dict(r_vectors=a.r, m_vectors=a.m, k=a.k, bound=a.bound)
        if fam == "mixed":
            kw.update(variant="mixed", k_prime=a.kprime, h=a.h)
        return setfactory.build_general_set(l, **kw)
    if fam == "partition":
        part = setfactory.GroupPartition.from_frequencies(l, a.sizes)
        if a.r is None or a.z is None or a.kprime is None:
            raise UsageError("partition family needs --r, --z and --kprime (and --m)")
        return setfactory.build_partition_set(part, a.r, a.m or [], a.z, a.kprime,
                                              variant=a.variant, h=a.h)
    raise UsageError(f"unknown family {fam!r}")


def cmd_construct(a) -> int:
    S = build_from_args(a)
    _write(S.to_json(indent=a.indent), a.output)
    return EXIT_OK


# ---------------------------------------------------------------------------
# verify / identities


def cmd_verify(a) -> int:
    suites = a.suite or ["involution", "independence"]
    S = load_set(a.set) if a.set else None
    reports = []
    for suite in suites:
        if suite in ("involution", "independence", "closure") and S is None:
            raise UsageError(f"suite {suite!r} needs a set file")
        if suite == "involution":
            reports.append(verify.check_involution(S, a.seed))
        elif suite == "independence":
            reports.append(verify.check_independence(S, a.trials, a.seed))
        elif suite == "closure":
            reports.append(verify.check_closure(S.polys, S.names, a.degree_cap,
                                                subject=S.name, seed=a.seed))
        elif suite == "identities":
            reports.append(verify.check_identities(a.names, a.seed))
        elif suite == "rep":
            qs = a.q or [1, 2, 3, 4]
            for q in qs:
                rep = setfactory.build_rep_matrices(q, a.p)
                reports.append(verify.check_representation(rep, a.seed))
        elif suite == "kernel":
            l = a.freq or (list(S.l) if S else None)
            if l is None:
                raise UsageError("kernel suite needs --freq or a set file")
            constraints = (S.central if S else
                           [setfactory.build_J_r(len(l), setfactory.normalize_frequencies(l))])
            d = a.degree if a.degree is not None else 2
            K = verify.involution_kernel(constraints, l, d)
            listing = {"dimension": len(K), "basis_names": list(K.basis_names),
                       "vectors": [list(v) for v in K.vectors],
                       "polys": [p.to_dict() for p in K.polys]}
            if a.kernel_output:
                _write(json.dumps(listing, indent=a.indent, sort_keys=True), a.kernel_output)
            rep = verify.VerificationReport("kernel", a.seed)
            rep.checks.append(verify.Check(f"kernel:dimension(d={d})", verify.PASS, None, len(K)))
            for i, p in enumerate(K.polys):
                # each basis element must commute with every constraint
                brs = [verify.poisson_bracket(F, p) for F in constraints]
                res = next((b for b in brs if b), Polynomial.zero(p.n))
                rep.checks.append(verify.residual_check(f"kernel:element{i + 1}", res))
            reports.append(rep)
    subject = S.name if S else "+".join(suites)
    merged = verify.merge_reports(subject, reports, a.seed)
    _write(merged.to_json(indent=a.indent), a.output)
    if not a.quiet:
        print(merged.summary(), file=sys.stderr)
    return EXIT_OK if merged.passed else EXIT_FAIL


def cmd_identities(a) -> int:
    rep = verify.check_identities(a.names, a.seed)
    _write(rep.to_json(indent=a.indent), a.output)
    if not a.quiet:
        print(rep.summary(), file=sys.stderr)
    return EXIT_OK if rep.passed else EXIT_FAIL


# ---------------------------------------------------------------------------
# quantize / spectrum


def cmd_quantize(a) -> int:
    S = load_set(a.set)
    if a.correct == "exceptional":
        if S.metadata.get("family") != "exceptional":
            raise PreconditionError("--correct exceptional applies only to the exceptional set")
        ops = quantize.quantize_exceptional()
    else:
        ops = quantize.quantize_set(S)
    audit = quantize.commutator_audit(ops, S.k, subject=S.name, seed=a.seed)
    doc = {
        "subject": S.name, "l": list(S.l), "k": S.k,
        "correction": a.correct,
        "operators": [{"name": nm, "op": op.to_dict()} for nm, op in ops],
        "audit": audit.to_dict(),
    }
    _write(json.dumps(doc, indent=a.indent, sort_keys=True), a.output)
    if not a.quiet:
        print(audit.summary(), file=sys.stderr)
    return EXIT_OK if audit.passed else EXIT_FAIL


def cmd_spectrum(a) -> int:
    doc = _read_json(a.ops)
    try:
        l = [int(x) for x in doc["l"]]
        k = int(doc["k"])
        ops = [(o["name"], quantize.OperatorPolynomial.from_dict(o["op"]))
               for o in doc["operators"]]
    except (KeyError, TypeError, ValueError) as exc:
        raise UsageError(f"malformed operator file: {exc}")
    central = ops[:k]
    n = len(l)
    if a.cap is not None:
        basis = fock.build_basis(n, a.cap)
    else:
        if a.cutoff is None:
            raise UsageError("give --cutoff (weighted) or --cap (per mode)")
        if any(x <= 0 for x in l):
            raise PreconditionError("weighted cutoff needs positive frequencies; use --cap")
        basis = fock.build_basis(n, weights=l, cutoff=a.cutoff)
    lat = fock.joint_spectrum(central, basis, l, seed=a.seed, threads=a.threads)
    _write(lat.to_csv(), a.output)
    if not a.quiet:
        print(f"{len(lat.points)} lattice points, total multiplicity "
              f"{lat.total_multiplicity()} / {len(basis)} states", file=sys.stderr)
    return EXIT_OK


# ---------------------------------------------------------------------------
# parser


def make_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON file of option defaults (flags win)")
    common.add_argument("--seed", type=int, default=None,
                        help="random seed (default: $RESONANZA_SEED or 0)")
    common.add_argument("--threads", type=int, default=1)
    common.add_argument("-o", "--output", default=None, help="output path (default stdout)")
    common.add_argument("--indent", type=int, default=None)
    common.add_argument("-q", "--quiet", action="store_true")

    p = argparse.ArgumentParser(prog="resonanza", description=__doc__.strip().splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("construct", parents=[common], help="build an integrable set")
    c.add_argument("--freq", type=int_list)
    c.add_argument("--family", choices=FAMILIES, required=False, default=None)
    c.add_argument("--d", type=int_list, help="d1,d2 for the simple family")
    c.add_argument("--k", type=int, help="central count (general family)")
    c.add_argument("--r", type=vector_list, help='r-vectors, e.g. "1,2;1,0"')
    c.add_argument("--m", type=vector_list, help='m-vectors, e.g. "2,-1"')
    c.add_argument("--kprime", type=int)
    c.add_argument("--h", type=int)
    c.add_argument("--sizes", type=int_list, help="group sizes for the partition family")
    c.add_argument("--z", type=int_list, help="central count per group")
    c.add_argument("--variant", choices=("fset", "fset2"), default="fset")
    c.add_argument("--bound", type=int, default=1, help="entry bound for vector search")
    c.set_defaults(func=cmd_construct)

    v = sub.add_parser("verify", parents=[common], help="verify a set or identities")
    v.add_argument("set", nargs="?")
    v.add_argument("--suite", action="append", choices=SUITES)
    v.add_argument("--names", nargs="*", default=None, help="identity names")
    v.add_argument("--freq", type=int_list)
    v.add_argument("--degree", type=int, default=None)
    v.add_argument("--degree-cap", type=int, default=None)
    v.add_argument("--trials", type=int, default=5)
    v.add_argument("--q", type=int_list)
    v.add_argument("--p", type=int, default=1)
    v.add_argument("--kernel-output", default=None)
    v.set_defaults(func=cmd_verify)

    q = sub.add_parser("quantize", parents=[common], help="Weyl-quantize a set")
    q.add_argument("set")
    q.add_argument("--correct", choices=("exceptional",), default=None)
    q.set_defaults(func=cmd_quantize)

    s = sub.add_parser("spectrum", parents=[common], help="joint spectrum of central operators")
    s.add_argument("ops")
    s.add_argument("--cutoff", type=int)
    s.add_argument("--cap", type=int)
    s.set_defaults(func=cmd_spectrum)

    i = sub.add_parser("identities", parents=[common], help="run the identity registry")
    i.add_argument("--names", nargs="*", default=None)
    i.set_defaults(func=cmd_identities)
    return p


def _apply_config(parser, args, argv):
    if not args.config:
        return args
    cfg = _read_json(args.config)
    if not isinstance(cfg, dict):
        raise UsageError("config file must hold a JSON object")
    known = set(vars(args)) - {"func", "command", "config"}
    unknown = sorted(set(cfg) - known)
    if unknown:
        raise UsageError(f"unknown config keys {unknown}")
    # re-parse with config values as defaults so explicit flags win
    sub = parser._subparsers._group_actions[0].choices[args.command]
    sub.set_defaults(**cfg)
    return parser.parse_args(argv)


def main(argv: Sequence[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = make_parser()
    try:
        args = parser.parse_args(argv)
        args = _apply_config(parser, args, argv)
        if args.seed is None:
            args.seed = default_seed()
        if args.command == "construct" and args.family is None:
            raise UsageError("--family is required")
        return args.func(args)
    except SystemExit as exc:
        return int(exc.code) if isinstance(exc.code, int) else EXIT_USAGE
    except (UsageError, PreconditionError, ValueError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


__all__ = ["main", "make_parser"]
