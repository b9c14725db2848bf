"""``waring`` command line.

Results go to stdout as compact JSON (tables as JSON lines, or CSV with
``--csv``).  Exit status: 0 on success, 2 on a domain error (the error
class name is reported on stderr), 1 on a usage error.
"""

import argparse
import dataclasses
import json
import os
import sys
import tempfile

from . import __version__
from ._ntheory import prime_power
from .decomposition import MatrixAlgebra, verify_decomposition
from .errors import WaringError
from .field import build_field, parse_element
from .gamma import decompose_field, gamma, gamma_max, uncoverable_fields
from .matrix import DEFAULT_SEED, decompose_matrix, format_matrix, parse_matrix
from .rings import decompose_ring_element, decompose_via_zalpha, parse_ring
from .scan import ScanJob, parse_filter, run_scan
from .spectral import (
    sarkozy_find_pair,
    sarkozy_min_size,
    sarkozy_threshold,
    spectrum,
    spectrum_bruteforce,
    verify_appendix_lemmas,
)
from .suites import run_suite


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _dump(obj):
    return json.dumps(obj, separators=(",", ":"))


def _emit(args, text):
    if not text.endswith("\n"):
        text += "\n"
    if getattr(args, "out", None):
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _bound(text):
    if text in (None, "auto"):
        return "auto"
    try:
        return int(text)
    except ValueError:
        raise UsageError(f"--bound expects 'auto' or an integer, got {text!r}") from None


def _field(q):
    p, s = prime_power(q)
    return build_field(p, s)


def _need(args, *names):
    for n in names:
        if getattr(args, n) is None:
            raise UsageError(f"{args.command}: missing required flag --{n.replace('_', '-')}")


# --- subcommands ------------------------------------------------------------


def cmd_gamma(args):
    _need(args, "k", "q")
    res = gamma(args.k, args.q)
    _emit(args, _dump(res.to_dict(closure=args.closure)))


def cmd_table(args):
    k_min = args.k if args.k is not None else (2 if args.kmax is not None else None)
    if k_min is None:
        raise UsageError("table: give --k or --kmax")
    k_max = args.kmax if args.kmax is not None else k_min
    bound = args.qmax if args.qmax is not None else _bound(args.bound)
    job = ScanJob(
        k_min,
        k_max,
        bound,
        parse_filter(args.filter),
        fmt="csv" if args.csv else "jsonl",
        jobs=args.jobs,
        resume=args.resume,
    )
    if args.out:
        run_scan(dataclasses.replace(job, out=args.out))
        return
    if args.resume:
        raise UsageError("table: --resume needs --out")
    fd, tmp = tempfile.mkstemp(suffix=".scan")
    os.close(fd)
    try:
        run_scan(dataclasses.replace(job, out=tmp))
        with open(tmp) as fh:
            sys.stdout.write(fh.read())
    finally:
        os.unlink(tmp)


def cmd_uncoverable(args):
    _need(args, "k")
    bound = _bound(args.bound)
    fields = uncoverable_fields(args.k, None if bound == "auto" else bound)
    _emit(args, _dump({"k": args.k, "fields": fields}))


def cmd_gamma_max(args):
    _need(args, "k")
    _emit(args, _dump({"k": args.k, "gamma_max": gamma_max(args.k)}))


def cmd_spectral(args):
    _need(args, "k", "q")
    ctx = _field(args.q)
    report = spectrum(ctx, args.k)
    out = report.to_json()
    if args.brute:
        brute = spectrum_bruteforce(ctx, args.k)
        out["bruteforce_max_mismatch"] = brute.max_mismatch(report)
    _emit(args, _dump(out))


def cmd_sarkozy(args):
    _need(args, "k", "q")
    out = {
        "k": args.k,
        "q": args.q,
        "threshold": sarkozy_threshold(args.k, args.q),
        "min_size": sarkozy_min_size(args.k, args.q),
    }
    if args.set:
        ctx = _field(args.q)
        E = [parse_element(ctx, t) for t in args.set.split(",") if t]
        pair = sarkozy_find_pair(ctx, args.k, E)
        out["pair"] = list(pair) if pair else None
    _emit(args, _dump(out))


def cmd_lemmas(args):
    probe = [int(t) for t in args.probe.split(",")] if args.probe else ()
    rep = verify_appendix_lemmas(args.xmax, args.ywindow, probe)
    out = {
        "ok": rep.ok,
        "checked": rep.checked,
        "violations": {k: [list(v) for v in vs] for k, vs in rep.violations.items()},
    }
    if probe:
        out["exploration"] = {
            str(m): {"checked": e["checked"], "failures": [list(v) for v in e["failures"]]}
            for m, e in rep.exploration.items()
        }
    _emit(args, _dump(out))


def _checked(dec):
    check = verify_decomposition(dec)
    if not check:
        raise WaringError(f"decomposition failed verification: {check.diff}")
    return dec.to_json()


def cmd_decompose_field(args):
    _need(args, "k", "q", "target")
    ctx = _field(args.q)
    dec = decompose_field(ctx, args.k, parse_element(ctx, args.target), args.m)
    _emit(args, _dump(_checked(dec)))


def cmd_decompose_matrix(args):
    _need(args, "k", "q", "matrix")
    ctx = _field(args.q)
    A = parse_matrix(ctx, args.matrix)
    if args.zalpha:
        dec = decompose_via_zalpha(MatrixAlgebra(ctx, A.shape[0]), A, args.k, seed=args.seed)
    else:
        dec = decompose_matrix(ctx, A, args.k, row=args.row, seed=args.seed)
    out = _checked(dec)
    out["target_text"] = format_matrix(A)
    _emit(args, _dump(out))


def cmd_decompose_ring(args):
    _need(args, "k", "ring", "target")
    ring = parse_ring(args.ring)
    dec = decompose_ring_element(ring, ring.parse(args.target), args.k)
    _emit(args, _dump(_checked(dec)))


def cmd_verify(args):
    _need(args, "suite", "kmax")
    name, results = run_suite(args.suite, args.kmax, args.k)
    ok = all(r.passed for r in results)
    _emit(args, _dump({"suite": name, "pass": ok, "results": [r.to_dict() for r in results]}))
    if not ok:
        sys.stderr.write(f"VerificationFailed: suite {name} has mismatches\n")
        return 2
    return 0


COMMANDS = {
    "gamma": cmd_gamma,
    "table": cmd_table,
    "uncoverable": cmd_uncoverable,
    "gamma-max": cmd_gamma_max,
    "spectral": cmd_spectral,
    "sarkozy": cmd_sarkozy,
    "lemmas": cmd_lemmas,
    "decompose-field": cmd_decompose_field,
    "decompose-matrix": cmd_decompose_matrix,
    "decompose-ring": cmd_decompose_ring,
    "verify": cmd_verify,
}


def build_parser():
    parser = _Parser(prog="waring", description="Waring numbers of finite fields, matrix rings and finite rings.")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)

    def add(name, help_text, *flags):
        p = sub.add_parser(name, help=help_text)
        for flag in flags:
            flag(p)
        p.add_argument("--out", metavar="PATH", help="write the result to PATH instead of stdout")
        return p

    k = lambda p: p.add_argument("--k", type=int)
    q = lambda p: p.add_argument("--q", type=int)
    seed = lambda p: p.add_argument("--seed", type=int, default=DEFAULT_SEED)

    g = add("gamma", "gamma(k, q) for one field", k, q)
    g.add_argument("--closure", action="store_true", help="include the closure sizes")

    t = add("table", "scan gamma(k, q) over prime powers", k)
    t.add_argument("--kmax", type=int)
    t.add_argument("--qmax", type=int)
    t.add_argument("--bound", default="auto", help="auto (8k^4) or an integer q bound")
    t.add_argument("--filter", help="gamma=A..B or uncoverable")
    t.add_argument("--csv", action="store_true")
    t.add_argument("--jobs", type=int, default=1)
    t.add_argument("--resume", metavar="PATH", help="checkpoint file")

    u = add("uncoverable", "uncoverable fields for k", k)
    u.add_argument("--bound", default="auto")

    add("gamma-max", "largest gamma(k, q) over coverable fields", k)

    s = add("spectral", "eigenvalues of the power-residue Cayley digraph", k, q)
    s.add_argument("--brute", action="store_true", help="cross-check against a dense eigen-solve")

    sk = add("sarkozy", "difference-set threshold", k, q)
    sk.add_argument("--set", help="comma-separated elements to search for a k-th power difference")

    lm = add("lemmas", "check the two polynomial inequalities")
    lm.add_argument("--xmax", type=int, default=10)
    lm.add_argument("--ywindow", type=int, default=200)
    lm.add_argument("--probe", help="comma-separated m values for the general form (exploratory)")

    df = add("decompose-field", "write a field element as a sum of k-th powers", k, q)
    df.add_argument("--target")
    df.add_argument("--m", type=int, help="pad the witness list to m entries")

    dm = add("decompose-matrix", "write a matrix as a sum of k-th powers of polynomials in it", k, q, seed)
    dm.add_argument("--matrix", help="rows split by ';', entries by ','")
    dm.add_argument("--row", type=int, help="index of the matrix-table row to enforce")
    dm.add_argument("--zalpha", action="store_true", help="work in the subring generated over the prime field")

    dr = add("decompose-ring", "write a ring element as a sum of k-th powers", k)
    dr.add_argument("--ring", help="zn:N, polyq:p=P,s=S,f=POLY,e=E or prod:R1|R2")
    dr.add_argument("--target")

    v = add("verify", "compare the engine with the reference tables", k)
    v.add_argument("--suite")
    v.add_argument("--kmax", type=int)
    return parser


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if not args.command:
            raise UsageError("waring: a subcommand is required")
        rc = COMMANDS[args.command](args)
        return rc or 0
    except UsageError as exc:
        sys.stderr.write(f"usage error: {exc}\n")
        return 1
    except (WaringError, ValueError, ArithmeticError) as exc:
        sys.stderr.write(f"{type(exc).__name__}: {exc}\n")
        return 2


if __name__ == "__main__":
    sys.exit(main())
