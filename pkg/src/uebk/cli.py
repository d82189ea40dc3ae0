"""Command-line front end.

Every subcommand reads and writes basis files (``-`` means stdin/stdout), so
commands chain with pipes::

    uebk example --name eq6 | uebk lift --dims 2 | uebk verify --mode cert

Exit codes: 0 success or verification passed, 1 invalid input, 2 a
verification check failed, 3 verification indeterminate, 64 bad usage.
"""

import argparse
import sys

from . import constructors as C
from . import fileio
from . import lifting
from . import states as st
from . import verifier
from .errors import UebkError

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_USAGE = 64


class UsageError(Exception):
    def __init__(self, message, reported=False):
        super().__init__(message)
        self.reported = reported


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise UsageError(message, reported=True)


def _dims(text):
    try:
        dims = [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")
    if not dims:
        raise argparse.ArgumentTypeError("expected at least one dimension")
    return dims


def build_parser():
    p = _Parser(prog="uebk", description="Construct, lift and verify unextendible entangled bases.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    c = sub.add_parser("construct", help="bipartite UEBk from a zero-pattern decomposition")
    c.add_argument("--dims", type=_dims, required=True, help="D1,D2")
    c.add_argument("--k", type=int, required=True)
    c.add_argument("--variant", default=None, help="catalog variant, e.g. v1, v2, v3 or general")
    c.add_argument("--seed", type=int, default=None, help="draw random zero-free isometries")
    c.add_argument("--out", default="-")

    e = sub.add_parser("example", help="a named example basis")
    e.add_argument("--name", choices=sorted(C.EXAMPLES), required=True)
    e.add_argument("--out", default="-")

    s = sub.add_parser("suebk3", help="tripartite SUEBk")
    s.add_argument("--dims", type=_dims, required=True, help="D1,D2,D3")
    s.add_argument("--k", type=int, required=True)
    s.add_argument("--out", default="-")

    lf = sub.add_parser("lift", help="add parties with the cyclic lifting rule")
    lf.add_argument("--in", dest="infile", default="-")
    lf.add_argument("--dims", type=_dims, required=True, help="D[,D...] of the new parties")
    lf.add_argument("--seed", type=int, default=0, help="seed for Schmidt-form extraction")
    lf.add_argument("--out", default="-")

    v = sub.add_parser("verify", help="check orthonormality, Schmidt numbers and unextendibility")
    v.add_argument("--in", dest="infile", default="-")
    v.add_argument("--mode", choices=verifier.MODES, default="cert+search")
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--restarts", type=int, default=None)
    v.add_argument("--tol", type=float, default=verifier.SEARCH_TOL)
    v.add_argument("--prop2", action="store_true", help="also search the complement for Schmidt numbers > k")
    v.add_argument("--out", default=None, help="write the basis back with the report embedded")

    i = sub.add_parser("inspect", help="summarize a basis file")
    i.add_argument("--in", dest="infile", default="-")
    return p


def _read(path):
    if path == "-":
        return fileio.parse(sys.stdin.buffer.read())
    return fileio.read_basis(path)


def _write(path, b, report=None):
    data = fileio.serialize(b, report)
    if path == "-":
        sys.stdout.buffer.write(data)
        sys.stdout.buffer.flush()
    else:
        with open(path, "wb") as fh:
            fh.write(data)


def _member_summary(i, psi):
    out = st.schmidt_form(psi)
    if isinstance(out, st.SchmidtForm):
        lam = ", ".join(f"{x:.6f}" for x in sorted(out.coefficients, reverse=True))
        return f"  member {i}: Schmidt number {out.k}, lambda = [{lam}]"
    kind = "no Schmidt form" if isinstance(out, st.NotSchmidtForm) else "indeterminate"
    return f"  member {i}: {kind} ({out.reason})"


def run(args):
    if args.command == "construct":
        if len(args.dims) != 2:
            raise UsageError("construct needs --dims D1,D2")
        b = C.construct_bipartite_uebk(args.dims[0], args.dims[1], args.k, args.variant, args.seed)
        _write(args.out, b)
        return EXIT_OK
    if args.command == "example":
        _write(args.out, C.EXAMPLES[args.name]())
        return EXIT_OK
    if args.command == "suebk3":
        if len(args.dims) != 3:
            raise UsageError("suebk3 needs --dims D1,D2,D3")
        _write(args.out, C.suebk_tripartite(*args.dims, args.k))
        return EXIT_OK
    if args.command == "lift":
        b, _ = _read(args.infile)
        _write(args.out, lifting.lift_chain(b, args.dims, args.seed))
        return EXIT_OK
    if args.command == "verify":
        b, _ = _read(args.infile)
        report = verifier.verify(b, args.mode, args.seed, args.restarts, args.tol, args.prop2)
        print(report.render())
        if args.out:
            _write(args.out, b, report)
        return report.exit_code()
    if args.command == "inspect":
        b, summary = _read(args.infile)
        print(f"dims {list(b.dims)}, k = {b.k}, {b.n} members, special = {b.claimed_special}")
        print(f"provenance: {b.provenance.get('constructor', '(none)')}")
        for i, psi in enumerate(b.members):
            print(_member_summary(i, psi))
        if summary:
            print(f"embedded verification: {summary.get('detail')}")
        return EXIT_OK
    raise UsageError(f"unknown command {args.command}")


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return run(args)
    except UsageError as exc:
        if not exc.reported:
            parser.print_usage(sys.stderr)
            print(f"uebk: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (UebkError, OSError) as exc:
        print(f"uebk: error: {exc}", file=sys.stderr)
        return EXIT_INPUT
