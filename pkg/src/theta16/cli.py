"""``theta`` command line.  Reports are TSV on stdout; timing goes to stderr."""

from __future__ import annotations

import argparse
import sys
import time
from fractions import Fraction

from . import kernels
from . import thetaengine as te
from .exact import fmt

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_INTEGRITY = 0, 1, 2, 3


class UsageError(Exception):
    pass


def _rational_rows(text: str):
    try:
        rows = [[Fraction(x.strip()) for x in r.split(",")] for r in text.strip().split(";")]
    except (ValueError, ZeroDivisionError) as exc:
        raise UsageError(f"cannot parse matrix {text!r}: {exc}") from None
    if any(len(r) != len(rows) for r in rows):
        raise UsageError(f"matrix {text!r} is not square")
    return rows


def _index(text: str):
    from .qforms import FourierIndex
    try:
        return FourierIndex.parse(text)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _out(*cols):
    print("\t".join(str(c) for c in cols))


# --- subcommands -----------------------------------------------------------------

def cmd_lattices(args):
    from .lattices import NAMES, catalog, shell_count
    _out("id", "name", "parity", "det", "norm1", "norm2")
    for lat in catalog():
        _out(lat.id, NAMES[lat.id], lat.parity, lat.det, shell_count(lat, 1), shell_count(lat, 2))
    return EXIT_OK


def cmd_rep(args):
    N = _index(args.gram)
    _out(te.rep_number(args.lattice, N))
    return EXIT_OK


def cmd_expand(args):
    e = te.q_expansion(args.lattice, args.genus, args.max_trace, lazy=False)
    _out("index", "coefficient")
    for N in e.indices():
        _out(str(N) or "()", e[N])
    return EXIT_OK


def cmd_harmonic(args):
    from .harmonic import HarmonicSpec, harmonic_table
    spec = HarmonicSpec(args.base, args.genus)
    _out("index", "coefficient")
    for c in harmonic_table(spec, args.max_trace):
        _out(str(c.index), fmt(c.value.re))
    return EXIT_OK


def cmd_dyadic(args):
    from .qforms import dyadic_trace
    T = _rational_rows(args.gram)
    try:
        cert = dyadic_trace(T)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    if not cert.check(T):
        raise te.IntegrityError("dyadic certificate failed its own check")
    _out("w", fmt(cert.value))
    for a, v in cert.representation:
        _out("term", fmt(a), ",".join(map(str, v)))
    _out("dual", ";".join(",".join(fmt(x) for x in r) for r in cert.dual_form))
    _out("dual_minimum", fmt(cert.dual_minimum))
    return EXIT_OK


def cmd_minimum(args):
    from .qforms import minimum
    T = _rational_rows(args.gram)
    try:
        _out(fmt(minimum(T)))
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    return EXIT_OK


def cmd_symplectic(args):
    from .symplectic import double_coset_orbits, even_characteristics, trace_constants, verify
    if args.verify:
        ok = True
        for label, good, lhs, rhs in verify(args.genus):
            ok &= good
            _out(label, "PASS" if good else "FAIL", lhs, rhs)
        return EXIT_OK if ok else EXIT_FAIL
    _out("genus", args.genus)
    _out("even", len(even_characteristics(args.genus)))
    _out("delta_orbits", ",".join(map(str, double_coset_orbits(args.genus))))
    _out("trace_constants", "%d,%d" % trace_constants(args.genus))
    return EXIT_OK


def cmd_xi(args):
    from . import relations as rel
    for j in range(6):
        _out(f"Xi^{j}", ",".join(map(str, rel.xi_power(j))))
    for j, v in enumerate(rel.xi_dual()):
        _out(f"Xi_{j}", ",".join(fmt(x) for x in v))
    _out("c0", fmt(rel.c0()))
    _out("xi_constant", fmt(rel.xi_constant()))
    s = rel.genus1_xi0_series(args.bound)
    _out("eta12_theta0^4", ",".join(map(str, s.coeffs)))
    return EXIT_OK


def cmd_verify(args):
    from .suites import run_suite
    rep = run_suite(args.suite, genus=args.genus, max_trace=args.max_trace)
    sys.stdout.write(rep.tsv())
    print(f"{args.suite}: {rep.elapsed:.2f}s", file=sys.stderr)
    return EXIT_OK if rep.ok else EXIT_FAIL


def cmd_cache(args):
    cache = te.default_cache()
    if args.action == "export":
        n = cache.export(args.file)
        print(f"exported {n} records", file=sys.stderr)
    else:
        n = cache.import_file(args.file)
        cache.flush()
        print(f"imported {n} records", file=sys.stderr)
    return EXIT_OK


# --- parser --------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    from .lattices import LATTICE_IDS
    from .suites import SUITES
    p = argparse.ArgumentParser(prog="theta", description="Theta series of the rank-16 self-dual lattices.")
    p.add_argument("--threads", type=int, default=None, help="worker threads for counting")
    p.add_argument("--backend", choices=["cython", "python"], default=None, help="kernel backend")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("lattices", help="catalog of the eight lattices")
    s.add_argument("action", choices=["list"])
    s.set_defaults(fn=cmd_lattices)

    s = sub.add_parser("rep", help="one representation number")
    s.add_argument("--lattice", required=True, choices=LATTICE_IDS)
    s.add_argument("--gram", required=True, help='rows separated by ";", entries by ","')
    s.set_defaults(fn=cmd_rep)

    s = sub.add_parser("expand", help="q-expansion up to a trace bound")
    s.add_argument("--lattice", required=True, choices=LATTICE_IDS)
    s.add_argument("--genus", type=int, required=True)
    s.add_argument("--max-trace", type=int, required=True)
    s.set_defaults(fn=cmd_expand)

    s = sub.add_parser("harmonic", help="coefficients of the P4-weighted theta series")
    s.add_argument("--base", choices=["I8", "E8"], required=True)
    s.add_argument("--genus", type=int, required=True)
    s.add_argument("--max-trace", type=int, required=True)
    s.set_defaults(fn=cmd_harmonic)

    s = sub.add_parser("dyadic", help="certified dyadic trace of a rational form")
    s.add_argument("--gram", required=True)
    s.set_defaults(fn=cmd_dyadic)

    s = sub.add_parser("minimum", help="minimum of a positive definite form")
    s.add_argument("--gram", required=True)
    s.set_defaults(fn=cmd_minimum)

    s = sub.add_parser("symplectic", help="characteristic counts and orbits")
    s.add_argument("--genus", type=int, required=True)
    s.add_argument("--verify", action="store_true")
    s.set_defaults(fn=cmd_symplectic)

    s = sub.add_parser("xi", help="Xi vectors, dual basis and constants")
    s.add_argument("--bound", type=int, default=8)
    s.set_defaults(fn=cmd_xi)

    s = sub.add_parser("verify", help="run a verification suite")
    s.add_argument("suite", choices=sorted(SUITES))
    s.add_argument("--genus", type=int, default=None)
    s.add_argument("--max-trace", type=int, default=None)
    s.set_defaults(fn=cmd_verify)

    s = sub.add_parser("cache", help="export or import the representation-number cache")
    s.add_argument("action", choices=["export", "import"])
    s.add_argument("--file", required=True)
    s.set_defaults(fn=cmd_cache)
    return p


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_USAGE
    t = time.perf_counter()
    try:
        if args.threads is not None:
            te.set_threads(args.threads)
        if args.backend is not None:
            kernels.backend(args.backend)  # fail early if unavailable
            kernels.active = kernels.backend(args.backend)
        code = args.fn(args)
        te.default_cache().flush()
    except UsageError as exc:
        print(f"theta: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except te.IntegrityError as exc:
        print(f"theta: integrity error: {exc}", file=sys.stderr)
        return EXIT_INTEGRITY
    except ValueError as exc:
        print(f"theta: {exc}", file=sys.stderr)
        return EXIT_USAGE
    print(f"elapsed\t{time.perf_counter() - t:.3f}s", file=sys.stderr)
    return code


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
