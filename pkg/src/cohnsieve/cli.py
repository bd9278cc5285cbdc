"""Command-line front end.

Reports go to stdout, diagnostics and progress to stderr. Exit status is 0
on success, 1 on a usage error, 2 when an internal consistency check fails.
"""
from __future__ import annotations

import argparse
import json
import logging
import sys
from typing import List, Optional

from .arith import nu
from .errors import InvariantViolation, PreconditionError
from .lemmas import SCHEMA, endgame_contradiction, endgame_witness, induction_audit, k_lower_bound, small_prime_constraints
from .lte import lte_valuation
from .sieve import BRUTE, PRUNED_MODE, EquationFamily, brute_force_search, default_workers, pruned_search

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_INVARIANT = 2

PROGRESS_MIN_KMAX = 1000


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _positive(flag: str):
    def conv(s: str) -> int:
        try:
            v = int(s)
        except ValueError:
            raise argparse.ArgumentTypeError(f"{flag} expects an integer, got {s!r}") from None
        if v < 1:
            raise argparse.ArgumentTypeError(f"{flag} must be positive, got {v}")
        return v

    return conv


def _q_list(s: str) -> List[int]:
    try:
        return [int(t) for t in s.split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"--q expects comma-separated integers, got {s!r}") from None


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="cohnsieve", description="Valuations, LTE, divisibility constraints and searches for (a^k-1)(b^k-1) = x^n.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def out_flag(sp):
        sp.add_argument("--out", choices=("json", "table"), default="table")

    sp = sub.add_parser("nu", help="p-adic valuation of n")
    sp.add_argument("--p", type=int, required=True)
    sp.add_argument("--n", type=int, required=True)
    out_flag(sp)

    sp = sub.add_parser("lte", help="valuation of a^k - b^k by lifting the exponent")
    sp.add_argument("--a", type=int, required=True)
    sp.add_argument("--b", type=int, required=True)
    sp.add_argument("--k", type=_positive("--k"), required=True)
    sp.add_argument("--p", type=int, required=True)
    out_flag(sp)

    sp = sub.add_parser("constraints", help="minimum exponents of primes in k for a q-th power")
    sp.add_argument("--q", type=int, required=True)
    sp.add_argument("--full", action="store_true", help="include large-prime and lcm(p-1) exponents")
    out_flag(sp)

    sp = sub.add_parser("audit", help="replay the induction over primes <= q")
    sp.add_argument("--q", type=int, required=True)
    out_flag(sp)

    sp = sub.add_parser("endgame", help="check the final inequality at (k, q)")
    sp.add_argument("--k", type=_positive("--k"), required=True)
    sp.add_argument("--q", type=int, required=True)
    out_flag(sp)

    sp = sub.add_parser("search", help="search k <= kmax for (a^k-1)(b^k-1) = x^n")
    sp.add_argument("--a", type=int, default=2)
    sp.add_argument("--b", type=int, default=3)
    sp.add_argument("--kmax", type=_positive("--kmax"), required=True)
    sp.add_argument("--nmin", type=int, default=2)
    sp.add_argument("--nmax", type=int, default=None)
    sp.add_argument("--q", type=_q_list, default=None, help="odd primes for --mode pruned, e.g. 3,5,7")
    sp.add_argument("--mode", choices=(BRUTE, PRUNED_MODE), default=BRUTE)
    sp.add_argument("--workers", type=_positive("--workers"), default=None)
    sp.add_argument("--quiet", action="store_true", help="no progress on stderr")
    out_flag(sp)
    return p


def _emit(obj: dict, out) -> None:
    out.write(json.dumps(obj, sort_keys=True) + "\n")


def _validate_search(args) -> None:
    if args.a < 2 or args.b <= args.a:
        raise UsageError(f"--a/--b need 2 <= a < b, got a={args.a} b={args.b}")
    if args.mode == BRUTE:
        if args.nmin < 2:
            raise UsageError(f"--nmin must be at least 2, got {args.nmin}")
        if args.nmax is None:
            args.nmax = args.nmin
        if args.nmax < args.nmin:
            raise UsageError(f"--nmax must be at least --nmin, got {args.nmax}")
        if args.q is not None:
            raise UsageError("--q only applies to --mode pruned")
    else:
        if not args.q:
            raise UsageError("--mode pruned needs --q")
        if 2 in args.q:
            raise UsageError("--q must hold odd primes; squares need --mode brute")


def _run(args, out) -> int:
    cmd = args.command
    if cmd == "nu":
        fact = nu(args.p, args.n)
        if args.out == "json":
            _emit({"schema": SCHEMA, "prime": fact.prime, "n": args.n, "valuation": fact.valuation, "derivation": fact.derivation}, out)
        else:
            out.write(f"{fact.valuation}\n")
    elif cmd == "lte":
        fact = lte_valuation(args.a, args.b, args.k, args.p)
        if args.out == "json":
            _emit(
                {
                    "schema": SCHEMA,
                    "a": args.a,
                    "b": args.b,
                    "k": args.k,
                    "prime": fact.prime,
                    "valuation": fact.valuation,
                    "derivation": fact.derivation,
                },
                out,
            )
        else:
            out.write(f"{fact.valuation}\t{fact.derivation}\n")
    elif cmd == "constraints":
        cs = k_lower_bound(args.q) if args.full else small_prime_constraints(args.q)
        if args.out == "json":
            out.write(cs.to_json() + "\n")
        else:
            out.write(f"# q={cs.q}\n{'p':>6}  min_exponent\n")
            for p, e in sorted(cs.bounds.items()):
                out.write(f"{p:>6}  {e}\n")
    elif cmd == "audit":
        trail = induction_audit(args.q)
        if args.out == "json":
            out.write(trail.to_json() + "\n")
        else:
            out.write(f"# q={trail.q} passed={trail.passed}\n")
            for s in trail.steps:
                out.write(f"p={s.p} {s.claim} secured nu_p(k) >= {s.exponent}\n")
                for c in s.checks:
                    out.write(f"    {'ok  ' if c.holds else 'FAIL'} {c.label}: {c.lhs} {c.op} {c.rhs}\n")
    elif cmd == "endgame":
        w = endgame_witness(args.k, args.q)
        holds = endgame_contradiction(args.k, args.q)
        if args.out == "json":
            _emit({"schema": SCHEMA, "k": w.k, "q": w.q, "t_min": w.t_min, "contradiction": holds}, out)
        else:
            out.write(f"k={w.k} q={w.q} contradiction={'true' if holds else 'false'}\n")
    elif cmd == "search":
        _validate_search(args)
        workers = args.workers or default_workers()
        family = EquationFamily(args.a, args.b)
        if args.mode == BRUTE:
            report = brute_force_search(family, args.kmax, args.nmin, args.nmax, workers=workers)
        else:
            report = pruned_search(family, args.kmax, args.q, workers=workers)
        out.write(report.to_jsonl() if args.out == "json" else report.to_table())
    return EXIT_OK


def main(argv: Optional[List[str]] = None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as e:
        err.write(f"cohnsieve: usage error: {e}\n")
        return EXIT_USAGE

    logger = logging.getLogger("cohnsieve")
    handler = logging.StreamHandler(err)
    handler.setFormatter(logging.Formatter("cohnsieve: %(message)s"))
    logger.addHandler(handler)
    long_search = args.command == "search" and not args.quiet and args.kmax >= PROGRESS_MIN_KMAX
    logger.setLevel(logging.INFO if long_search else logging.WARNING)
    try:
        return _run(args, out)
    except (UsageError, PreconditionError) as e:
        err.write(f"cohnsieve: usage error: {e}\n")
        return EXIT_USAGE
    except InvariantViolation as e:
        err.write(f"cohnsieve: internal invariant failed: {e}\n")
        return EXIT_INVARIANT
    finally:
        logger.removeHandler(handler)


if __name__ == "__main__":
    sys.exit(main())
