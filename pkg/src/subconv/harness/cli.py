"""Command-line entry point.

Subcommands: suite, scan, exponent, voronoi, charsum, eigens.
"""

from __future__ import annotations

import argparse
import sys
from fractions import Fraction

from sympy import isprime

from .. import sums, voronoi
from ..characters import primitive_characters
from ..forms import cached_form
from .config import load_config
from .exponents import exponent_calculator
from .report import format_complex, format_real
from .scan import scan_to_csv, subconvexity_scan
from .suite import SUITE_ORDER, run_suite


def _parse_primes(spec: str) -> list[int]:
    """Comma list of primes, or lo-hi for every prime in the range."""
    if "-" in spec and "," not in spec:
        lo, hi = (int(s) for s in spec.split("-", 1))
        return [p for p in range(max(3, lo), hi + 1) if isprime(p)]
    primes = [int(s) for s in spec.split(",") if s.strip()]
    bad = [p for p in primes if not isprime(p) or p == 2]
    if bad:
        raise SystemExit(f"not odd primes: {bad}")
    return primes


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="subconv",
        description="Verification toolkit for twisted L-function identities",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_suite = sub.add_parser("suite", help="run the verification suite")
    p_suite.add_argument("--only", help=f"one of {', '.join(SUITE_ORDER)}")
    p_suite.add_argument("--out", help="CSV report path")
    p_suite.add_argument("--config", help="key=value config file")

    p_scan = sub.add_parser("scan", help="subconvexity scan over primes")
    p_scan.add_argument("--weights", default="12,16", help="KF,KG")
    p_scan.add_argument("--primes", default="11-97", help="list or lo-hi")
    p_scan.add_argument("--out", help="CSV output path")
    p_scan.add_argument("--n-grid", type=int, default=0)

    p_exp = sub.add_parser("exponent", help="exact exponent calculator")
    p_exp.add_argument("--theta", default="0", help="rational, e.g. 7/64")
    p_exp.add_argument(
        "--mode", default="paper", choices=("paper", "balanced", "h_theta")
    )

    p_vor = sub.add_parser("voronoi", help="summation identity check")
    p_vor.add_argument("--weight", type=int, default=12)
    p_vor.add_argument("--q", type=int, default=1)
    p_vor.add_argument("--a", type=int, default=0)
    p_vor.add_argument("--Y", type=float, default=50.0)

    p_cs = sub.add_parser("charsum", help="character sum, both evaluations")
    p_cs.add_argument("--p", type=int, required=True)
    p_cs.add_argument("--q", type=int, required=True)
    p_cs.add_argument("--m", type=int, required=True)
    p_cs.add_argument("--n", type=int, required=True)
    p_cs.add_argument("--convention", default="plus", choices=("plus", "minus"))
    p_cs.add_argument("--chi-index", type=int, default=1)

    p_eig = sub.add_parser("eigens", help="dump coefficient table as CSV")
    p_eig.add_argument("--weight", type=int, required=True)
    p_eig.add_argument("--nmax", type=int, required=True)
    p_eig.add_argument("--out", required=True)

    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)

    if args.command == "suite":
        cfg = load_config(
            args.config, overrides={"only": args.only, "out": args.out}
        )
        reports, status = run_suite(cfg)
        failed = [r for r in reports if not r.passed]
        for r in reports:
            print(
                f"{'PASS' if r.passed else 'FAIL'} {r.identity_name} "
                f"rel={format_real(r.rel_error)} abs={format_real(r.abs_error)}"
            )
        print(f"{len(reports)} checks, {len(failed)} failures")
        return status

    if args.command == "scan":
        kf, kg = (int(w) for w in args.weights.split(","))
        primes = _parse_primes(args.primes)
        need = 2 * max(primes) ** 2
        f = cached_form(kf, need)
        g = cached_form(kg, need)
        rows = subconvexity_scan(f, g, primes, args.n_grid)
        csv_text = scan_to_csv(rows)
        if args.out:
            with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
                fh.write(csv_text)
        else:
            sys.stdout.write(csv_text)
        ratios = [r["ratio_to_p_27_28"] for r in rows]
        print(
            f"# {len(rows)} rows; max ratio {format_real(max(ratios))}",
            file=sys.stderr,
        )
        return 0

    if args.command == "exponent":
        sol = exponent_calculator(Fraction(args.theta), args.mode)
        print(f"mode={sol.mode} theta={sol.theta}")
        print(f"eta={sol.eta}")
        print(f"Q-exponents: {sol.q1_exp}, {sol.q3_exp}, {sol.q4_exp}")
        print(f"final_exponent={sol.final_exponent} (~{float(sol.final_exponent):.6f})")
        print(f"feasible={sol.feasible}")
        return 0

    if args.command == "voronoi":
        form = cached_form(args.weight, 40000)
        job = voronoi.VoronoiJob(form, args.a, args.q, args.Y)
        lhs = voronoi.direct_side(job)
        rhs = voronoi.hankel_side(job)
        rel = abs(lhs - rhs) / max(abs(lhs), 1e-300)
        print(f"direct = {format_complex(lhs)}")
        print(f"dual   = {format_complex(rhs)}")
        print(f"rel_error = {format_real(rel)}")
        return 0 if rel <= 1e-6 else 1

    if args.command == "charsum":
        chars = primitive_characters(args.p)
        by_index = {c.index: c for c in chars}
        if args.chi_index not in by_index:
            raise SystemExit(
                f"no primitive character of index {args.chi_index} mod {args.p}"
            )
        inst = sums.CharSumInstance(
            args.p, args.q, by_index[args.chi_index], args.m, args.n,
            args.convention,
        )
        bf = sums.char_sum_bruteforce(inst)
        cf = sums.char_sum_closed(inst)
        print(f"bruteforce = {format_complex(bf)}")
        print(f"closed     = {format_complex(cf)}")
        print(f"abs_diff   = {format_real(abs(bf - cf))}")
        return 0 if abs(bf - cf) <= 1e-9 else 1

    if args.command == "eigens":
        form = cached_form(args.weight, args.nmax)
        with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write("n,a_n,lambda_n\n")
            for n in range(1, args.nmax + 1):
                fh.write(f"{n},{form.a(n)},{format_real(form.lam(n))}\n")
        print(f"wrote {args.nmax} rows to {args.out}")
        return 0

    raise AssertionError("unreachable")


if __name__ == "__main__":
    sys.exit(main())
