"""Command-line entry point.

Exit codes: 0 success, 1 usage error, 2 precondition violation,
3 an exact invariant failed at runtime.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import os
import sys

from . import cover, expsum, friable, lfunc, proximity, rigidity
from .arith import mf_table, parse_function_spec
from .errors import DomainError, InvariantError, NotFoundError, SizeError, UsageError
from .presets import PRESETS, run_preset

log = logging.getLogger("gaussrig")

G_CHOICES = {"match": "match_f", "match_f": "match_f", "legendre": "legendre", "best": "best"}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _common() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--n", type=int, help="prime modulus N")
    p.add_argument("--c", type=float, default=0.3, help="prime range exponent: p <= N^c")
    p.add_argument("--function", default="legendre", help="liouville | legendre | principal | flip:p,.. | file:path")
    p.add_argument("--g", default="best", choices=sorted(G_CHOICES))
    p.add_argument("--backend", default=None, choices=["naive", "fft", "corr"])
    p.add_argument("--threads", type=int, default=os.cpu_count() or 1)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default="-", help="output file (or directory for presets); '-' = stdout")
    p.add_argument("--format", default="csv", choices=["csv", "json"])
    p.add_argument("-v", "--verbose", action="store_true")
    return p


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = _Parser(prog="gaussrig", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("expsum", parents=[common], help="table of S_f(a)")
    p.add_argument("--dump", help="also write the binary ExpSumTable cache here")

    sub.add_parser("rigidity", parents=[common], help="deficit scan over p <= N^c")

    p = sub.add_parser("distance", parents=[common], help="distance between f and psi")
    p.add_argument("--psi", default="legendre")

    p = sub.add_parser("cover", parents=[common], help="coverage of (Z/qZ)^x by prime products")
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--x-bound", type=int, required=True)
    p.add_argument("--kmax", type=int, default=8)
    p.add_argument("--witnesses", help="write b,P_b,factorization lines here")

    p = sub.add_parser("friable", parents=[common], help="Theta counts, per residue when --q is given")
    p.add_argument("--x", type=int, required=True)
    p.add_argument("--y", type=int, required=True)
    p.add_argument("--z", type=int, default=1)
    p.add_argument("--q", type=int)

    p = sub.add_parser("alpha", parents=[common], help="saddle point alpha(x, y, z)")
    p.add_argument("--x", type=float, required=True)
    p.add_argument("--y", type=int, required=True)
    p.add_argument("--z", type=int, default=1)

    p = sub.add_parser("lfunc", parents=[common], help="L(s, chi_N) pipeline rows")
    p.add_argument("--primes", type=int, nargs="*", help="moduli (default: --n)")
    p.add_argument("--sigma-min", type=float, default=0.5)

    p = sub.add_parser("preset", parents=[common], help="run a named experiment")
    p.add_argument("name", choices=sorted(PRESETS))
    return parser


def _emit(text: str, out: str) -> None:
    if out == "-":
        sys.stdout.write(text)
    else:
        with open(out, "w") as fh:
            fh.write(text)


def _csv(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def _need_n(args) -> int:
    if args.n is None:
        raise UsageError("--n is required")
    return args.n


def cmd_expsum(args) -> str:
    N = _need_n(args)
    v = mf_table(parse_function_spec(args.function, N), N)
    S = expsum.exp_sums(v, "naive" if args.backend == "naive" else "fft")
    S.check()
    if args.dump:
        expsum.dump(S, args.dump)
    if args.format == "json":
        return json.dumps({"N": N, "backend": S.backend, "function": S.source,
                           "re": S.entries.real.tolist(), "im": S.entries.imag.tolist()})
    return _csv(("a", "re", "im"), ([a, repr(float(z.real)), repr(float(z.imag))] for a, z in enumerate(S.entries)))


def cmd_rigidity(args) -> str:
    N = _need_n(args)
    spec = parse_function_spec(args.function, N)
    rep = rigidity.rigidity_scan(spec, N, args.c, G_CHOICES[args.g], args.backend or "corr", args.threads)
    if args.backend in ("naive", "fft"):
        v = mf_table(spec, N)
        for r in rep.records:
            alt = rigidity.deficit_correlation(v, r.p, r.g)
            if abs(alt - r.deficit) > 1e-6 * N:
                raise InvariantError(f"backends disagree at p={r.p}: {r.deficit} vs {alt}")
    return rep.to_json() if args.format == "json" else rep.to_csv()


def cmd_distance(args) -> str:
    N = _need_n(args)
    f = mf_table(parse_function_spec(args.function, N), N)
    psi = mf_table(parse_function_spec(args.psi, N), N)
    rep = proximity.prime_distance(f, psi)
    if proximity.inner_product(f, psi) != (N - 1) - 2 * rep.distance:
        raise InvariantError("indicator identity failed")
    if args.format == "json":
        return json.dumps(rep.__dict__)
    return proximity.reports_csv([rep])


def cmd_cover(args) -> str:
    st = cover.product_levels(args.q, args.x_bound, args.kmax)
    st.validate()
    if args.witnesses:
        _emit(st.witness_csv(), args.witnesses)
    if args.format == "json":
        return json.dumps({"q": st.q, "X": st.X, "rows": st.coverage_rows(),
                           "K": cover.minimal_cover_k(args.q, args.x_bound, args.kmax)})
    return st.coverage_csv()


def cmd_friable(args) -> str:
    if args.q is None:
        return friable.saias_csv([friable.saias_compare(args.x, args.y, args.z)])
    rep = friable.equidistribution_report(args.x, args.y, args.z, args.q)
    if rep.flagged:
        log.warning("q <= y: multiples of q are friable, so the a = 0 bucket is included")
    if not rep.partition_holds:
        raise InvariantError("per-residue counts do not sum to Theta")
    if args.format == "json":
        return json.dumps({"counts": rep.counts.tolist(), "total": rep.total,
                           "relative_spread": rep.relative_spread, "flagged": rep.flagged})
    return rep.to_csv()


def cmd_alpha(args) -> str:
    sp = friable.solve_alpha(args.x, args.y, args.z)
    fq_u = friable.FriableQuery(int(args.x), args.y, max(args.z, 1))
    return _csv(("x", "y", "z", "alpha", "residual", "u", "v"),
                [[repr(args.x), args.y, args.z, repr(sp.alpha), repr(sp.residual), repr(fq_u.u), repr(fq_u.v)]])


def cmd_lfunc(args) -> str:
    moduli = args.primes or [_need_n(args)]
    rows = [lfunc.corollary_row(N, args.sigma_min) for N in moduli]
    return lfunc.corollary_csv(rows)


def cmd_preset(args) -> str:
    if args.out == "-":
        raise UsageError("presets need --out <directory>")
    params = {"seed": args.seed, "threads": args.threads}
    if args.n is not None:
        params["n"] = args.n
    paths = run_preset(args.name, args.out, **params)
    return "".join(f"{p}\n" for p in paths)


COMMANDS = {
    "expsum": cmd_expsum,
    "rigidity": cmd_rigidity,
    "distance": cmd_distance,
    "cover": cmd_cover,
    "friable": cmd_friable,
    "alpha": cmd_alpha,
    "lfunc": cmd_lfunc,
    "preset": cmd_preset,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        text = COMMANDS[args.command](args)
    except InvariantError as exc:
        log.error("invariant violated: %s", exc)
        return 3
    except (DomainError, SizeError, UsageError, NotFoundError) as exc:
        log.error("%s", exc)
        return 2
    if args.command == "preset":
        sys.stdout.write(text)
    else:
        _emit(text, args.out)
    return 0


if __name__ == "__main__":
    sys.exit(main())
