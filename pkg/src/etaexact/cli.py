"""Command-line interface: ``etaexact {coeff,table,asympt,verify,scan,bench}``.

Eta-quotients are written ``m^delta`` joined by ``*``; ``1^-1*5^-1`` is
1/((q;q)(q^5;q^5)), whose coefficients are a_5(n).

Exit codes: 0 ok, 1 usage error, 2 inadmissible eta-quotient,
3 verification mismatch.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import mpmath

from .asymptotics import (
    asymptotic_report,
    c_p,
    conjecture_scan,
    is_prime,
    kotesovec_ratio,
    leading_asymptotic,
    log_asymptotic,
)
from .etaquotient import EtaQuotient, check_admissible, two_color
from .oracle import eta_quotient_coeffs
from .rademacher import (
    ADMISSIBLE_PRIMES,
    DEFAULT_MAX_K,
    InadmissibleSpecError,
    ResourceCapError,
    certify,
)

EXIT_OK, EXIT_USAGE, EXIT_INADMISSIBLE, EXIT_MISMATCH = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


@dataclass
class RunConfig:
    command: str
    spec: EtaQuotient | None
    p: list[int] | None
    n: int | None
    N: int | None
    precision_bits: int
    output_format: str
    max_K: int
    threads: int


def _add_common(sp: argparse.ArgumentParser, fmt_default: str = "plain") -> None:
    sp.add_argument("--p", type=int, action="append", help="prime p (repeatable for verify)")
    sp.add_argument("--spec", help="eta-quotient m^delta*m^delta..., e.g. 1^-1*5^-1")
    sp.add_argument("--n", type=int, help="coefficient index")
    sp.add_argument("--N", type=int, help="range end / table order")
    sp.add_argument("--precision", type=int, default=256, help="precision floor in bits (default 256)")
    sp.add_argument("--format", choices=("json", "csv", "plain"), default=fmt_default)
    sp.add_argument("--max-K", type=int, default=DEFAULT_MAX_K, dest="max_K", help="cap on the series truncation K")
    sp.add_argument("--threads", type=int, default=1, help="worker processes for verify/bench")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="etaexact", description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    helps = {
        "coeff": "exact coefficient a_p(n) or g(n) from the Bessel series",
        "table": "q-series coefficient table up to N",
        "asympt": "asymptotic formulas next to exact values (p <= 23)",
        "verify": "series engine vs q-series oracle sweep",
        "scan": "residual experiment for a prime p > 23",
        "bench": "time oracle table vs single-coefficient series",
    }
    for name, text in helps.items():
        _add_common(sub.add_parser(name, help=text, description=text), "csv" if name == "bench" else "plain")
    return parser


def _config(args: argparse.Namespace) -> RunConfig:
    spec = None
    if args.spec is not None:
        try:
            spec = EtaQuotient.parse(args.spec)
        except ValueError as exc:
            raise UsageError(f"--spec: {exc}") from None
    for flag in ("n", "N"):
        v = getattr(args, flag)
        if v is not None and v < 0:
            raise UsageError(f"--{flag} must be nonnegative")
    if args.precision < 32:
        raise UsageError("--precision must be at least 32")
    if args.threads < 1:
        raise UsageError("--threads must be >= 1")
    if args.max_K < 1:
        raise UsageError("--max-K must be >= 1")
    return RunConfig(args.command, spec, args.p, args.n, args.N, args.precision, args.format, args.max_K, args.threads)


def _single_p(cfg: RunConfig, flag_required: bool = True) -> int | None:
    if not cfg.p:
        if flag_required:
            raise UsageError("--p is required")
        return None
    if len(cfg.p) > 1:
        raise UsageError("--p given more than once")
    return cfg.p[0]


def _emit_rows(header: list[str], rows: list[list], fmt: str, out) -> None:
    if fmt == "csv":
        w = csv.writer(out, lineterminator="\n")
        w.writerow(header)
        w.writerows(rows)
    elif fmt == "json":
        out.write(json.dumps([dict(zip(header, map(str, r))) for r in rows], indent=2) + "\n")
    else:
        for r in rows:
            out.write("  ".join(str(x) for x in r) + "\n")


def _target(cfg: RunConfig) -> tuple[EtaQuotient, int | None]:
    if cfg.spec is not None:
        if cfg.p:
            raise UsageError("give either --spec or --p, not both")
        return cfg.spec, None
    p = _single_p(cfg)
    if p < 1:
        raise UsageError("--p must be positive")
    return two_color(p), p


def cmd_coeff(cfg: RunConfig, out) -> int:
    spec, p = _target(cfg)
    if cfg.n is None:
        raise UsageError("--n is required")
    n = cfg.n
    verdict = check_admissible(spec)
    if not verdict:
        raise InadmissibleSpecError(spec, verdict)
    inputs = {"spec": str(spec), "n": n}
    if p is not None:
        inputs["p"] = p
    x = 24 * n + sum(m * d for m, d in zip(spec.m, spec.delta))
    if p is not None and n >= 1 and x <= 0:
        # series degenerates on the boundary n = (p+1)/24; fall back to the q-series
        value = eta_quotient_coeffs(spec, n).coeffs[n]
        diag = {"K": None, "precision_bits": None, "tail_bound": None, "int_distance": None, "source": "oracle"}
    else:
        try:
            ev = certify(spec, n, cfg.precision_bits, cfg.max_K)
        except ValueError as exc:
            raise UsageError(str(exc)) from None
        value = ev.certified_integer
        diag = {
            "K": ev.truncation_K,
            "precision_bits": ev.precision_bits,
            "tail_bound": mpmath.nstr(ev.tail_bound.value, 6),
            "int_distance": mpmath.nstr(ev.int_distance, 6),
            "source": "series",
        }
    if cfg.output_format == "json":
        out.write(json.dumps({"command": "coeff", "inputs": inputs, "value": str(value), "diagnostics": diag}) + "\n")
    elif cfg.output_format == "csv":
        _emit_rows(["spec", "n", "value", *diag], [[str(spec), n, value, *diag.values()]], "csv", out)
    else:
        out.write(f"{value}\n")
        for k, v in diag.items():
            out.write(f"# {k}: {v}\n")
    return EXIT_OK


def cmd_table(cfg: RunConfig, out) -> int:
    spec, _ = _target(cfg)
    if cfg.N is None:
        raise UsageError("--N is required")
    table = eta_quotient_coeffs(spec, cfg.N)
    if cfg.output_format == "json":
        out.write(table.to_json() + "\n")
    elif cfg.output_format == "csv":
        out.write(table.to_csv())
    else:
        for n, c in enumerate(table.coeffs):
            out.write(f"{n}  {c}\n")
    return EXIT_OK


def _report_out(report, cfg: RunConfig, command: str, inputs: dict, out) -> None:
    if cfg.output_format == "json":
        out.write(json.dumps({"command": command, "inputs": inputs, "report": report.to_dict()}, indent=2) + "\n")
    elif cfg.output_format == "csv":
        out.write(report.to_csv())
    else:
        out.write(f"p = {report.p}  source = {report.source}\n")
        out.write(f"protocol: {report.protocol}\n")
        for note in report.notes:
            out.write(f"note: {note}\n")
        for n, e, q, r in report.samples:
            out.write(f"{n:>8}  log a = {e.decimal(15)}  4-term = {q.decimal(15)}  resid*sqrt(n) = {r.decimal(8)}\n")
        out.write(f"fitted coefficient    {report.fitted_c_coefficient.decimal(10)}\n")
        out.write(f"-c_p/(24 sqrt 6)      {report.predicted_c_coefficient.decimal(10)}\n")
        out.write(f"relative difference   {report.relative_error:.4%}\n")
        out.write(f"spread lower/upper    {report.spread_lower_half:.4g} / {report.spread_upper_half:.4g}\n")


def cmd_asympt(cfg: RunConfig, out) -> int:
    p = _single_p(cfg)
    if p not in ADMISSIBLE_PRIMES:
        raise UsageError(f"asympt needs p in {ADMISSIBLE_PRIMES}; use scan for p > 23")
    if cfg.n is not None:
        n = cfg.n
        if 24 * n - p - 1 <= 0:
            raise UsageError(f"--n must exceed (p+1)/24")
        ev = certify(two_color(p), n, cfg.precision_bits, cfg.max_K)
        a = ev.certified_integer
        with mpmath.workprec(a.bit_length() + 64):
            lead = leading_asymptotic(p, n).value
            row = {
                "n": n,
                "exact": str(a),
                "log_exact": mpmath.nstr(mpmath.log(a), 20),
                "log_asymptotic": log_asymptotic(p, n).decimal(20),
                "ratio_to_leading": mpmath.nstr(mpmath.mpf(a) / lead, 20),
                "c_p": c_p(p).decimal(20),
            }
        if p == 2:
            row["kotesovec_ratio"] = kotesovec_ratio(n, a).decimal(20)
        if cfg.output_format == "json":
            out.write(json.dumps({"command": "asympt", "inputs": {"p": p, "n": n}, "value": row}) + "\n")
        elif cfg.output_format == "csv":
            _emit_rows(list(row), [list(row.values())], "csv", out)
        else:
            for k, v in row.items():
                out.write(f"{k}: {v}\n")
        return EXIT_OK
    if cfg.N is None:
        raise UsageError("give --n for one point or --N for a report")
    start = max(1, (p + 1) // 24 + 1)
    count = min(20, cfg.N - start + 1)
    if count < 2:
        raise UsageError("--N too small for a report")
    step = max(1, (cfg.N - start) // (count - 1))
    ns = sorted({min(cfg.N, start + i * step) for i in range(count)} | {cfg.N})
    report = asymptotic_report(p, ns)
    _report_out(report, cfg, "asympt", {"p": p, "N": cfg.N}, out)
    return EXIT_OK


def _verify_cell(args: tuple[EtaQuotient, int, int, int]) -> int:
    spec, n, prec, max_K = args
    return certify(spec, n, prec, max_K).certified_integer


def _parallel_map(fn, items, threads: int):
    if threads <= 1:
        return [fn(x) for x in items]
    # mpmath keeps its precision in process-global state, so fan out to processes
    with ProcessPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, items, chunksize=8))


def cmd_verify(cfg: RunConfig, out) -> int:
    N = 500 if cfg.N is None else cfg.N
    if cfg.spec is not None:
        specs = [(str(cfg.spec), cfg.spec)]
        verdict = check_admissible(cfg.spec)
        if not verdict:
            raise InadmissibleSpecError(cfg.spec, verdict)
    else:
        ps = cfg.p or list(ADMISSIBLE_PRIMES)
        bad = [p for p in ps if p not in ADMISSIBLE_PRIMES]
        if bad:
            raise UsageError(f"verify needs primes p <= 23, got {bad}")
        specs = [(f"p={p}", two_color(p)) for p in ps]
    checks, mismatches, skipped = 0, [], []
    for label, spec in specs:
        table = eta_quotient_coeffs(spec, N).coeffs
        delta2 = sum(m * d for m, d in zip(spec.m, spec.delta))
        ns = []
        for n in range(1, N + 1):
            if 24 * n + delta2 <= 0:
                skipped.append((label, n))
            else:
                ns.append(n)
        values = _parallel_map(_verify_cell, [(spec, n, cfg.precision_bits, cfg.max_K) for n in ns], cfg.threads)
        for n, v in zip(ns, values):
            checks += 1
            if v != table[n]:
                mismatches.append((label, n, v, table[n]))
    rows = [[label, n, v, o] for label, n, v, o in mismatches]
    if cfg.output_format == "json":
        out.write(json.dumps({
            "command": "verify",
            "inputs": {"specs": [l for l, _ in specs], "N": N},
            "value": {"checks": checks, "mismatches": [dict(zip(("spec", "n", "series", "oracle"), map(str, r))) for r in rows],
                      "oracle_only": [f"{l}:n={n}" for l, n in skipped]},
        }) + "\n")
    else:
        out.write(f"{checks} checks, {len(mismatches)} mismatches\n")
        for label, n in skipped:
            out.write(f"oracle only ({label}, n={n}): n <= -Delta_2/24, series not applicable\n")
        if mismatches:
            _emit_rows(["spec", "n", "series", "oracle"], rows, "csv" if cfg.output_format == "csv" else "plain", out)
    return EXIT_MISMATCH if mismatches else EXIT_OK


def cmd_scan(cfg: RunConfig, out) -> int:
    p = _single_p(cfg)
    if p <= 23 or not is_prime(p):
        raise UsageError(f"scan needs a prime p > 23, got {p} (use asympt for p <= 23)")
    N = 2000 if cfg.N is None else cfg.N
    if N < 4:
        raise UsageError("--N must be at least 4")
    report = conjecture_scan(p, N)
    if N < 2000:
        report.notes.append("N < 2000: expect a wider deviation from -c_p/(24 sqrt 6)")
    _report_out(report, cfg, "scan", {"p": p, "N": N}, out)
    return EXIT_OK


def _bench_cell(args: tuple[int, int, int, int]) -> tuple[int, float, float, int, bool]:
    p, n, prec, max_K = args
    spec = two_color(p)
    t0 = time.perf_counter()
    oracle = eta_quotient_coeffs(spec, n).coeffs[n]
    t1 = time.perf_counter()
    series = certify(spec, n, prec, max_K).certified_integer
    t2 = time.perf_counter()
    return n, t1 - t0, t2 - t1, series, oracle == series


def cmd_bench(cfg: RunConfig, out) -> int:
    p = _single_p(cfg)
    if p not in ADMISSIBLE_PRIMES:
        raise UsageError(f"bench needs p in {ADMISSIBLE_PRIMES}")
    N = 10000 if cfg.N is None else cfg.N
    lo = (p + 1) // 24 + 1
    grid = []
    n = N
    while n >= lo and len(grid) < 8:
        grid.append(n)
        n //= 4
    grid = sorted(set(grid))
    results = _parallel_map(_bench_cell, [(p, n, cfg.precision_bits, cfg.max_K) for n in grid], cfg.threads)
    rows = [[n, v, f"{to:.6f}", f"{ts:.6f}", "series" if ts < to else "oracle", ok] for n, to, ts, v, ok in results]
    header = ["n", "coefficient", "oracle_table_s", "series_single_s", "faster", "values_equal"]
    _emit_rows(header, rows, cfg.output_format, out)
    return EXIT_OK if all(r[-1] for r in rows) else EXIT_MISMATCH


COMMANDS = {
    "coeff": cmd_coeff,
    "table": cmd_table,
    "asympt": cmd_asympt,
    "verify": cmd_verify,
    "scan": cmd_scan,
    "bench": cmd_bench,
}


def main(argv: list[str] | None = None, out=None) -> int:
    out = sys.stdout if out is None else out
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:
        return exc.code or 0
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING)
    try:
        cfg = _config(args)
        return COMMANDS[cfg.command](cfg, out)
    except UsageError as exc:
        print(f"etaexact {args.command}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except InadmissibleSpecError as exc:
        print(f"etaexact {args.command}: {exc}", file=sys.stderr)
        return EXIT_INADMISSIBLE
    except ResourceCapError as exc:
        print(f"etaexact {args.command}: {exc}; raise --max-K", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
