"""Command-line front end.

Data goes to stdout (or ``--out``), diagnostics to stderr. Exit codes:
0 success, 1 verification failure, 2 usage or constraint error,
3 certification mismatch.
"""

import argparse
import csv
import io
import json
import sys
import time
from dataclasses import asdict, dataclass, field
from typing import Optional

from . import acceptance, linalg
from .evolve import full_distribution, ghz_fidelity
from .fock import PhotonFactor, enumerate_patterns
from .permanent import RYSER_MAX_DIM, perm_ryser
from .schemes import CLOSED_FORM_NAMES, SchemeName, closed_form, make_scheme, ztl_allowed

EXIT_OK = 0
EXIT_VERIFY_FAILED = 1
EXIT_USAGE = 2
EXIT_MISMATCH = 3

TABLE_MAX_N = 12
SUPPRESSION_CERTIFY_MAX_N = 7
SUPPRESSION_LIST_MAX_N = 12

RUN_CSV_HEADER = [
    "scheme", "n", "success_probability", "ghz_fidelity", "relative_phase",
    "closed_form_reference", "assignment", "re", "im",
]
TABLE_CSV_HEADER = ["scheme", "n", "simulated_probability", *CLOSED_FORM_NAMES]
SUPPRESSION_CSV_HEADER = ["pattern", "mode_sum_mod_n", "ztl_allowed", "probability", "agrees"]
BENCH_CSV_HEADER = ["dim", "seconds", "repeats", "perm_re", "perm_im"]

_REFERENCE = {
    SchemeName.TWO_N_PORT: "P_2N",
    SchemeName.SINGLE_MODE: "P_SINGLE_MODE",
    SchemeName.PBS_CASCADE: "P_PBS",
}


class UsageError(Exception):
    pass


@dataclass
class RunReport:
    scheme: str
    n: int
    success_probability: float
    amplitudes: list
    ghz_fidelity: float
    relative_phase: float
    closed_form_reference: Optional[float]
    elapsed_ms: int
    warnings: list = field(default_factory=list)


def _fmt(x):
    return f"{x:.17g}"


def _build(scheme, n, allow_special_n4=False):
    try:
        name = SchemeName(scheme)
    except ValueError:
        raise UsageError(f"unknown scheme {scheme!r}; choose from {[s.value for s in SchemeName]}")
    kwargs = {}
    if name is SchemeName.ODD_N and n % 2 == 0:
        # n = 2 mod 4 runs and reports the predicted total suppression
        if n % 4 == 0 and not (n == 4 and allow_special_n4):
            hint = "pass --allow-special-n4" if n == 4 else "only n=4 is supported, via --allow-special-n4"
            raise UsageError(f"odd scheme needs odd n, got {n}; {hint}")
        kwargs["allow_even"] = True
    try:
        return make_scheme(name, n, **kwargs)
    except ValueError as exc:
        raise UsageError(str(exc))


def cmd_run(scheme, n, allow_special_n4=False, threads=1, tol=1e-10) -> RunReport:
    instance = _build(scheme, n, allow_special_n4)
    perm_ryser(linalg.build_dft(2))  # JIT warm-up, kept out of elapsed_ms
    start = time.perf_counter()
    state = instance.run(threads=threads)
    fidelity, phase = ghz_fidelity(state)
    elapsed = time.perf_counter() - start
    reference = _REFERENCE.get(instance.name)
    report = RunReport(
        scheme=instance.name.value,
        n=instance.n,
        success_probability=state.probability,
        amplitudes=[[a.label_string(), v.real, v.imag] for a, v in state.amplitudes.items()],
        ghz_fidelity=fidelity,
        relative_phase=phase,
        closed_form_reference=closed_form(reference, instance.n) if reference else None,
        elapsed_ms=int(round(elapsed * 1000)),
    )
    if state.probability < tol:
        report.warnings.append(f"suppressed: coincidence probability {state.probability:.3e} below {tol:g}")
    return report


def render_run(report: RunReport, fmt):
    if fmt == "json":
        return json.dumps(asdict(report), indent=2) + "\n"
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(RUN_CSV_HEADER)
    ref = "" if report.closed_form_reference is None else _fmt(report.closed_form_reference)
    for label, re, im in report.amplitudes:
        w.writerow([
            report.scheme, report.n, _fmt(report.success_probability), _fmt(report.ghz_fidelity),
            _fmt(report.relative_phase), ref, label, _fmt(re), _fmt(im),
        ])
    return buf.getvalue()


def _table_schemes(n):
    yield SchemeName.ODD_N, {"allow_even": True}
    if n % 2 == 0:
        yield SchemeName.EVEN_N, {}
    yield SchemeName.TWO_N_PORT, {}
    yield SchemeName.SINGLE_MODE, {}
    if n >= 2:
        yield SchemeName.PBS_CASCADE, {}


def cmd_table(n_max, threads=1):
    """Rows ``(scheme, n, simulated probability, closed forms...)`` for n = 1..n_max."""
    if not 1 <= n_max <= TABLE_MAX_N:
        raise UsageError(f"table limited to 1 <= n_max <= {TABLE_MAX_N}, got {n_max}")
    rows = []
    for n in range(1, n_max + 1):
        refs = []
        for name in CLOSED_FORM_NAMES:
            refs.append(None if name == "P_PBS" and n < 2 else closed_form(name, n))
        for scheme, kwargs in _table_schemes(n):
            p = make_scheme(scheme, n, **kwargs).run(threads=threads).probability
            rows.append([scheme.value, n, p, *refs])
    return rows


def render_table(rows):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(TABLE_CSV_HEADER)
    for scheme, n, *values in rows:
        w.writerow([scheme, n, *("" if v is None else _fmt(v) for v in values)])
    return buf.getvalue()


def cmd_suppression(n, tol=1e-10, threads=1):
    """ZTL verdict per output pattern, numerically certified for n <= 7.

    Returns ``(rows, mismatches)``; rows hold ``(pattern, sum mod n, allowed,
    probability or None, agrees or None)``.
    """
    if not 1 <= n <= SUPPRESSION_LIST_MAX_N:
        raise UsageError(f"suppression listing limited to 1 <= n <= {SUPPRESSION_LIST_MAX_N}, got {n}")
    probs = None
    if n <= SUPPRESSION_CERTIFY_MAX_N:
        factors = [PhotonFactor(k, 1.0, 0.0) for k in range(1, n + 1)]
        probs = full_distribution(factors, linalg.build_dft(n), threads=threads)
    rows, mismatches = [], []
    for pattern in enumerate_patterns(n, n):
        allowed = ztl_allowed(pattern, n)
        p = agrees = None
        if probs is not None:
            p = probs[pattern]
            agrees = allowed == (p > tol)
            if not agrees:
                mismatches.append((pattern, allowed, p))
        rows.append((pattern, sum(pattern.output_modes()) % n, allowed, p, agrees))
    return rows, mismatches


def render_suppression(rows):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(SUPPRESSION_CSV_HEADER)
    for pattern, residue, allowed, p, agrees in rows:
        w.writerow([
            str(pattern), residue, str(allowed).lower(),
            "" if p is None else _fmt(p), "" if agrees is None else str(agrees).lower(),
        ])
    return buf.getvalue()


def cmd_bench(dims, min_time=0.05):
    """Wall time of :func:`perm_ryser` on the n-mode DFT matrix for each dim."""
    for d in dims:
        if not 1 <= d <= RYSER_MAX_DIM:
            raise UsageError(f"bench dims must lie in 1..{RYSER_MAX_DIM}, got {d}")
    perm_ryser(linalg.build_dft(2))  # JIT warm-up
    rows = []
    for d in dims:
        m = linalg.build_dft(d)
        repeats = 0
        start = time.perf_counter()
        while True:
            value = perm_ryser(m)
            repeats += 1
            elapsed = time.perf_counter() - start
            if elapsed >= min_time:
                break
        rows.append((d, elapsed / repeats, repeats, value))
    return rows


def render_bench(rows):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(BENCH_CSV_HEADER)
    for d, sec, repeats, value in rows:
        w.writerow([d, _fmt(sec), repeats, _fmt(value.real), _fmt(value.imag)])
    return buf.getvalue()


def cmd_verify(level="quick", report=None):
    report = report or (lambda line: print(line, file=sys.stderr))
    results = acceptance.run_all(level, report)
    failed = [r for r in results if not r.passed]
    total = sum(r.elapsed for r in results)
    report(f"{len(results) - len(failed)}/{len(results)} criteria passed in {total:.2f} s")
    return results


def _parse_dims(text):
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", help="write data to this path instead of stdout")
    common.add_argument("--threads", type=int, default=1, help="worker threads for independent amplitudes")
    common.add_argument("--tol", type=float, default=1e-10, help="probability below which an event counts as suppressed")

    parser = argparse.ArgumentParser(prog="multiport-ghz", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", parents=[common], help="simulate one scheme and report the post-selected state")
    run.add_argument("--scheme", required=True, choices=[s.value for s in SchemeName])
    run.add_argument("--n", type=int, required=True)
    run.add_argument("--format", choices=["json", "csv"], default="json")
    run.add_argument("--allow-special-n4", action="store_true", help="permit the odd-scheme input at n=4")

    table = sub.add_parser("table", parents=[common], help="success probabilities of all schemes vs closed forms")
    table.add_argument("--n-max", "--n", dest="n_max", type=int, default=TABLE_MAX_N)
    table.add_argument("--format", choices=["csv"], default="csv")

    sup = sub.add_parser("suppression", parents=[common], help="zero transmission law verdicts per output pattern")
    sup.add_argument("--n", type=int, required=True)
    sup.add_argument("--format", choices=["csv"], default="csv")

    ver = sub.add_parser("verify", parents=[common], help="run the acceptance criteria")
    ver.add_argument("level", nargs="?", choices=["quick", "full"], default="quick")

    bench = sub.add_parser("bench", parents=[common], help="time the Ryser permanent kernel")
    bench.add_argument("--dims", type=_parse_dims, default=list(range(1, 17)))
    return parser


def _emit(text, out):
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _error(message, code):
    print(json.dumps({"error": message, "exit_code": code}), file=sys.stderr)
    return code


def main(argv=None):
    args = build_parser().parse_args(argv)
    if args.threads < 1:
        return _error("--threads must be >= 1", EXIT_USAGE)
    try:
        if args.command == "run":
            report = cmd_run(args.scheme, args.n, args.allow_special_n4, args.threads, args.tol)
            for w in report.warnings:
                print(f"warning: {w}", file=sys.stderr)
            _emit(render_run(report, args.format), args.out)
        elif args.command == "table":
            _emit(render_table(cmd_table(args.n_max, args.threads)), args.out)
        elif args.command == "suppression":
            rows, mismatches = cmd_suppression(args.n, args.tol, args.threads)
            _emit(render_suppression(rows), args.out)
            if mismatches:
                for pattern, allowed, p in mismatches:
                    kind = "ZTL violated" if not allowed else "suppressed beyond ZTL"
                    print(f"mismatch {pattern}: {kind}, P={p:.3e}", file=sys.stderr)
                return EXIT_MISMATCH
        elif args.command == "verify":
            results = cmd_verify(args.level)
            if args.out:
                _emit("\n".join(r.line() for r in results) + "\n", args.out)
            if not all(r.passed for r in results):
                return EXIT_VERIFY_FAILED
        elif args.command == "bench":
            _emit(render_bench(cmd_bench(args.dims)), args.out)
    except UsageError as exc:
        return _error(str(exc), EXIT_USAGE)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
