"""Command line entry point: ``pascal-ecpp``.

Subcommands::

    pascal-ecpp triangle rows|center|hunt|first-factor|easy-factor|stats ...
    pascal-ecpp prove <n|@file> --cert out.txt --seed S
    pascal-ecpp verify cert.txt
    pascal-ecpp tables --out discriminants.txt

Exit codes for ``prove``: 0 proved, 2 composite, 3 stuck.  For ``verify``:
0 accepted, 1 rejected or unreadable.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
import time
from dataclasses import asdict, dataclass, field
from pathlib import Path

from . import certificate, cm, ecpp, triangle
from .errors import NotFound, Stuck

EXIT_OK, EXIT_REJECTED, EXIT_COMPOSITE, EXIT_STUCK = 0, 1, 2, 3


@dataclass
class RunReport:
    command: str
    inputs: dict
    timings_ms: dict = field(default_factory=dict)
    outcome: str = "ok"
    outputs: list = field(default_factory=list)

    def time(self, phase: str, start: float):
        self.timings_ms[phase] = max(0.0, (time.perf_counter() - start) * 1000)


def _int(text: str) -> int:
    """Integer from '123', '1e9' or '2^20'."""
    text = text.strip().replace("_", "")
    if "^" in text:
        b, e = text.split("^")
        return int(b) ** int(e)
    if "e" in text.lower():
        mant, exp = text.lower().split("e")
        if mant.isdigit() and exp.isdigit():
            return int(mant) * 10 ** int(exp)
    return int(text)


def _number(text: str) -> int:
    if text.startswith("@"):
        raw = Path(text[1:]).read_text(encoding="utf-8")
        digits = "".join(ch for ch in raw if not ch.isspace() and ch != "\\")
        return int(digits)
    return _int(text)


def _write(lines, out: str | None, report: RunReport):
    text = "\n".join(lines) + "\n"
    if out:
        Path(out).write_text(text, encoding="utf-8")
        report.outputs.append(out)
    else:
        sys.stdout.write(text)


def cmd_triangle(args) -> RunReport:
    base = triangle.TriangleBase.parse(args.base)
    report = RunReport(f"triangle {args.action}", {k: v for k, v in vars(args).items()
                                                    if k not in ("func",)})
    t0 = time.perf_counter()
    lines: list[str] = []
    if args.action == "rows":
        lines = [str(r) for r in triangle.rows(base, args.max_row)]
    elif args.action == "center":
        lines = [str(triangle.center(base, args.row))]
    elif args.action == "hunt":
        hits = triangle.hunt_center_primes(base, args.max_row, args.prp_bases)
        lines = [f"{r};{d};{v}" for r, d, v in hits]
        if args.figure:
            from .report import plot_center_primes
            report.outputs.append(str(plot_center_primes(hits, args.max_row, args.figure, str(base))))
    elif args.action == "first-factor":
        primes = args.prime or []
        for p in primes:
            try:
                lines.append(f"{p} -> {triangle.first_factor_row(base, p, args.max_row)}")
            except NotFound:
                lines.append(f"{p} -> not found (max row {args.max_row})")
    elif args.action == "easy-factor":
        fi = triangle.easy_factor_center(base, args.row, args.bound, args.effort)
        lines = [f"{args.row}, {args.row};{fi}"]
        if fi.cofactor > 1:
            kind = "probable prime" if fi.cofactor_is_prp else "composite"
            lines.append(f"# cofactor: {len(str(fi.cofactor))} digits, {kind}")
    elif args.action == "stats":
        divisors = [int(d) for d in args.divisors.split(",")]
        marks = sorted({m for m in (10, 20, 50, 100, 200, 500, 1000, 2000, 5000, 10000)
                        if m <= args.max_row} | {args.max_row})
        stats = triangle.center_divisibility_stats(base, args.max_row, divisors, marks)
        lines = ["d;hits;rows;fraction"]
        for d, (h, n) in stats["final"].items():
            lines.append(f"{d};{h};{n};{h / n:.6f}")
        if args.figure:
            from .report import plot_divisibility
            report.outputs.append(str(plot_divisibility(stats, args.figure, str(base))))
    _write(lines, args.out, report)
    report.time(args.action, t0)
    return report


def _config(args) -> ecpp.ProofConfig:
    kw = dict(seed=args.seed, jobs=args.jobs, strategy=args.strategy)
    if args.threshold is not None:
        kw["small_prime_threshold"] = args.threshold
    if args.dmax is not None:
        kw["d_max"] = args.dmax
    if args.smooth is not None:
        kw["smooth_bound"] = args.smooth
    if args.slimit is not None:
        kw["s_limit"] = args.slimit
    return ecpp.ProofConfig(**kw)


def cmd_prove(args) -> RunReport:
    n = _number(args.n)
    report = RunReport("prove", {"digits": len(str(n)), "seed": args.seed})
    cfg = _config(args)
    t0 = time.perf_counter()
    stats: dict = {}
    try:
        cert = ecpp.prove(n, cfg, stats=stats)
    except ecpp.CompositeDetected as exc:
        report.outcome = "composite"
        report.time("prove", t0)
        witness = f" (factor {exc.witness})" if exc.witness else ""
        print(f"composite{witness}", file=sys.stderr)
        return report
    except Stuck as exc:
        report.outcome = "stuck"
        report.time("prove", t0)
        print(f"stuck: {exc}", file=sys.stderr)
        return report
    report.time("prove", t0)
    report.inputs["graph"] = stats
    if not cert.steps:
        print(f"{n} is prime (trial division, below threshold {cfg.small_prime_threshold})")
        return report
    t1 = time.perf_counter()
    text = certificate.emit(cert)
    verdict = certificate.verify(certificate.parse(text))
    report.time("verify", t1)
    if not verdict:
        report.outcome = "error"
        print(f"internal error: own certificate {verdict}", file=sys.stderr)
        return report
    if args.cert:
        Path(args.cert).write_text(text, encoding="utf-8")
        report.outputs.append(args.cert)
    else:
        sys.stdout.write(text)
    if args.figure:
        from .report import plot_downrun
        report.outputs.append(str(plot_downrun(cert, args.figure)))
    print(f"proved: {len(str(n))} digits, {len(cert.steps)} steps", file=sys.stderr)
    return report


def cmd_verify(args) -> RunReport:
    report = RunReport("verify", {"cert": args.cert})
    t0 = time.perf_counter()
    try:
        cert = certificate.parse(Path(args.cert).read_text(encoding="utf-8"))
    except (OSError, UnicodeDecodeError, certificate.CertificateSyntaxError,
            certificate.InvariantError) as exc:
        report.outcome = "error"
        print(f"rejected: {exc}", file=sys.stderr)
        return report
    verdict = certificate.verify(cert)
    report.time("verify", t0)
    if verdict:
        print(f"accepted: {cert.n} is prime ({len(cert.steps)} steps)")
    else:
        report.outcome = "error"
        print(str(verdict), file=sys.stderr)
    return report


def cmd_tables(args) -> RunReport:
    report = RunReport("tables", {"max_d": args.max_d, "max_h": args.max_h})
    t0 = time.perf_counter()
    count = cm.generate_table(args.out, args.max_d, args.max_h)
    report.time("generate", t0)
    report.outputs.append(args.out)
    print(f"wrote {count} records to {args.out}")
    return report


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="pascal-ecpp", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true", help="progress log on stderr")
    parser.add_argument("--report", help="write a JSON run report here")
    sub = parser.add_subparsers(dest="command", required=True)

    tri = sub.add_parser("triangle", help="generalized Pascal triangle tools")
    tri.add_argument("action", choices=["rows", "center", "hunt", "first-factor",
                                        "easy-factor", "stats"])
    tri.add_argument("--base", default="112")
    tri.add_argument("--max-row", type=_int, default=6)
    tri.add_argument("--row", type=_int, default=0)
    tri.add_argument("--prime", type=_int, action="append")
    tri.add_argument("--bound", type=_int, default=10**6)
    tri.add_argument("--effort", type=int, default=1, choices=[0, 1, 2])
    tri.add_argument("--divisors", default="2,3,5,7")
    tri.add_argument("--prp-bases", type=int, default=20)
    tri.add_argument("--figure", help="also render a PNG/PDF figure (hunt, stats)")
    tri.add_argument("--out")
    tri.set_defaults(func=cmd_triangle)

    pr = sub.add_parser("prove", help="prove a probable prime with ECPP")
    pr.add_argument("n", help="decimal number or @file")
    pr.add_argument("--cert")
    pr.add_argument("--seed", type=int, default=0)
    pr.add_argument("--threshold", type=_int)
    pr.add_argument("--dmax", type=_int)
    pr.add_argument("--smooth", type=_int)
    pr.add_argument("--slimit", type=_int)
    pr.add_argument("--jobs", type=int, default=1)
    pr.add_argument("--strategy", choices=["graph", "fixed"], default="graph")
    pr.add_argument("--figure")
    pr.set_defaults(func=cmd_prove)

    ve = sub.add_parser("verify", help="check a certificate")
    ve.add_argument("cert")
    ve.set_defaults(func=cmd_verify)

    tb = sub.add_parser("tables", help="regenerate the discriminant table")
    tb.add_argument("--out", default=str(cm.default_table_path()))
    tb.add_argument("--max-d", type=_int, default=cm.TABLE_MAX_ABS_D)
    tb.add_argument("--max-h", type=_int, default=cm.TABLE_MAX_CLASS_NUMBER)
    tb.set_defaults(func=cmd_tables)
    return parser


_EXIT = {
    "prove": {"ok": EXIT_OK, "composite": EXIT_COMPOSITE, "stuck": EXIT_STUCK, "error": 4},
    "verify": {"ok": EXIT_OK, "error": EXIT_REJECTED},
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(message)s", stream=sys.stderr)
    try:
        report = args.func(args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    if args.report:
        Path(args.report).write_text(json.dumps(asdict(report), indent=2, default=str),
                                     encoding="utf-8")
    codes = _EXIT.get(args.command, {"ok": EXIT_OK})
    return codes.get(report.outcome, 1)


if __name__ == "__main__":
    sys.exit(main())
