"""Command-line entry point.

stdout carries data only (JSON or CSV); diagnostics go to stderr.

Exit codes:
  0  success
  1  ``verify`` found a failing invariant, or an unclassified module error
  2  pair outside the triangle, or bad arguments
  3  precision exhausted (the certified prefix is still printed)
  4  every requested partition row is a pole
  5  request refused by the N ceiling (pass --force)
  6  pole in a pipeline that cannot continue past one
  7  exact integer relation found (diophantine)
"""

from __future__ import annotations

import argparse
import logging
import os
import sys
from dataclasses import dataclass
from fractions import Fraction

from . import reports
from .classify import Theorem1Config, diophantine_check, theorem1_witness, theorem2_experiment
from .construct import pair_from_digits
from .errors import ExactZero, OutOfDomain, Pole, PrecisionExhausted, TriThermoError
from .pairs import check_domain, parse_pair
from .partition import default_workers, z_value
from .reports import decimal_str, document, emit, rational_str
from .trimap import triangle_sequence

log = logging.getLogger("trithermo")

N_CEILING = 28
N_HARD_CAP = 34

EXIT_CODES = {
    OutOfDomain: 2,
    PrecisionExhausted: 3,
    Pole: 6,
    ExactZero: 7,
}


@dataclass
class RunConfig:
    precision_bits: int = 256
    threads: int = 1
    n_ceiling: int = N_CEILING
    fmt: str = "json"
    seed: int = 0

    def __post_init__(self):
        if self.precision_bits < 64:
            raise ValueError("precision must be at least 64 bits")
        if self.n_ceiling > N_HARD_CAP:
            raise ValueError(f"the N ceiling cannot exceed {N_HARD_CAP}")


def _config(args) -> RunConfig:
    precision = args.precision or int(os.environ.get("TRITHERMO_PRECISION", 256))
    threads = args.threads or default_workers()
    return RunConfig(precision, threads, args.n_ceiling, getattr(args, "format", "json"), getattr(args, "seed", 0))


def _out(text: str) -> None:
    sys.stdout.write(text)
    sys.stdout.flush()


def parse_n_range(text: str) -> list[int]:
    """'12', '1..12' or '2,4,8'."""
    out: list[int] = []
    for part in text.split(","):
        part = part.strip()
        if ".." in part:
            lo, hi = part.split("..")
            out.extend(range(int(lo), int(hi) + 1))
        else:
            out.append(int(part))
    if not out or min(out) < 1:
        raise ValueError(f"bad N range {text!r}")
    return sorted(set(out))


def parse_digits(text: str) -> tuple[int, ...]:
    return tuple(int(t) for t in text.replace(" ", "").split(",") if t)


def _pair(args, cfg: RunConfig):
    pair = parse_pair(args.pair, args.input_bits, max(cfg.precision_bits, 512))
    check_domain(pair)
    return pair


def cmd_tri_seq(args, cfg: RunConfig) -> int:
    pair = _pair(args, cfg)
    try:
        seq = triangle_sequence(pair, args.depth)
    except PrecisionExhausted as exc:
        seq = exc.certified
        _out(emit(document("tri-seq", pair=args.pair, digits=seq.to_json(), terminated=False, certified=False)))
        log.error("%s", exc)
        return 3
    _out(emit(document("tri-seq", pair=args.pair, digits=seq.to_json(), terminated=seq.terminated, certified=True)))
    if seq.terminated:
        log.info("terminated after %d digits", len(seq))
    return 0


def cmd_partition(args, cfg: RunConfig) -> int:
    Ns = parse_n_range(args.n)
    if max(Ns) > cfg.n_ceiling and not args.force:
        log.error("N = %d exceeds the ceiling %d; pass --force to run it", max(Ns), cfg.n_ceiling)
        return 5
    if max(Ns) > N_HARD_CAP:
        log.error("N > %d is never evaluated, even with --force", N_HARD_CAP)
        return 5
    pair = _pair(args, cfg)
    s, k = Fraction(args.s), Fraction(args.k)
    if args.normalization == "n":
        k = Fraction(1)
    rows = []
    for N in Ns:
        res = z_value(pair, N, s, cfg.precision_bits, workers=cfg.threads, allow_pole=True)
        if res.pole:
            norm = None
            log.warning("pole at N=%d, words %s", N, ";".join(reports.word_str(w) for w in res.pole_words))
        elif args.normalization == "n":
            norm = res.log_value() / N
        else:
            norm = res.normalized(k)
        rows.append(reports.partition_row(res, k, norm))
    if cfg.fmt == "csv":
        _out(reports.rows_to_csv(rows))
    else:
        _out(emit(document("partition", pair=args.pair, normalization=args.normalization, rows=rows)))
    return 4 if all(r["pole"] for r in rows) else 0


def cmd_construct(args, cfg: RunConfig) -> int:
    digits = parse_digits(args.digits)
    enc = pair_from_digits(digits)
    doc = document(
        "construct",
        digits=[str(a) for a in digits],
        vertices=[[rational_str(p.u), rational_str(p.v)] for p in enc.vertices],
        representative=[rational_str(enc.representative.u), rational_str(enc.representative.v)],
        area=rational_str(enc.area()),
    )
    _out(emit(doc))
    return 0


def cmd_theorem1(args, cfg: RunConfig) -> int:
    tcfg = Theorem1Config(k=Fraction(args.k), f=args.f, m_max=args.levels, a1=args.a1, bit_budget=args.bit_budget)
    rep = theorem1_witness(tcfg, Fraction(args.s), enumerate_ceiling=min(cfg.n_ceiling, 20), precision=cfg.precision_bits)
    bits = cfg.precision_bits
    levels = [
        {
            "m": lv.m,
            "a_next": str(lv.a_next),
            "a_next_bits": lv.a_next.bit_length(),
            "N_m": str(lv.N_m),
            "x_next_bits": lv.x_next.bit_length(),
            "lower_bound": decimal_str(lv.lower_bound, bits),
            "threshold": decimal_str(lv.threshold, bits),
            "x_exceeds_digit": lv.x_exceeds_digit,
            "digit_exceeds_exp": lv.digit_exceeds_exp,
            "direct_check": lv.direct_ok,
            "ok": lv.ok,
        }
        for lv in rep.levels
    ]
    doc = document(
        "theorem1",
        config={"k": rational_str(Fraction(args.k)), "f": tcfg.f_name, "a1": str(tcfg.a1),
                "levels": tcfg.m_max, "f_meets_hypothesis": tcfg.f_increasing},
        s=rational_str(rep.s),
        digits=[{"value": str(a), "bits": a.bit_length()} for a in rep.digits],
        levels=levels,
        overflow=rep.overflow,
        verdict=rep.verdict,
    )
    _out(emit(doc))
    return 0


def _fit_doc(fit, bits):
    return {
        "C": decimal_str(fit.C, bits),
        "d": rational_str(fit.d),
        "B_max": fit.B_max,
        "witness": [str(v) for v in fit.witness],
        "witness_gap": decimal_str(fit.witness_gap, bits),
    }


def cmd_theorem2(args, cfg: RunConfig) -> int:
    pair = _pair(args, cfg)
    if args.n_max > cfg.n_ceiling and not args.force:
        log.error("N = %d exceeds the ceiling %d; pass --force to run it", args.n_max, cfg.n_ceiling)
        return 5
    rep = theorem2_experiment(
        pair, Fraction(args.s), Fraction(args.k), args.n_max, d=Fraction(args.d), B_max=args.b_max,
        tail_start=args.tail_start, precision=cfg.precision_bits, workers=cfg.threads,
    )
    bits = cfg.precision_bits
    rows = [
        {"N": r.N, "value": decimal_str(r.value, bits), "normalized": decimal_str(r.normalized, bits),
         "bound": decimal_str(r.bound, bits), "bound_ok": r.bound_ok}
        for r in rep.rows
    ]
    doc = document(
        "theorem2", pair=args.pair, s=rational_str(rep.s), k=rational_str(rep.k), regime=rep.regime,
        fit=_fit_doc(rep.fit, bits), rows=rows, tail_start=rep.tail_start,
        tail_decreasing=rep.tail_decreasing, final_normalized=decimal_str(rep.final_normalized, bits),
        passed=rep.passed,
    )
    _out(emit(doc))
    return 0


def cmd_diophantine(args, cfg: RunConfig) -> int:
    pair = _pair(args, cfg)
    fit = diophantine_check(pair, Fraction(args.d), args.b_max, cfg.precision_bits)
    _out(emit(document("diophantine", pair=args.pair, **_fit_doc(fit, cfg.precision_bits))))
    return 0


def cmd_verify(args, cfg: RunConfig) -> int:
    from .verify import run_invariants

    results = run_invariants(args.seed)
    passed = all(r.passed for r in results)
    checks = [{"name": r.name, "passed": r.passed, "detail": r.detail} for r in results]
    message = "all invariants passed" if passed else "invariant failures: " + ", ".join(
        r.name for r in results if not r.passed
    )
    _out(emit(document("verify", seed=args.seed, checks=checks, passed=passed, message=message)))
    return 0 if passed else 1


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--precision", type=int, default=None, help="working precision in bits (default 256)")
    common.add_argument("--threads", type=int, default=None, help="worker processes (default: all cores)")
    common.add_argument("--n-ceiling", type=int, default=N_CEILING)
    common.add_argument("--format", choices=("json", "csv"), default="json")
    common.add_argument("-v", "--verbose", action="store_true")

    pair_opts = argparse.ArgumentParser(add_help=False)
    pair_opts.add_argument("--pair", required=True, help="'3/4,1/2', decimals with --input-bits, or cubic-fixed-point")
    pair_opts.add_argument("--input-bits", type=int, default=None, help="accuracy of decimal pair input")

    p = argparse.ArgumentParser(prog="trithermo", description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = p.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("tri-seq", parents=[common, pair_opts], help="triangle sequence of a pair")
    sp.add_argument("--depth", type=int, default=20)
    sp.set_defaults(func=cmd_tri_seq)

    sp = sub.add_parser("partition", parents=[common, pair_opts], help="Z_N and free-energy rows")
    sp.add_argument("--n", required=True, help="N, a..b, or a comma list")
    sp.add_argument("--s", default="2")
    sp.add_argument("--k", default="1")
    sp.add_argument("--normalization", choices=("sk", "n"), default="sk",
                    help="sk: log Z/(s N^k); n: log Z/N")
    sp.add_argument("--force", action="store_true")
    sp.set_defaults(func=cmd_partition)

    sp = sub.add_parser("construct", parents=[common], help="nested triangle for a digit prefix")
    sp.add_argument("--digits", required=True)
    sp.set_defaults(func=cmd_construct)

    sp = sub.add_parser("theorem1", parents=[common], help="divergence witness")
    sp.add_argument("--k", default="1")
    sp.add_argument("--f", default="linear", choices=("linear", "log", "constant"))
    sp.add_argument("--s", default="1")
    sp.add_argument("--levels", type=int, default=2)
    sp.add_argument("--a1", type=int, default=3)
    sp.add_argument("--bit-budget", type=int, default=1 << 20)
    sp.set_defaults(func=cmd_theorem1)

    sp = sub.add_parser("theorem2", parents=[common, pair_opts], help="free-energy trend and Fibonacci ceiling")
    sp.add_argument("--s", default="3")
    sp.add_argument("--k", default="2")
    sp.add_argument("--n-max", type=int, default=16)
    sp.add_argument("--d", default="2")
    sp.add_argument("--b-max", type=int, default=50)
    sp.add_argument("--tail-start", type=int, default=10)
    sp.add_argument("--force", action="store_true")
    sp.set_defaults(func=cmd_theorem2)

    sp = sub.add_parser("diophantine", parents=[common, pair_opts], help="fit C in 1/(C b^d) <= |p + a q + b r|")
    sp.add_argument("--d", default="2")
    sp.add_argument("--b-max", type=int, default=50)
    sp.set_defaults(func=cmd_diophantine)

    sp = sub.add_parser("verify", parents=[common], help="run the invariant suite")
    sp.add_argument("--seed", type=int, default=0)
    sp.set_defaults(func=cmd_verify)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, stream=sys.stderr,
                        format="%(levelname)s: %(message)s")
    try:
        cfg = _config(args)
        return args.func(args, cfg)
    except (TriThermoError, ValueError) as exc:
        code = next((c for cls, c in EXIT_CODES.items() if isinstance(exc, cls)), 2 if isinstance(exc, ValueError) else 1)
        diag = {"error": getattr(exc, "code", "bad_argument"), "message": str(exc)}
        if isinstance(exc, Pole):
            diag["words"] = [reports.word_str(w) for w in exc.words]
        if isinstance(exc, ExactZero):
            diag["witness"] = [str(v) for v in exc.witness]
        sys.stderr.write(emit(document("error", **diag)))
        return code


if __name__ == "__main__":
    sys.exit(main())
