"""Command line front end.

Every subcommand is a thin binding over one library operation, with
deterministic machine output (JSON with sorted keys, or CSV) written to
--out or stdout and diagnostics on stderr.  Stochastic subcommands require
an explicit --seed and are then byte-reproducible.

Exit codes: 0 success, 1 usage or validation error, 2 certification
failure, 3 budget exceeded.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from dataclasses import dataclass, field
from fractions import Fraction

from .admissibility import (
    count_admissible,
    enumerate_admissible,
    format_word,
    is_admissible,
    parse_word,
)
from .beta import Beta, digits, expansion_of_one
from .certified import PrecisionCfg
from .cylinders import cylinder, partition_check
from .errors import (
    BudgetExceeded,
    HypothesisViolated,
    InadmissibleWord,
    PrecisionExhausted,
    PreconditionUnverifiable,
    UncertifiedFloor,
    UndecidedFiniteness,
)
from .functions import DimensionFn, TargetFn
from .measure import (
    box_dimension_estimate,
    dyadic_family,
    select_disjoint_blowups,
    series_1d,
    series_2d,
)
from .targets import grid_cells, hit_sequence, monte_carlo_measure, rectangle_cover

__all__ = ["main", "RunConfig"]

SUBCOMMANDS = (
    "expand", "star", "admissible", "enumerate", "count", "cylinders",
    "partition-check", "hits", "simulate", "grid", "cover", "series",
    "dimension", "kgb",
)


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(message)


@dataclass
class RunConfig:
    """Validated run parameters shared by every subcommand."""

    command: str
    beta: str | None
    precision: int
    p_max: int
    out: str | None
    fmt: str
    options: dict = field(default_factory=dict)

    def cfg(self) -> PrecisionCfg:
        return PrecisionCfg(working=self.precision,
                            p_max=max(self.p_max, self.precision))


def _parse_point(text: str) -> Fraction:
    # Fractions like 5/8 stay exact; decimal literals become exact rationals.
    return Fraction(text.strip())


def _build_parser() -> _Parser:
    parser = _Parser(prog="betadyn", description=__doc__,
                     formatter_class=argparse.RawDescriptionHelpFormatter)
    default_precision = int(os.environ.get("BETADYN_PRECISION", "128"))
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--beta", help="base literal (2, golden, pi, "
                        "quadratic:a,b,c@lo,hi, real:d.ddd@bits, 9/5, 1.8)")
    common.add_argument("--precision", type=int, default=default_precision,
                        help="working precision in bits (>= 64)")
    common.add_argument("--p-max", type=int, default=16384,
                        help="maximum precision for certification retries")
    common.add_argument("--out", help="write machine output to this path")
    common.add_argument("--format", dest="fmt", choices=("json", "csv", "text"),
                        default=None, help="machine output format")
    common.add_argument("--config", help="key = value file of flag defaults")

    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("expand", parents=[common], help="greedy digits of a point")
    p.add_argument("--x", required=True)
    p.add_argument("--depth", type=int, required=True)

    p = sub.add_parser("star", parents=[common],
                       help="digit sequence of the expansion of 1")
    p.add_argument("--m", type=int, default=20)

    p = sub.add_parser("admissible", parents=[common], help="test one word")
    p.add_argument("--word", required=True)

    p = sub.add_parser("enumerate", parents=[common], help="list admissible words")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--budget", type=int, default=1_000_000)

    p = sub.add_parser("count", parents=[common], help="count admissible words")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--method", choices=("auto", "transfer-matrix", "brute-force"),
                   default="auto")

    p = sub.add_parser("cylinders", parents=[common], help="dump cylinder geometry")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--digits", type=int, default=30,
                   help="decimal places for endpoints")
    p.add_argument("--budget", type=int, default=1_000_000)

    p = sub.add_parser("partition-check", parents=[common],
                       help="verify the cylinder tiling of [0,1]")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--budget", type=int, default=1_000_000)

    p = sub.add_parser("hits", parents=[common], help="certified hit set of an orbit")
    p.add_argument("--x", required=True)
    p.add_argument("--y", required=True)
    p.add_argument("--psi", required=True,
                   help="speed literal exp:<tau>[,poly:<a>][,log:<c>][,C:<const>]")
    p.add_argument("--N", type=int, required=True)
    p.add_argument("--mode", choices=("two-sided", "one-sided"),
                   default="two-sided")

    p = sub.add_parser("simulate", parents=[common],
                       help="Monte Carlo verification of the measure dichotomy")
    p.add_argument("--y", required=True)
    p.add_argument("--psi", required=True)
    p.add_argument("--N", type=int, required=True)
    p.add_argument("--samples", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--mode", choices=("two-sided", "one-sided"),
                   default="two-sided")
    p.add_argument("--ks", default="1,2,5,10",
                   help="comma list of k for the >=k hit fractions")
    p.add_argument("--tail-threshold", type=int, default=None)

    p = sub.add_parser("grid", parents=[common], help="the y-grid of one level")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--psi", required=True)
    p.add_argument("--budget", type=int, default=1_000_000)

    p = sub.add_parser("cover", parents=[common],
                       help="rectangle cover summary of one level")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--psi", required=True)
    p.add_argument("--budget", type=int, default=5_000_000)

    p = sub.add_parser("series", parents=[common], help="dichotomy series verdict")
    p.add_argument("--theorem", type=int, choices=(1, 2), required=True)
    p.add_argument("--f", required=True,
                   help="dimension function power:<s> or powerlog:<s>,<b>")
    p.add_argument("--psi", required=True)
    p.add_argument("--N", type=int, default=100)

    p = sub.add_parser("dimension", parents=[common],
                       help="box-counting dimension estimate")
    p.add_argument("--y", default="0")
    p.add_argument("--tau", required=True)
    p.add_argument("--mode", choices=("1d", "2d"), default="1d")
    p.add_argument("--n-from", type=int, required=True)
    p.add_argument("--n-to", type=int, required=True)
    p.add_argument("--budget", type=int, default=2_000_000)

    p = sub.add_parser("kgb", parents=[common],
                       help="greedy disjoint selection of blown-up dyadic balls")
    p.add_argument("--f", default="power:1")
    p.add_argument("--B", default="0,1", help="interval lo,hi")
    p.add_argument("--G", type=int, default=1, help="first usable family index")
    p.add_argument("--dyadic", default="1,8",
                   help="dyadic family generations lo,hi")
    p.add_argument("--min-cover", type=float, default=0.9)

    return parser


def _load_config_args(argv: list[str]) -> list[str]:
    """Prepend defaults from a key = value file named by --config."""
    path = None
    for i, arg in enumerate(argv):
        if arg == "--config" and i + 1 < len(argv):
            path = argv[i + 1]
        elif arg.startswith("--config="):
            path = arg.split("=", 1)[1]
    if path is None:
        return []
    extra = []
    with open(path, "r", encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise _UsageError(f"bad config line: {line!r}")
            key, value = (t.strip() for t in line.split("=", 1))
            extra.extend([f"--{key.replace('_', '-')}", value])
    return extra


def _emit(run: RunConfig, text: str):
    if run.out:
        with open(run.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _emit_json(run: RunConfig, obj):
    _emit(run, json.dumps(obj, sort_keys=True, separators=(",", ":")) + "\n")


def _emit_csv(run: RunConfig, rows):
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    for row in rows:
        writer.writerow(row)
    _emit(run, buf.getvalue())


def _decimal_string(value, places: int) -> str:
    from .beta import value_interval
    bits = int(places * 3.33) + 32
    lo, hi = value_interval(value, bits)
    mid = (lo + hi) / 2
    scaled = mid * 10 ** places
    digits_int = scaled.numerator // scaled.denominator
    text = str(digits_int).rjust(places + 1, "0")
    return text[:-places] + "." + text[-places:] if places else text


def _require_beta(args) -> Beta:
    if not args.beta:
        raise _UsageError("--beta is required")
    return Beta.parse(args.beta)


def _run(args, run: RunConfig) -> int:
    cfg = run.cfg()
    cmd = run.command
    if cmd == "expand":
        beta = _require_beta(args)
        seq = digits(_parse_point(args.x), beta, args.depth, cfg)
        if run.fmt == "json":
            _emit_json(run, {"digits": list(seq.digits),
                             "terminal": seq.terminal_float()})
        else:
            _emit(run, format_word(seq.digits) + "\n")
        return 0
    if cmd == "star":
        beta = _require_beta(args)
        star = expansion_of_one(beta, args.m, cfg)
        out = star.describe()
        out["prefix"] = list(_safe_prefix(star, args.m))
        _emit_json(run, out)
        return 0
    if cmd == "admissible":
        beta = _require_beta(args)
        ok = is_admissible(parse_word(args.word), beta, cfg)
        _emit(run, ("true" if ok else "false") + "\n")
        return 0
    if cmd == "enumerate":
        beta = _require_beta(args)
        lines = [format_word(w)
                 for w in enumerate_admissible(beta, args.n, args.budget, cfg)]
        _emit(run, "\n".join(lines) + "\n")
        return 0
    if cmd == "count":
        beta = _require_beta(args)
        result = count_admissible(beta, args.n, args.method, cfg)
        if run.fmt == "json":
            _emit_json(run, {"n": result.n, "count": str(result.count),
                             "method": result.method})
        else:
            _emit(run, str(result.count) + "\n")
        return 0
    if cmd == "cylinders":
        beta = _require_beta(args)
        rows = [("word", "left", "length", "exact")]
        for w in enumerate_admissible(beta, args.n, args.budget, cfg):
            cyl = cylinder(beta, w, cfg)
            rows.append((format_word(w),
                         _decimal_string(cyl.left, args.digits),
                         _decimal_string(cyl.length, args.digits),
                         "exact" if cyl.exact else "enclosure"))
        _emit_csv(run, rows)
        return 0
    if cmd == "partition-check":
        beta = _require_beta(args)
        _emit_json(run, partition_check(beta, args.n, args.budget, cfg).to_json())
        return 0
    if cmd == "hits":
        beta = _require_beta(args)
        rec = hit_sequence(_parse_point(args.x), _parse_point(args.y), beta,
                           TargetFn.parse(args.psi), args.N, args.mode, cfg)
        _emit_json(run, rec.to_json())
        return 0
    if cmd == "simulate":
        beta = _require_beta(args)
        ks = tuple(int(t) for t in args.ks.split(","))
        stats = monte_carlo_measure(
            beta, _parse_point(args.y), TargetFn.parse(args.psi), args.N,
            args.samples, args.seed, args.mode, ks, args.tail_threshold, cfg)
        if run.fmt == "csv":
            _emit_csv(run, stats.csv_rows())
        else:
            _emit_json(run, stats.to_json())
        return 0
    if cmd == "grid":
        beta = _require_beta(args)
        cells = grid_cells(beta, args.n, TargetFn.parse(args.psi),
                           args.budget, cfg)
        rows = [("n", "i", "lo", "hi")]
        rows.extend((c.n, c.i, c.lo_float(), c.hi_float()) for c in cells)
        _emit_csv(run, rows)
        return 0
    if cmd == "cover":
        beta = _require_beta(args)
        cov = rectangle_cover(beta, args.n, TargetFn.parse(args.psi),
                              args.budget, cfg)
        _emit_json(run, cov.to_json())
        return 0
    if cmd == "series":
        beta = _require_beta(args)
        psi = TargetFn.parse(args.psi)
        if args.theorem == 1:
            f = DimensionFn.parse(args.f, declared_dim=1)
            rep = series_1d(f, psi, beta, args.N)
        else:
            f = DimensionFn.parse(args.f, declared_dim=2)
            rep = series_2d(f, psi, beta, args.N)
        _emit_json(run, rep.to_json())
        return 0
    if cmd == "dimension":
        beta = _require_beta(args)
        rep = box_dimension_estimate(
            beta, _parse_point(args.y), Fraction(args.tau),
            range(args.n_from, args.n_to + 1), args.mode, args.budget, cfg)
        if run.fmt == "json":
            _emit_json(run, rep.to_json())
        else:
            _emit_csv(run, rep.csv_rows())
        return 0
    if cmd == "kgb":
        f = DimensionFn.parse(args.f)
        lo, hi = (Fraction(t) for t in args.B.split(","))
        glo, ghi = (int(t) for t in args.dyadic.split(","))
        family = dyadic_family(glo, ghi)
        sel = select_disjoint_blowups(family, f, (lo, hi), args.G,
                                      args.min_cover, cfg)
        _emit_json(run, sel.to_json())
        return 0
    raise _UsageError(f"unknown command {cmd!r}")


def _safe_prefix(star, m: int):
    out = []
    for i in range(1, m + 1):
        try:
            out.append(star.digit(i))
        except UndecidedFiniteness:
            break
    return out


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = _build_parser()
    try:
        config_args = _load_config_args(argv)
        if config_args:
            # Keep the subcommand first; config values act as defaults that
            # explicit flags override (argparse last-one-wins).
            head, tail = argv[:1], argv[1:]
            argv = head + config_args + tail
        args = parser.parse_args(argv)
        run = RunConfig(
            command=args.command, beta=getattr(args, "beta", None),
            precision=args.precision, p_max=args.p_max,
            out=args.out, fmt=args.fmt or "text",
            options={k: v for k, v in vars(args).items()
                     if k not in ("command", "beta", "precision", "p_max",
                                  "out", "fmt", "config")},
        )
        if run.precision < 64:
            raise _UsageError("precision must be at least 64 bits")
        return _run(args, run)
    except _UsageError as exc:
        print(f"betadyn: usage error: {exc}", file=sys.stderr)
        return 1
    except (ValueError, InadmissibleWord, PreconditionUnverifiable,
            HypothesisViolated) as exc:
        print(f"betadyn: {exc}", file=sys.stderr)
        return 1
    except (UncertifiedFloor, PrecisionExhausted, UndecidedFiniteness) as exc:
        print(f"betadyn: certification failure: {exc}", file=sys.stderr)
        return 2
    except BudgetExceeded as exc:
        print(f"betadyn: budget exceeded: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
