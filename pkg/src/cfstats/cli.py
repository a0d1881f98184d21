"""Command-line entry point: every command writes one flat CSV table."""
from __future__ import annotations

import argparse
import csv
import math
import os
import sys
from dataclasses import dataclass, field

from . import analytic, moments
from .cfperiod import MAX_D, period_range
from .errors import InternalError, ResourceGuardError
from .gfunction import DEFAULT_CHUNK, g_range
from .modular import c_brute, c_closed

EXIT_OK, EXIT_USAGE, EXIT_VIOLATION, EXIT_RESOURCE, EXIT_INTERNAL = 0, 2, 3, 4, 5

COMMANDS = ("tabulate", "moments", "deviations", "constants", "verify", "figures")
DEFAULT_ALPHAS = ("2", "4", "8")
LEMMA2_CAP = 2000

SCHEMAS = {
    "tabulate": ["d", "T", "g"],
    "moments": ["x_lo", "x_hi", "r", "sum_T_r", "sum_g_r", "prime_count",
                "prime_sum_T_r", "prime_sum_g_r"],
    "deviations": ["x", "alpha", "count", "bound_first", "bound_second"],
    "constants": ["name", "closed_form", "value"],
    "verify": ["check", "x", "measured", "lower", "upper", "pass"],
    "figures": ["x", "ratio_mean", "ratio_second"],
}


@dataclass
class RunConfig:
    command: str
    x: int = 1000
    rs: list[int] = field(default_factory=lambda: [1, 2])
    alpha: list[str] = field(default_factory=lambda: list(DEFAULT_ALPHAS))
    primes_only: bool = False
    out: str | None = None
    chunk_size: int = DEFAULT_CHUNK
    shards: int = field(default_factory=lambda: os.cpu_count() or 1)
    format: str = "csv"
    x_lo: int = 0
    step: int = 0
    which: str = "fig1"

    def validate(self) -> None:
        if self.command not in COMMANDS:
            raise ValueError(f"unknown command {self.command}")
        if not 1 <= self.x <= MAX_D:
            raise ValueError(f"x must lie in [1, 2**40], got {self.x}")
        if not set(self.rs) <= {1, 2, 3, 4} or not self.rs:
            raise ValueError(f"rs must be a non-empty subset of 1..4, got {self.rs}")
        if self.chunk_size < 1 or self.shards < 1:
            raise ValueError("chunk-size and shards must be positive")
        if self.format != "csv":
            raise ValueError(f"unsupported format {self.format}")
        for a in self.alpha:
            moments.as_rational(a)


def fmt(v) -> str:
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, int):
        return str(v)
    if isinstance(v, float):
        if v.is_integer() and abs(v) < 1e15:
            return str(int(v))
        return format(v, ".12g")
    return str(v)


def _tabulate(cfg):
    T, g = moments.tabulate_range(0, cfg.x, cfg.chunk_size, cfg.shards)
    return [(d, int(T[d - 1]), int(g[d - 1])) for d in range(1, cfg.x + 1)]


def _moments(cfg):
    if not 0 <= cfg.x_lo < cfg.x:
        raise ValueError("need 0 <= x-lo < x")
    acc = moments.accumulate(cfg.x_lo, cfg.x, cfg.rs, cfg.primes_only, cfg.chunk_size, cfg.shards)
    rows = []
    for r in sorted(acc.sums_T):
        p = acc.has_primes
        rows.append((acc.x_lo, acc.x_hi, r, acc.sums_T[r], acc.sums_g[r],
                     acc.prime_count if p else None,
                     acc.prime_sums_T[r] if p else None,
                     acc.prime_sums_g[r] if p else None))
    return rows


def _deviations(cfg):
    T = period_range(cfg.x, 2 * cfg.x)
    rows = []
    for a in cfg.alpha:
        rep = moments.deviation_count(cfg.x, a, T=T)
        rows.append((rep.x, str(rep.alpha), rep.count, rep.bound_first, rep.bound_second))
    return rows


def _constants(cfg):
    z2, z3, z4 = analytic.zeta(2.0), analytic.zeta(3.0), analytic.zeta(4.0)
    h1, h1_half = analytic.htilde_at_1()
    rows = [
        ("c1", "4/3*log(2)", analytic.C1),
        ("c2", "(8*sqrt(2)-4)/3*log(2)", analytic.C2),
        ("zeta2", "pi^2/6", z2),
        ("zeta3", "series+euler_maclaurin", z3),
        ("zeta4", "pi^4/90", z4),
        ("F2", "(4^s-2^s+1)/(4^s-2^(s-1))*zeta(s)^2/zeta(s+1) at s=2", analytic.dirichlet_F(2.0)),
        ("F2_alt", "13/14*zeta(2)^2/zeta(3)", analytic.dirichlet_F2_alt()),
        ("Htilde1", "18/15*zeta(2)/zeta(4)", h1),
        ("Htilde1_half", "3/5*zeta(2)/zeta(4)", h1_half),
        ("log2sq_coeff", "3/5*zeta(2)/zeta(4)/4", h1_half / 4),
    ]
    for name, closed in (("A", "7/6*log(2)-37/72"), ("B", "19/6*log(2)-11/12"), ("C", "2*log(2)")):
        numeric, value = analytic.integral_ABC(name, 1e-10)
        rows.append((name, closed, value))
        rows.append((f"{name}_numeric", "adaptive_quadrature", numeric))
    return rows


def _verify(cfg):
    x = cfg.x
    if x < 2:
        raise ValueError("verify needs x >= 2")
    T = period_range(0, 2 * x)
    g = g_range(0, x, cfg.chunk_size, cfg.shards)
    report = moments.verify_theorem1(x, g=g)
    report.corollary_rows = moments.verify_corollaries(x, cfg.alpha, T=T)
    rows = report.rows()

    violations = int((T[:x] > g).sum())
    rows.append(moments.CheckRow("domination_T_le_g", x, violations, 0, 0, violations == 0))
    band = report.sum_g2 / x ** 2
    rows.append(moments.CheckRow("korolev_band", x, band, 1.0, 1.5, 1.0 <= band <= 1.5,
                                 informational=True))
    ymax = max(1, math.isqrt(x))
    thetas = [t for _, _, t in analytic.harmonic_tails(ymax)]
    rows.append(moments.CheckRow("lemma1_theta_min", ymax, min(thetas), 0.0, 1.0, min(thetas) >= 0))
    rows.append(moments.CheckRow("lemma1_theta_max", ymax, max(thetas), 0.0, 1.0, max(thetas) <= 1))
    mismatches = sum(c_closed(D) != c_brute(D) for D in range(1, LEMMA2_CAP + 1))
    rows.append(moments.CheckRow("lemma2_oracle_mismatches", LEMMA2_CAP, mismatches, 0, 0,
                                 mismatches == 0))

    ok = all(r.passed for r in rows if not r.informational)
    out = [(r.check, r.x, r.measured, r.lower, r.upper, r.passed) for r in rows]
    return out, ok


def _figures(cfg):
    return moments.figure_series(cfg.x, cfg.step, cfg.which)


def run(cfg: RunConfig) -> int:
    """Execute one command and return the process exit code."""
    try:
        cfg.validate()
        ok = True
        if cfg.command == "verify":
            rows, ok = _verify(cfg)
        else:
            rows = {"tabulate": _tabulate, "moments": _moments, "deviations": _deviations,
                    "constants": _constants, "figures": _figures}[cfg.command](cfg)
    except ResourceGuardError as exc:
        _error("resource", exc)
        return EXIT_RESOURCE
    except InternalError as exc:
        _error("internal", exc)
        return EXIT_INTERNAL
    except (ValueError, TypeError) as exc:
        _error("invalid_argument", exc)
        return EXIT_USAGE

    _write(cfg, SCHEMAS[cfg.command], rows)
    return EXIT_OK if ok else EXIT_VIOLATION


def _error(kind: str, exc: Exception) -> None:
    msg = " ".join(str(exc).split())
    print(f"cfstats: error={kind} reason={msg}", file=sys.stderr)


def _write(cfg: RunConfig, header, rows) -> None:
    if cfg.out:
        with open(cfg.out, "w", newline="") as fh:
            _write_csv(fh, header, rows)
    else:
        _write_csv(sys.stdout, header, rows)


def _write_csv(fh, header, rows) -> None:
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([fmt(v) for v in row])


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"cfstats: error=invalid_argument reason={message}", file=sys.stderr)
        sys.exit(EXIT_USAGE)


def _rs(text: str) -> list[int]:
    try:
        return [int(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad r list {text!r}")


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="cfstats", description="Period lengths of sqrt(d) and Hickerson's g(d).")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)
    common = _Parser(add_help=False)
    common.add_argument("--x", type=int, default=1000, help="range upper bound")
    common.add_argument("--out", default=None, help="output file (default: stdout)")
    common.add_argument("--chunk-size", type=int, default=DEFAULT_CHUNK)
    common.add_argument("--shards", type=int, default=os.cpu_count() or 1)
    common.add_argument("--format", default="csv", choices=["csv"])

    sub.add_parser("tabulate", parents=[common], help="d,T,g for d <= x")
    sp = sub.add_parser("moments", parents=[common], help="exact power sums over (x_lo, x]")
    sp.add_argument("--x-lo", type=int, default=0)
    sp.add_argument("--rs", type=_rs, default=[1, 2], help="comma-separated orders in 1..4")
    sp.add_argument("--primes-only", action="store_true",
                    help="also report sums restricted to prime d")
    sp = sub.add_parser("deviations", parents=[common], help="#{x<d<=2x: T(d) > alpha sqrt(d)}")
    sp.add_argument("--alpha", action="append", help="rational p/q; repeatable")
    sub.add_parser("constants", parents=[common], help="analytic constants and integrals")
    sp = sub.add_parser("verify", parents=[common], help="check the bounds at x")
    sp.add_argument("--alpha", action="append", help="rational p/q; repeatable")
    sp = sub.add_parser("figures", parents=[common], help="normalised moment curves")
    sp.add_argument("--step", type=int, default=0, help="sample spacing; 0 = 64 log-spaced points")
    sp.add_argument("--which", choices=["fig1", "fig2"], default="fig1")
    return p


def parse_config(argv=None) -> RunConfig:
    ns = build_parser().parse_args(argv)
    kw = {k: v for k, v in vars(ns).items() if v is not None}
    return RunConfig(**kw)


def main(argv=None) -> int:
    return run(parse_config(argv))


if __name__ == "__main__":
    sys.exit(main())
