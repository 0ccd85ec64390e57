"""Command line interface.

Subcommands: ``eval``, ``hausdorff``, ``table``, ``ruelle``, ``trivial``.

Exit codes: 0 success, 2 computation-domain error (poles, unreachable
bounds, invalid parameters), 3 certification failure.

Defaults may be overridden through the environment: ``HECKEZETA_W``,
``HECKEZETA_DIGITS``, ``HECKEZETA_PREC_BITS``, ``HECKEZETA_FORMAT`` and
``HECKEZETA_CACHE``.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from dataclasses import dataclass


from . import __version__
from .bounds import N_MAX, choose_n, total_bound
from .cache import ZetaCache
from .errors import CertificationError, HeckeZetaError
from .precision import PrecisionContext, format_fixed, format_sci, parse_complex
from .roots import TABLE_WS, bisect_delta, hausdorff_table
from .spectral import rank_analysis, ruelle_at_zero, vanishing_order_probe
from .transfer import GroupParam, f_n

SCHEMA_VERSION = 1
EXIT_OK, EXIT_DOMAIN, EXIT_CERT = 0, 2, 3

CSV_HELP = """\
CSV columns:
  eval       w,s_re,s_im,n,f_re,f_im,bound,p_n,q,c
  hausdorff  w,delta,lo,hi,certified_digits,n_lo,n_hi,error
  table      (same as hausdorff)
  ruelle     w,n,f0,f1,defect,ratio
  trivial    w,m,observed_rank,predicted_rank,degree_lower,degree_upper,pattern_ok[,probe_slope]
"""


@dataclass(frozen=True)
class RunConfig:
    w: str
    digits: int
    n_override: int | None = None
    precision_bits: int | None = None
    output_format: str = "text"
    cache_path: str | None = None

    def context(self) -> PrecisionContext:
        ctx = PrecisionContext(target_digits=self.digits)
        if self.precision_bits is not None:
            if self.precision_bits < ctx.working_bits:
                raise ValueError(
                    f"--prec-bits {self.precision_bits} is below the {ctx.working_bits} bits "
                    f"needed for {self.digits} digits"
                )
            ctx = ctx.with_bits(self.precision_bits)
        return ctx

    def cache(self) -> ZetaCache | None:
        return ZetaCache(self.cache_path) if self.cache_path else None


def _env(name: str, default):
    return os.environ.get(f"HECKEZETA_{name}", default)


def _ws(text: str) -> list[str]:
    return [p.strip() for p in text.split(",") if p.strip()]


# report rendering --------------------------------------------------------------------


def _emit(report: dict, rows: list[dict], columns: list[str], fmt: str, out) -> None:
    if fmt == "json":
        out.write(json.dumps(report, indent=2, sort_keys=True) + "\n")
    elif fmt == "csv":
        buf = io.StringIO()
        writer = csv.DictWriter(buf, fieldnames=columns, lineterminator="\n", extrasaction="ignore")
        writer.writeheader()
        writer.writerows(rows)
        out.write(buf.getvalue())
    else:
        for row in rows:
            width = max(len(c) for c in columns)
            for c in columns:
                if c in row and row[c] != "":
                    out.write(f"{c:<{width}}  {row[c]}\n")
            if len(rows) > 1:
                out.write("\n")


def _envelope(kind: str, **payload) -> dict:
    return {"schema": f"heckezeta.{kind}", "version": SCHEMA_VERSION, **payload}


# commands ----------------------------------------------------------------------------


def cmd_eval(cfg: RunConfig, s_text: str, out=sys.stdout) -> dict:
    ctx = cfg.context()
    group = GroupParam.parse(cfg.w, ctx)
    s = parse_complex(s_text, ctx)
    if cfg.n_override is not None:
        n = cfg.n_override
    else:
        n = choose_n(s, group, f"1e-{cfg.digits}", ctx, n_max=N_MAX)
    budget = total_bound(s, n, group, ctx)
    value = f_n(s, n, group, ctx, cache=cfg.cache()).value
    row = {
        "w": group.label,
        "s_re": format_fixed(s.real, cfg.digits),
        "s_im": format_fixed(s.imag, cfg.digits),
        "n": str(n),
        "f_re": format_fixed(value.real, cfg.digits),
        "f_im": format_fixed(value.imag, cfg.digits),
        "bound": format_sci(budget.total),
        "p_n": format_sci(budget.p_n),
        "q": format_sci(budget.q),
        "c": format_sci(budget.c.value),
    }
    report = _envelope("eval", **row, digits=cfg.digits, working_bits=ctx.working_bits)
    _emit(report, [row], list(row), cfg.output_format, out)
    return report


def _enclosure_row(w: str, enc, err: str | None, digits: int) -> dict:
    if enc is None:
        return {"w": w, "delta": "", "lo": "", "hi": "", "certified_digits": "",
                "n_lo": "", "n_hi": "", "error": err or ""}
    return {
        "w": w,
        "delta": enc.decimal(digits),
        "lo": format_fixed(enc.lo, digits + 5, "down"),
        "hi": format_fixed(enc.hi, digits + 5, "up"),
        "certified_digits": str(enc.digits),
        "n_lo": str(enc.lo_cert.n),
        "n_hi": str(enc.hi_cert.n),
        "error": "",
    }


_ENCLOSURE_COLUMNS = ["w", "delta", "lo", "hi", "certified_digits", "n_lo", "n_hi", "error"]


def cmd_hausdorff(cfg: RunConfig, out=sys.stdout, ws: list[str] | None = None, workers: int = 1,
                  kind: str = "hausdorff") -> dict:
    ctx = cfg.context()
    ws = ws if ws is not None else _ws(cfg.w)
    for w in ws:
        GroupParam.parse(w, ctx)
    if len(ws) == 1 and workers == 1:
        rows = [_enclosure_row(ws[0], bisect_delta(ws[0], cfg.digits, ctx, cache=cfg.cache()), None,
                               cfg.digits)]
    else:
        table = hausdorff_table(ws, cfg.digits, ctx, workers=workers)
        rows = [_enclosure_row(r.w, r.enclosure, r.error, cfg.digits) for r in table]
    report = _envelope(kind, digits=cfg.digits, rows=rows)
    if cfg.output_format == "text":
        width = max(len(r["w"]) for r in rows) if rows else 1
        for r in rows:
            shown = r["delta"] if not r["error"] else f"FAILED ({r['error']})"
            out.write(f"{r['w']:>{width}}  {shown}\n")
    else:
        _emit(report, rows, _ENCLOSURE_COLUMNS, cfg.output_format, out)
    if any(r["error"] for r in rows):
        report["failed"] = True
    return report


def cmd_ruelle(cfg: RunConfig, out=sys.stdout) -> dict:
    ctx = cfg.context()
    n = cfg.n_override or 50
    rep = ruelle_at_zero(cfg.w, n, ctx, cache=cfg.cache())
    row = {
        "w": rep.w.label,
        "n": str(n),
        "f0": format_fixed(rep.f0, cfg.digits),
        "f1": format_fixed(rep.f1, cfg.digits),
        "defect": format_sci(rep.defect),
        "ratio": format_fixed(rep.ratio, cfg.digits),
    }
    report = _envelope("ruelle", **row, digits=cfg.digits)
    _emit(report, [row], list(row), cfg.output_format, out)
    return report


def cmd_trivial(cfg: RunConfig, m: int, probe: bool = False, out=sys.stdout) -> dict:
    ctx = cfg.context()
    rep = rank_analysis(m, cfg.w, ctx)
    row = {
        "w": GroupParam.parse(cfg.w, ctx).label,
        "m": str(m),
        "observed_rank": str(rep.observed_rank),
        "predicted_rank": str(rep.predicted_rank),
        "degree_lower": str(rep.degree_lower),
        "degree_upper": str(rep.degree_upper),
        "pattern_ok": "true" if rep.pattern_ok else "false",
    }
    if probe:
        res = vanishing_order_probe(m, cfg.w, ctx)
        row["probe_slope"] = f"{res.slope:.6f}"
        row["probe_note"] = "heuristic fit, not a certificate"
    report = _envelope("trivial", **row)
    _emit(report, [row], list(row), cfg.output_format, out)
    return report


# argument parsing ------------------------------------------------------------------------


def _add_common(p: argparse.ArgumentParser, w_default: str | None) -> None:
    p.add_argument("--w", default=_env("W", w_default),
                   help="Hecke parameter w > 2 (decimal or symbolic such as 2pi)")
    p.add_argument("--digits", type=int, default=int(_env("DIGITS", 50)),
                   help="decimal digits requested (default 50)")
    p.add_argument("--n", type=int, default=None, help="matrix size N (overrides the automatic choice)")
    p.add_argument("--prec-bits", type=int, default=_env("PREC_BITS", None),
                   help="binary working precision (default: derived from --digits)")
    p.add_argument("--format", choices=("text", "json", "csv"), default=_env("FORMAT", "text"))
    p.add_argument("--cache", default=_env("CACHE", None), help="zeta value cache file")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="heckezeta",
        description="Certified finite-determinant approximations of the Selberg zeta "
        "function of Hecke triangle groups.",
        epilog=CSV_HELP,
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("eval", help="F_N(s) with its certified error bound",
                       epilog="Use --s=-0.25,0 for arguments with a leading minus sign.")
    _add_common(p, "3")
    p.add_argument("--s", required=True, help="complex argument as 're,im'")

    p = sub.add_parser("hausdorff", help="certified Hausdorff dimension for one or more w")
    _add_common(p, "3")
    p.add_argument("--workers", type=int, default=1)

    p = sub.add_parser("table", help="the Hausdorff dimension table (default w list 3..100)")
    _add_common(p, ",".join(str(w) for w in TABLE_WS))
    p.add_argument("--workers", type=int, default=1)

    p = sub.add_parser("ruelle", help="F_N(0), F_{N-1}(1) and R(0) = F_N(0)/F_{N-1}(1)")
    _add_common(p, "3")

    p = sub.add_parser("trivial", help="rank of 1 - U(0) and degree bounds of the zero at s = -m")
    _add_common(p, "3")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--probe", action="store_true", help="also run the heuristic vanishing-order probe")
    return parser


def _config(args) -> RunConfig:
    return RunConfig(
        w=args.w,
        digits=args.digits,
        n_override=args.n,
        precision_bits=int(args.prec_bits) if args.prec_bits is not None else None,
        output_format=args.format,
        cache_path=args.cache,
    )


def run(argv: list[str] | None = None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    args = build_parser().parse_args(argv)
    try:
        cfg = _config(args)
        if args.command == "eval":
            cmd_eval(cfg, args.s, out)
        elif args.command in ("hausdorff", "table"):
            report = cmd_hausdorff(cfg, out, workers=args.workers, kind=args.command)
            if report.get("failed"):
                return EXIT_CERT
        elif args.command == "ruelle":
            cmd_ruelle(cfg, out)
        elif args.command == "trivial":
            cmd_trivial(cfg, args.m, args.probe, out)
    except CertificationError as exc:
        return _fail(exc, EXIT_CERT, args.format, out, err)
    except (HeckeZetaError, ValueError, ZeroDivisionError) as exc:
        return _fail(exc, EXIT_DOMAIN, args.format, out, err)
    return EXIT_OK


def _fail(exc: Exception, code: int, fmt: str, out, err) -> int:
    if fmt == "json":
        payload = _envelope("error", error=type(exc).__name__, message=str(exc), exit_code=code)
        out.write(json.dumps(payload, indent=2, sort_keys=True) + "\n")
    else:
        err.write(f"heckezeta: {type(exc).__name__}: {exc}\n")
    return code


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
