"""Command-line front door: digit files, Toeplitz verification, analytics reports.

Subcommands: ``digits``, ``verify``, ``report <kind>``. Exit codes are a
stable contract for scripting: 0 success, 1 verification failure, 2 bad
usage or config. All parallelism lives below the command layer and never
changes output bytes.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from contextlib import contextmanager
from dataclasses import dataclass
from math import isqrt
from multiprocessing import Pool

import numpy as np

from . import analytics, digit_stream
from .additive_sieve import DEFAULT_SEGMENT
from .digit_stream import DigitBlock, digits_block
from .prime_engine import PrimeSetSpec, parse_spec, sieve_primes

__all__ = ["RunConfig", "main"]


def _num(text: str) -> int:
    """Integer argument, scientific notation welcome (1e6 -> 1000000)."""
    try:
        return int(text, 10)
    except ValueError:
        pass
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if value != int(value):
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}")
    return int(value)


def _grid(text: str) -> list[int]:
    return [_num(tok) for tok in text.split(",") if tok]


def _default_segment() -> int:
    env = os.environ.get("TOEPLITZ_SEGMENT")
    if env:
        try:
            return _num(env)
        except argparse.ArgumentTypeError:
            raise ValueError(f"TOEPLITZ_SEGMENT is not a number: {env!r}") from None
    return DEFAULT_SEGMENT


@dataclass(frozen=True)
class RunConfig:
    """One command's full configuration; echoed into every artifact."""

    command: str
    spec_str: str
    base: int
    n: int
    segment: int
    grid: tuple[int, ...]
    out: str
    fmt: str
    workers: int
    a: int = 1
    p_limit: int = 0

    def __post_init__(self):
        for name in ("base", "n", "segment", "workers"):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be positive, got {getattr(self, name)}")
        parse_spec(self.spec_str)  # raises on malformed specs

    @property
    def spec(self) -> PrimeSetSpec:
        return parse_spec(self.spec_str)

    def header_comment(self) -> str:
        parts = [
            f"command={self.command}",
            f"spec={self.spec_str}",
            f"base={self.base}",
            f"n={self.n}",
            f"segment={self.segment}",
            f"workers={self.workers}",
            f"format={self.fmt}",
        ]
        if self.grid:
            parts.append("grid=" + ",".join(map(str, self.grid)))
        if self.command == "report-expsum" or self.command == "report-sigma":
            parts.append(f"a={self.a}")
        if self.p_limit:
            parts.append(f"p_limit={self.p_limit}")
        return "# " + " ".join(parts)


# ----------------------------------------------------------------------------
# parallel digit generation

_worker: dict = {}


def _init_worker(spec_str: str, base: int, prime_limit: int) -> None:
    _worker["spec"] = parse_spec(spec_str)
    _worker["base"] = base
    _worker["primes"] = sieve_primes(prime_limit)


def _block_job(span: tuple[int, int]) -> np.ndarray:
    lo, hi = span
    return digits_block(lo, hi, _worker["base"], _worker["spec"], _worker["primes"]).digits


def _parallel_blocks(spec: PrimeSetSpec, base: int, n: int, segment: int, workers: int):
    """Digit blocks for n = 1..N computed by a worker pool, yielded in order."""
    spans = []
    lo = 1
    while lo <= n:
        hi = min(lo + segment, n + 1)
        spans.append((lo, hi))
        lo = hi
    prime_limit = max(2, isqrt(n))
    with Pool(workers, initializer=_init_worker, initargs=(str(spec), base, prime_limit)) as pool:
        for (lo, hi), digits in zip(spans, pool.imap(_block_job, spans)):
            yield DigitBlock(base, lo, hi, digits)


@contextmanager
def _open_out(path: str):
    if path == "-":
        yield sys.stdout.buffer
        sys.stdout.buffer.flush()
    else:
        with open(path, "wb") as fh:
            yield fh


# ----------------------------------------------------------------------------
# commands


def cmd_digits(cfg: RunConfig) -> int:
    t0 = time.perf_counter()
    spec = cfg.spec
    blocks = None
    if cfg.workers > 1:
        blocks = _parallel_blocks(spec, cfg.base, cfg.n, cfg.segment, cfg.workers)
    with _open_out(cfg.out) as out:
        written = digit_stream.emit_expansion(
            cfg.n, cfg.base, spec, cfg.fmt, out, segment=cfg.segment, blocks=blocks
        )
    elapsed = time.perf_counter() - t0
    print(f"{written} digits in {elapsed:.2f} s", file=sys.stderr)
    return 0


def _read_digits_file(path: str, fmt: str, base: int) -> np.ndarray:
    with open(path, "rb") as fh:
        data = fh.read()
    if fmt == "raw":
        return np.frombuffer(data, dtype=np.uint8)
    text = data.decode()
    lines = [ln for ln in text.splitlines() if ln and not ln.startswith("#")]
    body = "".join(lines)
    if base <= 10:
        return np.frombuffer(body.encode(), dtype=np.uint8) - ord("0")
    return np.array([int(tok) for tok in body.split(",") if tok], dtype=np.uint32)


def cmd_verify(cfg: RunConfig, check_file: str | None) -> int:
    spec = cfg.spec
    digits = None
    if check_file is not None:
        digits = _read_digits_file(check_file, cfg.fmt, cfg.base)
    report = digit_stream.verify_toeplitz(
        cfg.n, cfg.base, spec, cfg.p_limit, digits=digits, segment=cfg.segment
    )
    for m, p, a_m, a_mp in report.violations:
        print(f"{m} {p} {a_m} {a_mp}")
    status = "OK" if report.ok else f"{len(report.violations)} violations"
    print(
        f"checked {report.pairs_checked} pairs (n={cfg.n}, p_limit={cfg.p_limit}): {status}",
        file=sys.stderr,
    )
    return 0 if report.ok else 1


def _write_report(cfg: RunConfig, csv_text: str, json_obj: dict) -> None:
    with _open_out(cfg.out) as out:
        if cfg.fmt == "json":
            json_obj = {"config": cfg.header_comment().lstrip("# "), **json_obj}
            out.write((json.dumps(json_obj, indent=2) + "\n").encode())
        else:
            out.write((cfg.header_comment() + "\n" + csv_text).encode())


def cmd_report(cfg: RunConfig, kind: str, tail_limit: int | None) -> int:
    spec = cfg.spec
    grid = list(cfg.grid) if cfg.grid else analytics.default_grid(cfg.n)

    if kind == "discrepancy":
        rep = analytics.bound_report(spec, cfg.base, grid, segment=cfg.segment)
        _write_report(cfg, rep.to_csv(), rep.to_json_obj())
    elif kind == "expsum":
        series = analytics.exp_sum(
            grid[-1], cfg.a, cfg.base, spec, checkpoints=grid, segment=cfg.segment
        )
        _write_report(cfg, series.to_csv(), series.to_json_obj())
    elif kind == "sigma":
        lines = ["N,sigma_re,sigma_im,over_log_re,over_log_im,truncated"]
        rows = []
        for n in grid:
            s = analytics.sigma_N(spec, cfg.base, cfg.a, n)
            lines.append(
                f"{n},{s.value.real:.12g},{s.value.imag:.12g},"
                f"{s.over_log.real:.12g},{s.over_log.imag:.12g},{int(s.truncated)}"
            )
            rows.append(
                {
                    "N": n,
                    "sigma_re": s.value.real,
                    "sigma_im": s.value.imag,
                    "over_log_re": s.over_log.real,
                    "over_log_im": s.over_log.imag,
                    "truncated": s.truncated,
                }
            )
        _write_report(cfg, "\n".join(lines) + "\n", {"spec": cfg.spec_str, "rows": rows})
    elif kind == "eta":
        res = analytics.eta_N(spec, cfg.n, tail_limit=tail_limit)
        note = "lower-bound(truncated-tail)" if res.truncated else "exact"
        csv_text = f"N,eta,z,kind\n{cfg.n},{res.value:.12g},{res.z},{note}\n"
        obj = {"spec": cfg.spec_str, "N": cfg.n, "eta": res.value, "z": res.z, "kind": note}
        _write_report(cfg, csv_text, obj)
    elif kind == "freq-limit":
        freqs = analytics.limiting_frequencies(spec, cfg.base)
        csv_text = ",".join(f"{f:.6f}" for f in freqs) + "\n"
        obj = {"spec": cfg.spec_str, "base": cfg.base, "frequencies": list(freqs)}
        _write_report(cfg, csv_text, obj)
    else:
        raise ValueError(f"unknown report kind {kind!r}")
    return 0


# ----------------------------------------------------------------------------
# argument wiring


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="toeplitz",
        description="Digit streams a_n = Omega_P(n) mod b and their normality analytics.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser, fmt_choices: tuple[str, ...], fmt_default: str):
        p.add_argument("--spec", required=True, help="prime set: all | empty | finite:2,3 | cofinite:2 | residue:4:1,3")
        p.add_argument("--base", type=_num, default=2)
        p.add_argument("--segment", type=_num, default=None, help="segment length (env TOEPLITZ_SEGMENT overrides the default)")
        p.add_argument("--workers", type=_num, default=None, help="worker pool size (default: machine parallelism)")
        p.add_argument("--out", default="-", help="output path, - for stdout")
        p.add_argument("--format", dest="fmt", choices=fmt_choices, default=fmt_default)

    p_digits = sub.add_parser("digits", help="write the first N digits of the expansion")
    common(p_digits, ("text", "raw"), "text")
    p_digits.add_argument("--n", type=_num, required=True)

    p_verify = sub.add_parser("verify", help="check the digit constraint a_n = a_np over P")
    common(p_verify, ("text", "raw"), "text")
    p_verify.add_argument("--n", type=_num, required=True)
    p_verify.add_argument("--p-limit", type=_num, required=True, help="test P-primes up to this bound")
    p_verify.add_argument("--check-file", default=None, help="verify digits from this file instead of regenerating")

    p_report = sub.add_parser("report", help="write an analytics report (CSV or JSON)")
    p_report.add_argument("kind", choices=("discrepancy", "expsum", "sigma", "eta", "freq-limit"))
    common(p_report, ("csv", "json"), "csv")
    p_report.add_argument("--n", type=_num, default=None, help="endpoint N (grid defaults to x10 steps from 1e3)")
    p_report.add_argument("--grid", type=_grid, default=None, help="comma-separated checkpoints, e.g. 1e4,1e5,1e6")
    p_report.add_argument("--a", type=_num, default=1, help="numerator of the phase a/b")
    p_report.add_argument("--tail-limit", type=_num, default=None, help="truncation bound for the eta tail sum")
    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        segment = args.segment if args.segment is not None else _default_segment()
        workers = args.workers if args.workers is not None else (os.cpu_count() or 1)
        if args.command == "report":
            grid = tuple(args.grid) if args.grid else ()
            n = args.n if args.n is not None else (grid[-1] if grid else None)
            if n is None:
                if args.kind != "freq-limit":  # closed form, no N involved
                    print("report needs --n or --grid", file=sys.stderr)
                    return 2
                n = 1
            cfg = RunConfig(
                command=f"report-{args.kind}",
                spec_str=args.spec,
                base=args.base,
                n=n,
                segment=segment,
                grid=grid,
                out=args.out,
                fmt=args.fmt,
                workers=workers,
                a=args.a,
            )
            return cmd_report(cfg, args.kind, args.tail_limit)
        cfg = RunConfig(
            command=args.command,
            spec_str=args.spec,
            base=args.base,
            n=args.n,
            segment=segment,
            grid=(),
            out=args.out,
            fmt=args.fmt,
            workers=workers,
            p_limit=getattr(args, "p_limit", 0),
        )
        if args.command == "digits":
            return cmd_digits(cfg)
        return cmd_verify(cfg, args.check_file)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
