"""Command-line front end: ``eal <command> [options]``.

Every command writes a CSV table (to ``--out`` or standard output) whose
``#`` header lines echo the full configuration, seed included, so a table
can be regenerated from its own header.  ``--threads`` only changes how
chunks are scheduled and is therefore left out of the header; output paths
are left out as well.  Human-readable summaries go to standard output when
``--out`` is given and to standard error otherwise.

Exit status is 0 on success, 2 for invalid arguments and 1 for I/O
failures or a failed internal sanity check.
"""

from __future__ import annotations

import argparse
import io
import math
import os
import sys

from . import __version__, _random
from .channel import cer_sweep, snr_at_cer
from .infotheory import (
    MonteCarloConfig,
    dispersion,
    epsilon_rate_curve,
    estimate_iv,
    fbl_argument_stderr,
    fbl_epsilon,
    mi_gap_asymptotic,
    mutual_information,
)
from .lattice import (
    build_voronoi_constellation,
    epstein_zeta,
    epstein_zeta_tail,
    second_moment_continuous,
    shaping_gain_db,
    write_constellation_csv,
)
from .stbc import CodebookSpec
from .svgplot import Plot

RINGS = ("eisenstein", "gaussian")
SEED_ENV = "EAL_DEFAULT_SEED"


class SanityError(RuntimeError):
    pass


# -- argument types ---------------------------------------------------------

def _count(text: str) -> int:
    """Positive integer, also written as ``2e6``."""
    try:
        v = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if not math.isfinite(v) or v < 1 or v != int(v):
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text!r}")
    return int(v)


def _seed(text: str) -> int:
    try:
        v = int(text, 0)
    except ValueError:
        raise argparse.ArgumentTypeError(f"seed must be an integer, got {text!r}") from None
    if not 0 <= v < 2**64:
        raise argparse.ArgumentTypeError("seed must lie in [0, 2^64)")
    return v


def _real(text: str) -> float:
    try:
        v = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if not math.isfinite(v):
        raise argparse.ArgumentTypeError(f"expected a finite number, got {text!r}")
    return v


class Grid(list):
    """List of grid values that remembers the text it was parsed from."""

    def __init__(self, values, text: str):
        super().__init__(values)
        self.text = text


def _grid(text: str) -> Grid:
    """``FLOAT`` or inclusive ``LO:HI:STEP``."""
    text = text.strip()
    parts = text.split(":")
    if len(parts) == 1:
        return Grid([_real(text)], text)
    if len(parts) != 3:
        raise argparse.ArgumentTypeError(f"expected LO:HI:STEP, got {text!r}")
    lo, hi, step = (_real(p) for p in parts)
    if step <= 0 or hi < lo:
        raise argparse.ArgumentTypeError("need HI >= LO and STEP > 0")
    count = int(math.floor((hi - lo) / step + 1e-9))
    if count > 100_000:
        raise argparse.ArgumentTypeError("grid too large")
    return Grid([round(lo + k * step, 12) for k in range(count + 1)], text)


def _int_list(text: str) -> list[int]:
    try:
        vals = [int(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None
    if not vals:
        raise argparse.ArgumentTypeError("empty list")
    if min(vals) < 1:
        raise argparse.ArgumentTypeError("list entries must be positive")
    return vals


def _positive_int(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
    if v < 1:
        raise argparse.ArgumentTypeError("expected a positive integer")
    return v


# -- output helpers ---------------------------------------------------------

def _num(v) -> str:
    if isinstance(v, bool):
        return str(int(v))
    if isinstance(v, int):
        return str(v)
    if isinstance(v, float):
        return f"{v:.17g}"
    return str(v)


def _fmt_config(v) -> str:
    if isinstance(v, Grid):
        return v.text
    if isinstance(v, (list, tuple)):
        return ",".join(_fmt_config(x) for x in v)
    return _num(v)


def _header(command: str, config: dict) -> list[str]:
    lines = [f"eal {__version__} {command}"]
    lines += [f"{k} = {_fmt_config(v)}" for k, v in config.items()]
    return lines


class Table:
    def __init__(self, command: str, config: dict, columns):
        self.buf = io.StringIO()
        for line in _header(command, config):
            self.buf.write(f"# {line}\n")
        self.buf.write(",".join(columns) + "\n")

    def row(self, *values) -> None:
        self.buf.write(",".join(_num(v) for v in values) + "\n")

    def getvalue(self) -> str:
        return self.buf.getvalue()


def _emit(args, text: str) -> None:
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
        sys.stdout.flush()


def _note(args, line: str) -> None:
    print(line, file=sys.stdout if args.out else sys.stderr)


def _check(ok: bool, message: str) -> None:
    if not ok:
        raise SanityError(message)


def _rings(args) -> list[str]:
    return list(RINGS) if args.ring == "both" else [args.ring]


def _constellation(ring: str, p: int):
    c = build_voronoi_constellation(ring, p)
    if len(c) > 1:
        _check(abs(c.avg_energy - 1.0) <= 1e-9, f"{ring}: constellation not normalised")
    return c


# -- commands ---------------------------------------------------------------

def cmd_constellation(args) -> int:
    c = _constellation(args.ring, args.p)
    buf = io.StringIO()
    write_constellation_csv(c, buf, _header("constellation", {"ring": args.ring, "p": args.p}))
    _emit(args, buf.getvalue())
    _note(args, f"points: {len(c)}")
    _note(args, f"raw_energy: {c.raw_energy:.10g}")
    _note(args, f"scale: {c.scale:.10g}")
    dmin = c.min_distance
    _note(args, f"d_min: {dmin:.10g}" if math.isfinite(dmin) else "d_min: undefined")
    return 0


def cmd_shaping_gain(args) -> int:
    config = {"p": args.p_list}
    t = Table("shaping-gain", config, ["p", "e_square", "e_hex", "gain_db"])
    es, eh = second_moment_continuous("square", 1.0), second_moment_continuous("hexagon", 1.0)
    cont = shaping_gain_db(es, eh)
    t.row("continuous", es, eh, cont)
    _note(args, f"continuous cells: {cont:.4f} dB")
    for p in args.p_list:
        sq = build_voronoi_constellation("gaussian", p).raw_energy
        hx = build_voronoi_constellation("eisenstein", p).raw_energy
        if sq > 0 and hx > 0:
            g = shaping_gain_db(sq, hx)
            t.row(p, sq, hx, g)
            _note(args, f"p = {p}: {g:.4f} dB")
        else:
            t.row(p, sq, hx, "undefined")
            _note(args, f"p = {p}: undefined (single point)")
    _emit(args, t.getvalue())
    return 0


def cmd_zeta(args) -> int:
    kinds = ["square", "hex"] if args.kind == "both" else [args.kind]
    t = Table("zeta", {"kind": args.kind, "radius": args.radius}, ["kind", "radius", "value", "tail_bound"])
    vals = {}
    for k in kinds:
        vals[k] = epstein_zeta(k, args.radius)
        t.row(k, args.radius, vals[k], epstein_zeta_tail(k, args.radius))
        _note(args, f"zeta_{k}(2) = {vals[k]:.6f}")
    if len(vals) == 2:
        ratio = vals["square"] / vals["hex"]
        _note(args, f"ratio square/hex = {ratio:.6f}")
        _note(args, f"asymptotic MI gap = {mi_gap_asymptotic(zeta_ratio=ratio):.4f} dB")
    _emit(args, t.getvalue())
    return 0


def cmd_mi(args) -> int:
    config = {"ring": args.ring, "p": args.p, "snr_db": args.snr_db, "samples": args.samples,
              "seed": args.seed, "chunks": args.chunks}
    t = Table("mi", config, ["ring", "snr_db", "samples", "i_bits", "stderr"])
    plot = Plot(xlabel="Es/N0 (dB)", ylabel="I (bits per symbol)")
    for r_idx, ring in enumerate(_rings(args)):
        c = _constellation(ring, args.p)
        ys = []
        for s_idx, snr in enumerate(args.snr_db):
            seed = _random.derive_seed(args.seed, r_idx, s_idx)
            mi = mutual_information(c, snr, args.samples, seed, args.chunks, args.threads)
            _check(math.isfinite(mi.stderr) and mi.stderr >= 0, "missing MI standard error")
            t.row(ring, snr, mi.samples, mi.mean, mi.stderr)
            ys.append(mi.mean)
        plot.add(args.snr_db, ys, ring, dashed=ring == "gaussian")
    _emit(args, t.getvalue())
    if args.svg:
        plot.save(args.svg)
    return 0


def cmd_dispersion(args) -> int:
    config = {"ring": args.ring, "p": args.p, "snr_db": args.snr_db, "h_samples": args.h_samples,
              "inner": args.inner, "seed": args.seed, "chunks": args.chunks}
    t = Table("dispersion", config, ["ring", "snr_db", "h_samples", "per_h_samples", "v_bits2", "stderr",
                                     "e_var_given_h", "var_e_given_h", "i_bits", "i_stderr"])
    plot = Plot(xlabel="Es/N0 (dB)", ylabel="V (bits^2 per symbol)")
    for r_idx, ring in enumerate(_rings(args)):
        c = _constellation(ring, args.p)
        ys = []
        for s_idx, snr in enumerate(args.snr_db):
            seed = _random.derive_seed(args.seed, r_idx, s_idx)
            d = dispersion(c, snr, args.h_samples, args.inner, seed, args.chunks, args.threads)
            _check(math.isfinite(d.stderr) and d.stderr >= 0, "missing dispersion standard error")
            t.row(ring, snr, d.h_samples, d.per_h_samples, d.v, d.stderr, d.e_var_given_h,
                  d.var_e_given_h, d.i_mean, d.i_stderr)
            ys.append(d.v)
        plot.add(args.snr_db, ys, ring, dashed=ring == "gaussian")
    _emit(args, t.getvalue())
    if args.svg:
        plot.save(args.svg)
    return 0


def cmd_cer(args) -> int:
    config = {"ring": args.ring, "p": args.p, "snr_db": args.snr_db, "trials": args.trials,
              "seed": args.seed, "chunks": args.chunks}
    c = _constellation(args.ring, args.p)
    res = cer_sweep(CodebookSpec(c), args.snr_db, args.trials, args.seed, args.chunks, args.threads)
    t = Table("cer", config, ["snr_db", "trials", "errors", "cer", "ci_lo", "ci_hi"])
    for r in res:
        lo, hi = r.wilson_ci95
        t.row(r.snr_db, r.trials, r.errors, r.cer, lo, hi)
    _emit(args, t.getvalue())
    if args.target is not None:
        try:
            x, se = snr_at_cer(res, args.target)
            _note(args, f"SNR at CER {args.target:g}: {x:.4f} dB (stderr {se:.4f})")
        except ValueError as exc:
            _note(args, f"SNR at CER {args.target:g}: not available ({exc})")
    if args.svg:
        plot = Plot(xlabel="Es/N0 (dB)", ylabel="codeword error rate", logy=True)
        plot.add([r.snr_db for r in res], [r.cer for r in res], args.ring, dashed=args.ring == "gaussian")
        plot.save(args.svg)
    return 0


def cmd_figure1(args) -> int:
    config = {"ring": args.ring, "p": args.p, "snr_db": args.snr_db, "n": args.n,
              "rate_grid": args.rate_grid, "rate": args.rate, "samples": args.samples,
              "h_samples": args.h_samples, "inner": args.inner, "seed": args.seed,
              "chunks": args.chunks}
    for n in args.n:
        if n < 2 or n % 2:
            raise argparse.ArgumentTypeError(f"blocklengths must be even and >= 2, got {n}")
    mc = MonteCarloConfig(args.samples, args.h_samples, args.inner, args.seed, args.chunks, args.threads)
    t = Table("figure1", config, ["ring", "snr_db", "n", "rate_bits", "epsilon", "i_bits", "v_bits2",
                                  "mi_stderr", "v_stderr"])
    plot = Plot(title=f"Normal approximation, Es/N0 = {args.snr_db:g} dB, M = {args.p**2}",
                xlabel="rate R (bits per symbol)", ylabel="error probability", logy=True,
                ylim=(1e-8, 1.0))
    colors = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"]
    summary = {}
    for ring in _rings(args):
        c = _constellation(ring, args.p)
        mi, disp = estimate_iv(c, args.snr_db, mc)
        _check(math.isfinite(mi.stderr) and math.isfinite(disp.stderr), "missing standard errors")
        _check(disp.v > 0, f"{ring}: nonpositive dispersion estimate")
        pts = epsilon_rate_curve(c, args.snr_db, args.n, args.rate_grid, estimates=(mi, disp))
        for p in pts:
            t.row(ring, args.snr_db, p.n, p.rate, p.epsilon, mi.mean, disp.v, mi.stderr, disp.stderr)
        for k, n in enumerate(args.n):
            xs = [p.rate for p in pts if p.n == n]
            ys = [p.epsilon for p in pts if p.n == n]
            plot.add(xs, ys, f"{ring} n={n}", dashed=ring == "gaussian", color=colors[k % len(colors)])
        summary[ring] = (mi, disp)
        _note(args, f"{ring}: I = {mi.mean:.5f} +- {mi.stderr:.5f} bits, "
                    f"V = {disp.v:.5f} +- {disp.stderr:.5f} bits^2")
    for n in args.n:
        parts = []
        for ring, (mi, disp) in summary.items():
            eps = fbl_epsilon(mi.mean, disp.v, n, args.rate)
            z, se = fbl_argument_stderr(mi.mean, disp.v, n, args.rate, mi.stderr, disp.stderr)
            parts.append(f"{ring} eps = {eps:.4g} (z = {z:.3f} +- {se:.3f})")
        _note(args, f"R = {args.rate:g}, n = {n}: " + "; ".join(parts))
    _emit(args, t.getvalue())
    if args.svg:
        plot.save(args.svg)
    return 0


# -- parser -----------------------------------------------------------------

def _default_seed() -> int:
    text = os.environ.get(SEED_ENV)
    if text is None or not text.strip():
        return _random.DEFAULT_SEED
    try:
        return _seed(text.strip())
    except argparse.ArgumentTypeError as exc:
        raise SystemExit(f"eal: invalid {SEED_ENV}: {exc}") from None


def build_parser(default_seed: int | None = None) -> argparse.ArgumentParser:
    seed = _random.DEFAULT_SEED if default_seed is None else default_seed
    parser = argparse.ArgumentParser(prog="eal", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"eal {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", metavar="PATH", help="CSV output file (default: standard output)")
    common.add_argument("--seed", type=_seed, default=seed,
                        help=f"master seed (default: ${SEED_ENV} or {_random.DEFAULT_SEED})")
    common.add_argument("--threads", type=_positive_int, default=1,
                        help="worker threads; never changes results")
    common.add_argument("--chunks", type=_positive_int, default=_random.DEFAULT_CHUNKS,
                        help="number of independent random-stream chunks")

    def ring_arg(p, allow_both=True, default="both"):
        choices = RINGS + ("both",) if allow_both else RINGS
        p.add_argument("--ring", choices=choices, default=default)

    def p_arg(p):
        p.add_argument("--p", type=_positive_int, default=13, help="Voronoi index: p^2 points")

    s = sub.add_parser("constellation", parents=[common], help="export a Voronoi constellation")
    ring_arg(s, allow_both=False, default="eisenstein")
    p_arg(s)
    s.set_defaults(func=cmd_constellation)

    s = sub.add_parser("shaping-gain", parents=[common], help="continuous and finite-p shaping gains")
    s.add_argument("--p", dest="p_list", type=_int_list, default=[7, 13, 31, 61],
                   help="comma-separated sweep of p values")
    s.set_defaults(func=cmd_shaping_gain)

    s = sub.add_parser("zeta", parents=[common], help="Epstein zeta values at s = 2")
    s.add_argument("--kind", choices=("square", "hex", "both"), default="both")
    s.add_argument("--radius", type=_positive_int, default=2000)
    s.set_defaults(func=cmd_zeta)

    s = sub.add_parser("mi", parents=[common], help="constellation-constrained mutual information")
    ring_arg(s)
    p_arg(s)
    s.add_argument("--snr-db", type=_grid, default=[22.0], help="FLOAT or LO:HI:STEP")
    s.add_argument("--samples", type=_count, default=2_000_000)
    s.add_argument("--svg", metavar="PATH")
    s.set_defaults(func=cmd_mi)

    s = sub.add_parser("dispersion", parents=[common], help="channel dispersion")
    ring_arg(s)
    p_arg(s)
    s.add_argument("--snr-db", type=_grid, default=[22.0], help="FLOAT or LO:HI:STEP")
    s.add_argument("--h-samples", type=_count, default=20_000)
    s.add_argument("--inner", type=_count, default=200, help="inner draws per channel realisation")
    s.add_argument("--svg", metavar="PATH")
    s.set_defaults(func=cmd_dispersion)

    s = sub.add_parser("cer", parents=[common], help="Monte Carlo codeword error rate")
    ring_arg(s, allow_both=False, default="eisenstein")
    p_arg(s)
    s.add_argument("--snr-db", type=_grid, default=_grid("30:38:2"), help="FLOAT or LO:HI:STEP")
    s.add_argument("--trials", type=_count, default=1_000_000)
    s.add_argument("--target", type=_real, help="report the SNR where the CER crosses this value")
    s.add_argument("--svg", metavar="PATH")
    s.set_defaults(func=cmd_cer)

    s = sub.add_parser("figure1", parents=[common], help="finite-blocklength error/rate curves")
    ring_arg(s)
    p_arg(s)
    s.add_argument("--snr-db", type=_real, default=22.0)
    s.add_argument("--n", type=_int_list, default=[128, 256, 512, 1024], help="blocklengths")
    s.add_argument("--rate-grid", type=_grid, default=_grid("6.0:7.4:0.01"), help="LO:HI:STEP")
    s.add_argument("--rate", type=_real, default=6.758, help="operating rate for the summary")
    s.add_argument("--samples", type=_count, default=2_000_000, help="MI samples")
    s.add_argument("--h-samples", type=_count, default=20_000)
    s.add_argument("--inner", type=_count, default=200)
    s.add_argument("--svg", metavar="PATH")
    s.set_defaults(func=cmd_figure1)
    return parser


def main(argv=None) -> int:
    parser = build_parser(_default_seed())
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (argparse.ArgumentTypeError, ValueError) as exc:
        # domain errors raised by the library for an invalid configuration
        parser.error(str(exc))
    except OSError as exc:
        print(f"eal: {exc}", file=sys.stderr)
        return 1
    except SanityError as exc:
        print(f"eal: sanity check failed: {exc}", file=sys.stderr)
        return 1
