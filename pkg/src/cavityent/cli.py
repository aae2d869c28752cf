"""Command-line interface: ``sweep``, ``events``, ``oracle`` and ``figures``.

Exit codes: 0 success, 2 invalid configuration, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import ast
import csv
import io
import math
import operator
import sys
from pathlib import Path
from typing import Optional, Sequence, TextIO

import numpy as np

from . import __version__
from .errors import CavityEntError, ConfigError, NonConvergence, NotNormalized
from .events import find_events, simultaneity_condition
from .oracle import OracleConfig, compare_to_markov, markov_xi, simulate_single_excitation
from .series import parse_series, sweep

EXIT_CONFIG = 2
EXIT_NUMERIC = 3

_BINOPS = {
    ast.Add: operator.add,
    ast.Sub: operator.sub,
    ast.Mult: operator.mul,
    ast.Div: operator.truediv,
}


def parse_amplitude(text: str) -> float:
    """Evaluate decimals or surd expressions such as ``3/sqrt(10)`` or ``sqrt(2/3)``."""

    def ev(node):
        if isinstance(node, ast.Expression):
            return ev(node.body)
        if isinstance(node, ast.Constant) and type(node.value) in (int, float):
            return float(node.value)
        if isinstance(node, ast.BinOp) and type(node.op) in _BINOPS:
            return _BINOPS[type(node.op)](ev(node.left), ev(node.right))
        if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
            v = ev(node.operand)
            return -v if isinstance(node.op, ast.USub) else v
        if (isinstance(node, ast.Call) and isinstance(node.func, ast.Name) and node.func.id == "sqrt"
                and len(node.args) == 1 and not node.keywords):
            v = ev(node.args[0])
            if v < 0:
                raise ConfigError(f"sqrt of negative number in {text!r}")
            return math.sqrt(v)
        raise ConfigError(f"unsupported amplitude expression {text!r}")

    try:
        tree = ast.parse(text.strip(), mode="eval")
    except SyntaxError as exc:
        raise ConfigError(f"cannot parse amplitude {text!r}") from exc
    try:
        value = ev(tree)
    except ZeroDivisionError as exc:
        raise ConfigError(f"division by zero in {text!r}") from exc
    if not math.isfinite(value):
        raise ConfigError(f"amplitude {text!r} is not finite")
    return value


def parse_alphas(text: str, normalize: bool = False, log: Optional[TextIO] = None) -> list[float]:
    values = [parse_amplitude(tok) for tok in text.split(",") if tok.strip()]
    if len(values) < 2:
        raise ConfigError("need at least two amplitudes")
    norm = math.sqrt(sum(v * v for v in values))
    if normalize:
        if norm == 0:
            raise ConfigError("cannot normalize a zero amplitude vector")
        if log is not None:
            print(f"# normalize: applied factor {1.0 / norm:.12g}", file=log)
        return [v / norm for v in values]
    if abs(norm - 1.0) > 1e-9:
        raise NotNormalized(norm)
    return values


def fmt(x) -> str:
    return f"{float(x):.12g}"


def _writer(stream: TextIO):
    return csv.writer(stream, lineterminator="\n")


def write_table(stream: TextIO, header: Sequence[str], times, table) -> None:
    w = _writer(stream)
    w.writerow(header)
    for t, row in zip(times, table):
        w.writerow([fmt(t)] + [fmt(v) for v in row])


def gnuplot_script(csv_path: str, ncols: int, ylabel: str = "entanglement") -> str:
    return (
        'set datafile separator ","\n'
        "set key autotitle columnhead\n"
        'set xlabel "kappa t"\n'
        f'set ylabel "{ylabel}"\n'
        f'plot for [i=2:{ncols}] "{csv_path}" using 1:i with lines\n'
    )


def _open_out(path: Optional[str]):
    if path is None or path == "-":
        return sys.stdout, False
    Path(path).parent.mkdir(parents=True, exist_ok=True)
    return open(path, "w", newline="", encoding="ascii"), True


def _grid(t_max: float, steps: int) -> np.ndarray:
    if steps < 2:
        raise ConfigError("--steps must be at least 2")
    if not t_max > 0:
        raise ConfigError("--t-max must be positive")
    return np.linspace(0.0, t_max, steps)


def _kappa(value: float) -> float:
    if not value > 0:
        raise ConfigError("--kappa must be positive")
    return value


def cmd_sweep(args) -> int:
    kappa = _kappa(args.kappa)
    alphas = parse_alphas(args.alphas, args.normalize, log=sys.stderr)
    d = len(alphas) - 1
    specs = [parse_series(tok, d, args.measure) for tok in args.partitions.split(",") if tok.strip()]
    if not specs:
        raise ConfigError("no partitions given")
    t_max = args.t_max if args.t_max is not None else 6.0 / kappa
    times = _grid(t_max, args.steps)
    table = sweep(alphas, specs, times, kappa)
    header = ["t"] + [s.name for s in specs]
    out, close = _open_out(args.output)
    try:
        write_table(out, header, times, table)
    finally:
        if close:
            out.close()
    if args.gnuplot:
        if args.output in (None, "-"):
            raise ConfigError("--gnuplot needs --output so the script can reference the CSV file")
        Path(args.gnuplot).write_text(gnuplot_script(args.output, len(header)))
    if args.plot:
        from .plotting import plot_series

        baseline = 1.0 if any(s.kind == "lboe" for s in specs) else None
        plot_series(times, {s.name: table[:, j] for j, s in enumerate(specs)}, args.plot,
                    title="alphas = " + ", ".join(fmt(a) for a in alphas), baseline=baseline)
    return 0


def _fmt_opt(x, spec=".9f") -> str:
    return "n/a" if x is None else format(x, spec)


def render_events(analysis, tol: float) -> str:
    alphas, kappa = analysis.alphas, analysis.kappa
    d = len(alphas) - 1
    buf = io.StringIO()
    buf.write(f"alphas: {', '.join(fmt(a) for a in alphas)}  (d={d}, kappa={fmt(kappa)})\n")
    buf.write(f"{'partition':<14}{'measure':<14}{'event':<7}{'t_numeric':>14}{'t_analytic':>14}{'difference':>12}\n")
    for r in analysis.reports:
        diff = "n/a" if r.difference is None else f"{r.difference:.2e}"
        buf.write(f"{r.partition:<14}{r.measure_kind:<14}{r.kind:<7}{r.t_numeric:>14.9f}"
                  f"{_fmt_opt(r.t_analytic):>14}{diff:>12}\n")
    labels = [s.label for s in analysis.specs]
    if "cc" in labels and not any(r.partition == "cc" and r.kind == "ESD" for r in analysis.reports):
        buf.write("NoESD: cavity entanglement decays only asymptotically\n")
    if "cc" in labels and "rr" in labels:
        t_esd = analysis.first("cc", "ESD")
        t_esb = analysis.first("rr", "ESB")
        if t_esd is not None and t_esb is not None:
            if abs(t_esd - t_esb) <= tol:
                buf.write(f"ordering: simultaneous (|ESD - ESB| = {abs(t_esd - t_esb):.2e})\n")
            elif t_esb < t_esd:
                buf.write("ordering: ESB before ESD\n")
            else:
                buf.write("ordering: ESB after ESD\n")
        windows = [w for w in analysis.both_dead() if w[1] - w[0] > tol]
        for lo, hi in windows:
            end = "end of scan" if hi >= analysis.t_end else f"{hi:.9f}"
            buf.write(f"both dead: [{lo:.9f}, {end}]\n")
    try:
        holds = simultaneity_condition(alphas)
    except CavityEntError:
        holds = False
    if holds:
        buf.write(f"simultaneity condition holds: ESD = ESB expected at ln2/kappa = {math.log(2) / kappa:.9f}\n")
    return buf.getvalue()


def cmd_events(args) -> int:
    kappa = _kappa(args.kappa)
    alphas = parse_alphas(args.alphas, args.normalize, log=sys.stderr)
    labels = [tok.strip() for tok in args.partitions.split(",") if tok.strip()]
    t_max = args.t_max if args.t_max is not None else 6.0 / kappa
    analysis = find_events(alphas, kappa, labels, t_max=t_max, steps=args.steps)
    sys.stdout.write(render_events(analysis, args.tol))
    if args.csv:
        out, close = _open_out(args.csv)
        try:
            w = _writer(out)
            w.writerow(["partition", "measure", "event", "t_numeric", "t_analytic", "difference"])
            for r in analysis.reports:
                w.writerow([r.partition, r.measure_kind, r.kind, fmt(r.t_numeric),
                            "" if r.t_analytic is None else fmt(r.t_analytic),
                            "" if r.difference is None else fmt(r.difference)])
        finally:
            if close:
                out.close()
    if args.plot:
        from .plotting import plot_series

        times = _grid(t_max, min(args.steps, 1000))
        table = sweep(alphas, analysis.specs, times, kappa)
        markers = [(r.t_numeric, f"{r.kind} {r.partition}") for r in analysis.reports]
        baseline = 1.0 if any(s.kind == "lboe" for s in analysis.specs) else None
        plot_series(times, {s.name: table[:, j] for j, s in enumerate(analysis.specs)}, args.plot,
                    markers=markers, baseline=baseline)
    return 0


def cmd_oracle(args) -> int:
    config = OracleConfig(n_modes=args.n_modes, bandwidth=args.bandwidth, kappa=_kappa(args.kappa),
                          t_max=args.t_max, dt=args.dt)
    if args.stride < 1:
        raise ConfigError("--stride must be at least 1")
    series = simulate_single_excitation(config)
    markov = markov_xi(series.times, config.kappa)
    dev = np.abs(series.xi_n - markov)
    out, close = _open_out(args.output)
    try:
        w = _writer(out)
        w.writerow(["t", "xi_numeric", "xi_markov", "abs_dev"])
        for i in range(0, series.times.size, args.stride):
            w.writerow([fmt(series.times[i]), fmt(series.xi_n[i]), fmt(markov[i]), fmt(dev[i])])
    finally:
        if close:
            out.close()
    summary = f"max_dev={fmt(compare_to_markov(series, config.kappa))}"
    # the summary goes after the rows; on a file it is echoed to stdout as well
    if close:
        with open(args.output, "a", encoding="ascii") as fh:
            fh.write(summary + "\n")
    print(summary)
    if args.plot:
        from .plotting import plot_oracle

        plot_oracle(series.times, series.xi_n, markov, args.plot,
                    title=f"N={config.n_modes}, W={fmt(config.bandwidth)} kappa")
    return 0


# amplitude sets for the figures subcommand
FIGURES = {
    "fig1": (["1/sqrt(3)", "sqrt(2/3)"], ["cc", "rr"]),
    "fig2": (["1/sqrt(10)", "3/sqrt(10)"], ["cc", "rr", "c1r1", "c1r2"]),
    "fig3": (["1/sqrt(10)", "3/sqrt(10)"],
             ["cn", "c1r1_vs_c2r2", "c1c2_vs_r1r2", "c1r2_vs_c2r1", "c1_vs_rest", "r1_vs_rest"]),
    "fig4": (["1/sqrt(38)", "1/sqrt(38)", "6/sqrt(38)"], ["cc", "rr", "c1r1", "c1r2"]),
}


def _fig5_alphas(levels: int) -> list[float]:
    top = levels - 1
    raw = [1.0] * top + [2.0**top]
    norm = math.sqrt(sum(a * a for a in raw))
    return [a / norm for a in raw]


def cmd_figures(args) -> int:
    from .plotting import plot_panels, plot_series

    outdir = Path(args.outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    kappa = 1.0
    times = _grid(args.t_max, args.steps)
    written = []
    for name, (exprs, tokens) in FIGURES.items():
        alphas = [parse_amplitude(e) for e in exprs]
        d = len(alphas) - 1
        specs = [parse_series(tok, d) for tok in tokens]
        table = sweep(alphas, specs, times, kappa)
        csv_path = outdir / f"{name}.csv"
        with open(csv_path, "w", newline="", encoding="ascii") as fh:
            write_table(fh, ["t"] + [s.name for s in specs], times, table)
        baseline = 1.0 if d >= 2 else None
        plot_series(times, {s.name: table[:, j] for j, s in enumerate(specs)}, outdir / f"{name}.png",
                    title="alphas = " + ", ".join(exprs), baseline=baseline)
        written += [csv_path, outdir / f"{name}.png"]
    panels = []
    for levels in (2, 3, 4):
        alphas = _fig5_alphas(levels)
        specs = [parse_series(tok, levels - 1, "lboe") for tok in ("cc", "rr", "c1r1")]
        table = sweep(alphas, specs, times, kappa)
        csv_path = outdir / f"fig5_dim{levels}.csv"
        with open(csv_path, "w", newline="", encoding="ascii") as fh:
            write_table(fh, ["t"] + [s.name for s in specs], times, table)
        written.append(csv_path)
        panels.append((f"local dimension {levels}", times, {s.name: table[:, j] for j, s in enumerate(specs)}))
    written.append(plot_panels(panels, outdir / "fig5.png", ylabel="LBOE"))
    for p in written:
        print(p)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="cavityent", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def amplitude_args(p):
        p.add_argument("--alphas", required=True,
                       help="comma-separated amplitudes alpha_0..alpha_d, e.g. '1/sqrt(10),3/sqrt(10)'")
        p.add_argument("--kappa", type=float, default=1.0, help="decay rate (default 1)")
        p.add_argument("--t-max", type=float, default=None, help="horizon in units of 1/kappa (default 6/kappa)")
        p.add_argument("--normalize", action="store_true", help="rescale amplitudes to unit norm")
        p.add_argument("--plot", metavar="FILE", help="also render a figure (png/pdf/svg)")

    p = sub.add_parser("sweep", help="time series of entanglement measures as CSV")
    amplitude_args(p)
    p.add_argument("--steps", type=int, default=600)
    p.add_argument("--partitions", default="cc,rr",
                   help="comma-separated series: cc, rr, c1r1, c1r2, c1r1_vs_c2r2, c1r2_vs_c2r1, "
                        "c1_vs_rest, r1_vs_rest, cn, or generic forms like c2r1 / c1c2_vs_r1r2")
    p.add_argument("--measure", choices=("auto", "lboe", "concurrence"), default="auto",
                   help="measure for two-party series (default: concurrence for d=1, LBOE otherwise)")
    p.add_argument("-o", "--output", help="CSV file (default stdout)")
    p.add_argument("--gnuplot", metavar="FILE", help="write a gnuplot script plotting the CSV")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("events", help="ESD/ESB times, numeric and closed-form")
    amplitude_args(p)
    p.add_argument("--steps", type=int, default=2000)
    p.add_argument("--partitions", default="cc,rr")
    p.add_argument("--tol", type=float, default=1e-6, help="tolerance for calling ESD and ESB simultaneous")
    p.add_argument("--csv", metavar="FILE", help="also write the event table as CSV")
    p.set_defaults(func=cmd_events)

    p = sub.add_parser("oracle", help="finite-reservoir check of exponential decay")
    p.add_argument("--n-modes", type=int, default=400)
    p.add_argument("--bandwidth", type=float, default=40.0, help="reservoir bandwidth in units of kappa")
    p.add_argument("--kappa", type=float, default=1.0)
    p.add_argument("--t-max", type=float, default=3.0)
    p.add_argument("--dt", type=float, default=1e-3)
    p.add_argument("--stride", type=int, default=1, help="emit every STRIDE-th integration step")
    p.add_argument("-o", "--output", help="CSV file (default stdout)")
    p.add_argument("--plot", metavar="FILE")
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("figures", help="write CSV data and PNG figures for the standard scenarios")
    p.add_argument("--outdir", required=True)
    p.add_argument("--t-max", type=float, default=4.0)
    p.add_argument("--steps", type=int, default=401)
    p.set_defaults(func=cmd_figures)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except NonConvergence as exc:
        print(f"error: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except (CavityEntError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
