"""Figures for experiment outputs: a gnuplot script next to the CSV, and a rendered PNG."""
from __future__ import annotations

import math
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402


def _series(rows, metric):
    pts = sorted((r.n, r.value, r.stderr) for r in rows if r.metric == metric and r.n is not None)
    return [p[0] for p in pts], [p[1] for p in pts], [p[2] or 0.0 for p in pts]


def _gp_filter(metric: str) -> str:
    return f"using 2:(strcol(3) eq \"{metric}\" ? $4 : NaN)"


def _gnuplot(result, csv_path: Path) -> str:
    exp = result.config.experiment
    name = csv_path.name
    head = [
        "# gnuplot script; run: gnuplot " + csv_path.with_suffix(".gp").name,
        "set datafile separator ','",
        "set key top left",
        "set terminal pngcairo size 900,600",
        f"set output '{csv_path.with_suffix('').name}.gnuplot.png'",
    ]
    if exp == "zero-scan":
        body = [
            "set logscale x 2",
            "set xlabel 'degree n'",
            "set ylabel 'mean real zeros (origin excluded)'",
            f"plot '{name}' {_gp_filter('mean_n_star')} with linespoints title 'mean N*'",
        ]
    elif exp == "ac-scan":
        fams = result.config.families
        plots = ", ".join(f"'{name}' {_gp_filter(f'p[{f}:L=0]')} with linespoints title '{f}'"
                          for f in fams)
        body = [
            "set logscale xy",
            "set xlabel 'n'",
            "set ylabel 'P(|<w,pi> - Ln| <= h), L = 0'",
            f"plot {plots}",
        ]
    elif exp == "density-scan":
        n = result.config.n_list[-1]
        table = f"{csv_path.with_suffix('').name}.density_n{n}.csv"
        body = [
            "set xlabel 't'",
            "set ylabel 'density'",
            f"plot '{table}' using 1:2 every ::1 with lines title 'exact', "
            f"'{table}' using 1:3 every ::1 with points pt 7 ps 0.3 title 'fourier', "
            f"'{table}' using 1:4 every ::1 with lines dt 2 title 'C e^(-|t|/2)'",
        ]
    else:
        body = [
            "set style data histograms",
            "set style fill solid",
            "set yrange [0:1.2]",
            "set xtics rotate by -60",
            f"plot '{name}' using (strcol(3) =~ '.pass$' ? $4 : NaN):xtic(3) title 'pass'",
        ]
    return "\n".join(head + body) + "\n"


def _figure(result, png: Path) -> None:
    cfg = result.config
    rows = result.rows
    fig, ax = plt.subplots(figsize=(8, 5))
    if cfg.experiment == "zero-scan":
        n, y, e = _series(rows, "mean_n_star")
        ax.errorbar(n, y, yerr=e, marker="o", capsize=3, label="mean N*")
        ax.plot(n, [(2 / math.pi) * math.log(v) for v in n], "--", label="(2/pi) ln n")
        ax.set_xscale("log", base=2)
        ax.set_xlabel("degree n")
        ax.set_ylabel("mean real zeros (origin excluded)")
        ax.set_title(f"dist = {cfg.dist}")
    elif cfg.experiment == "ac-scan":
        for f in cfg.families:
            n, y, _ = _series(rows, f"p[{f}:L=0]")
            keep = [(a, b) for a, b in zip(n, y) if b > 0]
            if keep:
                ax.plot(*zip(*keep), marker="o", label=f)
        ax.set_xscale("log")
        ax.set_yscale("log")
        ax.set_xlabel("n")
        ax.set_ylabel("window probability at L = 0")
    elif cfg.experiment == "density-scan":
        n = cfg.n_list[-1]
        _, table = result.tables[f"density_n{n}"]
        t, pe, pf, env = zip(*table)
        ax.plot(t, pe, label="exact")
        ax.plot(t, pf, ".", ms=2, label="fourier")
        ax.plot(t, env, "--", label="C exp(-|t|/2)")
        ax.set_xlabel("t")
        ax.set_ylabel("density")
        ax.set_title(f"n = {n}")
    else:
        names = [r.metric[:-5] for r in rows if r.metric.endswith(".pass")]
        vals = [r.value for r in rows if r.metric.endswith(".pass")]
        ax.bar(range(len(vals)), vals, color=["tab:green" if v else "tab:red" for v in vals])
        ax.set_xticks(range(len(vals)))
        ax.set_xticklabels(names, rotation=60, ha="right", fontsize=7)
        ax.set_ylim(0, 1.2)
        ax.set_ylabel("pass")
    if ax.get_legend_handles_labels()[0]:
        ax.legend()
    fig.tight_layout()
    fig.savefig(png, dpi=110)
    plt.close(fig)


def render_plots(result, csv_path) -> list[Path]:
    """Write ``<stem>.gp`` and ``<stem>.png`` next to the output file."""
    csv_path = Path(csv_path)
    gp = csv_path.with_suffix(".gp")
    gp.write_text(_gnuplot(result, csv_path))
    png = csv_path.with_suffix(".png")
    _figure(result, png)
    return [gp, png]
