"""Benchmark figures.

Renders throughput-versus-size curves to a vector-graphics file, one series
per scheme.  Each series carries an SVG group id ``series-<scheme>`` so the
emitted file can be inspected structurally.
"""

from __future__ import annotations

from collections import defaultdict

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

__all__ = ["plot_throughput"]

_STYLE = {
    "separable-convolution": dict(color="#1f77b4", marker="o"),
    "separable-lifting": dict(color="#d62728", marker="s"),
    "non-separable-lifting": dict(color="#2ca02c", marker="^"),
    "non-separable-split": dict(color="#9467bd", marker="d"),
}


def plot_throughput(records, path) -> None:
    """Plot GB/s against image width on a log-2 size axis and save to ``path``."""
    by_scheme = defaultdict(list)
    for rec in records:
        by_scheme[rec.scheme].append(rec)

    fig, ax = plt.subplots(figsize=(7.0, 4.2))
    for scheme, recs in by_scheme.items():
        recs = sorted(recs, key=lambda r: r.width)
        (line,) = ax.plot(
            [r.width for r in recs],
            [r.gbps for r in recs],
            label=scheme,
            linewidth=1.6,
            markersize=4.5,
            **_STYLE.get(scheme, {}),
        )
        line.set_gid(f"series-{scheme}")
    ax.set_xscale("log", base=2)
    ax.set_xlabel("image size (pixels per side)")
    ax.set_ylabel("throughput [GB/s]")
    sample = next(iter(by_scheme.values()))[0]
    ax.set_title(f"{sample.wavelet}, {sample.precision} precision, {sample.threads} thread(s)")
    ax.grid(True, which="both", linewidth=0.4, alpha=0.5)
    ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)
