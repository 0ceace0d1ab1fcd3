"""Figures for benchmark reports, written straight to files."""

from __future__ import annotations

from collections import defaultdict

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

STYLE = {
    "font.size": 10,
    "axes.labelsize": 10,
    "legend.fontsize": 8,
    "xtick.labelsize": 8,
    "ytick.labelsize": 8,
    "axes.grid": True,
    "grid.alpha": 0.3,
    "figure.figsize": (5.0, 3.4),
    "savefig.dpi": 150,
}

MARKERS = {"bottomup": "o", "topdown": "s", "dynamic": "^"}


def _save(fig, path):
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)
    return path


def cactus_plot(rows, path, title="Instances solved over time"):
    """One line per mode: x = instances completed, y = cumulative seconds."""
    times = defaultdict(list)
    for r in rows:
        times[r["mode"]].append(float(r["seconds"]))
    with plt.rc_context(STYLE):
        fig, ax = plt.subplots()
        for mode in sorted(times):
            ts = sorted(times[mode])
            cum, acc = [], 0.0
            for t in ts:
                acc += t
                cum.append(acc)
            ax.plot(range(1, len(ts) + 1), cum, marker=MARKERS.get(mode, "."),
                    markevery=max(1, len(ts) // 10), label=mode)
        ax.set_xlabel("instances completed")
        ax.set_ylabel("cumulative time (s)")
        ax.set_title(title)
        ax.legend()
        return _save(fig, path)


def case_study_plot(rows, path):
    """Recursion calls (top-down) and peak nodes (bottom-up) against k, log-log."""
    with plt.rc_context(STYLE):
        fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(8.0, 3.2))
        by = defaultdict(list)
        for r in rows:
            by[r["approach"]].append(r)
        for approach, rs in sorted(by.items()):
            rs = sorted(rs, key=lambda r: int(r["k"]))
            ks = [int(r["k"]) for r in rs]
            ax1.plot(ks, [float(r["seconds"]) for r in rs],
                     marker=MARKERS.get(approach, "."), label=approach)
            if approach == "topdown":
                ax2.plot(ks, [max(1, int(r["recursive_calls"])) for r in rs],
                         marker="s", label="top-down recursive calls")
            else:
                ax2.plot(ks, [max(1, int(r["peak_nodes"])) for r in rs],
                         marker="o", label="bottom-up peak nodes")
        for ax in (ax1, ax2):
            ax.set_xscale("log")
            ax.set_yscale("log")
            ax.set_xlabel("k")
            ax.legend()
        ax1.set_ylabel("seconds")
        ax2.set_ylabel("work")
        return _save(fig, path)
