"""Figure rendering for evaluation and expert-iteration reports."""
from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

__all__ = ["plot_metric_curves", "plot_ei_history"]


def plot_metric_curves(rows: list[dict], path: str) -> None:
    """Accuracy vs k for each metric, with shaded bootstrap CI bands."""
    fig, ax = plt.subplots(figsize=(6, 4))
    metrics = sorted({row["metric"] for row in rows})
    for metric in metrics:
        series = sorted((r for r in rows if r["metric"] == metric), key=lambda r: r["k"])
        ks = [r["k"] for r in series]
        values = [r["value"] for r in series]
        lows = [r["ci_low"] for r in series]
        highs = [r["ci_high"] for r in series]
        ax.plot(ks, values, marker="o", label=f"{metric}@k")
        ax.fill_between(ks, lows, highs, alpha=0.2)
    ax.set_xlabel("k")
    ax.set_ylabel("accuracy")
    ax.set_ylim(0.0, 1.05)
    if rows:
        ax.set_xticks(sorted({row["k"] for row in rows}))
    ax.legend()
    ax.grid(True, alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def plot_ei_history(manifest_rows: list[dict], path: str) -> None:
    """Buffer growth and per-round keep counts across expert-iteration rounds."""
    fig, ax = plt.subplots(figsize=(6, 4))
    rounds = [row["round"] for row in manifest_rows]
    ax.plot(rounds, [row["buffer_size"] for row in manifest_rows], marker="o", label="buffer size")
    ax.bar(rounds, [row["kept"] for row in manifest_rows], alpha=0.4, label="kept this round")
    ax.set_xlabel("round")
    ax.set_ylabel("trajectories")
    ax.set_xticks(rounds)
    ax2 = ax.twinx()
    ax2.plot(
        rounds,
        [row["mean_f_pass"] for row in manifest_rows],
        color="tab:green",
        marker="s",
        label="mean pass EMA",
    )
    ax2.set_ylabel("mean pass EMA")
    ax2.set_ylim(0.0, 1.0)
    handles1, labels1 = ax.get_legend_handles_labels()
    handles2, labels2 = ax2.get_legend_handles_labels()
    ax.legend(handles1 + handles2, labels1 + labels2, loc="upper left")
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
