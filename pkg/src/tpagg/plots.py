"""Figure rendering for replay reports, baseline comparisons, and sweeps.

Every function writes one PNG next to the delimited output and returns the
path it wrote.  Figures are a convenience view of the same rows the CSV
renderers emit; nothing here feeds back into the computation.
"""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

from .scenario import CompareRow, SignalReport, SweepRow

__all__ = ["save_compare_figure", "save_report_figures", "save_sweep_figure"]

_MODEL_COLORS = {"proposed": "#1f77b4", "mcs": "#d62728", "mxn_wss": "#2ca02c"}


def save_sweep_figure(rows: list[SweepRow] | tuple[SweepRow, ...], path: str | Path) -> Path:
    """Plot required WSS functions versus transponder count, one line per cap."""
    path = Path(path)
    by_k: dict[int, list[SweepRow]] = {}
    for row in rows:
        by_k.setdefault(row.k, []).append(row)

    fig, ax = plt.subplots(figsize=(6.4, 4.2))
    for k in sorted(by_k):
        pts = sorted(by_k[k], key=lambda r: r.n)
        ax.step(
            [p.n for p in pts],
            [p.l_proposed for p in pts],
            where="post",
            marker=".",
            label=f"hybrid, cap {k}",
        )
    mxn = rows[0].wss_count_mxn
    ax.axhline(mxn, color="gray", linestyle="--", label=f"monolithic MxN WSS ({mxn})")
    ax.set_xlabel("transponders connected")
    ax.set_ylabel("WSS functions required")
    ax.set_title("WSS provisioning versus aggregator size")
    ax.grid(True, alpha=0.4)
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path


def save_report_figures(
    reports: list[SignalReport] | tuple[SignalReport, ...], out_dir: str | Path
) -> list[Path]:
    """Bar charts of per-signal OSNR and insertion loss from query snapshots."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    written: list[Path] = []
    if not reports:
        return written

    labels = [f"{r.signal_id}\ntrx{r.trx}->d{r.degree}" for r in reports]
    x = range(len(reports))
    colors = ["#1f77b4" if r.path == "direct" else "#ff7f0e" for r in reports]

    fig, ax = plt.subplots(figsize=(max(6.4, 0.8 * len(reports)), 4.2))
    ax.bar(x, [r.osnr_oxc_db for r in reports], color=colors, label="at fabric output")
    ax.plot(x, [r.rosnr_db for r in reports], "kv", label="at receiver")
    ax.set_xticks(list(x), labels, fontsize=8)
    ax.set_ylabel("OSNR (dB)")
    ax.set_title("Per-signal OSNR (blue: direct path, orange: filtered path)")
    ax.grid(True, axis="y", alpha=0.4)
    ax.legend()
    fig.tight_layout()
    osnr_path = out_dir / "signal_osnr.png"
    fig.savefig(osnr_path, dpi=150)
    plt.close(fig)
    written.append(osnr_path)

    fig, ax = plt.subplots(figsize=(max(6.4, 0.8 * len(reports)), 4.2))
    ax.bar(x, [r.loss_db for r in reports], color=colors)
    ax.set_xticks(list(x), labels, fontsize=8)
    ax.set_ylabel("insertion loss (dB)")
    ax.set_title("Per-signal loss (blue: direct path, orange: filtered path)")
    ax.grid(True, axis="y", alpha=0.4)
    fig.tight_layout()
    loss_path = out_dir / "signal_loss.png"
    fig.savefig(loss_path, dpi=150)
    plt.close(fig)
    written.append(loss_path)
    return written


def save_compare_figure(
    rows: list[CompareRow] | tuple[CompareRow, ...], path: str | Path
) -> Path:
    """Grouped bars comparing loss and OSNR across aggregator models."""
    path = Path(path)
    signals = sorted({r.signal_id for r in rows})
    models = ("proposed", "mcs", "mxn_wss")
    width = 0.27

    fig, (ax_loss, ax_osnr) = plt.subplots(1, 2, figsize=(11.0, 4.2))
    for j, model in enumerate(models):
        per_signal = {r.signal_id: r for r in rows if r.model == model}
        xs = [i + (j - 1) * width for i in range(len(signals))]
        ax_loss.bar(
            xs,
            [per_signal[s].loss_db for s in signals],
            width,
            color=_MODEL_COLORS[model],
            label=model,
        )
        ax_osnr.bar(
            xs,
            [per_signal[s].osnr_db for s in signals],
            width,
            color=_MODEL_COLORS[model],
            label=model,
        )
    for ax, ylabel in ((ax_loss, "insertion loss (dB)"), (ax_osnr, "OSNR (dB)")):
        ax.set_xticks(range(len(signals)), signals, fontsize=8)
        ax.set_ylabel(ylabel)
        ax.grid(True, axis="y", alpha=0.4)
        ax.legend(fontsize=8)
    ax_loss.set_title("Loss by aggregator model")
    ax_osnr.set_title("OSNR by aggregator model")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path
