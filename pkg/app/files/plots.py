from logging import getLogger
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402

from app.audit.models import AuditResult, CurvePoint  # noqa: E402

logger = getLogger(__name__)

PRECISION_RECALL = "precision_recall.svg"
BOUNDS_VS_RECALL = "bounds_vs_recall.svg"

# fixed ids and no creation date keep the SVG bytes reproducible
_SVG_RC = {"svg.hashsalt": "audit-curves", "svg.fonttype": "path"}
_SVG_METADATA = {"Date": None}

_LABELS = {"baseline": "baseline (c)", "mia": "MIA (c + eps)"}


def _save(fig, path: Path) -> None:
    fig.savefig(path, format="svg", metadata=_SVG_METADATA)
    plt.close(fig)
    logger.info("Wrote %s", path)


def write_curve_plots(
    curves: dict[str, list[CurvePoint]], result: AuditResult, directory: str | Path
) -> list[Path]:
    """Precision-recall and bound-vs-recall figures for the baseline and MIA sweeps."""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    written = []

    with plt.rc_context(_SVG_RC):
        fig, ax = plt.subplots(figsize=(6, 4))
        for mode, points in curves.items():
            recall = [p.recall for p in points]
            ax.plot(recall, [p.precision for p in points], label=f"{_LABELS[mode]} precision")
            ax.plot(
                recall,
                [p.precision_bound for p in points],
                linestyle="--",
                label=f"{_LABELS[mode]} precision bound",
            )
        ax.set_xlabel("recall")
        ax.set_ylabel("precision")
        ax.set_ylim(0.0, 1.05)
        ax.legend(fontsize="small")
        ax.grid(True, alpha=0.3)
        path = directory / PRECISION_RECALL
        _save(fig, path)
        written.append(path)

        fig, ax = plt.subplots(figsize=(6, 4))
        for mode, points in curves.items():
            ax.plot([p.recall for p in points], [p.bound for p in points], label=_LABELS[mode])
        ax.axhline(result.c_lb.value, color="grey", linestyle=":", label="c_lb")
        ax.axhline(result.c_plus_eps_lb.value, color="black", linestyle=":", label="{c+eps}_lb")
        ax.set_xlabel("recall")
        ax.set_ylabel("lower bound")
        ax.set_title(f"eps_tilde = {result.eps_tilde:.4f}")
        ax.legend(fontsize="small")
        ax.grid(True, alpha=0.3)
        path = directory / BOUNDS_VS_RECALL
        _save(fig, path)
        written.append(path)

    return written
