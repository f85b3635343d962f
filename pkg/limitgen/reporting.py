"""
Artifacts: transcript tables, JSON summaries and density plots.

Everything written here is a function of the inputs alone, so reruns with
the same configuration and seed reproduce the files byte for byte.
"""

import logging
from fractions import Fraction
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Union

import matplotlib
import pandas as pd

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

from limitgen.harness.games import DensityProfile, GameTranscript, density_profile  # noqa: E402
from limitgen.serialization import dumps  # noqa: E402

logger = logging.getLogger(__name__)

PathLike = Union[str, Path]

SVG_HASHSALT = "limitgen"


def _prepare(path: PathLike) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    return path


def write_transcript(tr: GameTranscript, path: PathLike, fmt: str = "csv") -> Path:
    """One row per round: round, input, output_kind, output_repr, valid, upper_density."""
    path = _prepare(path)
    frame = tr.to_frame()
    if fmt == "csv":
        frame.to_csv(path, index=False)
    elif fmt == "json":
        path.write_text(frame.to_json(orient="records", indent=2) + "\n")
    else:
        raise ValueError(f"Unknown transcript format '{fmt}'. Expected csv or json")
    logger.info(f"Wrote transcript ({len(frame)} rounds) to {path}")
    return path


def write_summary(summary: Dict[str, Any], path: PathLike) -> Path:
    """JSON with Fractions written as "p/q" strings."""
    path = _prepare(path)
    path.write_text(dumps(summary) + "\n")
    logger.info(f"Wrote summary to {path}")
    return path


def plot_density(
    source: Union[GameTranscript, DensityProfile],
    path: PathLike,
    reference: Optional[Fraction] = None,
    title: Optional[str] = None,
) -> Path:
    """
    SVG plot of sampled upper and lower density against the round number,
    with an optional horizontal reference line (the predicted value).
    """
    profile = density_profile(source) if isinstance(source, GameTranscript) else source
    frame = profile.to_frame()
    path = _prepare(path)

    with plt.rc_context({"svg.hashsalt": SVG_HASHSALT, "svg.fonttype": "none"}):
        fig, ax = plt.subplots(figsize=(7, 4))
        if not frame.empty:
            ax.plot(frame["round"], frame["upper_density"], marker="o", markersize=3, label="upper density")
            ax.plot(frame["round"], frame["lower_density"], marker="s", markersize=3, label="lower density")
        if reference is not None:
            ax.axhline(float(reference), linestyle="--", color="grey", label=f"predicted {reference}")
        ax.set_xlabel("round")
        ax.set_ylabel("density in target")
        ax.set_ylim(-0.05, 1.05)
        if title:
            ax.set_title(title)
        ax.legend(loc="best")
        fig.tight_layout()
        fig.savefig(path, format="svg", metadata={"Date": None})
        plt.close(fig)
    logger.info(f"Wrote density plot to {path}")
    return path


def series_plot(series: Dict[str, Sequence[float]], xs: Sequence[int], path: PathLike,
                xlabel: str = "horizon", ylabel: str = "ratio", logx: bool = True) -> Path:
    """Plot several named series over common x values (empirical density ratio series)."""
    path = _prepare(path)
    with plt.rc_context({"svg.hashsalt": SVG_HASHSALT, "svg.fonttype": "none"}):
        fig, ax = plt.subplots(figsize=(7, 4))
        for label, ys in series.items():
            ax.plot(list(xs), list(ys), marker="o", markersize=3, label=label)
        if logx:
            ax.set_xscale("log", base=2)
        ax.set_xlabel(xlabel)
        ax.set_ylabel(ylabel)
        ax.legend(loc="best")
        fig.tight_layout()
        fig.savefig(path, format="svg", metadata={"Date": None})
        plt.close(fig)
    return path


# ==================== Suite tables ====================

def results_frame(rows: List[Dict[str, Any]]) -> pd.DataFrame:
    frame = pd.DataFrame(rows)
    for column in frame.columns:
        if frame[column].map(lambda v: isinstance(v, Fraction)).any():
            frame[column] = frame[column].map(lambda v: str(v) if isinstance(v, Fraction) else v)
    return frame


def format_table(rows: List[Dict[str, Any]]) -> str:
    """Plain-text pass/fail table."""
    if not rows:
        return "(no rows)"
    return results_frame(rows).to_string(index=False)


def write_suite_report(name: str, rows: List[Dict[str, Any]], path: PathLike) -> Path:
    path = _prepare(path)
    report = {
        "suite": name,
        "passed": all(bool(r.get("passed")) for r in rows),
        "rows": rows,
    }
    path.write_text(dumps(report) + "\n")
    logger.info(f"Wrote {name} suite report to {path}")
    return path
