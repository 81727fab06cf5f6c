"""Matplotlib figures accompanying the JSON reports."""

from __future__ import annotations

from fractions import Fraction
from typing import Mapping, Sequence

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402


def plot_diameter_profiles(
    profiles: Mapping[str, Sequence[Fraction | str]],
    path: str,
    epsilon: Fraction | None = None,
):
    """Max cylinder diameter against depth, one line per labelled pair."""
    fig, ax = plt.subplots(figsize=(6, 4))
    for label, prof in profiles.items():
        ys = [float(Fraction(p)) for p in prof]
        ax.plot(range(len(ys)), ys, marker="o", ms=3, lw=1, label=label)
    if epsilon is not None:
        ax.axhline(float(epsilon), color="grey", ls="--", lw=0.8, label="epsilon")
    ax.set_yscale("log")
    ax.set_xlabel("depth")
    ax.set_ylabel("max cylinder diameter (L1)")
    ax.legend(fontsize=7, loc="best")
    fig.tight_layout()
    # fixed metadata keeps SVG/PDF output reproducible
    fig.savefig(path, metadata={"Date": None} if str(path).endswith((".svg", ".pdf")) else None)
    plt.close(fig)
    return path
