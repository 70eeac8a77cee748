"""Deterministic report output: delimited text plus rendered figures.

Byte-identical replay is part of the contract, so CSV writing avoids
platform-dependent line endings and figures are rendered through the Agg
backend with fixed metadata (no timestamps).
"""

from __future__ import annotations

import json

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402  (backend must be set first)

_PNG_META = {"Software": "treecov"}


def write_csv(path: str, header: list[str], rows: list[list],
              config: dict | None = None) -> None:
    """CSV with an optional leading config comment line; \n endings only."""
    lines = []
    if config is not None:
        lines.append("# config " + json.dumps(config, sort_keys=True,
                                              separators=(",", ":")))
    lines.append(",".join(header))
    for row in rows:
        lines.append(",".join("" if x is None else str(x) for x in row))
    with open(path, "w", newline="") as fh:
        fh.write("\n".join(lines) + "\n")


def scaling_figure(path: str, title: str, sizes: list[int],
                   measured: list[float], predicted: list[float]) -> None:
    """Log-log plot of measured counts against the fitted bound curve."""
    fig, ax = plt.subplots(figsize=(5.0, 3.6))
    ax.loglog(sizes, measured, "o-", label="measured")
    ax.loglog(sizes, predicted, "s--", label="fitted bound")
    ax.set_xlabel("n")
    ax.set_ylabel("count")
    ax.set_title(title)
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, metadata=_PNG_META)
    plt.close(fig)


def stretch_figure(path: str, title: str, ratios: list[float],
                   bound: float | None = None) -> None:
    """Histogram of per-pair stretch ratios with the certified bound line."""
    fig, ax = plt.subplots(figsize=(5.0, 3.6))
    if ratios:
        ax.hist(ratios, bins=min(40, max(5, len(ratios) // 20 or 5)),
                color="#4878a8")
    if bound is not None:
        ax.axvline(bound, color="#a84848", linestyle="--", label="bound")
        ax.legend()
    ax.set_xlabel("stretch")
    ax.set_ylabel("pairs")
    ax.set_title(title)
    fig.tight_layout()
    fig.savefig(path, metadata=_PNG_META)
    plt.close(fig)
