"""PNG figures for CLI reports: a stage x sentence verdict heatmap and a pole table."""

from __future__ import annotations

from pathlib import Path
from typing import Sequence

import matplotlib

matplotlib.use("Agg")  # headless; figures only go to files

import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402
from matplotlib.colors import ListedColormap  # noqa: E402

from .verdict import Verdict  # noqa: E402

# False / Unknown / True
_CMAP = ListedColormap(["#c0392b", "#bdc3c7", "#27ae60"])
_LEVEL = {False: 0, None: 1, True: 2}


def verdict_matrix(rows: Sequence[tuple[int, str, Verdict]]) -> tuple[np.ndarray, list[int], list[str]]:
    """Rows (stage, sentence, verdict) as a sentence x stage array of 0/1/2."""
    stages = sorted({r[0] for r in rows})
    sentences = list(dict.fromkeys(r[1] for r in rows))
    grid = np.full((len(sentences), len(stages)), _LEVEL[None], dtype=int)
    for stage, sentence, v in rows:
        grid[sentences.index(sentence), stages.index(stage)] = _LEVEL[v.value]
    return grid, stages, sentences


def _shorten(text: str, width: int = 48) -> str:
    return text if len(text) <= width else text[: width - 1] + "…"


def verdict_heatmap(rows: Sequence[tuple[int, str, Verdict]], path: str | Path,
                    title: str = "verdict by revision stage") -> Path:
    grid, stages, sentences = verdict_matrix(rows)
    fig, ax = plt.subplots(figsize=(2 + 0.6 * len(stages), 1 + 0.4 * len(sentences)))
    ax.imshow(grid, cmap=_CMAP, vmin=0, vmax=2, aspect="auto")
    ax.set_xticks(range(len(stages)), [str(s) for s in stages])
    ax.set_yticks(range(len(sentences)), [_shorten(s) for s in sentences], fontsize=7)
    ax.set_xlabel("stage")
    ax.set_title(title, fontsize=9)
    names = {0: "F", 1: "?", 2: "T"}
    for (i, j), val in np.ndenumerate(grid):
        ax.text(j, i, names[int(val)], ha="center", va="center", fontsize=7, color="white")
    fig.tight_layout()
    return _save(fig, path)


def pole_table(columns: Sequence[str], membership: dict[str, Sequence[Verdict]],
               path: str | Path, title: str = "pole membership") -> Path:
    """Poles as rows, numbers as columns, cells coloured by member verdict."""
    poles = list(membership)
    grid = np.array([[_LEVEL[v.value] for v in membership[p]] for p in poles], dtype=int)
    fig, ax = plt.subplots(figsize=(2 + 0.3 * len(columns), 1 + 0.45 * len(poles)))
    ax.imshow(grid, cmap=_CMAP, vmin=0, vmax=2, aspect="auto")
    ax.set_xticks(range(len(columns)), list(columns), fontsize=6)
    ax.set_yticks(range(len(poles)), poles, fontsize=8)
    ax.set_xlabel("n")
    ax.set_title(title, fontsize=9)
    fig.tight_layout()
    return _save(fig, path)


def _save(fig, path: str | Path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path
