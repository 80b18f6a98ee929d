"""Budgeted subset selection: top-scored pairs until an English-token budget.

Pairs are ranked by score (descending, ties by ascending pair index), pairs
carrying the -1 prefilter sentinel are never eligible, and selection walks
the ranking accumulating whitespace tokens on the declared English side until
the first pair that reaches the budget, which is included.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .corpus import PairCorpus, ScoreTable, atomic_write
from .errors import AlignmentError, ConfigError, DataError


@dataclass(frozen=True)
class Budget:
    target_tokens: int
    counting_side: str = "tgt"  # which side is English

    def __post_init__(self):
        if self.target_tokens < 1:
            raise ConfigError("target_tokens must be >= 1")
        if self.counting_side not in ("src", "tgt"):
            raise ConfigError("counting_side must be 'src' or 'tgt'")


def count_tokens(text: str) -> int:
    """Number of maximal nonempty whitespace-separated segments."""
    return len(text.split())


@dataclass(frozen=True)
class SelectionManifest:
    pairs: int
    tokens: int
    underflow: bool
    target_tokens: int
    counting_side: str


def subsample(
    corpus: PairCorpus, scores: np.ndarray, budget: Budget
) -> tuple[list[int], SelectionManifest]:
    """Select the minimal score-ordered prefix whose token count meets the budget.

    Returns the selected pair indices (in selection order) and a manifest;
    when every eligible pair together falls short of the budget, everything
    eligible is selected and the manifest flags underflow.
    """
    scores = np.asarray(scores, dtype=np.float64)
    if scores.shape != (len(corpus),):
        raise AlignmentError(
            f"{scores.shape[0] if scores.ndim == 1 else 'non-1d'} scores "
            f"for {len(corpus)} pairs"
        )
    if not np.isfinite(scores).all():
        row = int(np.flatnonzero(~np.isfinite(scores))[0])
        raise DataError(f"non-finite score at row {row}")

    eligible = np.flatnonzero(scores != ScoreTable.SENTINEL)
    order = eligible[np.lexsort((eligible, -scores[eligible]))]

    texts = corpus.src_texts() if budget.counting_side == "src" else corpus.tgt_texts()
    selected: list[int] = []
    total = 0
    for i in order:
        selected.append(int(i))
        total += count_tokens(texts[i])
        if total >= budget.target_tokens:
            break
    manifest = SelectionManifest(
        pairs=len(selected),
        tokens=total,
        underflow=total < budget.target_tokens,
        target_tokens=budget.target_tokens,
        counting_side=budget.counting_side,
    )
    return selected, manifest


def write_selection(corpus: PairCorpus, selected: list[int], manifest: SelectionManifest, prefix) -> None:
    """Write selected src/tgt text files, an indices file, and the manifest."""
    prefix = str(prefix)
    with atomic_write(prefix + ".src.txt") as fh:
        for i in selected:
            fh.write(corpus[i].src_text + "\n")
    with atomic_write(prefix + ".tgt.txt") as fh:
        for i in selected:
            fh.write(corpus[i].tgt_text + "\n")
    with atomic_write(prefix + ".indices.txt") as fh:
        for i in selected:
            fh.write(f"{i}\n")
    with atomic_write(prefix + ".manifest.txt") as fh:
        fh.write(f"pairs={manifest.pairs}\n")
        fh.write(f"tokens={manifest.tokens}\n")
        fh.write(f"underflow={'true' if manifest.underflow else 'false'}\n")
        fh.write(f"target_tokens={manifest.target_tokens}\n")
        fh.write(f"counting_side={manifest.counting_side}\n")
