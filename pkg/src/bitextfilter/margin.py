"""Margin-based similarity scoring of aligned sentence pairs.

Raw cosine similarity is not comparable across queries (hub vectors are close
to everything), so the score of a pair (x, y) is normalized by the average
similarity of each side's k nearest neighbors in the other language.  With
A = sum of cosines of x's neighbor list and B likewise for y, and k'_x, k'_y
the actual list lengths:

    ratio     (k'_x + k'_y) * cos(x, y) / (A + B)
    absolute  cos(x, y)
    distance  cos(x, y) - (A + B) / (k'_x + k'_y)

With full lists the ratio form equals 2k*cos/(A+B).  Only the ratio variant
is the primary criterion here; absolute and distance follow the standard
margin-criterion definitions and are kept for comparison runs.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .corpus import PairCorpus, ScoreTable
from .embeddings import EmbeddingSet, pair_cosines
from .errors import AlignmentError, ConfigError, DataError, UndefinedScoreError
from .knn import GLOBAL, NeighborhoodSpec, NeighborList, knn_arrays

RATIO = "ratio"
ABSOLUTE = "absolute"
DISTANCE = "distance"
_VARIANTS = (RATIO, ABSOLUTE, DISTANCE)


@dataclass(frozen=True)
class MarginConfig:
    variant: str = RATIO
    neighborhood: NeighborhoodSpec = field(default_factory=NeighborhoodSpec)

    def __post_init__(self):
        if self.variant not in _VARIANTS:
            raise ConfigError(f"variant must be one of {_VARIANTS}, got {self.variant!r}")

    @property
    def k(self) -> int:
        return self.neighborhood.k


def _combine(variant: str, cos_xy: float, a: float, b: float, kx: int, ky: int, where="") -> float:
    if variant == ABSOLUTE:
        return cos_xy
    if variant == DISTANCE:
        return cos_xy - (a + b) / (kx + ky)
    denom = a + b
    if denom <= 0.0:
        raise UndefinedScoreError(
            f"ratio margin undefined{where}: neighbor cosine sum {denom} <= 0"
        )
    return (kx + ky) * cos_xy / denom


def margin_score(
    cos_xy: float, nn_x: NeighborList, nn_y: NeighborList, config: MarginConfig
) -> float:
    """Margin score of one pair from its two neighbor lists."""
    if not nn_x.entries or not nn_y.entries:
        raise DataError("neighbor lists must be nonempty")
    a = float(np.sum(np.fromiter((c for _, c in nn_x.entries), dtype=np.float64)))
    b = float(np.sum(np.fromiter((c for _, c in nn_y.entries), dtype=np.float64)))
    return _combine(config.variant, cos_xy, a, b, len(nn_x.entries), len(nn_y.entries))


def score_corpus(
    corpus: PairCorpus,
    src_emb: EmbeddingSet,
    tgt_emb: EmbeddingSet,
    verdicts,
    config: MarginConfig,
    clean_corpus: PairCorpus | None = None,
    clean_src_emb: EmbeddingSet | None = None,
    clean_tgt_emb: EmbeddingSet | None = None,
    threads: int = 1,
) -> np.ndarray:
    """Margin scores for every pair; prefilter-rejected pairs get exactly -1.

    ``clean_*`` supply the complementary collection pooled in global mode (and
    are ignored by local mode, which restricts each query to its own origin).
    The same function scores the clean corpus itself: pass the clean corpus
    and its embeddings as the primary arguments and the noisy ones as the
    complementary set.
    """
    n = len(corpus)
    if src_emb.n != n or tgt_emb.n != n:
        raise AlignmentError(
            f"embedding rows ({src_emb.n}/{tgt_emb.n}) != corpus length ({n})"
        )
    if len(verdicts) != n:
        raise AlignmentError(f"{len(verdicts)} verdicts for {n} pairs")
    if config.neighborhood.mode == GLOBAL:
        if clean_src_emb is None or clean_tgt_emb is None or clean_corpus is None:
            raise ConfigError(
                "global neighborhood needs the complementary corpus and embeddings"
            )
    for extra in (clean_src_emb, clean_tgt_emb):
        if extra is not None and extra.dim != src_emb.dim:
            raise DataError("complementary embedding dim mismatch")
    if clean_corpus is not None:
        for name, extra in (("src", clean_src_emb), ("tgt", clean_tgt_emb)):
            if extra is not None and extra.n != len(clean_corpus):
                raise AlignmentError(
                    f"clean {name} embeddings ({extra.n}) != clean corpus length "
                    f"({len(clean_corpus)})"
                )

    passing = np.array([v.passed for v in verdicts], dtype=bool)
    scores = np.full(n, ScoreTable.SENTINEL, dtype=np.float64)
    if not passing.any():
        return scores
    sub = np.flatnonzero(passing)

    src_q = EmbeddingSet(src_emb.vectors[sub], side="src", origin=src_emb.origin)
    tgt_q = EmbeddingSet(tgt_emb.vectors[sub], side="tgt", origin=tgt_emb.origin)

    tgt_pools = [tgt_emb]
    tgt_texts = [corpus.tgt_texts()]
    src_pools = [src_emb]
    src_texts = [corpus.src_texts()]
    if clean_tgt_emb is not None and clean_corpus is not None:
        tgt_pools.append(clean_tgt_emb)
        tgt_texts.append(clean_corpus.tgt_texts())
    if clean_src_emb is not None and clean_corpus is not None:
        src_pools.append(clean_src_emb)
        src_texts.append(clean_corpus.src_texts())

    spec = config.neighborhood
    _, cos_x, len_x = knn_arrays(src_q, tgt_pools, tgt_texts, spec, threads=threads)
    _, cos_y, len_y = knn_arrays(tgt_q, src_pools, src_texts, spec, threads=threads)
    if (len_x == 0).any() or (len_y == 0).any():
        raise DataError("empty neighbor list; pool too small")

    cos_xy = pair_cosines(src_emb.vectors[sub], tgt_emb.vectors[sub])
    a = cos_x.sum(axis=1)
    b = cos_y.sum(axis=1)
    kx = len_x.astype(np.float64)
    ky = len_y.astype(np.float64)

    if config.variant == ABSOLUTE:
        values = cos_xy
    elif config.variant == DISTANCE:
        values = cos_xy - (a + b) / (kx + ky)
    else:
        denom = a + b
        bad = denom <= 0.0
        if bad.any():
            pair = int(sub[np.flatnonzero(bad)[0]])
            raise UndefinedScoreError(
                f"ratio margin undefined for pair {pair}: neighbor cosine sum <= 0"
            )
        values = (kx + ky) * cos_xy / denom
    scores[sub] = values
    return scores
