"""Dual conditional cross-entropy scoring from forced-decoding log-probs.

Translation models themselves are external: this module only consumes their
per-token log-probabilities, produced by force-decoding each pair in both
directions.  The per-sentence statistic is the mean token log-probability

    H(y|x) = (1/|y|) * sum_t log p(y_t | y_1..t-1, x)

(so higher is better), and the pair score averages the two directions with a
penalty on their disagreement:

    score = (H_F + H_B) / 2 - |H_F - H_B|
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .corpus import PairCorpus, ScoreTable, _read_lines
from .errors import AlignmentError, CoverageError, DataError, ParseError

FORWARD = "forward"
BACKWARD = "backward"


@dataclass(frozen=True)
class TokenLogProbs:
    """Natural-log token probabilities of one pair in one decode direction."""

    pair_index: int
    direction: str
    logprobs: tuple[float, ...]


@dataclass(frozen=True)
class DualXentRecord:
    h_forward: float
    h_backward: float
    score: float


def sentence_xent(tokens: TokenLogProbs) -> float:
    """Mean token log-probability of one sentence."""
    if not tokens.logprobs:
        raise DataError(
            f"pair {tokens.pair_index}: zero-length target has no defined score"
        )
    return float(np.mean(np.asarray(tokens.logprobs, dtype=np.float64)))


def dual_score(h_f: float, h_b: float) -> float:
    """Agreement-penalized average of the two directional scores."""
    if not (math.isfinite(h_f) and math.isfinite(h_b)):
        raise DataError(f"non-finite inputs: {h_f}, {h_b}")
    return (h_f + h_b) / 2.0 - abs(h_f - h_b)


def dual_record(h_f: float, h_b: float) -> DualXentRecord:
    return DualXentRecord(h_f, h_b, dual_score(h_f, h_b))


def read_logprob_file(path, direction: str, log_base: float | None = None) -> dict[int, TokenLogProbs]:
    """Read a TSV of ``pair_index<TAB>space-separated floats``.

    ``log_base`` converts from another base to natural log (e.g. 2.0 when the
    decoder reports bits); None means the values are already natural logs.
    All values must be <= 0 since they are log-probabilities.
    """
    scale = math.log(log_base) if log_base is not None else 1.0
    rows: dict[int, TokenLogProbs] = {}
    for r, line in enumerate(_read_lines(path)):
        cells = line.split("\t")
        if len(cells) != 2:
            raise ParseError(f"{path}: row {r} has {len(cells)} cells, expected 2")
        try:
            idx = int(cells[0])
            values = tuple(float(v) * scale for v in cells[1].split())
        except ValueError as exc:
            raise ParseError(f"{path}: bad number on row {r}") from exc
        if not values:
            raise ParseError(f"{path}: row {r} has no log-probabilities")
        if any(v > 0.0 for v in values):
            raise ParseError(f"{path}: positive log-probability on row {r}")
        if idx in rows:
            raise CoverageError(f"{path}: duplicate pair index {idx} on row {r}")
        rows[idx] = TokenLogProbs(pair_index=idx, direction=direction, logprobs=values)
    return rows


def _check_coverage(rows: dict[int, TokenLogProbs], n: int, path) -> None:
    indices = set(rows)
    expected = set(range(n))
    if indices != expected:
        missing = sorted(expected - indices)
        extra = sorted(indices - expected)
        detail = []
        if missing:
            detail.append(f"missing {missing[:5]}")
        if extra:
            detail.append(f"unknown {extra[:5]}")
        raise CoverageError(f"{path}: pair coverage broken ({'; '.join(detail)})")


def score_corpus_xent(
    corpus: PairCorpus,
    forward_path,
    backward_path,
    verdicts,
    log_base: float | None = None,
) -> np.ndarray:
    """Dual cross-entropy scores per pair; rejected pairs get exactly -1.

    A legitimately computed score of -1.0 collides with the sentinel and is
    written as-is: selection treats both identically.
    """
    n = len(corpus)
    if len(verdicts) != n:
        raise AlignmentError(f"{len(verdicts)} verdicts for {n} pairs")
    fwd = read_logprob_file(forward_path, FORWARD, log_base)
    bwd = read_logprob_file(backward_path, BACKWARD, log_base)
    _check_coverage(fwd, n, forward_path)
    _check_coverage(bwd, n, backward_path)
    scores = np.full(n, ScoreTable.SENTINEL, dtype=np.float64)
    for i in range(n):
        if verdicts[i].passed:
            scores[i] = dual_score(sentence_xent(fwd[i]), sentence_xent(bwd[i]))
    return scores
