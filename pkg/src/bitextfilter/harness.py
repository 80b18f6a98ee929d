"""Synthetic noisy-corpus generation and filter-quality metrics.

Downstream MT quality is not measurable at desk scale, so filter quality is
evaluated on generated corpora with known per-pair ground truth instead.  The
noise taxonomy mirrors the usual web-crawl pathologies:

* ``aligned``        pair kept as-is;
* ``misaligned``     target swapped with another pair's target;
* ``wrong_language`` one side replaced by text in a third language;
* ``copy``           target replaced by the source text;
* ``truncated``      target cut to a random prefix.

Fractions partition the corpus by exact counts (largest-remainder rounding),
not by per-pair draws, so generated composition is reproducible bit-for-bit.
Oracle embeddings give aligned pairs a shared latent direction plus Gaussian
perturbation; every other pair gets independent directions per side.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .corpus import PairCorpus, SentencePair, _read_lines, atomic_write
from .embeddings import EmbeddingSet, normalize_rows
from .errors import AlignmentError, ConfigError, DataError, ParseError
from .selector import Budget, subsample

ALIGNED = "aligned"
MISALIGNED = "misaligned"
WRONG_LANGUAGE = "wrong_language"
COPY = "copy"
TRUNCATED = "truncated"
NOISE_TAGS = (ALIGNED, MISALIGNED, WRONG_LANGUAGE, COPY, TRUNCATED)

# disjoint letter inventories so the built-in language identifier separates
# the synthetic languages cleanly
_INVENTORIES = {
    "xx": ("bdgkt", "ae"),
    "yy": ("lmnprs", "iou"),
    "zz": ("vwzcf", "y"),
}
THIRD_LANG = "zz"


@dataclass(frozen=True)
class NoiseSpec:
    """Noise-type fractions (must sum to 1) and the generation seed."""

    fractions: dict[str, float]
    seed: int = 0

    def __post_init__(self):
        unknown = set(self.fractions) - set(NOISE_TAGS)
        if unknown:
            raise ConfigError(f"unknown noise tags: {sorted(unknown)}")
        if any(f < 0 for f in self.fractions.values()):
            raise ConfigError("fractions must be non-negative")
        total = sum(self.fractions.values())
        if abs(total - 1.0) > 1e-9:
            raise ConfigError(f"fractions sum to {total}, expected 1")


@dataclass(frozen=True)
class EvalReport:
    precision_at_budget: float
    recall_at_budget: float
    auc: float
    selected: int
    contamination: dict[str, int] = field(default_factory=dict)


def _pseudo_word(rng: np.random.Generator, lang: str) -> str:
    consonants, vowels = _INVENTORIES[lang]
    syllables = int(rng.integers(1, 4))
    return "".join(
        consonants[int(rng.integers(len(consonants)))]
        + vowels[int(rng.integers(len(vowels)))]
        for _ in range(syllables)
    )


def pseudo_sentence(rng: np.random.Generator, lang: str) -> str:
    """One synthetic sentence in a pseudo-language with a distinct alphabet."""
    if lang not in _INVENTORIES:
        raise ConfigError(f"no inventory for language {lang!r}")
    n_words = int(rng.integers(3, 12))
    return " ".join(_pseudo_word(rng, lang) for _ in range(n_words))


def make_clean_corpus(n: int, seed: int = 0, src_lang: str = "xx", tgt_lang: str = "yy") -> PairCorpus:
    """Generate a synthetic clean corpus with per-side pseudo-languages."""
    if n < 1:
        raise ConfigError("n must be >= 1")
    rng = np.random.default_rng([seed, 0])
    pairs = tuple(
        SentencePair(i, pseudo_sentence(rng, src_lang), pseudo_sentence(rng, tgt_lang))
        for i in range(n)
    )
    return PairCorpus(pairs=pairs, src_lang=src_lang, tgt_lang=tgt_lang)


def lid_training_samples(seed: int = 0, per_lang: int = 200) -> dict[str, list[str]]:
    """Sample texts for training the built-in language identifier."""
    rng = np.random.default_rng([seed, 1])
    return {
        lang: [pseudo_sentence(rng, lang) for _ in range(per_lang)]
        for lang in _INVENTORIES
    }


def _exact_counts(fractions: dict[str, float], n: int) -> dict[str, int]:
    # largest-remainder rounding in fixed tag order
    quotas = [(tag, fractions.get(tag, 0.0) * n) for tag in NOISE_TAGS]
    counts = {tag: int(q) for tag, q in quotas}
    short = n - sum(counts.values())
    remainders = sorted(
        ((q - int(q), tag) for tag, q in quotas),
        key=lambda item: (-item[0], NOISE_TAGS.index(item[1])),
    )
    for _, tag in remainders[:short]:
        counts[tag] += 1
    return counts


def generate(clean: PairCorpus, spec: NoiseSpec) -> tuple[PairCorpus, list[str]]:
    """Corrupt a clean corpus per the noise spec; returns (noisy, labels)."""
    n = len(clean)
    if n == 0:
        raise DataError("clean corpus is empty")
    rng = np.random.default_rng([spec.seed, 2])
    counts = _exact_counts(spec.fractions, n)

    perm = rng.permutation(n)
    labels = [""] * n
    cursor = 0
    positions: dict[str, np.ndarray] = {}
    for tag in NOISE_TAGS:
        rows = perm[cursor : cursor + counts[tag]]
        positions[tag] = rows
        for r in rows:
            labels[int(r)] = tag
        cursor += counts[tag]

    src = list(clean.src_texts())
    tgt = list(clean.tgt_texts())

    # misalignment: cyclic shift over a shuffled order, so no pair keeps its
    # own target whenever there are at least two of them
    mis = positions[MISALIGNED]
    if len(mis) > 1:
        order = mis[rng.permutation(len(mis))]
        originals = [tgt[int(i)] for i in order]
        for j, row in enumerate(order):
            tgt[int(row)] = originals[(j + 1) % len(order)]

    for row in positions[WRONG_LANGUAGE]:
        i = int(row)
        if rng.integers(2) == 0:
            src[i] = pseudo_sentence(rng, THIRD_LANG)
        else:
            tgt[i] = pseudo_sentence(rng, THIRD_LANG)

    for row in positions[COPY]:
        tgt[int(row)] = src[int(row)]

    for row in positions[TRUNCATED]:
        i = int(row)
        tokens = tgt[i].split()
        cut = int(rng.integers(1, len(tokens))) if len(tokens) > 1 else 1
        tgt[i] = " ".join(tokens[:cut])

    pairs = tuple(SentencePair(i, src[i], tgt[i]) for i in range(n))
    noisy = PairCorpus(pairs=pairs, src_lang=clean.src_lang, tgt_lang=clean.tgt_lang)
    return noisy, labels


def synthetic_embeddings(
    labels: list[str], dim: int, noise_sigma: float, seed: int, origin: str = "noisy"
) -> tuple[EmbeddingSet, EmbeddingSet]:
    """Oracle embeddings for a labeled corpus: (src set, tgt set).

    Aligned pairs share one latent unit direction, each side perturbed by
    Gaussian noise of scale ``noise_sigma``; all other pairs draw independent
    latents per side.  Aligned and non-aligned cosines stay separated in
    expectation roughly while noise_sigma**2 * dim stays below 1 (aligned
    expected cosine ~ 1 / (1 + noise_sigma**2 * dim), random cosines
    ~ dim**-0.5).
    """
    if dim < 2:
        raise ConfigError("dim must be >= 2")
    if noise_sigma < 0:
        raise ConfigError("noise_sigma must be >= 0")
    n = len(labels)
    rng = np.random.default_rng([seed, 3])
    latent_src = rng.standard_normal((n, dim))
    latent_other = rng.standard_normal((n, dim))
    aligned = np.array([lab == ALIGNED for lab in labels], dtype=bool)
    latent_tgt = np.where(aligned[:, None], latent_src, latent_other)
    latent_src = normalize_rows(latent_src).astype(np.float64)
    latent_tgt = normalize_rows(latent_tgt).astype(np.float64)
    src = latent_src + noise_sigma * rng.standard_normal((n, dim))
    tgt = latent_tgt + noise_sigma * rng.standard_normal((n, dim))
    src_set = EmbeddingSet(normalize_rows(src), side="src", origin=origin)
    tgt_set = EmbeddingSet(normalize_rows(tgt), side="tgt", origin=origin)
    return src_set, tgt_set


def write_labels(labels: list[str], path) -> None:
    with atomic_write(path) as fh:
        for i, tag in enumerate(labels):
            fh.write(f"{i}\t{tag}\n")


def read_labels(path) -> list[str]:
    labels = []
    for r, line in enumerate(_read_lines(path)):
        cells = line.split("\t")
        if len(cells) != 2 or cells[1] not in NOISE_TAGS:
            raise ParseError(f"{path}: bad label row {r}: {line!r}")
        if int(cells[0]) != r:
            raise ParseError(f"{path}: out-of-order index on row {r}")
        labels.append(cells[1])
    return labels


def _tie_averaged_ranks(values: np.ndarray) -> np.ndarray:
    order = np.argsort(values, kind="stable")
    ranks = np.empty(len(values), dtype=np.float64)
    sorted_vals = values[order]
    i = 0
    while i < len(values):
        j = i
        while j + 1 < len(values) and sorted_vals[j + 1] == sorted_vals[i]:
            j += 1
        ranks[order[i : j + 1]] = (i + j) / 2.0 + 1.0
        i = j + 1
    return ranks


def ranking_auc(scores: np.ndarray, aligned: np.ndarray) -> float:
    """P(random aligned pair outranks random non-aligned pair); ties count 0.5."""
    scores = np.asarray(scores, dtype=np.float64)
    aligned = np.asarray(aligned, dtype=bool)
    n_pos = int(aligned.sum())
    n_neg = int((~aligned).sum())
    if n_pos == 0 or n_neg == 0:
        raise DataError("AUC undefined: need both aligned and non-aligned pairs")
    ranks = _tie_averaged_ranks(scores)
    rank_sum = float(ranks[aligned].sum())
    return (rank_sum - n_pos * (n_pos + 1) / 2.0) / (n_pos * n_neg)


def evaluate(
    corpus: PairCorpus, scores: np.ndarray, labels: list[str], budget: Budget
) -> EvalReport:
    """Filter-quality metrics for a scored, labeled corpus.

    The corpus supplies the token counts that drive budgeted selection.
    """
    if len(labels) != len(corpus) or len(scores) != len(corpus):
        raise AlignmentError("scores, labels and corpus must have equal length")
    aligned = np.array([lab == ALIGNED for lab in labels], dtype=bool)
    auc = ranking_auc(scores, aligned)
    selected, _ = subsample(corpus, scores, budget)
    contamination = {tag: 0 for tag in NOISE_TAGS}
    for i in selected:
        contamination[labels[i]] += 1
    n_sel = len(selected)
    precision = contamination[ALIGNED] / n_sel if n_sel else 0.0
    total_aligned = int(aligned.sum())
    recall = contamination[ALIGNED] / total_aligned if total_aligned else 0.0
    return EvalReport(
        precision_at_budget=precision,
        recall_at_budget=recall,
        auc=auc,
        selected=n_sel,
        contamination=contamination,
    )


def write_report(report: EvalReport, path, counts_path=None) -> None:
    with atomic_write(path) as fh:
        fh.write(f"precision_at_budget={report.precision_at_budget!r}\n")
        fh.write(f"recall_at_budget={report.recall_at_budget!r}\n")
        fh.write(f"auc={report.auc!r}\n")
        fh.write(f"selected={report.selected}\n")
    if counts_path is not None:
        with atomic_write(counts_path) as fh:
            fh.write("noise_tag\tselected_count\n")
            for tag in NOISE_TAGS:
                fh.write(f"{tag}\t{report.contamination.get(tag, 0)}\n")
