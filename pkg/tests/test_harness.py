import numpy as np
import pytest

from bitextfilter.errors import ConfigError, DataError
from bitextfilter.harness import (
    ALIGNED,
    COPY,
    MISALIGNED,
    NOISE_TAGS,
    NoiseSpec,
    evaluate,
    generate,
    lid_training_samples,
    make_clean_corpus,
    ranking_auc,
    read_labels,
    synthetic_embeddings,
    write_labels,
)
from bitextfilter.lid import classify_lid, train_lid
from bitextfilter.prefilter import Reason, apply_prefilters
from bitextfilter.selector import Budget

from oracles import naive_auc


def spec(seed=0, **fractions):
    return NoiseSpec(fractions=fractions, seed=seed)


def test_all_aligned_is_identity():
    clean = make_clean_corpus(20, seed=1)
    noisy, labels = generate(clean, spec(aligned=1.0))
    assert noisy.pairs == clean.pairs
    assert labels == [ALIGNED] * 20


def test_copy_replaces_target():
    clean = make_clean_corpus(10, seed=1)
    noisy, labels = generate(clean, spec(copy=1.0))
    assert all(p.tgt_text == p.src_text for p in noisy.pairs)
    assert labels == [COPY] * 10


def test_exact_partition():
    clean = make_clean_corpus(1000, seed=2)
    _, labels = generate(clean, spec(aligned=0.5, misaligned=0.5))
    assert labels.count(ALIGNED) == 500
    assert labels.count(MISALIGNED) == 500


def test_partition_rounding():
    clean = make_clean_corpus(10, seed=2)
    _, labels = generate(clean, spec(aligned=1 / 3, misaligned=1 / 3, copy=1 / 3))
    counts = [labels.count(t) for t in NOISE_TAGS]
    assert sum(counts) == 10
    assert max(counts) - min(c for c in counts if c) <= 1


def test_fraction_sum_checked():
    with pytest.raises(ConfigError):
        NoiseSpec(fractions={"aligned": 0.5})
    with pytest.raises(ConfigError):
        NoiseSpec(fractions={"aligned": 0.5, "junk": 0.5})


def test_misalignment_is_derangement():
    clean = make_clean_corpus(50, seed=3)
    noisy, labels = generate(clean, spec(misaligned=1.0))
    for i, pair in enumerate(noisy.pairs):
        assert pair.tgt_text != clean[i].tgt_text or labels[i] != MISALIGNED
    # targets are a permutation of the originals
    assert sorted(p.tgt_text for p in noisy.pairs) == sorted(clean.tgt_texts())


def test_generation_deterministic():
    clean = make_clean_corpus(100, seed=4)
    s = spec(seed=9, aligned=0.4, misaligned=0.3, wrong_language=0.1, copy=0.1, truncated=0.1)
    first = generate(clean, s)
    second = generate(clean, s)
    assert first[0].pairs == second[0].pairs
    assert first[1] == second[1]


def test_wrong_language_detected_by_lid():
    clean = make_clean_corpus(40, seed=5)
    noisy, labels = generate(clean, spec(aligned=0.5, wrong_language=0.5))
    model = train_lid(lid_training_samples(seed=5))
    for pair, label in zip(noisy.pairs, labels):
        if label == "wrong_language":
            predictions = {
                classify_lid(model, pair.src_text)[0],
                classify_lid(model, pair.tgt_text)[0],
            }
            assert "zz" in predictions


def test_truncated_is_prefix():
    clean = make_clean_corpus(30, seed=6)
    noisy, labels = generate(clean, spec(truncated=1.0))
    for i, pair in enumerate(noisy.pairs):
        original = clean[i].tgt_text
        assert original.startswith(pair.tgt_text)
        assert len(pair.tgt_text.split()) <= len(original.split())


def test_synthetic_embeddings_aligned_sigma_zero():
    labels = [ALIGNED] * 8 + [MISALIGNED] * 8
    src, tgt = synthetic_embeddings(labels, dim=64, noise_sigma=0.0, seed=0)
    cosines = np.einsum(
        "ij,ij->i", src.vectors.astype(np.float64), tgt.vectors.astype(np.float64)
    )
    assert np.allclose(cosines[:8], 1.0, atol=1e-6)
    assert (np.abs(cosines[8:]) < 0.5).all()


def test_synthetic_embeddings_deterministic():
    labels = [ALIGNED, MISALIGNED] * 5
    a = synthetic_embeddings(labels, dim=16, noise_sigma=0.2, seed=3)
    b = synthetic_embeddings(labels, dim=16, noise_sigma=0.2, seed=3)
    assert np.array_equal(a[0].vectors, b[0].vectors)
    assert np.array_equal(a[1].vectors, b[1].vectors)


def test_synthetic_embeddings_validation():
    with pytest.raises(ConfigError):
        synthetic_embeddings([ALIGNED], dim=1, noise_sigma=0.1, seed=0)
    with pytest.raises(ConfigError):
        synthetic_embeddings([ALIGNED], dim=4, noise_sigma=-0.1, seed=0)


def test_copy_pairs_rejected_by_overlap():
    clean = make_clean_corpus(20, seed=7)
    noisy, labels = generate(clean, spec(aligned=0.5, copy=0.5))
    verdicts = apply_prefilters(noisy, lid_enabled=False)
    for v, label in zip(verdicts, labels):
        if label == COPY:
            assert not v.passed
            assert v.reason == Reason.OVERLAP


def test_labels_roundtrip(tmp_path):
    labels = [ALIGNED, COPY, MISALIGNED]
    write_labels(labels, tmp_path / "labels.tsv")
    assert read_labels(tmp_path / "labels.tsv") == labels


def corpus_with_unit_tokens(n):
    return make_clean_corpus(n, seed=11)


def test_evaluate_perfect_scores():
    corpus = corpus_with_unit_tokens(10)
    labels = [ALIGNED] * 5 + [MISALIGNED] * 5
    scores = np.array([1.0] * 5 + [0.0] * 5)
    tokens_aligned = sum(len(corpus[i].tgt_text.split()) for i in range(5))
    report = evaluate(corpus, scores, labels, Budget(tokens_aligned))
    assert report.auc == 1.0
    assert report.precision_at_budget == 1.0
    assert report.recall_at_budget == 1.0


def test_evaluate_inverted_scores():
    corpus = corpus_with_unit_tokens(10)
    labels = [ALIGNED] * 5 + [MISALIGNED] * 5
    scores = np.array([0.0] * 5 + [1.0] * 5)
    report = evaluate(corpus, scores, labels, Budget(1))
    assert report.auc == 0.0


def test_evaluate_all_equal_scores():
    corpus = corpus_with_unit_tokens(10)
    labels = [ALIGNED] * 5 + [MISALIGNED] * 5
    report = evaluate(corpus, np.zeros(10), labels, Budget(1))
    assert report.auc == 0.5


def test_auc_undefined_without_both_classes():
    with pytest.raises(DataError):
        ranking_auc(np.array([1.0, 2.0]), np.array([True, True]))


def test_auc_matches_naive(rng):
    for _ in range(50):
        n = int(rng.integers(3, 40))
        scores = rng.choice([0.0, 0.25, 0.5, 1.0], size=n)
        aligned = rng.random(n) < 0.5
        if aligned.all() or not aligned.any():
            continue
        assert ranking_auc(scores, aligned) == pytest.approx(
            naive_auc(scores.tolist(), aligned.tolist()), abs=1e-12
        )


def test_contamination_counts():
    corpus = corpus_with_unit_tokens(6)
    labels = [ALIGNED, ALIGNED, COPY, MISALIGNED, ALIGNED, COPY]
    scores = np.array([6.0, 5.0, 4.0, 3.0, 2.0, 1.0])
    total_tokens = sum(len(p.tgt_text.split()) for p in corpus.pairs)
    report = evaluate(corpus, scores, labels, Budget(total_tokens))
    assert report.contamination[ALIGNED] == 3
    assert report.contamination[COPY] == 2
    assert report.contamination[MISALIGNED] == 1
