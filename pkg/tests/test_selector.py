import numpy as np
import pytest

from bitextfilter.corpus import PairCorpus, SentencePair
from bitextfilter.errors import AlignmentError, ConfigError, DataError
from bitextfilter.selector import Budget, count_tokens, subsample, write_selection

from oracles import naive_subsample


def corpus_with_tokens(token_counts):
    pairs = tuple(
        SentencePair(i, f"s{i}", " ".join(["w"] * c)) for i, c in enumerate(token_counts)
    )
    return PairCorpus(pairs=pairs, src_lang="xx", tgt_lang="yy")


def test_count_tokens():
    assert count_tokens("a b  c") == 3
    assert count_tokens("") == 0
    assert count_tokens("  x  ") == 1


def test_stop_at_crossing_pair():
    corpus = corpus_with_tokens([3, 3, 2])
    scores = np.array([3.0, 2.0, 1.0])
    selected, manifest = subsample(corpus, scores, Budget(5))
    assert selected == [0, 1]
    assert manifest.tokens == 6
    assert not manifest.underflow


def test_all_sentinel_empty_selection():
    corpus = corpus_with_tokens([3, 3])
    selected, manifest = subsample(corpus, np.array([-1.0, -1.0]), Budget(5))
    assert selected == []
    assert manifest.underflow


def test_budget_larger_than_total():
    corpus = corpus_with_tokens([2, 2])
    selected, manifest = subsample(corpus, np.array([1.0, 2.0]), Budget(100))
    assert sorted(selected) == [0, 1]
    assert manifest.underflow
    assert manifest.tokens == 4


def test_ties_break_by_index():
    corpus = corpus_with_tokens([1, 1, 1])
    selected, _ = subsample(corpus, np.array([1.0, 1.0, 1.0]), Budget(2))
    assert selected == [0, 1]


def test_negative_scores_below_sentinel_still_selectable():
    # dual cross-entropy scores are routinely below -1; only exact -1 is excluded
    corpus = corpus_with_tokens([1, 1])
    selected, _ = subsample(corpus, np.array([-4.0, -2.0]), Budget(1))
    assert selected == [1]


def test_nonfinite_score_rejected():
    corpus = corpus_with_tokens([1])
    with pytest.raises(DataError):
        subsample(corpus, np.array([np.inf]), Budget(1))


def test_length_mismatch():
    corpus = corpus_with_tokens([1, 1])
    with pytest.raises(AlignmentError):
        subsample(corpus, np.array([1.0]), Budget(1))


def test_budget_validation():
    with pytest.raises(ConfigError):
        Budget(0)
    with pytest.raises(ConfigError):
        Budget(5, counting_side="middle")


def test_counting_side_src():
    pairs = tuple(SentencePair(i, "a b c", "x") for i in range(3))
    corpus = PairCorpus(pairs=pairs, src_lang="en", tgt_lang="yy")
    selected, manifest = subsample(
        corpus, np.array([3.0, 2.0, 1.0]), Budget(4, counting_side="src")
    )
    assert selected == [0, 1]
    assert manifest.tokens == 6


def test_matches_bruteforce_random(rng):
    for _ in range(200):
        n = int(rng.integers(1, 30))
        scores = rng.choice([-1.0, 0.0, 0.5, 1.0, 2.0], size=n)
        tokens = rng.integers(0, 6, size=n)
        corpus = corpus_with_tokens(tokens.tolist())
        target = int(rng.integers(1, 20))
        selected, manifest = subsample(corpus, scores.astype(float), Budget(target))
        expected, total = naive_subsample(scores.tolist(), tokens.tolist(), target)
        assert selected == expected
        assert manifest.tokens == total


def test_write_selection(tmp_path):
    corpus = corpus_with_tokens([2, 1])
    selected, manifest = subsample(corpus, np.array([1.0, 2.0]), Budget(1))
    write_selection(corpus, selected, manifest, tmp_path / "sel")
    assert (tmp_path / "sel.src.txt").read_text() == "s1\n"
    assert (tmp_path / "sel.tgt.txt").read_text() == "w\n"
    assert (tmp_path / "sel.indices.txt").read_text() == "1\n"
    manifest_text = (tmp_path / "sel.manifest.txt").read_text()
    assert "pairs=1" in manifest_text
    assert "underflow=false" in manifest_text
