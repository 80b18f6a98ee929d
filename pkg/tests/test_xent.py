import numpy as np
import pytest

from bitextfilter.corpus import PairCorpus, SentencePair
from bitextfilter.errors import CoverageError, DataError, ParseError
from bitextfilter.prefilter import FilterVerdict, Reason
from bitextfilter.xent import (
    TokenLogProbs,
    dual_record,
    dual_score,
    read_logprob_file,
    score_corpus_xent,
    sentence_xent,
)

from conftest import write_text

PASS = FilterVerdict(True, Reason.OK)
FAIL = FilterVerdict(False, Reason.OVERLAP)


def tlp(*values):
    return TokenLogProbs(0, "forward", tuple(values))


def make_corpus(n):
    pairs = tuple(SentencePair(i, f"s{i}", f"t{i}") for i in range(n))
    return PairCorpus(pairs=pairs, src_lang="xx", tgt_lang="yy")


def test_sentence_xent_mean():
    assert sentence_xent(tlp(-0.5, -1.5)) == -1.0
    assert sentence_xent(tlp(-2.0)) == -2.0


def test_sentence_xent_matches_naive(rng):
    for _ in range(50):
        values = -rng.random(10) * 5
        naive = sum(values) / len(values)
        assert sentence_xent(tlp(*values)) == pytest.approx(naive, abs=1e-12)


def test_sentence_xent_empty():
    with pytest.raises(DataError):
        sentence_xent(tlp())


def test_dual_score_agreement():
    assert dual_score(-1.0, -1.0) == -1.0


def test_dual_score_penalty():
    assert dual_score(-1.0, -3.0) == -4.0


def test_dual_score_symmetry():
    assert dual_score(-1.0, -3.0) == dual_score(-3.0, -1.0)


def test_dual_score_nonfinite():
    with pytest.raises(DataError):
        dual_score(float("inf"), -1.0)
    with pytest.raises(DataError):
        dual_score(-1.0, float("nan"))


def test_dual_record_invariant():
    rec = dual_record(-1.0, -2.0)
    assert rec.score == (rec.h_forward + rec.h_backward) / 2 - abs(
        rec.h_forward - rec.h_backward
    )


def logprob_file(tmp_path, name, rows):
    return write_text(
        tmp_path / name,
        [f"{i}\t{' '.join(str(v) for v in vals)}" for i, vals in rows],
    )


def test_score_corpus_two_pairs(tmp_path):
    corpus = make_corpus(2)
    fwd = logprob_file(tmp_path, "f.tsv", [(0, [-1.0]), (1, [-1.0])])
    bwd = logprob_file(tmp_path, "b.tsv", [(0, [-1.0]), (1, [-3.0])])
    scores = score_corpus_xent(corpus, fwd, bwd, [PASS, PASS])
    assert np.array_equal(scores, [-1.0, -4.0])
    # pair 0 ranks first
    assert scores[0] > scores[1]


def test_score_corpus_all_rejected(tmp_path):
    corpus = make_corpus(2)
    fwd = logprob_file(tmp_path, "f.tsv", [(0, [-1.0]), (1, [-1.0])])
    bwd = logprob_file(tmp_path, "b.tsv", [(0, [-1.0]), (1, [-1.0])])
    scores = score_corpus_xent(corpus, fwd, bwd, [FAIL, FAIL])
    assert np.array_equal(scores, [-1.0, -1.0])


def test_score_corpus_missing_index(tmp_path):
    corpus = make_corpus(10)
    rows = [(i, [-1.0]) for i in range(10) if i != 5]
    fwd = logprob_file(tmp_path, "f.tsv", rows)
    bwd = logprob_file(tmp_path, "b.tsv", [(i, [-1.0]) for i in range(10)])
    with pytest.raises(CoverageError, match="5"):
        score_corpus_xent(corpus, fwd, bwd, [PASS] * 10)


def test_logprob_file_duplicate_index(tmp_path):
    path = logprob_file(tmp_path, "f.tsv", [(0, [-1.0]), (0, [-2.0])])
    with pytest.raises(CoverageError, match="duplicate"):
        read_logprob_file(path, "forward")


def test_logprob_file_rejects_positive(tmp_path):
    path = write_text(tmp_path / "f.tsv", ["0\t-1.0 0.5"])
    with pytest.raises(ParseError, match="positive"):
        read_logprob_file(path, "forward")


def test_logprob_file_rejects_empty_row(tmp_path):
    path = write_text(tmp_path / "f.tsv", ["0\t"])
    with pytest.raises(ParseError):
        read_logprob_file(path, "forward")


def test_logprob_base_conversion(tmp_path):
    path = write_text(tmp_path / "f.tsv", ["0\t-1.0 -2.0"])
    rows = read_logprob_file(path, "forward", log_base=2.0)
    assert rows[0].logprobs == pytest.approx(
        (-1.0 * np.log(2.0), -2.0 * np.log(2.0))
    )


def test_dual_score_properties(rng):
    a = -rng.random(20000) * 10
    b = -rng.random(20000) * 10
    for x, y in zip(a[:100], b[:100]):
        s = dual_score(x, y)
        assert s == dual_score(y, x)
        assert s <= (x + y) / 2
        assert s <= max(x, y)
        assert dual_score(x, x) == x
