import pytest

from bitextfilter.corpus import PairCorpus, SentencePair
from bitextfilter.errors import AlignmentError, ConfigError, ParseError
from bitextfilter.lid import train_lid
from bitextfilter.prefilter import (
    FilterVerdict,
    Reason,
    apply_prefilters,
    overlap_ratio,
    read_lang_labels,
    read_verdicts,
    write_verdicts,
)

from conftest import write_text


def make_corpus(rows, src_lang="xx", tgt_lang="yy"):
    pairs = tuple(SentencePair(i, s, t) for i, (s, t) in enumerate(rows))
    return PairCorpus(pairs=pairs, src_lang=src_lang, tgt_lang=tgt_lang)


LID_MODEL = train_lid(
    {
        "xx": ["badak gada kata bata dagak taba", "gabad kade tag bag"],
        "yy": ["lomi nupi rusil molo pini surm", "limon pur noli mip"],
    }
)


def test_overlap_identical():
    assert overlap_ratio("a b c", "a b c") == 1.0


def test_overlap_one_of_five():
    # 1 shared token of min-side 5 unique tokens
    assert overlap_ratio("a b c d e", "a v w x y") == pytest.approx(0.2)


def test_overlap_containment():
    # intersection 2, smaller unique side 2
    assert overlap_ratio("a b", "a b c d e f") == 1.0


def test_overlap_empty_side():
    assert overlap_ratio("", "a b") == 0.0
    assert overlap_ratio("a", "") == 0.0
    assert overlap_ratio("  ", " ") == 0.0


def test_overlap_case_folding():
    assert overlap_ratio("Foo BAR", "foo bar") == 1.0


def test_overlap_symmetry(rng):
    vocab = [f"w{i}" for i in range(8)]
    for _ in range(100):
        a = " ".join(rng.choice(vocab, size=rng.integers(0, 6)))
        b = " ".join(rng.choice(vocab, size=rng.integers(0, 6)))
        assert overlap_ratio(a, b) == overlap_ratio(b, a)


def test_overlap_self_is_one(rng):
    for text in ("x", "a b c", "Foo foo BAR"):
        assert overlap_ratio(text, text) == 1.0


def test_prefilter_overlap_rejection(tmp_path):
    # identical sides with language labels asserting the declared languages:
    # only the overlap rule can fire
    corpus = make_corpus([("badak gada", "badak gada")])
    src = write_text(tmp_path / "src.tsv", ["0\txx\t1.0"])
    tgt = write_text(tmp_path / "tgt.tsv", ["0\tyy\t1.0"])
    labels = (read_lang_labels(src), read_lang_labels(tgt))
    verdicts = apply_prefilters(corpus, lang_labels=labels)
    assert verdicts[0] == FilterVerdict(False, Reason.OVERLAP)

    # same outcome with language checking off entirely
    verdicts = apply_prefilters(corpus, lid_enabled=False)
    assert verdicts[0] == FilterVerdict(False, Reason.OVERLAP)


def test_prefilter_bad_src_lang():
    # source side written in the target-side language
    corpus = make_corpus([("lomi nupi rusil", "molo pini sur")])
    verdicts = apply_prefilters(corpus, lid_model=LID_MODEL)
    assert verdicts[0] == FilterVerdict(False, Reason.BAD_SRC_LANG)


def test_prefilter_bad_tgt_lang():
    corpus = make_corpus([("badak gada kata", "badak kata gab")])
    verdicts = apply_prefilters(corpus, lid_model=LID_MODEL)
    assert verdicts[0] == FilterVerdict(False, Reason.BAD_TGT_LANG)


def test_prefilter_pass():
    corpus = make_corpus([("badak gada kata", "lomi nupi rusil")])
    verdicts = apply_prefilters(corpus, lid_model=LID_MODEL)
    assert verdicts[0] == FilterVerdict(True, Reason.OK)


def test_lid_runs_before_overlap():
    # fails both checks; the language reason must win
    corpus = make_corpus([("lomi nupi", "lomi nupi")])
    verdicts = apply_prefilters(corpus, lid_model=LID_MODEL)
    assert verdicts[0].reason == Reason.BAD_SRC_LANG


def test_prefilter_output_length():
    corpus = make_corpus([("badak", "lomi")] * 7)
    assert len(apply_prefilters(corpus, lid_model=LID_MODEL)) == 7


def test_prefilter_needs_lid_source():
    corpus = make_corpus([("a", "b")])
    with pytest.raises(ConfigError):
        apply_prefilters(corpus)
    verdicts = apply_prefilters(corpus, lid_enabled=False)
    assert verdicts[0].passed


def test_prefilter_label_files(tmp_path):
    corpus = make_corpus([("a b", "c d"), ("e f", "g h")])
    src = write_text(tmp_path / "src.tsv", ["0\txx\t0.9", "1\tyy\t0.8"])
    tgt = write_text(tmp_path / "tgt.tsv", ["0\tyy\t0.9", "1\tyy\t0.2"])
    labels = (read_lang_labels(src), read_lang_labels(tgt))
    verdicts = apply_prefilters(corpus, lang_labels=labels)
    assert verdicts[0].passed
    assert verdicts[1].reason == Reason.BAD_SRC_LANG

    # confidence thresholding is opt-in
    verdicts = apply_prefilters(corpus, lang_labels=labels, min_confidence=0.95)
    assert verdicts[0].reason == Reason.BAD_SRC_LANG


def test_prefilter_label_count_mismatch(tmp_path):
    corpus = make_corpus([("a", "b")] * 3)
    src = write_text(tmp_path / "src.tsv", ["0\txx\t1.0"])
    tgt = write_text(tmp_path / "tgt.tsv", ["0\tyy\t1.0"])
    labels = (read_lang_labels(src), read_lang_labels(tgt))
    with pytest.raises(AlignmentError):
        apply_prefilters(corpus, lang_labels=labels)


def test_label_file_validation(tmp_path):
    bad_conf = write_text(tmp_path / "a.tsv", ["0\txx\t1.5"])
    with pytest.raises(ParseError, match="confidence"):
        read_lang_labels(bad_conf)
    gap = write_text(tmp_path / "b.tsv", ["0\txx\t1.0", "2\txx\t1.0"])
    with pytest.raises(ParseError):
        read_lang_labels(gap)
    dup = write_text(tmp_path / "c.tsv", ["0\txx\t1.0", "0\txx\t1.0"])
    with pytest.raises(ParseError, match="duplicate"):
        read_lang_labels(dup)
    shuffled = write_text(tmp_path / "d.tsv", ["1\tyy\t0.5", "0\txx\t1.0"])
    labels = read_lang_labels(shuffled)
    assert labels.langs == ("xx", "yy")


def test_verdict_roundtrip(tmp_path):
    verdicts = [
        FilterVerdict(True, Reason.OK),
        FilterVerdict(False, Reason.OVERLAP),
        FilterVerdict(False, Reason.BAD_TGT_LANG),
    ]
    path = tmp_path / "verdicts.tsv"
    write_verdicts(verdicts, path)
    assert read_verdicts(path) == verdicts


def test_verdict_consistency_enforced():
    with pytest.raises(ValueError):
        FilterVerdict(True, Reason.OVERLAP)
    with pytest.raises(ValueError):
        FilterVerdict(False, Reason.OK)
