"""Rule-based prefilters applied before any model-based scoring.

A pair is rejected (and later scored exactly -1 by every scorer) when either
side is in the wrong language, or when source and target share at least 60%
of their tokens.  Language checks run before the overlap check, so the first
failing rule determines the reported reason.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

from .corpus import PairCorpus, _read_lines, atomic_write
from .errors import AlignmentError, ConfigError, ParseError
from .lid import NGramLangModel, classify_lid

DEFAULT_OVERLAP_THRESHOLD = 0.6


class Reason(str, Enum):
    OK = "ok"
    BAD_SRC_LANG = "bad_src_lang"
    BAD_TGT_LANG = "bad_tgt_lang"
    OVERLAP = "overlap"


@dataclass(frozen=True)
class FilterVerdict:
    passed: bool
    reason: Reason

    def __post_init__(self):
        if self.passed != (self.reason == Reason.OK):
            raise ValueError("reason must be 'ok' iff the pair passed")


_PASS = FilterVerdict(True, Reason.OK)


@dataclass(frozen=True)
class LangLabelFile:
    """Predicted language and confidence for one side of every pair."""

    langs: tuple[str, ...]
    confidences: tuple[float, ...]

    def __len__(self) -> int:
        return len(self.langs)


def read_lang_labels(path) -> LangLabelFile:
    """Read a TSV label file with rows ``index<TAB>lang<TAB>confidence``.

    Rows may be in any order but must cover exactly 0..n-1.
    """
    lines = _read_lines(path)
    langs: dict[int, str] = {}
    confs: dict[int, float] = {}
    for r, line in enumerate(lines):
        cells = line.split("\t")
        if len(cells) != 3:
            raise ParseError(f"{path}: row {r} has {len(cells)} cells, expected 3")
        try:
            idx = int(cells[0])
            conf = float(cells[2])
        except ValueError as exc:
            raise ParseError(f"{path}: bad number on row {r}: {line!r}") from exc
        if idx in langs:
            raise ParseError(f"{path}: duplicate index {idx} on row {r}")
        if not 0.0 <= conf <= 1.0:
            raise ParseError(f"{path}: confidence {conf} outside [0,1] on row {r}")
        langs[idx] = cells[1]
        confs[idx] = conf
    n = len(lines)
    if set(langs) != set(range(n)):
        missing = sorted(set(range(n)) - set(langs))[:3]
        raise ParseError(f"{path}: indices do not cover 0..{n - 1} (missing {missing})")
    return LangLabelFile(
        langs=tuple(langs[i] for i in range(n)),
        confidences=tuple(confs[i] for i in range(n)),
    )


def overlap_ratio(src_text: str, tgt_text: str) -> float:
    """Fraction of the smaller side's unique tokens shared with the other side.

    Tokens are whitespace-split and case-folded.  Either side empty gives 0.
    The min-size denominator makes the filter catch containment noise, where
    one side is embedded verbatim in the other.
    """
    src_tokens = set(src_text.casefold().split())
    tgt_tokens = set(tgt_text.casefold().split())
    if not src_tokens or not tgt_tokens:
        return 0.0
    shared = len(src_tokens & tgt_tokens)
    return shared / min(len(src_tokens), len(tgt_tokens))


def _predicted(
    labels: LangLabelFile | None,
    lid_model: NGramLangModel | None,
    index: int,
    text: str,
) -> tuple[str, float]:
    # precomputed label files take priority over the built-in classifier
    if labels is not None:
        return labels.langs[index], labels.confidences[index]
    return classify_lid(lid_model, text)


def apply_prefilters(
    corpus: PairCorpus,
    lang_labels: tuple[LangLabelFile, LangLabelFile] | None = None,
    lid_model: NGramLangModel | None = None,
    threshold: float = DEFAULT_OVERLAP_THRESHOLD,
    min_confidence: float = 0.0,
    lid_enabled: bool = True,
) -> list[FilterVerdict]:
    """Run language-ID and token-overlap filters over a corpus.

    ``lang_labels`` is a (src, tgt) pair of label files; when absent, the
    built-in ``lid_model`` classifies each side.  LID can be switched off
    entirely with ``lid_enabled=False``, in which case only the overlap rule
    runs.
    """
    if lid_enabled and lang_labels is None and lid_model is None:
        raise ConfigError(
            "language filtering needs label files or a trained model; "
            "pass lid_enabled=False to skip it"
        )
    src_labels = tgt_labels = None
    if lang_labels is not None:
        src_labels, tgt_labels = lang_labels
        for side, lab in (("src", src_labels), ("tgt", tgt_labels)):
            if len(lab) != len(corpus):
                raise AlignmentError(
                    f"{side} label file has {len(lab)} rows, corpus has {len(corpus)}"
                )

    verdicts = []
    for pair in corpus.pairs:
        verdict = _PASS
        if lid_enabled:
            lang, conf = _predicted(src_labels, lid_model, pair.index, pair.src_text)
            if lang != corpus.src_lang or conf < min_confidence:
                verdict = FilterVerdict(False, Reason.BAD_SRC_LANG)
            else:
                lang, conf = _predicted(tgt_labels, lid_model, pair.index, pair.tgt_text)
                if lang != corpus.tgt_lang or conf < min_confidence:
                    verdict = FilterVerdict(False, Reason.BAD_TGT_LANG)
        if verdict.passed and overlap_ratio(pair.src_text, pair.tgt_text) >= threshold:
            verdict = FilterVerdict(False, Reason.OVERLAP)
        verdicts.append(verdict)
    return verdicts


def write_verdicts(verdicts: list[FilterVerdict], path) -> None:
    """Write verdicts as TSV rows ``index<TAB>reason``."""
    with atomic_write(path) as fh:
        for i, v in enumerate(verdicts):
            fh.write(f"{i}\t{v.reason.value}\n")


def read_verdicts(path) -> list[FilterVerdict]:
    lines = _read_lines(path)
    verdicts = []
    for r, line in enumerate(lines):
        cells = line.split("\t")
        if len(cells) != 2:
            raise ParseError(f"{path}: row {r} has {len(cells)} cells, expected 2")
        try:
            idx = int(cells[0])
            reason = Reason(cells[1])
        except ValueError as exc:
            raise ParseError(f"{path}: bad row {r}: {line!r}") from exc
        if idx != r:
            raise ParseError(f"{path}: row {r} has out-of-order index {idx}")
        verdicts.append(FilterVerdict(reason == Reason.OK, reason))
    return verdicts
