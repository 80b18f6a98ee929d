"""Built-in language identification via rank-order character n-gram profiles.

This is the hermetic fallback used when no precomputed language-label files
are supplied.  Each language gets a profile: its most frequent character
n-grams (n = 1..4, words padded with ``_``), rank-ordered.  A text is
classified by comparing its own profile against every language profile using
the classic out-of-place distance; n-grams absent from a profile cost the
full profile size.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass

from .errors import ConfigError

DEFAULT_PROFILE_SIZE = 300
_NGRAM_RANGE = (1, 2, 3, 4)

UNKNOWN = "unknown"


def _ngram_counts(text: str) -> Counter:
    counts: Counter = Counter()
    for word in text.casefold().split():
        padded = f"_{word}_"
        size = len(padded)
        for n in _NGRAM_RANGE:
            for i in range(size - n + 1):
                counts[padded[i : i + n]] += 1
    return counts


def _profile(counts: Counter, cap: int) -> dict[str, int]:
    # rank by descending count, ties by the n-gram itself so ranks are
    # reproducible across runs and platforms
    ordered = sorted(counts.items(), key=lambda kv: (-kv[1], kv[0]))[:cap]
    return {gram: rank for rank, (gram, _) in enumerate(ordered)}


@dataclass(frozen=True)
class NGramLangModel:
    """Per-language rank-ordered n-gram profiles."""

    profiles: dict[str, dict[str, int]]
    profile_size: int

    @property
    def languages(self) -> list[str]:
        return sorted(self.profiles)


def train_lid(samples: dict[str, list[str]], profile_size: int = DEFAULT_PROFILE_SIZE) -> NGramLangModel:
    """Build an :class:`NGramLangModel` from per-language sample texts."""
    if profile_size < 1:
        raise ConfigError("profile_size must be positive")
    if not samples:
        raise ConfigError("need at least one language to train on")
    profiles = {}
    for lang, texts in samples.items():
        counts: Counter = Counter()
        for text in texts:
            counts.update(_ngram_counts(text))
        if not counts:
            raise ConfigError(f"language {lang!r} has no usable sample text")
        profiles[lang] = _profile(counts, profile_size)
    return NGramLangModel(profiles=profiles, profile_size=profile_size)


def _distance(text_profile: dict[str, int], lang_profile: dict[str, int], cap: int) -> int:
    d = 0
    for gram, rank in text_profile.items():
        lang_rank = lang_profile.get(gram)
        d += cap if lang_rank is None else abs(rank - lang_rank)
    return d


def classify_lid(model: NGramLangModel, text: str) -> tuple[str, float]:
    """Return ``(language, confidence)`` for a text.

    Confidence is ``1 - best_distance / worst_distance`` over the model's
    languages, clamped to [0, 1]; a single-language model always answers with
    confidence 1.0.  Texts with no extractable n-grams come back as
    ``("unknown", 0.0)``.
    """
    text_profile = _profile(_ngram_counts(text), model.profile_size)
    if not text_profile:
        return (UNKNOWN, 0.0)
    distances = {
        lang: _distance(text_profile, profile, model.profile_size)
        for lang, profile in model.profiles.items()
    }
    # deterministic tie-break: smallest distance, then language code
    best_lang = min(distances, key=lambda lang: (distances[lang], lang))
    if len(distances) == 1:
        return (best_lang, 1.0)
    best = distances[best_lang]
    worst = max(distances.values())
    if worst <= 0:
        return (best_lang, 0.0)
    confidence = 1.0 - best / worst
    return (best_lang, min(1.0, max(0.0, confidence)))
