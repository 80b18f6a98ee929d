"""Quality scoring and token-budgeted subselection for noisy parallel corpora."""

__version__ = "0.1.0"

# bump when an on-disk layout changes incompatibly
FORMAT_VERSIONS = {
    "scores": 1,
    "feature_table": 1,
    "verdicts": 1,
    "labels": 1,
    "manifest": 1,
    "ensemble_model": 1,
}
