"""Command-line entry point orchestrating the filtering pipeline.

Subcommands: prefilter, score-margin, score-xent, ensemble-train,
ensemble-score, subsample, synth-generate, synth-eval, run-all.  Every
artifact is written atomically (temp file + rename).  Exit codes: 0 success,
1 usage error, 2 data/validation error.
"""

from __future__ import annotations

import argparse
import logging
import os
import sys

import numpy as np

from . import FORMAT_VERSIONS, __version__
from . import corpus as corpus_io
from . import ensemble as ens
from . import harness
from . import knn as knn_mod
from . import lid as lid_mod
from . import margin as margin_mod
from . import prefilter as pf
from . import selector as sel
from . import xent as xent_mod
from .corpus import ScoreTable
from .embeddings import load_embeddings, write_embeddings
from .errors import BitextFilterError, ConfigError

log = logging.getLogger("bitextfilter")

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2

# options that may arrive as strings from a config file
_COERCE = {
    "threads": int,
    "seed": int,
    "dim": int,
    "k": int,
    "budget": int,
    "learners": int,
    "iterations": int,
    "n_pairs": int,
    "bias": float,
    "overlap_threshold": float,
    "lid_min_confidence": float,
    "noise_sigma": float,
}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits 2 on usage problems; this pipeline reserves 2 for data errors
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(message)


def _version_string() -> str:
    formats = " ".join(f"{k}={v}" for k, v in sorted(FORMAT_VERSIONS.items()))
    return (
        f"bitextfilter {__version__} (knn backend: {knn_mod.active_backend()}; "
        f"formats: {formats})"
    )


def _read_config(path) -> dict[str, str]:
    values = {}
    for r, line in enumerate(corpus_io._read_lines(path)):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        if "=" not in stripped:
            raise UsageError(f"{path}: line {r} is not key=value: {line!r}")
        key, _, value = stripped.partition("=")
        values[key.strip().replace("-", "_")] = value.strip()
    return values


def _finalize_args(args: argparse.Namespace) -> argparse.Namespace:
    """Fill unset options from the config file (flags win), coerce numerics."""
    if getattr(args, "config", None):
        for key, raw in _read_config(args.config).items():
            if hasattr(args, key) and getattr(args, key) is None:
                setattr(args, key, raw)
    for key, caster in _COERCE.items():
        value = getattr(args, key, None)
        if isinstance(value, str):
            try:
                setattr(args, key, caster(value))
            except ValueError:
                raise UsageError(f"option {key} expects {caster.__name__}, got {value!r}")
    if getattr(args, "threads", None) is None:
        args.threads = os.cpu_count() or 1
    return args


def _require(args, *names):
    for name in names:
        if getattr(args, name.replace("-", "_"), None) is None:
            raise UsageError(f"missing required option --{name}")


# ---------------------------------------------------------------------------
# shared option groups

def _add_corpus_opts(p, langs=False):
    p.add_argument("--src", default=None, help="source-side text file")
    p.add_argument("--tgt", default=None, help="target-side text file")
    if langs:
        p.add_argument("--src-lang", default=None, help="declared source language code")
        p.add_argument("--tgt-lang", default=None, help="declared target language code")


def _add_lid_opts(p):
    p.add_argument("--no-lid", action="store_true", help="disable language-ID filtering")
    p.add_argument("--lid-labels-src", default=None, help="precomputed label file, source side")
    p.add_argument("--lid-labels-tgt", default=None, help="precomputed label file, target side")
    p.add_argument(
        "--lid-train",
        action="append",
        default=None,
        metavar="LANG=FILE",
        help="train the built-in identifier on sample texts (repeatable)",
    )
    p.add_argument("--lid-min-confidence", type=float, default=0.0)
    p.add_argument("--overlap-threshold", type=float, default=pf.DEFAULT_OVERLAP_THRESHOLD)


def _add_margin_opts(p):
    p.add_argument("--src-emb", default=None, help="noisy source embeddings (raw float32)")
    p.add_argument("--tgt-emb", default=None, help="noisy target embeddings (raw float32)")
    p.add_argument("--dim", type=int, default=None, help="embedding dimension (required)")
    p.add_argument("--k", type=int, default=4, help="neighbors per side")
    p.add_argument("--neighborhood", choices=["local", "global"], default="local")
    p.add_argument("--variant", choices=["ratio", "absolute", "distance"], default="ratio")
    p.add_argument("--clean-src", default=None, help="clean source text file")
    p.add_argument("--clean-tgt", default=None, help="clean target text file")
    p.add_argument("--clean-src-emb", default=None)
    p.add_argument("--clean-tgt-emb", default=None)


# ---------------------------------------------------------------------------
# input loading helpers

def _load_corpus(args, langs_required=False):
    _require(args, "src", "tgt")
    if langs_required:
        _require(args, "src-lang", "tgt-lang")
    src_lang = getattr(args, "src_lang", None) or "und"
    tgt_lang = getattr(args, "tgt_lang", None) or "und"
    return corpus_io.load_parallel(args.src, args.tgt, src_lang, tgt_lang)


def _load_clean_corpus(args, src_lang, tgt_lang):
    if args.clean_src is None and args.clean_tgt is None:
        return None
    _require(args, "clean-src", "clean-tgt")
    return corpus_io.load_parallel(args.clean_src, args.clean_tgt, src_lang, tgt_lang)


def _lid_inputs(args):
    if args.no_lid:
        return None, None, False
    if args.lid_labels_src or args.lid_labels_tgt:
        _require(args, "lid-labels-src", "lid-labels-tgt")
        labels = (
            pf.read_lang_labels(args.lid_labels_src),
            pf.read_lang_labels(args.lid_labels_tgt),
        )
        return labels, None, True
    if args.lid_train:
        samples: dict[str, list[str]] = {}
        for spec in args.lid_train:
            if "=" not in spec:
                raise UsageError(f"--lid-train expects LANG=FILE, got {spec!r}")
            lang, _, path = spec.partition("=")
            samples.setdefault(lang, []).extend(corpus_io._read_lines(path))
        return None, lid_mod.train_lid(samples), True
    raise UsageError(
        "language filtering needs --lid-labels-src/--lid-labels-tgt or "
        "--lid-train, or pass --no-lid"
    )


def _compute_verdicts(args, corpus):
    labels, model, enabled = _lid_inputs(args)
    return pf.apply_prefilters(
        corpus,
        lang_labels=labels,
        lid_model=model,
        threshold=args.overlap_threshold,
        min_confidence=args.lid_min_confidence,
        lid_enabled=enabled,
    )


def _get_verdicts(args, corpus):
    if getattr(args, "verdicts", None):
        verdicts = pf.read_verdicts(args.verdicts)
        if len(verdicts) != len(corpus):
            raise ConfigError(
                f"{args.verdicts}: {len(verdicts)} verdicts for {len(corpus)} pairs"
            )
        return verdicts
    return [pf.FilterVerdict(True, pf.Reason.OK)] * len(corpus)


def _load_margin_embeddings(args):
    _require(args, "src-emb", "tgt-emb", "dim")
    src_emb = load_embeddings(args.src_emb, args.dim, "src", "noisy")
    tgt_emb = load_embeddings(args.tgt_emb, args.dim, "tgt", "noisy")
    clean_src = clean_tgt = None
    if args.clean_src_emb or args.clean_tgt_emb:
        _require(args, "clean-src-emb", "clean-tgt-emb", "clean-src", "clean-tgt")
        clean_src = load_embeddings(args.clean_src_emb, args.dim, "src", "clean")
        clean_tgt = load_embeddings(args.clean_tgt_emb, args.dim, "tgt", "clean")
    return src_emb, tgt_emb, clean_src, clean_tgt


def _log_base(args):
    if args.log_base in (None, "e"):
        return None
    try:
        return float(args.log_base)
    except ValueError:
        raise UsageError(f"--log-base expects 'e' or a number, got {args.log_base!r}")


def _write_score_column(values, path):
    table = ScoreTable(len(values))
    table.add_column("score", values)
    corpus_io.write_scores(table, "score", path)
    log.info("wrote %s", path)


# ---------------------------------------------------------------------------
# subcommands

def _cmd_prefilter(args):
    corpus = _load_corpus(args, langs_required=True)
    verdicts = _compute_verdicts(args, corpus)
    _require(args, "out")
    pf.write_verdicts(verdicts, args.out)
    rejected = sum(1 for v in verdicts if not v.passed)
    log.info("prefilter: rejected %d of %d pairs", rejected, len(corpus))
    return EXIT_OK


def _cmd_score_margin(args):
    corpus = _load_corpus(args)
    clean_corpus = _load_clean_corpus(args, corpus.src_lang, corpus.tgt_lang)
    src_emb, tgt_emb, clean_src, clean_tgt = _load_margin_embeddings(args)
    verdicts = _get_verdicts(args, corpus)
    _require(args, "out")
    config = margin_mod.MarginConfig(
        variant=args.variant,
        neighborhood=knn_mod.NeighborhoodSpec(mode=args.neighborhood, k=args.k),
    )
    scores = margin_mod.score_corpus(
        corpus,
        src_emb,
        tgt_emb,
        verdicts,
        config,
        clean_corpus=clean_corpus,
        clean_src_emb=clean_src,
        clean_tgt_emb=clean_tgt,
        threads=args.threads,
    )
    _write_score_column(scores, args.out)
    return EXIT_OK


def _cmd_score_xent(args):
    corpus = _load_corpus(args)
    verdicts = _get_verdicts(args, corpus)
    _require(args, "forward", "backward", "out")
    scores = xent_mod.score_corpus_xent(
        corpus, args.forward, args.backward, verdicts, log_base=_log_base(args)
    )
    _write_score_column(scores, args.out)
    return EXIT_OK


def _feature_matrix_from_tables(pos_table, unl_table):
    names = pos_table.column_names
    if unl_table.column_names != names:
        raise ConfigError(
            f"feature columns differ: positives {names}, "
            f"unlabeled {unl_table.column_names}"
        )
    pos = np.column_stack([pos_table.column(n) for n in names])
    unl = np.column_stack([unl_table.column(n) for n in names])
    values = np.concatenate([pos, unl], axis=0)
    positive = np.zeros(values.shape[0], dtype=bool)
    positive[: pos_table.n_rows] = True
    # prefilter-rejected rows carry the -1 sentinel in at least one column
    usable = ~(values == ScoreTable.SENTINEL).any(axis=1)
    return ens.FeatureMatrix(
        values=values[usable], feature_names=tuple(names), positive=positive[usable]
    )


def _check_iterations(iterations):
    if iterations not in (1, 2):
        raise ConfigError(
            f"iterations must be 1 or 2, got {iterations}; "
            "quality degrades beyond two rounds"
        )


def _cmd_ensemble_train(args):
    _require(args, "features", "positives", "out")
    _check_iterations(args.iterations)
    pos_table = corpus_io.read_feature_table(args.positives)
    unl_table = corpus_io.read_feature_table(args.features)
    features = _feature_matrix_from_tables(pos_table, unl_table)
    model = ens.pu_train(
        features, n_learners=args.learners, bias_ratio=args.bias, seed=args.seed
    )
    if args.iterations == 2:
        model = ens.pu_iterate(features, model)
    ens.save_model(model, args.out)
    log.info(
        "wrote %s (iteration %d, %d learners)", args.out, model.iteration, len(model.learners)
    )
    return EXIT_OK


def _score_feature_table(model, table):
    names = list(model.feature_names)
    if table.column_names != names:
        raise ConfigError(
            f"feature columns {table.column_names} do not match model columns {names}"
        )
    values = np.column_stack([table.column(n) for n in names])
    usable = ~(values == ScoreTable.SENTINEL).any(axis=1)
    scores = np.full(values.shape[0], ScoreTable.SENTINEL, dtype=np.float64)
    if usable.any():
        scores[usable] = ens.ensemble_score_many(model, values[usable])
    return scores


def _cmd_ensemble_score(args):
    _require(args, "model", "features", "out")
    model = ens.load_model(args.model)
    table = corpus_io.read_feature_table(args.features)
    scores = _score_feature_table(model, table)
    _write_score_column(scores, args.out)
    return EXIT_OK


def _cmd_subsample(args):
    corpus = _load_corpus(args)
    _require(args, "scores", "budget", "output-prefix")
    scores = corpus_io.read_score_file(args.scores)
    budget = sel.Budget(target_tokens=args.budget, counting_side=args.english_side)
    selected, manifest = sel.subsample(corpus, scores, budget)
    sel.write_selection(corpus, selected, manifest, args.output_prefix)
    log.info(
        "selected %d pairs, %d tokens (underflow=%s)",
        manifest.pairs,
        manifest.tokens,
        manifest.underflow,
    )
    return EXIT_OK


def _parse_fractions(raw: str) -> dict[str, float]:
    fractions = {}
    for item in raw.split(","):
        if "=" not in item:
            raise UsageError(f"--fractions expects tag=value pairs, got {item!r}")
        tag, _, value = item.partition("=")
        try:
            fractions[tag.strip()] = float(value)
        except ValueError:
            raise UsageError(f"bad fraction value in {item!r}") from None
    return fractions


def _cmd_synth_generate(args):
    _require(args, "out-dir")
    if args.clean_src and args.clean_tgt:
        clean = corpus_io.load_parallel(args.clean_src, args.clean_tgt, "xx", "yy")
    elif args.n_pairs:
        clean = harness.make_clean_corpus(args.n_pairs, seed=args.seed)
    else:
        raise UsageError("need --clean-src/--clean-tgt or --n-pairs")
    spec = harness.NoiseSpec(fractions=_parse_fractions(args.fractions), seed=args.seed)
    noisy, labels = harness.generate(clean, spec)

    out = args.out_dir
    os.makedirs(out, exist_ok=True)
    for name, texts in (
        ("noisy.src.txt", noisy.src_texts()),
        ("noisy.tgt.txt", noisy.tgt_texts()),
        ("clean.src.txt", clean.src_texts()),
        ("clean.tgt.txt", clean.tgt_texts()),
    ):
        with corpus_io.atomic_write(os.path.join(out, name)) as fh:
            fh.writelines(t + "\n" for t in texts)
    harness.write_labels(labels, os.path.join(out, "labels.tsv"))

    src_emb, tgt_emb = harness.synthetic_embeddings(
        labels, args.dim, args.noise_sigma, args.seed
    )
    write_embeddings(src_emb.vectors, os.path.join(out, "noisy.src.emb.f32"))
    write_embeddings(tgt_emb.vectors, os.path.join(out, "noisy.tgt.emb.f32"))
    clean_labels = [harness.ALIGNED] * len(clean)
    clean_src_emb, clean_tgt_emb = harness.synthetic_embeddings(
        clean_labels, args.dim, args.noise_sigma, args.seed + 1
    )
    write_embeddings(clean_src_emb.vectors, os.path.join(out, "clean.src.emb.f32"))
    write_embeddings(clean_tgt_emb.vectors, os.path.join(out, "clean.tgt.emb.f32"))

    for lang, texts in harness.lid_training_samples(seed=args.seed).items():
        with corpus_io.atomic_write(os.path.join(out, f"lid.{lang}.txt")) as fh:
            fh.writelines(t + "\n" for t in texts)
    log.info("synthetic corpus of %d pairs written to %s", len(noisy), out)
    return EXIT_OK


def _cmd_synth_eval(args):
    corpus = _load_corpus(args)
    _require(args, "scores", "labels", "budget", "out")
    scores = corpus_io.read_score_file(args.scores)
    labels = harness.read_labels(args.labels)
    budget = sel.Budget(target_tokens=args.budget, counting_side=args.english_side)
    report = harness.evaluate(corpus, scores, labels, budget)
    harness.write_report(report, args.out, counts_path=args.counts_out)
    log.info(
        "auc=%.4f precision=%.4f recall=%.4f",
        report.auc,
        report.precision_at_budget,
        report.recall_at_budget,
    )
    return EXIT_OK


def _cmd_run_all(args):
    corpus = _load_corpus(args, langs_required=True)
    clean_corpus = _load_clean_corpus(args, corpus.src_lang, corpus.tgt_lang)
    src_emb, tgt_emb, clean_src, clean_tgt = _load_margin_embeddings(args)
    _require(args, "budget", "out-dir")
    _check_iterations(args.iterations)
    out = args.out_dir
    os.makedirs(out, exist_ok=True)

    verdicts = _compute_verdicts(args, corpus)
    pf.write_verdicts(verdicts, os.path.join(out, "verdicts.tsv"))

    threads = args.threads
    have_clean = clean_src is not None and clean_corpus is not None
    columns: dict[str, np.ndarray] = {}
    clean_columns: dict[str, np.ndarray] = {}
    clean_pass = (
        [pf.FilterVerdict(True, pf.Reason.OK)] * len(clean_corpus) if clean_corpus else []
    )

    def margin_scores(target, target_src_emb, target_tgt_emb, target_verdicts, other,
                      other_src_emb, other_tgt_emb, mode):
        config = margin_mod.MarginConfig(
            variant=args.variant,
            neighborhood=knn_mod.NeighborhoodSpec(mode=mode, k=args.k),
        )
        return margin_mod.score_corpus(
            target, target_src_emb, target_tgt_emb, target_verdicts, config,
            clean_corpus=other, clean_src_emb=other_src_emb, clean_tgt_emb=other_tgt_emb,
            threads=threads,
        )

    columns["margin_local"] = margin_scores(
        corpus, src_emb, tgt_emb, verdicts, clean_corpus, clean_src, clean_tgt, "local"
    )
    _write_score_column(columns["margin_local"], os.path.join(out, "scores.margin_local.txt"))
    if have_clean:
        columns["margin_global"] = margin_scores(
            corpus, src_emb, tgt_emb, verdicts, clean_corpus, clean_src, clean_tgt, "global"
        )
        _write_score_column(
            columns["margin_global"], os.path.join(out, "scores.margin_global.txt")
        )

    if args.forward and args.backward:
        columns["dual_xent"] = xent_mod.score_corpus_xent(
            corpus, args.forward, args.backward, verdicts, log_base=_log_base(args)
        )
        _write_score_column(columns["dual_xent"], os.path.join(out, "scores.xent.txt"))

    select_by = args.select_by
    if args.ensemble:
        if not have_clean:
            raise UsageError("--ensemble needs the clean corpus and its embeddings")
        clean_columns["margin_local"] = margin_scores(
            clean_corpus, clean_src, clean_tgt, clean_pass, corpus, src_emb, tgt_emb, "local"
        )
        clean_columns["margin_global"] = margin_scores(
            clean_corpus, clean_src, clean_tgt, clean_pass, corpus, src_emb, tgt_emb, "global"
        )
        if "dual_xent" in columns:
            if not (args.clean_forward and args.clean_backward):
                raise UsageError(
                    "--ensemble with cross-entropy scores needs --clean-forward "
                    "and --clean-backward"
                )
            clean_columns["dual_xent"] = xent_mod.score_corpus_xent(
                clean_corpus, args.clean_forward, args.clean_backward, clean_pass,
                log_base=_log_base(args),
            )

        names = sorted(columns)
        noisy_table = ScoreTable(len(corpus))
        clean_table = ScoreTable(len(clean_corpus))
        for name in names:
            noisy_table.add_column(name, columns[name])
            clean_table.add_column(name, clean_columns[name])
        corpus_io.write_feature_table(noisy_table, os.path.join(out, "features.noisy.tsv"))
        corpus_io.write_feature_table(clean_table, os.path.join(out, "features.clean.tsv"))

        features = _feature_matrix_from_tables(clean_table, noisy_table)
        model = ens.pu_train(
            features, n_learners=args.learners, bias_ratio=args.bias, seed=args.seed
        )
        if args.iterations == 2:
            model = ens.pu_iterate(features, model)
        ens.save_model(model, os.path.join(out, "ensemble.model.npz"))
        columns["ensemble"] = _score_feature_table(model, noisy_table)
        _write_score_column(columns["ensemble"], os.path.join(out, "scores.ensemble.txt"))
        if select_by == "auto":
            select_by = "ensemble"
    if select_by == "auto":
        select_by = "margin_local"
    if select_by not in columns:
        raise UsageError(f"--select-by {select_by} was not computed in this run")

    budget = sel.Budget(target_tokens=args.budget, counting_side=args.english_side)
    selected, manifest = sel.subsample(corpus, columns[select_by], budget)
    sel.write_selection(corpus, selected, manifest, os.path.join(out, "selected"))
    log.info(
        "run-all: %d pairs selected by %s (%d tokens, underflow=%s)",
        manifest.pairs, select_by, manifest.tokens, manifest.underflow,
    )
    return EXIT_OK


# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="bitextfilter", description=__doc__)
    parser.add_argument("--version", action="version", version=_version_string())
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, fn, help_text):
        p = sub.add_parser(name, help=help_text)
        p.set_defaults(fn=fn)
        p.add_argument("--config", default=None, help="key=value config file; flags win")
        p.add_argument("--threads", type=int, default=None, help="worker threads")
        p.add_argument("--seed", type=int, default=0)
        return p

    p = add("prefilter", _cmd_prefilter, "run rule-based filters, write verdicts")
    _add_corpus_opts(p, langs=True)
    _add_lid_opts(p)
    p.add_argument("--out", default=None)

    p = add("score-margin", _cmd_score_margin, "margin similarity scores")
    _add_corpus_opts(p)
    _add_margin_opts(p)
    p.add_argument("--verdicts", default=None, help="verdict file from the prefilter step")
    p.add_argument("--out", default=None)

    p = add("score-xent", _cmd_score_xent, "dual conditional cross-entropy scores")
    _add_corpus_opts(p)
    p.add_argument("--forward", default=None, help="forward-direction logprob TSV")
    p.add_argument("--backward", default=None, help="backward-direction logprob TSV")
    p.add_argument("--log-base", default=None, help="'e' (default) or a numeric base")
    p.add_argument("--verdicts", default=None)
    p.add_argument("--out", default=None)

    p = add("ensemble-train", _cmd_ensemble_train, "train the PU bagging ensemble")
    p.add_argument("--features", default=None, help="unlabeled (noisy) feature TSV")
    p.add_argument("--positives", default=None, help="positive (clean) feature TSV")
    p.add_argument("--learners", type=int, default=ens.DEFAULT_LEARNERS)
    p.add_argument("--bias", type=float, default=ens.DEFAULT_BIAS_RATIO)
    p.add_argument("--iterations", type=int, default=2)
    p.add_argument("--out", default=None)

    p = add("ensemble-score", _cmd_ensemble_score, "score a feature table with a model")
    p.add_argument("--model", default=None)
    p.add_argument("--features", default=None)
    p.add_argument("--out", default=None)

    p = add("subsample", _cmd_subsample, "budgeted selection from a score file")
    _add_corpus_opts(p)
    p.add_argument("--scores", default=None)
    p.add_argument("--budget", type=int, default=None, help="English token budget")
    p.add_argument("--english-side", choices=["src", "tgt"], default="tgt")
    p.add_argument("--output-prefix", default=None)

    p = add("synth-generate", _cmd_synth_generate, "generate a labeled noisy corpus")
    p.add_argument("--clean-src", default=None)
    p.add_argument("--clean-tgt", default=None)
    p.add_argument("--n-pairs", type=int, default=None, help="synthesize the clean corpus too")
    p.add_argument(
        "--fractions",
        default="aligned=0.5,misaligned=0.2,wrong_language=0.1,copy=0.1,truncated=0.1",
        help="comma-separated tag=fraction list, must sum to 1",
    )
    p.add_argument("--dim", type=int, default=32)
    p.add_argument("--noise-sigma", type=float, default=0.1)
    p.add_argument("--out-dir", default=None)

    p = add("synth-eval", _cmd_synth_eval, "filter-quality metrics on a labeled corpus")
    _add_corpus_opts(p)
    p.add_argument("--scores", default=None)
    p.add_argument("--labels", default=None)
    p.add_argument("--budget", type=int, default=None)
    p.add_argument("--english-side", choices=["src", "tgt"], default="tgt")
    p.add_argument("--out", default=None)
    p.add_argument("--counts-out", default=None, help="optional per-type TSV")

    p = add("run-all", _cmd_run_all, "prefilter, score, optionally ensemble, subsample")
    _add_corpus_opts(p, langs=True)
    _add_lid_opts(p)
    _add_margin_opts(p)
    p.add_argument("--forward", default=None)
    p.add_argument("--backward", default=None)
    p.add_argument("--clean-forward", default=None)
    p.add_argument("--clean-backward", default=None)
    p.add_argument("--log-base", default=None)
    p.add_argument("--ensemble", action="store_true")
    p.add_argument("--learners", type=int, default=ens.DEFAULT_LEARNERS)
    p.add_argument("--bias", type=float, default=ens.DEFAULT_BIAS_RATIO)
    p.add_argument("--iterations", type=int, default=2)
    p.add_argument(
        "--select-by",
        choices=["auto", "margin_local", "margin_global", "dual_xent", "ensemble"],
        default="auto",
    )
    p.add_argument("--budget", type=int, default=None)
    p.add_argument("--english-side", choices=["src", "tgt"], default="tgt")
    p.add_argument("--out-dir", default=None)

    return parser


def main(argv=None) -> int:
    logging.basicConfig(level=logging.INFO, format="%(levelname)s %(message)s")
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        args = _finalize_args(args)
        return args.fn(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except BitextFilterError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
