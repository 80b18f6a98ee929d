"""Data model and I/O for parallel corpora, score files and feature tables.

File formats owned by this module:

* parallel text: two aligned UTF-8 files, one sentence per line;
* score file: one ASCII decimal float per line, LF-terminated, with the
  prefilter sentinel written exactly as ``-1``;
* feature table: TSV with a header row of column names.
"""

from __future__ import annotations

import os
import tempfile
from contextlib import contextmanager
from dataclasses import dataclass

import numpy as np

from .errors import AlignmentError, DataError, DecodeError, ParseError


@dataclass(frozen=True)
class SentencePair:
    """One aligned sentence pair; ``index`` equals the input line number."""

    index: int
    src_text: str
    tgt_text: str


@dataclass(frozen=True)
class PairCorpus:
    """Ordered, immutable collection of sentence pairs."""

    pairs: tuple[SentencePair, ...]
    src_lang: str
    tgt_lang: str

    def __len__(self) -> int:
        return len(self.pairs)

    def __getitem__(self, i: int) -> SentencePair:
        return self.pairs[i]

    def src_texts(self) -> list[str]:
        return [p.src_text for p in self.pairs]

    def tgt_texts(self) -> list[str]:
        return [p.tgt_text for p in self.pairs]


class ScoreTable:
    """Named per-pair score columns, all of length ``n_rows``.

    Scores are stored as 64-bit floats regardless of how upstream stages
    computed them; columns are frozen (read-only arrays) once added.
    """

    SENTINEL = -1.0  # reserved value marking prefilter-rejected pairs

    def __init__(self, n_rows: int):
        if n_rows < 0:
            raise ValueError("n_rows must be non-negative")
        self.n_rows = n_rows
        self._columns: dict[str, np.ndarray] = {}

    @property
    def column_names(self) -> list[str]:
        return list(self._columns)

    def add_column(self, name: str, values) -> None:
        if not name or "\t" in name or "\n" in name:
            raise DataError(f"invalid column name {name!r}")
        if name in self._columns:
            raise DataError(f"duplicate column name {name!r}")
        arr = np.asarray(values, dtype=np.float64)
        if arr.ndim != 1 or arr.shape[0] != self.n_rows:
            raise AlignmentError(
                f"column {name!r} has {arr.shape[0] if arr.ndim == 1 else 'non-1d'} "
                f"entries, table has {self.n_rows} rows"
            )
        arr = arr.copy()
        arr.flags.writeable = False
        self._columns[name] = arr

    def column(self, name: str) -> np.ndarray:
        if name not in self._columns:
            raise KeyError(f"no column named {name!r}")
        return self._columns[name]

    def __contains__(self, name: str) -> bool:
        return name in self._columns


@contextmanager
def atomic_write(path, mode: str = "w"):
    """Write to a temp file in the target directory, then rename into place.

    A failed write never leaves a truncated file at ``path``.
    """
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp.", suffix="~")
    try:
        with os.fdopen(fd, mode, encoding=None if "b" in mode else "utf-8") as fh:
            yield fh
        os.replace(tmp, path)
    except BaseException:
        try:
            os.unlink(tmp)
        except OSError:
            pass
        raise


def _read_lines(path) -> list[str]:
    """Read one file as UTF-8 lines, reporting the line number on bad bytes."""
    with open(path, "rb") as fh:
        data = fh.read()
    raw = data.split(b"\n")
    if raw and raw[-1] == b"":
        raw.pop()  # trailing newline does not create an empty last line
    lines = []
    for i, chunk in enumerate(raw):
        try:
            lines.append(chunk.decode("utf-8"))
        except UnicodeDecodeError as exc:
            raise DecodeError(f"{path}: invalid UTF-8 on line {i}: {exc}") from exc
    return lines


def load_parallel(src_path, tgt_path, src_lang: str, tgt_lang: str) -> PairCorpus:
    """Load two aligned one-sentence-per-line files into a :class:`PairCorpus`.

    Texts are stored verbatim; empty lines become empty-string sentences.
    Raises :class:`AlignmentError` when the files have different line counts.
    """
    src_lines = _read_lines(src_path)
    tgt_lines = _read_lines(tgt_path)
    if len(src_lines) != len(tgt_lines):
        raise AlignmentError(
            f"line count mismatch: {src_path} has {len(src_lines)} lines, "
            f"{tgt_path} has {len(tgt_lines)}"
        )
    pairs = tuple(
        SentencePair(i, s, t) for i, (s, t) in enumerate(zip(src_lines, tgt_lines))
    )
    return PairCorpus(pairs=pairs, src_lang=src_lang, tgt_lang=tgt_lang)


def format_score(value: float) -> str:
    """Shortest round-trip decimal; the -1 sentinel is written without decimals."""
    if value == ScoreTable.SENTINEL:
        return "-1"
    return repr(float(value))


def write_scores(table: ScoreTable, column: str, path) -> None:
    """Write one column as a score file, one float per line in row order.

    NaN entries are rejected: a NaN score is always an upstream bug.
    """
    values = table.column(column)
    if np.isnan(values).any():
        row = int(np.flatnonzero(np.isnan(values))[0])
        raise DataError(f"column {column!r} contains NaN at row {row}")
    with atomic_write(path) as fh:
        for v in values:
            fh.write(format_score(v))
            fh.write("\n")


def read_score_file(path) -> np.ndarray:
    """Read a score file back into a float64 array."""
    lines = _read_lines(path)
    out = np.empty(len(lines), dtype=np.float64)
    for i, line in enumerate(lines):
        try:
            out[i] = float(line)
        except ValueError as exc:
            raise ParseError(f"{path}: bad float on line {i}: {line!r}") from exc
    return out


def read_feature_table(path) -> ScoreTable:
    """Read a TSV feature table (header row + float rows) into a ScoreTable."""
    lines = _read_lines(path)
    if not lines:
        raise ParseError(f"{path}: empty feature table (missing header)")
    names = lines[0].split("\t")
    if any(not n for n in names):
        raise ParseError(f"{path}: empty column name in header")
    if len(set(names)) != len(names):
        raise ParseError(f"{path}: duplicate column names in header")
    n_cols = len(names)
    rows = np.empty((len(lines) - 1, n_cols), dtype=np.float64)
    for r, line in enumerate(lines[1:]):
        cells = line.split("\t")
        if len(cells) != n_cols:
            raise ParseError(
                f"{path}: row {r} has {len(cells)} cells, header has {n_cols}"
            )
        for c, cell in enumerate(cells):
            try:
                rows[r, c] = float(cell)
            except ValueError as exc:
                raise ParseError(
                    f"{path}: non-numeric cell {cell!r} at row {r}, column {names[c]!r}"
                ) from exc
    table = ScoreTable(rows.shape[0])
    for c, name in enumerate(names):
        table.add_column(name, rows[:, c])
    return table


def write_feature_table(table: ScoreTable, path) -> None:
    """Write a ScoreTable as a TSV feature table with a header row."""
    names = table.column_names
    if not names:
        raise DataError("feature table has no columns")
    columns = [table.column(n) for n in names]
    with atomic_write(path) as fh:
        fh.write("\t".join(names))
        fh.write("\n")
        for r in range(table.n_rows):
            fh.write("\t".join(format_score(col[r]) for col in columns))
            fh.write("\n")
