"""Exact brute-force k-nearest-neighbor search over embedding pools.

Cosine blocks are computed chunk-by-chunk with float64 BLAS matrix products
(float32 storage, 64-bit accumulation), then the deduplicated top-k per query
is selected by a kernel: the compiled Cython extension when it was built, or
the pure-numpy fallback otherwise.  Both kernels implement the identical
contract, so results never depend on which one is active.

Set ``BITEXTFILTER_PURE=1`` in the environment to force the fallback.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .embeddings import EmbeddingSet
from .errors import ConfigError, DataError

if os.environ.get("BITEXTFILTER_PURE") == "1":
    from . import _kernels_py as _impl

    _BACKEND = "python"
else:
    try:
        from . import _kernels as _impl  # type: ignore[no-redef]

        _BACKEND = "compiled"
    except ImportError:
        from . import _kernels_py as _impl  # type: ignore[no-redef]

        _BACKEND = "python"

# score-block chunking: bounded by memory (~256 MB of float64 per chunk)
_CHUNK_TARGET_ELEMENTS = 1 << 25
GLOBAL = "global"
LOCAL = "local"


def active_backend() -> str:
    """Name of the selection kernel in use: 'compiled' or 'python'."""
    return _BACKEND


@dataclass(frozen=True)
class NeighborhoodSpec:
    """Neighbor pool mode (global = noisy plus clean, local = own origin) and k."""

    mode: str = LOCAL
    k: int = 4

    def __post_init__(self):
        if self.mode not in (GLOBAL, LOCAL):
            raise ConfigError(f"mode must be 'global' or 'local', got {self.mode!r}")
        if self.k < 1:
            raise ConfigError("k must be >= 1")


@dataclass(frozen=True)
class NeighborList:
    """Top neighbors of one query: (candidate index, cosine), best first."""

    query_index: int
    entries: tuple[tuple[int, float], ...] = field(default_factory=tuple)


def _chunk_size(pool_n: int) -> int:
    return max(16, min(4096, _CHUNK_TARGET_ELEMENTS // max(1, pool_n)))


def _group_ids(texts: list[str]) -> np.ndarray:
    ids = np.empty(len(texts), dtype=np.int64)
    first_seen: dict[str, int] = {}
    for i, t in enumerate(texts):
        ids[i] = first_seen.setdefault(t, len(first_seen))
    return ids


def _effective_pools(queries, pools, pool_texts, spec):
    if len(pools) != len(pool_texts):
        raise ConfigError("pools and pool_texts must be parallel sequences")
    for emb, texts in zip(pools, pool_texts):
        if len(texts) != emb.n:
            raise DataError(
                f"pool texts length {len(texts)} != pool size {emb.n}"
            )
        if emb.dim != queries.dim:
            raise DataError(f"pool dim {emb.dim} != query dim {queries.dim}")
    if spec.mode == LOCAL:
        keep = [
            (emb, texts)
            for emb, texts in zip(pools, pool_texts)
            if emb.origin == queries.origin
        ]
    else:
        keep = list(zip(pools, pool_texts))
    if not keep or sum(emb.n for emb, _ in keep) == 0:
        raise DataError("neighbor pool is empty")
    return keep


def _exclusion_columns(queries, effective, exclude_self: bool) -> np.ndarray:
    excl = np.full(queries.n, -1, dtype=np.int64)
    if not exclude_self:
        return excl
    matches = []
    offset = 0
    for emb, _ in effective:
        if emb.origin == queries.origin and emb.side == queries.side:
            matches.append((offset, emb.n))
        offset += emb.n
    if len(matches) > 1:
        raise ConfigError(
            "exclude_self needs unique (origin, side) identities in the pool"
        )
    if matches:
        offset, n = matches[0]
        limit = min(queries.n, n)
        excl[:limit] = offset + np.arange(limit, dtype=np.int64)
    return excl


def knn_arrays(
    queries: EmbeddingSet,
    pools,
    pool_texts,
    spec: NeighborhoodSpec,
    exclude_self: bool = False,
    threads: int = 1,
):
    """Array-level search: returns (indices, cosines, lengths) for all queries.

    ``indices`` and ``cosines`` are n x k arrays padded with -1 / 0.0 past each
    row's ``lengths`` entry.  Candidate indices are positions in the effective
    pool, i.e. in the concatenation of the kept pool sets in argument order.
    """
    effective = _effective_pools(queries, pools, pool_texts, spec)
    pool_mat = np.concatenate([emb.vectors for emb, _ in effective], axis=0)
    texts: list[str] = []
    for _, t in effective:
        texts.extend(t)
    group_ids = _group_ids(texts)
    exclude_col = _exclusion_columns(queries, effective, exclude_self)

    k = spec.k
    n_q = queries.n
    pool64_t = pool_mat.astype(np.float64).T.copy()
    q64 = queries.vectors.astype(np.float64)
    out_idx = np.empty((n_q, k), dtype=np.int64)
    out_cos = np.empty((n_q, k), dtype=np.float64)
    out_len = np.empty(n_q, dtype=np.int64)

    chunk = _chunk_size(pool_mat.shape[0])
    starts = range(0, n_q, chunk)

    def work(c0: int) -> None:
        c1 = min(n_q, c0 + chunk)
        block = q64[c0:c1] @ pool64_t
        np.clip(block, -1.0, 1.0, out=block)
        _impl.select_topk(
            block,
            group_ids,
            exclude_col[c0:c1],
            k,
            out_idx[c0:c1],
            out_cos[c0:c1],
            out_len[c0:c1],
        )

    if threads > 1 and n_q > chunk:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            list(pool.map(work, starts))
    else:
        for c0 in starts:
            work(c0)
    return out_idx, out_cos, out_len


def knn(
    queries: EmbeddingSet,
    pools,
    pool_texts,
    spec: NeighborhoodSpec,
    exclude_self: bool = False,
    threads: int = 1,
) -> list[NeighborList]:
    """Exact deduplicated top-k neighbor lists for every query.

    ``pools`` is one or more EmbeddingSet and ``pool_texts`` the parallel
    candidate sentence texts; candidates sharing the same text keep only their
    highest-cosine occurrence.  Lists come back shorter than k when the
    deduplicated pool is smaller.
    """
    idx, cos, lengths = knn_arrays(
        queries, pools, pool_texts, spec, exclude_self=exclude_self, threads=threads
    )
    return [
        NeighborList(
            query_index=q,
            entries=tuple(
                (int(idx[q, j]), float(cos[q, j])) for j in range(int(lengths[q]))
            ),
        )
        for q in range(queries.n)
    ]
