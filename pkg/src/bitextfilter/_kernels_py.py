"""Pure-numpy fallback for the compiled top-k selection kernel.

Same contract as ``bitextfilter._kernels.select_topk``.  Strategy: fetch the
m largest scores per row with a vectorized argpartition, walk them in exact
(cosine desc, index asc) order deduplicating by text group, and accept the
result only when the k-th kept entry strictly beats everything left behind
in the unfetched remainder; otherwise refetch with a larger m, degenerating
to a full sort in the worst case.
"""

from __future__ import annotations

import numpy as np


def _walk(order_cols, order_scores, group_ids, k, excl):
    kept_idx, kept_cos, seen = [], [], set()
    for c, s in zip(order_cols, order_scores):
        if c == excl:
            continue
        g = group_ids[c]
        if g in seen:
            continue
        seen.add(g)
        kept_idx.append(c)
        kept_cos.append(s)
        if len(kept_idx) == k:
            break
    return kept_idx, kept_cos


def _row_exact(row, group_ids, k, excl):
    order = np.lexsort((np.arange(row.shape[0]), -row))
    return _walk(order, row[order], group_ids, k, excl)


def select_topk(scores, group_ids, exclude_col, k, out_idx, out_cos, out_len):
    if k < 1:
        raise ValueError("k must be >= 1")
    rows, pool = scores.shape
    m = min(pool, max(4 * k, k + 16))
    if m < pool:
        fetched = np.argpartition(scores, pool - m, axis=1)[:, pool - m :]
    else:
        fetched = None

    for r in range(rows):
        excl = int(exclude_col[r])
        if fetched is None:
            kept_idx, kept_cos = _row_exact(scores[r], group_ids, k, excl)
        else:
            cols = fetched[r]
            vals = scores[r, cols]
            boundary = vals.min()  # unfetched scores are all <= this
            order = np.lexsort((cols, -vals))
            kept_idx, kept_cos = _walk(cols[order], vals[order], group_ids, k, excl)
            safe = len(kept_idx) == k and kept_cos[-1] > boundary
            if not safe:
                mr = m
                while True:
                    mr = min(pool, mr * 4)
                    if mr == pool:
                        kept_idx, kept_cos = _row_exact(scores[r], group_ids, k, excl)
                        break
                    cols = np.argpartition(scores[r], pool - mr)[pool - mr :]
                    vals = scores[r, cols]
                    boundary = vals.min()
                    order = np.lexsort((cols, -vals))
                    kept_idx, kept_cos = _walk(cols[order], vals[order], group_ids, k, excl)
                    if len(kept_idx) == k and kept_cos[-1] > boundary:
                        break
        n = len(kept_idx)
        out_len[r] = n
        out_idx[r, :n] = kept_idx
        out_cos[r, :n] = kept_cos
        out_idx[r, n:] = -1
        out_cos[r, n:] = 0.0
