# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled top-k selection over a block of cosine scores.

Single pass per query row.  A small sorted list of the current best k
entries is maintained; at most one entry per text group is kept at any time,
so text-level deduplication falls out of the scan.  Entries are ordered by
(cosine descending, candidate index ascending); within a text group the kept
occurrence is the one with the highest cosine, lowest index.
"""

from libc.stdint cimport int64_t
from libc.stdlib cimport free, malloc


def select_topk(const double[:, ::1] scores,
                const int64_t[::1] group_ids,
                const int64_t[::1] exclude_col,
                Py_ssize_t k,
                int64_t[:, ::1] out_idx,
                double[:, ::1] out_cos,
                int64_t[::1] out_len):
    """Fill out_idx/out_cos/out_len with the deduplicated top-k per row.

    scores:      rows x pool cosine block (C-contiguous float64)
    group_ids:   pool-length array mapping each column to its text group
    exclude_col: per-row column to skip entirely, -1 for none
    """
    cdef Py_ssize_t rows = scores.shape[0]
    cdef Py_ssize_t pool = scores.shape[1]
    cdef Py_ssize_t r, c, m, j, pos, found
    cdef int64_t g, excl
    cdef double s
    cdef double *best_cos
    cdef int64_t *best_idx
    cdef int64_t *best_grp

    if k < 1:
        raise ValueError("k must be >= 1")
    best_cos = <double *> malloc(k * sizeof(double))
    best_idx = <int64_t *> malloc(k * sizeof(int64_t))
    best_grp = <int64_t *> malloc(k * sizeof(int64_t))
    if best_cos == NULL or best_idx == NULL or best_grp == NULL:
        free(best_cos); free(best_idx); free(best_grp)
        raise MemoryError()

    try:
        with nogil:
            for r in range(rows):
                m = 0
                excl = exclude_col[r]
                for c in range(pool):
                    if c == excl:
                        continue
                    s = scores[r, c]
                    # columns are scanned ascending, so every stored index is
                    # smaller than c: a tie with the current worst always loses
                    if m == k and s <= best_cos[m - 1]:
                        continue
                    g = group_ids[c]
                    found = -1
                    for j in range(m):
                        if best_grp[j] == g:
                            found = j
                            break
                    if found >= 0:
                        if s <= best_cos[found]:
                            continue
                        # better occurrence of a kept text: drop the old entry
                        for j in range(found, m - 1):
                            best_cos[j] = best_cos[j + 1]
                            best_idx[j] = best_idx[j + 1]
                            best_grp[j] = best_grp[j + 1]
                        m -= 1
                    elif m == k:
                        m -= 1  # evict the current worst
                    pos = m
                    while pos > 0 and best_cos[pos - 1] < s:
                        best_cos[pos] = best_cos[pos - 1]
                        best_idx[pos] = best_idx[pos - 1]
                        best_grp[pos] = best_grp[pos - 1]
                        pos -= 1
                    best_cos[pos] = s
                    best_idx[pos] = c
                    best_grp[pos] = g
                    m += 1
                out_len[r] = m
                for j in range(m):
                    out_idx[r, j] = best_idx[j]
                    out_cos[r, j] = best_cos[j]
                for j in range(m, k):
                    out_idx[r, j] = -1
                    out_cos[r, j] = 0.0
    finally:
        free(best_cos)
        free(best_idx)
        free(best_grp)
