# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled scoring kernel; see ``_kernels_py`` for the reference semantics."""
import numpy as np
cimport numpy as cnp

cnp.import_array()


def rank_targets(
    const cnp.int64_t[::1] indptr,
    const cnp.int64_t[::1] indices,
    const double[::1] data,
    Py_ssize_t n_cols,
    const cnp.int64_t[::1] hist_ptr,
    const cnp.int64_t[::1] hist_rows,
    const cnp.int64_t[::1] case_user,
    const cnp.int64_t[:, ::1] case_rows,
    double tie_eps=1e-12,
):
    """1-based rank of column 0 of each ``case_rows`` row under the item-item score.

    Rows of the CSR matrix are L2-normalised item profiles, ordered by item
    id. For case ``c`` with user ``u`` the score of item ``i`` is
    ``sum_j <x_i, x_j>`` over history rows ``j`` of ``u``. Scores within
    ``tie_eps * max(1, |target score|)`` are ties; ties rank the smaller row
    index first.
    """
    cdef Py_ssize_t n_cases = case_rows.shape[0]
    cdef Py_ssize_t width = case_rows.shape[1]
    cdef cnp.ndarray[cnp.int64_t, ndim=1] ranks_arr = np.empty(n_cases, dtype=np.int64)
    cdef cnp.int64_t[::1] ranks = ranks_arr
    cdef double[::1] acc = np.zeros(n_cols, dtype=np.float64)
    cdef double[::1] scores = np.empty(width, dtype=np.float64)
    cdef Py_ssize_t c, h, k, m
    cdef cnp.int64_t row, target_row, current = -1, u
    cdef double s, target_score, tol, d
    cdef cnp.int64_t rank

    with nogil:
        for c in range(n_cases):
            u = case_user[c]
            if u != current:
                if current >= 0:
                    for h in range(hist_ptr[current], hist_ptr[current + 1]):
                        row = hist_rows[h]
                        for k in range(indptr[row], indptr[row + 1]):
                            acc[indices[k]] = 0.0
                for h in range(hist_ptr[u], hist_ptr[u + 1]):
                    row = hist_rows[h]
                    for k in range(indptr[row], indptr[row + 1]):
                        acc[indices[k]] += data[k]
                current = u
            for m in range(width):
                row = case_rows[c, m]
                s = 0.0
                for k in range(indptr[row], indptr[row + 1]):
                    s += data[k] * acc[indices[k]]
                scores[m] = s
            target_row = case_rows[c, 0]
            target_score = scores[0]
            tol = tie_eps * (target_score if target_score > 1.0 else 1.0)
            rank = 1
            for m in range(1, width):
                d = scores[m] - target_score
                if d > tol or (d >= -tol and case_rows[c, m] < target_row):
                    rank += 1
            ranks[c] = rank
    return ranks_arr
