"""Pure-Python implementation of the scoring kernel (numpy/scipy, no compiled code of ours)."""
from __future__ import annotations

import numpy as np
import scipy.sparse as sp


def rank_targets(indptr, indices, data, n_cols, hist_ptr, hist_rows, case_user, case_rows, tie_eps=1e-12):
    """1-based rank of column 0 of each ``case_rows`` row under the item-item score.

    Same contract as the compiled ``minrev._kernels.rank_targets``.
    """
    n_rows = len(indptr) - 1
    matrix = sp.csr_matrix((data, indices, indptr), shape=(n_rows, n_cols))
    case_rows = np.asarray(case_rows, dtype=np.int64)
    ranks = np.empty(len(case_rows), dtype=np.int64)
    user_vec = np.zeros(n_cols)
    current = -1
    for c in range(len(case_rows)):
        u = case_user[c]
        if u != current:
            user_vec[:] = 0.0
            for row in hist_rows[hist_ptr[u]:hist_ptr[u + 1]]:
                lo, hi = indptr[row], indptr[row + 1]
                np.add.at(user_vec, indices[lo:hi], data[lo:hi])
            current = u
        rows = case_rows[c]
        scores = matrix[rows] @ user_vec
        tol = tie_eps * max(1.0, scores[0])
        diff = scores[1:] - scores[0]
        ahead = (diff > tol) | ((diff >= -tol) & (rows[1:] < rows[0]))
        ranks[c] = 1 + int(np.count_nonzero(ahead))
    return ranks
