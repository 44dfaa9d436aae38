"""Blocked sparse similarity-matrix construction with per-row top-k pruning.

The product of two sparse factors is materialized a block of rows at a
time (the full result would be dense for most datasets), transformed in
place, and pruned to the ``topk`` largest positive entries per row.  Ties
at the k-th value keep the lower column index.
"""

from __future__ import annotations

import numpy as np
import scipy.sparse as sps

__all__ = ["topk_row_indices", "blocked_topk_product"]

DEFAULT_BLOCK_ROWS = 1024


def topk_row_indices(values: np.ndarray, k: int) -> np.ndarray:
    """Column indices (ascending) of the k largest positive entries of a row.

    Ties at the k-th largest value are broken by ascending column index.
    """
    positive = np.flatnonzero(values > 0)
    if positive.size <= k:
        return positive
    vals = values[positive]
    part = np.argpartition(-vals, k - 1)[:k]
    threshold = vals[part].min()
    above = positive[vals > threshold]
    tied = positive[vals == threshold]
    selected = np.concatenate([above, tied[:k - above.size]])
    selected.sort()
    return selected


def blocked_topk_product(left: sps.spmatrix, right: sps.spmatrix, topk: int, *,
                         row_transform=None, zero_diagonal: bool = False,
                         block_rows: int = DEFAULT_BLOCK_ROWS) -> sps.csr_matrix:
    """Return ``topk``-pruned ``left @ right`` as CSR.

    ``row_transform(block, row_start)`` may rescale the dense block in place
    before pruning (e.g. cosine normalization or popularity damping).
    """
    left = left.tocsr()
    right = right.tocsr()
    n_rows, n_cols = left.shape[0], right.shape[1]
    if topk < 1:
        raise ValueError("topk must be >= 1")

    indptr = np.zeros(n_rows + 1, dtype=np.int64)
    index_chunks = []
    data_chunks = []
    for start in range(0, n_rows, block_rows):
        stop = min(start + block_rows, n_rows)
        block = np.asarray((left[start:stop] @ right).todense(), dtype=np.float64)
        if row_transform is not None:
            row_transform(block, start)
        if zero_diagonal:
            local = np.arange(start, min(stop, n_cols))
            block[local - start, local] = 0.0
        for r in range(stop - start):
            cols = topk_row_indices(block[r], topk)
            indptr[start + r + 1] = cols.size
            if cols.size:
                index_chunks.append(cols)
                data_chunks.append(block[r, cols])
    np.cumsum(indptr, out=indptr)
    indices = (np.concatenate(index_chunks) if index_chunks
               else np.empty(0, dtype=np.int64))
    data = (np.concatenate(data_chunks) if data_chunks
            else np.empty(0, dtype=np.float64))
    return sps.csr_matrix((data, indices, indptr), shape=(n_rows, n_cols))
