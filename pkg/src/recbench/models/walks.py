"""Bipartite random-walk recommenders.

The user->item and item->user transition matrices are the L1
row-normalizations of the binarized interaction matrix and its transpose.
The alpha exponent is applied elementwise to the *transition
probabilities* (not to the final similarities).  The stored item-item
similarity ``W`` is (Piu^alpha) @ (Pui^alpha), pruned to ``topk`` entries
per row, and a user's scores are their raw training row times ``W`` --
proportional, per user, to the 3-step walk distribution
user -> item -> user -> item.

The popularity-damped variant additionally divides every similarity
column j by pop(j)^beta before pruning; beta = 0 recovers the plain walk
exactly.
"""

from __future__ import annotations

import numpy as np
import scipy.sparse as sps

from ..matrix import InteractionMatrix
from .base import FittedModel
from .similarity import blocked_topk_product

__all__ = ["P3Alpha", "RP3Beta"]


def _l1_normalize_rows(x: sps.csr_matrix) -> sps.csr_matrix:
    x = x.tocsr().astype(np.float64, copy=True)
    row_sums = np.ravel(x.sum(axis=1))
    scale = np.divide(1.0, row_sums, out=np.zeros_like(row_sums),
                      where=row_sums > 0)
    rows = np.repeat(np.arange(x.shape[0]), np.diff(x.indptr))
    x.data *= scale[rows]
    return x


def _walk_factors(train: InteractionMatrix, alpha: float):
    binary = train.binarized().tocsr()
    p_ui = _l1_normalize_rows(binary)
    p_iu = _l1_normalize_rows(binary.T.tocsr())
    if alpha != 1.0:
        p_ui.data = np.power(p_ui.data, alpha)
        p_iu.data = np.power(p_iu.data, alpha)
    return p_iu, p_ui


class P3Alpha(FittedModel):
    """Three-step bipartite walk scores with exponent-scaled transitions."""

    kind = "p3alpha"

    def __init__(self, train: InteractionMatrix, params: dict):
        super().__init__(train, params)
        p_iu, p_ui = _walk_factors(train, params["alpha"])
        self.similarity = blocked_topk_product(p_iu, p_ui, params["topk"])
        self._train_csr = train.tocsr()

    def _raw_scores(self, users: np.ndarray) -> np.ndarray:
        return np.asarray((self._train_csr[users] @ self.similarity).todense(),
                          dtype=np.float64)


class RP3Beta(FittedModel):
    """Walk scores divided by item popularity to the beta power."""

    kind = "rp3beta"

    def __init__(self, train: InteractionMatrix, params: dict):
        super().__init__(train, params)
        p_iu, p_ui = _walk_factors(train, params["alpha"])
        beta = params["beta"]
        popularity = train.item_popularity().astype(np.float64)
        damping = np.divide(1.0, np.power(popularity, beta),
                            out=np.zeros_like(popularity),
                            where=popularity > 0)

        def damp(block: np.ndarray, row_start: int) -> None:
            block *= damping

        self.similarity = blocked_topk_product(p_iu, p_ui, params["topk"],
                                               row_transform=damp)
        self._train_csr = train.tocsr()

    def _raw_scores(self, users: np.ndarray) -> np.ndarray:
        return np.asarray((self._train_csr[users] @ self.similarity).todense(),
                          dtype=np.float64)
