"""Item- and user-based nearest-neighbor collaborative filtering.

Similarity is shrunk cosine over the (optionally re-weighted) interaction
matrix:

    sim(a, b) = (x_a . x_b) / (|x_a| |x_b| + shrink)

Self-similarity is excluded: an object's neighborhood consists of the
``topk`` most similar *other* objects.  Re-weighting (tf-idf or BM25, with
k1=1.2, b=0.75) treats users as documents and items as terms and affects
the similarity estimate only; scoring always aggregates the raw training
rows.
"""

from __future__ import annotations

import numpy as np
import scipy.sparse as sps

from ..matrix import InteractionMatrix
from .base import FittedModel
from .similarity import blocked_topk_product

__all__ = ["ItemKNN", "UserKNN", "apply_weighting", "WEIGHTINGS"]

WEIGHTINGS = ("none", "tf-idf", "bm25")

BM25_K1 = 1.2
BM25_B = 0.75


def apply_weighting(x: sps.csr_matrix, scheme: str) -> sps.csr_matrix:
    """Re-weight a user x item matrix; rows are documents, columns terms."""
    if scheme == "none":
        return x
    x = x.tocsr().astype(np.float64, copy=True)
    n_users = x.shape[0]
    item_df = np.bincount(x.indices, minlength=x.shape[1])
    idf = np.log(n_users / (1.0 + item_df))
    if scheme == "tf-idf":
        x.data *= idf[x.indices]
    elif scheme == "bm25":
        row_sums = np.ravel(x.sum(axis=1))
        length_norm = (1.0 - BM25_B) + BM25_B * row_sums / row_sums.mean()
        rows = np.repeat(np.arange(n_users), np.diff(x.indptr))
        x.data = (x.data * (BM25_K1 + 1.0)
                  / (BM25_K1 * length_norm[rows] + x.data) * idf[x.indices])
    else:
        raise ValueError(f"unknown weighting {scheme!r}; expected one of {WEIGHTINGS}")
    return x


def _cosine_topk(objects: sps.csr_matrix, topk: int, shrink: float) -> sps.csr_matrix:
    """Shrunk-cosine similarity between the rows of ``objects``, topk-pruned."""
    norms = np.sqrt(np.ravel(objects.multiply(objects).sum(axis=1)))

    def normalize(block: np.ndarray, row_start: int) -> None:
        denom = np.outer(norms[row_start:row_start + block.shape[0]], norms)
        denom += shrink
        np.divide(block, denom, out=block, where=denom > 0)
        block[:, norms == 0] = 0.0

    return blocked_topk_product(objects, objects.T.tocsr(), topk,
                                row_transform=normalize, zero_diagonal=True)


class ItemKNN(FittedModel):
    """Scores are the user's training row times the item-item similarity."""

    kind = "itemknn"

    def __init__(self, train: InteractionMatrix, params: dict):
        super().__init__(train, params)
        weighted = apply_weighting(train.tocsr(), params["weighting"])
        items = weighted.T.tocsr()
        self.similarity = _cosine_topk(items, params["topk"], params["shrink"])
        self._train_csr = train.tocsr()

    def _raw_scores(self, users: np.ndarray) -> np.ndarray:
        return np.asarray((self._train_csr[users] @ self.similarity).todense(),
                          dtype=np.float64)


class UserKNN(FittedModel):
    """Scores are the user's similarity row times the interaction matrix."""

    kind = "userknn"

    def __init__(self, train: InteractionMatrix, params: dict):
        super().__init__(train, params)
        weighted = apply_weighting(train.tocsr(), params["weighting"])
        self.similarity = _cosine_topk(weighted, params["topk"], params["shrink"])
        self._train_csr = train.tocsr()

    def _raw_scores(self, users: np.ndarray) -> np.ndarray:
        return np.asarray((self.similarity[users] @ self._train_csr).todense(),
                          dtype=np.float64)
