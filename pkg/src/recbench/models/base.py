"""Uniform fit/score/recommend surface shared by all baseline recommenders."""

from __future__ import annotations

import abc
from dataclasses import dataclass

import numpy as np

from ..matrix import InteractionMatrix

__all__ = ["ScoreVector", "FittedModel", "rank_top_k"]

NEG_INF = float("-inf")


@dataclass(frozen=True)
class ScoreVector:
    """Scores over the full item catalog for one user."""

    user_index: int
    scores: np.ndarray


def rank_top_k(scores: np.ndarray, k: int) -> np.ndarray:
    """Top-k item indices by descending score; ties keep the lower index.

    Masked items score ``-inf`` and are never returned, so the result has
    length ``min(k, #finite scores)``.
    """
    if k < 1:
        raise ValueError("cutoff k must be >= 1")
    n = scores.size
    n_finite = int(np.count_nonzero(scores > NEG_INF))
    k_eff = min(k, n_finite)
    if k_eff == 0:
        return np.empty(0, dtype=np.int64)
    if k_eff * 4 < n:
        # partial selection, widened to include all ties at the k-th value
        part = np.argpartition(-scores, k_eff - 1)[:k_eff]
        threshold = scores[part].min()
        candidates = np.flatnonzero(scores >= threshold)
    else:
        candidates = np.flatnonzero(scores > NEG_INF)
    order = np.argsort(-scores[candidates], kind="stable")
    return candidates[order[:k_eff]].astype(np.int64)


class FittedModel(abc.ABC):
    """A trained recommender that scores every item for a given user.

    Instances are immutable after ``fit`` and safe for concurrent scoring.
    The training matrix is retained for seen-item masking (and, for the
    neighborhood models, score aggregation).
    """

    kind: str = "?"

    def __init__(self, train: InteractionMatrix, params: dict):
        self.train = train
        self.params = dict(params)

    @abc.abstractmethod
    def _raw_scores(self, users: np.ndarray) -> np.ndarray:
        """Dense (len(users), n_items) float64 score block, unmasked."""

    def score_block(self, users, mask_seen: bool = True) -> np.ndarray:
        users = np.asarray(users, dtype=np.int64)
        if users.size and (users.min() < 0 or users.max() >= self.train.n_users):
            raise IndexError("user index out of range")
        block = self._raw_scores(users)
        if mask_seen:
            for row, user in enumerate(users.tolist()):
                block[row, self.train.row_items(user)] = NEG_INF
        return block

    def score_user(self, user_index: int, mask_seen: bool = True) -> ScoreVector:
        block = self.score_block(np.asarray([user_index]), mask_seen=mask_seen)
        return ScoreVector(user_index, block[0])

    def recommend(self, user_index: int, k: int, mask_seen: bool = True) -> np.ndarray:
        return rank_top_k(self.score_user(user_index, mask_seen).scores, k)
