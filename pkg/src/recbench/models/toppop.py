"""Non-personalized popularity baseline."""

from __future__ import annotations

import numpy as np

from ..matrix import InteractionMatrix
from .base import FittedModel

__all__ = ["TopPop"]


class TopPop(FittedModel):
    """Recommends the items with the most training interactions to everyone."""

    kind = "toppop"

    def __init__(self, train: InteractionMatrix, params: dict):
        super().__init__(train, params)
        self.popularity = train.item_popularity().astype(np.float64)
        self.popularity.flags.writeable = False

    def _raw_scores(self, users: np.ndarray) -> np.ndarray:
        return np.tile(self.popularity, (users.size, 1))
