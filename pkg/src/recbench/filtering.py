"""Iterative k-core filtering of interaction matrices."""

from __future__ import annotations

import numpy as np

from .errors import EmptyAfterFilterError
from .matrix import InteractionMatrix

__all__ = ["kcore_filter"]


def kcore_filter(matrix: InteractionMatrix, min_user: int, min_item: int,
                 ) -> tuple[InteractionMatrix, np.ndarray, np.ndarray]:
    """Remove users with < ``min_user`` and items with < ``min_item`` interactions.

    Removal is iterated until a fixed point (deleting an item can push a user
    below threshold and vice versa).  Returns the densely re-indexed matrix
    together with two arrays mapping new indices back to the old ones.
    """
    if min_user < 0 or min_item < 0:
        raise ValueError("thresholds must be non-negative")

    users, items = matrix.pairs()
    user_alive = np.ones(matrix.n_users, dtype=bool)
    item_alive = np.ones(matrix.n_items, dtype=bool)
    keep = np.ones(users.size, dtype=bool)

    while True:
        u_deg = np.bincount(users[keep], minlength=matrix.n_users)
        i_deg = np.bincount(items[keep], minlength=matrix.n_items)
        bad_users = user_alive & (u_deg < min_user)
        bad_items = item_alive & (i_deg < min_item)
        if not bad_users.any() and not bad_items.any():
            break
        user_alive &= ~bad_users
        item_alive &= ~bad_items
        keep &= user_alive[users] & item_alive[items]

    new_to_old_users = np.flatnonzero(user_alive)
    new_to_old_items = np.flatnonzero(item_alive)
    if new_to_old_users.size == 0 or new_to_old_items.size == 0 or not keep.any():
        raise EmptyAfterFilterError(
            f"k-core filter (min_user={min_user}, min_item={min_item}) "
            f"removed all interactions")

    old_to_new_users = np.full(matrix.n_users, -1, dtype=np.int64)
    old_to_new_users[new_to_old_users] = np.arange(new_to_old_users.size)
    old_to_new_items = np.full(matrix.n_items, -1, dtype=np.int64)
    old_to_new_items[new_to_old_items] = np.arange(new_to_old_items.size)

    filtered = InteractionMatrix.from_pairs(
        old_to_new_users[users[keep]], old_to_new_items[items[keep]],
        new_to_old_users.size, new_to_old_items.size,
        weights=matrix.data[keep])
    return filtered, new_to_old_users, new_to_old_items
