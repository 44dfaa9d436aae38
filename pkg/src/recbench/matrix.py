"""Immutable sparse user-item interaction matrix and external-id mappings.

The matrix is stored in CSR layout (``indptr``/``indices``/``data``) with
rows sorted strictly ascending by item index, no duplicate (user, item)
pairs, and strictly positive weights.  Instances are safe to share
read-only across threads.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sps

from .errors import DimensionMismatchError

__all__ = ["InteractionMatrix", "IdMaps"]


def _frozen(arr: np.ndarray, dtype) -> np.ndarray:
    out = np.ascontiguousarray(arr, dtype=dtype)
    if out is arr:
        out = arr.copy()
    out.flags.writeable = False
    return out


@dataclass(frozen=True)
class InteractionMatrix:
    """Sparse user x item implicit-feedback matrix in CSR layout."""

    n_users: int
    n_items: int
    indptr: np.ndarray
    indices: np.ndarray
    data: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "indptr", _frozen(self.indptr, np.int64))
        object.__setattr__(self, "indices", _frozen(self.indices, np.int64))
        object.__setattr__(self, "data", _frozen(self.data, np.float64))
        self._validate()

    def _validate(self):
        if self.n_users < 0 or self.n_items < 0:
            raise ValueError("matrix dimensions must be non-negative")
        if self.indptr.shape != (self.n_users + 1,):
            raise ValueError("indptr length must be n_users + 1")
        if self.indptr[0] != 0 or self.indptr[-1] != self.indices.size:
            raise ValueError("indptr does not span the index array")
        if np.any(np.diff(self.indptr) < 0):
            raise ValueError("indptr must be non-decreasing")
        if self.indices.shape != self.data.shape:
            raise ValueError("indices and data must have equal length")
        if self.indices.size:
            if self.indices.min() < 0 or self.indices.max() >= self.n_items:
                raise ValueError("item index out of range")
            if np.any(self.data <= 0):
                raise ValueError("weights must be strictly positive")
            # strictly ascending within each row <=> no duplicates
            inside = np.ones(self.indices.size, dtype=bool)
            inside[self.indptr[1:-1]] = False  # row boundaries
            if np.any((np.diff(self.indices) <= 0)[inside[1:]]):
                raise ValueError("row item indices must be strictly ascending")

    # -- constructors ---------------------------------------------------

    @staticmethod
    def from_pairs(users, items, n_users: int, n_items: int,
                   weights=None) -> "InteractionMatrix":
        """Build from parallel index arrays; pairs must be unique."""
        users = np.asarray(users, dtype=np.int64)
        items = np.asarray(items, dtype=np.int64)
        if users.shape != items.shape:
            raise ValueError("users and items must have equal length")
        if weights is None:
            weights = np.ones(users.size, dtype=np.float64)
        else:
            weights = np.asarray(weights, dtype=np.float64)
        order = np.lexsort((items, users))
        users, items, weights = users[order], items[order], weights[order]
        if users.size and (users.min() < 0 or users.max() >= n_users):
            raise ValueError("user index out of range")
        indptr = np.zeros(n_users + 1, dtype=np.int64)
        np.add.at(indptr, users + 1, 1)
        np.cumsum(indptr, out=indptr)
        return InteractionMatrix(n_users, n_items, indptr, items, weights)

    @staticmethod
    def from_scipy(m) -> "InteractionMatrix":
        csr = sps.csr_matrix(m, copy=True)
        csr.sum_duplicates()
        csr.sort_indices()
        csr.eliminate_zeros()
        return InteractionMatrix(csr.shape[0], csr.shape[1],
                                 csr.indptr, csr.indices, csr.data)

    # -- accessors ------------------------------------------------------

    @property
    def nnz(self) -> int:
        return int(self.indices.size)

    @property
    def shape(self) -> tuple[int, int]:
        return (self.n_users, self.n_items)

    def row_items(self, user: int) -> np.ndarray:
        """Item indices of one user's row (sorted ascending, read-only view)."""
        return self.indices[self.indptr[user]:self.indptr[user + 1]]

    def row_weights(self, user: int) -> np.ndarray:
        return self.data[self.indptr[user]:self.indptr[user + 1]]

    def user_degrees(self) -> np.ndarray:
        return np.diff(self.indptr)

    def item_popularity(self) -> np.ndarray:
        """Number of interactions per item (column counts)."""
        return np.bincount(self.indices, minlength=self.n_items).astype(np.int64)

    def tocsr(self) -> sps.csr_matrix:
        """View as a scipy CSR matrix sharing the underlying buffers."""
        return sps.csr_matrix((self.data, self.indices, self.indptr),
                              shape=self.shape, copy=False)

    def pairs(self) -> tuple[np.ndarray, np.ndarray]:
        """(user_index, item_index) arrays in canonical row-major order."""
        users = np.repeat(np.arange(self.n_users, dtype=np.int64),
                          self.user_degrees())
        return users, self.indices.copy()

    def binarized(self) -> "InteractionMatrix":
        if self.nnz and np.all(self.data == 1.0):
            return self
        return InteractionMatrix(self.n_users, self.n_items, self.indptr,
                                 self.indices, np.ones(self.nnz))

    def same_shape(self, other: "InteractionMatrix") -> None:
        if self.shape != other.shape:
            raise DimensionMismatchError(
                f"shape mismatch: {self.shape} vs {other.shape}")

    def __eq__(self, other) -> bool:
        if not isinstance(other, InteractionMatrix):
            return NotImplemented
        return (self.shape == other.shape
                and np.array_equal(self.indptr, other.indptr)
                and np.array_equal(self.indices, other.indices)
                and np.array_equal(self.data, other.data))

    def __hash__(self):
        return hash((self.n_users, self.n_items, self.nnz))

    def __repr__(self):
        return (f"InteractionMatrix(n_users={self.n_users}, "
                f"n_items={self.n_items}, nnz={self.nnz})")


@dataclass(frozen=True)
class IdMaps:
    """Bijections between external ids and dense indices."""

    user_ids: tuple
    item_ids: tuple
    user_index: dict = field(repr=False, default=None)
    item_index: dict = field(repr=False, default=None)

    def __post_init__(self):
        if self.user_index is None:
            object.__setattr__(self, "user_index",
                               {u: i for i, u in enumerate(self.user_ids)})
        if self.item_index is None:
            object.__setattr__(self, "item_index",
                               {it: i for i, it in enumerate(self.item_ids)})
        if len(self.user_index) != len(self.user_ids):
            raise ValueError("duplicate external user ids")
        if len(self.item_index) != len(self.item_ids):
            raise ValueError("duplicate external item ids")

    @staticmethod
    def identity(n_users: int, n_items: int) -> "IdMaps":
        return IdMaps(tuple(str(i) for i in range(n_users)),
                      tuple(str(i) for i in range(n_items)))

    @property
    def n_users(self) -> int:
        return len(self.user_ids)

    @property
    def n_items(self) -> int:
        return len(self.item_ids)

    def subset(self, keep_users: np.ndarray, keep_items: np.ndarray) -> "IdMaps":
        """Re-map after filtering; ``keep_*`` list old indices in new order."""
        return IdMaps(tuple(self.user_ids[i] for i in keep_users),
                      tuple(self.item_ids[i] for i in keep_items))
