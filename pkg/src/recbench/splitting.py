"""Train/test/validation splitting and split hygiene auditing.

All splitting is a pure function of (input matrix, seed).  Randomness comes
from numpy's PCG64 generator (``numpy.random.default_rng``), processing users
in ascending index order, so splits are bit-reproducible for a fixed numpy
major version.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatchError
from .matrix import InteractionMatrix

__all__ = [
    "SplitPair",
    "LeakageReport",
    "split_user_holdout",
    "split_leave_one_out",
    "audit_matrices",
    "audit_leakage",
    "resplit_union",
    "union_matrix",
]

PROTOCOL_HOLDOUT = "user-holdout"
PROTOCOL_LOO = "leave-one-out"


@dataclass(frozen=True)
class SplitPair:
    """A train/test split (optionally with validation) over shared dimensions."""

    train: InteractionMatrix
    test: InteractionMatrix
    validation: InteractionMatrix | None
    seed: int
    protocol: str

    def __post_init__(self):
        self.train.same_shape(self.test)
        if self.validation is not None:
            self.train.same_shape(self.validation)


@dataclass(frozen=True)
class LeakageReport:
    """Per-user train/test overlap counts; only overlapping users are listed."""

    leaked_users: int
    total_users: int
    leaked_pairs: int
    per_user_overlap: tuple  # (user_index, overlap_count) pairs, count > 0

    @property
    def clean(self) -> bool:
        return self.leaked_users == 0

    def summary(self) -> str:
        return f"{self.leaked_users}/{self.total_users} {self.leaked_pairs}"

    def to_csv(self) -> str:
        lines = ["user,overlap"]
        lines += [f"{u},{c}" for u, c in self.per_user_overlap]
        return "\n".join(lines) + "\n"


def _mask_split(matrix: InteractionMatrix, keep_mask: np.ndarray,
                ) -> tuple[InteractionMatrix, InteractionMatrix]:
    users, items = matrix.pairs()
    first = InteractionMatrix.from_pairs(users[keep_mask], items[keep_mask],
                                         matrix.n_users, matrix.n_items,
                                         weights=matrix.data[keep_mask])
    second = InteractionMatrix.from_pairs(users[~keep_mask], items[~keep_mask],
                                          matrix.n_users, matrix.n_items,
                                          weights=matrix.data[~keep_mask])
    return first, second


def split_user_holdout(matrix: InteractionMatrix, train_ratio: float,
                       seed: int) -> SplitPair:
    """Per-user random holdout split.

    For each user, round(train_ratio * n) interactions go to train, clamped
    to [1, n] so no user ends up train-empty; the rest go to test.  Users
    with a single interaction stay entirely in train.  Rounding is
    ties-to-even (numpy convention).
    """
    if not 0.0 < train_ratio < 1.0:
        raise ValueError("train_ratio must lie strictly between 0 and 1")
    rng = np.random.default_rng(seed)
    keep = np.ones(matrix.nnz, dtype=bool)
    indptr = matrix.indptr
    for user in range(matrix.n_users):
        lo, hi = indptr[user], indptr[user + 1]
        n = int(hi - lo)
        if n <= 1:
            continue
        n_train = int(np.clip(np.rint(train_ratio * n), 1, n))
        if n_train == n:
            continue
        test_local = rng.permutation(n)[n_train:]
        keep[lo + test_local] = False
    train, test = _mask_split(matrix, keep)
    return SplitPair(train, test, None, seed, PROTOCOL_HOLDOUT)


def split_leave_one_out(matrix: InteractionMatrix, seed: int) -> SplitPair:
    """Move exactly one random interaction per user (with >= 2) to the held-out set."""
    rng = np.random.default_rng(seed)
    keep = np.ones(matrix.nnz, dtype=bool)
    indptr = matrix.indptr
    for user in range(matrix.n_users):
        lo, hi = indptr[user], indptr[user + 1]
        n = int(hi - lo)
        if n < 2:
            continue
        keep[lo + rng.integers(n)] = False
    train, heldout = _mask_split(matrix, keep)
    return SplitPair(train, heldout, None, seed, PROTOCOL_LOO)


def audit_matrices(train: InteractionMatrix, test: InteractionMatrix) -> LeakageReport:
    """Exact per-user intersection counts between two matrices' rows."""
    if train.shape != test.shape:
        raise DimensionMismatchError(
            f"train shape {train.shape} != test shape {test.shape}")
    overlaps = []
    leaked_pairs = 0
    for user in range(train.n_users):
        a = train.row_items(user)
        b = test.row_items(user)
        if a.size == 0 or b.size == 0:
            continue
        count = np.intersect1d(a, b, assume_unique=True).size
        if count:
            overlaps.append((user, int(count)))
            leaked_pairs += int(count)
    return LeakageReport(leaked_users=len(overlaps),
                         total_users=train.n_users,
                         leaked_pairs=leaked_pairs,
                         per_user_overlap=tuple(overlaps))


def audit_leakage(split: SplitPair) -> LeakageReport:
    """Audit a split pair's train/test disjointness."""
    return audit_matrices(split.train, split.test)


def union_matrix(a: InteractionMatrix, b: InteractionMatrix) -> InteractionMatrix:
    """Set union of two matrices' (user, item) pairs, binarized."""
    a.same_shape(b)
    au, ai = a.pairs()
    bu, bi = b.pairs()
    ni = np.int64(a.n_items)
    keys = np.union1d(au * ni + ai, bu * ni + bi)
    return InteractionMatrix.from_pairs(keys // ni, keys % ni,
                                        a.n_users, a.n_items)


def resplit_union(split: SplitPair, train_ratio: float, seed: int) -> SplitPair:
    """Undo a (possibly leaking) split: union train and test, then re-split.

    The result always audits to zero leakage because the union removes
    duplicates before the disjoint per-user holdout is applied.
    """
    merged = union_matrix(split.train, split.test)
    return split_user_holdout(merged, train_ratio, seed)
