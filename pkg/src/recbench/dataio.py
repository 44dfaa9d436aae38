"""Dataset ingestion and canonical split-file serialization.

Two input layouts are supported, both UTF-8 text, plain or gz-compressed:

* ``tsv``: one interaction per line, ``user<TAB>item[<TAB>rating[<TAB>timestamp]]``.
  Rating and timestamp columns are ignored; all interactions are binarized.
* ``adjacency``: one user per line, ``user item1 item2 ...`` separated by
  whitespace (the layout commonly used for shared train/test splits).
  A line holding only a user id registers the user with an empty row.

Duplicate (user, item) pairs collapse to a single weight-1 interaction.
Dense indices are assigned by first appearance of the external id, so
loading is deterministic for a fixed file.
"""

from __future__ import annotations

import gzip
import hashlib
import json
from pathlib import Path

import numpy as np

from .errors import EmptyDatasetError, ParseError
from .matrix import IdMaps, InteractionMatrix

__all__ = [
    "load_interactions",
    "save_interactions",
    "write_idmaps",
    "read_idmaps",
    "write_split_dir",
    "read_split_dir",
    "file_sha256",
]

FORMATS = ("tsv", "adjacency")

TRAIN_FILE = "train.tsv"
TEST_FILE = "test.tsv"
VALID_FILE = "valid.tsv"
USER_IDMAP_FILE = "idmap_users.tsv"
ITEM_IDMAP_FILE = "idmap_items.tsv"
MANIFEST_FILE = "manifest.json"


def _open_text(path, mode="rt"):
    path = Path(path)
    if path.suffix == ".gz":
        return gzip.open(path, mode, encoding="utf-8")
    return open(path, mode, encoding="utf-8")


def _iter_pairs_tsv(path, fh):
    """Yield (lineno, user_token, item_token) triples."""
    for lineno, line in enumerate(fh, start=1):
        line = line.rstrip("\r\n")
        if not line:
            continue
        fields = line.split("\t")
        if not 2 <= len(fields) <= 4 or not fields[0] or not fields[1]:
            raise ParseError(path, lineno,
                             f"expected user<TAB>item[<TAB>rating[<TAB>timestamp]], got {line!r}")
        yield lineno, fields[0], fields[1]


def _iter_adjacency(path, fh):
    """Yield (lineno, user_token, item_token_or_None) triples."""
    for lineno, line in enumerate(fh, start=1):
        tokens = line.split()
        if not tokens:
            continue
        user = tokens[0]
        if len(tokens) == 1:
            yield lineno, user, None
        for item in tokens[1:]:
            yield lineno, user, item


def load_interactions(path, format: str = "tsv", *, ids: str = "external",
                      n_users: int | None = None, n_items: int | None = None,
                      ) -> tuple[InteractionMatrix, IdMaps]:
    """Load an interaction file into a deduplicated, binarized matrix.

    ``ids="external"`` assigns dense indices by first appearance and returns
    the external-id maps.  ``ids="dense"`` parses ids as non-negative
    integers used directly as indices (the canonical split-file convention);
    dimensions may be forced with ``n_users``/``n_items``.
    """
    if format not in FORMATS:
        raise ValueError(f"unknown format {format!r}; expected one of {FORMATS}")
    if ids not in ("external", "dense"):
        raise ValueError(f"ids must be 'external' or 'dense', got {ids!r}")
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(f"no such dataset file: {path}")

    user_index: dict = {}
    item_index: dict = {}
    users: list[int] = []
    items: list[int] = []

    with _open_text(path) as fh:
        pair_iter = (_iter_pairs_tsv(path, fh) if format == "tsv"
                     else _iter_adjacency(path, fh))
        if ids == "dense":
            max_user = -1
            max_item = -1
            for lineno, u_tok, i_tok in pair_iter:
                try:
                    u = int(u_tok)
                    i = int(i_tok) if i_tok is not None else None
                except ValueError:
                    raise ParseError(path, lineno,
                                     f"dense ids must be integers, got ({u_tok!r}, {i_tok!r})") from None
                if u < 0 or (i is not None and i < 0):
                    raise ParseError(path, lineno, "dense ids must be non-negative")
                max_user = max(max_user, u)
                if i is None:
                    continue
                max_item = max(max_item, i)
                users.append(u)
                items.append(i)
            nu = n_users if n_users is not None else max_user + 1
            ni = n_items if n_items is not None else max_item + 1
            nu, ni = max(nu, 0), max(ni, 0)
            if max_user >= nu or max_item >= ni:
                raise ParseError(path, 0,
                                 f"dense index exceeds declared shape ({nu}, {ni})")
            idmaps = IdMaps.identity(nu, ni)
        else:
            for _, u_tok, i_tok in pair_iter:
                u = user_index.setdefault(u_tok, len(user_index))
                if i_tok is None:
                    continue
                i = item_index.setdefault(i_tok, len(item_index))
                users.append(u)
                items.append(i)
            nu, ni = len(user_index), len(item_index)
            idmaps = IdMaps(tuple(user_index), tuple(item_index),
                            user_index, item_index)

    if not users:
        raise EmptyDatasetError(f"{path} contains no interactions")

    users_arr = np.asarray(users, dtype=np.int64)
    items_arr = np.asarray(items, dtype=np.int64)
    # collapse duplicate (user, item) lines to weight 1
    keys = users_arr * np.int64(ni) + items_arr
    uniq = np.unique(keys)
    matrix = InteractionMatrix.from_pairs(uniq // ni, uniq % ni, nu, ni)
    return matrix, idmaps


def save_interactions(matrix: InteractionMatrix, path, idmaps: IdMaps | None = None) -> None:
    """Write tsv-triplet pairs in canonical order (user, then item ascending).

    Without ``idmaps`` the dense indices are written directly; with it the
    external ids are restored.
    """
    path = Path(path)
    with _open_text(path, "wt") as fh:
        users, items = matrix.pairs()
        if idmaps is None:
            for u, i in zip(users.tolist(), items.tolist()):
                fh.write(f"{u}\t{i}\n")
        else:
            uids, iids = idmaps.user_ids, idmaps.item_ids
            for u, i in zip(users.tolist(), items.tolist()):
                fh.write(f"{uids[u]}\t{iids[i]}\n")


def write_idmaps(idmaps: IdMaps, out_dir) -> None:
    out_dir = Path(out_dir)
    with open(out_dir / USER_IDMAP_FILE, "w", encoding="utf-8") as fh:
        for idx, ext in enumerate(idmaps.user_ids):
            fh.write(f"{ext}\t{idx}\n")
    with open(out_dir / ITEM_IDMAP_FILE, "w", encoding="utf-8") as fh:
        for idx, ext in enumerate(idmaps.item_ids):
            fh.write(f"{ext}\t{idx}\n")


def read_idmaps(out_dir) -> IdMaps:
    def read_one(p):
        ids = []
        with open(p, encoding="utf-8") as fh:
            for lineno, line in enumerate(fh, start=1):
                fields = line.rstrip("\r\n").split("\t")
                if len(fields) != 2:
                    raise ParseError(p, lineno, "expected external_id<TAB>index")
                if int(fields[1]) != len(ids):
                    raise ParseError(p, lineno, "indices must be contiguous from 0")
                ids.append(fields[0])
        return tuple(ids)

    out_dir = Path(out_dir)
    return IdMaps(read_one(out_dir / USER_IDMAP_FILE),
                  read_one(out_dir / ITEM_IDMAP_FILE))


def write_split_dir(out_dir, train: InteractionMatrix, test: InteractionMatrix,
                    validation: InteractionMatrix | None = None,
                    idmaps: IdMaps | None = None, manifest: dict | None = None) -> None:
    """Write canonical split files plus id maps and a provenance manifest."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    save_interactions(train, out_dir / TRAIN_FILE)
    save_interactions(test, out_dir / TEST_FILE)
    if validation is not None:
        save_interactions(validation, out_dir / VALID_FILE)
    if idmaps is not None:
        write_idmaps(idmaps, out_dir)
    payload = {"n_users": train.n_users, "n_items": train.n_items}
    if manifest:
        payload.update(manifest)
    with open(out_dir / MANIFEST_FILE, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")


def read_split_dir(out_dir):
    """Read a canonical split directory back into matrices.

    Returns ``(train, test, validation_or_None, manifest_dict)``.
    """
    out_dir = Path(out_dir)
    with open(out_dir / MANIFEST_FILE, encoding="utf-8") as fh:
        manifest = json.load(fh)
    nu, ni = manifest["n_users"], manifest["n_items"]
    train, _ = load_interactions(out_dir / TRAIN_FILE, "tsv", ids="dense",
                                 n_users=nu, n_items=ni)
    test, _ = load_interactions(out_dir / TEST_FILE, "tsv", ids="dense",
                                n_users=nu, n_items=ni)
    valid = None
    if (out_dir / VALID_FILE).exists():
        valid, _ = load_interactions(out_dir / VALID_FILE, "tsv", ids="dense",
                                     n_users=nu, n_items=ni)
    return train, test, valid, manifest


def file_sha256(path) -> str:
    digest = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 20), b""):
            digest.update(chunk)
    return digest.hexdigest()
