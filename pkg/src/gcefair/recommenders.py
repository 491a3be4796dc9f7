"""Baseline run generators: random, most-popular, user/item KNN.

Every generator skips items already in the target user's training profile
and breaks score ties by ascending item id, so runs are reproducible.
"""

from __future__ import annotations

import hashlib
import logging
from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np
import scipy.sparse as sp

from .core import Interaction, RankedList, RecRun
from .errors import ConfigError
from .gain import _check_cutoff

_log = logging.getLogger(__name__)

SIMILARITIES = ("cosine_binarized", "jaccard", "pearson")
SIM_ALIASES = {"cosine": "cosine_binarized"}


@dataclass(frozen=True)
class KnnConfig:
    neighborhood_size: int = 50
    similarity: str = "cosine_binarized"
    side: str = "user"

    def __post_init__(self):
        object.__setattr__(self, "similarity", SIM_ALIASES.get(self.similarity, self.similarity))
        if self.neighborhood_size < 1:
            raise ConfigError("neighborhood_size must be >= 1")
        if self.similarity not in SIMILARITIES:
            raise ConfigError(f"unknown similarity {self.similarity!r}; expected one of {SIMILARITIES}")
        if self.side not in ("user", "item"):
            raise ConfigError(f"side must be 'user' or 'item', got {self.side!r}")


class InteractionMatrix:
    """Sparse user x item rating matrix; ids are indexed in sorted order.

    Repeated (user, item) pairs keep the most recent rating. Implicit
    feedback is stored as 1.0.
    """

    def __init__(self, train: Iterable[Interaction]):
        latest: dict[tuple[str, str], tuple[int, float]] = {}
        for x in train:
            key = (x.user_id, x.item_id)
            if key not in latest or x.timestamp >= latest[key][0]:
                latest[key] = (x.timestamp, x.value)
        self.users = sorted({u for u, _ in latest})
        self.items = sorted({i for _, i in latest})
        self.user_index = {u: n for n, u in enumerate(self.users)}
        self.item_index = {i: n for n, i in enumerate(self.items)}
        rows = [self.user_index[u] for u, _ in latest]
        cols = [self.item_index[i] for _, i in latest]
        vals = [v for _, v in latest.values()]
        self.ratings = sp.csr_matrix(
            (np.asarray(vals, dtype=np.float64), (rows, cols)),
            shape=(len(self.users), len(self.items)),
        )
        self.ratings.sort_indices()

    def seen(self, user: str) -> np.ndarray:
        """Column indices of items in ``user``'s training profile."""
        if user not in self.user_index:
            return np.empty(0, dtype=np.int64)
        row = self.user_index[user]
        return self.ratings.indices[self.ratings.indptr[row]:self.ratings.indptr[row + 1]]


def _user_seed(seed: int, user: str) -> np.random.Generator:
    digest = hashlib.sha256(user.encode("utf-8")).digest()
    return np.random.default_rng([seed & 0xFFFFFFFFFFFFFFFF, int.from_bytes(digest[:8], "little")])


def _rank(user: str, items: Sequence[str], scores: np.ndarray, candidates: np.ndarray, k: int) -> RankedList:
    """Top-k candidates by score, ties by item index (= ascending item id)."""
    if candidates.size == 0:
        return RankedList(user, ())
    cand_scores = scores[candidates]
    order = np.lexsort((candidates, -cand_scores))[:k]
    chosen = candidates[order]
    return RankedList.from_items(user, [items[c] for c in chosen], [float(s) for s in cand_scores[order]])


def random_rec(train: Iterable[Interaction], users: Iterable[str], k: int, seed: int = 0,
               run_tag: str = "random") -> RecRun:
    """Uniform sample of ``k`` unseen items per user.

    Each user draws from an independent stream derived from (seed, user id),
    so the list for a user does not depend on which other users are scored.
    """
    _check_cutoff(k)
    mat = InteractionMatrix(train)
    n_items = len(mat.items)
    lists = {}
    for user in sorted(set(users)):
        rng = _user_seed(seed, user)
        draws = rng.random(n_items)
        mask = np.ones(n_items, dtype=bool)
        mask[mat.seen(user)] = False
        lists[user] = _rank(user, mat.items, draws, np.flatnonzero(mask), k)
    return RecRun(run_tag, lists)


def most_popular(train: Iterable[Interaction], users: Iterable[str], k: int,
                 run_tag: str = "pop") -> RecRun:
    """Rank items by number of training interactions."""
    _check_cutoff(k)
    train = list(train)
    mat = InteractionMatrix(train)
    counts = Counter(x.item_id for x in train)
    popularity = np.array([counts[i] for i in mat.items], dtype=np.float64)
    lists = {}
    for user in sorted(set(users)):
        mask = np.ones(len(mat.items), dtype=bool)
        mask[mat.seen(user)] = False
        lists[user] = _rank(user, mat.items, popularity, np.flatnonzero(mask), k)
    return RecRun(run_tag, lists)


def similarity_matrix(profiles: sp.csr_matrix, similarity: str) -> sp.csr_matrix:
    """Pairwise similarity between the rows of ``profiles``.

    cosine_binarized and jaccard work on the 0/1 pattern. pearson centres
    each row on its own mean rating and sums over co-rated columns only; pairs
    with fewer than two co-rated columns get 0. The diagonal is zeroed.
    """
    profiles = sp.csr_matrix(profiles, dtype=np.float64)
    binary = profiles.copy()
    binary.data = np.ones_like(binary.data)
    co = (binary @ binary.T).tocsr()
    sizes = np.asarray(binary.sum(axis=1)).ravel()

    if similarity == "cosine_binarized":
        sim = co.tocoo()
        norms = np.sqrt(sizes[sim.row] * sizes[sim.col])
        data = sim.data / norms
    elif similarity == "jaccard":
        sim = co.tocoo()
        data = sim.data / (sizes[sim.row] + sizes[sim.col] - sim.data)
    elif similarity == "pearson":
        means = np.zeros(profiles.shape[0])
        nz = sizes > 0
        means[nz] = np.asarray(profiles.sum(axis=1)).ravel()[nz] / sizes[nz]
        centred = profiles.copy()
        centred.data = centred.data - np.repeat(means, np.diff(centred.indptr))
        squared = centred.multiply(centred).tocsr()
        num = (centred @ centred.T).tocsr()
        # energy[u, v] = sum of u's squared deviations over items co-rated with v
        energy = (squared @ binary.T).tocsr()
        sim = co.tocoo()
        num_vals = np.asarray(num[sim.row, sim.col]).ravel()
        e_uv = np.asarray(energy[sim.row, sim.col]).ravel()
        e_vu = np.asarray(energy[sim.col, sim.row]).ravel()
        denom = np.sqrt(e_uv * e_vu)
        data = np.zeros_like(num_vals)
        ok = (sim.data >= 2) & (denom > 0)
        data[ok] = np.clip(num_vals[ok] / denom[ok], -1.0, 1.0)
    else:
        raise ConfigError(f"unknown similarity {similarity!r}")

    keep = sim.row != sim.col
    out = sp.csr_matrix((data[keep], (sim.row[keep], sim.col[keep])), shape=co.shape)
    out.eliminate_zeros()
    out.sort_indices()
    return out


def prune_neighbors(sim: sp.csr_matrix, k: int) -> sp.csr_matrix:
    """Keep, per row, the ``k`` largest positive similarities (ties by index)."""
    sim = sim.tocsr()
    rows, cols, vals = [], [], []
    for r in range(sim.shape[0]):
        start, end = sim.indptr[r], sim.indptr[r + 1]
        idx = sim.indices[start:end]
        val = sim.data[start:end]
        pos = val > 0
        idx, val = idx[pos], val[pos]
        if idx.size == 0:
            continue
        order = np.lexsort((idx, -val))[:k]
        rows.extend([r] * len(order))
        cols.extend(idx[order])
        vals.extend(val[order])
    return sp.csr_matrix((np.asarray(vals, dtype=np.float64), (rows, cols)), shape=sim.shape)


def knn_rec(train: Iterable[Interaction], users: Iterable[str], k: int, config: KnnConfig = KnnConfig(),
            run_tag: str | None = None) -> RecRun:
    """Neighbourhood collaborative filtering.

    user side: score(u, i) = sum over the ``neighborhood_size`` most similar
    users v (positive similarity only) of sim(u, v) * r(v, i).
    item side: score(u, i) = sum over the most similar items j of i of
    sim(i, j) * r(u, j).

    Only items with a positive score are recommended, so sparse
    neighbourhoods yield short or empty lists.
    """
    _check_cutoff(k)
    if run_tag is None:
        run_tag = f"{config.side}knn-{config.similarity}"
    mat = InteractionMatrix(train)
    ratings = mat.ratings
    if config.side == "user":
        weights = prune_neighbors(similarity_matrix(ratings, config.similarity), config.neighborhood_size)
    else:
        weights = prune_neighbors(similarity_matrix(ratings.T.tocsr(), config.similarity), config.neighborhood_size)
    _log.debug("%s: %d neighbour weights", run_tag, weights.nnz)

    lists = {}
    for user in sorted(set(users)):
        if user not in mat.user_index:
            lists[user] = RankedList(user, ())
            continue
        row = mat.user_index[user]
        if config.side == "user":
            scores = np.asarray((weights[row] @ ratings).todense()).ravel()
        else:
            scores = np.asarray((ratings[row] @ weights.T).todense()).ravel()
        mask = scores > 0
        mask[mat.seen(user)] = False
        lists[user] = _rank(user, mat.items, scores, np.flatnonzero(mask), k)
    return RecRun(run_tag, lists)
