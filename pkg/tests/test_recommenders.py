import math

import numpy as np
import pytest

from gcefair.core import Interaction
from gcefair.errors import ConfigError
from gcefair.recommenders import (
    InteractionMatrix,
    KnnConfig,
    knn_rec,
    most_popular,
    random_rec,
    similarity_matrix,
)


def log_from(profiles, ratings=None):
    out = []
    t = 0
    for u, items in profiles.items():
        for i in items:
            r = None if ratings is None else ratings[(u, i)]
            out.append(Interaction(u, i, r, t))
            t += 1
    return out


def random_train(rng, n_users=12, n_items=15, density=0.3, rated=False):
    out = []
    for u in range(n_users):
        for i in range(n_items):
            if rng.random() < density:
                r = float(rng.integers(1, 6)) if rated else None
                out.append(Interaction(f"u{u:02d}", f"i{i:02d}", r, int(rng.integers(0, 1000))))
    return out


def assert_valid(run, train):
    seen = {}
    for x in train:
        seen.setdefault(x.user_id, set()).add(x.item_id)
    for user, ranked in run.lists.items():
        assert not set(ranked.items()) & seen.get(user, set())
        scores = [e.score for e in ranked.entries]
        assert scores == sorted(scores, reverse=True)


class TestRandom:
    def test_deterministic(self):
        train = random_train(np.random.default_rng(0))
        users = {x.user_id for x in train}
        assert random_rec(train, users, 5, seed=42) == random_rec(train, users, 5, seed=42)
        assert random_rec(train, users, 5, seed=42) != random_rec(train, users, 5, seed=43)

    def test_independent_of_user_set(self):
        train = random_train(np.random.default_rng(0))
        full = random_rec(train, {x.user_id for x in train}, 5, seed=1)
        single = random_rec(train, ["u03"], 5, seed=1)
        assert single.lists["u03"] == full.lists["u03"]

    def test_seen_everything(self):
        train = log_from({"u": ["i1", "i2"]})
        assert len(random_rec(train, ["u"], 3).lists["u"]) == 0

    def test_forced_choice(self):
        train = log_from({"u": ["i1"], "v": ["i2"]})
        assert random_rec(train, ["u"], 2).lists["u"].items() == ["i2"]

    def test_seen_excluded(self):
        train = random_train(np.random.default_rng(5))
        assert_valid(random_rec(train, {x.user_id for x in train}, 6, seed=9), train)


class TestPopular:
    train = log_from({"a": ["i1", "i2"], "b": ["i1", "i3"], "c": ["i1", "i2", "i3"], "d": ["i1"], "e": ["i1"]})

    def test_global_order(self):
        run = most_popular(self.train, ["new"], 3)
        assert run.lists["new"].items() == ["i1", "i2", "i3"]
        assert [e.score for e in run.lists["new"].entries] == [5.0, 2.0, 2.0]

    def test_seen_filter(self):
        assert most_popular(self.train, ["d"], 3).lists["d"].items() == ["i2", "i3"]

    def test_empty_training(self):
        run = most_popular([], ["u"], 3)
        assert len(run.lists["u"]) == 0


def dense_oracle_similarity(profiles, kind):
    """Direct pairwise loops over python dicts."""
    ids = sorted(profiles)
    out = np.zeros((len(ids), len(ids)))
    for a, u in enumerate(ids):
        for b, v in enumerate(ids):
            if a == b:
                continue
            pu, pv = profiles[u], profiles[v]
            common = set(pu) & set(pv)
            if kind == "cosine_binarized":
                out[a, b] = len(common) / math.sqrt(len(pu) * len(pv)) if pu and pv else 0
            elif kind == "jaccard":
                union = set(pu) | set(pv)
                out[a, b] = len(common) / len(union) if union else 0
            else:
                if len(common) < 2:
                    continue
                mu, mv = np.mean(list(pu.values())), np.mean(list(pv.values()))
                x = np.array([pu[i] - mu for i in sorted(common)])
                y = np.array([pv[i] - mv for i in sorted(common)])
                den = math.sqrt((x ** 2).sum() * (y ** 2).sum())
                out[a, b] = (x * y).sum() / den if den > 0 else 0
    return out


class TestSimilarity:
    def test_identical_profiles(self):
        mat = InteractionMatrix(log_from({"a": ["i1", "i2"], "b": ["i1", "i2"]}))
        for kind in ("cosine_binarized", "jaccard"):
            sim = similarity_matrix(mat.ratings, kind).toarray()
            assert sim[0, 1] == pytest.approx(1.0)

    def test_disjoint_profiles(self):
        mat = InteractionMatrix(log_from({"a": ["i1"], "b": ["i2"]}))
        assert similarity_matrix(mat.ratings, "cosine_binarized").nnz == 0

    @pytest.mark.parametrize("kind", ["cosine_binarized", "jaccard", "pearson"])
    def test_against_loops(self, kind):
        rng = np.random.default_rng(17)
        for _ in range(10):
            train = random_train(rng, n_users=9, n_items=10, density=0.45, rated=True)
            mat = InteractionMatrix(train)
            profiles = {}
            for row, u in enumerate(mat.users):
                r = mat.ratings.getrow(row)
                profiles[u] = {mat.items[c]: v for c, v in zip(r.indices, r.data)}
            got = similarity_matrix(mat.ratings, kind).toarray()
            want = dense_oracle_similarity(profiles, kind)
            np.testing.assert_allclose(got, want, atol=1e-12)
            np.testing.assert_allclose(got, got.T, atol=1e-12)
            lo = -1 if kind == "pearson" else 0
            assert got.min() >= lo - 1e-12 and got.max() <= 1 + 1e-12


class TestKnn:
    def test_three_user_fixture(self):
        train = log_from({"u1": ["i1", "i2"], "u2": ["i1", "i2", "i3"], "u3": ["i4"]})
        mat = InteractionMatrix(train)
        sim = similarity_matrix(mat.ratings, "cosine_binarized").toarray()
        assert sim[0, 1] == pytest.approx(2 / math.sqrt(6), abs=1e-12)
        run = knn_rec(train, ["u1"], 1, KnnConfig(5, "cosine_binarized", "user"))
        assert run.lists["u1"].items() == ["i3"]

    @pytest.mark.parametrize("side", ["user", "item"])
    @pytest.mark.parametrize("sim", ["cosine_binarized", "jaccard", "pearson"])
    def test_invariants_and_determinism(self, side, sim):
        train = random_train(np.random.default_rng(23), rated=True)
        users = sorted({x.user_id for x in train})
        config = KnnConfig(4, sim, side)
        run = knn_rec(train, users, 5, config)
        assert_valid(run, train)
        assert knn_rec(train, users, 5, config) == run
        # scoring a subset of users must not change their lists
        sub = knn_rec(train, users[:3], 5, config)
        assert all(sub.lists[u] == run.lists[u] for u in users[:3])

    def test_item_knn_score_by_hand(self):
        train = log_from({"a": ["i1", "i2"], "b": ["i1", "i2"], "c": ["i1", "i3"]})
        run = knn_rec(train, ["c"], 2, KnnConfig(5, "jaccard", "item"))
        # jaccard(i2, i1) = 2/3, jaccard(i2, i3) = 0: score(c, i2) = 2/3 * r(c, i1)
        assert run.lists["c"].items() == ["i2"]
        assert run.lists["c"].entries[0].score == pytest.approx(2 / 3)

    def test_unknown_user(self):
        train = log_from({"a": ["i1"]})
        assert len(knn_rec(train, ["zz"], 3).lists["zz"]) == 0

    def test_config_validation(self):
        with pytest.raises(ConfigError):
            KnnConfig(0)
        with pytest.raises(ConfigError):
            KnnConfig(5, "euclid")
        assert KnnConfig(5, "cosine").similarity == "cosine_binarized"
