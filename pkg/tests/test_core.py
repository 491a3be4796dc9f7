import pytest
from hypothesis import given, strategies as st

from gcefair.core import (
    UNKNOWN,
    AttributeMap,
    Distribution,
    GroupPartition,
    Interaction,
    RankedEntry,
    RankedList,
    normalize_distribution,
    partition_by_attribute,
)
from gcefair.errors import DomainError, SchemaError, ZeroMassError

weights_st = st.lists(st.floats(min_value=0, max_value=1e6, allow_nan=False), min_size=1, max_size=8).filter(
    lambda w: sum(w) > 1e-6
)


class TestNormalize:
    def test_rec0_counts(self):
        d = normalize_distribution([3, 7], ["a1", "a2"])
        assert d.weights == pytest.approx((0.3, 0.7), abs=1e-15)
        assert d.categories == ("a1", "a2")

    def test_uniform(self):
        assert normalize_distribution([1, 1], ["a1", "a2"]).weights == (0.5, 0.5)

    def test_zero_mass(self):
        with pytest.raises(ZeroMassError):
            normalize_distribution([0, 0], ["a1", "a2"])

    def test_negative(self):
        with pytest.raises(DomainError):
            normalize_distribution([1, -1], ["a1", "a2"])

    def test_length_mismatch(self):
        with pytest.raises(SchemaError):
            normalize_distribution([1, 2, 3], ["a1", "a2"])

    @given(weights_st)
    def test_idempotent(self, w):
        cats = [f"c{j}" for j in range(len(w))]
        once = normalize_distribution(w, cats)
        twice = normalize_distribution(once.weights, cats)
        assert twice.weights == pytest.approx(once.weights, abs=1e-12)

    @given(weights_st, st.randoms())
    def test_permutation_stable(self, w, rnd):
        cats = [f"c{j}" for j in range(len(w))]
        perm = list(range(len(w)))
        rnd.shuffle(perm)
        base = normalize_distribution(w, cats).as_dict()
        permuted = normalize_distribution([w[j] for j in perm], [cats[j] for j in perm]).as_dict()
        for c in cats:
            assert permuted[c] == pytest.approx(base[c], abs=1e-15)


class TestDistribution:
    def test_rejects_off_unit_sum(self):
        with pytest.raises(DomainError):
            Distribution(("a", "b"), (0.5, 0.6))

    def test_accepts_tolerance(self):
        Distribution(("a", "b"), (0.5, 0.5 + 5e-10))


class TestPartition:
    def test_toy_groups(self):
        amap = AttributeMap("subscription", "user", {f"u{k}": ("a1" if k <= 3 else "a2") for k in range(1, 7)})
        part = partition_by_attribute(amap, {f"u{k}" for k in range(1, 7)})
        assert part.categories == ("a1", "a2")
        assert part.members["a1"] == {"u1", "u2", "u3"}
        assert part.members["a2"] == {"u4", "u5", "u6"}
        assert part.side == "user"

    def test_all_unknown(self):
        part = partition_by_attribute(AttributeMap("x", "user", {}), {"u1"})
        assert part.categories == (UNKNOWN,)
        assert part.members[UNKNOWN] == {"u1"}

    def test_superset_assignment_ignored(self):
        amap = AttributeMap("x", "item", {"i1": "a", "i2": "b", "i3": "a"})
        part = partition_by_attribute(amap, {"i1"})
        assert part.members == {"a": frozenset({"i1"}), "b": frozenset()}

    def test_unknown_last(self):
        amap = AttributeMap("x", "user", {"u2": "b", "u1": "a"})
        part = partition_by_attribute(amap, {"u1", "u2", "u3"})
        assert part.categories == ("b", "a", UNKNOWN)

    def test_empty_universe(self):
        with pytest.raises(DomainError):
            partition_by_attribute(AttributeMap("x", "user", {}), set())

    @given(
        st.dictionaries(st.sampled_from([f"e{j}" for j in range(20)]), st.sampled_from("abcd")),
        st.sets(st.sampled_from([f"e{j}" for j in range(25)]), min_size=1),
    )
    def test_disjoint_cover(self, assignment, universe):
        part = partition_by_attribute(AttributeMap("x", "user", assignment), universe)
        union = set()
        total = 0
        for c in part.categories:
            union |= part.members[c]
            total += len(part.members[c])
        assert union == universe
        assert total == len(universe)

    def test_overlap_rejected(self):
        with pytest.raises(SchemaError):
            GroupPartition("x", ("a", "b"), {"a": frozenset({"u"}), "b": frozenset({"u"})})

    def test_select_reorders(self):
        part = GroupPartition("x", ("a", "b"), {"a": frozenset({"u1"}), "b": frozenset({"u2"})})
        sel = part.select(["b", "c"])
        assert sel.categories == ("b", "c")
        assert sel.members["c"] == frozenset()


class TestDomainTypes:
    def test_interaction_validation(self):
        with pytest.raises(DomainError):
            Interaction("", "i", None, 0)
        with pytest.raises(DomainError):
            Interaction("u", "i", None, -1)
        assert Interaction("u", "i", None, 0).value == 1.0

    def test_ranked_list_invariants(self):
        RankedList("u", (RankedEntry("a", 1, 2.0), RankedEntry("b", 2, 2.0)))
        with pytest.raises(DomainError):
            RankedList("u", (RankedEntry("a", 2, 1.0),))
        with pytest.raises(DomainError):
            RankedList("u", (RankedEntry("a", 1, 1.0), RankedEntry("a", 2, 0.5)))
        with pytest.raises(DomainError):
            RankedList("u", (RankedEntry("a", 1, 1.0), RankedEntry("b", 2, 1.5)))
