import random
from math import factorial

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from chain_atlas.core import (
    ChainError,
    EnumerationLimitError,
    Instance,
    Ordering,
    ParseError,
    chain_cost,
    cost_triplet,
    enumerate_orderings,
    ordering_from_triplets,
    ordering_to_triplets,
    parse_instance,
    parse_ordering,
    render_ordering,
)


def catalan_closed_form(n):
    return factorial(2 * n - 2) // (factorial(n) * factorial(n - 1))


def check_triplet_invariants(ts, n):
    assert len(ts) == n - 1
    assert all(0 <= a < b < c <= n for a, b, c in ts)
    middles = sorted(b for _, b, _ in ts)
    assert middles == list(range(1, n))
    assert sum(1 for a, _, c in ts if a == 0 and c == n) == 1


class TestInstance:
    def test_n_and_argmin(self):
        inst = Instance((5, 3, 7, 3))
        assert inst.n == 3
        assert inst.argmin == 1

    @pytest.mark.parametrize("dims", [(1, 2), (1, 0, 3), (2, -1, 4), (1, 2.5, 3)])
    def test_rejects_bad_dims(self, dims):
        with pytest.raises(ChainError):
            Instance(dims)

    @pytest.mark.parametrize("text", ["10,100,5,50", "10 100 5 50", " 10, 100,5 ,50 "])
    def test_parse(self, text):
        assert parse_instance(text) == Instance((10, 100, 5, 50))

    @pytest.mark.parametrize("text", ["", "1,2", "1,x,3", "1,0,3"])
    def test_parse_errors(self, text):
        with pytest.raises(ParseError):
            parse_instance(text)


class TestCostTriplet:
    def test_examples(self):
        assert cost_triplet(Instance((2, 3, 4, 5, 6)), 0, 1, 2) == 24
        assert cost_triplet(Instance((10, 100, 5, 50)), 0, 2, 3) == 2500
        ones = Instance((1, 1, 1, 1))
        assert {cost_triplet(ones, a, b, c) for a in range(4) for b in range(4) for c in range(4)} == {1}

    def test_out_of_range(self):
        with pytest.raises(IndexError):
            cost_triplet(Instance((1, 2, 3)), 0, 1, 3)

    def test_rotational_symmetry(self):
        rng = random.Random(1)
        for _ in range(1000):
            n = rng.randint(2, 10)
            inst = Instance(tuple(rng.randint(1, 1000) for _ in range(n + 1)))
            a, b, c = (rng.randint(0, n) for _ in range(3))
            assert cost_triplet(inst, a, b, c) == cost_triplet(inst, c, a, b)


class TestTriplets:
    def test_left_to_right(self):
        o = parse_ordering("((M1 M2) M3) M4")
        assert set(ordering_to_triplets(o)) == {(0, 1, 2), (0, 2, 3), (0, 3, 4)}

    def test_single(self):
        assert ordering_to_triplets(Ordering((1, 2))) == [(0, 1, 2)]

    def test_balanced(self):
        o = parse_ordering("(M1 M2)(M3 M4)")
        assert set(ordering_to_triplets(o)) == {(0, 1, 2), (2, 3, 4), (0, 2, 4)}

    def test_eight_chain_figure(self):
        o = parse_ordering("((M1 M2) ((M3 (M4 M5)) M6)) (M7 M8)")
        assert o.triplets == {(0, 1, 2), (0, 2, 6), (2, 3, 5), (3, 4, 5), (2, 5, 6), (0, 6, 8), (6, 7, 8)}

    @pytest.mark.parametrize("n", range(2, 9))
    def test_invariants_and_roundtrip(self, n):
        for o in enumerate_orderings(n):
            check_triplet_invariants(ordering_to_triplets(o), n)
            assert ordering_from_triplets(o.triplets) == o

    def test_from_triplets_rejects_gaps(self):
        with pytest.raises(ChainError):
            ordering_from_triplets({(0, 2, 4), (0, 1, 2)})


class TestChainCost:
    def test_left_to_right(self):
        o = parse_ordering("((M1 M2) M3) M4")
        assert chain_cost(o, Instance((2, 3, 4, 5, 6))) == 24 + 40 + 60

    def test_all_ones(self):
        for o in enumerate_orderings(4):
            # five dims = four matrices = three unit multiplications
            assert chain_cost(o, Instance((1,) * 5)) == 3

    def test_fan_out_alpha_family(self):
        o = parse_ordering("(M1 M2) ((M3 M4) M5)")
        assert chain_cost(o, Instance((10, 10, 1, 10, 10, 10))) == 4 * 10**2

    def test_length_mismatch(self):
        with pytest.raises(ChainError):
            chain_cost(Ordering((1, 2)), Instance((1, 2, 3, 4)))

    def test_cubic_scale_law(self):
        rng = random.Random(7)
        for _ in range(300):
            n = rng.randint(2, 8)
            o = rng.choice(enumerate_orderings(n))
            inst = Instance(tuple(rng.randint(1, 1000) for _ in range(n + 1)))
            alpha = rng.choice((2, 3, 10))
            assert chain_cost(o, inst.scaled(alpha)) == alpha**3 * chain_cost(o, inst)

    def test_no_overflow(self):
        big = 2**70
        o = Ordering(((1, 2), 3))
        assert chain_cost(o, Instance((big, big, big, big))) == 2 * big**3


class TestEnumerate:
    @pytest.mark.parametrize("n", range(2, 11))
    def test_catalan_count(self, n):
        orderings = enumerate_orderings(n)
        assert len(orderings) == catalan_closed_form(n)
        assert len(set(orderings)) == len(orderings)

    def test_table_values(self):
        assert len(enumerate_orderings(2)) == 1
        assert len(enumerate_orderings(4)) == 5
        assert len(enumerate_orderings(9)) == 1430

    def test_order_is_split_ascending(self):
        got = [render_ordering(o) for o in enumerate_orderings(4)]
        assert got == [
            "M1 (M2 (M3 M4))",
            "M1 ((M2 M3) M4)",
            "(M1 M2) (M3 M4)",
            "(M1 (M2 M3)) M4",
            "((M1 M2) M3) M4",
        ]

    def test_limit(self, monkeypatch):
        with pytest.raises(EnumerationLimitError):
            enumerate_orderings(5, limit=4)
        monkeypatch.setenv("CHAIN_ATLAS_ENUM_LIMIT", "3")
        with pytest.raises(EnumerationLimitError):
            enumerate_orderings(4)
        assert len(enumerate_orderings(4, limit=4)) == 5

    def test_too_short(self):
        with pytest.raises(ChainError):
            enumerate_orderings(1)


class TestParseRender:
    def test_examples(self):
        assert parse_ordering("M1 M2") == Ordering((1, 2))
        assert parse_ordering("((M1 M2) M3) M4").triplets == {(0, 1, 2), (0, 2, 3), (0, 3, 4)}
        assert parse_ordering("(((M1 M2) M3) M4)") == parse_ordering("((M1 M2) M3) M4")

    @pytest.mark.parametrize(
        "text",
        ["(M1 (M3 M2))", "M1 M2 M3", "(M1 M2", "M1 M2)", "M2 M3", "M1", "", "(M1 M2) x M3", "()"],
    )
    def test_errors(self, text):
        with pytest.raises(ParseError):
            parse_ordering(text)

    @pytest.mark.parametrize("n", range(2, 9))
    def test_roundtrip(self, n):
        for o in enumerate_orderings(n):
            text = render_ordering(o)
            assert parse_ordering(text) == o

    def test_render_is_minimal(self):
        assert render_ordering(Ordering(((1, 2), 3))) == "(M1 M2) M3"
        assert render_ordering(Ordering((1, 2))) == "M1 M2"


@st.composite
def instances_and_orderings(draw):
    n = draw(st.integers(2, 7))
    dims = tuple(draw(st.lists(st.integers(1, 10**6), min_size=n + 1, max_size=n + 1)))
    o = draw(st.sampled_from(enumerate_orderings(n)))
    return Instance(dims), o


@settings(max_examples=200, deadline=None)
@given(instances_and_orderings())
def test_cost_is_sum_of_triplets(pair):
    inst, o = pair
    assert chain_cost(o, inst) == sum(cost_triplet(inst, *t) for t in ordering_to_triplets(o))
