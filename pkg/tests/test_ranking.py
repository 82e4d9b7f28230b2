import numpy as np
import pytest

from safs import ranking as rk


class TestMakeRanking:
    def test_normalizes_to_percentages(self):
        r = rk.make_ranking(["a", "b"], [3.0, 1.0])
        assert r.entries == (("a", 75.0), ("b", 25.0))

    def test_ties_break_by_name(self):
        r = rk.make_ranking(["z", "a", "m"], [1.0, 1.0, 2.0])
        assert [name for name, _ in r.entries] == ["m", "a", "z"]

    def test_all_zero_is_empty(self):
        assert len(rk.make_ranking(["a"], [0.0])) == 0

    def test_zero_weight_features_dropped(self):
        r = rk.make_ranking(["a", "b", "c"], [2.0, 0.0, 2.0])
        assert len(r) == 2

    def test_top_k(self):
        r = rk.make_ranking([f"f{i}" for i in range(6)], np.arange(1, 7))
        assert r.top_k(3) == ["f5", "f4", "f3"]
        assert r.top_k(99) == [f"f{i}" for i in range(5, -1, -1)]
        with pytest.raises(ValueError):
            r.top_k(0)


class TestCsvRoundTrip:
    def test_round_trip(self):
        r = rk.make_ranking(["a", "b"], [1.0, 3.0])
        back = rk.ranking_from_csv(rk.ranking_to_csv(r))
        assert back.entries == r.entries

    def test_malformed_header(self):
        with pytest.raises(ValueError):
            rk.ranking_from_csv("nope\n1,a,5\n")


class TestMse:
    def test_identical(self):
        assert rk.mse([1.0, 2.0], [1.0, 2.0]) == 0.0

    def test_three_four(self):
        assert rk.mse([0.0, 0.0], [3.0, 4.0]) == 12.5

    def test_matches_loop_oracle(self):
        rng = np.random.default_rng(0)
        a, b = rng.normal(size=9), rng.normal(size=9)
        acc = 0.0
        for x, y in zip(a, b):
            acc += (x - y) ** 2
        assert rk.mse(a, b) == pytest.approx(acc / 9, abs=1e-12)

    def test_length_mismatch(self):
        with pytest.raises(ValueError):
            rk.mse([1.0], [1.0, 2.0])
