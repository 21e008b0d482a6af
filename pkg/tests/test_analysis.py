import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import stats

from temporal_fairness.analysis import compare, coordination_score, correlation_table, pearson, spearman
from temporal_fairness.report import MetricReport


class TestCoordinationScore:
    def test_examples(self):
        assert coordination_score(0.5, 0.5) == 0.0
        assert coordination_score(1.0, 0.2) == 1.0
        assert coordination_score(0.1, 0.4) == pytest.approx(-0.5)

    def test_baseline_at_one(self):
        with pytest.raises(ValueError):
            coordination_score(0.9, 1.0)
        assert math.isnan(compare("calt", 0.9, 1.0).cs)

    def test_compare_carries_values(self):
        c = compare("rp_excl", 0.3, 0.4)
        assert (c.metric, c.value_ql, c.value_rand) == ("rp_excl", 0.3, 0.4)


class TestSpearman:
    def test_partial_swap(self):
        assert spearman([1, 2, 3], [1, 3, 2]).rho == pytest.approx(0.5)

    def test_perfect(self):
        assert spearman([1, 2, 3, 4], [10, 20, 30, 40]).rho == 1.0
        assert spearman([1, 2, 3, 4], [4, 3, 2, 1]).rho == -1.0

    def test_ase_closed_form(self):
        cell = spearman([1, 2, 3, 4, 5], [2, 1, 4, 3, 5])
        assert cell.ase == pytest.approx(math.sqrt((1 - cell.rho**2) / 3))

    def test_flags(self):
        x = np.arange(30.0)
        assert spearman(x, x).p_flag == "p<0.001"
        rng = np.random.default_rng(0)
        assert spearman(x, rng.permutation(x)).p_flag in {"ns", "p<0.05", "p<0.001"}

    @pytest.mark.parametrize(
        "xs,ys",
        [([1, 1, 1], [1, 2, 3]), ([1, 2], [2, 1]), ([1, 2, 3], [1, 2]), ([1, 2, math.nan], [1, 2, 3])],
    )
    def test_degenerate(self, xs, ys):
        cell = spearman(xs, ys)
        assert cell.degenerate and math.isnan(cell.rho)

    @settings(max_examples=100, deadline=None)
    @given(st.lists(st.tuples(st.integers(0, 6), st.integers(0, 6)), min_size=3, max_size=25))
    def test_matches_scipy(self, pairs):
        x, y = map(np.array, zip(*pairs))
        cell = spearman(x, y)
        if cell.degenerate:
            assert np.ptp(x) == 0 or np.ptp(y) == 0
            return
        assert cell.rho == pytest.approx(stats.spearmanr(x, y).statistic, abs=1e-12)
        assert cell.p_value == pytest.approx(stats.spearmanr(x, y).pvalue, abs=1e-9)

    @given(st.lists(st.integers(-10_000, 10_000), min_size=3, max_size=20, unique=True))
    def test_monotone_transform_invariant(self, ints):
        xs = [i / 100 for i in ints]
        ys = [x**3 + 2 * x for x in xs]
        assert spearman(xs, ys).rho == pytest.approx(1.0)
        assert spearman(xs, [math.exp(x / 50) for x in xs]).rho == pytest.approx(1.0)

    def test_pearson_labelled(self):
        cell = pearson([1, 2, 3, 4], [1, 4, 9, 16])
        assert cell.method == "pearson"
        assert cell.rho == pytest.approx(stats.pearsonr([1, 2, 3, 4], [1, 4, 9, 16]).statistic)


class TestCorrelationTable:
    def reports(self):
        rng = np.random.default_rng(4)
        return [MetricReport({"a": float(v), "b": float(v) ** 2, "c": float(w), "k": 1.0})
                for v, w in zip(rng.random(10), rng.random(10))]

    def test_shape_and_values(self):
        table = correlation_table(self.reports(), rows=("a", "c"), cols=("b", "k"))
        assert set(table) == {("a", "b"), ("a", "k"), ("c", "b"), ("c", "k")}
        assert table["a", "b"].rho == pytest.approx(1.0)
        assert table["a", "k"].degenerate

    def test_transpose_symmetric(self):
        reps = self.reports()
        t1 = correlation_table(reps, rows=("a",), cols=("c",))
        t2 = correlation_table(reps, rows=("c",), cols=("a",))
        assert t1["a", "c"].rho == t2["c", "a"].rho

    def test_accepts_plain_dicts(self):
        dicts = [r.values for r in self.reports()]
        assert correlation_table(dicts, rows=("a",), cols=("b",))["a", "b"].rho == pytest.approx(1.0)

    def test_too_few_reports(self):
        with pytest.raises(ValueError):
            correlation_table(self.reports()[:2], rows=("a",), cols=("b",))
