import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from moboga.topsis import (
    BENEFIT,
    COST,
    DecisionMatrix,
    TopsisError,
    topsis_pick_best,
    topsis_rank,
)


def oracle_topsis(x, weights, directions):
    """Step-by-step reference: normalize, weight, ideal/anti-ideal, L2, closeness."""
    x = np.asarray(x, dtype=float)
    m, n = x.shape
    w = np.asarray(weights, dtype=float)
    w = w / w.sum()

    r = np.empty_like(x)
    for j in range(n):
        r[:, j] = x[:, j] / np.sqrt(np.sum(x[:, j] ** 2))
    v = r * w

    best, worst = np.empty(n), np.empty(n)
    for j, d in enumerate(directions):
        if d == COST:
            best[j], worst[j] = v[:, j].min(), v[:, j].max()
        else:
            best[j], worst[j] = v[:, j].max(), v[:, j].min()

    closeness = np.empty(m)
    for i in range(m):
        d_b = np.sqrt(np.sum((v[i] - best) ** 2))
        d_w = np.sqrt(np.sum((v[i] - worst) ** 2))
        closeness[i] = 0.5 if d_b + d_w == 0 else d_w / (d_b + d_w)
    ranking = sorted(range(m), key=lambda i: (-closeness[i], i))
    return closeness, ranking


def equal_weights(n):
    return np.full(n, 1.0 / n)


class TestRank:
    def test_single_alternative_is_degenerate_half(self):
        res = topsis_rank(DecisionMatrix([[3.0, 4.0]], equal_weights(2), (COST, COST)))
        assert res.closeness.tolist() == [0.5]
        assert res.ranking.tolist() == [0]
        assert res.degenerate

    def test_dominating_alternative_scores_one(self):
        dm = DecisionMatrix([[1.0, 1.0], [2.0, 3.0]], equal_weights(2), (COST, COST))
        res = topsis_rank(dm)
        assert res.ranking[0] == 0
        assert res.closeness[0] == pytest.approx(1.0)

    def test_symmetric_pair_ties_to_lower_index(self):
        dm = DecisionMatrix([[1.0, 2.0], [2.0, 1.0]], equal_weights(2), (COST, COST))
        res = topsis_rank(dm)
        assert res.closeness == pytest.approx([0.5, 0.5])
        assert res.ranking.tolist() == [0, 1]
        oc, orank = oracle_topsis([[1, 2], [2, 1]], equal_weights(2), (COST, COST))
        assert res.closeness == pytest.approx(oc)
        assert res.ranking.tolist() == orank

    def test_all_zero_column_names_the_criterion(self):
        dm = DecisionMatrix([[0.0, 1.0], [0.0, 2.0]], equal_weights(2), (COST, COST))
        with pytest.raises(TopsisError, match="criterion 0"):
            topsis_rank(dm)

    def test_all_identical_rows_flagged_degenerate(self):
        dm = DecisionMatrix([[2.0, 3.0]] * 4, equal_weights(2), (COST, COST))
        res = topsis_rank(dm)
        assert res.degenerate
        assert res.closeness.tolist() == [0.5] * 4
        assert res.ranking.tolist() == [0, 1, 2, 3]

    def test_weights_must_be_positive(self):
        with pytest.raises(TopsisError):
            DecisionMatrix([[1.0]], np.array([0.0]), (COST,))

    def test_directions_validated(self):
        with pytest.raises(TopsisError):
            DecisionMatrix([[1.0]], np.array([1.0]), ("sideways",))


class TestPickBest:
    def test_singleton(self):
        assert topsis_pick_best([[1.0, 2.0]], (COST, COST)) == 0

    def test_symmetric_cost_front_is_a_full_tie(self):
        # rows all sum to 10, so the weighted normalized points are collinear
        # and exactly equidistant from ideal and anti-ideal: closeness 0.5
        # everywhere, and the tie-break hands the pick to the lowest index.
        pts = [(1.0, 9.0), (5.0, 5.0), (9.0, 1.0)]
        oc, orank = oracle_topsis(pts, equal_weights(2), (COST, COST))
        assert oc == pytest.approx([0.5, 0.5, 0.5])
        assert topsis_pick_best(pts, (COST, COST)) == orank[0] == 0

    def test_symmetric_benefit_front_is_a_full_tie(self):
        pts = [(0.9, 0.1), (0.5, 0.5), (0.1, 0.9)]
        oc, orank = oracle_topsis(pts, equal_weights(2), (BENEFIT, BENEFIT))
        assert oc == pytest.approx([0.5, 0.5, 0.5])
        assert topsis_pick_best(pts, (BENEFIT, BENEFIT)) == orank[0] == 0

    def test_asymmetric_balanced_point_wins(self):
        # break the constant-sum symmetry: the balanced point now dominates
        # the closeness ordering as the extremes trade one criterion away
        pts = [(1.0, 9.5), (5.0, 5.0), (9.5, 1.0)]
        assert topsis_pick_best(pts, (COST, COST)) == 1
        _, orank = oracle_topsis(pts, equal_weights(2), (COST, COST))
        assert orank[0] == 1

    def test_weights_shift_the_pick(self):
        pts = [(1.0, 9.0), (9.0, 1.0)]
        assert topsis_pick_best(pts, (COST, COST), weights=[0.95, 0.05]) == 0
        assert topsis_pick_best(pts, (COST, COST), weights=[0.05, 0.95]) == 1


matrix_strategy = st.integers(0, 2**31 - 1)


@given(matrix_strategy)
@settings(max_examples=60)
def test_matches_scripted_oracle(seed):
    rng = np.random.default_rng(seed)
    m = int(rng.integers(1, 21))
    n = int(rng.integers(1, 6))
    x = rng.uniform(0.1, 10.0, size=(m, n))
    w = rng.uniform(0.1, 2.0, size=n)
    directions = tuple(COST if rng.random() < 0.5 else BENEFIT for _ in range(n))
    res = topsis_rank(DecisionMatrix(x, w, directions))
    oc, orank = oracle_topsis(x, w, directions)
    assert res.closeness == pytest.approx(oc, abs=1e-12)
    assert res.ranking.tolist() == orank


@given(matrix_strategy)
@settings(max_examples=40)
def test_positive_column_scaling_leaves_closeness_unchanged(seed):
    rng = np.random.default_rng(seed)
    m, n = int(rng.integers(2, 12)), int(rng.integers(1, 5))
    x = rng.uniform(0.1, 10.0, size=(m, n))
    w = rng.uniform(0.1, 2.0, size=n)
    directions = tuple(COST if rng.random() < 0.5 else BENEFIT for _ in range(n))
    base = topsis_rank(DecisionMatrix(x, w, directions))
    scaled = x.copy()
    j = int(rng.integers(n))
    scaled[:, j] *= float(rng.uniform(0.01, 100.0))
    res = topsis_rank(DecisionMatrix(scaled, w, directions))
    assert res.closeness == pytest.approx(base.closeness, abs=1e-12)


@given(matrix_strategy)
@settings(max_examples=40)
def test_row_permutation_permutes_the_ranking(seed):
    from hypothesis import assume

    rng = np.random.default_rng(seed)
    m, n = int(rng.integers(2, 12)), int(rng.integers(1, 5))
    x = rng.uniform(0.1, 10.0, size=(m, n))
    w = rng.uniform(0.1, 2.0, size=n)
    directions = tuple(COST if rng.random() < 0.5 else BENEFIT for _ in range(n))
    base = topsis_rank(DecisionMatrix(x, w, directions))
    # permuting rows reorders the column-norm summation, so closeness can move
    # by an ulp; only gap-free rankings are required to map across exactly
    gaps = np.diff(np.sort(base.closeness))
    assume(gaps.size == 0 or gaps.min() > 1e-9)
    perm = rng.permutation(m)
    permuted = topsis_rank(DecisionMatrix(x[perm], w, directions))
    assert permuted.closeness == pytest.approx(base.closeness[perm], rel=1e-9, abs=1e-12)
    assert perm[permuted.ranking].tolist() == base.ranking.tolist()


@given(matrix_strategy)
@settings(max_examples=40)
def test_closeness_always_in_unit_interval(seed):
    rng = np.random.default_rng(seed)
    m, n = int(rng.integers(1, 15)), int(rng.integers(1, 5))
    x = rng.uniform(0.1, 5.0, size=(m, n))
    res = topsis_rank(DecisionMatrix(x, equal_weights(n), (COST,) * n))
    assert np.all(res.closeness >= 0.0) and np.all(res.closeness <= 1.0)
