"""The match objective: hand values, oracle equivalence, exact thresholds."""

from fractions import Fraction

import numpy as np
import pytest

from clustersift import (
    KMeansPartition,
    SubsetEvaluator,
    efficiency,
    evaluate_subset,
    exact_threshold,
    match_count,
    required_matches,
)
from clustersift import rng
from clustersift.exceptions import DimensionMismatchError, RTooLargeError

from oracles import oracle_h, oracle_labels


def model_for(centers):
    return KMeansPartition.from_centers(centers)


@pytest.mark.filterwarnings("ignore::clustersift.NeighborCountWarning")
def test_full_subset_gives_one(four_point):
    data, centers, labels = four_point
    km = model_for(centers)
    for strategy, r in (("mean", None), ("median", None),
                        ("cond-mean", 2), ("cond-median", 2)):
        assert evaluate_subset(data, km, labels, [1, 2], strategy, r) == 1.0


def test_four_point_hand_values(four_point):
    data, centers, labels = four_point
    km = model_for(centers)
    # keeping column 1 preserves the split; keeping only column 2 sends every
    # blinded row to (5, x), a perfect tie resolved to the first center
    assert evaluate_subset(data, km, labels, [1]) == 1.0
    assert evaluate_subset(data, km, labels, [2]) == 0.5


def test_efficiency_multiple_of_one_over_n(four_point):
    data, centers, labels = four_point
    km = model_for(centers)
    for subset in ([1], [2], [1, 2]):
        blinded = SubsetEvaluator(data, km, labels).blind(subset)
        m = match_count(km, labels, blinded)
        assert isinstance(m, int) and 0 <= m <= 4
        assert efficiency(km, labels, blinded) == m / 4


@pytest.mark.filterwarnings("ignore::clustersift.NeighborCountWarning")
def test_oracle_equivalence_small_instances():
    # naive reimplementation agrees on n <= 8, p <= 3 across strategies
    for i in range(60):
        gen = rng.substream(40, rng.DATA, i)
        n = int(gen.integers(3, 9))
        p = int(gen.integers(1, 4))
        k = int(gen.integers(1, min(3, n) + 1))
        data = gen.normal(0, 2, size=(n, p))
        km = KMeansPartition(n_clusters=k, n_restarts=5, random_state=i).fit(data)
        labels = km.labels_
        subset = [j + 1 for j in range(p) if gen.integers(2)]
        r = int(gen.integers(1, n + 1))
        cases = [("mean", False, None), ("median", False, None),
                 ("cond-mean", True, r), ("cond-median", True, r)]
        for strategy, conditional, rr in cases:
            got = evaluate_subset(data, km, labels, subset, strategy, rr)
            how = "median" if "median" in strategy else "mean"
            hits, total = oracle_h(data, km.cluster_centers_, labels.tolist(),
                                   subset, how, conditional, rr)
            assert got == hits / total


def test_labels_from_any_source_are_respected(four_point):
    data, centers, _ = four_point
    km = model_for(centers)
    wrong = np.array([1, 1, 0, 0])
    blinded = data.copy()
    assert efficiency(km, wrong, blinded) == 0.0


def test_label_permutation_invariance():
    gen = rng.substream(41)
    data = gen.normal(0, 1, size=(40, 3)) + gen.integers(0, 3, size=40)[:, None] * 4
    km = KMeansPartition(n_clusters=3, n_restarts=5, random_state=4).fit(data)
    perm = np.array([2, 0, 1])
    swapped = model_for(km.cluster_centers_[perm])
    relabeled = np.argsort(perm)[km.labels_]
    assert oracle_labels(data, km.cluster_centers_[perm]) == relabeled.tolist()
    for subset in ([1], [2], [3], [1, 3]):
        assert (evaluate_subset(data, km, km.labels_, subset)
                == evaluate_subset(data, swapped, relabeled, subset))


def test_exact_threshold_reads_decimals_exactly():
    assert exact_threshold(0.95) == Fraction(19, 20)
    assert exact_threshold("0.9") == Fraction(9, 10)
    assert exact_threshold(1) == Fraction(1)
    assert exact_threshold(Fraction(2, 3)) == Fraction(2, 3)
    with pytest.raises(ValueError):
        exact_threshold(0.0)
    with pytest.raises(ValueError):
        exact_threshold("1.2")
    with pytest.raises(TypeError):
        exact_threshold(None)


def test_required_matches_avoids_float_edges():
    # binary 0.95 * 100 falls a hair under 95; exact arithmetic must not
    assert required_matches(0.95, 100) == 95
    assert required_matches(0.9, 10) == 9
    assert required_matches("0.91", 10) == 10
    assert required_matches(1, 7) == 7
    assert required_matches(Fraction(2, 3), 9) == 6


def test_evaluator_caches_and_counts():
    data, centers, labels = (np.array([[0.0, 0.0], [0.0, 1.0],
                                       [10.0, 0.0], [10.0, 1.0]]),
                             np.array([[0.0, 0.5], [10.0, 0.5]]),
                             np.array([0, 0, 1, 1]))
    ev = SubsetEvaluator(data, model_for(centers), labels)
    assert ev.matches([2]) == 2
    assert ev.matches([2]) == 2
    assert ev.matches((2,)) == 2
    assert ev.distinct_evaluations == 1
    ev.matches([1])
    assert ev.distinct_evaluations == 2
    assert ev.evaluated_subsets() == [((1,), 4), ((2,), 2)]


def test_evaluator_validates_dimensions(four_point):
    data, centers, labels = four_point
    with pytest.raises(DimensionMismatchError):
        SubsetEvaluator(np.ones((4, 3)), model_for(centers), labels)
    with pytest.raises(ValueError):
        SubsetEvaluator(data, model_for(centers), labels, "cond-mean", None)
    with pytest.raises(RTooLargeError):
        SubsetEvaluator(data, model_for(centers), labels, "cond-mean", 9)
    with pytest.raises(ValueError):
        SubsetEvaluator(data, model_for(centers), labels, "midmean")


def test_model_and_labels_stay_frozen(four_point):
    # blinding must never refit: the model keeps its centers and the labels
    # their values through any number of evaluations
    data, centers, labels = four_point
    km = model_for(centers)
    ev = SubsetEvaluator(data, km, labels)
    before = km.cluster_centers_.tobytes()
    for subset in ([1], [2], []):
        ev.matches(subset)
    assert km.cluster_centers_.tobytes() == before
    assert ev.labels.tolist() == [0, 0, 1, 1]
