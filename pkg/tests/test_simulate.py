"""Synthetic designs and the Monte Carlo driver."""

import numpy as np
import pytest

from clustersift import (
    KMeansPartition,
    MixtureSpec,
    SearchConfig,
    exhaustive_search,
    gen_case1,
    gen_case2,
    gen_tsv05,
    generate,
    monte_carlo,
)
from clustersift import rng
from clustersift.simulate import TSV05_COMPONENTS, case1_spec

pytestmark = pytest.mark.filterwarnings(
    "ignore::clustersift.NeighborCountWarning")


def test_mixture_spec_validation():
    with pytest.raises(ValueError):
        MixtureSpec((0.5, 0.6), ((0.0,), (1.0,)), ((1.0,), (1.0,)))
    with pytest.raises(ValueError):
        MixtureSpec((0.5, 0.5), ((0.0,), (1.0,)), ((1.0,), (0.0,)))
    with pytest.raises(ValueError):
        MixtureSpec((1.0,), ((0.0, 1.0),), ((1.0,),))


def test_case1_shapes_and_moments():
    data, comps = gen_case1(4000, sigma=0.2, seed=1)
    assert data.shape == (4000, 3)
    assert comps.min() == 1 and comps.max() == 3
    # noise column mean within the law-of-large-numbers band
    assert abs(data[:, 2].mean()) < 4 * 0.2 / np.sqrt(4000)
    # component frequencies near (0.35, 0.35, 0.30)
    freq = np.bincount(comps - 1, minlength=3) / 4000
    for got, want in zip(freq, (0.35, 0.35, 0.30)):
        assert abs(got - want) < 3 * np.sqrt(0.35 * 0.65 / 4000)
    # component means of the informative coordinates
    spec = case1_spec(0.2)
    for c in range(3):
        block = data[comps == c + 1]
        np.testing.assert_allclose(block[:, :2].mean(axis=0),
                                   spec.means[c][:2], atol=0.05)


def test_case1_scale_switch():
    sd_version, _ = gen_case1(3000, sigma=0.2, seed=2)
    var_version, _ = gen_case1(3000, sigma=0.2, seed=2, scale_as_variance=True)
    # variance reading inflates spread by 1/sqrt(0.2)
    assert var_version[:, 2].std() > 1.8 * sd_version[:, 2].std()


def test_case2_exact_linear_combination():
    data, _ = gen_case2(500, seed=3)
    np.testing.assert_array_equal(
        data[:, 2], (data[:, 0] + data[:, 1]) / np.sqrt(2.0))
    cov = np.cov(data.T)
    eigenvalues = np.linalg.eigvalsh(cov)
    assert eigenvalues[0] < 1e-12  # rank-deficient by construction
    corr = np.corrcoef(data[:, 2], data[:, 0] + data[:, 1])[0, 1]
    assert corr == pytest.approx(1.0, abs=1e-12)


def test_tsv05_structure():
    data, labels = gen_tsv05(seed=4)
    assert data.shape == (15, 3)
    assert labels.tolist() == [1, 1, 1, 1, 2, 2, 2, 3, 3, 3, 3, 3, 3, 4, 4]
    data6, labels6 = gen_tsv05(seed=4, dims=3, extra_noise_dims=3)
    assert data6.shape == (15, 6)
    # same signal block when the seed matches
    assert data6[:, :3].tobytes() == data.tobytes()
    assert labels6.tolist() == labels.tolist()


def test_tsv05_component_moments():
    # pool many draws: per-component mean and variance follow the recipe
    draws = [gen_tsv05(seed=rng.substream(70, rng.DATA, i))[0]
             for i in range(400)]
    stacked = np.stack(draws)  # (reps, 15, 3)
    start = 0
    for rows, mu, var in TSV05_COMPONENTS:
        block = stacked[:, start:start + rows, :]
        assert block.mean() == pytest.approx(mu, abs=0.1)
        assert block.var() == pytest.approx(var, rel=0.15)
        start += rows


def test_generators_deterministic():
    for design in ("case1", "case2", "tsv05"):
        a, ca = generate(design, n=50, seed=7)
        b, cb = generate(design, n=50, seed=7)
        assert a.tobytes() == b.tobytes()
        assert np.array_equal(ca, cb)
        c, _ = generate(design, n=50, seed=8)
        assert a.tobytes() != c.tobytes()


def test_generate_rejects_unknown_design():
    with pytest.raises(ValueError):
        generate("case3", n=10, seed=0)


def test_monte_carlo_counts_sum_to_reps():
    res = monte_carlo("case1", reps=12, seed=5)
    assert res.cardinality_counts.shape == (3, 3)
    assert (res.cardinality_counts.sum(axis=1) == 12 - res.errors).all()
    assert res.proportions.shape == (3, 3)
    np.testing.assert_allclose(res.proportions.sum(axis=1), 1.0)


def test_monte_carlo_single_rep_is_point_mass():
    res = monte_carlo("tsv05", reps=1, k=4, seed=6)
    for row in res.cardinality_counts:
        assert row.sum() == 1


def test_monte_carlo_deterministic_and_thread_invariant():
    a = monte_carlo("case1", reps=10, seed=9)
    b = monte_carlo("case1", reps=10, seed=9, threads=4)
    assert np.array_equal(a.cardinality_counts, b.cardinality_counts)


def test_monte_carlo_proportion_lookup():
    res = monte_carlo("case1", reps=8, seed=10)
    row = res.proportions[2]
    assert res.proportion(1, 2) == row[1]
    assert res.proportion("1", 3) == row[2]


def test_six_dim_tsv05_same_selection_as_three_dim():
    # appending pure-noise columns leaves the selected subsets unchanged
    # (seed chosen so k-means recovers the same grouping in both versions)
    seed = rng.substream(71, rng.DATA, 0)
    data3, _ = gen_tsv05(seed=seed)
    seed = rng.substream(71, rng.DATA, 0)
    data6, _ = gen_tsv05(seed=seed, dims=3, extra_noise_dims=3)
    km3 = KMeansPartition(n_clusters=4, n_restarts=10, random_state=1).fit(data3)
    km6 = KMeansPartition(n_clusters=4, n_restarts=10, random_state=1).fit(data6)
    assert sorted(km3.cluster_sizes_) == [2, 3, 4, 6]
    assert sorted(km6.cluster_sizes_) == [2, 3, 4, 6]
    for strategy, r in (("mean", None), ("cond-mean", 2)):
        for threshold in ("0.9", "0.95", "1.0"):
            rep3 = exhaustive_search(
                data3, km3, km3.labels_,
                SearchConfig(threshold=threshold, strategy=strategy, r=r))
            rep6 = exhaustive_search(
                data6, km6, km6.labels_,
                SearchConfig(threshold=threshold, strategy=strategy, r=r))
            assert ([s.subset.indices for s in rep3.solutions]
                    == [s.subset.indices for s in rep6.solutions])
