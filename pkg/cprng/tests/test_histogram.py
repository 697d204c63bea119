"""
Tests for box-count histograms, estimates and discrepancies.
"""
import math

import numpy as np
import pytest

from cprng.models.histogram import (
    HistogramAccumulator1D,
    HistogramAccumulator2D,
    LaggedPairAccumulator,
    Partition1D,
    autocorrelation_estimate,
    box_edge,
    correlation,
    density,
    discrepancy_l1,
    discrepancy_l2_squared,
    grid_table,
    merge,
    tally_1d,
    tally_2d,
)
from cprng.models.tent_map import GeneratorState
from cprng.utils.exceptions import OutOfRangeError, PartitionMismatchError, UndefinedEstimateError


def naive_index(x: float, m: int) -> int:
    """Largest i with s_i <= x, capped at the last box."""
    i = 0
    while i < m - 1 and x >= box_edge(i + 1, m):
        i += 1
    return i


def random_values(rng: np.random.Generator, m: int, n: int) -> np.ndarray:
    """Uniform values mixed with exact box edges and both ends."""
    values = rng.uniform(-1.0, 1.0, n)
    hits = rng.random(n) < 0.2
    values[hits] = box_edge(rng.integers(0, m + 1, hits.sum()), m)
    return values


@pytest.mark.parametrize(
    "x, expected", [(-1.0, 0), (-0.5, 1), (-0.5000001, 0), (0.0, 2), (0.4999999, 2), (0.5, 3), (1.0, 3)]
)
def test_box_index_examples(x: float, expected: int) -> None:
    """Test box indices on a 4-box partition, edges included."""
    assert Partition1D(4).index(x) == expected


@pytest.mark.parametrize("x", [1.5, -1.1, float("nan"), float("inf")])
def test_out_of_range_values(x: float) -> None:
    """Test that values outside [-1, 1] are rejected."""
    with pytest.raises(OutOfRangeError):
        HistogramAccumulator1D.with_boxes(10).tally(x)


def test_density_examples() -> None:
    """Test the density and discrepancies on tiny inputs."""
    even = HistogramAccumulator1D.with_boxes(2).tally_many([-0.5, 0.5])
    est = density(even)
    assert est.values.tolist() == [0.5, 0.5]
    assert discrepancy_l1(est) == 0.0

    lumped = HistogramAccumulator1D.with_boxes(2).tally_many([0.5] * 10)
    est = density(lumped)
    assert est.values.tolist() == [0.0, 1.0]
    assert discrepancy_l1(est) == 1.0
    assert discrepancy_l2_squared(est) == 1.0


def test_correlation_example() -> None:
    """Test that one pair per box gives the uniform correlation."""
    acc = HistogramAccumulator2D.with_boxes(2)
    acc.tally_many([-0.5, -0.5, 0.5, 0.5], [-0.5, 0.5, -0.5, 0.5])
    est = correlation(acc)
    assert est.values.tolist() == [[0.25, 0.25], [0.25, 0.25]]
    assert discrepancy_l1(est) == 0.0


def test_empty_estimates_are_undefined() -> None:
    """Test that estimates of empty accumulators raise."""
    with pytest.raises(UndefinedEstimateError):
        density(HistogramAccumulator1D.with_boxes(5))
    with pytest.raises(UndefinedEstimateError):
        correlation(HistogramAccumulator2D.with_boxes(5))


def test_matches_naive_reference() -> None:
    """Test tallies, estimates and discrepancies against a direct implementation on 200 streams."""
    rng = np.random.default_rng(20240601)
    for _ in range(200):
        m = int(rng.integers(1, 17))
        n = int(rng.integers(1, 1001))
        xs = random_values(rng, m, n)
        ys = random_values(rng, m, n)

        counts = [0] * m
        for x in xs:
            counts[naive_index(x, m)] += 1
        acc = HistogramAccumulator1D.with_boxes(m).tally_many(xs)
        assert acc.counts.tolist() == counts
        assert acc.n == n

        single = HistogramAccumulator1D.with_boxes(m)
        for x in xs:
            tally_1d(single, x)
        assert single.counts.tolist() == counts

        est = density(acc)
        expected = [0.5 * (m / n) * c for c in counts]
        assert est.values.tolist() == expected
        assert discrepancy_l1(est) == pytest.approx(math.fsum(abs(v / 0.5 - 1) for v in expected) / m, rel=1e-12)
        assert discrepancy_l2_squared(est) == pytest.approx(
            math.fsum((v / 0.5 - 1) ** 2 for v in expected) / m, rel=1e-12
        )

        grid = [[0] * m for _ in range(m)]
        for x, y in zip(xs, ys):
            grid[naive_index(x, m)][naive_index(y, m)] += 1
        acc2 = HistogramAccumulator2D.with_boxes(m).tally_many(xs, ys)
        assert acc2.counts.tolist() == grid
        single2 = HistogramAccumulator2D.with_boxes(m)
        for x, y in zip(xs[:50], ys[:50]):
            tally_2d(single2, x, y)
        bulk = HistogramAccumulator2D.with_boxes(m).tally_many(xs[:50], ys[:50])
        assert np.array_equal(single2.counts, bulk.counts)
        est2 = correlation(acc2)
        assert est2.values.tolist() == [[0.25 * (m * m / n) * c for c in row] for row in grid]


@pytest.mark.parametrize("m", [100, 1000])
def test_uniform_calibration(m: int) -> None:
    """Test E1 and E2^2 of i.i.d. uniform values against their Poisson expectations."""
    n = 1_000_000
    xs = np.random.default_rng(m).uniform(-1.0, 1.0, n)
    est = density(HistogramAccumulator1D.with_boxes(m).tally_many(xs))
    assert discrepancy_l1(est) == pytest.approx(math.sqrt(2 / math.pi) * math.sqrt(m / n), rel=0.2)
    assert discrepancy_l2_squared(est) == pytest.approx(m / n, rel=0.2)


def test_uniform_pair_calibration() -> None:
    """Test E_C1 of i.i.d. uniform pairs against its Poisson expectation."""
    n, m = 1_000_000, 100
    rng = np.random.default_rng(7)
    acc = HistogramAccumulator2D.with_boxes(m).tally_many(rng.uniform(-1, 1, n), rng.uniform(-1, 1, n))
    assert discrepancy_l1(correlation(acc)) == pytest.approx(math.sqrt(2 / math.pi) * math.sqrt(m * m / n), rel=0.2)


def test_merge_equals_single_pass() -> None:
    """Test that merging halves gives the counts of the whole stream."""
    xs = np.random.default_rng(3).uniform(-1, 1, 10_000)
    whole = HistogramAccumulator1D.with_boxes(50).tally_many(xs)
    left = HistogramAccumulator1D.with_boxes(50).tally_many(xs[:4000])
    right = HistogramAccumulator1D.with_boxes(50).tally_many(xs[4000:])
    merged = merge(left, right)
    assert np.array_equal(merged.counts, whole.counts)
    assert merged.n == whole.n
    assert left.n == 4000


def test_merge_rejects_other_partition() -> None:
    """Test that accumulators over different partitions do not merge."""
    with pytest.raises(PartitionMismatchError):
        merge(HistogramAccumulator1D.with_boxes(10), HistogramAccumulator1D.with_boxes(20))
    with pytest.raises(PartitionMismatchError):
        merge(HistogramAccumulator1D.with_boxes(10), HistogramAccumulator2D.with_boxes(10))


def test_lagged_pairs_across_pieces() -> None:
    """Test that feeding pieces gives exactly the pairs of the joined stream."""
    values = np.random.default_rng(11).uniform(-1, 1, 1001)
    for lag in (1, 3):
        whole = LaggedPairAccumulator(8, lag).feed(values)
        pieces = LaggedPairAccumulator(8, lag)
        for part in np.array_split(values, [1, 2, 500, 997]):
            pieces.feed(part)
        assert np.array_equal(pieces.histogram.counts, whole.histogram.counts)
        assert pieces.histogram.n == 1001 - lag
        assert pieces.values_seen == 1001


def test_autocorrelation_needs_two_values() -> None:
    """Test that a single value has no autocorrelation estimate."""
    with pytest.raises(UndefinedEstimateError):
        autocorrelation_estimate(np.array([0.3]), 10)


def test_raw_stream_shows_tent_graph(generator4: GeneratorState) -> None:
    """Test that consecutive raw values concentrate on the graph of the tent map."""
    xs = generator4.stream(100_000)
    acc = LaggedPairAccumulator(10, 1)
    for block in xs:
        acc.feed(block[:, 0])
    assert discrepancy_l1(acc.estimate()) > 0.5

    # the marginal density is still flat
    marginal = HistogramAccumulator1D.with_boxes(10).tally_many(generator4.iterate(100_000)[:, 0])
    assert discrepancy_l1(density(marginal)) < 0.05


def test_correlation_of_diagonal_pairs() -> None:
    """Test that pairs on the diagonal boxes give 0.5 there and 0 elsewhere."""
    acc = HistogramAccumulator2D.with_boxes(2).tally_many([-0.5, 0.5], [-0.5, 0.5])
    assert correlation(acc).values.tolist() == [[0.5, 0.0], [0.0, 0.5]]


def test_constant_stream_autocorrelation() -> None:
    """Test that a constant stream puts every pair in one box: E_AC1 = 1.5 for M = 2."""
    est = autocorrelation_estimate(np.full(10, 0.5), 2)
    assert est.values[1, 1] == pytest.approx(1.0)
    assert discrepancy_l1(est) == pytest.approx(1.5)


def test_grid_table_of_density() -> None:
    """Test the per-box columns of a density estimate."""
    table = grid_table(density(HistogramAccumulator1D.with_boxes(2).tally_many([0.5] * 4)))
    assert set(table) == {"i", "value", "deviation"}
    assert table["i"].tolist() == [0, 1]
    assert table["value"].tolist() == [0.0, 1.0]
    assert table["deviation"].tolist() == [-0.5, 0.5]


def test_grid_table_of_correlation() -> None:
    """Test that the square grid is flattened row-major with both box indices."""
    acc = HistogramAccumulator2D.with_boxes(2).tally_many([-0.5, 0.5], [-0.5, 0.5])
    table = grid_table(correlation(acc))
    assert table["i"].tolist() == [0, 0, 1, 1]
    assert table["j"].tolist() == [0, 1, 0, 1]
    assert table["deviation"].tolist() == [0.25, -0.25, -0.25, 0.25]
