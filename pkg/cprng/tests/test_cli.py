"""
Tests for the command line.
"""
from pathlib import Path

import numpy as np
import pandas as pd
import pytest

from cprng.main import main
from cprng.middlewares.error_middleware import (
    EXIT_IO,
    EXIT_NUMERICAL,
    EXIT_RESOURCE,
    EXIT_USAGE,
)
from cprng.models.tent_map import GeneratorState
from cprng.schemas.coupling import CouplingConfig
from cprng.schemas.experiment import ExperimentKind, ExperimentResult
from cprng.schemas.presets import CANONICAL_X0
from cprng.utils.encoding import FIXED32_MAX, to_fixed32

X0 = "0.330,0.3387564,0.50492331,0.0"


def test_gen_csv_example(tmp_output: Path) -> None:
    """Test 1000 csv lines of component 0, all inside [-1, 1]."""
    code = main(
        ["gen", "--p", "4", "--eps1", "1e-14", "--x0", X0, "--iters", "1000", "--component", "0",
         "--format", "csv", "--output", str(tmp_output)]
    )
    assert code == 0
    lines = tmp_output.read_text().splitlines()
    assert len(lines) == 1000
    values = np.array([float(v) for v in lines])
    assert np.all(np.abs(values) <= 1.0)

    expected = GeneratorState(CouplingConfig(p=4), CANONICAL_X0).stream(1000)
    assert np.array_equal(values, np.concatenate(list(expected))[:, 0])


def test_gen_zero_iterates(tmp_output: Path) -> None:
    """Test that --iters 0 writes nothing and succeeds."""
    assert main(["gen", "--iters", "0", "--output", str(tmp_output)]) == 0
    assert tmp_output.read_bytes() == b""


def test_gen_raw_f64(tmp_path: Path) -> None:
    """Test that raw-f64 output is exactly 8 bytes per value, little-endian."""
    out = tmp_path / "raw.bin"
    assert main(["gen", "--iters", "500", "--component", "2", "--format", "raw-f64", "--output", str(out)]) == 0
    data = out.read_bytes()
    assert len(data) == 8 * 500
    values = np.frombuffer(data, dtype="<f8")
    expected = GeneratorState(CouplingConfig(p=4), CANONICAL_X0).stream(500)
    assert np.array_equal(values, np.concatenate(list(expected))[:, 2])


def test_gen_fixed32(tmp_path: Path) -> None:
    """Test that fixed32 output is 4 bytes per value."""
    out = tmp_path / "fixed.bin"
    assert main(["gen", "--iters", "300", "--format", "fixed32", "--output", str(out)]) == 0
    assert len(out.read_bytes()) == 4 * 300


def test_fixed32_endpoints() -> None:
    """Test the fixed-point mapping of both ends and the midpoint."""
    assert to_fixed32([-1.0, 1.0, 0.0]).tolist() == [0, FIXED32_MAX, 2**31]


def test_gen_sampled_stream(tmp_output: Path) -> None:
    """Test that the sampled stream holds only source values selected by the control."""
    code = main(
        ["gen", "--iters", "200000", "--threshold", "0.998", "--source", "1", "--control", "3",
         "--format", "csv", "--output", str(tmp_output)]
    )
    assert code == 0
    values = [float(v) for v in tmp_output.read_text().splitlines()]

    states = GeneratorState(CouplingConfig(p=4), CANONICAL_X0)
    states = np.concatenate(list(states.stream(200_000)))
    mask = (states[:, 3] > 0.998) & (states[:, 3] < 1.0)
    assert values == states[mask, 1].tolist()


def test_density_csv(tmp_output: Path) -> None:
    """Test the density table: header, one row per checkpoint, descending E1."""
    code = main(
        ["density", "--p", "3", "--disc", "100", "--iters-list", "1e4,1e5,1e6", "--output", str(tmp_output)]
    )
    assert code == 0
    frame = pd.read_csv(tmp_output)
    assert list(frame.columns) == ["n_iter", "n_disc", "component", "e1", "e2_sq"]
    assert frame["n_iter"].tolist() == [10_000, 100_000, 1_000_000]
    assert frame["e1"].is_monotonic_decreasing

    parsed = ExperimentResult.from_csv(tmp_output, ExperimentKind.DENSITY_SWEEP)
    assert len(parsed.rows) == 3


def test_corr_pair(tmp_output: Path) -> None:
    """Test the correlation table of one named pair."""
    assert main(["corr", "--pair", "0,2", "--disc", "10", "--iters", "20000", "--output", str(tmp_output)]) == 0
    frame = pd.read_csv(tmp_output)
    assert frame[["comp_k", "comp_l"]].values.tolist() == [[0, 2]]


def test_autocorr_mixing(tmp_output: Path) -> None:
    """Test the autocorrelation command with mixing thresholds."""
    code = main(
        ["autocorr", "--thresholds", "0.998,0.9987,0.9994", "--sources", "0,1,2", "--control", "3",
         "--disc", "10", "--iters", "500000", "--output", str(tmp_output)]
    )
    assert code == 0
    assert list(pd.read_csv(tmp_output).columns) == ["n_iter", "n_sampl", "n_disc", "eac1", "eac2_sq"]


def test_seedscan_side_tables(tmp_output: Path) -> None:
    """Test that the seed scan writes its summary and E1 histogram next to the table."""
    code = main(
        ["seedscan", "--seed-count", "3", "--disc", "10", "--iters", "10000", "--bins", "4",
         "--output", str(tmp_output)]
    )
    assert code == 0
    assert len(pd.read_csv(tmp_output)) == 3
    summary = pd.read_csv(f"{tmp_output}.summary.csv")
    assert summary["statistic"].tolist() == ["min", "max", "mean"]
    histogram = pd.read_csv(f"{tmp_output}.histogram.csv")
    assert histogram["count"].sum() == 3


def test_cycle_of_scalar_tent(tmp_output: Path) -> None:
    """Test the cycle command on the decoupled orbit of 0."""
    assert main(["cycle", "--p", "1", "--eps1", "0", "--x0", "0", "--budget", "100", "--output", str(tmp_output)]) == 0
    row = pd.read_csv(tmp_output).iloc[0]
    assert (row["found"], row["tail"], row["cycle"]) == (1, 2, 1)


def test_bench_command(tmp_output: Path) -> None:
    """Test that the benchmark writes one row."""
    assert main(["bench", "--bench-steps", "1000", "--output", str(tmp_output)]) == 0
    assert pd.read_csv(tmp_output)["steps"].tolist() == [1000]


@pytest.mark.parametrize(
    "argv",
    [
        ["gen", "--bogus"],
        ["density", "--threshold", "0.998"],
        ["gen", "--threshold", "0.998", "--thresholds", "0.998,0.9987,0.9994"],
        ["gen", "--sources", "0,1,2"],
        ["gen", "--control", "3"],
        ["gen", "--p", "4", "--eps1", "1"],
        ["gen", "--eps1", "1e-14", "--eps-list", "0,0,0,0"],
        ["gen", "--p", "5"],
        ["gen", "--component", "4"],
        ["density", "--disc", "10", "--disc-list", "10,100"],
        ["density", "--iters-list", "100,10"],
        ["corr", "--pair", "1"],
        ["autocorr", "--threshold", "0.998", "--component", "0"],
        ["cycle", "--x0", "0.1,0.2"],
        ["gen", "--iters", "inf"],
        ["cycle", "--budget", "nan"],
        ["density", "--iters-list", "1e5,inf"],
        [],
    ],
)
def test_usage_errors(argv) -> None:
    """Test that invalid flags and combinations exit with the usage code."""
    assert main(argv) == EXIT_USAGE


def test_unwritable_output(tmp_path: Path) -> None:
    """Test that an unwritable output path exits with the I/O code."""
    missing = tmp_path / "missing" / "out.csv"
    assert main(["gen", "--iters", "10", "--output", str(missing)]) == EXIT_IO
    assert main(["cycle", "--budget", "10", "--output", str(missing)]) == EXIT_IO


def test_resource_guard_exit(tmp_output: Path) -> None:
    """Test that an oversized histogram exits with the resource code."""
    assert main(["corr", "--disc", "5000", "--output", str(tmp_output)]) == EXIT_RESOURCE


def test_out_of_range_initial_vector() -> None:
    """Test that an initial vector outside [-1, 1] exits with the numerical code."""
    assert main(["gen", "--x0", "2,0,0,0", "--iters", "10"]) == EXIT_NUMERICAL


def test_corr_grid_output(tmp_output: Path, tmp_path: Path) -> None:
    """Test the long-form per-box table of the correlation estimate."""
    grid = tmp_path / "grid.csv"
    code = main(
        ["corr", "--pair", "0,1", "--disc", "10", "--iters", "20000", "--output", str(tmp_output),
         "--grid-output", str(grid)]
    )
    assert code == 0
    frame = pd.read_csv(grid)
    assert list(frame.columns) == ["n_iter", "n_disc", "comp_k", "comp_l", "i", "j", "value", "deviation"]
    assert len(frame) == 100
    assert frame["value"].mean() == pytest.approx(0.25, rel=1e-6)
    assert np.allclose(frame["deviation"], frame["value"] - 0.25, atol=1e-7)


def test_density_and_autocorr_grid_output(tmp_output: Path, tmp_path: Path) -> None:
    """Test the grid tables of the density and autocorrelation commands."""
    grid = tmp_path / "density.csv"
    assert main(["density", "--disc", "10", "--iters", "10000", "--output", str(tmp_output), "--grid-output", str(grid)]) == 0
    frame = pd.read_csv(grid)
    assert list(frame.columns) == ["n_iter", "n_disc", "component", "i", "value", "deviation"]
    assert frame["i"].tolist() == list(range(10))

    grid = tmp_path / "ac.csv"
    code = main(
        ["autocorr", "--threshold", "0.998", "--disc", "10", "--iters", "1000000", "--output", str(tmp_output),
         "--grid-output", str(grid)]
    )
    assert code == 0
    assert list(pd.read_csv(grid).columns) == ["n_iter", "n_disc", "i", "j", "value", "deviation"]


def test_unwritable_grid_output(tmp_output: Path, tmp_path: Path) -> None:
    """Test that an unwritable grid path exits with the I/O code."""
    missing = tmp_path / "missing" / "grid.csv"
    code = main(["corr", "--disc", "10", "--iters", "1000", "--output", str(tmp_output), "--grid-output", str(missing)])
    assert code == EXIT_IO
