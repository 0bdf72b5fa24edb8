import csv
from dataclasses import replace

import pytest

from balancedga.engine import GaConfig, ga_run
from balancedga.harness import (
    AGGREGATE_FIELDS,
    ROW_FIELDS,
    ExportError,
    SweepCell,
    SweepGrid,
    SweepSpec,
    aggregate_rows,
    default_thresholds,
    derive_seed,
    export_results,
    format_heatmap,
    heatmap_counts,
    read_rows,
    run_sweep,
)

BASE = GaConfig(n=4, pop_size=10, budget=300, interval_m=50)


@pytest.fixture(scope="module")
def small_grid():
    spec = SweepSpec(BASE, p0_values=[0.5, 0.9], alpha_values=[0.9], runs=3, master_seed=5)
    return spec, run_sweep(spec)


def test_seed_derivation_injective():
    seeds = {derive_seed(17, c, r) for c in range(15) for r in range(200)}
    assert len(seeds) == 15 * 200
    assert derive_seed(17, 2, 3) == derive_seed(17, 2, 3) != derive_seed(18, 2, 3)
    assert all(0 <= s < 2**64 for s in seeds)
    with pytest.raises(ValueError):
        derive_seed(0, 1 << 32, 0)


def test_default_thresholds():
    assert default_thresholds(7) == (54, 56)
    assert default_thresholds(6) == (26, 26)
    with pytest.raises(ValueError):
        default_thresholds(9)


def test_spec_validation():
    with pytest.raises(ValueError):
        SweepSpec(BASE, p0_values=[])
    with pytest.raises(ValueError):
        SweepSpec(BASE, runs=0)
    with pytest.raises(ValueError):
        SweepSpec(replace(BASE, crossover="plain"))


def test_paper_grid_cardinality():
    spec = SweepSpec(GaConfig(), runs=4)
    assert len(spec.combos()) == 15
    assert len(spec.configs()) == 60


def test_sweep_shape_and_determinism(small_grid):
    spec, grid = small_grid
    assert [(c.p0, c.alpha) for c in grid.cells] == [(0.5, 0.9), (0.9, 0.9)]
    assert all(len(c.results) == 3 for c in grid.cells)
    again = run_sweep(spec)
    assert grid.all_results() == again.all_results()


def test_single_run_sweep_matches_ga_run():
    spec = SweepSpec(BASE, p0_values=[0.6], alpha_values=[0.95], runs=1, master_seed=9)
    (result,) = run_sweep(spec).all_results()
    direct = ga_run(replace(BASE, p0=0.6, alpha=0.95, seed=derive_seed(9, 0, 0)))
    assert result == direct


def test_sweep_independent_of_workers(small_grid, tmp_path):
    spec, grid = small_grid
    export_results(grid, tmp_path / "a.csv")
    export_results(run_sweep(spec, workers=2), tmp_path / "b.csv")
    assert (tmp_path / "a.csv").read_bytes() == (tmp_path / "b.csv").read_bytes()


def test_aggregates_consistent(small_grid):
    _, grid = small_grid
    counts = heatmap_counts(grid, grid.threshold, grid.optimum)
    for c in grid.cells:
        assert counts[(c.p0, c.alpha)] == (c.count_ge_threshold, c.count_eq_optimum)
        assert c.success_rate == c.count_ge_threshold / len(c.results)
    assert "0.5" in format_heatmap(grid)


def _fake(nl):
    r = ga_run(replace(BASE, budget=BASE.pop_size))
    return replace(r, best_balanced_nonlinearity=nl)


def test_heatmap_counting_contract():
    failing = SweepGrid(54, 56, [SweepCell(0.5, 0.9, [_fake(52)] * 4)])
    assert heatmap_counts(failing, 54, 56) == {(0.5, 0.9): (0, 0)}
    full = SweepGrid(54, 56, [SweepCell(0.5, 0.9, [_fake(54)] * 50)])
    assert heatmap_counts(full, 54, 56) == {(0.5, 0.9): (50, 0)}
    mixed = SweepGrid(54, 56, [SweepCell(0.5, 0.99, [_fake(56), _fake(54), _fake(52), _fake(None)])])
    assert heatmap_counts(mixed, 54, 56)[(0.5, 0.99)] == (2, 1)
    assert mixed.cells[0].success_rate == 0.5


def test_export_rows(small_grid, tmp_path):
    _, grid = small_grid
    path = tmp_path / "rows.csv"
    export_results(grid, path)
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    assert tuple(rows[0]) == ROW_FIELDS
    assert len(rows) == 1 + 6
    assert [r[0] for r in rows[1:]] == [str(i) for i in range(6)]
    assert all(r[11] == "" for r in rows[1:])
    export_results(grid, tmp_path / "timed.csv", include_timing=True)
    assert all(r["wallclock_ms"] for r in read_rows(tmp_path / "timed.csv"))


def test_export_empty_grid(tmp_path):
    empty = SweepGrid(54, 56)
    export_results(empty, tmp_path / "r.csv")
    export_results(empty, tmp_path / "a.csv", "aggregate")
    assert (tmp_path / "r.csv").read_text() == ",".join(ROW_FIELDS) + "\n"
    assert (tmp_path / "a.csv").read_text() == ",".join(AGGREGATE_FIELDS) + "\n"


def test_rows_reaggregate_to_aggregate(small_grid, tmp_path):
    _, grid = small_grid
    export_results(grid, tmp_path / "rows.csv")
    export_results(grid, tmp_path / "agg.csv", "aggregate")
    aggregate_rows(read_rows(tmp_path / "rows.csv"), grid.threshold, grid.optimum, tmp_path / "re.csv")
    assert (tmp_path / "re.csv").read_bytes() == (tmp_path / "agg.csv").read_bytes()


def test_export_single_result_and_errors(tmp_path):
    r = ga_run(replace(BASE, crossover="plain"))
    export_results(r, tmp_path / "one.csv")
    (row,) = read_rows(tmp_path / "one.csv")
    assert row["crossover"] == "plain" and row["combo_p0"] == ""
    assert row["best_balanced_nl"] == str(r.best_balanced_nonlinearity)
    with pytest.raises(ExportError, match="nope"):
        export_results(r, tmp_path / "nope" / "x.csv")
    with pytest.raises(ValueError):
        export_results(r, tmp_path / "x.csv", "json")
    with pytest.raises(TypeError):
        export_results(r, tmp_path / "x.csv", "aggregate")
