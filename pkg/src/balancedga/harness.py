"""Parameter sweeps over (p0, alpha), aggregation, and CSV export."""
from __future__ import annotations

import csv
import io
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from typing import Iterable, Optional, Sequence, Union

from .boolfn import format_truth_table
from .engine import CrossoverKind, GaConfig, RunResult, ga_run

__all__ = [
    "ROW_FIELDS",
    "AGGREGATE_FIELDS",
    "ExportError",
    "SweepSpec",
    "SweepCell",
    "SweepGrid",
    "default_thresholds",
    "derive_seed",
    "run_sweep",
    "heatmap_counts",
    "format_heatmap",
    "export_results",
    "read_rows",
    "aggregate_rows",
]

ROW_FIELDS = (
    "run_id",
    "combo_p0",
    "combo_alpha",
    "seed",
    "fitness_variant",
    "crossover",
    "n",
    "budget",
    "best_balanced_nl",
    "best_fitness",
    "evals_to_best",
    "wallclock_ms",
    "best_table_hex",
)
AGGREGATE_FIELDS = ("p0", "alpha", "runs", "count_ge_threshold", "count_eq_optimum", "success_rate")

# Maximum nonlinearity of balanced functions, known exactly for these n.
_BALANCED_OPTIMUM = {1: 0, 2: 0, 3: 2, 4: 4, 5: 12, 6: 26, 7: 56}

_MASK64 = (1 << 64) - 1


class ExportError(OSError):
    pass


def default_thresholds(n: int) -> tuple[int, int]:
    """``(threshold, optimum)`` used for success counting at ``n`` variables.

    n=7 counts runs reaching 54 and separately those reaching the optimum 56;
    elsewhere the threshold is the optimum itself.
    """
    if n not in _BALANCED_OPTIMUM:
        raise ValueError(f"no default thresholds for n={n}; pass threshold and optimum explicitly")
    optimum = _BALANCED_OPTIMUM[n]
    return (54 if n == 7 else optimum), optimum


def _splitmix64(x: int) -> int:
    x = (x + 0x9E3779B97F4A7C15) & _MASK64
    x = ((x ^ (x >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    x = ((x ^ (x >> 27)) * 0x94D049BB133111EB) & _MASK64
    return x ^ (x >> 31)


def derive_seed(master_seed: int, combo_index: int, run_index: int) -> int:
    """Per-run seed; injective in ``(combo_index, run_index)`` for a fixed master.

    Both indices must fit in 32 bits. Every step is a bijection on 64-bit words.
    """
    if not (0 <= combo_index < 1 << 32 and 0 <= run_index < 1 << 32):
        raise ValueError("combo and run indices must fit in 32 bits")
    key = (combo_index << 32) | run_index
    return _splitmix64(key ^ _splitmix64(master_seed & _MASK64))


@dataclass(frozen=True)
class SweepSpec:
    base: GaConfig
    p0_values: tuple[float, ...] = (0.5, 0.6, 0.7, 0.8, 0.9)
    alpha_values: tuple[float, ...] = (0.9, 0.95, 0.99)
    runs: int = 50
    master_seed: int = 0
    threshold: Optional[int] = None
    optimum: Optional[int] = None

    def __post_init__(self):
        object.__setattr__(self, "p0_values", tuple(float(v) for v in self.p0_values))
        object.__setattr__(self, "alpha_values", tuple(float(v) for v in self.alpha_values))
        if not self.p0_values or not self.alpha_values:
            raise ValueError("p0_values and alpha_values must be non-empty")
        if self.runs < 1:
            raise ValueError("runs must be at least 1")
        if self.base.crossover is not CrossoverKind.ADAPTIVE:
            raise ValueError("a (p0, alpha) sweep needs the adaptive crossover")
        if self.threshold is None or self.optimum is None:
            threshold, optimum = default_thresholds(self.base.n)
            if self.threshold is None:
                object.__setattr__(self, "threshold", threshold)
            if self.optimum is None:
                object.__setattr__(self, "optimum", optimum)

    def combos(self) -> list[tuple[float, float]]:
        return [(p0, alpha) for p0 in self.p0_values for alpha in self.alpha_values]

    def configs(self) -> list[tuple[int, int, GaConfig]]:
        """``(combo_index, run_index, config)`` for every run, in join order."""
        out = []
        for c, (p0, alpha) in enumerate(self.combos()):
            for r in range(self.runs):
                seed = derive_seed(self.master_seed, c, r)
                out.append((c, r, replace(self.base, p0=p0, alpha=alpha, seed=seed)))
        return out


def _counts(nls: Iterable[Optional[int]], threshold: int, optimum: int) -> tuple[int, int]:
    nls = [v for v in nls if v is not None]
    return sum(v >= threshold for v in nls), sum(v == optimum for v in nls)


@dataclass
class SweepCell:
    p0: float
    alpha: float
    results: list[RunResult]
    count_ge_threshold: int = 0
    count_eq_optimum: int = 0
    success_rate: float = 0.0


@dataclass
class SweepGrid:
    threshold: int
    optimum: int
    cells: list[SweepCell] = field(default_factory=list)

    def __post_init__(self):
        for cell in self.cells:
            ge, eq = _counts(
                (r.best_balanced_nonlinearity for r in cell.results), self.threshold, self.optimum
            )
            cell.count_ge_threshold, cell.count_eq_optimum = ge, eq
            cell.success_rate = ge / len(cell.results) if cell.results else 0.0

    def cell(self, p0: float, alpha: float) -> SweepCell:
        for c in self.cells:
            if c.p0 == p0 and c.alpha == alpha:
                return c
        raise KeyError((p0, alpha))

    def all_results(self) -> list[RunResult]:
        return [r for c in self.cells for r in c.results]


def run_sweep(spec: SweepSpec, workers: int = 1) -> SweepGrid:
    """Run ``spec.runs`` independent GA runs per ``(p0, alpha)`` combination.

    With ``workers > 1`` runs go to a process pool; results are joined by
    ``(combo, run)`` index, so the grid does not depend on ``workers``.
    """
    jobs = spec.configs()
    configs = [cfg for _, _, cfg in jobs]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(ga_run, configs, chunksize=1))
    else:
        results = [ga_run(cfg) for cfg in configs]
    cells = []
    for c, (p0, alpha) in enumerate(spec.combos()):
        chunk = results[c * spec.runs : (c + 1) * spec.runs]
        cells.append(SweepCell(p0, alpha, chunk))
    return SweepGrid(spec.threshold, spec.optimum, cells)


def heatmap_counts(
    grid: SweepGrid, threshold: int, optimum: int
) -> dict[tuple[float, float], tuple[int, int]]:
    """Per cell: runs whose best balanced Nl is ``>= threshold``, and ``== optimum``."""
    return {
        (c.p0, c.alpha): _counts((r.best_balanced_nonlinearity for r in c.results), threshold, optimum)
        for c in grid.cells
    }


def format_heatmap(grid: SweepGrid) -> str:
    """Plain-text table, rows by p0 and columns by alpha, entries ``ge (eq)``."""
    p0s = sorted({c.p0 for c in grid.cells})
    alphas = sorted({c.alpha for c in grid.cells})
    lines = ["p0 \\ alpha " + " ".join(f"{a:>10}" for a in alphas)]
    for p0 in p0s:
        row = []
        for a in alphas:
            try:
                c = grid.cell(p0, a)
            except KeyError:
                row.append(f"{'-':>10}")
                continue
            entry = f"{c.count_ge_threshold}"
            if c.count_eq_optimum:
                entry += f" ({c.count_eq_optimum})"
            row.append(f"{entry:>10}")
        lines.append(f"{p0:<11} " + " ".join(row))
    return "\n".join(lines)


def _fmt(v) -> str:
    if v is None:
        return ""
    if isinstance(v, float):
        return repr(v)
    return str(v)


def _table_text(bits) -> str:
    if bits is None:
        return ""
    return format_truth_table(bits, "hex" if len(bits) >= 4 else "bin")


def _row(run_id: int, result: RunResult, include_timing: bool) -> list[str]:
    cfg = result.config
    adaptive = cfg.crossover is CrossoverKind.ADAPTIVE
    return [
        str(run_id),
        _fmt(cfg.p0) if adaptive else "",
        _fmt(cfg.alpha) if adaptive else "",
        str(result.seed),
        cfg.fitness.value,
        cfg.crossover.value,
        str(cfg.n),
        str(cfg.budget),
        _fmt(result.best_balanced_nonlinearity),
        _fmt(float(result.best_individual.fitness)),
        _fmt(result.evals_to_best),
        f"{result.wallclock * 1000:.0f}" if include_timing else "",
        _table_text(result.best_balanced_table),
    ]


def _aggregate_lines(cells: Sequence[tuple[float, float, int, int, int]]) -> list[list[str]]:
    return [
        [_fmt(p0), _fmt(alpha), str(runs), str(ge), str(eq), _fmt(ge / runs if runs else 0.0)]
        for p0, alpha, runs, ge, eq in cells
    ]


def _write_csv(path, header, rows):
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    try:
        with open(path, "w", newline="", encoding="utf-8") as fh:
            fh.write(buf.getvalue())
    except OSError as exc:
        raise ExportError(exc.errno, f"cannot write results to {os.fspath(path)!r}: {exc.strerror}") from exc


def export_results(
    obj: Union[SweepGrid, RunResult, Sequence[RunResult]],
    path,
    format: str = "rows",
    include_timing: bool = False,
    threshold: Optional[int] = None,
    optimum: Optional[int] = None,
) -> None:
    """Write run records (``rows``) or per-combination counts (``aggregate``) as CSV.

    Output is byte-stable for identical inputs; ``wallclock_ms`` is left empty
    unless ``include_timing`` is set, since timings differ between runs.
    """
    if isinstance(obj, RunResult):
        obj = [obj]
    if format == "rows":
        results = obj.all_results() if isinstance(obj, SweepGrid) else list(obj)
        rows = [_row(i, r, include_timing) for i, r in enumerate(results)]
        _write_csv(path, ROW_FIELDS, rows)
    elif format == "aggregate":
        if not isinstance(obj, SweepGrid):
            raise TypeError("aggregate export needs a SweepGrid")
        threshold = obj.threshold if threshold is None else threshold
        optimum = obj.optimum if optimum is None else optimum
        counts = heatmap_counts(obj, threshold, optimum)
        cells = [(c.p0, c.alpha, len(c.results), *counts[(c.p0, c.alpha)]) for c in obj.cells]
        _write_csv(path, AGGREGATE_FIELDS, _aggregate_lines(cells))
    else:
        raise ValueError(f"unknown export format {format!r}")


def read_rows(path) -> list[dict[str, str]]:
    with open(path, newline="", encoding="utf-8") as fh:
        return list(csv.DictReader(fh))


def aggregate_rows(rows: Sequence[dict[str, str]], threshold: int, optimum: int, path) -> None:
    """Rebuild the aggregate CSV from exported run records."""
    order: list[tuple[float, float]] = []
    groups: dict[tuple[float, float], list[Optional[int]]] = {}
    for row in rows:
        key = (float(row["combo_p0"]), float(row["combo_alpha"]))
        if key not in groups:
            order.append(key)
            groups[key] = []
        nl = row["best_balanced_nl"]
        groups[key].append(int(nl) if nl else None)
    cells = [(p0, a, len(groups[(p0, a)]), *_counts(groups[(p0, a)], threshold, optimum)) for p0, a in order]
    _write_csv(path, AGGREGATE_FIELDS, _aggregate_lines(cells))
