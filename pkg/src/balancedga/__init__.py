"""Balanced and adaptive-bias counter crossovers in a steady-state GA for nonlinear Boolean functions."""
from .boolfn import (
    TruthTable,
    WalshSpectrum,
    format_truth_table,
    hamming_weight,
    is_balanced,
    nonlinearity,
    parse_truth_table,
    support,
    walsh_transform,
)
from .engine import CrossoverKind, FitnessVariant, GaConfig, RunResult, evaluate, ga_run, pen, wpen
from .harness import SweepGrid, SweepSpec, export_results, heatmap_counts, run_sweep
from .variation import BiasSchedule, RandomSource, counter_cross, counter_cross_unbal, swap_mutation

__version__ = "0.1.0"
