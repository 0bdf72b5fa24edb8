"""Steady-state tournament GA for balanced, highly nonlinear Boolean functions."""
from __future__ import annotations

import enum
import time
from dataclasses import asdict, dataclass, field
from typing import Optional, Sequence

from .boolfn import TruthTable, table_nonlinearity
from .variation import BiasSchedule, RandomSource, counter_cross, counter_cross_unbal, swap_mutation

__all__ = [
    "FitnessVariant",
    "CrossoverKind",
    "GaConfig",
    "Individual",
    "RunResult",
    "pen",
    "wpen",
    "evaluate",
    "init_population",
    "tournament_step",
    "ga_run",
]


class FitnessVariant(str, enum.Enum):
    FULL_PENALTY = "fit1"
    WEIGHTED_PENALTY = "fit2"


class CrossoverKind(str, enum.Enum):
    PLAIN = "plain"
    ADAPTIVE = "adaptive"


@dataclass(frozen=True)
class GaConfig:
    """Everything that determines one GA run, seed included.

    ``k`` defaults to ``2**(n-1)``. ``p0``, ``alpha`` and ``interval_m`` only
    matter for the adaptive crossover.
    """

    n: int = 7
    k: Optional[int] = None
    pop_size: int = 50
    tournament_size: int = 3
    p_m: float = 0.7
    budget: int = 1_000_000
    p0: float = 0.5
    alpha: float = 0.99
    interval_m: int = 2000
    fitness: FitnessVariant = FitnessVariant.WEIGHTED_PENALTY
    crossover: CrossoverKind = CrossoverKind.ADAPTIVE
    seed: int = 0

    def __post_init__(self):
        object.__setattr__(self, "fitness", FitnessVariant(self.fitness))
        object.__setattr__(self, "crossover", CrossoverKind(self.crossover))
        if self.n < 1:
            raise ValueError(f"n must be positive, got {self.n}")
        length = 1 << self.n
        if self.k is None:
            object.__setattr__(self, "k", length // 2)
        if not 0 <= self.k <= length:
            raise ValueError(f"k={self.k} outside [0, {length}]")
        if self.pop_size < 1:
            raise ValueError("pop_size must be positive")
        if not 1 <= self.tournament_size <= self.pop_size:
            raise ValueError(
                f"tournament_size must lie in [1, pop_size={self.pop_size}], got {self.tournament_size}"
            )
        if self.budget < self.pop_size:
            raise ValueError(f"budget {self.budget} smaller than pop_size {self.pop_size}")
        for name in ("p_m", "p0"):
            if not 0.0 <= getattr(self, name) <= 1.0:
                raise ValueError(f"{name} must lie in [0, 1], got {getattr(self, name)}")
        if not 0.0 < self.alpha < 1.0:
            raise ValueError(f"alpha must lie in (0, 1), got {self.alpha}")
        if self.interval_m < 1:
            raise ValueError("interval_m must be positive")

    @property
    def length(self) -> int:
        return 1 << self.n

    def to_dict(self) -> dict:
        d = asdict(self)
        d["fitness"] = self.fitness.value
        d["crossover"] = self.crossover.value
        return d


@dataclass
class Individual:
    bits: tuple[int, ...]
    fitness: float
    weight: int
    nonlinearity: int

    @property
    def chromosome(self) -> TruthTable:
        return TruthTable.from_bits(self.bits)


def pen(t: Sequence[int], k: int) -> int:
    return abs(sum(t) - k)


def wpen(t: Sequence[int], k: int, p: float) -> float:
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"p must lie in [0, 1], got {p}")
    return (1.0 - p) * pen(t, k)


def evaluate(
    t: Sequence[int], variant: FitnessVariant, p: float = 0.0, k: Optional[int] = None
) -> tuple[float, int, int]:
    """Return ``(fitness, nonlinearity, weight)`` of a truth table.

    ``fit1 = Nl - pen`` and ``fit2 = Nl - (1 - p) * pen``, with ``pen`` the
    distance of the weight from ``k`` (default: half the table length).
    """
    bits = t.bits if isinstance(t, TruthTable) else t
    if k is None:
        k = len(bits) // 2
    weight = sum(bits)
    nl = table_nonlinearity(bits)
    penalty = abs(weight - k)
    if penalty and variant is FitnessVariant.WEIGHTED_PENALTY:
        return nl - (1.0 - p) * penalty, nl, weight
    return float(nl - penalty), nl, weight


def _make_individual(bits, config: GaConfig, p: float) -> Individual:
    fit, nl, w = evaluate(bits, config.fitness, p, config.k)
    return Individual(tuple(bits), fit, w, nl)


def init_population(config: GaConfig, rng: RandomSource) -> list[Individual]:
    """``pop_size`` uniformly random weight-``k`` tables, each evaluated once."""
    p = config.p0 if config.crossover is CrossoverKind.ADAPTIVE else 0.0
    population = []
    for _ in range(config.pop_size):
        bits = [0] * config.length
        for i in rng.sample(config.length, config.k):
            bits[i] = 1
        population.append(_make_individual(bits, config, p))
    return population


def tournament_step(
    population: list[Individual],
    config: GaConfig,
    schedule: Optional[BiasSchedule],
    rng: RandomSource,
) -> Individual:
    """One steady-state step; returns the offspring.

    The two fittest of ``tournament_size`` distinct sampled individuals
    (earlier-sampled first on ties) produce one child, which is mutated,
    evaluated and written over the tournament's worst member.
    """
    if config.tournament_size < 2:
        raise ValueError("tournament_size must be at least 2 to pick two parents")
    picks = rng.sample(len(population), config.tournament_size)
    ranked = sorted(picks, key=lambda i: -population[i].fitness)
    x = population[ranked[0]].bits
    y = population[ranked[1]].bits
    if config.crossover is CrossoverKind.ADAPTIVE:
        p = schedule.current_p
        child = counter_cross_unbal(x, y, config.length, config.k, p, rng)
    else:
        p = 0.0
        child = counter_cross(x, y, config.k, rng)
    child = swap_mutation(child, config.p_m, rng)
    offspring = _make_individual(child, config, p)
    population[ranked[-1]] = offspring
    if schedule is not None:
        schedule.record_evaluations(1)
    return offspring


@dataclass
class RunResult:
    """Outcome of one :func:`ga_run`.

    ``best_balanced_nonlinearity`` only ever counts individuals of weight
    exactly ``2**(n-1)``; it is ``None`` if none was evaluated. ``evals_to_best``
    is the evaluation index at which that value was first reached.
    """

    config: GaConfig
    seed: int
    best_individual: Individual
    best_balanced_nonlinearity: Optional[int]
    best_balanced_table: Optional[tuple[int, ...]]
    evals_to_best: Optional[int]
    evaluations_used: int
    best_fitness_trace: list[tuple[int, float]]
    balanced_nl_trace: list[tuple[int, int]]
    cools_applied: int
    final_p: float
    wallclock: float = field(default=0.0, compare=False)


class _Tracker:
    def __init__(self, balanced_weight: int):
        self.balanced_weight = balanced_weight
        self.evaluations = 0
        self.best: Optional[Individual] = None
        self.best_balanced_nl: Optional[int] = None
        self.best_balanced_bits = None
        self.evals_to_best = None
        self.fitness_trace: list[tuple[int, float]] = []
        self.balanced_trace: list[tuple[int, int]] = []

    def observe(self, ind: Individual):
        self.evaluations += 1
        if self.best is None or ind.fitness > self.best.fitness:
            self.best = ind
            self.fitness_trace.append((self.evaluations, ind.fitness))
        if ind.weight == self.balanced_weight and (
            self.best_balanced_nl is None or ind.nonlinearity > self.best_balanced_nl
        ):
            self.best_balanced_nl = ind.nonlinearity
            self.best_balanced_bits = ind.bits
            self.evals_to_best = self.evaluations
            self.balanced_trace.append((self.evaluations, ind.nonlinearity))


def ga_run(config: GaConfig) -> RunResult:
    """Run the GA until ``config.budget`` fitness evaluations are spent.

    The initial population counts against the budget. Identical configs give
    identical results (wallclock aside).
    """
    start = time.perf_counter()
    rng = RandomSource(config.seed)
    schedule = None
    if config.crossover is CrossoverKind.ADAPTIVE:
        schedule = BiasSchedule(config.p0, config.alpha, config.interval_m)
    tracker = _Tracker(config.length // 2)

    population = init_population(config, rng)
    for ind in population:
        tracker.observe(ind)
    if schedule is not None:
        schedule.record_evaluations(len(population))

    for _ in range(config.budget - config.pop_size):
        tracker.observe(tournament_step(population, config, schedule, rng))

    return RunResult(
        config=config,
        seed=config.seed,
        best_individual=tracker.best,
        best_balanced_nonlinearity=tracker.best_balanced_nl,
        best_balanced_table=tracker.best_balanced_bits,
        evals_to_best=tracker.evals_to_best,
        evaluations_used=tracker.evaluations,
        best_fitness_trace=tracker.fitness_trace,
        balanced_nl_trace=tracker.balanced_trace,
        cools_applied=schedule.updates_applied if schedule else 0,
        final_p=schedule.current_p if schedule else 0.0,
        wallclock=time.perf_counter() - start,
    )
