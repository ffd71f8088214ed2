"""Cohort and faculty-population experiments built on the manuscript engine.

Each cohort manuscript and each faculty member owns one random stream keyed
by its index, so results do not depend on how the work is split across
worker processes.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace

import numpy as np

from .lifecycle import run_manuscript
from .model import FacultyPortfolio, ManuscriptOutcome, ScenarioConfig, Tier
from .statistics import Histogram, SummaryStats, histogram, summarize
from .stochastic_core import InvalidParameterError, derive_stream, sample_poisson, sample_start_offset

__all__ = [
    "CohortSummary",
    "PopulationSummary",
    "PortfolioResult",
    "SweepRow",
    "run_single_tier_cohort",
    "run_sua_cohort",
    "run_portfolio",
    "run_early_adopter",
    "run_load_sweep",
]

HISTOGRAM_BIN_MONTHS = 1.0


@dataclass(frozen=True)
class CohortSummary:
    n_submitted: int
    n_accepted_by_tier: dict
    n_desk_failed: int
    n_review_failed: int
    n_censored: int
    time_to_acceptance: SummaryStats
    elapsed_histogram: Histogram

    @property
    def n_accepted(self) -> int:
        return sum(self.n_accepted_by_tier.values())

    @property
    def acceptance_rate(self) -> float:
        return self.n_accepted / self.n_submitted


def _summarize_cohort(outcomes: list[ManuscriptOutcome]) -> CohortSummary:
    by_tier = {t: 0 for t in Tier}
    desk = review = censored = 0
    times = []
    for o in outcomes:
        if o.status == "accepted":
            by_tier[o.accepted_tier] += 1
            times.append(o.elapsed_months)
        elif o.status == "censored":
            censored += 1
        elif o.failure_kind == "desk":
            desk += 1
        else:
            review += 1
    return CohortSummary(
        n_submitted=len(outcomes),
        n_accepted_by_tier=by_tier,
        n_desk_failed=desk,
        n_review_failed=review,
        n_censored=censored,
        time_to_acceptance=summarize(times),
        elapsed_histogram=histogram(times, HISTOGRAM_BIN_MONTHS),
    )


def _chunks(n: int, workers: int) -> list[tuple[int, int]]:
    parts = max(1, min(n, workers * 4))
    edges = np.linspace(0, n, parts + 1).round().astype(int)
    return [(int(a), int(b)) for a, b in zip(edges[:-1], edges[1:]) if b > a]


def _map_chunks(fn, n: int, workers: int, *args) -> list:
    """Run ``fn(*args, start, stop)`` over contiguous index ranges, concatenated in order."""
    chunks = _chunks(n, workers)
    if workers <= 1 or len(chunks) <= 1:
        parts = [fn(*args, a, b) for a, b in chunks]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            futures = [pool.submit(fn, *args, a, b) for a, b in chunks]
            parts = [f.result() for f in futures]
    return [item for part in parts for item in part]


def _cohort_chunk(config, load, seed, single_journal, start, stop):
    return [
        run_manuscript(0.0, config, load, derive_stream(seed, i), single_journal=single_journal)
        for i in range(start, stop)
    ]


def _seed(config: ScenarioConfig, seed) -> int:
    return config.master_seed if seed is None else int(seed)


def run_single_tier_cohort(
    n: int, tier, config: ScenarioConfig, seed: int | None = None, *, workers: int = 1
) -> CohortSummary:
    """``n`` manuscripts sent once to a journal of ``tier``; no resubmission, no horizon."""
    if n < 1:
        raise InvalidParameterError("cohort size must be >= 1")
    cfg = replace(config, start_tier=Tier.parse(tier), horizon_months=math.inf)
    outcomes = _map_chunks(_cohort_chunk, n, workers, cfg, cfg.external_load, _seed(config, seed), True)
    return _summarize_cohort(outcomes)


def run_sua_cohort(n: int, config: ScenarioConfig, seed: int | None = None, *, workers: int = 1) -> CohortSummary:
    """Submit-until-acceptance: the full ladder for each of ``n`` manuscripts, no horizon."""
    if n < 1:
        raise InvalidParameterError("cohort size must be >= 1")
    cfg = replace(config, horizon_months=math.inf)
    outcomes = _map_chunks(_cohort_chunk, n, workers, cfg, cfg.external_load, _seed(config, seed), False)
    return _summarize_cohort(outcomes)


@dataclass(frozen=True)
class PopulationSummary:
    group: str  # "all" | "adopters" | "rest"
    faculty_count: int
    accepted: SummaryStats
    accepted_t1: SummaryStats
    total_accepted: int
    total_accepted_t1: int
    total_desk_rejections: int


@dataclass(frozen=True)
class PortfolioResult:
    groups: dict  # label -> PopulationSummary
    faculty: list  # FacultyPortfolio in faculty_id order


def _faculty_chunk(config: ScenarioConfig, seed: int, start: int, stop: int) -> list[FacultyPortfolio]:
    load = config.external_load
    horizon = config.horizon_months
    years = config.horizon_years
    n_adopters = config.n_adopters()
    out = []
    for fid in range(start, stop):
        rng = derive_stream(seed, fid)
        adopter = fid < n_adopters
        lam = config.adopter_lambda if adopter else config.productivity_lambda
        record = FacultyPortfolio(fid, is_adopter=adopter)
        for year in range(years):
            for _ in range(sample_poisson(lam, rng)):
                submit = sample_start_offset(year, rng, years)
                if submit >= horizon:
                    continue
                record.record(run_manuscript(submit, config, load, rng))
        out.append(record)
    return out


def _population(group: str, faculty: list[FacultyPortfolio]) -> PopulationSummary:
    totals = [f.accepted_total for f in faculty]
    t1 = [f.accepted_by_tier[Tier.T1] for f in faculty]
    return PopulationSummary(
        group=group,
        faculty_count=len(faculty),
        accepted=summarize(totals),
        accepted_t1=summarize(t1),
        total_accepted=sum(totals),
        total_accepted_t1=sum(t1),
        total_desk_rejections=sum(f.desk_rejections_total for f in faculty),
    )


def run_portfolio(config: ScenarioConfig, seed: int | None = None, *, workers: int = 1) -> PortfolioResult:
    """Simulate every faculty member's manuscripts over the tenure horizon.

    The first ``round(adopter_fraction * faculty_pool)`` faculty ids are
    adopters. Each year a faculty member writes a Poisson number of
    manuscripts, each submitted at a uniform time within that year.
    """
    if math.isinf(config.horizon_months):
        raise InvalidParameterError("portfolio runs need a finite horizon")
    faculty = _map_chunks(_faculty_chunk, config.faculty_pool, workers, config, _seed(config, seed))
    groups = {"all": _population("all", faculty)}
    if config.n_adopters() > 0:
        groups["adopters"] = _population("adopters", [f for f in faculty if f.is_adopter])
        groups["rest"] = _population("rest", [f for f in faculty if not f.is_adopter])
    return PortfolioResult(groups, faculty)


def run_early_adopter(
    config: ScenarioConfig,
    seed: int | None = None,
    *,
    adopter_fraction: float = 0.10,
    adopter_lambda: float = 20.0,
    load: float = 2.0,
    workers: int = 1,
) -> PortfolioResult:
    """Portfolio run where a fixed share of faculty write ``adopter_lambda`` papers a year
    and the whole system runs at ``load``."""
    cfg = replace(config, adopter_fraction=adopter_fraction, adopter_lambda=adopter_lambda, external_load=load)
    return run_portfolio(cfg, seed, workers=workers)


@dataclass(frozen=True)
class SweepRow:
    load: float
    summary: PopulationSummary


def run_load_sweep(config: ScenarioConfig, loads, seed: int | None = None, *, workers: int = 1) -> list[SweepRow]:
    """One adopter-free portfolio per external load.

    All loads share the master seed (common random numbers), so the L=1 row
    equals a plain portfolio run with the same seed.
    """
    rows = []
    for load in loads:
        if not (load >= 1):
            raise InvalidParameterError(f"load must be >= 1, got {load!r}")
        cfg = replace(config, adopter_fraction=0.0, external_load=load)
        rows.append(SweepRow(load, run_portfolio(cfg, seed, workers=workers).groups["all"]))
    return rows
