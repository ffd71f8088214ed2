"""Domain types: tiers, editorial parameters, scenario configuration, outcomes."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

__all__ = [
    "Tier",
    "RoundOutcomeProbs",
    "TierParams",
    "ScenarioConfig",
    "ManuscriptOutcome",
    "FacultyPortfolio",
    "T3_POLICIES",
    "default_baseline_config",
    "default_tier_params",
    "validate_config",
]


class Tier(enum.IntEnum):
    """Journal tier; T1 is the most selective. Lower value means higher tier."""

    T1 = 1
    T2 = 2
    T3 = 3

    def next_down(self) -> "Tier":
        if self is Tier.T3:
            raise ValueError("T3 is the bottom of the ladder")
        return Tier(self.value + 1)

    @classmethod
    def parse(cls, label) -> "Tier":
        if isinstance(label, Tier):
            return label
        try:
            return cls[str(label).upper()]
        except KeyError:
            raise ValueError(f"unknown tier {label!r}; expected T1, T2 or T3") from None


@dataclass(frozen=True)
class RoundOutcomeProbs:
    """Outcome probabilities of one review round; rejection is the remainder."""

    accept: float
    major_revision: float

    @property
    def reject(self) -> float:
        return 1.0 - self.accept - self.major_revision


@dataclass(frozen=True)
class TierParams:
    desk_reject_prob_baseline: float
    review_time_mean: float
    review_time_sd: float
    revision_time_mean: float
    revision_time_sd: float
    rounds: tuple[RoundOutcomeProbs, ...]
    desk_decision_time: float = 0.3
    # validation only; the engine never reads it
    target_eventual_acceptance: float | None = None

    def __post_init__(self):
        object.__setattr__(
            self,
            "rounds",
            tuple(r if isinstance(r, RoundOutcomeProbs) else RoundOutcomeProbs(*r) for r in self.rounds),
        )


T3_POLICIES = ("terminate", "retry_limit", "unlimited")


@dataclass(frozen=True)
class ScenarioConfig:
    """Full description of one experiment.

    ``desk_retry_limit=None`` means unlimited desk resubmissions within a tier.
    ``t3_review_retry_limit`` is read only when the T3 policy is ``"retry_limit"``
    and counts the total review rejections a manuscript may take at T3.
    ``horizon_months`` may be ``math.inf`` for completion-time analyses.
    """

    tier_params: dict
    faculty_pool: int = 30_000
    horizon_months: float = 72.0
    productivity_lambda: float = 2.0
    adopter_fraction: float = 0.0
    adopter_lambda: float = 20.0
    external_load: float = 1.0
    desk_retry_limit: int | None = 3
    t3_review_reject_policy: str = "terminate"
    t3_review_retry_limit: int = 3
    resubmission_gap_desk: float = 0.0
    resubmission_gap_review: float = 0.0
    start_tier: Tier = Tier.T1
    master_seed: int = 0

    @property
    def horizon_years(self) -> int:
        if math.isinf(self.horizon_months):
            raise ValueError("an infinite horizon has no year count")
        return math.ceil(self.horizon_months / 12.0)

    def n_adopters(self) -> int:
        return int(round(self.adopter_fraction * self.faculty_pool))


@dataclass(frozen=True)
class ManuscriptOutcome:
    status: str  # "accepted" | "failed" | "censored"
    accepted_tier: Tier | None
    submit_month: float
    finish_month: float
    desk_rejection_count: int
    review_rejection_count: int
    rounds_completed: int
    # "desk" | "review" for failed manuscripts, otherwise None
    failure_kind: str | None = None

    @property
    def elapsed_months(self) -> float:
        return self.finish_month - self.submit_month


@dataclass
class FacultyPortfolio:
    faculty_id: int
    is_adopter: bool = False
    manuscripts_generated: int = 0
    accepted_by_tier: dict = field(default_factory=lambda: {t: 0 for t in Tier})
    failed: int = 0
    desk_rejections_total: int = 0
    censored_in_flight: int = 0

    @property
    def accepted_total(self) -> int:
        return sum(self.accepted_by_tier.values())

    def record(self, outcome: ManuscriptOutcome) -> None:
        self.manuscripts_generated += 1
        self.desk_rejections_total += outcome.desk_rejection_count
        if outcome.status == "accepted":
            self.accepted_by_tier[outcome.accepted_tier] += 1
        elif outcome.status == "failed":
            self.failed += 1
        else:
            self.censored_in_flight += 1


def default_tier_params() -> dict:
    """Per-tier parameters of the baseline model."""
    return {
        Tier.T1: TierParams(
            desk_reject_prob_baseline=0.70,
            review_time_mean=6.0,
            review_time_sd=1.5,
            revision_time_mean=2.5,
            revision_time_sd=0.8,
            rounds=((0.00, 0.55), (0.05, 0.50), (0.50, 0.45)),
            target_eventual_acceptance=0.09,
        ),
        Tier.T2: TierParams(
            desk_reject_prob_baseline=0.50,
            review_time_mean=5.0,
            review_time_sd=1.2,
            revision_time_mean=2.0,
            revision_time_sd=0.6,
            rounds=((0.01, 0.55), (0.10, 0.44), (0.40, 0.35)),
            target_eventual_acceptance=0.12,
        ),
        Tier.T3: TierParams(
            desk_reject_prob_baseline=0.30,
            review_time_mean=4.0,
            review_time_sd=1.0,
            revision_time_mean=1.5,
            revision_time_sd=0.5,
            rounds=((0.02, 0.55), (0.20, 0.37), (1.00, 0.00)),
            target_eventual_acceptance=0.24,
        ),
    }


def default_baseline_config() -> ScenarioConfig:
    """Baseline scenario: 30,000 faculty, 6-year horizon, two papers a year, no load."""
    return ScenarioConfig(tier_params=default_tier_params())


def _is_prob(x) -> bool:
    return isinstance(x, (int, float)) and 0.0 <= x <= 1.0


def validate_config(config: ScenarioConfig) -> list[str]:
    """Return every invariant violation in ``config``; an empty list means valid."""
    errors = []
    if not (config.external_load >= 1):
        errors.append(f"external_load >= 1 (got {config.external_load})")
    if not _is_prob(config.adopter_fraction):
        errors.append(f"adopter_fraction in [0, 1] (got {config.adopter_fraction})")
    for name in ("resubmission_gap_desk", "resubmission_gap_review"):
        value = getattr(config, name)
        if not (value >= 0) or math.isnan(value):
            errors.append(f"{name} >= 0 (got {value})")
    if not (config.horizon_months > 0):
        errors.append(f"horizon_months > 0 (got {config.horizon_months})")
    if not (isinstance(config.faculty_pool, int) and config.faculty_pool >= 0):
        errors.append(f"faculty_pool is a nonnegative integer (got {config.faculty_pool})")
    for name in ("productivity_lambda", "adopter_lambda"):
        value = getattr(config, name)
        if not (value >= 0 and math.isfinite(value)):
            errors.append(f"{name} finite and >= 0 (got {value})")
    if config.desk_retry_limit is not None and not (
        isinstance(config.desk_retry_limit, int) and config.desk_retry_limit >= 1
    ):
        errors.append(f"desk_retry_limit >= 1 or unlimited (got {config.desk_retry_limit})")
    if config.t3_review_reject_policy not in T3_POLICIES:
        errors.append(f"t3_review_reject_policy in {T3_POLICIES} (got {config.t3_review_reject_policy!r})")
    elif config.t3_review_reject_policy == "retry_limit" and not (
        isinstance(config.t3_review_retry_limit, int) and config.t3_review_retry_limit >= 1
    ):
        errors.append(f"t3_review_retry_limit >= 1 (got {config.t3_review_retry_limit})")
    if not isinstance(config.start_tier, Tier):
        errors.append(f"start_tier is a Tier (got {config.start_tier!r})")
    if not (isinstance(config.master_seed, int) and 0 <= config.master_seed < 2**64):
        errors.append(f"master_seed is an unsigned 64-bit integer (got {config.master_seed})")

    missing = [t.name for t in Tier if t not in config.tier_params]
    if missing:
        errors.append(f"tier_params missing tiers {missing}")
    for tier, params in sorted(config.tier_params.items()):
        label = Tier(tier).name
        p = params.desk_reject_prob_baseline
        if not (isinstance(p, (int, float)) and 0.0 <= p < 1.0):
            errors.append(f"{label}: desk_reject_prob_baseline in [0, 1) (got {p})")
        if not (params.desk_decision_time >= 0):
            errors.append(f"{label}: desk_decision_time >= 0 (got {params.desk_decision_time})")
        for name in ("review_time", "revision_time"):
            mean = getattr(params, f"{name}_mean")
            sd = getattr(params, f"{name}_sd")
            if not (mean > 0 and math.isfinite(mean)):
                errors.append(f"{label}: {name}_mean > 0 (got {mean})")
            if not (sd >= 0 and math.isfinite(sd)):
                errors.append(f"{label}: {name}_sd >= 0 (got {sd})")
        if len(params.rounds) != 3:
            errors.append(f"{label}: exactly 3 review rounds (got {len(params.rounds)})")
        for k, r in enumerate(params.rounds, start=1):
            if not (r.accept >= 0):
                errors.append(f"{label} round {k}: accept >= 0 (got {r.accept})")
            if not (r.major_revision >= 0):
                errors.append(f"{label} round {k}: major_revision >= 0 (got {r.major_revision})")
            if not (r.accept + r.major_revision <= 1.0 + 1e-12):
                errors.append(
                    f"{label} round {k}: accept + major_revision <= 1 (got {r.accept + r.major_revision:g})"
                )
        t = params.target_eventual_acceptance
        if t is not None and not _is_prob(t):
            errors.append(f"{label}: target_eventual_acceptance in [0, 1] (got {t})")
    return errors
