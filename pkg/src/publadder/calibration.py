"""Closed-form editorial algebra and the time-free ladder oracle.

The oracle treats the tier ladder as an absorbing chain and ignores every
duration, so it gives exact per-tier acceptance probabilities against which
the Monte Carlo engine is checked (with an infinite horizon).
"""

from __future__ import annotations

from dataclasses import dataclass

from .model import RoundOutcomeProbs, ScenarioConfig, Tier
from .stochastic_core import InvalidParameterError

__all__ = [
    "CalibrationRow",
    "LadderProbabilities",
    "load_adjusted_desk_rate",
    "overall_review_acceptance",
    "eventual_acceptance_rate",
    "analytic_ladder_probabilities",
    "calibration_table",
    "fit_round_table",
]


def load_adjusted_desk_rate(p_baseline: float, load: float) -> float:
    """Desk rejection rate that keeps review throughput fixed under ``load``.

    ``1 - (1 - p_baseline) / load``: the share passed to review shrinks by
    the load factor, so the absolute number of reviewed papers is unchanged.
    """
    if not (0.0 <= p_baseline <= 1.0):
        raise InvalidParameterError(f"p_baseline must lie in [0, 1], got {p_baseline!r}")
    if not (load >= 1.0):
        raise InvalidParameterError(f"load must be >= 1, got {load!r}")
    if load == 1.0:
        return p_baseline
    return 1.0 - (1.0 - p_baseline) / load


def _check_rounds(rounds) -> tuple[RoundOutcomeProbs, ...]:
    rounds = tuple(r if isinstance(r, RoundOutcomeProbs) else RoundOutcomeProbs(*r) for r in rounds)
    if len(rounds) != 3:
        raise InvalidParameterError(f"expected 3 review rounds, got {len(rounds)}")
    for r in rounds:
        if r.accept < 0 or r.major_revision < 0 or r.accept + r.major_revision > 1.0 + 1e-12:
            raise InvalidParameterError(f"invalid round probabilities {r}")
    return rounds


def overall_review_acceptance(rounds) -> float:
    """Acceptance probability given the manuscript is sent to review.

    A major revision in the last round counts as acceptance, hence the
    ``a3 + m3`` innermost term.
    """
    r1, r2, r3 = _check_rounds(rounds)
    return r1.accept + r1.major_revision * (r2.accept + r2.major_revision * (r3.accept + r3.major_revision))


def eventual_acceptance_rate(review_acceptance: float, desk_reject: float) -> float:
    return review_acceptance * (1.0 - desk_reject)


@dataclass(frozen=True)
class LadderProbabilities:
    accepted: dict  # Tier -> probability of acceptance at that tier
    failure: float

    @property
    def total(self) -> float:
        return sum(self.accepted.values()) + self.failure


def _desk_pass_prob(p: float, limit: int | None) -> float:
    if limit is None:
        return 0.0 if p >= 1.0 else 1.0
    return 1.0 - p**limit


def analytic_ladder_probabilities(config: ScenarioConfig, load: float | None = None) -> LadderProbabilities:
    """Exact per-tier acceptance probabilities of one manuscript, ignoring time.

    At each tier the manuscript passes the desk within the retry limit with
    probability ``1 - p(L)**limit`` and is then accepted with the review
    acceptance ``C``. Everything else moves one tier down. At T3, a review
    rejection ends the manuscript, or under a retry policy sends it to a
    fresh T3 journal with its desk counter reset.
    """
    load = config.external_load if load is None else load
    accepted = {t: 0.0 for t in Tier}
    mass = 1.0
    failure = 0.0
    for tier in Tier:
        if tier < config.start_tier:
            continue
        params = config.tier_params[tier]
        p = load_adjusted_desk_rate(params.desk_reject_prob_baseline, load)
        q = _desk_pass_prob(p, config.desk_retry_limit)
        c = overall_review_acceptance(params.rounds)
        if tier is not Tier.T3:
            accepted[tier] = mass * q * c
            mass -= accepted[tier]
            continue
        win = q * c  # one T3 journal attempt ends in acceptance
        retry = q * (1.0 - c)  # one attempt ends in a review rejection
        policy = config.t3_review_reject_policy
        if policy == "terminate":
            attempts = 1
        elif policy == "retry_limit":
            attempts = config.t3_review_retry_limit
        else:
            attempts = None
        if attempts is None:
            share = win / (1.0 - retry) if retry < 1.0 else 0.0
        else:
            share = win * sum(retry**j for j in range(attempts))
        accepted[tier] = mass * share
        failure = mass - accepted[tier]
    return LadderProbabilities(accepted=accepted, failure=failure)


@dataclass(frozen=True)
class CalibrationRow:
    tier: Tier
    load: float
    desk_reject_effective: float
    overall_review_acceptance: float
    eventual_acceptance: float


def calibration_table(config: ScenarioConfig, loads) -> list[CalibrationRow]:
    """One row per (tier, load), tiers outermost."""
    rows = []
    for tier in Tier:
        params = config.tier_params[tier]
        c = overall_review_acceptance(params.rounds)
        for load in loads:
            p = load_adjusted_desk_rate(params.desk_reject_prob_baseline, load)
            rows.append(CalibrationRow(tier, load, p, c, eventual_acceptance_rate(c, p)))
    return rows


def fit_round_table(target_eventual: float, desk_reject: float, rounds, tol: float = 1e-10):
    """Rescale the round-2 and round-3 acceptance rates to hit a target eventual rate.

    The major-revision pattern and round-1 acceptance are held fixed; round
    2 and 3 acceptances are multiplied by a common factor found by bisection
    (round-3 acceptance is capped so the round stays a valid distribution).
    Returns the new round table.
    """
    r1, r2, r3 = _check_rounds(rounds)
    if not (0 <= desk_reject < 1):
        raise InvalidParameterError(f"desk_reject must lie in [0, 1), got {desk_reject!r}")
    target_c = target_eventual / (1.0 - desk_reject)

    def table(scale):
        return (
            r1,
            RoundOutcomeProbs(min(r2.accept * scale, 1.0 - r2.major_revision), r2.major_revision),
            RoundOutcomeProbs(min(r3.accept * scale, 1.0 - r3.major_revision), r3.major_revision),
        )

    lo, hi = 0.0, 1.0
    while overall_review_acceptance(table(hi)) < target_c:
        if hi > 1e6:
            raise InvalidParameterError(f"target {target_eventual} unreachable with this revision pattern")
        hi *= 2.0
    if overall_review_acceptance(table(lo)) > target_c:
        raise InvalidParameterError(f"target {target_eventual} below the round-1 floor")
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if overall_review_acceptance(table(mid)) < target_c:
            lo = mid
        else:
            hi = mid
    return table(0.5 * (lo + hi))
