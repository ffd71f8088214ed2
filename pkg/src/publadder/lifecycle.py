"""Trajectory of a single manuscript through desk triage, review and the tier ladder."""

from __future__ import annotations

import math
from dataclasses import dataclass

from .calibration import load_adjusted_desk_rate, overall_review_acceptance
from .model import ManuscriptOutcome, ScenarioConfig, Tier, TierParams
from .stochastic_core import InvalidParameterError, RngStream, sample_truncated_normal

__all__ = [
    "ManuscriptState",
    "desk_stage",
    "review_stage",
    "run_manuscript",
    "may_not_terminate",
]

PASS, REJECT = "pass", "reject"
ACCEPT, REVISE = "accept", "revise"


@dataclass
class ManuscriptState:
    current_tier: Tier
    clock: float
    current_round: int = 1
    desk_rejections_at_tier: int = 0
    t3_review_rejections: int = 0
    desk_rejection_count: int = 0
    review_rejection_count: int = 0
    rounds_completed: int = 0


def desk_stage(state: ManuscriptState, params: TierParams, load: float, rng: RngStream) -> str:
    """One editorial triage decision. The decision time accrues either way."""
    state.clock += params.desk_decision_time
    p = load_adjusted_desk_rate(params.desk_reject_prob_baseline, load)
    if rng.uniform() < p:
        state.desk_rejections_at_tier += 1
        state.desk_rejection_count += 1
        return REJECT
    return PASS


def review_stage(state: ManuscriptState, params: TierParams, rng: RngStream) -> str:
    """One review round at ``state.current_round``.

    A major revision in rounds 1-2 adds author revision time and moves to the
    next round (returns ``"revise"``). In round 3 it is converted to an
    acceptance with no further revision time.
    """
    k = state.current_round
    state.clock += sample_truncated_normal(params.review_time_mean, params.review_time_sd, rng)
    state.rounds_completed += 1
    probs = params.rounds[k - 1]
    u = rng.uniform()
    if u < probs.accept:
        return ACCEPT
    if u < probs.accept + probs.major_revision:
        if k >= len(params.rounds):
            return ACCEPT
        state.clock += sample_truncated_normal(params.revision_time_mean, params.revision_time_sd, rng)
        state.current_round += 1
        return REVISE
    return REJECT


def may_not_terminate(config: ScenarioConfig, load: float) -> bool:
    """True if some trajectory can cycle forever when the horizon is infinite."""
    tiers = [t for t in Tier if t >= config.start_tier]
    if config.desk_retry_limit is None:
        for t in tiers:
            if load_adjusted_desk_rate(config.tier_params[t].desk_reject_prob_baseline, load) >= 1.0:
                return True
    if config.t3_review_reject_policy == "unlimited":
        t3 = config.tier_params[Tier.T3]
        p = load_adjusted_desk_rate(t3.desk_reject_prob_baseline, load)
        desk_can_fail = config.desk_retry_limit is not None and p > 0
        if not desk_can_fail and overall_review_acceptance(t3.rounds) <= 0:
            return True
    return False


def _outcome(state, submit, status, tier=None, kind=None) -> ManuscriptOutcome:
    return ManuscriptOutcome(
        status=status,
        accepted_tier=tier,
        submit_month=submit,
        finish_month=state.clock,
        desk_rejection_count=state.desk_rejection_count,
        review_rejection_count=state.review_rejection_count,
        rounds_completed=state.rounds_completed,
        failure_kind=kind,
    )


def run_manuscript(
    submit_month: float,
    config: ScenarioConfig,
    load: float,
    rng: RngStream,
    *,
    single_journal: bool = False,
    trace: list | None = None,
) -> ManuscriptOutcome:
    """Simulate one manuscript from submission to acceptance, failure or the horizon.

    With ``single_journal=True`` the manuscript gets one desk decision and at
    most one review sequence at ``config.start_tier``; any rejection is final.

    If ``trace`` is a list, ``(event, tier, clock)`` tuples are appended for
    every desk decision (``"desk_pass"``/``"desk_reject"``) and review verdict.

    Any clock advance past ``config.horizon_months`` censors the manuscript:
    its finish month is set to the horizon and no acceptance is recorded.
    """
    horizon = config.horizon_months
    if not (submit_month < horizon):
        raise InvalidParameterError(f"submit_month {submit_month} is not before the horizon {horizon}")
    if math.isinf(horizon) and not single_journal and may_not_terminate(config, load):
        raise InvalidParameterError("configuration admits trajectories that never terminate")

    limit = config.desk_retry_limit
    policy = config.t3_review_reject_policy
    state = ManuscriptState(current_tier=config.start_tier, clock=float(submit_month))

    def censored():
        state.clock = horizon
        return _outcome(state, submit_month, "censored")

    while True:
        tier = state.current_tier
        params = config.tier_params[tier]

        desk = desk_stage(state, params, load, rng)
        if trace is not None:
            trace.append(("desk_" + desk, tier, state.clock))
        if desk == REJECT:
            if state.clock > horizon:
                return censored()
            if single_journal:
                return _outcome(state, submit_month, "failed", kind="desk")
            if limit is not None and state.desk_rejections_at_tier >= limit:
                if tier is Tier.T3:
                    return _outcome(state, submit_month, "failed", kind="desk")
                state.current_tier = tier.next_down()
                state.desk_rejections_at_tier = 0
            state.clock += config.resubmission_gap_desk
            if state.clock > horizon:
                return censored()
            continue
        if state.clock > horizon:
            return censored()

        state.current_round = 1
        while True:
            verdict = review_stage(state, params, rng)
            if trace is not None:
                trace.append((verdict, tier, state.clock))
            if state.clock > horizon:
                return censored()
            if verdict == ACCEPT:
                return _outcome(state, submit_month, "accepted", tier=tier)
            if verdict == REJECT:
                break

        state.review_rejection_count += 1
        if single_journal:
            return _outcome(state, submit_month, "failed", kind="review")
        if tier is Tier.T3:
            state.t3_review_rejections += 1
            if policy == "terminate" or (
                policy == "retry_limit" and state.t3_review_rejections >= config.t3_review_retry_limit
            ):
                return _outcome(state, submit_month, "failed", kind="review")
        else:
            state.current_tier = tier.next_down()
        state.desk_rejections_at_tier = 0
        state.clock += config.resubmission_gap_review
        if state.clock > horizon:
            return censored()
