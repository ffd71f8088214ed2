import math
from dataclasses import replace

import pytest
from hypothesis import given, settings, strategies as st

from publadder.calibration import analytic_ladder_probabilities
from publadder.lifecycle import ManuscriptState, desk_stage, may_not_terminate, review_stage, run_manuscript
from publadder.model import RoundOutcomeProbs, Tier, default_baseline_config
from publadder.stochastic_core import InvalidParameterError, derive_stream
from publadder.validation import check_trajectory, random_config

BASE = default_baseline_config()
INF = replace(BASE, horizon_months=math.inf)


def with_tiers(config, **changes):
    return replace(config, tier_params={t: replace(p, **changes) for t, p in config.tier_params.items()})


def test_desk_stage_zero_rate_always_passes():
    params = replace(BASE.tier_params[Tier.T1], desk_reject_prob_baseline=0.0)
    rng = derive_stream(0, 0)
    for _ in range(100):
        state = ManuscriptState(Tier.T1, clock=1.0)
        assert desk_stage(state, params, 1.0, rng) == "pass"
        assert state.clock == pytest.approx(1.3)


def test_desk_stage_certain_rejection():
    params = replace(BASE.tier_params[Tier.T1], desk_reject_prob_baseline=1.0)
    state = ManuscriptState(Tier.T1, clock=0.0)
    rng = derive_stream(0, 1)
    assert all(desk_stage(state, params, 1.0, rng) == "reject" for _ in range(50))
    assert state.desk_rejections_at_tier == 50


def test_desk_stage_baseline_frequency():
    params = BASE.tier_params[Tier.T1]
    state = ManuscriptState(Tier.T1, clock=0.0)
    rng = derive_stream(0, 2)
    n = 1_000_000
    rejects = sum(desk_stage(state, params, 1.0, rng) == "reject" for _ in range(n))
    assert abs(rejects / n - 0.70) <= 0.002


def test_t1_first_round_never_accepts():
    params = BASE.tier_params[Tier.T1]
    rng = derive_stream(1, 0)
    verdicts = {review_stage(ManuscriptState(Tier.T1, 0.0), params, rng) for _ in range(5000)}
    assert verdicts == {"revise", "reject"}


def test_t3_third_round_always_accepts():
    params = BASE.tier_params[Tier.T3]
    rng = derive_stream(1, 1)
    for _ in range(1000):
        assert review_stage(ManuscriptState(Tier.T3, 0.0, current_round=3), params, rng) == "accept"


def test_forced_revisions_convert_to_acceptance_without_extra_revision_time():
    params = replace(BASE.tier_params[Tier.T1], rounds=((0, 1), (0, 1), (0, 1)), review_time_sd=0, revision_time_sd=0)
    state = ManuscriptState(Tier.T1, 0.0)
    rng = derive_stream(1, 2)
    verdicts = [review_stage(state, params, rng) for _ in range(3)]
    assert verdicts == ["revise", "revise", "accept"]
    assert state.clock == pytest.approx(3 * 6.0 + 2 * 2.5)


def test_all_desk_rejections_fail_after_nine():
    config = with_tiers(INF, desk_reject_prob_baseline=1.0)
    out = run_manuscript(0.0, config, 1.0, derive_stream(2, 0))
    assert out.status == "failed" and out.failure_kind == "desk"
    assert out.desk_rejection_count == 9
    assert out.elapsed_months == pytest.approx(2.7)


def test_forced_round_two_acceptance_timing():
    t1 = replace(
        INF.tier_params[Tier.T1],
        desk_reject_prob_baseline=0.0,
        review_time_sd=0.0,
        revision_time_sd=0.0,
        rounds=((0.0, 1.0), (1.0, 0.0), (1.0, 0.0)),
    )
    config = replace(INF, tier_params={**INF.tier_params, Tier.T1: t1})
    out = run_manuscript(0.0, config, 1.0, derive_stream(2, 1))
    assert out.status == "accepted" and out.accepted_tier is Tier.T1
    assert out.elapsed_months == pytest.approx(0.3 + 6 + 2.5 + 6)
    assert out.rounds_completed == 2


def forced_reject_then_accept(gap_desk=0.0, gap_review=0.0, policy="terminate"):
    """T1 review always rejects, T2 desk always rejects, T3 accepts on round 1."""
    t = dict(INF.tier_params)
    t[Tier.T1] = replace(t[Tier.T1], desk_reject_prob_baseline=0.0, review_time_sd=0.0, rounds=((0, 0),) * 3)
    t[Tier.T2] = replace(t[Tier.T2], desk_reject_prob_baseline=1.0)
    t[Tier.T3] = replace(t[Tier.T3], desk_reject_prob_baseline=0.0, review_time_sd=0.0, rounds=((1, 0),) * 3)
    return replace(
        INF,
        tier_params=t,
        resubmission_gap_desk=gap_desk,
        resubmission_gap_review=gap_review,
        t3_review_reject_policy=policy,
    )


def test_descent_path_and_gaps():
    out = run_manuscript(0.0, forced_reject_then_accept(), 1.0, derive_stream(3, 0))
    assert out.accepted_tier is Tier.T3
    assert out.desk_rejection_count == 3 and out.review_rejection_count == 1
    assert out.elapsed_months == pytest.approx(0.3 + 6 + 3 * 0.3 + 0.3 + 4)
    gapped = run_manuscript(0.0, forced_reject_then_accept(1.0, 2.0), 1.0, derive_stream(3, 0))
    # one review-rejection gap, three desk-rejection gaps (two within T2, one on descent)
    assert gapped.elapsed_months == pytest.approx(out.elapsed_months + 2.0 + 3 * 1.0)


def t3_always_rejects(policy, n=3):
    t = dict(INF.tier_params)
    t[Tier.T3] = replace(t[Tier.T3], desk_reject_prob_baseline=0.0, rounds=((0, 0),) * 3)
    return replace(INF, tier_params=t, start_tier=Tier.T3, t3_review_reject_policy=policy, t3_review_retry_limit=n)


def test_t3_review_rejection_policies():
    rng = derive_stream(3, 1)
    assert run_manuscript(0.0, t3_always_rejects("terminate"), 1.0, rng).review_rejection_count == 1
    out = run_manuscript(0.0, t3_always_rejects("retry_limit", 3), 1.0, rng)
    assert out.status == "failed" and out.review_rejection_count == 3


def test_non_terminating_config_is_refused():
    config = t3_always_rejects("unlimited")
    assert may_not_terminate(config, 1.0)
    with pytest.raises(InvalidParameterError):
        run_manuscript(0.0, config, 1.0, derive_stream(3, 2))
    # a finite horizon always terminates
    finite = replace(config, horizon_months=72.0)
    assert run_manuscript(0.0, finite, 1.0, derive_stream(3, 2)).status == "censored"


def test_horizon_censors_late_acceptances():
    out = run_manuscript(70.0, BASE, 1.0, derive_stream(4, 0))
    assert out.status in ("censored", "failed")
    for sid in range(200):
        o = run_manuscript(65.0, BASE, 1.0, derive_stream(4, sid))
        if o.status == "accepted":
            assert o.finish_month <= 72
        if o.status == "censored":
            assert o.finish_month == 72


def test_submit_after_horizon_raises():
    with pytest.raises(InvalidParameterError):
        run_manuscript(72.0, BASE, 1.0, derive_stream(0, 0))


def test_accepted_elapsed_floor():
    for sid in range(500):
        o = run_manuscript(0.0, INF, 1.0, derive_stream(5, sid))
        if o.status == "accepted":
            assert o.elapsed_months >= 0.3 and o.rounds_completed >= 1


@settings(max_examples=300, deadline=None)
@given(st.integers(0, 2**32), st.integers(0, 2**32), st.floats(0, 71.9))
def test_trajectory_invariants(case_seed, stream_id, submit):
    import numpy as np

    config = random_config(np.random.default_rng(case_seed))
    trace = []
    out = run_manuscript(submit, replace(config, horizon_months=72.0), config.external_load,
                         derive_stream(8, stream_id), trace=trace)
    assert check_trajectory(replace(config, horizon_months=72.0), out, trace) == []


def test_monte_carlo_matches_oracle_for_baseline_ladder():
    n = 100_000
    exact = analytic_ladder_probabilities(INF)
    counts = {t: 0 for t in Tier}
    for i in range(n):
        o = run_manuscript(0.0, INF, 1.0, derive_stream(77, i))
        if o.status == "accepted":
            counts[o.accepted_tier] += 1
    for t in Tier:
        p = exact.accepted[t]
        assert abs(counts[t] / n - p) <= 3 * math.sqrt(p * (1 - p) / n)
