"""Acceptance checks reproducing the reference experiments.

Each ``criterion_*`` function runs one experiment and returns a
:class:`CriterionResult` holding one line per sub-check. The tolerances
below are fixed; they are not tuned per run.
"""

from __future__ import annotations

import itertools
import json
import math
import tempfile
import time
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np

from .calibration import (
    analytic_ladder_probabilities,
    eventual_acceptance_rate,
    load_adjusted_desk_rate,
    overall_review_acceptance,
)
from .lifecycle import run_manuscript
from .model import RoundOutcomeProbs, ScenarioConfig, Tier, TierParams, default_baseline_config, validate_config
from .scenarios import run_early_adopter, run_load_sweep, run_portfolio, run_single_tier_cohort, run_sua_cohort
from .stochastic_core import (
    derive_stream,
    sample_categorical,
    sample_poisson,
    sample_start_offset,
    sample_truncated_normal,
)

# desk-rejection rates by load as published for the AI-abuse scenario
PUBLISHED_LOAD_TABLE = {
    2: (0.85, 0.75, 0.65),
    3: (0.90, 0.833, 0.767),
    5: (0.94, 0.90, 0.86),
    10: (0.97, 0.95, 0.93),
}
SWEEP_LOADS = (1, 2, 3, 5, 10)
SWEEP_MEAN_ALL = (4.55, 3.54, 2.79, 1.95, 1.08)
SWEEP_MEAN_T1 = (1.56, 0.92, 0.65, 0.40, 0.21)
SWEEP_MEDIAN_T1 = (1, 1, 0, 0, 0)


@dataclass
class CriterionResult:
    number: int
    name: str
    details: list = field(default_factory=list)
    passed: bool = True
    seconds: float = 0.0
    budget: float | None = None

    def check(self, label: str, ok: bool, info: str = "") -> bool:
        ok = bool(ok)
        self.passed &= ok
        self.details.append(f"[{'ok' if ok else 'FAIL'}] {label}" + (f": {info}" if info else ""))
        return ok

    def within(self, label: str, value: float, target: float, tol: float) -> bool:
        return self.check(label, abs(value - target) <= tol, f"{value:.6g} vs {target:.6g} +/- {tol:.3g}")

    def line(self) -> str:
        state = "PASS" if self.passed else "FAIL"
        return f"{state} criterion {self.number:>2} {self.name} ({self.seconds:.1f}s)"


def enumerate_review_outcomes(rounds) -> float:
    """Acceptance probability by walking every accept/revise/reject sequence.

    Independent of the nested closed form: each length-3 verdict sequence is
    scored on its own and paths are cut at the first terminal verdict.
    """
    total = 0.0
    for path in itertools.product("AMR", repeat=3):
        prob = 1.0
        accepted = False
        for k, verdict in enumerate(path):
            r = rounds[k]
            prob *= {"A": r.accept, "M": r.major_revision, "R": 1.0 - r.accept - r.major_revision}[verdict]
            if verdict == "A" or (verdict == "M" and k == 2):
                accepted = True
                break
            if verdict == "R":
                break
        # a path cut at step k is counted 3^(2-k) times by product(); undo that
        weight = 3 ** (2 - k)
        if accepted:
            total += prob / weight
    return total


def _timed(number, name, budget):
    def wrap(fn):
        def run(*args, **kwargs):
            result = CriterionResult(number, name, budget=budget)
            start = time.perf_counter()
            fn(result, *args, **kwargs)
            result.seconds = time.perf_counter() - start
            if budget is not None:
                result.check(f"runtime < {budget:g}s", result.seconds < budget, f"{result.seconds:.2f}s")
            return result

        run.__name__ = fn.__name__
        return run

    return wrap


@_timed(1, "calibration exactness", 1.0)
def criterion_calibration(res: CriterionResult, workers: int = 1) -> None:
    config = default_baseline_config()
    expected_c = {Tier.T1: 0.28875, Tier.T2: 0.2465, Tier.T3: 0.3335}
    for tier in Tier:
        params = config.tier_params[tier]
        c = overall_review_acceptance(params.rounds)
        brute = enumerate_review_outcomes(params.rounds)
        res.within(f"C({tier.name}) closed form", c, expected_c[tier], 1e-12)
        res.within(f"C({tier.name}) vs enumeration", c, brute, 1e-12)
        rate = eventual_acceptance_rate(c, params.desk_reject_prob_baseline)
        res.within(f"eventual rate {tier.name}", rate, params.target_eventual_acceptance, 0.005)


@_timed(2, "load table exactness", 1.0)
def criterion_load_table(res: CriterionResult, workers: int = 1) -> None:
    config = default_baseline_config()
    for load, published in PUBLISHED_LOAD_TABLE.items():
        for tier, value in zip(Tier, published):
            p = load_adjusted_desk_rate(config.tier_params[tier].desk_reject_prob_baseline, load)
            res.within(f"p(L={load}) {tier.name}", p, value, 0.0005)
    rng = np.random.default_rng(20_240_501)
    worst = 0.0
    for p, load in zip(rng.uniform(0, 1, 1000), rng.uniform(1, 1000, 1000)):
        worst = max(worst, abs((1 - load_adjusted_desk_rate(p, load)) * load - (1 - p)))
    res.check("throughput conserved for 1000 random (p, L)", worst <= 1e-12, f"max error {worst:.2e}")


def _binomial_tol(p: float, n: int) -> float:
    return 3.0 * math.sqrt(p * (1 - p) / n)


@_timed(3, "Figure 1(A): T1 single-journal cohort", 5.0)
def criterion_cohort_t1(res: CriterionResult, workers: int = 1) -> None:
    summary = run_single_tier_cohort(10_000, Tier.T1, default_baseline_config(), workers=workers)
    res.within("acceptance rate", summary.acceptance_rate, 0.0866, 0.0084)
    res.within("median months to acceptance", summary.time_to_acceptance.median, 23.04, 1.5)


@_timed(4, "Figure 1(B): T3 single-journal cohort", 5.0)
def criterion_cohort_t3(res: CriterionResult, workers: int = 1) -> None:
    summary = run_single_tier_cohort(10_000, Tier.T3, default_baseline_config(), workers=workers)
    res.within("acceptance rate", summary.acceptance_rate, 0.2335, 0.0127)
    res.within("median months to acceptance", summary.time_to_acceptance.median, 13.65, 1.5)


def random_config(rng: np.random.Generator) -> ScenarioConfig:
    """A valid config with random desk rates, round tables, load and retry rules."""
    base = default_baseline_config()
    tiers = {}
    for tier in Tier:
        rounds = []
        for _ in range(3):
            a = rng.uniform(0, 0.6)
            rounds.append(RoundOutcomeProbs(a, rng.uniform(0, 1 - a)))
        tiers[tier] = replace(
            base.tier_params[tier],
            desk_reject_prob_baseline=float(rng.uniform(0, 0.9)),
            rounds=tuple(rounds),
        )
    policy = str(rng.choice(["terminate", "retry_limit", "unlimited"]))
    limit = [1, 2, 3, 4, None][int(rng.integers(5))]
    return replace(
        base,
        tier_params=tiers,
        external_load=float(rng.uniform(1, 4)),
        desk_retry_limit=limit,
        t3_review_reject_policy=policy,
        t3_review_retry_limit=int(rng.integers(2, 5)),
    )


@_timed(5, "Monte Carlo vs analytic ladder (20 configs)", 120.0)
def criterion_oracle(res: CriterionResult, workers: int = 1, n: int = 100_000, n_configs: int = 20) -> None:
    rng = np.random.default_rng(5)
    for i in range(n_configs):
        config = random_config(rng)
        exact = analytic_ladder_probabilities(config)
        summary = run_sua_cohort(n, config, seed=1000 + i, workers=workers)
        for tier in Tier:
            p = exact.accepted[tier]
            freq = summary.n_accepted_by_tier[tier] / n
            tol = _binomial_tol(p, n)
            res.check(
                f"config {i:2d} {tier.name}",
                abs(freq - p) <= tol,
                f"{freq:.5f} vs {p:.5f} +/- {tol:.5f}",
            )


@_timed(6, "Table 2: early adopters at L=2", 120.0)
def criterion_early_adopter(res: CriterionResult, workers: int = 1) -> None:
    base = default_baseline_config()
    baseline = run_portfolio(base, workers=workers).groups["all"]
    res.within("baseline mean accepted", baseline.accepted.mean, 4.55, 0.35)
    res.within("baseline SD accepted", baseline.accepted.sd, 2.13, 0.3)
    groups = run_early_adopter(base, workers=workers).groups
    res.check(
        "adopter/rest split 3000/27000",
        (groups["adopters"].faculty_count, groups["rest"].faculty_count) == (3000, 27000),
    )
    res.within("rest mean accepted", groups["rest"].accepted.mean, 3.53, 0.35)
    res.within("rest mean T1", groups["rest"].accepted_t1.mean, 0.91, 0.12)
    res.within("adopter mean accepted", groups["adopters"].accepted.mean, 35.33, 2.0)
    res.check(
        "pooled totals = adopters + rest",
        groups["all"].total_accepted == groups["adopters"].total_accepted + groups["rest"].total_accepted,
    )


@_timed(7, "Table 3: external load sweep", 600.0)
def criterion_sweep(res: CriterionResult, workers: int = 1) -> None:
    rows = run_load_sweep(default_baseline_config(), SWEEP_LOADS, workers=workers)
    for row, m_all, m_t1, med_t1 in zip(rows, SWEEP_MEAN_ALL, SWEEP_MEAN_T1, SWEEP_MEDIAN_T1):
        s = row.summary
        res.within(f"L={row.load:g} mean all", s.accepted.mean, m_all, 0.25)
        res.within(f"L={row.load:g} mean T1", s.accepted_t1.mean, m_t1, 0.10)
        res.check(f"L={row.load:g} median T1", s.accepted_t1.median == med_t1, f"{s.accepted_t1.median} vs {med_t1}")
    for lo, hi in zip(rows, rows[1:]):
        for label, attr in (("all", "accepted"), ("T1", "accepted_t1")):
            a, b = getattr(lo.summary, attr), getattr(hi.summary, attr)
            se = math.hypot(a.sem, b.sem)
            gap = a.mean - b.mean
            res.check(
                f"mean {label} L={lo.load:g} > L={hi.load:g} by 5 SE",
                gap >= 5 * se,
                f"gap {gap:.4f}, 5 SE {5 * se:.4f}",
            )


@_timed(8, "Figure 3: one paper per year", None)
def criterion_figure3(res: CriterionResult, workers: int = 1) -> None:
    # this figure is only matched when desk-rejected papers retry their tier without limit
    config = replace(default_baseline_config(), productivity_lambda=1.0, desk_retry_limit=None)
    s = run_portfolio(config, workers=workers).groups["all"]
    res.within("mean accepted", s.accepted.mean, 2.43, 0.25)
    res.within("mean T1", s.accepted_t1.mean, 1.18, 0.12)
    res.within("total desk rejections", s.total_desk_rejections, 554_054, 0.05 * 554_054)


@_timed(9, "determinism across worker counts", 60.0)
def criterion_determinism(res: CriterionResult, workers: int = 1) -> None:
    from .cli import main

    with tempfile.TemporaryDirectory() as tmp:
        tmp = Path(tmp)
        small = tmp / "small.json"
        small.write_text(json.dumps({"faculty_pool": 1500}), encoding="utf-8")
        commands = {
            "calibrate": ["calibrate", "--loads", "1,2,3,5,10"],
            "cohort": ["cohort", "--tier", "T1", "--n", "2000"],
            "sua": ["sua", "--n", "2000"],
            "portfolio": ["portfolio", "--config", str(small)],
            "sweep": ["sweep", "--loads", "1,10", "--config", str(small)],
        }
        for name, argv in commands.items():
            outputs = []
            for w in (1, 3):
                out = tmp / f"{name}-{w}"
                code = main(argv + ["--seed", "7", "--workers", str(w), "--out", str(out)])
                res.check(f"{name} --workers {w} exit code", code == 0, str(code))
                outputs.append({p.name: p.read_bytes() for p in sorted(out.glob("*.csv"))})
            res.check(
                f"{name} CSVs byte-identical for workers 1 and 3",
                outputs[0] == outputs[1] and len(outputs[0]) > 0,
                ", ".join(outputs[0]),
            )


def _within_se(values, mean: float, var: float) -> tuple[bool, str]:
    x = np.asarray(values, dtype=float)
    se = math.sqrt(var / x.size)
    return abs(x.mean() - mean) <= 3 * se, f"{x.mean():.5f} vs {mean:.5f} +/- {3 * se:.5f}"


def truncated_normal_mean(mean: float, sd: float) -> float:
    alpha = -mean / sd
    pdf = math.exp(-0.5 * alpha * alpha) / math.sqrt(2 * math.pi)
    sf = 0.5 * math.erfc(alpha / math.sqrt(2))
    return mean + sd * pdf / sf


def truncated_normal_var(mean: float, sd: float) -> float:
    alpha = -mean / sd
    pdf = math.exp(-0.5 * alpha * alpha) / math.sqrt(2 * math.pi)
    sf = 0.5 * math.erfc(alpha / math.sqrt(2))
    lam = pdf / sf
    return sd * sd * (1 + alpha * lam - lam * lam)


def check_trajectory(config: ScenarioConfig, outcome, trace) -> list[str]:
    """Invariant violations of one traced trajectory (empty when clean)."""
    problems = []
    clocks = [c for _, _, c in trace]
    if any(b < a for a, b in zip(clocks, clocks[1:])):
        problems.append("clock decreased")
    if outcome.elapsed_months < 0:
        problems.append("negative elapsed time")
    if outcome.status not in ("accepted", "failed", "censored"):
        problems.append(f"bad status {outcome.status}")
    if outcome.status == "accepted" and outcome.finish_month > config.horizon_months:
        problems.append("accepted after the horizon")
    limit = config.desk_retry_limit
    run_desk = 0
    rounds = 0
    prev_tier = None
    for event, tier, _ in trace:
        if tier != prev_tier:
            run_desk = 0
            prev_tier = tier
        if event == "desk_reject":
            run_desk += 1
            if limit is not None and run_desk > limit:
                problems.append(f"more than {limit} desk rejections at {tier.name}")
        elif event == "desk_pass":
            rounds = 0
        else:
            rounds += 1
            if rounds > 3:
                problems.append("more than 3 review rounds at one journal")
            if event == "reject":
                run_desk = 0
    if (
        limit is not None
        and config.t3_review_reject_policy == "terminate"
        and outcome.desk_rejection_count > 3 * limit
    ):
        problems.append("more desk rejections than the ladder allows")
    return problems


@_timed(10, "property suite", 120.0)
def criterion_properties(res: CriterionResult, workers: int = 1, n_cases: int = 1000) -> None:
    n = 1_000_000
    rng = derive_stream(10, 0)
    ok, info = _within_se([sample_poisson(2.0, rng) for _ in range(n)], 2.0, 2.0)
    res.check("Poisson(2) mean", ok, info)
    draws = [sample_truncated_normal(1.5, 0.5, rng) for _ in range(n)]
    ok, info = _within_se(draws, truncated_normal_mean(1.5, 0.5), truncated_normal_var(1.5, 0.5))
    res.check("truncated normal(1.5, 0.5) mean", ok, info)
    res.check("truncated normal draws non-negative", min(draws) >= 0)
    ok, info = _within_se([sample_start_offset(0, rng) for _ in range(n)], 6.0, 12.0)
    res.check("start offset year 0 mean", ok, info)
    counts = np.bincount([sample_categorical((0.2, 0.3, 0.5), rng) for _ in range(n)], minlength=3) / n
    res.check("categorical frequencies", np.all(np.abs(counts - (0.2, 0.3, 0.5)) <= 0.005), str(counts.round(4)))

    gen = np.random.default_rng(10)
    bad_trajectories = []
    partition_ok = True
    for case in range(n_cases):
        config = random_config(gen)
        if case % 2:
            config = replace(config, horizon_months=float(gen.uniform(1, 72)))
        stream = derive_stream(11, case)
        for m in range(5):
            trace = []
            submit = float(gen.uniform(0, min(config.horizon_months, 72) * 0.99))
            outcome = run_manuscript(submit, config, config.external_load, stream, trace=trace)
            problems = check_trajectory(config, outcome, trace)
            if problems:
                bad_trajectories.append((case, m, problems))
        if case % 50 == 0:
            summary = run_sua_cohort(20, config, seed=case)
            partition_ok &= summary.n_submitted == (
                summary.n_accepted + summary.n_desk_failed + summary.n_review_failed + summary.n_censored
            )
    res.check(
        f"trajectory invariants over {n_cases * 5} traced manuscripts",
        not bad_trajectories,
        str(bad_trajectories[:3]),
    )
    res.check("cohort partition", partition_ok)

    rejected = 0
    for case in range(n_cases):
        config = random_config(gen)
        field_name = ["external_load", "adopter_fraction", "horizon_months", "resubmission_gap_desk", "rounds"][
            case % 5
        ]
        if field_name == "rounds":
            t = Tier(1 + case % 3)
            a = float(gen.uniform(0.5, 1))
            params = replace(config.tier_params[t], rounds=((a, 1.01 - a + gen.uniform(0, 1)), (0, 0), (0, 0)))
            config = replace(config, tier_params={**config.tier_params, t: params})
        else:
            bad = {
                "external_load": gen.uniform(-5, 0.999),
                "adopter_fraction": gen.choice([-1, 1]) * gen.uniform(1.001, 5),
                "horizon_months": -gen.uniform(0, 100),
                "resubmission_gap_desk": -gen.uniform(0.001, 10),
            }[field_name]
            config = replace(config, **{field_name: float(bad)})
        violations = validate_config(config)
        key = "accept + major_revision" if field_name == "rounds" else field_name
        rejected += any(key in v for v in violations)
    res.check(f"config validation flags {n_cases} corrupted configs", rejected == n_cases, f"{rejected}/{n_cases}")


CRITERIA = (
    criterion_calibration,
    criterion_load_table,
    criterion_cohort_t1,
    criterion_cohort_t3,
    criterion_oracle,
    criterion_early_adopter,
    criterion_sweep,
    criterion_figure3,
    criterion_determinism,
    criterion_properties,
)


def run_acceptance(workers: int = 1, stream=None) -> list[CriterionResult]:
    results = []
    for criterion in CRITERIA:
        result = criterion(workers=workers)
        results.append(result)
        if stream is not None:
            print(result.line(), file=stream)
            for detail in result.details:
                if not result.passed or detail.startswith("[FAIL"):
                    print("    " + detail, file=stream)
            stream.flush()
    return results
