"""
Review-round algebra and desk rates under load
==============================================

Before running any simulation, the editorial parameters can be checked on
paper: the chance of acceptance once a manuscript is sent to review, the
end-to-end acceptance rate once desk triage is included, and how desk
rejection must rise to keep review throughput flat as submissions grow.
"""

# %%
from publadder import (
    Tier,
    analytic_ladder_probabilities,
    calibration_table,
    default_baseline_config,
    eventual_acceptance_rate,
    overall_review_acceptance,
)

config = default_baseline_config()

# %%
# Acceptance given review, and the resulting end-to-end rate per tier.
for tier in Tier:
    p = config.tier_params[tier]
    c = overall_review_acceptance(p.rounds)
    rate = eventual_acceptance_rate(c, p.desk_reject_prob_baseline)
    print(f"{tier.name}: C = {c:.5f}  eventual = {rate:.5f}  target = {p.target_eventual_acceptance}")

# %%
# Desk rejection rates that hold the reviewed volume fixed at each load.
rows = calibration_table(config, [1, 2, 3, 5, 10])
for load in (1, 2, 3, 5, 10):
    cells = "  ".join(f"{r.tier.name}={r.desk_reject_effective:.3f}" for r in rows if r.load == load)
    print(f"L={load:<3} {cells}")

# %%
# Where a single manuscript ends up if time never runs out.
for load in (1, 2, 5):
    ladder = analytic_ladder_probabilities(config, load=load)
    shares = "  ".join(f"{t.name}={ladder.accepted[t]:.4f}" for t in Tier)
    print(f"L={load}: {shares}  failed={ladder.failure:.4f}")
