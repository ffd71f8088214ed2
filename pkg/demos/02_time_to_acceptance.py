"""
How long does a paper take?
===========================

10,000 manuscripts are sent once to a T1 journal and, separately, once to
a T3 journal, with no resubmission. A third cohort keeps walking down the
ladder until it is accepted or runs out of options.
"""

# %%
from publadder import Tier, default_baseline_config, run_single_tier_cohort, run_sua_cohort

config = default_baseline_config()


def show(label, summary):
    t = summary.time_to_acceptance
    print(f"{label}: accepted {summary.n_accepted} / {summary.n_submitted} "
          f"(desk {summary.n_desk_failed}, review {summary.n_review_failed}), "
          f"median {t.median:.2f} months")
    peak = max(c for _, c in summary.elapsed_histogram.bins)
    for lo, count in summary.elapsed_histogram.bins:
        if count:
            print(f"  {lo:5.0f} | {'#' * max(1, round(40 * count / peak))}")


# %%
show("T1 only", run_single_tier_cohort(10_000, Tier.T1, config))

# %%
show("T3 only", run_single_tier_cohort(10_000, Tier.T3, config))

# %%
sua = run_sua_cohort(10_000, config)
print({t.name: n for t, n in sua.n_accepted_by_tier.items()}, "median", round(sua.time_to_acceptance.median, 2))
