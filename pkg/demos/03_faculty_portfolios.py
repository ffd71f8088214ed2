"""
Tenure portfolios with and without early AI adopters
====================================================

30,000 faculty write Poisson-many manuscripts a year for six years.
Acceptances after month 72 do not count. In the second run a tenth of the
faculty write twenty papers a year and the system runs at double load.
"""

# %%
from dataclasses import replace

from publadder import default_baseline_config, run_early_adopter, run_portfolio

config = default_baseline_config()


def show(groups):
    for g in groups.values():
        print(f"{g.group:9s} n={g.faculty_count:6d}  mean={g.accepted.mean:6.2f}  median={g.accepted.median:4.0f}  "
              f"sd={g.accepted.sd:5.2f}  T1 mean={g.accepted_t1.mean:5.2f}  desk rejections={g.total_desk_rejections}")


# %%
# One paper a year; desk-rejected papers retry their tier without limit here.
show(run_portfolio(replace(config, productivity_lambda=1.0, desk_retry_limit=None)).groups)

# %%
show(run_portfolio(config).groups)

# %%
show(run_early_adopter(config).groups)
