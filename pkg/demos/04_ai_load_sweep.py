"""
Faculty output as external submission load grows
================================================

AI-generated volume is modelled as an external load factor. Only desk
rejection reacts; review times and round outcomes stay as in the baseline.
"""

# %%
from publadder import default_baseline_config, run_load_sweep

rows = run_load_sweep(default_baseline_config(), [1, 2, 3, 5, 10])

# %%
print(" L   mean  median   sd   | T1 mean  median   sd")
for r in rows:
    a, t = r.summary.accepted, r.summary.accepted_t1
    print(f"{r.load:>2g}  {a.mean:5.2f}  {a.median:5.0f}  {a.sd:5.2f} | {t.mean:6.2f}  {t.median:5.0f}  {t.sd:5.2f}")
