"""Monte Carlo model of the tiered journal submission ladder.

Manuscripts move T1 -> T2 -> T3 through desk triage and up to three review
rounds; faculty write Poisson-many manuscripts per year and accumulate
acceptances over a tenure horizon. External submission load raises desk
rejection rates so that review throughput stays fixed.
"""

__version__ = "0.1.0"

from .calibration import (
    analytic_ladder_probabilities,
    calibration_table,
    eventual_acceptance_rate,
    fit_round_table,
    load_adjusted_desk_rate,
    overall_review_acceptance,
)
from .config_io import parse_config
from .lifecycle import run_manuscript
from .model import (
    ManuscriptOutcome,
    RoundOutcomeProbs,
    ScenarioConfig,
    Tier,
    TierParams,
    default_baseline_config,
    validate_config,
)
from .scenarios import (
    run_early_adopter,
    run_load_sweep,
    run_portfolio,
    run_single_tier_cohort,
    run_sua_cohort,
)
from .statistics import histogram, summarize
from .stochastic_core import InvalidParameterError, derive_stream
