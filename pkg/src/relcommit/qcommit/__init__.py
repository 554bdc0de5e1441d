"""Two-basis (BB84-style) quantum commitment: honest simulation and bounds."""
from relcommit.qcommit.bounds import (
    SWEEP_FIELDS,
    EpsilonBound,
    Feasibility,
    InfeasibleError,
    MultiphotonEpsilon,
    combined_margin,
    effective_delta,
    epsilon_bound,
    feasibility,
    feasibility_sweep,
    log_binomial_cdf,
    multiphoton_epsilon,
    multiphoton_probability,
    rows_to_csv,
)
from relcommit.qcommit.honest import (
    DelayedCommitment,
    QcommitRun,
    accept_rate,
    delayed_commit_run,
    equalisation_keep_probability,
    honest_run,
    reported_click_probability,
)
from relcommit.qcommit.states import BasisPair, DeviceModel

__all__ = [
    "BasisPair", "DeviceModel", "QcommitRun", "DelayedCommitment", "honest_run", "accept_rate",
    "delayed_commit_run", "equalisation_keep_probability", "reported_click_probability",
    "EpsilonBound", "MultiphotonEpsilon", "Feasibility", "InfeasibleError", "SWEEP_FIELDS",
    "epsilon_bound", "multiphoton_epsilon", "multiphoton_probability", "effective_delta",
    "feasibility", "feasibility_sweep", "combined_margin", "log_binomial_cdf", "rows_to_csv",
]
