"""Sequential scoring-rule evaluation of competing forecasters.

Experiment settings are passed as keyword arguments with the same names as
the CLI configuration keys (example, hypothesis, score, T, R, N, M, beta,
k_u_mode, rates, seed_base, sigma, window, threads).
"""

from . import _ssre
from ._ssre import (
    PUBLISHED_UPPER_BOUNDARY,
    SCHEMA_VERSION,
    SsreError,
    boundaries,
    dm_test,
    error_rates,
    evalue_test,
    mean_evalue,
    mgf_root,
    omega_screen,
    plan_n,
    score_diff,
    ssre_run,
    wald_boundaries,
)

__all__ = [
    "PUBLISHED_UPPER_BOUNDARY",
    "SCHEMA_VERSION",
    "SsreError",
    "boundaries",
    "dm_test",
    "error_rates",
    "evalue_test",
    "mean_evalue",
    "mgf_root",
    "omega_screen",
    "plan_n",
    "replicate_table1",
    "run_experiment",
    "score_diff",
    "simulate",
    "ssre_run",
    "wald_boundaries",
]


def _config(settings):
    lines = []
    for key, value in settings.items():
        if key == "rates" and not isinstance(value, str):
            value = ",".join(repr(float(v)) for v in value)
        lines.append(f"{key} = {value}")
    return "\n".join(lines) + "\n"


def simulate(replication=0, **settings):
    """Simulated series of one replication: dict with y (and x1, x2)."""
    return _ssre.simulate(_config(settings), replication)


def run_experiment(records=False, **settings):
    """Monte Carlo study of one design cell, as a report dict."""
    return _ssre.run_experiment(_config(settings), records)


def replicate_table1(**settings):
    """All published design cells; the formatted table is under "text"."""
    return _ssre.replicate_table1(_config(settings))
