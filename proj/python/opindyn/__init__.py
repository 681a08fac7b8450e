"""Biased opinion dynamics on the complete graph.

Thin wrapper over the compiled ``_core`` extension.
"""

from ._core import (
    NumericalError,
    ValidationError,
    __version__,
    estimate_consensus_time,
    estimate_exit_probability,
    exit_probabilities,
    g_k,
    h_k,
    integrate,
    mean_absorption_times,
    preset_config,
    preset_names,
    run_config,
    simulate,
    stubborn_equilibria,
    threshold_beta,
)

__all__ = [
    "NumericalError",
    "ValidationError",
    "__version__",
    "estimate_consensus_time",
    "estimate_exit_probability",
    "exit_probabilities",
    "g_k",
    "h_k",
    "integrate",
    "mean_absorption_times",
    "preset_config",
    "preset_names",
    "run_config",
    "simulate",
    "stubborn_equilibria",
    "threshold_beta",
]
