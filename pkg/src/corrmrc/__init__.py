"""Dual-branch MRC success probability under spatially correlated Poisson
interference with Nakagami fading.

Analytic engines (exact semi-numerical result, full-/no-correlation models,
noise-limited and low-outage limits, SC/MMSE combining, transmission
capacity) plus a seeded Monte Carlo point-process oracle.
"""
from ._kernels import BACKEND as KERNEL_BACKEND
from .core import (
    ConfigError,
    DomainError,
    McEstimate,
    SuccessResult,
    SystemConfig,
    validate,
)
from .analytic import (
    AsymptoticTerms,
    EvalSettings,
    InfeasibleError,
    delta_fc,
    delta_mrc_sa,
    diversity_gain_db,
    p_blind_asymptotic,
    p_mmse,
    p_mrc_asymptotic,
    p_mrc_exact,
    p_mrc_fc,
    p_mrc_nc,
    p_mrc_special_a4_m1,
    p_noise_limited,
    p_sc,
    transmission_capacity,
)
from .montecarlo import SimSettings, TrialDraw, estimate_success, sample_trial

__version__ = "0.1.0"

__all__ = [
    "KERNEL_BACKEND",
    "SystemConfig",
    "SuccessResult",
    "McEstimate",
    "EvalSettings",
    "AsymptoticTerms",
    "SimSettings",
    "TrialDraw",
    "DomainError",
    "ConfigError",
    "InfeasibleError",
    "validate",
    "p_mrc_exact",
    "p_mrc_special_a4_m1",
    "p_mrc_fc",
    "p_mrc_nc",
    "p_noise_limited",
    "p_mrc_asymptotic",
    "p_blind_asymptotic",
    "p_sc",
    "p_mmse",
    "diversity_gain_db",
    "delta_fc",
    "delta_mrc_sa",
    "transmission_capacity",
    "estimate_success",
    "sample_trial",
]
