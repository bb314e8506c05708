"""Scenario configuration and shared result types.

All quantities are kept in linear units internally (the CLI converts dB at
its boundary).  Types are frozen dataclasses: immutable after construction
and safe to share across concurrent workers.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, replace


class DomainError(ValueError):
    """An input lies outside the domain an operation is defined on."""


class ConfigError(DomainError):
    """A scenario configuration violates a model constraint."""


MODEL_TAGS = ("exact", "fc", "nc", "asym", "blind", "sc", "mmse", "noise_limited")


@dataclass(frozen=True)
class SystemConfig:
    """One interference scenario.

    lam    -- interferer density (interferers per unit area)
    alpha  -- path-loss exponent; must exceed 2 so the aggregate
              interference is a.s. finite
    d      -- desired-link distance
    m_d    -- Nakagami parameter of the desired links (positive integer;
              the exact dual-branch result requires integer m_d)
    m_i    -- Nakagami parameter of the interfering links (real >= 1/2)
    snr    -- average signal-to-noise ratio, linear scale; math.inf means
              no receiver noise
    """

    lam: float
    alpha: float
    d: float
    m_d: int
    m_i: float
    snr: float = math.inf

    def with_lam(self, lam: float) -> "SystemConfig":
        return replace(self, lam=lam)


def validate(cfg: SystemConfig) -> SystemConfig:
    """Return ``cfg`` unchanged if every model constraint holds.

    Raises ConfigError naming the violated constraint otherwise.  The check
    is idempotent, and every analytic or simulation entry point applies it.
    """
    if not (cfg.alpha > 2):
        raise ConfigError(f"alpha must exceed 2 (got {cfg.alpha})")
    if not (isinstance(cfg.m_d, int) and not isinstance(cfg.m_d, bool) and cfg.m_d >= 1):
        raise ConfigError(f"m_d must be a positive integer (got {cfg.m_d!r})")
    if not (cfg.m_i >= 0.5):
        raise ConfigError(f"m_i must be >= 1/2 (got {cfg.m_i})")
    if not (cfg.lam > 0):
        raise ConfigError(f"lambda must be positive (got {cfg.lam})")
    if not (cfg.d > 0):
        raise ConfigError(f"d must be positive (got {cfg.d})")
    if not (cfg.snr > 0):  # math.inf passes
        raise ConfigError(f"snr must be positive or infinite (got {cfg.snr})")
    return cfg


@dataclass(frozen=True)
class SuccessResult:
    """A success probability plus numerical diagnostics.

    ``p`` is clamped to [0, 1]; ``clamped`` records whether clamping fired
    (quadrature noise near p ~ 1 can overshoot by well under 1e-9, which is
    not worth an exception).  ``abs_err_est`` is an estimated absolute
    numerical error of ``p``.
    """

    p: float
    abs_err_est: float
    model_tag: str
    clamped: bool = False


def make_success_result(p_raw: float, abs_err_est: float, model_tag: str) -> SuccessResult:
    if model_tag not in MODEL_TAGS:
        raise ValueError(f"unknown model tag {model_tag!r}")
    p_raw = float(p_raw)
    p = min(1.0, max(0.0, p_raw))
    return SuccessResult(
        p=p,
        abs_err_est=abs(float(abs_err_est)),
        model_tag=model_tag,
        clamped=(p != p_raw),
    )


@dataclass(frozen=True)
class McEstimate:
    """Monte Carlo estimate of a success probability.

    ``seed`` is the 64-bit reproducibility token: the same (seed, trials,
    scenario, threshold) always yields the identical estimate.
    """

    mean: float
    std_err: float
    trials: int
    seed: int
