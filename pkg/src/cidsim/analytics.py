"""Closed-form success/outage probabilities and area spectral efficiency.

These are the standard Rayleigh-fading Poisson-field expressions with the
whole interferer population carried at a single substituted power: the
primary-side power for the secondary link and vice versa. The Monte Carlo
engine's per-transmitter accounting deviates from them whenever the two
transmit powers differ; `accounting="single-power"` makes the simulator
match these formulas' assumptions.
"""
from __future__ import annotations

import math

import numpy as np
from scipy.special import gamma

from .params import RadioParams


def outage_constant(alpha: float) -> float:
    """(2 pi / alpha) * Gamma(2/alpha) * Gamma(1 - 2/alpha); poles at alpha <= 2."""
    if not alpha > 2:
        raise ValueError("alpha must exceed 2 (Gamma pole at alpha = 2)")
    return 2.0 * math.pi / alpha * float(gamma(2.0 / alpha)) * float(gamma(1.0 - 2.0 / alpha))


def secondary_success_probability(params: RadioParams, mean_p: float) -> float:
    """P{SIR > beta} for a secondary link with mean device activity mean_p."""
    _check_mean_p(mean_p)
    expo = ((params.lambda_p + params.lambda_s * mean_p)
            * params.r_s ** 2
            * (params.power_p * params.beta / params.power_s) ** (2.0 / params.alpha)
            * outage_constant(params.alpha))
    return float(np.exp(-expo))


def primary_outage_probability(params: RadioParams, mean_p: float) -> float:
    """P{SIR <= beta} for a primary link with mean device activity mean_p."""
    _check_mean_p(mean_p)
    expo = ((params.lambda_p + params.lambda_s * mean_p)
            * params.r_p ** 2
            * (params.power_s * params.beta / params.power_p) ** (2.0 / params.alpha)
            * outage_constant(params.alpha))
    return float(1.0 - np.exp(-expo))


def ase_closed_form(params: RadioParams, mean_p: float) -> float:
    """Area spectral efficiency: density * activity * success * log(1 + beta)."""
    p_s = secondary_success_probability(params, mean_p)
    rate = math.log(1.0 + params.beta) / math.log(params.log_base)
    return params.lambda_s * mean_p * p_s * rate


def _check_mean_p(mean_p: float) -> None:
    if not 0.0 <= mean_p <= 1.0:
        raise ValueError(f"mean_p must lie in [0, 1], got {mean_p}")
