"""Transmission-probability policies for the secondary devices.

Three schemes: the adaptive one driven by the conditional interference
distribution, plain ALOHA with a fixed probability, and a hard threshold on
the raw sensor measurement.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field

import numpy as np

from . import cid
from .analytics import outage_constant
from .params import RadioParams

log = logging.getLogger(__name__)

POLICY_KINDS = ("cid", "aloha", "threshold")


@dataclass(frozen=True)
class Policy:
    """Policy selector. `aloha_p=None` uses the constraint-tight mean."""

    kind: str = "cid"
    aloha_p: float | None = None

    def __post_init__(self):
        if self.kind not in POLICY_KINDS:
            raise ValueError(f"kind must be one of {POLICY_KINDS}, got {self.kind!r}")
        if self.aloha_p is not None and not 0.0 <= self.aloha_p <= 1.0:
            raise ValueError("aloha_p must lie in [0, 1]")


@dataclass
class PolicyAssignment:
    """Per-device transmission probabilities for one slot."""

    probs: np.ndarray                 # each in [0, 1]
    weights: np.ndarray               # probability weight per device
    mean_target: float                # constraint-tight mean probability
    n_clipped: int = 0                # raw assignments clipped at 1
    decisions: np.ndarray | None = field(default=None)  # filled by the engine

    @property
    def clip_fraction(self) -> float:
        return self.n_clipped / len(self.probs) if len(self.probs) else 0.0


def mean_transmit_probability(params: RadioParams,
                              alpha_scaled_constant: bool = False) -> float:
    """Largest mean transmission probability meeting the primary outage cap.

    Clamped to [0, 1]. `alpha_scaled_constant` multiplies the outage constant
    by 2/alpha, a variant kept only for comparison; the default is the form
    consistent with the outage expression used everywhere else.
    """
    if params.lambda_s <= 0:
        raise ValueError("lambda_s must be positive")
    c = outage_constant(params.alpha)
    if alpha_scaled_constant:
        c *= 2.0 / params.alpha
    k = (params.r_p ** 2
         * (params.power_s * params.beta / params.power_p) ** (2.0 / params.alpha)
         * c)
    budget = math.log(1.0 / (1.0 - params.tau)) / k
    return float(min(1.0, max(0.0, (budget - params.lambda_p) / params.lambda_s)))


def access_weight(m: float, i_th: float, power_p: float, lambda_p: float,
                  alpha: float, d: float) -> float:
    """Probability that the device-side interference stays below the threshold.

    This is the conditional-distribution cdf evaluated at i_th for the model
    fitted to measurement m. A zero measurement means an idle band: weight 1.
    """
    if m <= 0:
        return 1.0
    model = cid.CidModel.fit(m, power_p, lambda_p, alpha, d)
    return float(model.cdf(i_th))


def access_weights(measurements, i_th: float, power_p: float, lambda_p: float,
                   alpha: float, d: float) -> np.ndarray:
    """Vectorized access_weight over an array of measurements."""
    m = np.asarray(measurements, dtype=float)
    out = np.ones(m.shape, dtype=float)
    pos = m > 0
    if not pos.any():
        return out
    mm = m[pos]
    r1 = cid.solve_nearest_distance_batch(mm, power_p, lambda_p, alpha)
    t = 2.0 * power_p * np.pi * lambda_p * r1 ** (2.0 - alpha) / (alpha - 2.0)
    x_min = power_p * (r1 + d) ** (-alpha) + t
    with np.errstate(divide="ignore"):
        x_max = np.where(r1 == d, np.inf,
                         power_p * np.abs(r1 - d) ** (-alpha) + t)
    w = np.empty(mm.shape, dtype=float)
    w[i_th <= x_min] = 0.0
    w[i_th >= x_max] = 1.0
    mid = (i_th > x_min) & (i_th < x_max)
    if d == 0.0:
        w = (i_th >= mm).astype(float)
    elif mid.any():
        s = (power_p / (i_th - t[mid])) ** (2.0 / alpha)
        arg = (r1[mid] ** 2 + d * d - s) / (2.0 * r1[mid] * d)
        w[mid] = 1.0 - np.arccos(np.clip(arg, -1.0, 1.0)) / np.pi
    out[pos] = w
    return out


def assign_probabilities(weights, mean_target: float) -> PolicyAssignment:
    """Scale weights to hit the target mean, clipping at 1.

    Normalization uses the sample mean of the supplied weights; the pass is
    single-shot, so clipping losses are reported, not re-normalized away.
    """
    w = np.asarray(weights, dtype=float)
    if len(w) == 0:
        raise ValueError("weights must be non-empty")
    if not 0.0 <= mean_target <= 1.0:
        raise ValueError("mean_target must lie in [0, 1]")
    mean_w = w.mean()
    if mean_w == 0.0:
        log.warning("all access weights are zero; falling back to the mean target")
        return PolicyAssignment(np.full(len(w), mean_target), w, mean_target, 0)
    raw = w / mean_w * mean_target
    n_clipped = int((raw > 1.0).sum())
    return PolicyAssignment(np.minimum(1.0, raw), w, mean_target, n_clipped)


def aloha_assignment(n_st: int, p: float) -> PolicyAssignment:
    """Uniform transmission probability for every device."""
    if not 0.0 <= p <= 1.0:
        raise ValueError("p must lie in [0, 1]")
    probs = np.full(n_st, float(p))
    return PolicyAssignment(probs, probs.copy(), float(p), 0)


def threshold_assignment(measurements, i_th: float) -> PolicyAssignment:
    """Transmit deterministically iff the sensor measurement is below i_th."""
    m = np.asarray(measurements, dtype=float)
    probs = (m < i_th).astype(float)
    mean_t = float(probs.mean()) if len(probs) else 0.0
    return PolicyAssignment(probs, probs.copy(), mean_t, 0)


def policy_assignment(policy: Policy, measurements, params: RadioParams) -> PolicyAssignment:
    """Dispatch to the selected scheme for one snapshot's measurements."""
    m = np.asarray(measurements, dtype=float)
    mean_p = mean_transmit_probability(params)
    if policy.kind == "cid":
        w = access_weights(m, params.i_th, params.power_p, params.lambda_p,
                           params.alpha, params.d)
        if len(w) == 0:
            return PolicyAssignment(np.zeros(0), np.zeros(0), mean_p, 0)
        return assign_probabilities(w, mean_p)
    if policy.kind == "aloha":
        return aloha_assignment(len(m), mean_p if policy.aloha_p is None else policy.aloha_p)
    return threshold_assignment(m, params.i_th)
