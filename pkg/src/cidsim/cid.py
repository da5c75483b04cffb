"""Conditional interference distribution at a device near a sensor.

Given a sensor that measures aggregate interference m from a field of
primary transmitters, the distribution of interference at a device a fixed
distance d away is approximated by treating the nearest transmitter (at the
distance solved from m) as the only random contributor -- via the uniform
angle it makes with the device -- and replacing everything farther out by
its mean. The resulting distribution has closed-form support, cdf, pdf and
an exact inverse-transform sampler.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
from scipy import integrate

# Tolerance for arccos arguments drifting past [-1, 1]; anything beyond is
# counted here and still clamped (support endpoints are exact zeros of the
# radicand, so floating noise is expected).
ARCCOS_SLOP = 1e-9
_clamp_events = {"count": 0}


def clamp_event_count() -> int:
    return _clamp_events["count"]


def reset_clamp_events() -> None:
    _clamp_events["count"] = 0


def mean_residual_interference(r1: float, power_p: float, lambda_p: float,
                               alpha: float) -> float:
    """Mean interference from all transmitters beyond radius r1.

    Equals the field-density integral of the unbounded pathloss over the
    annulus [r1, inf): 2 * P * pi * lambda * r1^(2-alpha) / (alpha - 2).
    """
    if not alpha > 2:
        raise ValueError("alpha must exceed 2")
    if r1 <= 0:
        raise ValueError("r1 must be positive")
    return 2.0 * power_p * math.pi * lambda_p * r1 ** (2.0 - alpha) / (alpha - 2.0)


def _measurement_at(r, power_p, lambda_p, alpha):
    """Nearest-contributor power plus residual mean, as a function of r."""
    return (power_p * r ** (-alpha)
            + 2.0 * power_p * np.pi * lambda_p * r ** (2.0 - alpha) / (alpha - 2.0))


def solve_nearest_distance(m: float, power_p: float, lambda_p: float,
                           alpha: float, rel_tol: float = 1e-12,
                           max_iter: int = 200) -> float:
    """Distance of the nearest transmitter consistent with measurement m.

    Solves P r^-alpha + residual(r) = m. The left side decreases strictly
    from +inf to 0, so a bracketing bisection is unconditionally convergent.
    The zero-density solution (P/m)^(1/alpha) is always a lower bracket.
    """
    if m <= 0:
        raise ValueError("measurement must be positive")
    if power_p <= 0:
        raise ValueError("power must be positive")
    if lambda_p < 0:
        raise ValueError("density must be non-negative")
    if not alpha > 2:
        raise ValueError("alpha must exceed 2")
    lo = (power_p / m) ** (1.0 / alpha)
    if lambda_p == 0.0:
        return lo
    g = lambda r: _measurement_at(r, power_p, lambda_p, alpha) - m
    hi = lo
    for _ in range(max_iter):
        hi *= 2.0
        if g(hi) < 0.0:
            break
    else:
        raise RuntimeError("bracket expansion failed")
    for _ in range(max_iter):
        mid = 0.5 * (lo + hi)
        if g(mid) >= 0.0:
            lo = mid
        else:
            hi = mid
        if hi - lo <= rel_tol * lo:
            break
    return 0.5 * (lo + hi)


def solve_nearest_distance_batch(m: np.ndarray, power_p: float, lambda_p: float,
                                 alpha: float, n_iter: int = 100) -> np.ndarray:
    """Vectorized bisection over an array of measurements (all must be > 0)."""
    m = np.asarray(m, dtype=float)
    if np.any(m <= 0):
        raise ValueError("measurements must be positive")
    lo = (power_p / m) ** (1.0 / alpha)
    if lambda_p == 0.0:
        return lo
    hi = lo.copy()
    for _ in range(200):
        open_ = _measurement_at(hi, power_p, lambda_p, alpha) >= m
        if not open_.any():
            break
        hi[open_] *= 2.0
    for _ in range(n_iter):
        mid = 0.5 * (lo + hi)
        above = _measurement_at(mid, power_p, lambda_p, alpha) >= m
        lo = np.where(above, mid, lo)
        hi = np.where(above, hi, mid)
    return 0.5 * (lo + hi)


def nearest_distance_alpha4(m: float, power_p: float, lambda_p: float) -> float:
    """Closed form of the nearest-distance equation for alpha = 4."""
    if m <= 0:
        raise ValueError("measurement must be positive")
    a = power_p * math.pi * lambda_p
    return math.sqrt((a + math.sqrt(a * a + 4.0 * m * power_p)) / (2.0 * m))


class Moments(NamedTuple):
    mean: float
    variance: float
    skewness: float
    converged: bool


@dataclass(frozen=True)
class CidModel:
    """Fitted conditional interference distribution for one measurement."""

    m: float          # sensor measurement (W)
    power_p: float    # primary transmit power (W)
    lambda_p: float   # primary density (1/m^2)
    alpha: float      # pathloss exponent
    d: float          # device <-> sensor distance (m)
    r1_hat: float     # solved nearest-transmitter distance (m)
    t_resid: float    # mean residual interference (W)
    x_min: float      # support lower edge (W)
    x_max: float      # support upper edge (W); inf when r1_hat == d

    @classmethod
    def fit(cls, m: float, power_p: float, lambda_p: float, alpha: float,
            d: float) -> "CidModel":
        if d < 0:
            raise ValueError("d must be non-negative")
        r1 = solve_nearest_distance(m, power_p, lambda_p, alpha)
        t = mean_residual_interference(r1, power_p, lambda_p, alpha)
        resid = abs(power_p * r1 ** (-alpha) + t - m)
        if resid > 1e-10 * m:
            raise RuntimeError(f"root residual {resid:.3e} exceeds tolerance")
        if d == 0.0:
            x_min = x_max = m
        elif r1 == d:
            x_min = power_p * (r1 + d) ** (-alpha) + t
            x_max = math.inf
        else:
            x_min = power_p * (r1 + d) ** (-alpha) + t
            x_max = power_p * abs(r1 - d) ** (-alpha) + t
        return cls(m, power_p, lambda_p, alpha, d, r1, t, x_min, x_max)

    @property
    def nearest_inside_device_radius(self) -> bool:
        """True when the solved nearest transmitter sits closer than the device."""
        return self.r1_hat < self.d

    def support_bounds(self) -> tuple[float, float]:
        return self.x_min, self.x_max

    def interference_at_angle(self, theta):
        """Interference for a given sensor->transmitter/device angle.

        The device sits at distance d from the sensor, the nearest transmitter
        at r1_hat; their separation follows from the law of cosines. Angle pi
        gives x_min, angle 0 gives x_max.
        """
        theta = np.asarray(theta, dtype=float)
        r2_sq = (self.r1_hat ** 2 + self.d ** 2
                 - 2.0 * self.r1_hat * self.d * np.cos(theta))
        with np.errstate(divide="ignore"):
            x = self.t_resid + self.power_p * r2_sq ** (-self.alpha / 2.0)
        return x if x.shape else float(x)

    def cdf(self, x):
        """P{interference <= x | measurement}. Non-decreasing, 0/1 outside support."""
        x = np.asarray(x, dtype=float)
        scalar = x.ndim == 0
        xv = np.atleast_1d(x)
        if self.d == 0.0:
            out = np.where(xv >= self.m, 1.0, 0.0)
            return float(out[0]) if scalar else out
        out = np.empty(xv.shape, dtype=float)
        lo = xv <= self.x_min
        hi = xv >= self.x_max
        mid = ~(lo | hi)
        out[lo] = 0.0
        out[hi] = 1.0
        if mid.any():
            s = (self.power_p / (xv[mid] - self.t_resid)) ** (2.0 / self.alpha)
            arg = (self.r1_hat ** 2 + self.d ** 2 - s) / (2.0 * self.r1_hat * self.d)
            beyond = (np.abs(arg) > 1.0 + ARCCOS_SLOP).sum()
            if beyond:
                _clamp_events["count"] += int(beyond)
            out[mid] = 1.0 - np.arccos(np.clip(arg, -1.0, 1.0)) / np.pi
        return float(out[0]) if scalar else out

    def pdf(self, x):
        """Density on the open support; diverges integrably at both edges."""
        x = np.asarray(x, dtype=float)
        if np.any(x <= self.x_min) or np.any(x >= self.x_max):
            raise ValueError("pdf is defined on the open support (x_min, x_max)")
        xt = x - self.t_resid
        num = (self.power_p / (np.pi * self.d * self.r1_hat * self.alpha * xt ** 2)
               * (self.power_p / xt) ** (2.0 / self.alpha - 1.0))
        s = (self.power_p / xt) ** (2.0 / self.alpha)
        rad = 1.0 - (self.r1_hat ** 2 + self.d ** 2 - s) ** 2 / (
            4.0 * self.d ** 2 * self.r1_hat ** 2)
        out = num / np.sqrt(rad)
        return out if out.shape else float(out)

    def quantile(self, q):
        """Exact inverse cdf via the angle parameterization."""
        q = np.asarray(q, dtype=float)
        if np.any((q < 0) | (q > 1)):
            raise ValueError("quantile levels must lie in [0, 1]")
        return self.interference_at_angle(np.pi * (1.0 - q))

    def sample(self, rng: np.random.Generator, size=None):
        """Inverse-transform draws: uniform angle through the geometry map."""
        theta = rng.uniform(0.0, np.pi, size)
        return self.interference_at_angle(theta)

    def moments(self) -> Moments:
        """Mean, variance, skewness by quadrature in angle space.

        Integrating over the angle avoids the inverse-square-root endpoint
        singularities of the density. With an infinite support edge
        (r1_hat == d) the integrals may diverge; that is reported through
        `converged` rather than raised.
        """
        if self.d == 0.0:
            return Moments(self.m, 0.0, math.nan, True)
        raw = []
        ok = True
        for k in (1, 2, 3):
            # Integrate (x/m)^k so the integrand is O(1) and the error
            # estimate can be judged on a relative scale.
            try:
                with warnings.catch_warnings():
                    warnings.simplefilter("ignore", integrate.IntegrationWarning)
                    val, err = integrate.quad(
                        lambda th: (self.interference_at_angle(th) / self.m) ** k,
                        0.0, np.pi, limit=400)
            except Exception:
                return Moments(math.nan, math.nan, math.nan, False)
            if not math.isfinite(val) or err > 1e-6 * max(abs(val), 1.0):
                ok = False
            raw.append(self.m ** k * val / np.pi)
        m1, m2, m3 = raw
        var = m2 - m1 * m1
        if var <= 0:
            return Moments(m1, max(var, 0.0), math.nan, ok)
        skew = (m3 - 3.0 * m1 * var - m1 ** 3) / var ** 1.5
        return Moments(m1, var, skew, ok)


def fit_cid(m: float, power_p: float, lambda_p: float, alpha: float,
            d: float) -> CidModel:
    """Convenience wrapper for CidModel.fit."""
    return CidModel.fit(m, power_p, lambda_p, alpha, d)
