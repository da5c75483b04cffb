"""Point-process sampling, pathloss, interference and SIR for one snapshot.

Points are (n, 2) float arrays. All randomness flows through an explicit
numpy Generator, so every operation is pure given its rng state.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .params import RadioParams


def sample_ppp(density: float, area_side: float, rng: np.random.Generator) -> np.ndarray:
    """Homogeneous Poisson field on the [0, area_side)^2 square.

    Count ~ Poisson(density * area), positions iid uniform.
    """
    if density < 0:
        raise ValueError("density must be non-negative")
    if area_side <= 0:
        raise ValueError("area_side must be positive")
    n = rng.poisson(density * area_side * area_side)
    return rng.random((n, 2)) * area_side


def place_offset(anchor, distance: float, rng: np.random.Generator) -> np.ndarray:
    """One point at exactly `distance` from `anchor`, direction uniform."""
    if distance < 0:
        raise ValueError("distance must be non-negative")
    theta = rng.uniform(0.0, 2.0 * np.pi)
    a = np.asarray(anchor, dtype=float)
    return a + distance * np.array([np.cos(theta), np.sin(theta)])


def place_offsets(anchors: np.ndarray, distance: float,
                  rng: np.random.Generator) -> np.ndarray:
    """Vectorized place_offset: one offset point per anchor row."""
    if distance < 0:
        raise ValueError("distance must be non-negative")
    n = len(anchors)
    theta = rng.uniform(0.0, 2.0 * np.pi, n)
    return anchors + distance * np.column_stack([np.cos(theta), np.sin(theta)])


def pathloss(tx, rx, alpha: float, bounded: bool = True):
    """Distance gain min{1, r^-alpha} (bounded) or r^-alpha (unbounded)."""
    if not alpha > 2:
        raise ValueError("alpha must exceed 2")
    tx = np.asarray(tx, dtype=float)
    rx = np.asarray(rx, dtype=float)
    r = np.sqrt(((tx - rx) ** 2).sum(axis=-1))
    return gain_from_distance(r, alpha, bounded)


def gain_from_distance(r, alpha: float, bounded: bool):
    r = np.asarray(r, dtype=float)
    if bounded:
        with np.errstate(divide="ignore"):
            return np.minimum(1.0, r ** (-alpha))
    if np.any(r == 0):
        raise ValueError("coincident points have no unbounded pathloss")
    return r ** (-alpha)


def distance_matrix(a: np.ndarray, b: np.ndarray, area_side: float = 0.0,
                    torus: bool = False) -> np.ndarray:
    """Pairwise distances, (len(a), len(b)). Uses minimum-image wrap on a torus."""
    a = np.atleast_2d(np.asarray(a, dtype=float))
    b = np.atleast_2d(np.asarray(b, dtype=float))
    dx = np.abs(a[:, 0:1] - b[None, :, 0])
    dy = np.abs(a[:, 1:2] - b[None, :, 1])
    if torus:
        if area_side <= 0:
            raise ValueError("torus distances need a positive area_side")
        dx = np.minimum(dx, area_side - dx)
        dy = np.minimum(dy, area_side - dy)
    return np.hypot(dx, dy)


def gain_matrix(tx: np.ndarray, rx: np.ndarray, params: RadioParams) -> np.ndarray:
    """Pairwise pathloss gains under the params' arena and pathloss mode."""
    r = distance_matrix(tx, rx, params.area_side, params.torus)
    return gain_from_distance(r, params.alpha, params.pathloss_bounded)


def fading_draws(kind: str, shape, rng: np.random.Generator) -> np.ndarray:
    """Unit-mean power fading draws; `none` means h = 1."""
    if kind == "rayleigh":
        return rng.exponential(1.0, shape)
    if kind == "none":
        return np.ones(shape)
    raise ValueError(f"unknown fading kind {kind!r}")


def aggregate_interference(rx, interferers, power: float, params: RadioParams,
                           fading: str = "none",
                           rng: np.random.Generator | None = None) -> float:
    """Total power * fading * pathloss received at rx from the given points.

    `fading='none'` is the sensor-measurement convention (fading averaged out).
    """
    pts = np.asarray(interferers, dtype=float).reshape(-1, 2)
    if len(pts) == 0:
        return 0.0
    g = gain_matrix(pts, np.asarray(rx, dtype=float).reshape(1, 2), params)[:, 0]
    if fading == "rayleigh" and rng is None:
        raise ValueError("rayleigh fading draws need an rng")
    h = fading_draws(fading, len(pts), rng) if fading == "rayleigh" else 1.0
    return float(np.sum(power * h * g))


def sir_at(rx, desired_tx, desired_power: float, interferer_sets,
           params: RadioParams, fading: str = "rayleigh",
           rng: np.random.Generator | None = None) -> float:
    """Linear SIR (SINR when params.noise > 0) at one receiver.

    `interferer_sets` is a list of (points, power) pairs. With no interference
    and no noise the ratio is reported as +inf.
    """
    g = gain_matrix(np.asarray(desired_tx, dtype=float).reshape(1, 2),
                    np.asarray(rx, dtype=float).reshape(1, 2), params)[0, 0]
    h = float(fading_draws(fading, (), rng)) if fading == "rayleigh" else 1.0
    signal = desired_power * h * g
    total = params.noise
    for pts, power in interferer_sets:
        total += aggregate_interference(rx, pts, power, params, fading, rng)
    if total == 0.0:
        return float("inf")
    return signal / total


@dataclass
class NetworkSnapshot:
    """One topology realization with its fading draws.

    Fading matrices are indexed (transmitter, receiver) with transmitters
    ordered primaries first, then secondaries.
    """

    pts: np.ndarray           # primary transmitters (n_pt, 2)
    sts: np.ndarray           # secondary transmitters (n_st, 2)
    sensors: np.ndarray       # one sensor per secondary, at distance d
    p_receivers: np.ndarray   # one receiver per primary, at distance r_p
    s_receivers: np.ndarray   # one receiver per secondary, at distance r_s
    fading_to_prx: np.ndarray  # (n_pt + n_st, n_pt) unit-mean power draws
    fading_to_srx: np.ndarray  # (n_pt + n_st, n_st)

    @property
    def n_pt(self) -> int:
        return len(self.pts)

    @property
    def n_st(self) -> int:
        return len(self.sts)

    def transmitters(self) -> np.ndarray:
        return np.vstack([self.pts, self.sts]) if self.n_pt + self.n_st else np.zeros((0, 2))


def sample_snapshot(params: RadioParams, rng: np.random.Generator) -> NetworkSnapshot:
    """Draw one network realization.

    The rng consumption order is fixed (fields, offsets, fading) so that runs
    with identical seeds share topology and fading regardless of the policy
    evaluated afterwards.
    """
    pts = sample_ppp(params.lambda_p, params.area_side, rng)
    sts = sample_ppp(params.lambda_s, params.area_side, rng)
    sensors = place_offsets(sts, params.d, rng)
    p_rx = place_offsets(pts, params.r_p, rng)
    s_rx = place_offsets(sts, params.r_s, rng)
    if params.torus:
        sensors = np.mod(sensors, params.area_side)
        p_rx = np.mod(p_rx, params.area_side)
        s_rx = np.mod(s_rx, params.area_side)
    n_tx = len(pts) + len(sts)
    h_prx = fading_draws(params.fading, (n_tx, len(pts)), rng)
    h_srx = fading_draws(params.fading, (n_tx, len(sts)), rng)
    return NetworkSnapshot(pts, sts, sensors, p_rx, s_rx, h_prx, h_srx)


def sensor_measurements(snapshot: NetworkSnapshot, params: RadioParams) -> np.ndarray:
    """No-fading aggregate primary interference at each sensor (W)."""
    if snapshot.n_pt == 0 or snapshot.n_st == 0:
        return np.zeros(snapshot.n_st)
    g = gain_matrix(snapshot.pts, snapshot.sensors, params)
    return params.power_p * g.sum(axis=0)
