"""Experiment configuration: flat key=value text, human units at the boundary.

Powers are dBm, the SIR target is dB, densities are 1/m^2. Values are
converted to linear/watts exactly once, in `to_radio_params`.
"""
from __future__ import annotations

from dataclasses import dataclass, fields, replace

from .params import RadioParams, dbm_to_watts, db_to_linear

EXPERIMENTS = ("cid-dump", "validate-cid", "ase-sweep-lambda-s",
               "ase-sweep-lambda-p", "snapshot-dump")


@dataclass
class ExperimentConfig:
    # radio constants (§ human units)
    lambda_p: float = 0.001
    lambda_s: float = 0.01
    p_p_dbm: float = 23.0
    p_s_dbm: float = 5.0
    alpha: float = 4.0
    beta_db: float = 3.0
    tau: float = 0.05
    d: float = 1.0
    r_s: float = 3.0
    r_p: float = 3.0
    i_th_dbm: float = 2.0
    noise_dbm: float | None = -70.0    # None disables noise
    area_side: float = 100.0
    pathloss: str = "bounded"          # bounded | unbounded
    fading: str = "rayleigh"           # rayleigh | none
    torus: bool = False
    accounting: str = "per-transmitter"  # per-transmitter | single-power
    log_base: float = 2.0
    # experiment selection and knobs
    experiment: str = "ase-sweep-lambda-s"
    m_dbm: float | None = None         # measurement for cid experiments
    band: float = 0.025                # relative acceptance half-width
    n_accept: int = 10000              # accepted-sample target
    grid: tuple = (0.005, 0.01, 0.02, 0.03)   # sweep values
    tau_grid: tuple = ()               # extra tau values for lambda-p sweeps
    grid_size: int = 200               # points in a cid dump
    bins: int = 60                     # histogram bins for validate-cid
    snapshots: int = 20000
    seed: int = 1
    policy: str = "cid"
    aloha_p: float | None = None       # None: constraint-tight mean
    workers: int = 1
    out: str = ""

    def validate(self) -> None:
        if self.alpha <= 2:
            raise ValueError(f"config key 'alpha' must exceed 2, got {self.alpha}")
        if not 0 < self.tau < 1:
            raise ValueError(f"config key 'tau' must lie in (0, 1), got {self.tau}")
        if self.pathloss not in ("bounded", "unbounded"):
            raise ValueError(f"config key 'pathloss' must be bounded|unbounded, got {self.pathloss!r}")
        if self.experiment not in EXPERIMENTS:
            raise ValueError(f"config key 'experiment' must be one of {EXPERIMENTS}, got {self.experiment!r}")
        if self.policy not in ("cid", "aloha", "threshold"):
            raise ValueError(f"config key 'policy' must be cid|aloha|threshold, got {self.policy!r}")
        if self.snapshots < 1:
            raise ValueError("config key 'snapshots' must be at least 1")
        if self.band <= 0:
            raise ValueError("config key 'band' must be positive")
        for name in ("lambda_p", "lambda_s", "d", "r_s", "r_p", "area_side"):
            if getattr(self, name) < 0:
                raise ValueError(f"config key {name!r} must be non-negative")
        if self.aloha_p is not None and not 0 <= self.aloha_p <= 1:
            raise ValueError("config key 'aloha_p' must lie in [0, 1] (or 'tight')")

    def to_radio_params(self) -> RadioParams:
        return RadioParams(
            lambda_p=self.lambda_p, lambda_s=self.lambda_s,
            power_p=dbm_to_watts(self.p_p_dbm), power_s=dbm_to_watts(self.p_s_dbm),
            alpha=self.alpha, beta=db_to_linear(self.beta_db), tau=self.tau,
            d=self.d, r_s=self.r_s, r_p=self.r_p,
            i_th=dbm_to_watts(self.i_th_dbm),
            noise=0.0 if self.noise_dbm is None else dbm_to_watts(self.noise_dbm),
            area_side=self.area_side,
            pathloss_bounded=self.pathloss == "bounded",
            torus=self.torus, fading=self.fading, accounting=self.accounting,
            log_base=self.log_base)

    @property
    def m_watts(self) -> float:
        if self.m_dbm is None:
            raise ValueError("config key 'm_dbm' is required for this experiment")
        return dbm_to_watts(self.m_dbm)


_FIELD_TYPES = {f.name: f for f in fields(ExperimentConfig)}
_OPTIONAL_FLOATS = ("noise_dbm", "m_dbm", "aloha_p")
_OPTIONAL_WORDS = {"noise_dbm": "off", "m_dbm": "none", "aloha_p": "tight"}


def _parse_value(key: str, raw: str):
    raw = raw.strip()
    if key not in _FIELD_TYPES:
        raise ValueError(f"unknown config key {key!r}")
    if key in ("pathloss", "fading", "accounting", "experiment", "policy", "out"):
        return raw
    if key == "torus":
        if raw.lower() in ("true", "false"):
            return raw.lower() == "true"
        raise ValueError(f"config key 'torus' must be true or false, got {raw!r}")
    if key in ("grid", "tau_grid"):
        if not raw:
            return ()
        try:
            return tuple(float(v) for v in raw.split(","))
        except ValueError:
            raise ValueError(f"config key {key!r} must be comma-separated numbers, got {raw!r}") from None
    if key in _OPTIONAL_FLOATS and raw.lower() == _OPTIONAL_WORDS[key]:
        return None
    try:
        if key in ("n_accept", "grid_size", "bins", "snapshots", "seed", "workers"):
            return int(raw)
        return float(raw)
    except ValueError:
        raise ValueError(f"config key {key!r} expects a number, got {raw!r}") from None


def parse_config(text: str, base: ExperimentConfig | None = None) -> ExperimentConfig:
    """Parse flat key=value text ('#' starts a comment) over defaults."""
    cfg = replace(base) if base is not None else ExperimentConfig()
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.split("#", 1)[0].strip()
        if not stripped:
            continue
        if "=" not in stripped:
            raise ValueError(f"line {lineno}: expected 'key = value', got {line!r}")
        key, raw = (part.strip() for part in stripped.split("=", 1))
        setattr(cfg, key, _parse_value(key, raw))
    cfg.validate()
    return cfg


def emit_config(cfg: ExperimentConfig) -> str:
    """Render a config so that parse_config reproduces it exactly."""
    lines = []
    for f in fields(ExperimentConfig):
        val = getattr(cfg, f.name)
        if val is None:
            val = _OPTIONAL_WORDS[f.name]
        elif isinstance(val, bool):
            val = "true" if val else "false"
        elif isinstance(val, tuple):
            val = ",".join(repr(v) for v in val)
        elif isinstance(val, float):
            val = repr(val)
        lines.append(f"{f.name} = {val}")
    return "\n".join(lines)
