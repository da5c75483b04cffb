"""Radio/protocol constants and unit conversions.

All internal quantities are linear: watts, meters, linear SIR. dB/dBm values
are converted once at the configuration boundary.
"""
from __future__ import annotations

from dataclasses import dataclass, replace


def dbm_to_watts(x_dbm: float) -> float:
    return 10.0 ** ((x_dbm - 30.0) / 10.0)


def watts_to_dbm(w: float) -> float:
    if w <= 0:
        raise ValueError("power must be positive to express in dBm")
    import math

    return 10.0 * math.log10(w) + 30.0


def db_to_linear(x_db: float) -> float:
    return 10.0 ** (x_db / 10.0)


def linear_to_db(x: float) -> float:
    if x <= 0:
        raise ValueError("value must be positive to express in dB")
    import math

    return 10.0 * math.log10(x)


FADING_KINDS = ("rayleigh", "none")
ACCOUNTING_KINDS = ("per-transmitter", "single-power")


@dataclass(frozen=True)
class RadioParams:
    """Physical and protocol constants for one experiment.

    Defaults are the evaluation setup used throughout: 23/5 dBm transmit
    powers, 3 dB SIR target, 2 dBm interference threshold, -70 dBm noise,
    100 m square arena.
    """

    lambda_p: float = 0.001                    # primary tx density (1/m^2)
    lambda_s: float = 0.01                     # secondary tx density (1/m^2)
    power_p: float = dbm_to_watts(23.0)        # primary tx power (W)
    power_s: float = dbm_to_watts(5.0)         # secondary tx power (W)
    alpha: float = 4.0                         # pathloss exponent, > 2
    beta: float = db_to_linear(3.0)            # target SIR (linear)
    tau: float = 0.05                          # primary outage cap
    d: float = 1.0                             # secondary tx <-> sensor distance (m)
    r_s: float = 3.0                           # secondary link distance (m)
    r_p: float = 3.0                           # primary link distance (m)
    i_th: float = dbm_to_watts(2.0)            # interference threshold (W)
    noise: float = dbm_to_watts(-70.0)         # noise power (W); 0 disables noise
    area_side: float = 100.0                   # arena edge length (m)
    pathloss_bounded: bool = True              # min{1, r^-alpha} vs plain r^-alpha
    torus: bool = False                        # wrap-around arena (edge-bias diagnostics)
    fading: str = "rayleigh"                   # link fading for SIR evaluation
    accounting: str = "per-transmitter"        # interferer-power accounting mode
    log_base: float = 2.0                      # spectral-efficiency log base

    def __post_init__(self):
        if not self.alpha > 2:
            raise ValueError(f"alpha must exceed 2, got {self.alpha}")
        for name in ("lambda_p", "lambda_s", "power_p", "power_s", "d",
                     "r_s", "r_p", "i_th", "noise"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be non-negative")
        if not 0 < self.tau < 1:
            raise ValueError(f"tau must lie in (0, 1), got {self.tau}")
        if not self.beta > 0:
            raise ValueError(f"beta must be positive, got {self.beta}")
        if not self.area_side > 0:
            raise ValueError(f"area_side must be positive, got {self.area_side}")
        if self.fading not in FADING_KINDS:
            raise ValueError(f"fading must be one of {FADING_KINDS}, got {self.fading!r}")
        if self.accounting not in ACCOUNTING_KINDS:
            raise ValueError(
                f"accounting must be one of {ACCOUNTING_KINDS}, got {self.accounting!r}")
        if self.log_base <= 0 or self.log_base == 1:
            raise ValueError(f"log_base must be positive and != 1, got {self.log_base}")

    @property
    def area(self) -> float:
        return self.area_side ** 2

    def with_(self, **kw) -> "RadioParams":
        """Copy with selected fields replaced."""
        return replace(self, **kw)
