"""Interference-aware random access for sensor-assisted device networks.

Library layout:
  params     physical constants and unit conversions
  geometry   point processes, pathloss, interference, SIR
  cid        conditional interference distribution at a device near a sensor
  policy     transmission-probability schemes and the probability assignment
  analytics  closed-form success/outage/area-spectral-efficiency expressions
  engine     deterministic snapshot-parallel Monte Carlo driver
  config/cli experiment configuration and CSV-producing commands
"""

from .params import RadioParams, dbm_to_watts, watts_to_dbm, db_to_linear, linear_to_db
from .geometry import (NetworkSnapshot, aggregate_interference, pathloss,
                       place_offset, sample_ppp, sample_snapshot,
                       sensor_measurements, sir_at)
from .cid import CidModel, fit_cid, mean_residual_interference, \
    nearest_distance_alpha4, solve_nearest_distance
from .policy import (Policy, PolicyAssignment, access_weight, access_weights,
                     aloha_assignment, assign_probabilities,
                     mean_transmit_probability, threshold_assignment)
from .analytics import (ase_closed_form, outage_constant,
                        primary_outage_probability, secondary_success_probability)
from .engine import (CidValidation, MetricsEstimate, SnapshotRecord,
                     estimate_metrics, run_experiment, run_snapshot,
                     snapshot_rng, validate_cid_empirical)
from .config import ExperimentConfig, emit_config, parse_config

__version__ = "0.1.0"
