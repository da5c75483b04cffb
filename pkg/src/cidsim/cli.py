"""Command-line entry points producing machine-readable CSV files.

Every output file carries its full resolved configuration as '# key = value'
header lines (re-parseable, so a file reproduces its own run) and derived
values as '## ' lines. Identical seeds give byte-identical files for any
worker count.
"""
from __future__ import annotations

import argparse
import sys

import numpy as np

from .analytics import ase_closed_form, primary_outage_probability
from .config import ExperimentConfig, parse_config, emit_config
from .engine import estimate_metrics, run_experiment, run_snapshot, snapshot_rng, \
    validate_cid_empirical
from .cid import CidModel
from .geometry import sample_snapshot, sensor_measurements
from .params import dbm_to_watts
from .policy import Policy, mean_transmit_probability, policy_assignment


def _fmt(x) -> str:
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return repr(float(x))


def _header_lines(cfg: ExperimentConfig) -> list[str]:
    return [f"# {line}" for line in emit_config(cfg).splitlines()]


def _write(path: str, lines: list[str]) -> None:
    text = "\n".join(lines) + "\n"
    if path:
        with open(path, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _policy_from(cfg: ExperimentConfig, kind: str | None = None) -> Policy:
    return Policy(kind=kind or cfg.policy, aloha_p=cfg.aloha_p)


def cmd_cid_dump(cfg: ExperimentConfig) -> list[str]:
    """pdf/cdf table on an equal-probability interior grid of the support."""
    if cfg.grid_size < 2:
        raise ValueError("grid_size must be at least 2")
    params = cfg.to_radio_params()
    model = CidModel.fit(cfg.m_watts, params.power_p, params.lambda_p,
                         params.alpha, params.d)
    lines = _header_lines(cfg)
    lines.append(f"## r1_hat = {_fmt(model.r1_hat)}")
    lines.append(f"## t_resid = {_fmt(model.t_resid)}")
    lines.append(f"## x_min = {_fmt(model.x_min)}")
    lines.append(f"## x_max = {_fmt(model.x_max)}")
    if model.nearest_inside_device_radius:
        lines.append("## note = nearest transmitter closer than the device distance")
    qs = np.linspace(0.001, 0.999, cfg.grid_size)
    xs = model.quantile(qs)
    lines.append("x_watts,pdf,cdf")
    for x in xs:
        lines.append(f"{_fmt(x)},{_fmt(model.pdf(x))},{_fmt(model.cdf(x))}")
    return lines


def cmd_validate_cid(cfg: ExperimentConfig) -> list[str]:
    """Empirical conditioned histogram against the analytic density."""
    params = cfg.to_radio_params()
    result = validate_cid_empirical(cfg.m_watts, cfg.band, params,
                                    n_target=cfg.n_accept, master_seed=cfg.seed,
                                    n_bins=cfg.bins)
    lines = _header_lines(cfg)
    lines.append("bin_center,empirical_density,analytic_density")
    for c, e, a in zip(result.bin_centers, result.empirical_density,
                       result.analytic_density):
        lines.append(f"{_fmt(c)},{_fmt(e)},{_fmt(a)}")
    lines.append(f"## ks_statistic = {_fmt(result.ks_statistic)}")
    lines.append(f"## acceptance_rate = {_fmt(result.acceptance_rate)}")
    lines.append(f"## n_accepted = {result.n_accepted}")
    lines.append(f"## n_fields = {result.n_fields}")
    return lines


def _sweep_axis(cfg: ExperimentConfig) -> str:
    return "lambda_s" if cfg.experiment == "ase-sweep-lambda-s" else "lambda_p"


def cmd_ase_sweep(cfg: ExperimentConfig) -> list[str]:
    """All three policies on common snapshot seeds, one row per grid point."""
    if not cfg.grid:
        raise ValueError("sweep grid must be non-empty")
    axis = _sweep_axis(cfg)
    taus = cfg.tau_grid if (cfg.tau_grid and axis == "lambda_p") else (cfg.tau,)
    lines = _header_lines(cfg)
    lines.append("sweep_value,ase_cid,ase_aloha,ase_threshold,ase_closed_form,"
                 "outage_cid,outage_target,se_ase_cid,se_ase_aloha,se_ase_threshold,"
                 "se_outage_cid,mean_p_cid,expected_mean_p,clip_fraction_cid,tau")
    for tau in taus:
        for value in cfg.grid:
            overrides = {axis: value, "tau": tau}
            params = cfg.to_radio_params().with_(**overrides)
            row = {}
            for kind in ("cid", "aloha", "threshold"):
                records = run_experiment(params, _policy_from(cfg, kind),
                                         cfg.snapshots, cfg.seed, cfg.workers)
                row[kind] = estimate_metrics(records, params)
            mean_p = mean_transmit_probability(params)
            closed = ase_closed_form(params, mean_p)
            m = row["cid"]
            lines.append(",".join([
                _fmt(value), _fmt(m.ase), _fmt(row["aloha"].ase),
                _fmt(row["threshold"].ase), _fmt(closed),
                _fmt(m.primary_outage), _fmt(tau),
                _fmt(m.ase_se), _fmt(row["aloha"].ase_se),
                _fmt(row["threshold"].ase_se), _fmt(m.primary_outage_se),
                _fmt(m.mean_assigned_p), _fmt(mean_p), _fmt(m.clip_fraction),
                _fmt(tau)]))
    return lines


def cmd_snapshot_dump(cfg: ExperimentConfig) -> list[str]:
    """One topology with assigned transmission probabilities, for plotting."""
    params = cfg.to_radio_params()
    rng = snapshot_rng(cfg.seed, 0)
    snap = sample_snapshot(params, rng)
    meas = sensor_measurements(snap, params)
    assignment = policy_assignment(_policy_from(cfg), meas, params)
    lines = _header_lines(cfg)
    lines.append("kind,x,y,prob")
    for x, y in snap.pts:
        lines.append(f"pt,{_fmt(x)},{_fmt(y)},")
    for (x, y), prob in zip(snap.sts, assignment.probs):
        lines.append(f"st,{_fmt(x)},{_fmt(y)},{_fmt(prob)}")
    for x, y in snap.sensors:
        lines.append(f"sensor,{_fmt(x)},{_fmt(y)},")
    return lines


_COMMANDS = {
    "cid-dump": cmd_cid_dump,
    "validate-cid": cmd_validate_cid,
    "ase-sweep-lambda-s": cmd_ase_sweep,
    "ase-sweep-lambda-p": cmd_ase_sweep,
    "snapshot-dump": cmd_snapshot_dump,
}

_SUBCOMMANDS = {
    "cid": "cid-dump",
    "validate-cid": "validate-cid",
    "ase-sweep": None,   # axis resolved by --sweep / config
    "snapshot": "snapshot-dump",
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cidsim",
        description="Interference-aware random access: distributions, sweeps, topologies.")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in ("cid", "validate-cid", "ase-sweep", "snapshot"):
        sp = sub.add_parser(name)
        sp.add_argument("--config", help="key=value config file")
        sp.add_argument("--seed", type=int)
        sp.add_argument("--snapshots", type=int)
        sp.add_argument("--policy", choices=("cid", "aloha", "threshold"))
        sp.add_argument("--out", help="output file (stdout when omitted)")
        sp.add_argument("--workers", type=int)
        sp.add_argument("--set", action="append", default=[], metavar="KEY=VALUE",
                        help="override any config key")
        if name in ("cid", "validate-cid"):
            sp.add_argument("--m-dbm", type=float, help="sensor measurement (dBm)")
        if name == "cid":
            sp.add_argument("--grid-size", type=int)
        if name == "validate-cid":
            sp.add_argument("--band", type=float)
            sp.add_argument("--n-accept", type=int)
        if name == "ase-sweep":
            sp.add_argument("--sweep", choices=("lambda-s", "lambda-p"))
            sp.add_argument("--grid", help="comma-separated sweep values")
            sp.add_argument("--tau-grid", help="comma-separated tau values")
    return parser


def _resolve_config(args) -> ExperimentConfig:
    cfg = ExperimentConfig()
    if args.config:
        with open(args.config) as fh:
            cfg = parse_config(fh.read(), cfg)
    if args.command in ("cid", "validate-cid", "snapshot"):
        cfg.experiment = _SUBCOMMANDS[args.command]
    elif getattr(args, "sweep", None):
        cfg.experiment = "ase-sweep-lambda-s" if args.sweep == "lambda-s" else "ase-sweep-lambda-p"
    elif not cfg.experiment.startswith("ase-sweep"):
        cfg.experiment = "ase-sweep-lambda-s"
    overrides = []
    for flag, key in (("seed", "seed"), ("snapshots", "snapshots"),
                      ("policy", "policy"), ("out", "out"), ("workers", "workers"),
                      ("m_dbm", "m_dbm"), ("grid_size", "grid_size"),
                      ("band", "band"), ("n_accept", "n_accept"),
                      ("grid", "grid"), ("tau_grid", "tau_grid")):
        val = getattr(args, flag, None)
        if val is not None:
            overrides.append(f"{key} = {val}")
    overrides.extend(item for item in args.set)
    if overrides:
        cfg = parse_config("\n".join(overrides), cfg)
    else:
        cfg.validate()
    return cfg


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = _resolve_config(args)
        lines = _COMMANDS[cfg.experiment](cfg)
        _write(cfg.out, lines)
    except (ValueError, RuntimeError, OSError) as exc:
        print(f"cidsim: error: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
