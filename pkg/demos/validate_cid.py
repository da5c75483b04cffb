"""How tight is the nearest-transmitter approximation?

Conditions real Poisson fields on the sensor reading (rejection within a
narrow band) and compares the interference actually seen at the device with
the analytic distribution, across primary densities. The fit degrades as the
density grows: more of the true mass leaks outside the approximate support.

Run:  python demos/validate_cid.py        (a few minutes)
"""
import pathlib

import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt

from cidsim import RadioParams, validate_cid_empirical

OUT = pathlib.Path(__file__).parent / "output"
OUT.mkdir(exist_ok=True)

M = 0.01        # conditioned sensor reading (W) at unit transmit power
BAND = 0.025    # +-2.5% acceptance band
N = 4000        # accepted samples per density

fig, ax = plt.subplots(figsize=(7, 4.5))
for lambda_p in (0.0003, 0.001, 0.003):
    params = RadioParams(lambda_p=lambda_p, power_p=1.0, alpha=4.0, d=1.0)
    res = validate_cid_empirical(M, BAND, params, n_target=N, master_seed=7)
    print(f"lambda_p = {lambda_p}: KS distance = {res.ks_statistic:.3f}, "
          f"acceptance rate = {res.acceptance_rate:.2%}, "
          f"{res.n_fields} fields drawn")
    ax.plot(res.bin_centers * 1e3, res.empirical_density,
            label=f"empirical, density {lambda_p}")
    if lambda_p == 0.003:
        ax.plot(res.bin_centers * 1e3, res.analytic_density, "k--",
                label="analytic (density 0.003)")

ax.axvline(M * 1e3, ls=":", color="gray", label="sensor reading")
ax.set_xlabel("interference at the device (mW)")
ax.set_ylabel("density (1/W)")
ax.set_title("Conditioned empirical interference vs the analytic model")
ax.legend()
fig.tight_layout()
fig.savefig(OUT / "validate_cid.png", dpi=120)
print(f"wrote {OUT / 'validate_cid.png'}")
print("The empirical mode sits below the reading in every case; the KS")
print("distance grows with density as the single-dominant-transmitter")
print("geometry explains less of the field.")
