"""
Where in parameter space is the gate below threshold?
=====================================================

Sweep the (g, kappa_int) plane with the external coupling at its
loss-optimal value, long-pulse limit. The fault-tolerance boundary P = 1
lands on a straight line in the log-log plane because every long-pulse
error rate collapses onto the internal cooperativity C_int = g^2/(2 kappa_int).
"""

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from cpfgate import SweepConfig, extract_contour, requirement_report, run_sweep

config = SweepConfig(
    g_range=(1.0, 1e3, 40),
    kappa_int_range=(1e-3, 1e3, 40),
)
emap = run_sweep(config, jobs=4)

fig, axes = plt.subplots(1, 3, figsize=(13, 3.8), sharey=True)
fields = [("p_loss", emap.p_loss), ("p_cond", emap.p_cond), ("P", emap.p_ftqc)]
for ax, (name, values) in zip(axes, fields):
    mesh = ax.pcolormesh(
        emap.g_values,
        emap.kappa_int_values,
        np.log10(values).T,
        shading="nearest",
        cmap="viridis",
    )
    ax.set_xscale("log")
    ax.set_yscale("log")
    ax.set_xlabel("g / gamma")
    ax.set_title(f"log10 {name}")
    fig.colorbar(mesh, ax=ax)

    for line in extract_contour(emap, 1.0):
        ax.plot(line[:, 0], line[:, 1], "r", lw=1.5)
axes[0].set_ylabel("kappa_int / gamma")

fig.tight_layout()
fig.savefig("error_maps.png", dpi=150)
print("wrote error_maps.png")

report = requirement_report(emap)
print("minimum g for P <= 1, interpolated along the sweep rows:")
for ki, g in list(zip(report.kappa_int, report.min_g))[::8]:
    if not np.isnan(g):
        print(f"  kappa_int = {ki:9.3g}  ->  g >= {g:7.2f}  (C_int = {g * g / 2 / ki:7.0f})")
for pt in report.experimental:
    verdict = "below" if pt.fault_tolerant else "above"
    print(
        f"reported hardware (g={pt.g}, kappa_int={pt.kappa_int}): "
        f"P = {pt.p_ftqc:.2f}, {verdict} threshold"
    )
