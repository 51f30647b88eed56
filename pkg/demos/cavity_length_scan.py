"""
Shrinking the cavity buys fault tolerance
=========================================

Shortening a Fabry-Perot cavity at fixed mirror quality raises g (mode
volume) and raises kappa_int (round-trip rate) together, with g winning:
g ~ 1/sqrt(L) against kappa_int ~ 1/L, so C_int ~ 1 stays put while the
finite-pulse penalty shifts. Scanning the length ratio and re-optimizing
kappa_ext at every point shows P falling roughly as a square root and
crossing P = 1 two decades below the base design.
"""

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from cpfgate import CqedParams, PulseSpec, cavity_scan

base = CqedParams(g=2.0, kappa_ext=1.0, kappa_int=0.001, gamma=1.0)
ratios = np.geomspace(1e-3, 10.0, 17)
result = cavity_scan(base, ratios, PulseSpec(30.0))

xs = np.array([p.ratio for p in result.points])
ys = np.array([p.p_ftqc for p in result.points])

fig, ax = plt.subplots(figsize=(6, 4))
ax.loglog(xs, ys, "o", label="optimized P")
if result.fit_ok:
    a, b, c = result.fit
    dense = np.geomspace(xs.min(), xs.max(), 200)
    ax.loglog(dense, a * dense**b + c, "-", label=f"{a:.2f} r^{b:.2f} + {c:.2f}")
ax.axhline(1.0, color="gray", ls=":")
ax.set_xlabel("cavity length ratio")
ax.set_ylabel("P")
ax.legend(frameon=False)
fig.tight_layout()
fig.savefig("cavity_length_scan.png", dpi=150)
print("wrote cavity_length_scan.png")

below = xs[ys <= 1.0]
if below.size:
    print(f"P <= 1 for every ratio up to {below.max():g}")
for p in result.points[::4]:
    print(
        f"ratio {p.ratio:8.3g}: g = {p.params.g:6.2f}, kappa_int = "
        f"{p.params.kappa_int:8.3g}, kappa_ext_opt = {p.kappa_ext_opt:8.3g}, P = {p.p_ftqc:.3f}"
    )
