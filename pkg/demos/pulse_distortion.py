"""
Finite pulses pick up distortion that a monochromatic photon never sees
========================================================================

A reflection coefficient is flat only on paper. A pulse of width W_t
samples a band ~1/W_t of it, so the reflected waveform is reshaped, and
the reshaping is what survives postselection as unheralded gate error.
Here a Gaussian pulse bounces off the coupled cavity at several widths,
once through the spectral filter and once through the time-domain
integrator, and the two results are overlaid.
"""

import math

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from cpfgate import (
    CqedParams,
    PulseSpec,
    apply_reflection,
    default_grid,
    integrate_time_domain,
    make_gaussian,
    time_domain_view,
)

params = CqedParams(g=10.0, kappa_ext=3.0, kappa_int=0.1, gamma=1.0)

fig, axes = plt.subplots(1, 3, figsize=(12, 3.6), sharey=False)
for ax, width in zip(axes, (0.3, 1.0, 10.0)):
    spec = PulseSpec(width)
    traj = integrate_time_domain(params, spec, atom_state=1)

    # spectral route: multiply the pulse spectrum by the reflection
    # amplitude, then look at it in the time domain
    grid = default_grid(spec, params)
    reflected = apply_reflection(make_gaussian(spec, grid), params, 1)
    sub = slice(0, traj.times.size, max(1, traj.times.size // 1500))
    times = traj.times[sub]
    view = time_domain_view(reflected, times)

    window = times < spec.t0 + 5 * width
    ax.plot(times[window], np.abs(traj.f_in[sub][window]) ** 2, "k:", label="input")
    ax.plot(times[window], np.abs(traj.f_out[sub][window]) ** 2, label="RK4")
    ax.plot(
        times[window], np.abs(view[window]) ** 2, "--", label="spectral filter"
    )
    dt = times[1] - times[0]
    dist = math.sqrt(float(np.sum(np.abs(view - traj.f_out[sub]) ** 2) * dt))
    ax.set_title(f"W_t = {width:g}/gamma   (oracle gap {dist:.1e})")
    ax.set_xlabel("time * gamma")
axes[0].set_ylabel("|f|^2")
axes[0].legend(frameon=False)

fig.tight_layout()
fig.savefig("pulse_distortion.png", dpi=150)
print("wrote pulse_distortion.png")
