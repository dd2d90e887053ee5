"""Final Bell-state population over pulse amplitude and sweep rate.

With the window following the crossing, the adiabatic protocol does best for
moderate omega0 and small alpha.  The pulse width stays at 20 throughout, so
the corners of the grid are not clean crossings: for very slow sweeps the
pulse switches on and off around a nearly static detuning, and for strong,
fast pulses it has not decayed at the window edges.  Both show up as
oscillating, non-monotone cells.  A fixed window of 48 cuts the sweep short
for small alpha, which turns the picture into a threshold near alpha = 0.25.

    python demos/04_parameter_sweeps.py [--plot]
"""
import numpy as np

from bellsta import sweep_final_population
from bellsta.experiments import PRESETS, Fixed, Method

from _plotting import maybe_figure

omega0 = np.linspace(0.05, 2.0, 9)
alpha = np.linspace(0.05, 1.0, 9)
np.set_printoptions(precision=3, suppress=True, linewidth=110)

follow = sweep_final_population("adiabatic", omega0, alpha, n_steps=5000, workers=4)
print("adiabatic, window follows t12 (rows omega0, columns alpha)")
print(follow.cells)

for top in (0.2, 0.5):
    tqd = sweep_final_population("tqd", np.linspace(0.05, top, 4), alpha, n_steps=5000, workers=4)
    print(f"TQD, omega0 <= {top}: min population {np.nanmin(tqd.cells):.4f}")

alphas = np.linspace(0.15, 0.35, 9)
fixed = sweep_final_population("adiabatic", [1.0], alphas, Fixed(48.0), base=PRESETS[Method.ADIABATIC])
for a, pop in zip(alphas, fixed.cells[0]):
    print(f"fixed window 48, alpha = {a:.3f}: {pop:.4f}")

plt, path = maybe_figure("parameter_sweeps")
if plt:
    fig, ax = plt.subplots()
    mesh = ax.pcolormesh(alpha, omega0, follow.cells, shading="nearest", vmin=0, vmax=1)
    fig.colorbar(mesh, label="P(psi_plus)")
    ax.set_xlabel("alpha")
    ax.set_ylabel("omega0")
    fig.savefig(path, dpi=120)
    print("figure:", path)
