"""Slow Landau-Zener passage through the psi_uu / psi_plus crossing.

With Q = 0.1 the sweep is slow compared to the gap the pulse opens, so the
state follows the instantaneous eigenvector and ends in the Bell state.  The
same run is repeated in the three-level model to show that psi_dd stays empty
once the other crossings are far from the pulse.

    python demos/01_adiabatic_passage.py [--plot]
"""
import numpy as np

from bellsta import Scenario, adiabatic_overlap, adiabaticity_q, crossing_times, propagate
from bellsta.hamiltonian import three_level_sampler
from bellsta.model import Basis, basis_state

from _plotting import maybe_figure

scenario = Scenario.default("adiabatic")
p = scenario.params
ct = crossing_times(p)
print(f"alpha^2 = {p.alpha**2:.3f}, omega0 = {p.omega0}, Q = {adiabaticity_q(p):.3f}")
print(f"crossings: t12 = {ct.t12:.1f}, t13 = {ct.t13:.1f}, t23 = {ct.t23:.1f}")

traj = propagate(scenario.sampler(), scenario.initial, scenario.grid)
overlap = adiabatic_overlap(traj, scenario.reference_sampler())
print(f"final population of psi_plus: {traj.populations[-1, 1]:.8f}")
print(f"worst overlap with the adiabatic state: {overlap.min():.6f}")

# the three-level model picks up the psi_plus - psi_dd coupling as well
three = propagate(three_level_sampler(p), basis_state("psi_uu", Basis.DIABATIC3), scenario.grid)
print("three-level final populations (uu, plus, dd):", np.round(three.populations[-1], 6))

plt, path = maybe_figure("adiabatic_passage")
if plt:
    fig, ax = plt.subplots()
    ax.plot(traj.times, traj.populations[:, 0], label="psi_uu")
    ax.plot(traj.times, traj.populations[:, 1], label="psi_plus")
    ax.plot(three.times, three.populations[:, 2], "--", label="psi_dd (3-level)")
    ax.axvline(ct.t12, color="grey", lw=0.5)
    ax.set_xlabel("t")
    ax.set_ylabel("population")
    ax.legend()
    fig.savefig(path, dpi=120)
    print("figure:", path)
