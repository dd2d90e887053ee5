"""Counterdiabatic correction at Q = 50.

On its own the fast sweep barely moves population.  Adding H1 = theta_dot/2
(an imaginary off-diagonal coupling) cancels the non-adiabatic transitions,
and the rotated real-symmetric rewrite gives the same populations.

    python demos/02_transitionless_driving.py [--plot]
"""
import numpy as np

from bellsta import Scenario, adiabaticity_q, fidelity, propagate
from bellsta.hamiltonian import reduced_sampler
from bellsta.tqd import rotated_sampler, rotation_to_rotated_frame, tqd_fields
from bellsta.model import QuantumState

from _plotting import maybe_figure

scenario = Scenario.default("tqd")
p, grid = scenario.params, scenario.grid
print(f"Q = {adiabaticity_q(p):.0f} on the window [{p.t_i}, {p.t_f}]")

bare = propagate(reduced_sampler(p), scenario.initial, grid)
print(f"without correction: F = {fidelity(bare.final, scenario.target):.4f}")

traj = propagate(scenario.sampler(), scenario.initial, grid)
print(f"with H1:            F = {fidelity(traj.final, scenario.target):.7f}")

fields = tqd_fields(grid.times, p)
k = np.argmax(np.abs(fields.omega_a))
print(f"peak |Omega_a| = {abs(fields.omega_a[k]):.4f} at t = {grid.times[k]:.3f}; omega0 is only {p.omega0}")

w0 = rotation_to_rotated_frame(p.t_i, p)
rot = propagate(rotated_sampler(p), QuantumState.normalized(np.conj(w0).T @ scenario.initial.amplitudes), grid)
w = rotation_to_rotated_frame(grid.times, p)
pops = np.abs(np.einsum("nij,nj->ni", w, rot.amplitudes)) ** 2
print(f"rotated form, max population difference: {np.max(np.abs(pops - traj.populations)):.2e}")

plt, path = maybe_figure("transitionless_driving")
if plt:
    fig, (a, b) = plt.subplots(2, 1, sharex=True)
    a.plot(grid.times, traj.populations[:, 1], label="with H1")
    a.plot(grid.times, bare.populations[:, 1], label="bare sweep")
    a.set_ylabel("P(psi_plus)")
    a.legend()
    b.plot(grid.times, fields.omega_a)
    b.set_ylabel("Omega_a")
    b.set_xlabel("t")
    fig.savefig(path, dpi=120)
    print("figure:", path)
