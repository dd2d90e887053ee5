import math

import numpy as np
import pytest

from bellsta.experiments import Scenario
from bellsta.hamiltonian import HamiltonianSampler, lab_sampler, reduced_sampler, three_level_sampler
from bellsta.hamiltonian import rotating_frame_transform
from bellsta.model import Basis, QuantumState, SystemParams, TimeGrid, basis_state
from bellsta.propagate import (
    IntegrationError,
    adiabatic_overlap,
    fidelity,
    propagate,
    step_unitaries,
)

UP = basis_state("psi_uu")


def _constant(matrix):
    m = np.asarray(matrix, dtype=complex)
    return HamiltonianSampler(lambda t: np.broadcast_to(m, (len(t),) + m.shape).copy(), len(m), name="const")


def test_zero_hamiltonian_is_identity():
    traj = propagate(_constant(np.zeros((2, 2))), UP, TimeGrid(0, 5, 10))
    assert np.allclose(traj.amplitudes, [1, 0])


@pytest.mark.parametrize("scheme", ["midpoint", "magnus4"])
def test_resonant_rabi_closed_form(scheme):
    w0 = 0.7
    h = _constant([[0, w0 / math.sqrt(8)], [w0 / math.sqrt(8), 0]])
    grid = TimeGrid(0, 20, 200)
    traj = propagate(h, UP, grid, scheme=scheme)
    expected = np.sin(w0 * grid.times / (2 * math.sqrt(2))) ** 2
    assert np.max(np.abs(traj.populations[:, 1] - expected)) < 1e-8


def test_two_level_rabi_in_pulse_units():
    # coupling Omega/sqrt2 between psi_uu and psi_plus on resonance: P = sin^2(Omega t / sqrt2)
    w0 = 0.3
    h = _constant([[0, w0 / math.sqrt(2)], [w0 / math.sqrt(2), 0]])
    grid = TimeGrid(0, 10, 100)
    traj = propagate(h, UP, grid)
    assert np.allclose(traj.populations[:, 1], np.sin(w0 * grid.times / math.sqrt(2)) ** 2, atol=1e-8)


@pytest.mark.parametrize("method", ["adiabatic", "tqd", "lri"])
def test_unitarity_and_convergence(method):
    s = Scenario.default(method)
    traj = propagate(s.sampler(), s.initial, s.grid)
    assert np.max(np.abs(traj.norms - 1)) < 1e-9
    assert traj.diagnostics["deltas"][-1] < 1e-8


def test_step_unitaries_are_unitary():
    s = Scenario.default("tqd", n_steps=500)
    for scheme in ("midpoint", "magnus4"):
        u = step_unitaries(s.sampler(), s.grid, scheme)
        uu = u @ np.conj(np.swapaxes(u, 1, 2))
        assert np.max(np.abs(uu - np.eye(2))) < 1e-13
    with pytest.raises(ValueError):
        step_unitaries(s.sampler(), s.grid, "euler")


def test_time_reversal():
    s = Scenario.default("tqd")
    fwd = propagate(s.sampler(), s.initial, s.grid)
    back = propagate(s.sampler(), fwd.final, s.grid, backward=True)
    assert np.max(np.abs(back.final.amplitudes - s.initial.amplitudes)) < 1e-7
    assert back.times[0] == s.grid.t_f and back.times[-1] == s.grid.t_i


@pytest.mark.parametrize("xi, alpha_sq, omega0", [(1.0, 0.02, 0.1), (2.0, 0.04, 0.3)])
def test_three_level_matches_two_level_far_from_other_crossings(xi, alpha_sq, omega0):
    # crossing gap 2 xi / alpha^2 = 100 puts Omega(t13), Omega(t23) below 1e-10 Omega0;
    # the dropped psi_plus - psi_dd coupling still shifts levels by ~ Omega0^2 / (4 xi)
    p = SystemParams(xi=xi, alpha=math.sqrt(alpha_sq), omega0=omega0, t_width=20.0)
    p = p.with_window(0.0, 2 * p.t12)
    grid = TimeGrid(p.t_i, p.t_f, 15000)
    two = propagate(reduced_sampler(p), UP, grid)
    three = propagate(three_level_sampler(p), basis_state("psi_uu", Basis.DIABATIC3), grid)
    assert np.max(np.abs(two.populations - three.populations[:, :2])) < 1e-2


def test_lab_frame_matches_interaction_frame():
    p = SystemParams(alpha=1.0, omega0=0.3, t_width=2.0, t_f=6.0)
    grid = TimeGrid(0, 6, 6000)
    three = propagate(three_level_sampler(p), basis_state("psi_uu", Basis.DIABATIC3), grid)
    lab = propagate(lab_sampler(p), basis_state("psi_uu", Basis.LAB4), grid)
    # populations are frame invariant since V is diagonal
    assert np.max(np.abs(lab.populations[:, :3] - three.populations)) < 1e-6
    # amplitudes agree up to V and the global phase e^{-i xi t}
    v = rotating_frame_transform(grid.times, p)
    int_amps = np.einsum("nji,nj->ni", np.conj(v), lab.amplitudes) * np.exp(1j * p.xi * grid.times)[:, None]
    assert np.max(np.abs(int_amps[:, :3] - three.amplitudes)) < 1e-6


def test_fidelity_examples():
    plus = basis_state("psi_plus")
    assert fidelity(UP, UP) == 1.0
    assert fidelity(UP, plus) == 0.0
    mix = QuantumState.normalized([1, 1j])
    assert fidelity(mix, plus) == pytest.approx(0.5)
    with pytest.raises(ValueError):
        fidelity(UP, basis_state("psi_uu", Basis.DIABATIC3))


def test_dimension_mismatch_rejected():
    s = Scenario.default("tqd", n_steps=100)
    with pytest.raises(ValueError):
        propagate(s.sampler(), basis_state("psi_uu", Basis.DIABATIC3), s.grid)


def test_adiabatic_overlap_series():
    s = Scenario.default("adiabatic")
    traj = propagate(s.sampler(), s.initial, s.grid)
    assert adiabatic_overlap(traj, s.reference_sampler()).min() >= 0.98
    lri = Scenario.default("lri")
    traj = propagate(lri.sampler(), lri.initial, lri.grid)
    assert adiabatic_overlap(traj, lri.reference_sampler()).min() < 0.95


def test_unconverged_run_raises():
    h = HamiltonianSampler(lambda t: np.einsum("n,ij->nij", 50 * np.cos(t**2), [[0, 1], [1, 0]]) + 0j, 2)
    with pytest.raises(IntegrationError) as info:
        propagate(h, UP, TimeGrid(0, 100, 10), scheme="midpoint", max_refinements=2)
    assert len(info.value.diagnostics["deltas"]) == 2


def test_trajectory_table_layout():
    s = Scenario.default("tqd", n_steps=100)
    traj = propagate(s.sampler(), s.initial, s.grid)
    columns, data = traj.table()
    assert columns == ["t", "re_psi_uu", "im_psi_uu", "re_psi_plus", "im_psi_plus", "pop_psi_uu", "pop_psi_plus"]
    assert data.shape == (101, 7)
