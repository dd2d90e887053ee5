"""Unitary time stepping of the Schroedinger equation and trajectory observables."""
from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np

from .hamiltonian import HamiltonianSampler
from .lri import invariant_matrix
from .model import BASIS_LABELS, Basis, QuantumState, TimeGrid

log = logging.getLogger(__name__)

CONVERGENCE_TOL = 1e-8
MAX_REFINEMENTS = 3

_GL_OFFSET = np.sqrt(3.0) / 6
_MAGNUS4_COMM = np.sqrt(3.0) / 12


class IntegrationError(RuntimeError):
    """Step-doubling refinement did not converge."""

    def __init__(self, message, diagnostics=None):
        super().__init__(message)
        self.diagnostics = diagnostics or {}


@dataclass(frozen=True, eq=False)
class Trajectory:
    grid: TimeGrid
    amplitudes: np.ndarray  # shape (n_steps + 1, dim)
    basis: Basis
    backward: bool = False
    diagnostics: dict = field(default_factory=dict)

    @property
    def times(self) -> np.ndarray:
        t = self.grid.times
        return t[::-1] if self.backward else t

    @property
    def populations(self) -> np.ndarray:
        return np.abs(self.amplitudes) ** 2

    @property
    def norms(self) -> np.ndarray:
        return np.linalg.norm(self.amplitudes, axis=1)

    def state(self, k: int) -> QuantumState:
        return QuantumState.normalized(self.amplitudes[k], self.basis)

    @property
    def initial(self) -> QuantumState:
        return self.state(0)

    @property
    def final(self) -> QuantumState:
        return self.state(-1)

    def __len__(self):
        return len(self.amplitudes)

    def table(self) -> tuple[list[str], np.ndarray]:
        """Columns t, re/im of every amplitude, then populations."""
        labels = BASIS_LABELS[: self.basis.dim]
        columns = ["t"]
        columns += [f"{part}_{lab}" for lab in labels for part in ("re", "im")]
        columns += [f"pop_{lab}" for lab in labels]
        amps = self.amplitudes
        parts = np.empty((len(amps), 2 * amps.shape[1]))
        parts[:, 0::2] = amps.real
        parts[:, 1::2] = amps.imag
        data = np.column_stack([self.times, parts, self.populations])
        return columns, data


def _exp_minus_i(g: np.ndarray) -> np.ndarray:
    """exp(-i G) for a stack of Hermitian matrices."""
    if g.shape[-1] == 2:
        return _exp_minus_i_2x2(g)
    w, v = np.linalg.eigh(g)
    return (v * np.exp(-1j * w)[..., None, :]) @ np.conj(np.swapaxes(v, -1, -2))


def _exp_minus_i_2x2(g: np.ndarray) -> np.ndarray:
    # G = g0 I + r.sigma  ->  exp(-iG) = e^{-i g0} (cos|r| I - i sin|r| r.sigma/|r|)
    g0 = 0.5 * (g[..., 0, 0] + g[..., 1, 1]).real
    rz = 0.5 * (g[..., 0, 0] - g[..., 1, 1]).real
    rx = g[..., 1, 0].real
    ry = g[..., 1, 0].imag
    r = np.sqrt(rx**2 + ry**2 + rz**2)
    c = np.cos(r)
    sinc = np.sinc(r / np.pi)  # sin(r)/r, finite at r = 0
    phase = np.exp(-1j * g0)
    u = np.empty(g.shape, dtype=complex)
    u[..., 0, 0] = phase * (c - 1j * sinc * rz)
    u[..., 1, 1] = phase * (c + 1j * sinc * rz)
    u[..., 0, 1] = phase * (-1j * sinc * (rx - 1j * ry))
    u[..., 1, 0] = phase * (-1j * sinc * (rx + 1j * ry))
    return u


def step_unitaries(h: HamiltonianSampler, grid: TimeGrid, scheme: str = "magnus4") -> np.ndarray:
    """Per-step propagators U_k over [t_k, t_k + dt], shape (n_steps, d, d).

    ``midpoint``: exp(-i H(t_k + dt/2) dt).
    ``magnus4``: fourth-order Magnus with two Gauss-Legendre nodes,
    exp(-i [dt/2 (H1 + H2) - i sqrt3/12 dt^2 [H2, H1]]).
    Both are exactly unitary for Hermitian H.
    """
    dt = grid.dt
    left = grid.t_i + dt * np.arange(grid.n_steps)
    if scheme == "midpoint":
        g = h.sample(left + 0.5 * dt) * dt
    elif scheme == "magnus4":
        h1 = h.sample(left + (0.5 - _GL_OFFSET) * dt)
        h2 = h.sample(left + (0.5 + _GL_OFFSET) * dt)
        comm = h2 @ h1 - h1 @ h2
        g = 0.5 * dt * (h1 + h2) - 1j * _MAGNUS4_COMM * dt**2 * comm
    else:
        raise ValueError(f"unknown scheme {scheme!r}")
    return _exp_minus_i(g)


def _matmul(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    if a.shape[-1] != 2:
        return a @ b
    # explicit 2x2 product; batched np.matmul is slow for tiny matrices
    c = np.empty(np.broadcast_shapes(a.shape, b.shape), dtype=complex)
    c[..., 0, 0] = a[..., 0, 0] * b[..., 0, 0] + a[..., 0, 1] * b[..., 1, 0]
    c[..., 0, 1] = a[..., 0, 0] * b[..., 0, 1] + a[..., 0, 1] * b[..., 1, 1]
    c[..., 1, 0] = a[..., 1, 0] * b[..., 0, 0] + a[..., 1, 1] * b[..., 1, 0]
    c[..., 1, 1] = a[..., 1, 0] * b[..., 0, 1] + a[..., 1, 1] * b[..., 1, 1]
    return c


def _chain_final(u: np.ndarray) -> np.ndarray:
    """U_{n-1} ... U_1 U_0 by pairwise reduction."""
    while len(u) > 1:
        if len(u) % 2:
            u = np.concatenate([u, np.eye(u.shape[-1])[None]])
        u = _matmul(u[1::2], u[0::2])
    return u[0]


def _coarsen(u: np.ndarray, factor: int) -> np.ndarray:
    """Merge each run of ``factor`` consecutive steps (factor a power of 2)."""
    while factor > 1:
        u = _matmul(u[1::2], u[0::2])
        factor //= 2
    return u


def _chain_prefix(u: np.ndarray) -> np.ndarray:
    """Inclusive prefix products P_k = U_k ... U_0 (doubling scan)."""
    p = u.copy()
    shift = 1
    while shift < len(p):
        p[shift:] = _matmul(p[shift:], p[:-shift])
        shift *= 2
    return p


def _ordered(u: np.ndarray, backward: bool) -> np.ndarray:
    if backward:
        return np.conj(np.swapaxes(u[::-1], -1, -2))
    return u


def propagate(
    h: HamiltonianSampler,
    psi0: QuantumState,
    grid: TimeGrid,
    *,
    scheme: str = "magnus4",
    check_convergence: bool = True,
    tol: float = CONVERGENCE_TOL,
    max_refinements: int = MAX_REFINEMENTS,
    backward: bool = False,
) -> Trajectory:
    """Evolve ``psi0`` across ``grid`` under ``h``.

    With ``backward=True`` the state is taken at ``grid.t_f`` and evolved to
    ``grid.t_i``.  When convergence checking is on, the step count is doubled
    until the final amplitudes move by less than ``tol``; the returned
    trajectory comes from the finest run, sampled on the requested grid.
    """
    if psi0.dim != h.dim:
        raise ValueError(f"state dimension {psi0.dim} does not match Hamiltonian dimension {h.dim}")
    psi = np.asarray(psi0.amplitudes)

    factor = 1
    u = _ordered(step_unitaries(h, grid, scheme), backward)
    deltas = []
    if check_convergence:
        final = _chain_final(u) @ psi
        for _ in range(max_refinements):
            factor *= 2
            u = _ordered(step_unitaries(h, grid.refined(factor), scheme), backward)
            finer = _chain_final(u) @ psi
            deltas.append(float(np.max(np.abs(finer - final))))
            final = finer
            if deltas[-1] < tol:
                break
        else:
            diag = {"n_steps": [grid.n_steps * 2**k for k in range(max_refinements + 1)], "deltas": deltas}
            raise IntegrationError(
                f"{h.name or 'propagation'} not converged after {max_refinements} refinements: "
                f"final-amplitude changes {', '.join(f'{d:.2e}' for d in deltas)}",
                diag,
            )
    states = np.empty((grid.n_steps + 1, h.dim), dtype=complex)
    states[0] = psi
    states[1:] = _chain_prefix(_coarsen(u, factor)) @ psi
    diagnostics = {"scheme": scheme, "n_steps_used": grid.n_steps * factor, "deltas": deltas}
    return Trajectory(grid, states, psi0.basis, backward, diagnostics)


def fidelity(final: QuantumState, target: QuantumState) -> float:
    """|<target|final>|^2."""
    if final.dim != target.dim:
        raise ValueError(f"dimension mismatch: {final.dim} vs {target.dim}")
    return min(1.0, float(abs(np.vdot(target.amplitudes, final.amplitudes)) ** 2))


def adiabatic_overlap(traj: Trajectory, h: HamiltonianSampler) -> np.ndarray:
    """|<phi(t)|psi(t)>|^2 with phi the instantaneous eigenvector of ``h``.

    The branch starts at the eigenvector closest to the initial state and is
    followed by maximal overlap with the previous node.
    """
    _, vecs = np.linalg.eigh(h.sample(traj.times))
    amps = traj.amplitudes
    k = int(np.argmax(np.abs(np.conj(vecs[0]).T @ amps[0])))
    prev = vecs[0][:, k]
    out = np.empty(len(amps))
    for i in range(len(amps)):
        cand = vecs[i]
        k = int(np.argmax(np.abs(np.conj(cand).T @ prev)))
        prev = cand[:, k]
        out[i] = abs(np.vdot(prev, amps[i])) ** 2
    return out


def invariant_expectation_series(traj: Trajectory, coeffs, kappa0: float = 1.0) -> np.ndarray:
    """<psi(t)|I(t)|psi(t)> at every node."""
    inv = invariant_matrix(traj.times, coeffs, kappa0)
    amps = traj.amplitudes
    return np.einsum("ni,nij,nj->n", np.conj(amps), inv, amps).real
