"""Two-spin Hamiltonians: lab frame (4x4), interaction picture (3x3) and the
reduced two-level model around the first crossing.

All builders are vectorised over time: a scalar ``t`` gives a ``(d, d)``
matrix, an array of shape ``(n,)`` gives ``(n, d, d)``.

Single-spin convention: ``|up>`` is the S_z = -1/2 state.  With this labelling
the Zeeman term lowers ``|psi_uu>`` as ``B_z`` grows and the rotating frame
``diag(e^{i w t}, 1, e^{-i w t}, 1)`` maps the lab Hamiltonian onto the
interaction-picture matrix with real couplings ``Omega/sqrt(2)``.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .model import Basis, SystemParams

SQRT2 = np.sqrt(2.0)


class Frame(enum.Enum):
    LAB = "lab"
    INTERACTION = "interaction"


@dataclass(frozen=True)
class HamiltonianSampler:
    """Pure map from time to a Hermitian matrix.

    ``sample`` must accept a 1-D array of times and return ``(n, dim, dim)``.
    """

    sample: Callable[[np.ndarray], np.ndarray]
    dim: int
    frame: Frame = Frame.INTERACTION
    name: str = ""

    def __call__(self, t):
        t_arr = np.asarray(t, dtype=float)
        out = self.sample(np.atleast_1d(t_arr).reshape(-1))
        if t_arr.ndim == 0:
            return out[0]
        return out.reshape(t_arr.shape + (self.dim, self.dim))

    @property
    def basis(self) -> Basis:
        return Basis.for_dim(self.dim)


@dataclass(frozen=True)
class DriveSample:
    omega_t: np.ndarray
    delta_t: np.ndarray
    bz_t: np.ndarray


def gaussian_pulse(t, params: SystemParams):
    """Omega(t) = omega0 * exp(-(t - t12)^2 / T^2)."""
    t = np.asarray(t, dtype=float)
    return params.omega0 * np.exp(-(((t - params.t12) / params.t_width) ** 2))


def gaussian_pulse_derivative(t, params: SystemParams):
    t = np.asarray(t, dtype=float)
    return -2.0 * (t - params.t12) / params.t_width**2 * gaussian_pulse(t, params)


def detuning(t, params: SystemParams):
    """Delta(t) = omega + 2 xi - alpha^2 t."""
    return params.omega + 2 * params.xi - params.alpha**2 * np.asarray(t, dtype=float)


def z_field(t, params: SystemParams):
    return params.alpha**2 * np.asarray(t, dtype=float)


def drive(t, params: SystemParams) -> DriveSample:
    return DriveSample(gaussian_pulse(t, params), detuning(t, params), z_field(t, params))


def _stack(t, dim):
    t = np.asarray(t, dtype=float)
    return t, np.zeros(t.shape + (dim, dim), dtype=complex)


def interaction_hamiltonian_3(t, params: SystemParams) -> np.ndarray:
    """3-level interaction-picture Hamiltonian over [psi_uu, psi_plus, psi_dd]."""
    t, h = _stack(t, 3)
    bz = z_field(t, params)
    c = gaussian_pulse(t, params) / SQRT2
    h[..., 0, 0] = params.omega - bz
    h[..., 1, 1] = -2 * params.xi
    h[..., 2, 2] = -params.omega + bz
    h[..., 0, 1] = h[..., 1, 0] = c
    h[..., 1, 2] = h[..., 2, 1] = c
    return h


def two_level_matrix(delta, coupling) -> np.ndarray:
    """[[delta/2, coupling], [conj(coupling), -delta/2]] stacked over leading axes."""
    delta = np.asarray(delta, dtype=float)
    coupling = np.asarray(coupling)
    shape = np.broadcast_shapes(delta.shape, coupling.shape)
    h = np.zeros(shape + (2, 2), dtype=complex)
    h[..., 0, 0] = delta / 2
    h[..., 1, 1] = -delta / 2
    h[..., 0, 1] = coupling
    h[..., 1, 0] = np.conj(coupling)
    return h


def reduced_hamiltonian_2(t, params: SystemParams) -> np.ndarray:
    """Two-level Hamiltonian [[Delta/2, Omega/sqrt2], [Omega/sqrt2, -Delta/2]]."""
    return two_level_matrix(detuning(t, params), gaussian_pulse(t, params) / SQRT2)


# single-spin operators in the (|up>, |down>) ordering, |up> has S_z = -1/2
_SZ = np.diag([-0.5, 0.5]).astype(complex)
_SPLUS = np.array([[0, 0], [1, 0]], dtype=complex)
_SMINUS = _SPLUS.conj().T
_SX = (_SPLUS + _SMINUS) / 2
_SY = (_SPLUS - _SMINUS) / 2j
_I2 = np.eye(2, dtype=complex)


def spin_operators() -> dict[str, np.ndarray]:
    """Two-spin operators in the product basis |uu>, |ud>, |du>, |dd>."""
    ops = {}
    for name, op in (("x", _SX), ("y", _SY), ("z", _SZ)):
        ops[f"A{name}"] = np.kron(op, _I2)
        ops[f"B{name}"] = np.kron(_I2, op)
    return ops


# columns: psi_uu, psi_plus, psi_dd, psi_minus expressed in the product basis
TRIPLET_SINGLET = np.array(
    [
        [1, 0, 0, 0],
        [0, 1 / SQRT2, 0, 1 / SQRT2],
        [0, 1 / SQRT2, 0, -1 / SQRT2],
        [0, 0, 1, 0],
    ],
    dtype=complex,
)


def lab_hamiltonian_product(t, params: SystemParams) -> np.ndarray:
    """Lab-frame H(t) in the product basis, built from Kronecker products."""
    t, _ = _stack(t, 4)
    ops = spin_operators()
    omega_t = gaussian_pulse(t, params)
    bx = omega_t * np.cos(params.omega * t)
    by = omega_t * np.sin(params.omega * t)
    bz = z_field(t, params)
    h0 = 4 * params.xi * ops["Az"] @ ops["Bz"]
    sx, sy, sz = (ops["A" + a] + ops["B" + a] for a in "xyz")
    return (
        h0
        + bx[..., None, None] * sx
        + by[..., None, None] * sy
        + bz[..., None, None] * sz
    )


def lab_hamiltonian_4x4(t, params: SystemParams) -> np.ndarray:
    """Lab-frame H(t) over [psi_uu, psi_plus, psi_dd, psi_minus]."""
    h = lab_hamiltonian_product(t, params)
    b = TRIPLET_SINGLET
    return b.conj().T @ h @ b


def rotating_frame_transform(t, params: SystemParams) -> np.ndarray:
    """V(t) = diag(e^{i w t}, 1, e^{-i w t}, 1); psi_lab = V psi_int."""
    t, v = _stack(t, 4)
    phase = np.exp(1j * params.omega * t)
    v[..., 0, 0] = phase
    v[..., 1, 1] = 1.0
    v[..., 2, 2] = np.conj(phase)
    v[..., 3, 3] = 1.0
    return v


def rotating_frame_derivative(t, params: SystemParams) -> np.ndarray:
    t = np.asarray(t, dtype=float)
    rates = np.array([1j * params.omega, 0, -1j * params.omega, 0])
    return rotating_frame_transform(t, params) * rates


def to_interaction_frame(h_lab, v, v_dot) -> np.ndarray:
    """Generator for psi_int where psi_lab = V psi_int: V^+ H V - i V^+ dV/dt."""
    vh = np.conj(np.swapaxes(v, -1, -2))
    return vh @ h_lab @ v - 1j * vh @ v_dot


def interaction_from_lab(t, params: SystemParams) -> np.ndarray:
    """Rotating-frame image of the lab Hamiltonian, shifted by -xi."""
    h = to_interaction_frame(
        lab_hamiltonian_4x4(t, params),
        rotating_frame_transform(t, params),
        rotating_frame_derivative(t, params),
    )
    return h - params.xi * np.eye(4)


def hermiticity_defect(h) -> float:
    h = np.asarray(h)
    return float(np.max(np.abs(h - np.conj(np.swapaxes(h, -1, -2)))))


def reduced_sampler(params: SystemParams) -> HamiltonianSampler:
    return HamiltonianSampler(lambda t: reduced_hamiltonian_2(t, params), 2, name="reduced-2")


def three_level_sampler(params: SystemParams) -> HamiltonianSampler:
    return HamiltonianSampler(lambda t: interaction_hamiltonian_3(t, params), 3, name="interaction-3")


def lab_sampler(params: SystemParams) -> HamiltonianSampler:
    return HamiltonianSampler(lambda t: lab_hamiltonian_4x4(t, params), 4, Frame.LAB, name="lab-4")


def matrix_to_json(m) -> list:
    """Row-major nested list of [re, im] pairs."""
    m = np.asarray(m)
    return [[[float(z.real), float(z.imag)] for z in row] for row in m]
