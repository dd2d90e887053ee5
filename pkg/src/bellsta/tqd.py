"""Transitionless (counterdiabatic) driving for the reduced two-level model."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .hamiltonian import (
    SQRT2,
    HamiltonianSampler,
    detuning,
    gaussian_pulse,
    gaussian_pulse_derivative,
    reduced_hamiltonian_2,
    two_level_matrix,
)
from .model import SystemParams


class DegeneratePointError(ValueError):
    """Mixing angle or phase is undefined at the requested time."""


@dataclass(frozen=True)
class TqdFields:
    theta: np.ndarray
    theta_dot: np.ndarray
    omega_a: np.ndarray
    zeta: np.ndarray
    zeta_dot: np.ndarray


def mixing_angle(t, params: SystemParams):
    """theta = atan2(-sqrt2 Omega, Delta).

    For Omega >= 0 this already lies on the continuous branch (-pi, 0]: close
    to 0 before the crossing, -pi/2 on it and close to -pi after.  Returns 0
    where Omega and Delta vanish together.
    """
    t = np.asarray(t, dtype=float)
    return np.arctan2(-SQRT2 * gaussian_pulse(t, params), detuning(t, params))


def mixing_angle_series(times, params: SystemParams) -> np.ndarray:
    """Mixing angle on a grid, unwrapped so adjacent samples never jump by pi."""
    return np.unwrap(mixing_angle(np.asarray(times, dtype=float), params))


def theta_dot_analytic(t, params: SystemParams):
    """d(theta)/dt = -sqrt2 (Omega' Delta - Omega Delta') / (Delta^2 + 2 Omega^2)."""
    t = np.asarray(t, dtype=float)
    omega_t = gaussian_pulse(t, params)
    delta = detuning(t, params)
    denom = delta**2 + 2 * omega_t**2
    if np.any(denom == 0):
        raise DegeneratePointError("mixing angle is degenerate where Omega = Delta = 0")
    d_delta = -params.alpha**2
    return -SQRT2 * (gaussian_pulse_derivative(t, params) * delta - omega_t * d_delta) / denom


def counterdiabatic_coupling(t, params: SystemParams):
    """Omega_a = theta_dot / 2."""
    return theta_dot_analytic(t, params) / 2


def cd_hamiltonian(t, params: SystemParams) -> np.ndarray:
    """H_1 = [[0, i Omega_a], [-i Omega_a, 0]]."""
    omega_a = counterdiabatic_coupling(t, params)
    return two_level_matrix(np.zeros_like(omega_a), 1j * omega_a)


def tqd_total_hamiltonian(t, params: SystemParams) -> np.ndarray:
    """H_I + H_1, used for propagating the transitionless protocol."""
    return reduced_hamiltonian_2(t, params) + cd_hamiltonian(t, params)


def tqd_sampler(params: SystemParams) -> HamiltonianSampler:
    return HamiltonianSampler(lambda t: tqd_total_hamiltonian(t, params), 2, name="tqd")


def zeta(t, params: SystemParams):
    """Auxiliary phase zeta = 2 atan(-theta_dot / (sqrt2 Omega))."""
    t = np.asarray(t, dtype=float)
    omega_t = gaussian_pulse(t, params)
    if np.any(omega_t == 0):
        raise DegeneratePointError("zeta is undefined where Omega(t) = 0")
    return 2 * np.arctan(-theta_dot_analytic(t, params) / (SQRT2 * omega_t))


def zeta_dot(t, params: SystemParams, h: float | None = None):
    """Central difference of zeta with step (t_f - t_i) * 1e-6 by default."""
    if h is None:
        h = (params.t_f - params.t_i) * 1e-6
    t = np.asarray(t, dtype=float)
    return (zeta(t + h, params) - zeta(t - h, params)) / (2 * h)


@dataclass(frozen=True)
class RotatedForm:
    """Diagnostic real-symmetric rewrite of H_I + H_1.

    ``delta_f`` is (Delta - zeta_dot/2)/2 and ``omega_f`` the modulus of the
    combined coupling, sqrt(Omega^2/2 + Omega_a^2).  With the phase above this
    pair is the image of H_I + H_1 under psi = diag(e^{-i zeta/4},
    e^{i zeta/4}) psi_rot, so basis populations agree at every time.
    ``delta_f_alt`` = (Delta - zeta_dot)/2 and ``omega_f_printed`` =
    sqrt(Omega^2 + Omega_a^2) are the competing readings, kept for comparison.
    """

    zeta: np.ndarray
    zeta_dot: np.ndarray
    delta_f: np.ndarray
    delta_f_alt: np.ndarray
    omega_f: np.ndarray
    omega_f_printed: np.ndarray
    matrix: np.ndarray


def zeta_and_rotated_form(t, params: SystemParams) -> RotatedForm:
    t = np.asarray(t, dtype=float)
    z = zeta(t, params)
    zd = zeta_dot(t, params)
    delta = detuning(t, params)
    omega_t = gaussian_pulse(t, params)
    omega_a = counterdiabatic_coupling(t, params)
    delta_f = (delta - zd / 2) / 2
    omega_f = np.sqrt(omega_t**2 / 2 + omega_a**2)
    return RotatedForm(
        zeta=z,
        zeta_dot=zd,
        delta_f=delta_f,
        delta_f_alt=(delta - zd) / 2,
        omega_f=omega_f,
        omega_f_printed=np.sqrt(omega_t**2 + omega_a**2),
        matrix=two_level_matrix(2 * delta_f, omega_f),
    )


def rotated_sampler(params: SystemParams) -> HamiltonianSampler:
    return HamiltonianSampler(
        lambda t: zeta_and_rotated_form(t, params).matrix, 2, name="tqd-rotated"
    )


def rotation_to_rotated_frame(t, params: SystemParams) -> np.ndarray:
    """diag(e^{-i zeta/4}, e^{i zeta/4}); psi_diabatic = W psi_rotated."""
    z = zeta(t, params)
    w = np.zeros(np.shape(z) + (2, 2), dtype=complex)
    w[..., 0, 0] = np.exp(-0.25j * z)
    w[..., 1, 1] = np.exp(0.25j * z)
    return w


def tqd_fields(times, params: SystemParams) -> TqdFields:
    times = np.asarray(times, dtype=float)
    theta_dot = theta_dot_analytic(times, params)
    return TqdFields(
        theta=mixing_angle_series(times, params),
        theta_dot=theta_dot,
        omega_a=theta_dot / 2,
        zeta=zeta(times, params),
        zeta_dot=zeta_dot(times, params),
    )
