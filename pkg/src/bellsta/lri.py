"""Invariant-based inverse engineering of the two-level fields.

The invariant ``I(t) = (kappa0/2)(sin g cos b sx - sin g sin b sy + cos g sz)``
is parameterised by two polynomial angles ``gamma(t)`` (degree 4) and
``beta(t)`` (degree 5).  Their coefficients are fixed by boundary values, and
the invariance conditions are then inverted for the coupling ``Omega_LR`` and
detuning ``Delta_LR``.
"""
from __future__ import annotations

from dataclasses import dataclass
from math import factorial

import numpy as np
from numpy.polynomial import Polynomial
from numpy.polynomial import polynomial as P

from .hamiltonian import SQRT2, HamiltonianSampler, two_level_matrix
from .model import Basis, QuantumState

SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)

# a crossing exactly at mid-window makes the beta system singular
CENTER_FRACTION = 0.4
SIN_BETA_MIN = 0.1
_COND_LIMIT = 1e12
_ENDPOINT_TOL = 1e-12


class DesignError(ValueError):
    """The boundary-value design cannot produce finite control fields."""


class SingularDesignError(DesignError, np.linalg.LinAlgError):
    """The boundary conditions do not determine a unique polynomial."""


def _row(u: float, degree: int, order: int) -> np.ndarray:
    """Coefficient row of the ``order``-th u-derivative of sum c_j u^j at ``u``."""
    row = np.zeros(degree + 1)
    for j in range(order, degree + 1):
        row[j] = factorial(j) / factorial(j - order) * u ** (j - order)
    return row


def _solve(rows, rhs) -> np.ndarray:
    a = np.array(rows)
    if np.linalg.cond(a) > _COND_LIMIT:
        raise SingularDesignError(
            "boundary conditions are degenerate for this time placement "
            f"(condition number {np.linalg.cond(a):.3g})"
        )
    return np.linalg.solve(a, np.asarray(rhs, dtype=float))


def _check_order(t_i, t_f, t12):
    if not t_i < t12 < t_f:
        raise DesignError(f"need t_i < t12 < t_f, got ({t_i}, {t12}, {t_f})")


def _gamma_scaled(t_i, t_f, t12):
    length = t_f - t_i
    c = (t12 - t_i) / length
    return _solve(
        [_row(0, 4, 0), _row(1, 4, 0), _row(0, 4, 1), _row(1, 4, 1), _row(c, 4, 2)],
        [0.0, np.pi, 0.0, 0.0, 0.0],
    )


def _beta_scaled(t_i, t_f, t12):
    # derivative targets are -pi/L and +pi/L in t, i.e. -pi and +pi in u
    length = t_f - t_i
    c = (t12 - t_i) / length
    return _solve(
        [_row(0, 5, 0), _row(1, 5, 0), _row(0, 5, 1), _row(1, 5, 1), _row(c, 5, 0), _row(c, 5, 2)],
        [np.pi / 2, np.pi / 2, -np.pi, np.pi, np.pi / 2, 0.0],
    )


def _to_monomial(scaled, t_i, t_f) -> np.ndarray:
    length = t_f - t_i
    poly = Polynomial(scaled)(Polynomial([-t_i / length, 1 / length]))
    coef = np.zeros(len(scaled))
    coef[: len(poly.coef)] = poly.coef
    return coef


def solve_gamma_coeffs(t_i: float, t_f: float, t12: float) -> np.ndarray:
    """Coefficients g_0..g_4 of gamma(t) = sum g_j t^j.

    Conditions: gamma(t_i) = 0, gamma(t_f) = pi, gamma'(t_i) = gamma'(t_f) = 0,
    gamma''(t12) = 0.
    """
    _check_order(t_i, t_f, t12)
    return _to_monomial(_gamma_scaled(t_i, t_f, t12), t_i, t_f)


def solve_beta_coeffs(t_i: float, t_f: float, t12: float) -> np.ndarray:
    """Coefficients b_0..b_5 of beta(t) = sum b_j t^j.

    Conditions: beta = pi/2 at t_i, t12 and t_f; beta'(t_i) = -pi/L,
    beta'(t_f) = pi/L with L = t_f - t_i; beta''(t12) = 0.  Raises
    ``SingularDesignError`` when t12 sits at mid-window, where the six
    conditions are linearly dependent.
    """
    _check_order(t_i, t_f, t12)
    return _to_monomial(_beta_scaled(t_i, t_f, t12), t_i, t_f)


@dataclass(frozen=True)
class AnsatzCoeffs:
    """Polynomial design of gamma and beta on ``[t_i, t_f]``.

    Coefficients are stored in the normalised time u = (t - t_i)/(t_f - t_i)
    for conditioning; ``g`` and ``b`` give the monomial coefficients in t.
    """

    t_i: float
    t_f: float
    t12: float
    g_scaled: np.ndarray
    b_scaled: np.ndarray

    @classmethod
    def design(cls, t_i: float, t_f: float, t12: float) -> "AnsatzCoeffs":
        _check_order(t_i, t_f, t12)
        return cls(
            float(t_i), float(t_f), float(t12), _gamma_scaled(t_i, t_f, t12), _beta_scaled(t_i, t_f, t12)
        )

    @property
    def length(self) -> float:
        return self.t_f - self.t_i

    @property
    def g(self) -> np.ndarray:
        return _to_monomial(self.g_scaled, self.t_i, self.t_f)

    @property
    def b(self) -> np.ndarray:
        return _to_monomial(self.b_scaled, self.t_i, self.t_f)

    def _u(self, t):
        return (np.asarray(t, dtype=float) - self.t_i) / self.length

    def gamma(self, t, order: int = 0):
        c = P.polyder(self.g_scaled, order) if order else self.g_scaled
        return P.polyval(self._u(t), c) / self.length**order

    def beta(self, t, order: int = 0):
        c = P.polyder(self.b_scaled, order) if order else self.b_scaled
        return P.polyval(self._u(t), c) / self.length**order

    def boundary_residuals(self) -> dict[str, float]:
        ti, tf, tc, L = self.t_i, self.t_f, self.t12, self.length
        pi = np.pi
        return {
            "gamma(t_i)": abs(self.gamma(ti) - 0.0),
            "gamma(t_f)": abs(self.gamma(tf) - pi),
            "gamma'(t_i)": abs(self.gamma(ti, 1)),
            "gamma'(t_f)": abs(self.gamma(tf, 1)),
            "gamma''(t12)": abs(self.gamma(tc, 2)),
            "beta(t_i)": abs(self.beta(ti) - pi / 2),
            "beta(t_f)": abs(self.beta(tf) - pi / 2),
            "beta'(t_i)": abs(self.beta(ti, 1) + pi / L),
            "beta'(t_f)": abs(self.beta(tf, 1) - pi / L),
            "beta(t12)": abs(self.beta(tc) - pi / 2),
            "beta''(t12)": abs(self.beta(tc, 2)),
        }


def design_for_window(t_i: float, t_f: float) -> AnsatzCoeffs:
    """Design with the crossing placed at ``CENTER_FRACTION`` of the window."""
    return AnsatzCoeffs.design(t_i, t_f, t_i + CENTER_FRACTION * (t_f - t_i))


@dataclass(frozen=True)
class LriFields:
    gamma: np.ndarray
    beta: np.ndarray
    gamma_dot: np.ndarray
    beta_dot: np.ndarray
    gamma_ddot: np.ndarray
    beta_ddot: np.ndarray
    omega_lr: np.ndarray
    delta_lr: np.ndarray


def invert_fields(t, coeffs: AnsatzCoeffs) -> LriFields:
    """Solve the invariance conditions for Omega_LR and Delta_LR.

    Omega_LR = gamma' / (sqrt2 sin beta) and
    Delta_LR = sqrt2 Omega_LR cot(gamma) cos(beta) - beta'.
    At t_i and t_f the detuning is the one-sided limit
    -2 beta'/sin^2(beta) - beta', finite because cos(beta) vanishes there.
    """
    t = np.asarray(t, dtype=float)
    u = coeffs._u(t)
    if np.any(u < -_ENDPOINT_TOL) or np.any(u > 1 + _ENDPOINT_TOL):
        raise DesignError(f"time outside the design window [{coeffs.t_i}, {coeffs.t_f}]")
    gamma, beta = coeffs.gamma(t), coeffs.beta(t)
    gd, bd = coeffs.gamma(t, 1), coeffs.beta(t, 1)
    gdd, bdd = coeffs.gamma(t, 2), coeffs.beta(t, 2)

    sin_b = np.sin(beta)
    if np.any(sin_b <= SIN_BETA_MIN):
        raise DesignError(f"sin(beta) drops to {sin_b.min():.3g}, below the {SIN_BETA_MIN} guard")
    omega_lr = gd / (SQRT2 * sin_b)

    edge = (np.abs(u) <= _ENDPOINT_TOL) | (np.abs(u - 1) <= _ENDPOINT_TOL)
    inner = ~edge
    sin_g = np.sin(gamma)
    if np.any(sin_g[inner] == 0):
        raise DesignError("sin(gamma) vanishes strictly inside the window")
    delta_lr = np.empty_like(gd)
    with np.errstate(divide="ignore", invalid="ignore"):
        direct = gd * np.cos(gamma) * np.cos(beta) / (sin_g * sin_b) - bd
    delta_lr[inner] = direct[inner]
    if np.any(edge):
        if np.any(np.abs(np.cos(beta[edge])) > 1e-9) or np.any(gdd[edge] == 0):
            raise DesignError("endpoint detuning diverges: need beta = pi/2 and gamma'' != 0 there")
        delta_lr[edge] = -2 * bd[edge] / sin_b[edge] ** 2 - bd[edge]
    return LriFields(gamma, beta, gd, bd, gdd, bdd, omega_lr, delta_lr)


def lri_hamiltonian(t, coeffs: AnsatzCoeffs) -> np.ndarray:
    f = invert_fields(t, coeffs)
    return two_level_matrix(f.delta_lr, f.omega_lr / SQRT2)


def lri_sampler(coeffs: AnsatzCoeffs) -> HamiltonianSampler:
    return HamiltonianSampler(lambda t: lri_hamiltonian(t, coeffs), 2, name="lri")


def invariant_from_angles(gamma, beta, kappa0: float = 1.0) -> np.ndarray:
    gamma = np.asarray(gamma, dtype=float)
    beta = np.asarray(beta, dtype=float)
    nx = np.sin(gamma) * np.cos(beta)
    ny = -np.sin(gamma) * np.sin(beta)
    nz = np.cos(gamma)
    return (kappa0 / 2) * (
        nx[..., None, None] * SIGMA_X + ny[..., None, None] * SIGMA_Y + nz[..., None, None] * SIGMA_Z
    )


def invariant_matrix(t, coeffs: AnsatzCoeffs, kappa0: float = 1.0) -> np.ndarray:
    return invariant_from_angles(coeffs.gamma(t), coeffs.beta(t), kappa0)


def invariant_time_derivative(t, coeffs: AnsatzCoeffs, kappa0: float = 1.0) -> np.ndarray:
    """Partial time derivative of I(t) from the polynomial derivatives."""
    g, b = coeffs.gamma(t), coeffs.beta(t)
    gd, bd = coeffs.gamma(t, 1), coeffs.beta(t, 1)
    dx = np.cos(g) * np.cos(b) * gd - np.sin(g) * np.sin(b) * bd
    dy = -np.cos(g) * np.sin(b) * gd - np.sin(g) * np.cos(b) * bd
    dz = -np.sin(g) * gd
    return (kappa0 / 2) * (
        dx[..., None, None] * SIGMA_X + dy[..., None, None] * SIGMA_Y + dz[..., None, None] * SIGMA_Z
    )


def invariance_residual(t, coeffs: AnsatzCoeffs, kappa0: float = 1.0) -> np.ndarray:
    """dI/dt + i[H_LR, I]; vanishes for an exact dynamical invariant."""
    inv = invariant_matrix(t, coeffs, kappa0)
    h = lri_hamiltonian(t, coeffs)
    return invariant_time_derivative(t, coeffs, kappa0) + 1j * (h @ inv - inv @ h)


def invariant_eigenvectors(gamma, beta):
    """(|n+>, |n->) as arrays over the diabatic pair [psi_uu, psi_plus].

    |n+> = cos(g/2) e^{ib} |uu> + sin(g/2)|+>, |n-> = -sin(g/2) e^{ib} |uu> + cos(g/2)|+>.
    """
    gamma = np.asarray(gamma, dtype=float)
    beta = np.asarray(beta, dtype=float)
    phase = np.exp(1j * beta)
    c, s = np.cos(gamma / 2), np.sin(gamma / 2)
    n_plus = np.stack([c * phase, s + 0j], axis=-1)
    n_minus = np.stack([-s * phase, c + 0j], axis=-1)
    return n_plus, n_minus


def invariant_eigenstates(t: float, coeffs: AnsatzCoeffs) -> tuple[QuantumState, QuantumState]:
    n_plus, n_minus = invariant_eigenvectors(coeffs.gamma(t), coeffs.beta(t))
    return QuantumState(n_plus, Basis.DIABATIC2), QuantumState(n_minus, Basis.DIABATIC2)


def commutator_norm(a, b) -> np.ndarray:
    c = a @ b - b @ a
    return np.linalg.norm(c, ord=2, axis=(-2, -1))
