"""Physical parameters, basis conventions, quantum states and time grids.

Every frequency is measured in units of the exchange constant ``xi`` and every
time in units of ``1/xi``.  The formulas keep ``xi`` explicit, so passing a
non-unit ``xi`` is equivalent to rescaling all other quantities by hand.
"""
from __future__ import annotations

import enum
import math
from dataclasses import asdict, dataclass, field, replace
from typing import Any, Mapping

import numpy as np

NORM_TOL = 1e-9

PARAM_KEYS = ("xi", "omega", "alpha", "omega0", "t_width", "t_i", "t_f", "kappa0", "n_steps")
DEFAULT_N_STEPS = 20000


class Basis(enum.Enum):
    """Ordered state bases.

    DIABATIC2 = [psi_uu, psi_plus]
    DIABATIC3 = [psi_uu, psi_plus, psi_dd]
    LAB4      = [psi_uu, psi_plus, psi_dd, psi_minus]
    """

    DIABATIC2 = 2
    DIABATIC3 = 3
    LAB4 = 4

    @property
    def dim(self) -> int:
        return self.value

    @classmethod
    def for_dim(cls, dim: int) -> "Basis":
        return cls(dim)


BASIS_LABELS = ("psi_uu", "psi_plus", "psi_dd", "psi_minus")


class ParameterError(ValueError):
    """Invalid physical parameters or configuration."""


@dataclass(frozen=True)
class SystemParams:
    xi: float = 1.0
    omega: float = 1.0
    alpha: float = 1.0
    omega0: float = 0.1
    t_width: float = 20.0
    t_i: float = 0.0
    t_f: float = 6.0
    kappa0: float = 1.0

    def __post_init__(self):
        for name in ("xi", "omega", "alpha", "omega0", "t_width", "t_i", "t_f", "kappa0"):
            value = getattr(self, name)
            if not math.isfinite(value):
                raise ParameterError(f"{name} must be finite, got {value!r}")
        if self.xi <= 0:
            raise ParameterError(f"xi must be positive, got {self.xi}")
        if self.t_width <= 0:
            raise ParameterError(f"t_width must be positive, got {self.t_width}")
        if self.t_f <= self.t_i:
            raise ParameterError(f"t_f must exceed t_i, got t_i={self.t_i}, t_f={self.t_f}")
        if self.omega0 < 0:
            raise ParameterError(f"omega0 must be non-negative, got {self.omega0}")
        if self.alpha <= 0:
            raise ParameterError(f"alpha must be positive, got {self.alpha}")
        if self.kappa0 <= 0:
            raise ParameterError(f"kappa0 must be positive, got {self.kappa0}")

    @property
    def t12(self) -> float:
        return crossing_times(self).t12

    def with_window(self, t_i: float, t_f: float) -> "SystemParams":
        return replace(self, t_i=float(t_i), t_f=float(t_f))

    def to_dict(self) -> dict:
        return {k: float(v) for k, v in asdict(self).items()}


@dataclass(frozen=True)
class CrossingTimes:
    t12: float
    t13: float
    t23: float


def crossing_times(params: SystemParams) -> CrossingTimes:
    """Times at which pairs of diabatic energies of the 3-level model cross.

    Values may be negative or lie outside the simulation window.
    """
    a2 = params.alpha**2
    return CrossingTimes(
        t12=(params.omega + 2 * params.xi) / a2,
        t13=params.omega / a2,
        t23=(params.omega - 2 * params.xi) / a2,
    )


def adiabaticity_q(params: SystemParams | float, omega0: float | None = None) -> float:
    """Adiabaticity parameter Q = alpha^2 / (2 omega0^2) at the 1-2 crossing.

    Accepts either a ``SystemParams`` or a bare ``(alpha, omega0)`` pair.
    """
    if isinstance(params, SystemParams):
        alpha, omega0 = params.alpha, params.omega0
    else:
        alpha = float(params)
    if omega0 is None or omega0 == 0:
        raise ParameterError("Q undefined for zero pulse amplitude (omega0 = 0)")
    return alpha**2 / (2 * omega0**2)


def follow_crossing_window(params: SystemParams, center_fraction: float = 0.5) -> SystemParams:
    """Return params with the window ``[0, t12 / center_fraction]``.

    The default puts the 1-2 crossing at mid-window.
    """
    return params.with_window(0.0, params.t12 / center_fraction)


def params_from_mapping(
    data: Mapping[str, Any],
    base: SystemParams | None = None,
    center_fraction: float = 0.5,
) -> tuple[SystemParams, int]:
    """Build parameters from a flat JSON-style mapping.

    Missing keys fall back to ``base``.  When the mapping changes ``xi``,
    ``omega`` or ``alpha`` but sets neither window end, the window is
    recomputed as ``[0, t12 / center_fraction]``.  Returns
    ``(params, n_steps)``.
    """
    unknown = set(data) - set(PARAM_KEYS)
    if unknown:
        raise ParameterError(f"unknown parameter key(s): {', '.join(sorted(unknown))}")
    base = base or SystemParams()
    values = base.to_dict()
    for key in PARAM_KEYS[:-1]:
        if key in data:
            values[key] = _as_float(key, data[key])
    n_steps = int(_as_float("n_steps", data.get("n_steps", DEFAULT_N_STEPS)))
    if n_steps < 2:
        raise ParameterError(f"n_steps must be at least 2, got {n_steps}")
    if "t_i" not in data and "t_f" not in data and any(
        k in data for k in ("xi", "omega", "alpha")
    ):
        a2 = values["alpha"] ** 2
        if a2 <= 0:
            raise ParameterError(f"alpha must be positive, got {values['alpha']}")
        values["t_i"] = 0.0
        values["t_f"] = (values["omega"] + 2 * values["xi"]) / a2 / center_fraction
    return SystemParams(**values), n_steps


def params_to_mapping(params: SystemParams, n_steps: int) -> dict:
    out = params.to_dict()
    out["n_steps"] = int(n_steps)
    return out


def _as_float(key, value) -> float:
    try:
        return float(value)
    except (TypeError, ValueError):
        raise ParameterError(f"parameter {key!r} must be numeric, got {value!r}") from None


@dataclass(frozen=True, eq=False)
class QuantumState:
    """Normalised amplitude vector over one of the diabatic bases."""

    amplitudes: np.ndarray
    basis: Basis = field(default=Basis.DIABATIC2)

    def __post_init__(self):
        amps = np.array(self.amplitudes, dtype=complex).reshape(-1)
        if amps.size != self.basis.dim:
            raise ValueError(f"{self.basis.name} needs {self.basis.dim} amplitudes, got {amps.size}")
        norm = np.vdot(amps, amps).real
        if abs(norm - 1.0) > NORM_TOL:
            raise ValueError(f"state is not normalised: |psi|^2 = {norm:.12g}")
        amps.setflags(write=False)
        object.__setattr__(self, "amplitudes", amps)

    @property
    def dim(self) -> int:
        return self.basis.dim

    @property
    def populations(self) -> np.ndarray:
        return np.abs(self.amplitudes) ** 2

    @classmethod
    def normalized(cls, amplitudes, basis: Basis | None = None) -> "QuantumState":
        amps = np.asarray(amplitudes, dtype=complex).reshape(-1)
        basis = basis or Basis.for_dim(amps.size)
        return cls(amps / np.linalg.norm(amps), basis)

    def __eq__(self, other):
        if not isinstance(other, QuantumState):
            return NotImplemented
        return self.basis is other.basis and np.array_equal(self.amplitudes, other.amplitudes)

    def __hash__(self):
        return hash((self.basis, self.amplitudes.tobytes()))


def basis_state(label: str, basis: Basis = Basis.DIABATIC2) -> QuantumState:
    """Unit vector for ``label`` (one of ``BASIS_LABELS``) in ``basis``."""
    index = BASIS_LABELS.index(label)
    if index >= basis.dim:
        raise ValueError(f"{label} is not part of {basis.name}")
    amps = np.zeros(basis.dim, dtype=complex)
    amps[index] = 1.0
    return QuantumState(amps, basis)


@dataclass(frozen=True)
class TimeGrid:
    t_i: float
    t_f: float
    n_steps: int = DEFAULT_N_STEPS

    def __post_init__(self):
        if not self.t_f > self.t_i:
            raise ParameterError(f"t_f must exceed t_i, got [{self.t_i}, {self.t_f}]")
        if int(self.n_steps) != self.n_steps or self.n_steps < 2:
            raise ParameterError(f"n_steps must be an integer >= 2, got {self.n_steps}")

    @property
    def dt(self) -> float:
        return (self.t_f - self.t_i) / self.n_steps

    @property
    def times(self) -> np.ndarray:
        return np.linspace(self.t_i, self.t_f, self.n_steps + 1)

    def refined(self, factor: int = 2) -> "TimeGrid":
        return TimeGrid(self.t_i, self.t_f, self.n_steps * factor)

    @classmethod
    def from_params(cls, params: SystemParams, n_steps: int = DEFAULT_N_STEPS) -> "TimeGrid":
        return cls(params.t_i, params.t_f, n_steps)
