"""Protocol scenarios, parameter sweeps and fidelity curves."""
from __future__ import annotations

import enum
import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace

import numpy as np

from . import lri
from .hamiltonian import HamiltonianSampler, reduced_sampler
from .model import (
    DEFAULT_N_STEPS,
    Basis,
    ParameterError,
    QuantumState,
    SystemParams,
    TimeGrid,
    adiabaticity_q,
    basis_state,
    crossing_times,
)
from .propagate import IntegrationError, Trajectory, fidelity, propagate
from .tables import SeriesTable
from .tqd import DegeneratePointError, tqd_sampler

log = logging.getLogger(__name__)

NUMERICAL_ERRORS = (IntegrationError, lri.DesignError, DegeneratePointError, ParameterError, np.linalg.LinAlgError)


class Method(str, enum.Enum):
    ADIABATIC = "adiabatic"
    TQD = "tqd"
    LRI = "lri"


PRESETS = {
    # Q = 0.1 with the crossing at mid-window
    Method.ADIABATIC: SystemParams(alpha=math.sqrt(0.05), omega0=0.5, t_i=0.0, t_f=120.0),
    # Q = 50 on a 6/xi window
    Method.TQD: SystemParams(alpha=1.0, omega0=0.1, t_i=0.0, t_f=6.0),
    # t12 = 3 placed at lri.CENTER_FRACTION of the window
    Method.LRI: SystemParams(alpha=1.0, omega0=0.1, t_i=0.0, t_f=3.0 / lri.CENTER_FRACTION),
}


def preset(method) -> SystemParams:
    return PRESETS[Method(method)]


def center_fraction(method) -> float:
    return lri.CENTER_FRACTION if Method(method) is Method.LRI else 0.5


@dataclass(frozen=True)
class Scenario:
    method: Method
    params: SystemParams
    grid: TimeGrid
    initial: QuantumState = field(default_factory=lambda: basis_state("psi_uu"))
    target: QuantumState = field(default_factory=lambda: basis_state("psi_plus"))

    def __post_init__(self):
        object.__setattr__(self, "method", Method(self.method))
        if (self.grid.t_i, self.grid.t_f) != (self.params.t_i, self.params.t_f):
            raise ParameterError("grid window differs from the parameter window")
        if self.initial.basis is not Basis.DIABATIC2 or self.target.basis is not Basis.DIABATIC2:
            raise ParameterError("scenarios run in the two-level diabatic basis")
        if self.method is Method.LRI:
            t12 = self.params.t12
            if not self.params.t_i < t12 < self.params.t_f:
                raise ParameterError(
                    f"LRI needs t_i < t12 < t_f, got t12={t12:.6g} outside [{self.params.t_i}, {self.params.t_f}]"
                )

    @classmethod
    def default(cls, method, n_steps: int = DEFAULT_N_STEPS) -> "Scenario":
        params = preset(method)
        return cls(Method(method), params, TimeGrid.from_params(params, n_steps))

    @classmethod
    def from_params(cls, method, params: SystemParams, n_steps: int = DEFAULT_N_STEPS) -> "Scenario":
        return cls(Method(method), params, TimeGrid.from_params(params, n_steps))

    def ansatz(self) -> lri.AnsatzCoeffs:
        p = self.params
        return lri.AnsatzCoeffs.design(p.t_i, p.t_f, p.t12)

    def sampler(self) -> HamiltonianSampler:
        if self.method is Method.ADIABATIC:
            return reduced_sampler(self.params)
        if self.method is Method.TQD:
            return tqd_sampler(self.params)
        return lri.lri_sampler(self.ansatz())

    def reference_sampler(self) -> HamiltonianSampler:
        """Hamiltonian whose eigenvectors define the adiabatic path."""
        if self.method is Method.LRI:
            return self.sampler()
        return reduced_sampler(self.params)

    def summary(self) -> dict:
        p = self.params
        ct = crossing_times(p)
        out = {"method": self.method.value, "t12": ct.t12, "t13": ct.t13, "t23": ct.t23}
        if p.omega0 > 0:
            out["Q"] = adiabaticity_q(p)
        return out


def run_scenario(s: Scenario, **kwargs) -> tuple[Trajectory, float]:
    """Propagate the scenario; returns the trajectory and the final fidelity."""
    traj = propagate(s.sampler(), s.initial, s.grid, **kwargs)
    return traj, fidelity(traj.final, s.target)


@dataclass(frozen=True)
class FollowCrossing:
    """Window [0, t12 / f] with f = 1/2 (1-2 crossing at mid-window) unless set."""

    fraction: float | None = None

    def apply(self, params: SystemParams, method) -> SystemParams:
        f = self.fraction if self.fraction is not None else center_fraction(method)
        return params.with_window(0.0, params.t12 / f)

    def __str__(self):
        return "follow" if self.fraction is None else f"follow:{self.fraction:g}"


@dataclass(frozen=True)
class Fixed:
    t_total: float

    def apply(self, params: SystemParams, method) -> SystemParams:
        return params.with_window(0.0, self.t_total)

    def __str__(self):
        return f"fixed:{self.t_total:g}"


def parse_window(text: str):
    """'follow', 'follow:<fraction>' or 'fixed:<t_total>'."""
    kind, _, arg = text.partition(":")
    try:
        if kind == "follow":
            return FollowCrossing(float(arg) if arg else None)
        if kind == "fixed" and arg:
            return Fixed(float(arg))
    except ValueError:
        pass
    raise ParameterError(f"bad window policy {text!r}; expected 'follow' or 'fixed:<t_total>'")


@dataclass(frozen=True, eq=False)
class SweepGrid:
    """Final target population per (omega0, alpha) cell; NaN marks a failed cell."""

    omega0_values: np.ndarray
    alpha_values: np.ndarray
    cells: np.ndarray  # shape (len(omega0_values), len(alpha_values))
    diagnostics: tuple = ()
    metadata: dict = field(default_factory=dict)

    def table(self) -> SeriesTable:
        o, a = np.meshgrid(self.omega0_values, self.alpha_values, indexing="ij")
        data = np.column_stack([o.ravel(), a.ravel(), self.cells.ravel()])
        return SeriesTable(("omega0", "alpha", "population"), data, self.metadata)


def _ascending(values, name):
    arr = np.asarray(values, dtype=float).reshape(-1)
    if arr.size == 0 or np.any(np.diff(arr) <= 0):
        raise ParameterError(f"{name} must be a non-empty ascending sequence")
    return arr


def _map(fn, items, workers):
    if workers and workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(fn, items))
    return [fn(x) for x in items]


def sweep_final_population(
    method,
    omega0_values,
    alpha_values,
    window=FollowCrossing(),
    *,
    base: SystemParams | None = None,
    n_steps: int = DEFAULT_N_STEPS,
    workers: int | None = None,
) -> SweepGrid:
    """Final psi_plus population over a (omega0, alpha) grid."""
    method = Method(method)
    omega0_values = _ascending(omega0_values, "omega0_values")
    alpha_values = _ascending(alpha_values, "alpha_values")
    base = base or preset(method)
    cells = [(i, j) for i in range(len(omega0_values)) for j in range(len(alpha_values))]

    def one(ij):
        i, j = ij
        o0, al = omega0_values[i], alpha_values[j]
        try:
            params = window.apply(replace(base, omega0=float(o0), alpha=float(al)), method)
            _, fid = run_scenario(Scenario.from_params(method, params, n_steps))
            return fid, None
        except NUMERICAL_ERRORS as exc:
            msg = f"omega0={o0:g} alpha={al:g}: {exc}"
            log.warning("sweep cell failed, %s", msg)
            return math.nan, msg

    results = _map(one, cells, workers)
    pops = np.array([r[0] for r in results]).reshape(len(omega0_values), len(alpha_values))
    diags = tuple(r[1] for r in results if r[1])
    meta = {
        "kind": "sweep",
        "method": method.value,
        "window": str(window),
        "base": base.to_dict(),
        "n_steps": n_steps,
    }
    return SweepGrid(omega0_values, alpha_values, pops, diags, meta)


def duration_params(method, t_total: float, base: SystemParams | None = None) -> SystemParams:
    """Rescale a preset so the protocol spans [0, t_total].

    Adiabatic/TQD: alpha is chosen so t12 = t_total/2 with omega0 fixed.
    LRI: the window is [0, t_total] with t12 at ``lri.CENTER_FRACTION``.
    """
    method = Method(method)
    base = base or PRESETS[Method.TQD]
    frac = center_fraction(method)
    alpha = math.sqrt((base.omega + 2 * base.xi) / (frac * t_total))
    return replace(base, alpha=alpha, t_i=0.0, t_f=float(t_total))


def fidelity_vs_duration(
    t_totals,
    methods=(Method.ADIABATIC, Method.TQD, Method.LRI),
    *,
    base: SystemParams | None = None,
    n_steps: int = DEFAULT_N_STEPS,
    workers: int | None = None,
) -> SeriesTable:
    """Fidelity at t_f against total protocol duration for each method."""
    t_totals = _ascending(t_totals, "t_totals")
    methods = [Method(m) for m in methods]
    base = base or PRESETS[Method.TQD]
    jobs = [(t, m) for t in t_totals for m in methods]

    def one(job):
        t_total, m = job
        try:
            params = duration_params(m, t_total, base)
            return run_scenario(Scenario.from_params(m, params, n_steps))[1]
        except NUMERICAL_ERRORS as exc:
            log.warning("fidelity point failed, %s at t_total=%g: %s", m.value, t_total, exc)
            return math.nan

    fids = np.array(_map(one, jobs, workers)).reshape(len(t_totals), len(methods))
    meta = {
        "kind": "fidelity-curve",
        "base": base.to_dict(),
        "n_steps": n_steps,
        "rescaling": "adiabatic/tqd: alpha^2 = (omega + 2 xi) / (t_total/2), omega0 fixed; "
        f"lri: window [0, t_total], t12 = {lri.CENTER_FRACTION:g} t_total",
    }
    columns = ("t_total",) + tuple(f"fidelity_{m.value}" for m in methods)
    return SeriesTable(columns, np.column_stack([t_totals, fids]), meta)


def lri_design_report(t_i: float, t_f: float, t12: float, n_points: int = 1000) -> SeriesTable:
    """gamma, beta and the designed fields on ``n_points`` nodes spanning [t_i, t_f].

    The end nodes carry the one-sided limits of the fields.
    """
    coeffs = lri.AnsatzCoeffs.design(t_i, t_f, t12)
    t = np.linspace(t_i, t_f, n_points)
    f = lri.invert_fields(t, coeffs)
    meta = {
        "kind": "lri-design",
        "t_i": t_i,
        "t_f": t_f,
        "t12": t12,
        "g": coeffs.g.tolist(),
        "b": coeffs.b.tolist(),
    }
    return SeriesTable(
        ("t", "gamma", "beta", "omega_lr", "delta_lr"),
        np.column_stack([t, f.gamma, f.beta, f.omega_lr, f.delta_lr]),
        meta,
    )


def trajectory_table(traj: Trajectory, s: Scenario) -> SeriesTable:
    columns, data = traj.table()
    meta = {"kind": "trajectory", "params": s.params.to_dict(), "n_steps": s.grid.n_steps, **s.summary()}
    meta["fidelity"] = fidelity(traj.final, s.target)
    return SeriesTable(tuple(columns), data, meta)
