"""Refreshing (collision) model: the system meets a fresh ancilla every step.

Each step applies ``U_n = exp(-i T V_n)`` to ``eta_n (x) tau_anc`` and traces
out the ancilla. Only one ancilla is held at a time; the old one and its
correlations with the system are dropped before the next collision.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .assignment import product_assignment
from .dynamics import DynamicalMap, compose, cp_test
from .errors import DimensionError, NumericalError, ValidationError
from .hide import hiding_residual
from .tensor_core import (
    DimSpec, as_matrix, check_hermitian, dag, embed, expm_hermitian, min_eigenvalue,
    partial_trace, trace_norm,
)

TOL_STATE = 1e-9


@dataclass(frozen=True)
class CollisionConfig:
    """Parameters of a collision model.

    ``V`` acts on S (x) ancilla. ``V_steps``, when given, overrides ``V`` with
    one coupling per step (length ``steps``).
    """

    d_s: int
    d_anc: int
    V: np.ndarray
    T: float
    tau_anc: np.ndarray
    steps: int
    eta0: np.ndarray
    V_steps: Optional[Sequence[np.ndarray]] = field(default=None, compare=False)

    def __post_init__(self):
        if self.T <= 0:
            raise ValidationError("collision duration T must be positive")
        if int(self.steps) != self.steps or self.steps < 1:
            raise ValidationError("steps must be a positive integer")
        dim = self.d_s * self.d_anc
        couplings = [self.V] if self.V_steps is None else list(self.V_steps)
        if self.V_steps is not None and len(couplings) != self.steps:
            raise ValidationError("V_steps must have one coupling per step")
        for v in couplings:
            v = check_hermitian(v, name="V")
            if v.shape[0] != dim:
                raise DimensionError(f"V must act on S (x) ancilla of dimension {dim}")
        _check_density(self.tau_anc, self.d_anc, "tau_anc")
        _check_density(self.eta0, self.d_s, "eta0")

    @property
    def dims(self) -> DimSpec:
        return DimSpec(self.d_s, self.d_anc, 1)

    def coupling(self, step: int = 0) -> np.ndarray:
        return self.V if self.V_steps is None else self.V_steps[step]

    def unitary(self, step: int = 0) -> np.ndarray:
        return expm_hermitian(self.coupling(step), self.T)


def _check_density(m, d, name):
    m = check_hermitian(m, name=name)
    if m.shape[0] != d:
        raise DimensionError(f"{name} must have dimension {d}")
    if abs(np.trace(m).real - 1) > TOL_STATE:
        raise ValidationError(f"{name} must have unit trace")
    if min_eigenvalue(m) < -TOL_STATE:
        raise ValidationError(f"{name} must be positive semidefinite")


@dataclass
class Trajectory:
    states: list = field(default_factory=list)
    chi_norms: list = field(default_factory=list)
    step_cp_mineigs: list = field(default_factory=list)

    def distances(self, tau) -> list[float]:
        """Frobenius distance of each state to ``tau``."""
        return [float(np.linalg.norm(s - tau)) for s in self.states]

    def rows(self, tau) -> list[dict]:
        out = []
        for n, eta in enumerate(self.states):
            out.append({
                "step": n,
                "trace_distance_to_tau": 0.5 * trace_norm(eta - tau),
                "purity": float(np.trace(eta @ eta).real),
                "chi_norm": 0.0 if n == 0 else self.chi_norms[n - 1],
                "step_cp_mineig": None if n == 0 else self.step_cp_mineigs[n - 1],
            })
        return out


def collision_step(eta, cfg: CollisionConfig, step: int = 0):
    """One collision; returns ``(eta_next, chi_next)``.

    ``chi_next`` is the correlation matrix between S and the ancilla just used.
    """
    eta = as_matrix(eta)
    u = cfg.unitary(step)
    joint = u @ np.kron(eta, cfg.tau_anc) @ dag(u)
    eta_next = partial_trace(joint, cfg.dims, "S")
    anc_next = partial_trace(joint, cfg.dims, "E")
    return eta_next, joint - np.kron(eta_next, anc_next)


def step_map(cfg: CollisionConfig, step: int = 0) -> DynamicalMap:
    return compose(product_assignment(cfg.tau_anc, cfg.dims), cfg.unitary(step))


def simulate(cfg: CollisionConfig) -> Trajectory:
    traj = Trajectory(states=[np.array(cfg.eta0, dtype=complex)])
    eta = traj.states[0]
    for n in range(cfg.steps):
        eta, chi = collision_step(eta, cfg, n)
        if abs(np.trace(eta).real - 1) > TOL_STATE or min_eigenvalue(eta) < -TOL_STATE:
            raise NumericalError(f"state left the density-matrix set at step {n + 1}")
        traj.states.append(eta)
        traj.chi_norms.append(float(np.linalg.norm(chi)))
        if cfg.V_steps is not None or n == 0:
            mineig = cp_test(step_map(cfg, n)).min_choi_eig
        traj.step_cp_mineigs.append(mineig)
    return traj


def step_hiding_check(cfg: CollisionConfig, chi_prev, step: int = 0,
                      ancilla: str = "fresh") -> float:
    """Hiding residual of the next collision on the S-vs-previous-ancilla correlations.

    The joint space is S (x) previous ancilla (x) fresh ancilla and the
    correlation matrix is ``chi_prev (x) tau_anc``. ``ancilla="previous"``
    wires the coupling to the old ancilla instead, which generally does not
    hide anything.
    """
    d_s, d_a = cfg.d_s, cfg.d_anc
    chi_prev = as_matrix(chi_prev)
    if chi_prev.shape != (d_s * d_a, d_s * d_a):
        raise DimensionError("chi_prev must act on S (x) previous ancilla")
    dims = DimSpec(d_s, d_a, d_a)
    targets = {"fresh": (0, 2), "previous": (0, 1)}[ancilla]
    w = embed(cfg.unitary(step), dims, targets)
    chi = np.kron(chi_prev, cfg.tau_anc)
    return hiding_residual(w, chi, dims)
