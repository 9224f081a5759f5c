"""Explicit coupling that turns a nonpositive assigned state into nonpositive reduced dynamics.

Given a Hermitian, unit-trace ``omega`` on S (x) E_c with a negative
eigenvalue, the joint state ``omega (x) |0><0|`` on S (x) E_c (x) E_r (all of
dimension ``d``) is driven by ``U = U3 U2 U1``:

* ``U1`` rotates the eigenvectors of ``omega`` onto computational product
  states, most negative eigenvalue on ``|00>`` and the rest in ascending
  order on ``|01>, ..., |0,d-1>, |10>, ...``;
* ``U2`` copies ``j`` into E_r when S is ``|0>`` and E_c is ``|j>``;
* ``U3`` shifts S by ``j`` when E_c E_r is ``|jj>`` with ``j >= 1``.

After tracing out E the ``<0|.|0>`` entry of the reduced state equals the
negative eigenvalue.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple, Optional, Sequence

import numpy as np

from .assignment import AssignmentMap, from_basis
from .errors import DimensionError, ValidationError
from .tensor_core import DimSpec, check_hermitian, dag, hermitian_eig, ket, partial_trace, proj


def shift_op(d: int, j: int) -> np.ndarray:
    """Cyclic shift ``sum_k |k+j mod d><k|``."""
    if int(d) != d or d < 1:
        raise DimensionError(f"shift dimension must be positive, got {d!r}")
    d = int(d)
    out = np.zeros((d, d), dtype=complex)
    for k in range(d):
        out[(k + j) % d, k] = 1.0
    return out


@dataclass(frozen=True)
class RevealPlan:
    dims: DimSpec
    omega: np.ndarray
    r00: float
    u1: np.ndarray
    u2: np.ndarray
    u3: np.ndarray
    u_total: np.ndarray

    @property
    def d(self) -> int:
        return self.dims.d_s

    def initial_state(self) -> np.ndarray:
        """``omega (x) |0><0|`` on the full space."""
        return np.kron(self.omega, proj(ket(0, self.d)))


def pad_omega(omega, d: int) -> np.ndarray:
    n = omega.shape[0]
    if n > d * d:
        raise DimensionError(f"omega of dimension {n} does not fit in d^2 = {d * d}")
    out = np.zeros((d * d, d * d), dtype=complex)
    out[:n, :n] = omega
    return out


def control_copy(d: int) -> np.ndarray:
    """``U2``: with S in ``|0>``, map E_c E_r from ``|j 0>`` to ``|j j>``."""
    u = np.zeros((d ** 3, d ** 3), dtype=complex)
    eye = np.eye(d)
    for i in range(d):
        for j in range(d):
            block = shift_op(d, j) if (i == 0 and j >= 1) else eye
            u += np.kron(proj(np.kron(ket(i, d), ket(j, d))), block)
    return u


def control_shift(d: int) -> np.ndarray:
    """``U3``: shift S by ``j`` when E_c E_r is ``|j j>``, ``j >= 1``; identity otherwise."""
    u = np.zeros((d ** 3, d ** 3), dtype=complex)
    for j in range(d):
        for k in range(d):
            op_s = shift_op(d, j) if (j == k and j >= 1) else np.eye(d)
            u += np.kron(op_s, proj(np.kron(ket(j, d), ket(k, d))))
    return u


def build_reveal(omega, d: Optional[int] = None) -> RevealPlan:
    omega = check_hermitian(omega, name="omega")
    n = omega.shape[0]
    if d is None:
        d = int(np.ceil(np.sqrt(n) - 1e-12))
    if abs(np.trace(omega).real - 1.0) > 1e-9:
        raise ValidationError("omega must have unit trace")
    omega = pad_omega(omega, d)
    eig = hermitian_eig(omega)
    if eig.values[0] >= -1e-9:
        raise ValidationError("omega is positive semidefinite: nothing to reveal")

    # ascending eigenvalues land on ascending flat indices (00, 01, ..., 10, ...)
    w = dag(eig.vectors)
    u1 = np.kron(w, np.eye(d))
    u2 = control_copy(d)
    u3 = control_shift(d)
    return RevealPlan(DimSpec(d, d, d), omega, float(eig.values[0]),
                      u1, u2, u3, u3 @ u2 @ u1)


class RevealResult(NamedTuple):
    eta3: np.ndarray
    achieved: float


def verify_reveal(plan: RevealPlan) -> RevealResult:
    sigma0 = plan.initial_state()
    sigma3 = plan.u_total @ sigma0 @ dag(plan.u_total)
    eta3 = partial_trace(sigma3, plan.dims, "S")
    return RevealResult(eta3, float(eta3[0, 0].real))


def _default_completion(d: int) -> list[np.ndarray]:
    """Pure states spanning the Hermitian operators on ``d`` levels."""
    eye = np.eye(d, dtype=complex)
    states = [proj(eye[i]) for i in range(d)]
    for i in range(d):
        for j in range(i + 1, d):
            states.append(proj((eye[i] + eye[j]) / np.sqrt(2)))
            states.append(proj((eye[i] + 1j * eye[j]) / np.sqrt(2)))
    return states


def witness_assignment(omega, d: Optional[int] = None,
                       completion: Optional[Sequence] = None) -> tuple[AssignmentMap, np.ndarray]:
    """Consistent assignment with ``A[eta*] = omega (x) |0><0|`` for ``eta* = tr_Ec omega``.

    The remaining basis elements come from ``completion`` (default: basis
    projectors and pairwise superpositions) and are assigned the uncorrelated
    ``P (x) |00><00|``; candidates linearly dependent on those already chosen
    are skipped. Returns ``(assignment, eta_star)``.
    """
    omega = check_hermitian(omega, name="omega")
    if d is None:
        d = int(round(np.sqrt(omega.shape[0])))
    if omega.shape[0] != d * d:
        raise DimensionError("omega must act on S (x) E_c with both of dimension d")
    dims = DimSpec(d, d, d)
    e0 = proj(ket(0, d))
    eta_star = partial_trace(omega, (d, d), 0)
    env0 = np.kron(e0, e0)

    P = [eta_star]
    R = [np.kron(omega, e0)]
    candidates = _default_completion(d) if completion is None else list(completion)
    for cand in candidates:
        if len(P) == d * d:
            break
        trial = np.array([p.ravel() for p in P + [cand]])
        if np.linalg.matrix_rank(trial, tol=1e-8) == len(P) + 1:
            P.append(cand)
            R.append(np.kron(cand, env0))
    if len(P) != d * d:
        raise ValidationError("could not complete a linearly independent basis around eta*")
    return from_basis(P, R, dims), eta_star
