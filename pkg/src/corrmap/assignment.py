"""Assignment maps from system operators to system-environment operators.

Two representations are supported:

* eigenvalue form ``A[eta] = sum_k alpha_k A_k eta A_k^dag`` with signed real
  ``alpha_k`` and rectangular ``A_k`` of shape ``(d_s*d_ec*d_er, d_s)``;
* basis form, where a linearly independent set of system states ``P_i`` is
  sent to joint operators ``R_i`` and ``A[eta] = sum_i tr[Delta_i eta] R_i``
  with ``{Delta_i}`` the dual set of ``{P_i}``.

:func:`from_basis` converts the second into the first.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple, Optional, Sequence

import numpy as np

from .errors import DimensionError, ValidationError
from .rand import haar_state, rng_from
from .tensor_core import (
    DimSpec, as_matrix, check_hermitian, dag, hermitian_eig, is_hermitian, partial_trace,
)

TOL_CONSISTENCY = 1e-9
TOL_BASIS = 1e-10
RANK_RTOL = 1e-10
# terms with |alpha| below this fraction of the largest are dropped
_ALPHA_CUTOFF = 1e-14


@dataclass(frozen=True)
class HermBasis:
    """Hermitian operator basis with ``tr[G_i G_j] = 2 delta_ij``; ``gammas[0]`` is ``sqrt(2/n) I``."""

    gammas: np.ndarray

    @property
    def n(self) -> int:
        return self.gammas.shape[1]

    def __len__(self):
        return self.gammas.shape[0]

    def coefficients(self, m) -> np.ndarray:
        """Expansion coefficients ``h_j`` with ``m = sum_j h_j G_j``."""
        return np.einsum("jab,ba->j", self.gammas, m) / 2.0


@dataclass(frozen=True)
class BasisAssignment:
    P: np.ndarray
    R: np.ndarray
    Delta: np.ndarray

    def apply(self, eta) -> np.ndarray:
        coeffs = np.einsum("iab,ba->i", self.Delta, eta)
        return np.einsum("i,iab->ab", coeffs, self.R)


@dataclass(frozen=True)
class AssignmentMap:
    dims: DimSpec
    alphas: np.ndarray
    ops: np.ndarray
    basis: Optional[BasisAssignment] = None

    def __post_init__(self):
        alphas = np.asarray(self.alphas, dtype=float).ravel()
        ops = np.asarray(self.ops, dtype=complex)
        if ops.ndim == 2:
            ops = ops[None]
        if ops.shape[1:] != (self.dims.total, self.dims.d_s) or ops.shape[0] != alphas.size:
            raise DimensionError(
                f"terms of shape {ops.shape} with {alphas.size} eigenvalues do not fit {self.dims}")
        alphas.setflags(write=False)
        ops.setflags(write=False)
        object.__setattr__(self, "alphas", alphas)
        object.__setattr__(self, "ops", ops)

    @classmethod
    def from_terms(cls, dims: DimSpec, terms) -> "AssignmentMap":
        terms = list(terms)
        if not terms:
            raise ValidationError("an assignment map needs at least one term")
        alphas = [float(np.real(a)) for a, _ in terms]
        ops = np.stack([as_matrix(A) for _, A in terms])
        return cls(dims, np.array(alphas), ops)

    @property
    def terms(self) -> list[tuple[float, np.ndarray]]:
        return list(zip(self.alphas.tolist(), self.ops))

    def __len__(self):
        return self.alphas.size

    def __call__(self, eta):
        return apply(self, eta)


def _gell_mann(n: int) -> np.ndarray:
    mats = [np.sqrt(2.0 / n) * np.eye(n, dtype=complex)]
    for j in range(n):
        for k in range(j + 1, n):
            m = np.zeros((n, n), dtype=complex)
            m[j, k] = m[k, j] = 1.0
            mats.append(m)
    for j in range(n):
        for k in range(j + 1, n):
            m = np.zeros((n, n), dtype=complex)
            m[j, k] = -1j
            m[k, j] = 1j
            mats.append(m)
    for l in range(1, n):
        diag = np.zeros(n)
        diag[:l] = 1.0
        diag[l] = -l
        mats.append(np.sqrt(2.0 / (l * (l + 1))) * np.diag(diag).astype(complex))
    return np.stack(mats)


def herm_basis(n: int) -> HermBasis:
    """Generalized Gell-Mann basis of ``n x n`` Hermitian matrices.

    Ordered as scaled identity, symmetric, antisymmetric, then diagonal
    families; for ``n = 2`` this is ``(I, X, Y, Z)``.
    """
    if int(n) != n or n < 1:
        raise DimensionError(f"basis dimension must be a positive integer, got {n!r}")
    return HermBasis(_gell_mann(int(n)))


def _as_stack(mats, name) -> np.ndarray:
    arr = np.asarray([as_matrix(m) for m in mats]) if not isinstance(mats, np.ndarray) \
        else np.asarray(mats, dtype=complex)
    if arr.ndim != 3 or arr.shape[1] != arr.shape[2]:
        raise DimensionError(f"{name} must be a list of square matrices")
    return arr.astype(complex)


def dual_basis(P: Sequence) -> np.ndarray:
    """Dual set ``Delta_i`` with ``tr[Delta_i P_j] = delta_ij``.

    ``P_i = sum_j h_ij G_j`` in the Gell-Mann basis; with ``D^T = H^{-1}`` the
    duals are ``Delta_i = 1/2 sum_j d_ij G_j``. Raises
    :class:`~corrmap.errors.ValidationError` if ``H`` is numerically singular.
    """
    P = _as_stack(P, "P")
    n = P.shape[1]
    if P.shape[0] != n * n:
        raise DimensionError(f"need {n * n} basis elements for dimension {n}, got {P.shape[0]}")
    for i, p in enumerate(P):
        if not is_hermitian(p):
            raise ValidationError(f"basis element {i} is not Hermitian")
    gammas = herm_basis(n).gammas
    H = np.einsum("iab,jba->ij", P, gammas).real / 2.0
    sv = np.linalg.svd(H, compute_uv=False)
    if sv[-1] < RANK_RTOL * sv[0]:
        raise ValidationError("basis elements are linearly dependent")
    D = np.linalg.solve(H, np.eye(n * n)).T
    return 0.5 * np.einsum("ij,jab->iab", D, gammas)


def apply(a: AssignmentMap, eta) -> np.ndarray:
    eta = as_matrix(eta)
    d = a.dims.d_s
    if eta.shape != (d, d):
        raise DimensionError(f"input of shape {eta.shape} does not match d_s = {d}")
    return np.einsum("k,kai,ij,kbj->ab", a.alphas, a.ops, eta, a.ops.conj())


def _matrix_units(d: int):
    for i in range(d):
        for j in range(d):
            unit = np.zeros((d, d), dtype=complex)
            unit[i, j] = 1.0
            yield unit


def check_consistency(a: AssignmentMap) -> float:
    """Largest ``|tr_E A[B] - B|_F`` over the matrix units ``B = |i><j|`` of S."""
    worst = 0.0
    for unit in _matrix_units(a.dims.d_s):
        reduced = partial_trace(apply(a, unit), a.dims, "S")
        worst = max(worst, float(np.linalg.norm(reduced - unit)))
    return worst


def _drop_small(alphas, ops):
    alphas = np.asarray(alphas, dtype=float)
    if alphas.size == 0:
        return alphas, ops
    keep = np.abs(alphas) > _ALPHA_CUTOFF * np.abs(alphas).max()
    return alphas[keep], ops[keep]


def product_assignment(tau, dims: DimSpec, require_state: bool = True) -> AssignmentMap:
    """Uncorrelated assignment ``eta -> eta (x) tau`` with ``tau`` on E_c (x) E_r.

    With ``require_state=False`` any unit-trace Hermitian ``tau`` is accepted
    and its negative eigenvalues become negative ``alpha_k``.
    """
    tau = check_hermitian(tau, name="tau")
    if tau.shape[0] != dims.d_e:
        raise DimensionError(f"tau has dimension {tau.shape[0]}, expected {dims.d_e}")
    if abs(np.trace(tau) - 1) > 1e-9:
        raise ValidationError("tau must have unit trace")
    eig = hermitian_eig(tau)
    values = eig.values
    if require_state:
        if values[0] < -1e-9:
            raise ValidationError(f"tau is not positive (min eigenvalue {values[0]:.3e})")
        values = np.clip(values, 0.0, None)
    eye = np.eye(dims.d_s)
    ops = np.stack([np.kron(eye, eig.vectors[:, [n]]) for n in range(dims.d_e)])
    alphas, ops = _drop_small(values, ops)
    return AssignmentMap(dims, alphas, ops)


def from_basis(P: Sequence, R: Sequence, dims: DimSpec) -> AssignmentMap:
    """Eigenvalue form of the assignment sending each ``P_i`` to ``R_i``.

    With ``Delta_i = sum_m d_im |d_im><d_im|`` and ``R_i = sum_n r_in |r_in><r_in|``,
    ``tr[Delta_i eta] R_i = sum_mn d_im r_in (|r_in><d_im|) eta (|d_im><r_in|)``,
    giving terms ``alpha = d_im r_in`` and ``A = |r_in><d_im|``.
    """
    P = _as_stack(P, "P")
    R = _as_stack(R, "R")
    if P.shape[1] != dims.d_s or R.shape[1] != dims.total or R.shape[0] != P.shape[0]:
        raise DimensionError("P and R do not match the given dimensions")
    for i in range(R.shape[0]):
        if not is_hermitian(R[i], TOL_BASIS):
            raise ValidationError(f"R[{i}] is not Hermitian")
        err = np.linalg.norm(partial_trace(R[i], dims, "S") - P[i])
        if err > TOL_BASIS:
            raise ValidationError(f"R[{i}] is inconsistent: |tr_E R - P|_F = {err:.3e}")
    Delta = dual_basis(P)

    alphas, ops = [], []
    for Di, Ri in zip(Delta, R):
        de = hermitian_eig(Di)
        re = hermitian_eig(Ri)
        for m in range(dims.d_s):
            for n in range(dims.total):
                alphas.append(de.values[m] * re.values[n])
                ops.append(np.outer(re.vectors[:, n], de.vectors[:, m].conj()))
    alphas, ops = _drop_small(np.array(alphas), np.stack(ops))
    return AssignmentMap(dims, alphas, ops, BasisAssignment(P, R, Delta))


def structured_states(d: int) -> list[np.ndarray]:
    """Computational basis states plus ``(|i> +- |j>)/sqrt2`` and ``(|i> +- i|j>)/sqrt2``."""
    eye = np.eye(d, dtype=complex)
    states = [eye[i] for i in range(d)]
    for i in range(d):
        for j in range(i + 1, d):
            for phase in (1, -1, 1j, -1j):
                states.append((eye[i] + phase * eye[j]) / np.sqrt(2))
    return states


class Witness(NamedTuple):
    eta: np.ndarray
    min_eig: float


def _batched_min_eig(a: AssignmentMap, states: np.ndarray, chunk: int = 256) -> np.ndarray:
    out = []
    for start in range(0, len(states), chunk):
        block = states[start:start + chunk]
        v = np.einsum("kai,ni->kna", a.ops, block)
        mats = np.einsum("k,kna,knb->nab", a.alphas, v, v.conj())
        mats = 0.5 * (mats + np.conj(np.swapaxes(mats, 1, 2)))
        out.append(np.linalg.eigvalsh(mats)[:, 0])
    return np.concatenate(out)


def negativity_witness(a: AssignmentMap, samples: int = 2000, seed=0,
                       tol: float = 1e-9) -> Optional[Witness]:
    """Search pure inputs whose assigned joint operator has a negative eigenvalue.

    Structured probes (basis states, pairwise superpositions, eigenvectors of
    the ``P_i`` when known) come first, then ``samples`` Haar-random states.
    Returns the most negative case found, or ``None`` when nothing falls below
    ``-tol``; ``None`` is not a proof of positivity.
    """
    d = a.dims.d_s
    probes = structured_states(d)
    if a.basis is not None:
        for p in a.basis.P:
            vecs = hermitian_eig(p).vectors
            probes.extend(vecs[:, m] for m in range(d))
    rng = rng_from(seed)
    probes.extend(haar_state(d, rng) for _ in range(samples))
    states = np.array(probes)

    mins = _batched_min_eig(a, states)
    best = int(np.argmin(mins))
    if mins[best] >= -tol:
        return None
    r = states[best]
    return Witness(np.outer(r, r.conj()), float(mins[best]))
