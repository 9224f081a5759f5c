"""Reduced dynamical maps obtained from an assignment map and a joint unitary.

Choi convention: ``choi = sum_ij |i><j| (x) B(|i><j|)`` (input factor first),
so a trace-preserving map has ``tr(choi) = d_s`` and complete positivity is
exactly ``choi >= 0``. The eigen form ``B(eta) = sum_k lambda_k C_k eta C_k^dag``
comes from ``choi = sum_k lambda_k |v_k><v_k|`` with ``C_k[a, i] = v_k[i*d + a]``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import NamedTuple, Optional, Sequence

import numpy as np

from .assignment import TOL_CONSISTENCY, AssignmentMap, check_consistency, structured_states
from .errors import DimensionError, NotHermitianError, ValidationError
from .rand import haar_state, rng_from
from .tensor_core import as_matrix, check_unitary, dag, is_hermitian

TOL_TP = 1e-9


def tol_cp(d_s: int) -> float:
    return 1e-9 * d_s


@dataclass(frozen=True)
class DynamicalMap:
    d_s: int
    choi: np.ndarray
    lambdas: np.ndarray = field(init=False, repr=False, compare=False)
    ops: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        choi = as_matrix(self.choi)
        d = int(self.d_s)
        if choi.shape != (d * d, d * d):
            raise DimensionError(f"Choi matrix of shape {choi.shape} does not fit d_s = {d}")
        if not is_hermitian(choi):
            raise NotHermitianError("Choi matrix is not Hermitian")
        choi = 0.5 * (choi + dag(choi))
        lambdas, vecs = np.linalg.eigh(choi)
        ops = np.stack([vecs[:, k].reshape(d, d).T for k in range(d * d)])
        for arr in (choi, lambdas, ops):
            arr.setflags(write=False)
        object.__setattr__(self, "d_s", d)
        object.__setattr__(self, "choi", choi)
        object.__setattr__(self, "lambdas", lambdas)
        object.__setattr__(self, "ops", ops)

    @property
    def eigen_form(self) -> list[tuple[float, np.ndarray]]:
        return list(zip(self.lambdas.tolist(), self.ops))

    def tp_residual(self) -> float:
        """``|sum_k lambda_k C_k^dag C_k - I|_F``."""
        s = np.einsum("k,kai,kaj->ij", self.lambdas, self.ops.conj(), self.ops)
        return float(np.linalg.norm(s - np.eye(self.d_s)))

    def __call__(self, eta):
        return apply_map(self, eta)


class CPResult(NamedTuple):
    is_cp: bool
    min_choi_eig: float


@dataclass(frozen=True)
class PositivityReport:
    """Outcome of a complete-positivity test and a sampled positivity scan.

    ``witness_pair`` is ``(r, s)`` for the worst probe: ``r`` is the input
    (a ket for pure probes, a density matrix for supplied mixed probes) and
    ``s`` the output eigenvector with the most negative eigenvalue. It is set
    only when ``positivity_scan_min < -tol``.
    """

    is_cp: bool
    min_choi_eig: float
    positivity_scan_min: float
    witness_pair: Optional[tuple[np.ndarray, np.ndarray]]
    samples_used: int

    @property
    def violation_found(self) -> bool:
        return self.witness_pair is not None


def choi_from_terms(alphas, kraus, d_s: int, d_e: int) -> np.ndarray:
    """Choi matrix of ``eta -> sum_k alphas_k tr_E[K_k eta K_k^dag]``."""
    K = np.asarray(kraus).reshape(len(alphas), d_s, d_e, d_s)
    c = np.einsum("k,kaei,kbej->iajb", alphas, K, K.conj())
    return c.reshape(d_s * d_s, d_s * d_s)


def compose(a: AssignmentMap, u, check: bool = True) -> DynamicalMap:
    """Dynamical map ``eta -> tr_E[U A[eta] U^dag]``."""
    u = as_matrix(u)
    dims = a.dims
    if u.shape != (dims.total, dims.total):
        raise DimensionError(f"unitary of shape {u.shape} does not act on {dims}")
    if check:
        check_unitary(u)
        res = check_consistency(a)
        if res > TOL_CONSISTENCY:
            raise ValidationError(f"assignment is not consistent (residual {res:.3e})")
    kraus = np.einsum("xy,kyi->kxi", u, a.ops)
    return DynamicalMap(dims.d_s, choi_from_terms(a.alphas, kraus, dims.d_s, dims.d_e))


def apply_map(b: DynamicalMap, eta) -> np.ndarray:
    eta = as_matrix(eta)
    if eta.shape != (b.d_s, b.d_s):
        raise DimensionError(f"input of shape {eta.shape} does not match d_s = {b.d_s}")
    return np.einsum("k,kai,ij,kbj->ab", b.lambdas, b.ops, eta, b.ops.conj())


def cp_test(b: DynamicalMap, tol: float | None = None) -> CPResult:
    tol = tol_cp(b.d_s) if tol is None else tol
    m = float(np.linalg.eigvalsh(b.choi)[0])
    return CPResult(m >= -tol, m)


def _outputs_for_kets(b: DynamicalMap, kets: np.ndarray) -> np.ndarray:
    v = np.einsum("kai,ni->kna", b.ops, kets)
    return np.einsum("k,kna,knb->nab", b.lambdas, v, v.conj())


def positivity_scan(b: DynamicalMap, samples: int = 2000, seed=0, probes: Sequence = (),
                    tol: float = 1e-9) -> PositivityReport:
    """Minimum output eigenvalue over sampled pure inputs.

    Inputs are the structured states, then any caller ``probes`` (kets or
    density matrices), then ``samples`` Haar-random kets. The minimisation
    over the output vector ``|s>`` is exact (an eigensolve per input). A value
    below ``-tol`` certifies nonpositivity; otherwise nothing is certified.
    """
    d = b.d_s
    inputs: list[np.ndarray] = list(structured_states(d))
    for p in probes:
        p = np.asarray(p, dtype=complex)
        if p.shape not in ((d,), (d, d)):
            raise DimensionError(f"probe of shape {p.shape} does not match d_s = {d}")
        inputs.append(p / np.linalg.norm(p) if p.ndim == 1 else p)
    rng = rng_from(seed)
    inputs.extend(haar_state(d, rng) for _ in range(samples))

    outputs = np.empty((len(inputs), d, d), dtype=complex)
    kets = [i for i, x in enumerate(inputs) if x.ndim == 1]
    mixed = [i for i, x in enumerate(inputs) if x.ndim == 2]
    if kets:
        outputs[kets] = _outputs_for_kets(b, np.array([inputs[i] for i in kets]))
    for i in mixed:
        outputs[i] = apply_map(b, inputs[i])
    outputs = 0.5 * (outputs + np.conj(np.swapaxes(outputs, 1, 2)))
    values, vectors = np.linalg.eigh(outputs)

    worst = int(np.argmin(values[:, 0]))
    scan_min = float(values[worst, 0])
    witness = (inputs[worst], vectors[worst][:, 0]) if scan_min < -tol else None
    cp = cp_test(b)
    return PositivityReport(cp.is_cp, cp.min_choi_eig, scan_min, witness, len(inputs))


class Weights(NamedTuple):
    weights: np.ndarray
    total: float


def _unit(v, name):
    v = np.asarray(v, dtype=complex).ravel()
    if abs(np.linalg.norm(v) - 1.0) > 1e-9:
        raise ValidationError(f"{name} must be a unit vector")
    return v


def positivity_weights(a: AssignmentMap, u, r, s) -> Weights:
    """Weights ``w_k = sum_e |<s e| U A_k |r>|^2`` and ``total = sum_k alpha_k w_k``.

    ``total`` equals ``<s| B(|r><r|) |s>`` for ``B = compose(a, u)``.
    """
    dims = a.dims
    r = _unit(r, "r")
    s = _unit(s, "s")
    u = as_matrix(u)
    if r.size != dims.d_s or s.size != dims.d_s or u.shape != (dims.total, dims.total):
        raise DimensionError("r, s or u do not match the assignment dimensions")
    joint = np.einsum("xy,kyi,i->kx", u, a.ops, r).reshape(len(a), dims.d_s, dims.d_e)
    amps = np.einsum("a,kae->ke", s.conj(), joint)
    w = np.sum(np.abs(amps) ** 2, axis=1)
    return Weights(w, float(np.dot(a.alphas, w)))
