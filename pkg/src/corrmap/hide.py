"""Correlation matrices and couplings that hide them from the reduced dynamics."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .assignment import AssignmentMap, apply, product_assignment
from .dynamics import DynamicalMap, compose, cp_test
from .errors import DimensionError, ValidationError
from .tensor_core import DimSpec, as_matrix, check_hermitian, check_unitary, dag, partial_trace

TOL_HIDE = 1e-10


@dataclass(frozen=True)
class CorrelationDecomposition:
    """``rho = eta (x) tau + chi`` with ``eta``, ``tau`` the marginals."""

    eta: np.ndarray
    tau: np.ndarray
    chi: np.ndarray

    def reconstruct(self) -> np.ndarray:
        return np.kron(self.eta, self.tau) + self.chi


def _bipartite(dims) -> DimSpec:
    if isinstance(dims, DimSpec):
        return dims
    d_s, d_e = dims
    return DimSpec(int(d_s), int(d_e), 1)


def decompose(rho, dims) -> CorrelationDecomposition:
    """Split ``rho`` on S (x) E into marginals and correlation matrix.

    ``dims`` is a DimSpec (E = E_c (x) E_r) or a pair ``(d_s, d_e)``.
    """
    dims = _bipartite(dims)
    rho = check_hermitian(rho, name="rho")
    if rho.shape[0] != dims.total:
        raise DimensionError(f"state of dimension {rho.shape[0]} does not match {dims}")
    eta = partial_trace(rho, dims, "S")
    tau = partial_trace(rho, dims, "E")
    return CorrelationDecomposition(eta, tau, rho - np.kron(eta, tau))


def hiding_residual(w, chi, dims, check: bool = True) -> float:
    """``|tr_E[W chi W^dag]|_F``; at most ``TOL_HIDE`` means ``W`` hides ``chi``."""
    dims = _bipartite(dims)
    w = as_matrix(w)
    chi = as_matrix(chi)
    if w.shape != (dims.total, dims.total) or chi.shape != w.shape:
        raise DimensionError(f"W {w.shape} and chi {chi.shape} must act on {dims}")
    if check:
        check_unitary(w)
    return float(np.linalg.norm(partial_trace(w @ chi @ dag(w), dims, "S")))


def product_part_map(tau, w, dims) -> DynamicalMap:
    """``eta -> tr_E[W (eta (x) tau) W^dag]``; ``tau`` need not be positive."""
    return compose(product_assignment(tau, _bipartite(dims), require_state=False), w)


def hidden_map_is_cp(source, w, dims=None, eta: Optional[np.ndarray] = None,
                     tol_hide: float = TOL_HIDE, tol: float | None = None) -> bool:
    """Complete positivity of the reduced map when ``W`` hides the correlations.

    ``source`` is a joint state ``rho`` (with ``dims``) or an
    :class:`AssignmentMap` together with the input ``eta`` whose assigned
    state is examined. When the hiding condition fails there is no product
    reduction to test and :class:`ValidationError` is raised; use
    :func:`corrmap.dynamics.compose` on the full assignment instead.
    """
    if isinstance(source, AssignmentMap):
        if eta is None:
            raise ValidationError("an assignment source needs the input state eta")
        dims = source.dims
        rho = apply(source, eta)
    else:
        if dims is None:
            raise ValidationError("a state source needs dims")
        rho = source
    dims = _bipartite(dims)
    parts = decompose(rho, dims)
    residual = hiding_residual(w, parts.chi, dims)
    if residual > tol_hide:
        raise ValidationError(
            f"W does not hide the correlations (residual {residual:.3e}); "
            "use the full compose path instead")
    return cp_test(product_part_map(parts.tau, w, dims), tol).is_cp
