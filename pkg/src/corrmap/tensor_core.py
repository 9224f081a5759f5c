"""Dense complex linear algebra shared by every other module.

Matrices are plain ``numpy.ndarray`` objects with ``complex128`` dtype.
Multipartite operators always use the factor ordering S (x) E_c (x) E_r,
and a composite index is row-major over the factors::

    index(s, c, r) = (s * d_ec + c) * d_er + r

so ``kron(a_S, kron(b_Ec, c_Er))`` is the operator ``a (x) b (x) c``.
Every reshape in the package relies on this layout and nothing else.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence, Union

import numpy as np

from .errors import DimensionError, NotHermitianError, NotUnitaryError

TOL_HERM = 1e-9
TOL_UNITARY = 1e-9
_HERM_FLOOR = 1e-12


@dataclass(frozen=True)
class DimSpec:
    """Dimensions of the S, E_c and E_r tensor factors."""

    d_s: int
    d_ec: int = 1
    d_er: int = 1

    def __post_init__(self):
        for name in ("d_s", "d_ec", "d_er"):
            value = getattr(self, name)
            if int(value) != value or value < 1:
                raise DimensionError(f"{name} must be a positive integer, got {value!r}")

    @property
    def d_e(self) -> int:
        return self.d_ec * self.d_er

    @property
    def total(self) -> int:
        return self.d_s * self.d_ec * self.d_er

    @property
    def factors(self) -> tuple[int, int, int]:
        return (self.d_s, self.d_ec, self.d_er)


@dataclass(frozen=True)
class EigDecomp:
    values: np.ndarray
    vectors: np.ndarray

    def reconstruct(self) -> np.ndarray:
        return (self.vectors * self.values) @ self.vectors.conj().T


Dims = Union[DimSpec, Sequence[int]]

_NAMED_FACTORS = {
    "S": (0,),
    "Ec": (1,),
    "Er": (2,),
    "E": (1, 2),
    "SEc": (0, 1),
    "SEr": (0, 2),
    "SE": (0, 1, 2),
}


def _factors(dims: Dims) -> tuple[int, ...]:
    if isinstance(dims, DimSpec):
        return dims.factors
    out = tuple(int(d) for d in dims)
    if not out or min(out) < 1:
        raise DimensionError(f"invalid factor dimensions {dims!r}")
    return out


def _keep_indices(dims: Dims, keep) -> tuple[int, ...]:
    if isinstance(keep, str):
        if not isinstance(dims, DimSpec):
            raise DimensionError("named subsystem selectors need a DimSpec")
        try:
            return _NAMED_FACTORS[keep]
        except KeyError:
            raise DimensionError(f"unknown subsystem {keep!r}") from None
    if isinstance(keep, (int, np.integer)):
        return (int(keep),)
    return tuple(sorted(int(k) for k in keep))


def dag(m: np.ndarray) -> np.ndarray:
    return np.conj(m).T


def ket(index: int, d: int) -> np.ndarray:
    v = np.zeros(d, dtype=complex)
    v[index] = 1.0
    return v


def proj(v: np.ndarray) -> np.ndarray:
    """Outer product ``|v><v|`` of a state vector."""
    v = np.asarray(v, dtype=complex).ravel()
    return np.outer(v, v.conj())


def as_matrix(m) -> np.ndarray:
    m = np.asarray(m, dtype=complex)
    if m.ndim != 2:
        raise DimensionError(f"expected a 2-d matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise DimensionError("matrix has non-finite entries")
    return m


def _square(m, name="matrix") -> np.ndarray:
    m = as_matrix(m)
    if m.shape[0] != m.shape[1]:
        raise DimensionError(f"{name} must be square, got shape {m.shape}")
    return m


def hermiticity_error(m: np.ndarray) -> float:
    return float(np.linalg.norm(m - dag(m)))


def is_hermitian(m, tol: float = TOL_HERM) -> bool:
    m = np.asarray(m)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        return False
    scale = np.linalg.norm(m)
    return hermiticity_error(m) <= max(tol * scale, _HERM_FLOOR)


def check_hermitian(m, tol: float = TOL_HERM, name: str = "matrix") -> np.ndarray:
    """Validate Hermiticity and return the exactly symmetrized matrix."""
    m = _square(m, name)
    if not is_hermitian(m, tol):
        raise NotHermitianError(
            f"{name} is not Hermitian (|M - M^dag|_F = {hermiticity_error(m):.3e})")
    return 0.5 * (m + dag(m))


def unitarity_error(u: np.ndarray) -> float:
    return float(np.linalg.norm(u @ dag(u) - np.eye(u.shape[0])))


def check_unitary(u, tol: float = TOL_UNITARY, name: str = "unitary") -> np.ndarray:
    u = _square(u, name)
    err = unitarity_error(u)
    if err > tol:
        raise NotUnitaryError(f"{name} is not unitary (|U U^dag - I|_F = {err:.3e})")
    return u


def kron(a, b) -> np.ndarray:
    return np.kron(as_matrix(a), as_matrix(b))


def partial_trace(m, dims: Dims, keep) -> np.ndarray:
    """Trace out every tensor factor not listed in ``keep``.

    ``dims`` is a :class:`DimSpec` or any sequence of factor dimensions.
    ``keep`` is a factor index, a sequence of indices, or (with a DimSpec)
    one of ``"S"``, ``"Ec"``, ``"Er"``, ``"E"``, ``"SEc"``, ``"SEr"``.
    Kept factors stay in their original order.
    """
    m = _square(m)
    factors = _factors(dims)
    n = int(np.prod(factors))
    if m.shape[0] != n:
        raise DimensionError(
            f"matrix of dimension {m.shape[0]} does not match factors {factors}")
    kept = _keep_indices(dims, keep)
    if any(k < 0 or k >= len(factors) for k in kept):
        raise DimensionError(f"subsystem selector {keep!r} out of range")

    nf = len(factors)
    t = m.reshape(factors + factors)
    for axis in reversed(range(nf)):
        if axis not in kept:
            t = np.trace(t, axis1=axis, axis2=axis + t.ndim // 2)
    d_out = int(np.prod([factors[k] for k in kept])) if kept else 1
    return t.reshape(d_out, d_out)


def trace_env(m, dims: Dims) -> np.ndarray:
    """Reduced operator on the first factor (S)."""
    return partial_trace(m, dims, (0,))


def trace_sys(m, dims: Dims) -> np.ndarray:
    """Reduced operator on every factor except the first."""
    return partial_trace(m, dims, tuple(range(1, len(_factors(dims)))))


def permute_factors(m, dims: Dims, order: Sequence[int]) -> np.ndarray:
    """Reorder tensor factors of an operator; new factor i is old factor ``order[i]``."""
    factors = _factors(dims)
    nf = len(factors)
    m = _square(m)
    t = m.reshape(factors + factors)
    axes = list(order) + [nf + o for o in order]
    n = int(np.prod(factors))
    return t.transpose(axes).reshape(n, n)


def embed(op, dims: Dims, targets: Sequence[int]) -> np.ndarray:
    """Operator acting as ``op`` on ``targets`` (in that order) and identity elsewhere."""
    factors = _factors(dims)
    targets = list(targets)
    rest = [i for i in range(len(factors)) if i not in targets]
    op = _square(op)
    d_t = int(np.prod([factors[i] for i in targets]))
    if op.shape[0] != d_t:
        raise DimensionError(f"operator dimension {op.shape[0]} != target dimension {d_t}")
    d_rest = int(np.prod([factors[i] for i in rest])) if rest else 1
    full = np.kron(op, np.eye(d_rest))
    order = targets + rest
    inverse = [order.index(i) for i in range(len(factors))]
    return permute_factors(full, [factors[i] for i in order], inverse)


def hermitian_eig(m, tol: float = TOL_HERM) -> EigDecomp:
    """Eigendecomposition of a Hermitian matrix, eigenvalues ascending."""
    h = check_hermitian(m, tol)
    values, vectors = np.linalg.eigh(h)
    return EigDecomp(values, vectors)


def expm_hermitian(h, t: float) -> np.ndarray:
    """``exp(-i t h)`` for Hermitian ``h`` through its spectral decomposition."""
    eig = hermitian_eig(h)
    phases = np.exp(-1j * t * eig.values)
    return (eig.vectors * phases) @ dag(eig.vectors)


def min_eigenvalue(m, tol: float = TOL_HERM) -> float:
    h = check_hermitian(m, tol)
    return float(np.linalg.eigvalsh(h)[0])


def is_psd(m, tol: float = 1e-9) -> bool:
    return min_eigenvalue(m) >= -tol


def trace_norm(m) -> float:
    return float(np.abs(np.linalg.eigvalsh(check_hermitian(m))).sum())


def swap(d1: int, d2: int | None = None) -> np.ndarray:
    """Permutation operator exchanging two factors of dimensions ``d1`` and ``d2``."""
    d2 = d1 if d2 is None else d2
    out = np.zeros((d1 * d2, d1 * d2), dtype=complex)
    for i in range(d1):
        for j in range(d2):
            out[j * d1 + i, i * d2 + j] = 1.0
    return out
