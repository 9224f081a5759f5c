"""JSON encodings of matrices, assignment maps, dynamical maps and collision configs.

A matrix is ``{"rows": n, "cols": m, "re": [...], "im": [...]}`` with the
real and imaginary parts in row-major order.
"""
from __future__ import annotations

import json
import math
from numbers import Real

import numpy as np

from .assignment import AssignmentMap, from_basis
from .collision import CollisionConfig
from .dynamics import DynamicalMap
from .errors import ValidationError
from .tensor_core import DimSpec


def _require(obj, key, where):
    if not isinstance(obj, dict) or key not in obj:
        raise ValidationError(f"{where}: missing field {key!r}")
    return obj[key]


def _int(value, where) -> int:
    if isinstance(value, bool) or not isinstance(value, int) or value < 1:
        raise ValidationError(f"{where}: expected a positive integer, got {value!r}")
    return value


def _real(value, where) -> float:
    if isinstance(value, bool) or not isinstance(value, Real) or not math.isfinite(value):
        raise ValidationError(f"{where}: expected a finite real number, got {value!r}")
    return float(value)


def matrix_to_obj(m) -> dict:
    m = np.asarray(m, dtype=complex)
    return {
        "rows": int(m.shape[0]),
        "cols": int(m.shape[1]),
        "re": m.real.ravel().tolist(),
        "im": m.imag.ravel().tolist(),
    }


def matrix_from_obj(obj, where: str = "matrix") -> np.ndarray:
    rows = _int(_require(obj, "rows", where), f"{where}.rows")
    cols = _int(_require(obj, "cols", where), f"{where}.cols")
    re = _require(obj, "re", where)
    im = _require(obj, "im", where)
    if not isinstance(re, list) or not isinstance(im, list):
        raise ValidationError(f"{where}: 're' and 'im' must be lists")
    if len(re) != rows * cols or len(im) != rows * cols:
        raise ValidationError(f"{where}: expected {rows * cols} entries in 're' and 'im'")
    vals = [_real(x, f"{where}.re") for x in re]
    ivals = [_real(x, f"{where}.im") for x in im]
    return (np.array(vals) + 1j * np.array(ivals)).reshape(rows, cols)


def dims_from_obj(obj, where="dims") -> DimSpec:
    return DimSpec(_int(_require(obj, "d_s", where), f"{where}.d_s"),
                   _int(_require(obj, "d_ec", where), f"{where}.d_ec"),
                   _int(_require(obj, "d_er", where), f"{where}.d_er"))


def dims_to_obj(dims: DimSpec) -> dict:
    return {"d_s": dims.d_s, "d_ec": dims.d_ec, "d_er": dims.d_er}


def assignment_to_obj(a: AssignmentMap, form: str = "eigen") -> dict:
    out = {"dims": dims_to_obj(a.dims), "form": form}
    if form == "eigen":
        out["terms"] = [{"alpha": float(alpha), "A": matrix_to_obj(A)} for alpha, A in a.terms]
    elif form == "basis":
        if a.basis is None:
            raise ValidationError("assignment has no basis form")
        out["P"] = [matrix_to_obj(p) for p in a.basis.P]
        out["R"] = [matrix_to_obj(r) for r in a.basis.R]
    else:
        raise ValidationError(f"unknown assignment form {form!r}")
    return out


def assignment_from_obj(obj) -> AssignmentMap:
    dims = dims_from_obj(_require(obj, "dims", "assignment"))
    form = _require(obj, "form", "assignment")
    if form == "eigen":
        terms = _require(obj, "terms", "assignment")
        if not isinstance(terms, list) or not terms:
            raise ValidationError("assignment.terms must be a non-empty list")
        parsed = []
        for i, t in enumerate(terms):
            alpha = _real(_require(t, "alpha", f"terms[{i}]"), f"terms[{i}].alpha")
            A = matrix_from_obj(_require(t, "A", f"terms[{i}]"), f"terms[{i}].A")
            if A.shape != (dims.total, dims.d_s):
                raise ValidationError(f"terms[{i}].A must be {dims.total}x{dims.d_s}")
            parsed.append((alpha, A))
        return AssignmentMap.from_terms(dims, parsed)
    if form == "basis":
        P = _require(obj, "P", "assignment")
        R = _require(obj, "R", "assignment")
        if not isinstance(P, list) or not isinstance(R, list):
            raise ValidationError("assignment.P and assignment.R must be lists")
        P = [matrix_from_obj(p, f"P[{i}]") for i, p in enumerate(P)]
        R = [matrix_from_obj(r, f"R[{i}]") for i, r in enumerate(R)]
        if any(p.shape != (dims.d_s, dims.d_s) for p in P) or \
                any(r.shape != (dims.total, dims.total) for r in R):
            raise ValidationError("P or R matrices have the wrong dimensions")
        return from_basis(P, R, dims)
    raise ValidationError(f"assignment.form must be 'eigen' or 'basis', got {form!r}")


def dynamical_map_to_obj(b: DynamicalMap) -> dict:
    return {"d_s": b.d_s, "choi": matrix_to_obj(b.choi)}


def dynamical_map_from_obj(obj) -> DynamicalMap:
    d_s = _int(_require(obj, "d_s", "dynamical map"), "d_s")
    return DynamicalMap(d_s, matrix_from_obj(_require(obj, "choi", "dynamical map"), "choi"))


def config_from_obj(obj) -> CollisionConfig:
    where = "collision config"
    steps = _int(_require(obj, "steps", where), "steps")
    return CollisionConfig(
        d_s=_int(_require(obj, "d_s", where), "d_s"),
        d_anc=_int(_require(obj, "d_anc", where), "d_anc"),
        V=matrix_from_obj(_require(obj, "V", where), "V"),
        T=_real(_require(obj, "T", where), "T"),
        tau_anc=matrix_from_obj(_require(obj, "tau", where), "tau"),
        steps=steps,
        eta0=matrix_from_obj(_require(obj, "eta0", where), "eta0"),
    )


def config_to_obj(cfg: CollisionConfig) -> dict:
    return {
        "d_s": cfg.d_s, "d_anc": cfg.d_anc, "V": matrix_to_obj(cfg.V), "T": cfg.T,
        "tau": matrix_to_obj(cfg.tau_anc), "eta0": matrix_to_obj(cfg.eta0), "steps": cfg.steps,
    }


def load_json(path):
    try:
        with open(path) as fh:
            return json.load(fh)
    except OSError as exc:
        raise ValidationError(f"cannot read {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise ValidationError(f"{path}: malformed JSON ({exc.msg} at line {exc.lineno})") from None


def dumps(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def write_json(obj, path):
    with open(path, "w") as fh:
        fh.write(dumps(obj))
