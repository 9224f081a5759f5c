"""``corrmap`` command-line interface.

Exit status: 0 on success, 1 on invalid input, 2 on numerical failure.
Results go to stdout unless ``--out`` is given; nothing is written when an
error occurs.
"""
from __future__ import annotations

import argparse
import csv
import io
import math
import sys

import numpy as np

from . import serialize as ser
from .assignment import TOL_CONSISTENCY, check_consistency, negativity_witness
from .collision import simulate
from .dynamics import compose, cp_test, positivity_scan
from .errors import NumericalError, ValidationError
from .hide import TOL_HIDE, decompose, hiding_residual, hidden_map_is_cp
from .reveal import build_reveal, verify_reveal
from .tensor_core import DimSpec

DEFAULT_SAMPLES = 2000


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(message)


def _vector_obj(v):
    v = np.asarray(v)
    return ser.matrix_to_obj(v.reshape(-1, 1) if v.ndim == 1 else v)


def analyze_assignment(a, samples, seed, tol=None) -> dict:
    residual = check_consistency(a)
    limit = TOL_CONSISTENCY if tol is None else tol
    if residual > limit:
        raise ValidationError(f"assignment is not consistent (residual {residual:.3e})")
    found = negativity_witness(a, samples, seed, 1e-9 if tol is None else tol)
    return {
        "consistency_residual": residual,
        "consistent": True,
        "n_terms": len(a),
        "min_alpha": float(a.alphas.min()),
        "witness": None if found is None else {
            "eta": ser.matrix_to_obj(found.eta), "min_eig": found.min_eig},
    }


def compose_report(a, u, samples, seed, tol=None) -> dict:
    b = compose(a, u)
    tp = b.tp_residual()
    if tp > 1e-9:
        raise NumericalError(f"composed map is not trace preserving (residual {tp:.3e})")
    cp = cp_test(b, tol)
    report = positivity_scan(b, samples, seed, tol=1e-9 if tol is None else tol)
    witness = None
    if report.witness_pair is not None:
        r, s = report.witness_pair
        witness = {"r": _vector_obj(r), "s": _vector_obj(s)}
    return {
        "map": ser.dynamical_map_to_obj(b),
        "is_cp": cp.is_cp,
        "min_choi_eig": cp.min_choi_eig,
        "positivity_scan_min": report.positivity_scan_min,
        "samples_used": report.samples_used,
        "tp_residual": tp,
        "witness": witness,
    }


def reveal_report(omega, d) -> dict:
    plan = build_reveal(omega, d)
    result = verify_reveal(plan)
    if abs(result.achieved - plan.r00) > 1e-9:
        raise NumericalError("revealing unitary did not transfer the negative eigenvalue")
    return {
        "d": plan.d,
        "r00": plan.r00,
        "u_total": ser.matrix_to_obj(plan.u_total),
        "eta3": ser.matrix_to_obj(result.eta3),
        "achieved": result.achieved,
    }


def _split(n, d_s):
    if d_s is None:
        d_s = math.isqrt(n)
        if d_s * d_s != n:
            raise ValidationError("state dimension is not a square; pass --d-s")
    if n % d_s:
        raise ValidationError(f"state dimension {n} is not divisible by d_s = {d_s}")
    return DimSpec(d_s, n // d_s, 1)


def hide_report(rho, w, d_s=None, tol=None) -> dict:
    dims = _split(rho.shape[0], d_s)
    tol_hide = TOL_HIDE if tol is None else tol
    residual = hiding_residual(w, decompose(rho, dims).chi, dims)
    hidden = residual <= tol_hide
    cp = hidden_map_is_cp(rho, w, dims, tol_hide=tol_hide, tol=tol) if hidden else None
    return {"residual": residual, "hidden": hidden, "cp": cp}


def _fmt(x):
    return "" if x is None else repr(float(x))


def collide_csv(cfg) -> str:
    traj = simulate(cfg)
    buf = io.StringIO()
    cols = ["step", "trace_distance_to_tau", "purity", "chi_norm", "step_cp_mineig"]
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(cols)
    for row in traj.rows(cfg.tau_anc):
        writer.writerow([row["step"]] + [_fmt(row[c]) for c in cols[1:]])
    return buf.getvalue()


def _run_scenario(doc, args):
    kind = ser._require(doc, "kind", "scenario")
    payload = ser._require(doc, "payload", "scenario")
    seed = doc.get("seed", args.seed)
    samples = doc.get("samples", args.samples)
    if isinstance(seed, bool) or not isinstance(seed, int) or seed < 0:
        raise ValidationError("scenario.seed must be a non-negative integer")
    if isinstance(samples, bool) or not isinstance(samples, int) or samples < 0:
        raise ValidationError("scenario.samples must be a non-negative integer")
    if kind == "assignment-analyze":
        a = ser.assignment_from_obj(ser._require(payload, "assignment", "payload"))
        return ser.dumps(analyze_assignment(a, samples, seed, args.tol))
    if kind == "compose":
        a = ser.assignment_from_obj(ser._require(payload, "assignment", "payload"))
        u = ser.matrix_from_obj(ser._require(payload, "unitary", "payload"), "unitary")
        return ser.dumps(compose_report(a, u, samples, seed, args.tol))
    if kind == "reveal":
        omega = ser.matrix_from_obj(ser._require(payload, "omega", "payload"), "omega")
        d = ser._int(ser._require(payload, "d", "payload"), "d")
        return ser.dumps(reveal_report(omega, d))
    if kind == "hide-check":
        rho = ser.matrix_from_obj(ser._require(payload, "state", "payload"), "state")
        w = ser.matrix_from_obj(ser._require(payload, "unitary", "payload"), "unitary")
        d_s = payload.get("d_s")
        return ser.dumps(hide_report(rho, w, d_s, args.tol))
    if kind == "collide":
        return collide_csv(ser.config_from_obj(payload))
    raise ValidationError(f"unknown scenario kind {kind!r}")


def _dispatch(args) -> str:
    if args.command == "analyze-assignment":
        a = ser.assignment_from_obj(ser.load_json(args.assignment))
        return ser.dumps(analyze_assignment(a, args.samples, args.seed, args.tol))
    if args.command == "compose":
        a = ser.assignment_from_obj(ser.load_json(args.assignment))
        u = ser.matrix_from_obj(ser.load_json(args.unitary), "unitary")
        return ser.dumps(compose_report(a, u, args.samples, args.seed, args.tol))
    if args.command == "reveal":
        omega = ser.matrix_from_obj(ser.load_json(args.omega), "omega")
        return ser.dumps(reveal_report(omega, args.d))
    if args.command == "hide-check":
        rho = ser.matrix_from_obj(ser.load_json(args.state), "state")
        w = ser.matrix_from_obj(ser.load_json(args.unitary), "unitary")
        return ser.dumps(hide_report(rho, w, args.d_s, args.tol))
    if args.command == "collide":
        return collide_csv(ser.config_from_obj(ser.load_json(args.config)))
    if args.command == "scenario":
        return _run_scenario(ser.load_json(args.scenario), args)
    raise _UsageError(f"unknown command {args.command!r}")


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--seed", type=int, default=0, help="seed for all sampling (default 0)")
    common.add_argument("--samples", type=int, default=DEFAULT_SAMPLES,
                        help="random samples for witness and positivity scans")
    common.add_argument("--tol", type=float, default=None,
                        help="override every decision tolerance")
    common.add_argument("--out", default=None, help="write the result here instead of stdout")

    parser = _Parser(prog="corrmap", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    p = sub.add_parser("analyze-assignment", parents=[common],
                       help="consistency residual and negativity witness of an assignment")
    p.add_argument("assignment")
    p = sub.add_parser("compose", parents=[common],
                       help="dynamical map of an assignment and unitary, with CP/positivity report")
    p.add_argument("assignment")
    p.add_argument("unitary")
    p = sub.add_parser("reveal", parents=[common], help="build the revealing unitary for omega")
    p.add_argument("omega")
    p.add_argument("--d", type=int, required=True)
    p = sub.add_parser("hide-check", parents=[common],
                       help="hiding residual of a coupling on a correlated state")
    p.add_argument("state")
    p.add_argument("unitary")
    p.add_argument("--d-s", type=int, default=None, help="system dimension (default: sqrt)")
    p = sub.add_parser("collide", parents=[common], help="collision-model trajectory as CSV")
    p.add_argument("config")
    p = sub.add_parser("scenario", parents=[common], help="run a scenario file")
    p.add_argument("scenario")
    return parser


def run(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        if args.samples < 0:
            raise ValidationError("--samples must be non-negative")
        text = _dispatch(args)
    except (_UsageError, ValidationError) as exc:
        print(f"corrmap: error: {exc}", file=sys.stderr)
        return 1
    except (NumericalError, np.linalg.LinAlgError) as exc:
        print(f"corrmap: numerical failure: {exc}", file=sys.stderr)
        return 2
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
