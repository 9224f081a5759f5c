"""Acceptance criteria, one recorded PASS/FAIL line each.

Run ``pytest tests/test_acceptance.py -v``; the lines appear in the
"acceptance criteria" section of the terminal summary.
"""
import numpy as np

from corrmap.assignment import apply, check_consistency, from_basis, product_assignment
from corrmap.collision import CollisionConfig, collision_step, simulate, step_hiding_check, step_map
from corrmap.dynamics import apply_map, compose, cp_test, positivity_scan, positivity_weights, tol_cp
from corrmap.hide import decompose, hidden_map_is_cp, hiding_residual
from corrmap.rand import haar_state, random_density, random_hermitian, random_unitary
from corrmap.reveal import build_reveal, witness_assignment
from corrmap.tensor_core import DimSpec, proj, swap

from factories import random_basis_pair

# eigenvalues 1, 0.1, 0, -0.1 and tr_Ec = |0><0|
OMEGA = np.zeros((4, 4), dtype=complex)
OMEGA[0, 0] = 1.0
OMEGA[1, 2] = OMEGA[2, 1] = 0.1


def random_config(rng, steps=10):
    return CollisionConfig(
        d_s=2, d_anc=2, V=random_hermitian(4, rng), T=float(rng.uniform(0.1, 2.0)),
        tau_anc=random_density(2, rng), steps=steps, eta0=random_density(2, rng),
    )


def test_product_assignment_always_cp(criterion):
    rng = np.random.default_rng(101)
    worst = {}
    for d_s in (2, 3):
        dims = DimSpec(d_s, d_s, 1)
        margin = np.inf
        for _ in range(10):
            a = product_assignment(random_density(d_s, rng), dims)
            for _ in range(100):
                result = cp_test(compose(a, random_unitary(dims.total, rng)))
                assert result.is_cp == (result.min_choi_eig >= -tol_cp(d_s))
                margin = min(margin, result.min_choi_eig + tol_cp(d_s))
        worst[d_s] = margin
    ok = all(m >= 0 for m in worst.values())
    criterion("1 product assignment CP for every U", ok,
              f"min(min_choi_eig + 1e-9*d_S): d_S=2 {worst[2]:.2e}, d_S=3 {worst[3]:.2e}")
    assert ok


def test_revealing_unitary_gives_nonpositive_dynamics(criterion):
    a, eta_star = witness_assignment(OMEGA)
    target = np.kron(OMEGA, proj([1, 0]))
    assigned_err = np.abs(apply(a, eta_star) - target).max()
    plan = build_reveal(OMEGA, 2)
    b = compose(a, plan.u_total)
    value = apply_map(b, eta_star)[0, 0].real
    report = positivity_scan(b, samples=2000, seed=0, probes=[eta_star])
    ok = (plan.r00 == np.linalg.eigvalsh(OMEGA)[0] and abs(plan.r00 + 0.1) <= 1e-12
          and assigned_err <= 1e-9 and abs(value + 0.1) <= 1e-9
          and report.positivity_scan_min <= -0.1 + 1e-9 and check_consistency(a) <= 1e-9)
    criterion("2 revealing unitary end to end", ok,
              f"<0|B(eta*)|0> = {value:.12f}, scan min {report.positivity_scan_min:.12f}")
    assert ok


def test_weights_match_direct_evaluation(criterion):
    rng = np.random.default_rng(303)
    worst = 0.0
    shapes = [DimSpec(2, 2, 1), DimSpec(2, 2, 2), DimSpec(3, 2, 1)]
    for n in range(100):
        dims = shapes[n % len(shapes)]
        P, R = random_basis_pair(dims, rng)
        a = from_basis(P, R, dims)
        u = random_unitary(dims.total, rng)
        r, s = haar_state(dims.d_s, rng), haar_state(dims.d_s, rng)
        direct = np.vdot(s, apply_map(compose(a, u), proj(r)) @ s).real
        worst = max(worst, abs(positivity_weights(a, u, r, s).total - direct))
    ok = worst <= 1e-10
    criterion("3 weighted sum equals direct evaluation", ok, f"max |diff| {worst:.2e}")
    assert ok


def _solve_coefficients(P, eta):
    """Coefficients c with eta = sum_i c_i P_i, by a plain linear solve."""
    M = np.stack([p.ravel() for p in P], axis=1)
    c, *_ = np.linalg.lstsq(M, eta.ravel(), rcond=None)
    return c


def test_basis_and_eigen_forms_agree(criterion):
    rng = np.random.default_rng(404)
    worst_forms = worst_oracle = worst_gram = 0.0
    shapes = [DimSpec(2, 2, 1), DimSpec(2, 2, 2), DimSpec(3, 2, 1)]
    for n in range(100):
        dims = shapes[n % len(shapes)]
        P, R = random_basis_pair(dims, rng)
        a = from_basis(P, R, dims)
        gram = np.einsum("iab,jba->ij", a.basis.Delta, np.stack(P))
        worst_gram = max(worst_gram, np.abs(gram - np.eye(len(P))).max())
        eta = random_hermitian(dims.d_s, rng)
        eigen = apply(a, eta)
        worst_forms = max(worst_forms, np.abs(a.basis.apply(eta) - eigen).max())
        oracle = np.einsum("i,iab->ab", _solve_coefficients(P, eta), np.stack(R))
        worst_oracle = max(worst_oracle, np.abs(oracle - eigen).max())
    ok = worst_forms <= 1e-9 and worst_oracle <= 1e-9 and worst_gram <= 1e-10
    criterion("4 basis form equals eigen form", ok,
              f"forms {worst_forms:.2e}, linear-solve oracle {worst_oracle:.2e}, "
              f"Gram {worst_gram:.2e}")
    assert ok


def test_local_unitaries_hide_correlations(criterion):
    rng = np.random.default_rng(505)
    worst = 0.0
    all_cp = True
    for _ in range(100):
        rho = random_density(4, rng)
        chi = decompose(rho, (2, 2)).chi
        w = np.kron(random_unitary(2, rng), random_unitary(2, rng))
        worst = max(worst, hiding_residual(w, chi, (2, 2)))
        all_cp &= hidden_map_is_cp(rho, w, dims=(2, 2))
    ok = worst <= 1e-11 and all_cp
    criterion("5 local unitaries hide correlations", ok,
              f"max residual {worst:.2e}, all maps CP: {all_cp}")
    assert ok


def test_collision_model(criterion):
    rng = np.random.default_rng(606)
    worst_choi = np.inf
    worst_hide = 0.0
    for _ in range(20):
        cfg = random_config(rng)
        traj = simulate(cfg)
        worst_choi = min(worst_choi, min(traj.step_cp_mineigs))
        eta = cfg.eta0
        for n in range(cfg.steps):
            eta, chi = collision_step(eta, cfg, n)
            worst_hide = max(worst_hide, step_hiding_check(cfg, chi, n + 1))

    theta = 0.6
    tau = np.diag([0.8, 0.2]).astype(complex)
    eta0 = np.diag([0.1, 0.9]).astype(complex)
    cfg = CollisionConfig(2, 2, theta * swap(2), 1.0, tau, 30, eta0)
    dist = simulate(cfg).distances(tau)
    closed = [np.cos(theta) ** (2 * n) * dist[0] for n in range(len(dist))]
    worst_swap = max(abs(x - y) for x, y in zip(dist, closed))
    ok = worst_choi >= -1e-9 and worst_hide <= 1e-10 and worst_swap <= 1e-6
    criterion("6 collision model", ok,
              f"min step Choi eig {worst_choi:.2e}, max hiding {worst_hide:.2e}, "
              f"partial swap vs cos^2n {worst_swap:.2e}")
    assert ok


def test_numerical_hygiene(criterion):
    rng = np.random.default_rng(707)
    maps = []
    for dims in (DimSpec(2, 2, 1), DimSpec(3, 3, 1), DimSpec(2, 2, 2)):
        for _ in range(20):
            u = random_unitary(dims.total, rng)
            maps.append(compose(product_assignment(random_density(dims.d_e, rng), dims), u))
            P, R = random_basis_pair(dims, rng)
            maps.append(compose(from_basis(P, R, dims), u))
    a, _ = witness_assignment(OMEGA)
    maps.append(compose(a, build_reveal(OMEGA, 2).u_total))
    worst_tp = max(b.tp_residual() for b in maps)

    worst_trace = 0.0
    for _ in range(20):
        cfg = random_config(rng, steps=25)
        maps.append(step_map(cfg))
        worst_trace = max(worst_trace, max(abs(np.trace(s) - 1) for s in simulate(cfg).states))
    worst_tp = max(worst_tp, max(b.tp_residual() for b in maps))
    ok = worst_tp <= 1e-9 and worst_trace <= 1e-9
    criterion("7 trace preservation", ok,
              f"{len(maps)} maps, max TP residual {worst_tp:.2e}, max trace drift {worst_trace:.2e}")
    assert ok
