"""Acceptance gate: one test per shipped guarantee, one PASS/FAIL line each.

Every test prints a summary line to the real stdout (bypassing capture) so
the gate can be read off a plain `pytest -v` run.
"""

import json
import subprocess
import sys
import time

import numpy as np
import pytest

from cosymp import charts as ch
from cosymp import constructions as con
from cosymp import linear as lin
from cosymp import matrices as mat
from cosymp import torus as tor

from conftest import (
    random_space,
    random_split_subspace,
    random_subspace,
    space_pair_sharing_lagrangian,
)

SEED = 20260823


def report(num, ok, detail):
    status = "PASS" if ok else "FAIL"
    print(f"ACCEPTANCE {num:>2}: {status}  {detail}", file=sys.__stdout__)
    assert ok, f"criterion {num}: {detail}"


def corpus_spaces(rng, count=200):
    dims = [3, 5, 7]
    return [random_space(rng, dims[i % 3]) for i in range(count)]


def test_criterion_01_orthogonality_laws():
    rng = np.random.default_rng(SEED)
    t0 = time.time()
    failures = 0
    for space in corpus_spaces(rng):
        F = random_split_subspace(rng, space)
        G = random_split_subspace(rng, space)
        oF = lin.orthogonal(space, F)
        oG = lin.orthogonal(space, G)
        H = F.sum(G)
        laws = [
            F.dim + oF.dim == space.dim,
            lin.orthogonal(space, oF) == F,
            # monotonicity, tested on the genuinely nested pair (F, F + G)
            oF.contains_subspace(lin.orthogonal(space, H)),
            lin.orthogonal(space, H) == oF.intersect(oG),
            oF.sum(oG) == lin.orthogonal(space, F.intersect(G)),
        ]
        if not all(laws):
            failures += 1
    dt = time.time() - t0
    report(1, failures == 0 and dt < 30,
           f"5 orthogonality laws exact on 200 random spaces (dims 3/5/7), {dt:.1f}s")


def test_criterion_02_classification_laws():
    rng = np.random.default_rng(SEED + 1)
    t0 = time.time()
    failures = 0
    for space in corpus_spaces(rng):
        n = space.n
        F = random_subspace(rng, space)
        oF = lin.orthogonal(space, F)
        c = lin.classify(space, F)
        co = lin.classify(space, oF)
        laws = [
            c.isotropic == co.coisotropic,                                  # 1
            c.lagrangian_like == (c.isotropic and F.dim == oF.dim - 1),     # 2
            (not c.isotropic) or not F.contains(space.reeb),                # 3
            (not c.isotropic) or F.dim <= n,                                # 4
            c.lagrangian_like == (c.isotropic and F.dim == n),              # 5
            # law 6 is stated for nonzero F: the zero space splits V
            # trivially but carries no Reeb vector
            F.dim == 0 or c.cosymplectic_sub == (F.intersect(oF).dim == 0
                                                 and F.sum(oF).dim == space.dim),
        ]
        if c.isotropic:                                                     # 7
            L = con.extend_to_lagrangian(space, F)
            laws.append(lin.classify(space, L).lagrangian_like
                        and L.contains_subspace(F)
                        and oF.contains_subspace(L))
        if not all(laws):
            failures += 1
    dt = time.time() - t0
    report(2, failures == 0 and dt < 30,
           f"7 classification laws + Lagrangian-like extension exact, {dt:.1f}s")


def test_criterion_03_darboux():
    rng = np.random.default_rng(SEED + 2)
    failures = 0
    for _ in range(50):
        space = random_space(rng, 5)
        basis = con.darboux_basis(space)
        if not con.darboux_relations_hold(space, basis):
            failures += 1
            continue
        C = basis.change_of_basis
        std = lin.standard_space(space.n, mode=space.mode)
        if not (mat.matrices_close(C.T @ space.b @ C, std.b, space.mode, 0)
                and mat.matrices_close((space.psi @ C).reshape(1, -1),
                                       std.psi.reshape(1, -1), space.mode, 0)):
            failures += 1
    report(3, failures == 0,
           "Darboux relations and literal standard pullback on 50 random dim-5 spaces")


def test_criterion_04_canonical_isomorphism():
    rng = np.random.default_rng(SEED + 3)
    failures = 0
    for _ in range(30):
        s1, s2, U, W = space_pair_sharing_lagrangian(rng, dim=5)
        L = con.canonical_isomorphism(5, s1, s2, U, W)
        ok = (mat.matrices_close(L @ U.basis, U.basis, s1.mode, 0)
              and mat.matrices_close((s2.psi @ L).reshape(1, -1),
                                     s1.psi.reshape(1, -1), s1.mode, 0)
              and mat.matrices_close(L.T @ s2.b @ L, s1.b, s1.mode, 0))
        if not ok:
            failures += 1
    report(4, failures == 0,
           "L fixes U and intertwines (b, psi) exactly on 30 random dim-5 pairs")


def test_criterion_05_polar_construction():
    rng = np.random.default_rng(SEED + 4)
    worst_sq = worst_eig = worst_idem = 0.0
    for i in range(30):
        n = 1 if i % 2 == 0 else 2
        space = lin.standard_space(n)
        d = space.dim
        A = rng.normal(size=(d, d))
        R = A.T @ A + np.eye(d)
        cc = con.cocomplex_from_metric(space, R)
        J = cc.J
        xi = mat.to_float(space.reeb)
        P1 = np.eye(d) - np.outer(xi, mat.to_float(space.psi))
        sq = np.max(np.abs(P1 @ (J @ J + np.eye(d)) @ P1))
        eig = float(np.min(np.linalg.eigvalsh(0.5 * (cc.g + cc.g.T))))
        cc2 = con.cocomplex_from_metric(space, 0.5 * (cc.g + cc.g.T))
        idem = np.max(np.abs(cc2.J - J))
        worst_sq = max(worst_sq, sq)
        worst_eig = min(worst_eig if i else eig, eig)
        worst_idem = max(worst_idem, idem)
    ok = worst_sq <= 1e-9 and worst_eig > 1e-9 and worst_idem <= 1e-9
    report(5, ok,
           f"polar: |P1(J^2+I)P1| {worst_sq:.1e}, min eig {worst_eig:.2f}, "
           f"idempotence {worst_idem:.1e} over 30 metrics")


def test_criterion_06_submanifold_checker():
    model = ch.weil_chart(1, 3)
    grid = ch.param_grid([[-0.5, 0.5]] * 4, 4)
    sub = ch.ParamSubmanifold(
        lambda u: np.array([u[0], u[1], u[2], 0, 0, 0, u[3], -u[3], 0.0]), 4, grid)
    rep = ch.check_lagrangian_submanifold(model, sub)
    ok1 = rep.verdict and rep.dim_ok and model.lagrangian_dim == 4

    flat = ch.flat_standard(2)
    g2 = ch.param_grid([[-0.9, 0.9]] * 2, 7)
    rep2 = ch.check_lagrangian_submanifold(
        flat, ch.ParamSubmanifold(
            lambda u: np.array([u[0], u[1], 0, 0, u[0] ** 2]), 2, g2))
    analytic = 1.8  # max |2 x1| over the grid
    ok2 = (not rep2.verdict
           and abs(rep2.max_eta_pullback - analytic) <= 0.02 * analytic)
    report(6, ok1 and ok2,
           f"weil 4-dim piece passes; x1^2 graph refuted with eta max "
           f"{rep2.max_eta_pullback:.4f} vs analytic {analytic}")


def _moser_pairs():
    m0 = ch.flat_standard(1)

    def om0(P):
        P = np.atleast_2d(P)
        out = np.zeros((len(P), 3, 3))
        out[:, 0, 1] = 1
        out[:, 1, 0] = -1
        return out

    def et0(P):
        P = np.atleast_2d(P)
        out = np.zeros((len(P), 3))
        out[:, 2] = 1
        return out

    def om1(P):
        # d((1 + q^2/10) q) ^ dp = (1 + 3 q^2 / 10) dq ^ dp
        P = np.atleast_2d(P)
        out = np.zeros((len(P), 3, 3))
        c = 1 + 0.3 * P[:, 0] ** 2
        out[:, 0, 1] = c
        out[:, 1, 0] = -c
        return out

    def et1(P):
        # d(z + z q^2 / 20) = (z q / 10) dq + (1 + q^2/20) dz
        P = np.atleast_2d(P)
        out = np.zeros((len(P), 3))
        out[:, 0] = P[:, 2] * P[:, 0] / 10
        out[:, 2] = 1 + P[:, 0] ** 2 / 20
        return out

    pair_a = (m0, ch.custom_model(om1, et0, [[-1, 1]] * 3))
    pair_b = (m0, ch.custom_model(om0, et1, [[-1, 1]] * 3))
    return pair_a, pair_b


def test_criterion_07_moser_flow():
    t0 = time.time()
    ok = True
    details = []
    for label, (m0, m1) in zip("ab", _moser_pairs()):
        rep = ch.moser_flow(m0, m1, box_radius=0.3, steps=64)
        res64 = max(rep.max_omega_residual, rep.max_eta_residual)
        ok &= res64 <= 1e-4
        ok &= rep.max_velocity_at_origin <= 1e-12
        ok &= float(np.max(np.abs(rep.theta_origin))) <= 1e-12
        # convergence order is measured at coarse step counts; at 8+ steps the
        # residual already sits at the finite-difference floor near 1e-13
        rc = ch.moser_flow(m0, m1, box_radius=0.3, steps=2)
        rf = ch.moser_flow(m0, m1, box_radius=0.3, steps=4)
        coarse = max(rc.max_omega_residual, rc.max_eta_residual)
        fine = max(rf.max_omega_residual, rf.max_eta_residual)
        if coarse > 1e-11:
            ratio = coarse / max(fine, 1e-300)
            ok &= ratio >= 8
            details.append(f"{label}: res {res64:.1e}, 2to4 ratio {ratio:.0f}x")
        else:
            # already at the roundoff floor with 2 steps: nothing to reduce
            details.append(f"{label}: res {res64:.1e}, coarse res {coarse:.0e} "
                           "at floor")
    dt = time.time() - t0
    ok &= dt < 60
    report(7, ok, "; ".join(details) + f", {dt:.1f}s")


def test_criterion_08_flux_comparison():
    t0 = time.time()
    ok = True
    details = []
    shift = np.array([0.01, 0.02, 0.0])
    h = tor.translation_map(1, shift)
    rep = tor.flux_vs_weinstein(h, K=32, grid_res=64)
    analytic = np.array([-shift[1], shift[0], 0.0])
    d_analytic = float(np.max(np.abs(rep.periods_weinstein - analytic)))
    ok &= d_analytic <= 1e-6 and rep.max_period_diff <= 1e-6
    ok &= rep.reeb_pairing_max <= 1e-12 and rep.can1_scalar <= 1e-6
    details.append(f"translation diff {rep.max_period_diff:.1e}")

    eps = 0.01

    def gam(P):
        P = np.atleast_2d(P)
        q, p = P[:, 0], P[:, 1]
        w = 2 * np.pi
        dq = eps * (1 - w * np.sin(w * q) * np.cos(w * p))
        dp = eps * (-w * np.cos(w * q) * np.sin(w * p))
        return np.stack([dq, dp, np.zeros(len(P))], axis=1)

    h2 = tor.hamiltonian_flow_map(1, gam, steps=32)
    rep2 = tor.flux_vs_weinstein(h2, K=32, grid_res=64)
    ok &= rep2.max_period_diff <= 1e-3
    ok &= rep2.reeb_pairing_max <= 1e-12 and rep2.can1_scalar <= 1e-6
    details.append(f"flow-map diff {rep2.max_period_diff:.1e}")
    dt = time.time() - t0
    ok &= dt < 120
    report(8, ok, "; ".join(details) + f", {dt:.1f}s")


def test_criterion_09_fixed_points():
    eps = 0.01

    def alpha_fn(P):
        # d(eps cos(2 pi q) cos(2 pi p)): an exact, hence closed, 1-form
        P = np.atleast_2d(P)
        q, p = P[:, 0], P[:, 1]
        w = 2 * np.pi
        dq = -eps * w * np.sin(w * q) * np.cos(w * p)
        dp = -eps * w * np.cos(w * q) * np.sin(w * p)
        return np.stack([dq, dp, np.zeros(len(P))], axis=1)

    f = tor.weinstein_inverse(tor.ClosedOneForm(3, alpha_fn, np.zeros(3)), 0.0)
    zeros, identically_zero = tor.zeros_of_weinstein_form(f)
    worst = 0.0
    for z in zeros:
        worst = max(worst, tor.torus_point_distance(f(z[None]), z[None]))
    ok = (not identically_zero) and len(zeros) >= 2 and worst <= 1e-5
    report(9, ok,
           f"{len(zeros)} zeros of the exact-form map, worst fixed-point "
           f"distance {worst:.1e}")


def test_criterion_10_corpus_regression():
    cmd = [sys.executable, "-m", "cosymp.cli", "corpus", "--format", "json"]
    r1 = subprocess.run(cmd, capture_output=True)
    r2 = subprocess.run(cmd, capture_output=True)
    ok = r1.returncode == 0 and r1.stdout == r2.stdout
    obj = json.loads(r1.stdout)
    statuses = [e["status"] for e in obj["entries"]]
    flagged = sorted(e["name"] for e in obj["entries"] if e["status"] == "FLAG")
    expected = sorted([
        "example-5d-reeb-asserted",
        "example-5d-orthogonal-asserted",
        "example-5d-e2e3-asserted",
        "flat-graph-nonconstant-asserted",
    ])
    ok &= statuses.count("FLAG") == 4 and flagged == expected
    ok &= all(s in ("PASS", "FLAG") for s in statuses)
    report(10, ok,
           f"corpus: {statuses.count('PASS')} PASS, 4 expected FLAGs, "
           "byte-identical reruns")
