"""Unit tests for chart models: validation, submanifold and graph checks,
homotopy primitives, and the relative Moser flow."""

import numpy as np
import pytest

from cosymp import charts as ch
from cosymp.errors import (
    NotClosed,
    PointwiseDegenerate,
    RankDeficient,
    StructuresDisagreeAtQ,
)


def test_flat_standard_reeb_field():
    m = ch.flat_standard(1)
    pts = np.array([[0.1, -0.2, 0.3], [0.0, 0.0, 0.0]])
    xi = m.reeb(pts)
    assert np.max(np.abs(xi - np.array([0, 0, 1.0]))) < 1e-12


def test_torus_standard_validates():
    m = ch.torus_standard(2)
    assert m.dim == 5 and m.domain_kind == "torus"


def test_weil_chart_dimensions():
    m = ch.weil_chart(1, 3)
    assert m.dim == 9
    assert m.lagrangian_dim == 4


def test_custom_model_rejects_nonclosed_form():
    def om(P):
        # (1 + z/4) dq ^ dp has d(omega) = (1/4) dz ^ dq ^ dp != 0 while
        # staying pointwise nondegenerate on the unit box
        P = np.atleast_2d(P)
        out = np.zeros((len(P), 3, 3))
        out[:, 0, 1] = 1 + 0.25 * P[:, 2]
        out[:, 1, 0] = -out[:, 0, 1]
        return out

    def et(P):
        P = np.atleast_2d(P)
        out = np.zeros((len(P), 3))
        out[:, 2] = 1
        return out

    with pytest.raises(NotClosed):
        ch.custom_model(om, et, [[-1, 1]] * 3)


def test_custom_model_rejects_degenerate_structure():
    def om(P):
        P = np.atleast_2d(P)
        return np.zeros((len(P), 3, 3))

    def et(P):
        P = np.atleast_2d(P)
        out = np.zeros((len(P), 3))
        out[:, 2] = 1
        return out

    with pytest.raises(PointwiseDegenerate):
        ch.custom_model(om, et, [[-1, 1]] * 3)


def test_submanifold_rank_deficiency_detected():
    m = ch.flat_standard(2)
    grid = ch.param_grid([[-0.5, 0.5]] * 2, 5)
    sub = ch.ParamSubmanifold(
        lambda u: np.array([u[0], u[0], 0, 0, 0]), 2, grid)
    with pytest.raises(RankDeficient):
        ch.check_lagrangian_submanifold(m, sub)


def test_graph_checker_two_code_paths_agree():
    m1 = ch.flat_standard(1)
    m2 = ch.flat_standard(1, box_radius=3.0)
    for phi, expected in [
        (lambda x: x + np.array([0.2, -0.1, 0.4]), True),
        (lambda x: np.array([2 * x[0], x[1], x[2]]), False),
    ]:
        rep = ch.check_graph_cosymplectomorphism(m1, m2, phi)
        assert rep.verdict == expected
        assert rep.graph_verdict == expected


def test_oneform_graph_closed_and_nonclosed():
    closed = lambda P: np.column_stack(
        [np.atleast_2d(P)[:, 1], np.atleast_2d(P)[:, 0]])
    rep = ch.check_oneform_graph(2, closed, 0.0)
    assert rep.verdict

    nonclosed = lambda P: np.column_stack(
        [np.atleast_2d(P)[:, 1], np.zeros(len(np.atleast_2d(P)))])
    rep = ch.check_oneform_graph(2, nonclosed, 0.0)
    assert not rep.verdict


def test_homotopy_primitive_of_area_form():
    # I(dx1 ^ dx2) = (x1 dx2 - x2 dx1) / 2
    def om(P):
        P = np.atleast_2d(P)
        out = np.zeros((len(P), 2, 2))
        out[:, 0, 1] = 1
        out[:, 1, 0] = -1
        return out

    pts = np.array([[0.3, -0.4], [1.0, 2.0], [0.0, 0.0]])
    beta = ch.homotopy_primitive_twoform(om, np.zeros(2), pts)
    expected = 0.5 * np.column_stack([-pts[:, 1], pts[:, 0]])
    assert np.max(np.abs(beta - expected)) < 1e-12


def test_homotopy_primitive_degree_one():
    # I(dx1) = x1
    def al(P):
        P = np.atleast_2d(P)
        out = np.zeros((len(P), 1))
        out[:, 0] = 1
        return out

    pts = np.array([[0.7], [-0.2]])
    f = ch.homotopy_primitive_oneform(al, np.zeros(1), pts)
    assert np.max(np.abs(f - pts[:, 0])) < 1e-12


def test_homotopy_primitive_differentiates_back(rng):
    """d(I alpha) recovers random closed polynomial 2-forms on R^3."""
    for _ in range(5):
        a, b, c = rng.normal(size=3)

        def om(P, a=a, b=b, c=c):
            P = np.atleast_2d(P)
            x, y, z = P[:, 0], P[:, 1], P[:, 2]
            out = np.zeros((len(P), 3, 3))
            out[:, 0, 1] = a + c * z
            out[:, 0, 2] = b * y
            out[:, 1, 2] = b * x - c * x  # keeps d(omega) = 0
            out -= np.transpose(out, (0, 2, 1))
            return out

        # closedness: d coefficient of dx^dy^dz is dz(om01) - dy(om02) + dx(om12)
        assert abs(c - b + (b - c)) < 1e-14
        pts = rng.uniform(-0.5, 0.5, size=(20, 3))
        beta = ch.homotopy_primitive_twoform(om, np.zeros(3), pts)
        h = 1e-5
        for axis_i in range(3):
            for axis_j in range(axis_i + 1, 3):
                ei = np.eye(3)[axis_i] * h
                ej = np.eye(3)[axis_j] * h
                dbi = (ch.homotopy_primitive_twoform(om, np.zeros(3), pts + ei)
                       - ch.homotopy_primitive_twoform(om, np.zeros(3), pts - ei)) / (2 * h)
                dbj = (ch.homotopy_primitive_twoform(om, np.zeros(3), pts + ej)
                       - ch.homotopy_primitive_twoform(om, np.zeros(3), pts - ej)) / (2 * h)
                d_beta = dbi[:, axis_j] - dbj[:, axis_i]
                target = om(pts)[:, axis_i, axis_j]
                assert np.max(np.abs(d_beta - target)) < 1e-6


def test_moser_identity_pair_is_trivial():
    m = ch.flat_standard(1)
    rep = ch.moser_flow(m, m, box_radius=0.3, steps=8)
    assert rep.max_omega_residual < 1e-12
    assert rep.max_eta_residual < 1e-12
    assert np.max(np.abs(rep.theta - rep.seeds)) < 1e-12


def test_moser_rejects_disagreement_at_origin():
    m0 = ch.flat_standard(1)

    def om(P):
        P = np.atleast_2d(P)
        out = np.zeros((len(P), 3, 3))
        out[:, 0, 1] = 2
        out[:, 1, 0] = -2
        return out

    def et(P):
        P = np.atleast_2d(P)
        out = np.zeros((len(P), 3))
        out[:, 2] = 1
        return out

    m1 = ch.custom_model(om, et, [[-1, 1]] * 3)
    with pytest.raises(StructuresDisagreeAtQ):
        ch.moser_flow(m0, m1, box_radius=0.3, steps=8)


def test_polyform_from_json_evaluates():
    obj = {"dim": 3, "degree": 1,
           "components": {"0": {"0,1,0": 2.0}, "2": {"0,0,0": 1.0}}}
    form = ch.polyform_from_json(obj)
    vals = form(np.array([[0.5, 0.25, -1.0]]))
    assert np.allclose(vals[0], [0.5, 0.0, 1.0])
