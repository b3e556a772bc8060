"""Command-line front end: JSON I/O, report rendering, and the regression
corpus of worked examples.

Exit codes: 0 for verdict-true / success, 1 for a mathematically false
verdict, 2 for malformed input.  Output is byte-deterministic for a fixed
configuration.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import charts as ch
from . import constructions as con
from . import linear as lin
from . import matrices as mat
from . import torus as tor
from .errors import CosympError, ParseError

EXIT_TRUE = 0
EXIT_FALSE = 1
EXIT_INPUT = 2


def _fmt(x):
    """Deterministic scalar rendering."""
    if isinstance(x, (bool, np.bool_)):
        return "true" if x else "false"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, float):
        return format(x, ".12g")
    return str(x)


def _jsonable(obj):
    if isinstance(obj, dict):
        return {k: _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, (np.bool_, bool)):
        return bool(obj)
    if isinstance(obj, (np.integer, int)):
        return int(obj)
    if isinstance(obj, (np.floating, float)):
        return float(format(float(obj), ".12g"))
    if isinstance(obj, np.ndarray):
        return _jsonable(obj.tolist())
    return obj


def _emit(report, fmt):
    if fmt == "json":
        print(json.dumps(_jsonable(report), sort_keys=True, separators=(", ", ": ")))
    else:
        width = max((len(k) for k in report), default=0)
        for key in report:
            val = report[key]
            if isinstance(val, (list, tuple, np.ndarray)):
                val = "[" + ", ".join(_fmt(v) for v in np.asarray(val).ravel()) + "]"
            else:
                val = _fmt(val)
            print(f"{key.ljust(width)}  {val}")


def _load_input(path):
    if path is None:
        raise ParseError("this subcommand needs --input PATH")
    try:
        with open(path) as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise ParseError(f"cannot read input: {exc}")


def _space_from(obj, args):
    spec = obj["space"] if "space" in obj else obj
    if "mode" not in spec:
        spec = dict(spec, mode=args.mode)
    return lin.space_from_json(spec, tol=args.tol_lin)


def _subspace_from(obj, key, space):
    return lin.subspace_from_json(obj[key], space.dim, space.mode, space.tol)


# --- linear subcommands -----------------------------------------------------

def cmd_validate(args):
    obj = _load_input(args.input)
    space = _space_from(obj, args)
    report = {
        "dim": space.dim,
        "mode": space.mode,
        "reeb": [lin._scalar_to_json(x, space.mode) for x in space.reeb],
    }
    _emit(report, args.format)
    return EXIT_TRUE


def cmd_orthogonal(args):
    obj = _load_input(args.input)
    space = _space_from(obj, args)
    F = _subspace_from(obj, "subspace", space)
    ortho = lin.orthogonal(space, F)
    _emit({"dim": ortho.dim, "basis": lin.subspace_to_json(ortho)["basis"]},
          args.format)
    return EXIT_TRUE


def cmd_classify(args):
    obj = _load_input(args.input)
    space = _space_from(obj, args)
    F = _subspace_from(obj, "subspace", space)
    flags = lin.classify(space, F).as_dict()
    _emit(flags, args.format)
    return EXIT_TRUE


def cmd_darboux(args):
    obj = _load_input(args.input)
    space = _space_from(obj, args)
    basis = con.darboux_basis(space)
    ok = con.darboux_relations_hold(space, basis)
    report = con.darboux_to_json(space, basis)
    report["relations_exact"] = ok
    _emit(report, args.format)
    return EXIT_TRUE if ok else EXIT_FALSE


def cmd_extend(args):
    obj = _load_input(args.input)
    space = _space_from(obj, args)
    F = _subspace_from(obj, "subspace", space)
    L = con.extend_to_lagrangian(space, F)
    _emit({"dim": L.dim, "basis": lin.subspace_to_json(L)["basis"]}, args.format)
    return EXIT_TRUE


def cmd_transverse(args):
    obj = _load_input(args.input)
    space = _space_from(obj, args)
    lags = [lin.subspace_from_json(entry, space.dim, space.mode, space.tol)
            for entry in obj.get("lagrangians", [])]
    L = con.transverse_lagrangian(space, lags)
    _emit({"dim": L.dim, "basis": lin.subspace_to_json(L)["basis"]}, args.format)
    return EXIT_TRUE


def cmd_canoniso(args):
    obj = _load_input(args.input)
    dim = int(obj["dim"])
    s1 = lin.space_from_json(dict(obj["s1"], mode=obj["s1"].get("mode", args.mode)),
                             tol=args.tol_lin)
    s2 = lin.space_from_json(dict(obj["s2"], mode=obj["s2"].get("mode", args.mode)),
                             tol=args.tol_lin)
    U = lin.subspace_from_json(obj["U"], dim, s1.mode, s1.tol)
    W = lin.subspace_from_json(obj["W"], dim, s1.mode, s1.tol)
    L = con.canonical_isomorphism(dim, s1, s2, U, W)
    ok = (mat.matrices_close((s2.psi @ L).reshape(1, -1), s1.psi.reshape(1, -1),
                             s1.mode, s1.tol)
          and mat.matrices_close(L.T @ s2.b @ L, s1.b, s1.mode, s1.tol))
    report = {
        "matrix": [[lin._scalar_to_json(x, s1.mode) for x in row] for row in L],
        "postconditions_exact": ok,
    }
    _emit(report, args.format)
    return EXIT_TRUE if ok else EXIT_FALSE


def cmd_cocomplex(args):
    obj = _load_input(args.input)
    space = _space_from(obj, args)
    R = np.asarray(obj["R"], dtype=float)
    cc = con.cocomplex_from_metric(space, R, tol=args.tol_polar)
    compatible = con.is_compatible(space, cc.J, tol=args.tol_polar)
    report = {
        "J": [[float(format(v, ".12g")) for v in row] for row in cc.J],
        "g_min_eigenvalue": float(np.min(np.linalg.eigvalsh(0.5 * (cc.g + cc.g.T)))),
        "is_cocomplex": con.is_cocomplex(space, cc.J, tol=args.tol_polar),
        "is_compatible": compatible,
    }
    _emit(report, args.format)
    return EXIT_TRUE if compatible else EXIT_FALSE


# --- chart subcommands ------------------------------------------------------

def _submanifold_builtin(name):
    if name == "weil-l2":
        model = ch.weil_chart(1, 3)
        grid = ch.param_grid([[-0.5, 0.5]] * 4, 4)
        sub = ch.ParamSubmanifold(
            lambda u: np.array([u[0], u[1], u[2], 0, 0, 0, u[3], -u[3], 0.0]),
            4, grid)
        return model, sub
    if name == "flat-graph-constant":
        model = ch.flat_standard(2)
        grid = ch.param_grid([[-0.9, 0.9]] * 2, 7)
        sub = ch.ParamSubmanifold(
            lambda u: np.array([u[0], u[1], 0, 0, 0.25]), 2, grid)
        return model, sub
    if name == "flat-graph-x1sq":
        model = ch.flat_standard(2)
        grid = ch.param_grid([[-0.9, 0.9]] * 2, 7)
        sub = ch.ParamSubmanifold(
            lambda u: np.array([u[0], u[1], 0, 0, u[0] ** 2]), 2, grid)
        return model, sub
    raise ParseError(f"unknown submanifold builtin {name!r}")


def cmd_check_submanifold(args):
    if not args.builtin:
        raise ParseError("check-submanifold needs --builtin NAME")
    model, sub = _submanifold_builtin(args.builtin)
    report = ch.check_lagrangian_submanifold(model, sub, tol_pde=args.tol_pde)
    _emit(report.as_dict(), args.format)
    return EXIT_TRUE if report.verdict else EXIT_FALSE


def cmd_check_graph(args):
    if args.builtin:
        n = 1
        model1 = ch.flat_standard(n)
        model2 = ch.flat_standard(n, box_radius=3.0)
        if args.builtin == "identity":
            phi = lambda x: x
        elif args.builtin == "translation":
            phi = lambda x: x + np.array([0.2, 0.0, 0.1])
        elif args.builtin == "scaling":
            phi = lambda x: np.array([2 * x[0], x[1], x[2]])
        else:
            raise ParseError(f"unknown graph builtin {args.builtin!r}")
    else:
        obj = _load_input(args.input)
        A = np.asarray(obj["matrix"], dtype=float)
        b = np.asarray(obj.get("offset", np.zeros(A.shape[0])), dtype=float)
        d = A.shape[0]
        if d % 2 == 0:
            raise ParseError("affine map dimension must be odd")
        model1 = ch.flat_standard((d - 1) // 2)
        model2 = ch.flat_standard((d - 1) // 2,
                                  box_radius=float(np.sum(np.abs(A)) + np.max(np.abs(b)) + 1))
        phi = lambda x: A @ x + b
    report = ch.check_graph_cosymplectomorphism(model1, model2, phi,
                                                tol_pde=args.tol_pde)
    _emit(report.as_dict(), args.format)
    return EXIT_TRUE if report.verdict else EXIT_FALSE


def cmd_oneform_graph(args):
    obj = _load_input(args.input)
    beta = ch.polyform_from_json(obj["beta"])
    t0 = float(obj.get("t0", 0.0))
    report = ch.check_oneform_graph(int(obj["beta"]["dim"]), beta, t0,
                                    res=max(args.grid, 8), tol_pde=args.tol_pde)
    _emit(report.as_dict(), args.format)
    return EXIT_TRUE if report.verdict else EXIT_FALSE


def _moser_builtin(name):
    m0 = ch.flat_standard(1)
    if name == "identity":
        return m0, m0

    def et0(P):
        P = np.atleast_2d(P)
        out = np.zeros((len(P), 3))
        out[:, 2] = 1
        return out

    def om0(P):
        P = np.atleast_2d(P)
        out = np.zeros((len(P), 3, 3))
        out[:, 0, 1] = 1
        out[:, 1, 0] = -1
        return out

    if name == "omega-perturbation":
        def om1(P):
            P = np.atleast_2d(P)
            out = np.zeros((len(P), 3, 3))
            c = 1 + 0.3 * P[:, 0] ** 2
            out[:, 0, 1] = c
            out[:, 1, 0] = -c
            return out
        return m0, ch.custom_model(om1, et0, [[-1, 1]] * 3)
    if name == "eta-perturbation":
        def et1(P):
            P = np.atleast_2d(P)
            out = np.zeros((len(P), 3))
            out[:, 0] = P[:, 2] * P[:, 0] / 10
            out[:, 2] = 1 + P[:, 0] ** 2 / 20
            return out
        return m0, ch.custom_model(om0, et1, [[-1, 1]] * 3)
    raise ParseError(f"unknown moser builtin {name!r}")


def cmd_moser(args):
    if not args.builtin:
        raise ParseError("moser needs --builtin NAME")
    m0, m1 = _moser_builtin(args.builtin)
    report = ch.moser_flow(m0, m1, box_radius=0.3, steps=args.time_steps,
                           tol_pde=args.tol_pde)
    _emit(report.as_dict(), args.format)
    ok = (report.max_omega_residual <= 1e-4 and report.max_eta_residual <= 1e-4
          and report.max_velocity_at_origin <= 1e-12)
    return EXIT_TRUE if ok else EXIT_FALSE


# --- torus subcommands ------------------------------------------------------

def _torus_builtin(name):
    eps = 0.01
    if name == "identity":
        return tor.identity_map(1)
    if name == "translation":
        return tor.translation_map(1, [0.1, 0.0, 0.0])
    if name == "translation-shift":
        return tor.translation_map(1, [0.1, 0.0, 0.05])
    if name == "eps-flow":
        gam = lambda P: np.broadcast_to(np.array([eps, 0.0, 0.0]),
                                        (len(np.atleast_2d(P)), 3)).copy()
        return tor.hamiltonian_flow_map(1, gam, steps=32)
    if name == "eps-wave":
        def gam(P):
            P = np.atleast_2d(P)
            q, p = P[:, 0], P[:, 1]
            two_pi = 2 * np.pi
            dq = eps * (1 - two_pi * np.sin(two_pi * q) * np.cos(two_pi * p))
            dp = eps * (-two_pi * np.cos(two_pi * q) * np.sin(two_pi * p))
            return np.stack([dq, dp, np.zeros(len(P))], axis=1)
        return tor.hamiltonian_flow_map(1, gam, steps=32)
    if name == "exact-form":
        def alpha_fn(P):
            P = np.atleast_2d(P)
            q, p = P[:, 0], P[:, 1]
            two_pi = 2 * np.pi
            dq = -eps * two_pi * np.sin(two_pi * q) * np.cos(two_pi * p)
            dp = -eps * two_pi * np.cos(two_pi * q) * np.sin(two_pi * p)
            return np.stack([dq, dp, np.zeros(len(P))], axis=1)
        alpha = tor.ClosedOneForm(3, alpha_fn, np.zeros(3))
        return tor.weinstein_inverse(alpha, 0.0)
    raise ParseError(f"unknown torus builtin {name!r}")


def _torus_map_from_args(args):
    if args.builtin:
        return _torus_builtin(args.builtin)
    obj = _load_input(args.input)
    return tor.torusmap_from_json(obj)


def cmd_weinstein(args):
    h = _torus_map_from_args(args)
    form, u = tor.weinstein_oneform(h, grid_res=min(args.grid, 32))
    report = {
        "periods": [float(format(x, ".12g")) for x in form.periods],
        "reeb_shift": u,
        "c0_bound": h.c0_bound,
    }
    _emit(report, args.format)
    return EXIT_TRUE


def cmd_flux(args):
    h = _torus_map_from_args(args)
    report = tor.flux_vs_weinstein(h, K=args.time_steps, grid_res=args.grid)
    _emit(report.as_dict(), args.format)
    return EXIT_TRUE if report.max_period_diff <= 1e-3 else EXIT_FALSE


def cmd_fixed_points(args):
    f = _torus_map_from_args(args)
    zeros, identically_zero = tor.zeros_of_weinstein_form(
        f, grid_res=min(args.grid, 24), tol_pde=args.tol_pde)
    verified = []
    for z in zeros:
        dist = tor.torus_point_distance(f(z[None]), z[None])
        verified.append(dist <= 10 * args.tol_pde)
    report = {
        "identically_zero_form": identically_zero,
        "count": len(zeros),
        "points": [[float(format(v, ".12g")) for v in z] for z in zeros[:16]],
        "all_fixed_points": bool(all(verified)) if verified else True,
    }
    _emit(report, args.format)
    if identically_zero:
        return EXIT_TRUE
    return EXIT_TRUE if zeros and all(verified) else EXIT_FALSE


# --- searches and the corpus ------------------------------------------------

def cmd_ortho1_search(args):
    """Bounded probe: coordinate subspaces F with V = F + F^orthogonal (direct).

    Exercises the tension between the claim that no proper subspace splits V
    with its orthogonal and the splitting ker psi + span xi; reports every
    coordinate subspace that does split V.
    """
    from itertools import combinations
    findings = []
    for n in (1, 2):
        space = lin.standard_space(n)
        d = space.dim
        for r in range(1, d):
            for axes_idx in combinations(range(d), r):
                cols = [[1 if i == a else 0 for i in range(d)] for a in axes_idx]
                F = lin.Subspace.span(cols, d, space.mode)
                if F == space.reeb_line():
                    continue
                ortho = lin.orthogonal(space, F)
                if F.intersect(ortho).dim == 0 and F.sum(ortho).dim == d:
                    findings.append({"dim": d, "axes": list(axes_idx)})
    _emit({"count": len(findings), "splitting_subspaces": findings}, args.format)
    return EXIT_TRUE


def _corpus_lines():
    lines = []

    def record(status, name, detail):
        lines.append((status, name, detail))

    # standard space basics
    s3 = lin.standard_space(1)
    ok = [lin._scalar_to_json(x, "exact") for x in s3.reeb] == ["0", "0", "1"]
    record("PASS" if ok else "FAIL", "standard-3-reeb", "reeb = (0, 0, 1)")

    ok = lin.musical(s3, mat.as_vector([1, 0, 0], "exact")).tolist() == \
        mat.as_vector([0, 1, 0], "exact").tolist()
    record("PASS" if ok else "FAIL", "standard-3-musical-e1", "musical(e1) = (0, 1, 0)")

    # the five-dimensional worked example: omega = dx1^dx2 + dx4^dx5, psi = dx3
    B = [[0, 1, 0, 0, 0], [-1, 0, 0, 0, 0], [0, 0, 0, 0, 0],
         [0, 0, 0, 0, 1], [0, 0, 0, -1, 0]]
    ex1 = lin.build_space(B, [0, 0, 1, 0, 0])
    reeb = [lin._scalar_to_json(x, "exact") for x in ex1.reeb]
    derived_ok = reeb == ["0", "0", "1", "0", "0"]
    record("PASS" if derived_ok else "FAIL", "example-5d-reeb-derived",
           "reeb = e3 (psi(e3) = 1, B e3 = 0)")
    record("FLAG", "example-5d-reeb-asserted",
           "asserted reeb (1, 0, 0, 0, 0) fails psi(xi) = 1; derived e3")

    F = lin.Subspace.span([[0, 1, 0, 0, 0], [0, 0, 1, 0, 0], [0, 0, 0, 1, 0]], 5, "exact")
    ortho = lin.orthogonal(ex1, F)
    expected = lin.Subspace.span([[0, 1, 0, 0, 0], [0, 0, 0, 1, 0]], 5, "exact")
    oracle = lin.orthogonal_bruteforce(ex1, F)
    ok = ortho == expected and ortho == oracle
    record("PASS" if ok else "FAIL", "example-5d-orthogonal-derived",
           "span(e2, e3, e4) orthogonal = span(e2, e4), oracle-confirmed")
    record("FLAG", "example-5d-orthogonal-asserted",
           "asserted span(e1, e5) fails pairing(e1, e2) = 1; derived span(e2, e4)")

    F23 = lin.Subspace.span([[0, 1, 0, 0, 0], [0, 0, 1, 0, 0]], 5, "exact")
    cls = lin.classify(ex1, F23)
    record("PASS" if not cls.isotropic else "FAIL", "example-5d-e2e3-not-isotropic",
           "pairing(e3, e3) = psi(e3)^2 = 1, so span(e2, e3) is not isotropic")
    record("FLAG", "example-5d-e2e3-asserted",
           "asserted isotropy of span(e2, e3) contradicts pairing(e3, e3) = 1")

    F14 = lin.Subspace.span([[1, 0, 0, 0, 0], [0, 0, 0, 1, 0]], 5, "exact")
    cls = lin.classify(ex1, F14)
    record("PASS" if cls.lagrangian_like else "FAIL", "example-5d-e1e4-lagrangian",
           "span(e1, e4) is isotropic with orthogonal span(e1, e4, e3)")

    # standard Lagrangian subspace
    s5 = lin.standard_space(2)
    L = lin.Subspace.span([[1, 0, 0, 0, 0], [0, 1, 0, 0, 0]], 5, "exact")
    cls = lin.classify(s5, L)
    record("PASS" if cls.lagrangian_like else "FAIL", "standard-5-e-span-lagrangian",
           "span(e1, e2) is Lagrangian-like in the standard space")

    # Weil chart data
    w = lin.weil_space(1, 3)
    zcomp = {lin._scalar_to_json(w.reeb[i], "exact") for i in range(6, 9)}
    ok = w.dim == 9 and zcomp == {"1/3"} and \
        all(x == 0 for x in (w.b @ w.reeb))
    record("PASS" if ok else "FAIL", "weil-1-3-reeb",
           "dim 9, reeb z-components 1/3, B reeb = 0")

    # graph of a function over the q-plane with constant z-value
    model = ch.flat_standard(2)
    grid = ch.param_grid([[-0.9, 0.9]] * 2, 7)
    rep = ch.check_lagrangian_submanifold(
        model, ch.ParamSubmanifold(lambda u: np.array([u[0], u[1], 0, 0, 0.25]),
                                   2, grid))
    record("PASS" if rep.verdict else "FAIL", "flat-graph-constant-z",
           "constant-z graph over the q-plane is Lagrangian-like")

    rep = ch.check_lagrangian_submanifold(
        model, ch.ParamSubmanifold(lambda u: np.array([u[0], u[1], 0, 0, u[0] ** 2]),
                                   2, grid))
    expected_max = 1.8
    ok = (not rep.verdict
          and abs(rep.max_eta_pullback - expected_max) <= 0.02 * expected_max)
    record("PASS" if ok else "FAIL", "flat-graph-x1sq-refuted",
           "eta-pullback of the x1^2 graph is df with grid max 1.8")
    record("FLAG", "flat-graph-nonconstant-asserted",
           "asserted Lagrangian-like graph with nonconstant f has eta-pullback df != 0")

    # weil-chart Lagrangian-like submanifold of dimension nl + (l-1)/2
    mw = ch.weil_chart(1, 3)
    g4 = ch.param_grid([[-0.5, 0.5]] * 4, 4)
    rep = ch.check_lagrangian_submanifold(
        mw, ch.ParamSubmanifold(
            lambda u: np.array([u[0], u[1], u[2], 0, 0, 0, u[3], -u[3], 0.0]),
            4, g4))
    record("PASS" if rep.verdict and rep.dim_ok else "FAIL", "weil-1-3-l2-submanifold",
           "the y = 0, z2 = -z1, z3 = 0 piece has dimension 4 = nl + (l-1)/2")

    return lines


def cmd_corpus(args):
    lines = _corpus_lines()
    if args.format == "json":
        report = {"entries": [{"status": s, "name": n, "detail": d}
                              for s, n, d in lines],
                  "flags": sum(1 for s, _, _ in lines if s == "FLAG")}
        _emit(report, "json")
    else:
        for status, name, detail in lines:
            print(f"{status:<4}  {name:<36}  {detail}")
        print(f"total: {len(lines)}  flags: {sum(1 for s, _, _ in lines if s == 'FLAG')}")
    return EXIT_TRUE if all(s in ("PASS", "FLAG") for s, _, _ in lines) else EXIT_FALSE


# --- entry point ------------------------------------------------------------

COMMANDS = {
    "validate": cmd_validate,
    "orthogonal": cmd_orthogonal,
    "classify": cmd_classify,
    "darboux": cmd_darboux,
    "extend": cmd_extend,
    "transverse": cmd_transverse,
    "canoniso": cmd_canoniso,
    "cocomplex": cmd_cocomplex,
    "check-submanifold": cmd_check_submanifold,
    "check-graph": cmd_check_graph,
    "oneform-graph": cmd_oneform_graph,
    "moser": cmd_moser,
    "weinstein": cmd_weinstein,
    "flux": cmd_flux,
    "fixed-points": cmd_fixed_points,
    "ortho1-search": cmd_ortho1_search,
    "corpus": cmd_corpus,
}


def build_parser():
    parser = argparse.ArgumentParser(
        prog="cosymp",
        description="Cosymplectic linear algebra and chart-level geometry toolkit.")
    parser.add_argument("subcommand", choices=sorted(COMMANDS))
    parser.add_argument("--input", default=None, help="path to a JSON input file")
    parser.add_argument("--mode", choices=("exact", "float"), default="exact")
    parser.add_argument("--tol-lin", type=float, default=1e-9)
    parser.add_argument("--tol-pde", type=float, default=1e-6)
    parser.add_argument("--tol-polar", type=float, default=1e-9)
    parser.add_argument("--grid", type=int, default=24)
    parser.add_argument("--time-steps", type=int, default=32)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--format", choices=("json", "text"), default="text")
    parser.add_argument("--builtin", default=None)
    return parser


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit:
        return EXIT_INPUT
    if args.tol_lin <= 0 or args.tol_pde <= 0 or args.tol_polar <= 0:
        print("error: tolerances must be positive", file=sys.stderr)
        return EXIT_INPUT
    if args.grid < 8 or args.time_steps < 8:
        print("error: --grid and --time-steps must be at least 8", file=sys.stderr)
        return EXIT_INPUT
    try:
        return COMMANDS[args.subcommand](args)
    except ParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (KeyError, ValueError, TypeError) as exc:
        print(f"error: malformed input ({exc})", file=sys.stderr)
        return EXIT_INPUT
    except CosympError as exc:
        print(f"refuted: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_FALSE


if __name__ == "__main__":
    sys.exit(main())
