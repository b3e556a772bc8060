"""Cosymplectic geometry on explicit coordinate charts.

Chart models carry a 2-form field and a 1-form field over a flat box or a
torus; validation, Lagrangian-like submanifold and graph checks, the radial
homotopy primitive, and the relative Moser flow all operate on them by
pointwise linear algebra and finite differences.

Form fields are batched: omega_at maps an (N, dim) array of points to an
(N, dim, dim) array of antisymmetric matrices, eta_at to an (N, dim) array
of covectors.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import (
    DegenerateInterpolation,
    DimensionMismatch,
    DomainMismatch,
    FlowEscapedBox,
    NotClosed,
    PointwiseDegenerate,
    RankDeficient,
    StructuresDisagreeAtQ,
)

TAU_PDE = 1e-6
TAU_LIN = 1e-9


def _bsolve(A, b):
    """Batched linear solve with vector right-hand sides."""
    return np.linalg.solve(A, b[..., None])[..., 0]


# --- chart models -----------------------------------------------------------

@dataclass(frozen=True)
class ChartModel:
    dim: int
    omega_at: object          # batched (N, dim) -> (N, dim, dim)
    eta_at: object            # batched (N, dim) -> (N, dim)
    domain_kind: str          # "flat" or "torus"
    bounds: np.ndarray        # (dim, 2) box bounds, or (dim,) periods for torus
    grid_res: int
    lagrangian_dim: int       # expected parameter dimension of Lagrangian-like pieces
    reeb_at: object = None    # batched (N, dim) -> (N, dim); default: pointwise solve

    @property
    def n(self):
        return (self.dim - 1) // 2

    def reeb(self, points):
        points = np.atleast_2d(np.asarray(points, dtype=float))
        if self.reeb_at is not None:
            return self.reeb_at(points)
        Om = self.omega_at(points)
        eta = self.eta_at(points)
        I = Om + eta[:, :, None] * eta[:, None, :]
        return _bsolve(I, eta)

    def contains(self, points, slack=1e-9):
        if self.domain_kind == "torus":
            return np.ones(len(np.atleast_2d(points)), dtype=bool)
        p = np.atleast_2d(points)
        lo, hi = self.bounds[:, 0], self.bounds[:, 1]
        return np.all((p >= lo - slack) & (p <= hi + slack), axis=1)


def constant_form_fields(B, psi):
    B = np.asarray(B, dtype=float)
    psi = np.asarray(psi, dtype=float)

    def omega_at(points):
        points = np.atleast_2d(points)
        return np.broadcast_to(B, (len(points),) + B.shape).copy()

    def eta_at(points):
        points = np.atleast_2d(points)
        return np.broadcast_to(psi, (len(points),) + psi.shape).copy()

    return omega_at, eta_at


def _sample_points(model, cap=1024):
    """Deterministic validation lattice: largest per-axis count r with r^dim <= cap."""
    d = model.dim
    r = 2
    while (r + 1) ** d <= cap:
        r += 1
    axes = []
    for i in range(d):
        if model.domain_kind == "torus":
            axes.append(np.linspace(0.0, model.bounds[i], r, endpoint=False))
        else:
            lo, hi = model.bounds[i]
            axes.append(np.linspace(lo, hi, r))
    mesh = np.meshgrid(*axes, indexing="ij")
    return np.stack([m.ravel() for m in mesh], axis=1)


def _fd_partial(field_fn, points, axis, h):
    """4th-order central difference of a batched field along one coordinate."""
    e = np.zeros(points.shape[1])
    e[axis] = 1.0
    f2p = field_fn(points + 2 * h * e)
    f1p = field_fn(points + h * e)
    f1m = field_fn(points - h * e)
    f2m = field_fn(points - 2 * h * e)
    return (-f2p + 8 * f1p - 8 * f1m + f2m) / (12 * h)


def d_oneform_defect(eta_at, points, h):
    """max |d(eta)| component over the points, by finite differences."""
    d = points.shape[1]
    partials = [_fd_partial(eta_at, points, i, h) for i in range(d)]
    worst = 0.0
    for i in range(d):
        for j in range(i + 1, d):
            worst = max(worst, float(np.max(np.abs(partials[i][:, j] - partials[j][:, i]))))
    return worst


def d_twoform_defect(omega_at, points, h):
    """max |d(omega)| component over the points."""
    d = points.shape[1]
    partials = [_fd_partial(omega_at, points, i, h) for i in range(d)]
    worst = 0.0
    for i in range(d):
        for j in range(i + 1, d):
            for k in range(j + 1, d):
                cyc = partials[i][:, j, k] + partials[j][:, k, i] + partials[k][:, i, j]
                worst = max(worst, float(np.max(np.abs(cyc))))
    return worst


def _validate_model(model, tol_pde=TAU_PDE, relaxed_reeb=None):
    pts = _sample_points(model)
    Om = model.omega_at(pts)
    eta = model.eta_at(pts)
    if np.max(np.abs(Om + np.transpose(Om, (0, 2, 1)))) > tol_pde:
        raise PointwiseDegenerate("omega is not antisymmetric on the sample lattice")
    if relaxed_reeb is not None:
        # structures with singular musical matrix but a known Reeb field:
        # only the defining relations are checked
        xi = np.broadcast_to(relaxed_reeb, eta.shape)
        if np.max(np.abs(np.einsum("ni,ni->n", eta, xi) - 1.0)) > tol_pde:
            raise PointwiseDegenerate("eta(reeb) != 1 on the sample lattice")
        if np.max(np.abs(np.einsum("nij,nj->ni", Om, xi))) > tol_pde:
            raise PointwiseDegenerate("omega(reeb, .) != 0 on the sample lattice")
    else:
        I = Om + eta[:, :, None] * eta[:, None, :]
        sign, logdet = np.linalg.slogdet(I)
        if np.any(sign == 0) or np.any(logdet < np.log(1e-12)):
            raise PointwiseDegenerate("omega + eta^T eta is singular at a sample point")
    if model.domain_kind == "torus":
        h = float(np.min(model.bounds)) / model.grid_res
        fd_pts = pts
    else:
        spans = model.bounds[:, 1] - model.bounds[:, 0]
        h = float(np.min(spans)) / (model.grid_res - 1)
        # keep the 4-point stencil inside the box
        inside = np.all((pts - 2 * h >= model.bounds[:, 0]) &
                        (pts + 2 * h <= model.bounds[:, 1]), axis=1)
        fd_pts = pts[inside] if np.any(inside) else pts[:1] * 0.0 + pts.mean(axis=0)
        fd_pts = np.atleast_2d(fd_pts)
    if d_oneform_defect(model.eta_at, fd_pts, h) > tol_pde:
        raise NotClosed("d(eta) exceeds the PDE tolerance")
    if d_twoform_defect(model.omega_at, fd_pts, h) > tol_pde:
        raise NotClosed("d(omega) exceeds the PDE tolerance")
    return model


def flat_standard(n, box_radius=1.0, grid_res=9):
    d = 2 * n + 1
    B = np.zeros((d, d))
    for i in range(n):
        B[i, n + i] = 1.0
        B[n + i, i] = -1.0
    psi = np.zeros(d)
    psi[d - 1] = 1.0
    omega_at, eta_at = constant_form_fields(B, psi)
    bounds = np.array([[-box_radius, box_radius]] * d)
    model = ChartModel(d, omega_at, eta_at, "flat", bounds, grid_res, n)
    return _validate_model(model)


def torus_standard(n, periods=1.0, grid_res=9):
    d = 2 * n + 1
    B = np.zeros((d, d))
    for i in range(n):
        B[i, n + i] = 1.0
        B[n + i, i] = -1.0
    psi = np.zeros(d)
    psi[d - 1] = 1.0
    omega_at, eta_at = constant_form_fields(B, psi)
    per = np.full(d, float(periods))
    model = ChartModel(d, omega_at, eta_at, "torus", per, grid_res, n)
    return _validate_model(model)


def weil_chart(n, l, box_radius=1.0, grid_res=9):
    """Chart of dimension (2n+1)l with omega = sum dx_ij ^ dy_ij, eta = sum dz_j.

    For l > 1 the pointwise musical matrix is singular, so validation checks
    the Reeb relations for the canonical field (1/l) sum d/dz_j instead of
    invertibility.  Lagrangian-like pieces have dimension nl + (l-1)/2.
    """
    if l < 1 or l % 2 == 0:
        raise DimensionMismatch(f"fibre dimension l={l} must be odd")
    d = (2 * n + 1) * l
    nl = n * l
    B = np.zeros((d, d))
    for k in range(nl):
        B[k, nl + k] = 1.0
        B[nl + k, k] = -1.0
    psi = np.zeros(d)
    psi[2 * nl:] = 1.0
    omega_at, eta_at = constant_form_fields(B, psi)
    bounds = np.array([[-box_radius, box_radius]] * d)
    xi = np.zeros(d)
    xi[2 * nl:] = 1.0 / l

    def reeb_at(points):
        points = np.atleast_2d(points)
        return np.broadcast_to(xi, (len(points), d)).copy()

    lag_dim = nl + (l - 1) // 2
    model = ChartModel(d, omega_at, eta_at, "flat", bounds, grid_res, lag_dim, reeb_at)
    if l == 1:
        return _validate_model(model)
    return _validate_model(model, relaxed_reeb=xi)


def custom_model(omega_at, eta_at, bounds, grid_res=9, tol_pde=TAU_PDE):
    bounds = np.asarray(bounds, dtype=float)
    d = bounds.shape[0]
    if d % 2 == 0:
        raise DimensionMismatch(f"dimension {d} is even")
    model = ChartModel(d, omega_at, eta_at, "flat", bounds, grid_res, (d - 1) // 2)
    return _validate_model(model, tol_pde)


def make_model(kind, **kwargs):
    """Dispatch to the built-in chart constructors by name."""
    builders = {
        "flat_standard": flat_standard,
        "torus_standard": torus_standard,
        "weil_chart": weil_chart,
        "custom": custom_model,
    }
    if kind not in builders:
        raise DimensionMismatch(f"unknown model kind {kind!r}")
    return builders[kind](**kwargs)


# --- submanifold and graph checks ------------------------------------------

@dataclass(frozen=True)
class ParamSubmanifold:
    param: object            # u (k,) -> point (dim,)
    k: int
    sample_grid: np.ndarray  # (N, k) parameter samples
    jacobian: object = None  # u -> (dim, k); finite-difference fallback if None

    def jac(self, u, h=1e-5):
        if self.jacobian is not None:
            return np.asarray(self.jacobian(u), dtype=float)
        u = np.asarray(u, dtype=float)
        cols = []
        for a in range(self.k):
            e = np.zeros(self.k)
            e[a] = 1.0
            cols.append((-np.asarray(self.param(u + 2 * h * e), float)
                         + 8 * np.asarray(self.param(u + h * e), float)
                         - 8 * np.asarray(self.param(u - h * e), float)
                         + np.asarray(self.param(u - 2 * h * e), float)) / (12 * h))
        return np.stack(cols, axis=1)


@dataclass(frozen=True)
class LagrangianReport:
    max_omega_pullback: float
    max_eta_pullback: float
    dim_ok: bool
    verdict: bool
    worst_point: np.ndarray

    def as_dict(self):
        return {
            "max_omega_pullback": self.max_omega_pullback,
            "max_eta_pullback": self.max_eta_pullback,
            "dim_ok": self.dim_ok,
            "verdict": self.verdict,
            "worst_point": [float(x) for x in np.atleast_1d(self.worst_point)],
        }


def check_lagrangian_submanifold(model, sub, tol_pde=TAU_PDE):
    """Pull omega and eta back through the parametrization and report maxima."""
    worst = 0.0
    worst_u = sub.sample_grid[0]
    max_om = 0.0
    max_et = 0.0
    for u in sub.sample_grid:
        x = np.asarray(sub.param(u), dtype=float)
        J = sub.jac(u)
        sv = np.linalg.svd(J, compute_uv=False)
        if sv[-1] <= tol_pde:
            raise RankDeficient(f"jacobian rank below {sub.k} at parameter {u}")
        Om = model.omega_at(x[None])[0]
        eta = model.eta_at(x[None])[0]
        po = float(np.max(np.abs(J.T @ Om @ J)))
        pe = float(np.max(np.abs(eta @ J)))
        if max(po, pe) >= worst:
            worst = max(po, pe)
            worst_u = u
        max_om = max(max_om, po)
        max_et = max(max_et, pe)
    dim_ok = sub.k == model.lagrangian_dim
    verdict = max_om <= tol_pde and max_et <= tol_pde and dim_ok
    return LagrangianReport(max_om, max_et, dim_ok, verdict, np.asarray(worst_u))


def param_grid(bounds, res):
    bounds = np.asarray(bounds, dtype=float)
    axes = [np.linspace(lo, hi, res) for lo, hi in bounds]
    mesh = np.meshgrid(*axes, indexing="ij")
    return np.stack([m.ravel() for m in mesh], axis=1)


@dataclass(frozen=True)
class GraphReport:
    max_omega_residual: float
    max_eta_residual: float
    verdict: bool
    graph_verdict: bool       # independent code path through the product structure
    worst_point: np.ndarray

    def as_dict(self):
        return {
            "max_omega_residual": self.max_omega_residual,
            "max_eta_residual": self.max_eta_residual,
            "verdict": self.verdict,
            "graph_verdict": self.graph_verdict,
            "worst_point": [float(x) for x in np.atleast_1d(self.worst_point)],
        }


def _map_jacobian(phi, x, h=1e-5):
    d = x.shape[0]
    cols = []
    for a in range(d):
        e = np.zeros(d)
        e[a] = 1.0
        cols.append((-np.asarray(phi(x + 2 * h * e), float)
                     + 8 * np.asarray(phi(x + h * e), float)
                     - 8 * np.asarray(phi(x - h * e), float)
                     + np.asarray(phi(x - 2 * h * e), float)) / (12 * h))
    return np.stack(cols, axis=1)


def check_graph_cosymplectomorphism(model1, model2, phi, phi_jacobian=None,
                                    grid=None, tol_pde=TAU_PDE):
    """Test whether phi intertwines the two structures on the sampled set.

    Two code paths produce the verdict: the direct pullback comparison
    phi*omega2 vs omega1, and the Lagrangian-like test of the graph of phi
    inside the product chart carrying pi1*omega1 - pi2*omega2.  The two
    verdicts agree whenever the arithmetic does, which is itself a checked
    property.
    """
    if model1.dim != model2.dim:
        raise DomainMismatch("models have different dimensions")
    if grid is None:
        grid = _sample_points(model1, cap=512)
    max_om = 0.0
    max_et = 0.0
    g_max = 0.0
    worst = grid[0]
    for x in grid:
        y = np.asarray(phi(x), dtype=float)
        if model2.domain_kind == "flat" and not model2.contains(y[None])[0]:
            raise DomainMismatch(f"phi({x}) leaves the target domain")
        J = (np.asarray(phi_jacobian(x), float) if phi_jacobian is not None
             else _map_jacobian(phi, x))
        Om1 = model1.omega_at(x[None])[0]
        et1 = model1.eta_at(x[None])[0]
        Om2 = model2.omega_at(y[None])[0]
        et2 = model2.eta_at(y[None])[0]
        r_om = float(np.max(np.abs(J.T @ Om2 @ J - Om1)))
        r_et = float(np.max(np.abs(et2 @ J - et1)))
        # independent path: graph parametrized by u -> (u, phi(u)) with
        # jacobian [I; J], pulled through the difference structure on the product
        d = model1.dim
        G = np.vstack([np.eye(d), J])
        Om_prod = np.zeros((2 * d, 2 * d))
        Om_prod[:d, :d] = Om1
        Om_prod[d:, d:] = -Om2
        eta_prod = np.concatenate([et1, -et2])
        g_om = float(np.max(np.abs(G.T @ Om_prod @ G)))
        g_et = float(np.max(np.abs(eta_prod @ G)))
        g_max = max(g_max, g_om, g_et)
        if max(r_om, r_et) >= max(max_om, max_et):
            worst = x
        max_om = max(max_om, r_om)
        max_et = max(max_et, r_et)
    verdict = max_om <= tol_pde and max_et <= tol_pde
    graph_verdict = g_max <= tol_pde
    return GraphReport(max_om, max_et, verdict, graph_verdict, np.asarray(worst))


@dataclass(frozen=True)
class OneFormGraphReport:
    max_closedness_defect: float
    t0: float
    verdict: bool

    def as_dict(self):
        return {
            "max_closedness_defect": self.max_closedness_defect,
            "t0": self.t0,
            "verdict": self.verdict,
        }


def check_oneform_graph(n_dim, beta_at, t0, bounds=None, res=9,
                        tol_pde=TAU_PDE, h=1e-3):
    """The graph {(x, beta_x, t0)} in T*N x R is Lagrangian-like iff beta is closed.

    beta_at is batched: (N, n_dim) -> (N, n_dim).  The last coordinate is the
    single value t0 (a countable set on its own), so only closedness of beta
    decides the verdict.
    """
    if bounds is None:
        bounds = np.array([[-1.0, 1.0]] * n_dim)
    pts = param_grid(bounds, res)
    shrink = np.all((pts - 2 * h >= bounds[:, 0]) & (pts + 2 * h <= bounds[:, 1]), axis=1)
    pts = pts[shrink] if np.any(shrink) else pts
    defect = d_oneform_defect(beta_at, pts, h)
    return OneFormGraphReport(defect, float(t0), defect <= tol_pde)


# --- homotopy primitive and Moser flow -------------------------------------

def _gauss_legendre_01(nodes):
    x, w = np.polynomial.legendre.leggauss(nodes)
    return 0.5 * (x + 1.0), 0.5 * w


def homotopy_primitive_oneform(alpha_at, center, points, nodes=32):
    """Primitive function F with dF = alpha on a star-shaped domain.

    F(x) = integral over u in [0,1] of alpha(c + u(x-c))(x - c).
    """
    center = np.asarray(center, dtype=float)
    points = np.atleast_2d(np.asarray(points, dtype=float))
    u, w = _gauss_legendre_01(nodes)
    diff = points - center
    ray = center + u[None, :, None] * diff[:, None, :]        # (N, nodes, dim)
    flat = ray.reshape(-1, points.shape[1])
    vals = alpha_at(flat).reshape(points.shape[0], nodes, -1)
    integrand = np.einsum("nku,nu->nk", vals, diff)
    return integrand @ w


def homotopy_primitive_twoform(omega_at, center, points, nodes=32):
    """Primitive 1-form beta with d(beta) = omega on a star-shaped domain.

    beta(x) = integral of u * omega(c + u(x-c))(x - c, .).
    """
    center = np.asarray(center, dtype=float)
    points = np.atleast_2d(np.asarray(points, dtype=float))
    u, w = _gauss_legendre_01(nodes)
    diff = points - center
    ray = center + u[None, :, None] * diff[:, None, :]
    flat = ray.reshape(-1, points.shape[1])
    Om = omega_at(flat).reshape(points.shape[0], nodes, points.shape[1], points.shape[1])
    integrand = np.einsum("nkuv,nu->nkv", Om, diff)
    return np.einsum("nkv,k->nv", integrand, u * w)


def homotopy_primitive(form_at, degree, center, points, nodes=32,
                       check_closed=True, tol_pde=TAU_PDE, h=1e-3):
    """Radial homotopy-formula primitive of a closed form of degree 1 or 2."""
    points = np.atleast_2d(np.asarray(points, dtype=float))
    if check_closed:
        defect = (d_oneform_defect(form_at, points, h) if degree == 1
                  else d_twoform_defect(form_at, points, h))
        if defect > tol_pde:
            raise NotClosed(f"form has d-defect {defect:.3e} at the sample points")
    if degree == 1:
        return homotopy_primitive_oneform(form_at, center, points, nodes)
    if degree == 2:
        return homotopy_primitive_twoform(form_at, center, points, nodes)
    raise DimensionMismatch("only degrees 1 and 2 are supported")


@dataclass(frozen=True)
class MoserReport:
    max_omega_residual: float
    max_eta_residual: float
    max_velocity_at_origin: float
    theta_origin: np.ndarray
    reeb_contraction_check: float    # max |(omega1-omega0)(xi_t, .)| at samples
    reeb_primitive_check: float      # max |grad of beta(xi_t)| at samples
    seeds: np.ndarray
    theta: np.ndarray

    def as_dict(self):
        return {
            "max_omega_residual": self.max_omega_residual,
            "max_eta_residual": self.max_eta_residual,
            "max_velocity_at_origin": self.max_velocity_at_origin,
            "theta_origin": [float(x) for x in self.theta_origin],
            "reeb_contraction_check": self.reeb_contraction_check,
            "reeb_primitive_check": self.reeb_primitive_check,
        }


def moser_flow(model0, model1, box_radius=0.3, steps=64, seed_res=None,
               nodes=32, tol_pde=TAU_PDE):
    """Relative Moser trick between two structures agreeing at the origin.

    Solves I_t(X_t) = -(beta + f eta_t) with beta, f the radial primitives of
    the structure differences, integrates the seeds by RK4, and reports the
    pullback residuals of the time-1 map on the seed grid.
    """
    d = model0.dim
    if model1.dim != d:
        raise DomainMismatch("models have different dimensions")
    origin = np.zeros((1, d))
    dOm0 = model1.omega_at(origin)[0] - model0.omega_at(origin)[0]
    det0 = model1.eta_at(origin)[0] - model0.eta_at(origin)[0]
    if np.max(np.abs(dOm0)) > tol_pde or np.max(np.abs(det0)) > tol_pde:
        raise StructuresDisagreeAtQ("structures differ at the origin")

    def delta_omega(P):
        return model1.omega_at(P) - model0.omega_at(P)

    def delta_eta(P):
        return model1.eta_at(P) - model0.eta_at(P)

    center = np.zeros(d)

    def beta(P):
        return homotopy_primitive_twoform(delta_omega, center, P, nodes)

    def fprim(P):
        return homotopy_primitive_oneform(delta_eta, center, P, nodes)

    def velocity(t, P):
        Om0 = model0.omega_at(P)
        Om1 = model1.omega_at(P)
        et0 = model0.eta_at(P)
        et1 = model1.eta_at(P)
        Bt = Om0 + t * (Om1 - Om0)
        et = et0 + t * (et1 - et0)
        It = Bt + et[:, :, None] * et[:, None, :]
        sign, logdet = np.linalg.slogdet(It)
        if np.any(sign == 0) or np.any(logdet < np.log(1e-12)):
            raise DegenerateInterpolation("interpolated structure degenerates on the box")
        rhs = -(beta(P) + fprim(P)[:, None] * et)
        # I_t(X) is the covector X^T(B_t + eta^T eta), so the solve runs
        # against the transpose
        return _bsolve(np.transpose(It, (0, 2, 1)), rhs)

    if seed_res is None:
        seed_res = 9 if d == 3 else 3
    axes = [np.linspace(-box_radius, box_radius, seed_res)] * d
    mesh = np.meshgrid(*axes, indexing="ij")
    seeds = np.stack([m.ravel() for m in mesh], axis=1)
    ns = len(seeds)
    # neighboring seeds at small offsets are integrated alongside and give
    # the flow-map jacobian by 4th-order central differences
    hj = 1e-3
    offsets = [seeds]
    for a in range(d):
        e = np.zeros(d)
        e[a] = hj
        offsets.extend([seeds + e, seeds - e, seeds + 2 * e, seeds - 2 * e])
    P = np.vstack(offsets + [np.zeros((1, d))])   # track the origin alongside
    dt = 1.0 / steps
    for k in range(steps):
        t = k * dt
        k1 = velocity(t, P)
        k2 = velocity(t + dt / 2, P + dt / 2 * k1)
        k3 = velocity(t + dt / 2, P + dt / 2 * k2)
        k4 = velocity(t + dt, P + dt * k3)
        P = P + dt / 6 * (k1 + 2 * k2 + 2 * k3 + k4)
        if np.max(np.abs(P)) > 2 * box_radius + 1.0:
            raise FlowEscapedBox("a trajectory left the working box")
    theta = P[:ns]
    theta_origin = P[-1]
    v0 = max(float(np.max(np.abs(velocity(t, np.zeros((1, d))))))
             for t in np.linspace(0, 1, 9))

    Ji = np.empty((ns, d, d))
    for a in range(d):
        base = (1 + 4 * a) * ns
        p1 = P[base:base + ns]
        m1 = P[base + ns:base + 2 * ns]
        p2 = P[base + 2 * ns:base + 3 * ns]
        m2 = P[base + 3 * ns:base + 4 * ns]
        Ji[:, :, a] = (-p2 + 8 * p1 - 8 * m1 + m2) / (12 * hj)
    xi_img = theta
    Om1 = model1.omega_at(xi_img)
    et1 = model1.eta_at(xi_img)
    Om0 = model0.omega_at(seeds)
    et0 = model0.eta_at(seeds)
    pull_om = np.einsum("nau,nab,nbv->nuv", Ji, Om1, Ji)
    pull_et = np.einsum("na,nau->nu", et1, Ji)
    res_om = float(np.max(np.abs(pull_om - Om0)))
    res_et = float(np.max(np.abs(pull_et - et0)))

    # rigidity hypotheses checked at runtime: the interpolated Reeb field
    # contracts the omega-difference to zero, and beta(xi_t) has zero gradient
    check_pts = seeds[:: max(1, len(seeds) // 50)]
    c1 = 0.0
    c2 = 0.0
    for t in (0.0, 0.5, 1.0):
        Om0c = model0.omega_at(check_pts)
        Om1c = model1.omega_at(check_pts)
        et0c = model0.eta_at(check_pts)
        et1c = model1.eta_at(check_pts)
        Bt = Om0c + t * (Om1c - Om0c)
        et = et0c + t * (et1c - et0c)
        It = Bt + et[:, :, None] * et[:, None, :]
        xi_t = _bsolve(It, et)
        c1 = max(c1, float(np.max(np.abs(np.einsum("nab,nb->na", Om1c - Om0c, xi_t)))))

        def scalar(Pq, tt=t):
            Om0q = model0.omega_at(Pq)
            Om1q = model1.omega_at(Pq)
            et0q = model0.eta_at(Pq)
            et1q = model1.eta_at(Pq)
            Itq = (Om0q + tt * (Om1q - Om0q)
                   + (et0q + tt * (et1q - et0q))[:, :, None]
                   * (et0q + tt * (et1q - et0q))[:, None, :])
            xiq = _bsolve(Itq, et0q + tt * (et1q - et0q))
            return np.einsum("na,na->n", beta(Pq), xiq)[:, None]

        h = box_radius / 20
        for axis in range(d):
            grad = _fd_partial(scalar, check_pts, axis, h)
            c2 = max(c2, float(np.max(np.abs(grad))))

    return MoserReport(res_om, res_et, v0, theta_origin, c1, c2, seeds, theta)


# --- polynomial form tables (JSON interchange) ------------------------------

def polyform_from_json(obj):
    """Build a batched form field from a polynomial coefficient table.

    Schema: {"dim": d, "degree": 1|2, "components": {index_key: monomials}}
    where index_key is "i" (1-form component dx_i) or "i,j" (2-form component
    dx_i^dx_j, i < j) and monomials maps comma-separated exponent tuples to
    coefficients (the empty string is the constant term).
    """
    d = int(obj["dim"])
    degree = int(obj["degree"])

    def poly_eval(monomials, P):
        out = np.zeros(len(P))
        for key, coeff in monomials.items():
            expo = [int(e) for e in key.split(",")] if key else []
            term = np.full(len(P), float(coeff))
            for axis, e in enumerate(expo):
                if e:
                    term = term * P[:, axis] ** e
            out += term
        return out

    comps = obj["components"]
    if degree == 1:
        def field(P):
            P = np.atleast_2d(np.asarray(P, dtype=float))
            out = np.zeros((len(P), d))
            for key, mono in comps.items():
                i = int(key)
                out[:, i] += poly_eval(mono, P)
            return out
        return field
    if degree == 2:
        def field(P):
            P = np.atleast_2d(np.asarray(P, dtype=float))
            out = np.zeros((len(P), d, d))
            for key, mono in comps.items():
                i, j = (int(s) for s in key.split(","))
                vals = poly_eval(mono, P)
                out[:, i, j] += vals
                out[:, j, i] -= vals
            return out
        return field
    raise DimensionMismatch("degree must be 1 or 2")
