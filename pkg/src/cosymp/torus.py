"""The Weinstein-form pipeline on the flat torus T^{2n+1}.

Coordinates are (q_1..q_n, p_1..p_n, z) with the standard structure
omega = sum dq_i ^ dp_i and eta = dz.  Near-identity cosymplectomorphisms are
stored through their periodic displacement h(x) = x + delta(x) mod 1; the
Weinstein 1-form is read off in the flat midpoint chart, which makes the
graph correspondence pointwise-exact: zeros of the form are exactly the
fixed points of the map.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import (
    DimensionMismatch,
    NoConvergence,
    NonConstantReebShift,
    NotCosymplectomorphism,
    TooFarFromIdentity,
)

TAU_PDE = 1e-6
TAU_FIX = 1e-12

MIDPOINT_BOUND = 0.25    # c0 bound keeping torus midpoints well defined
INVERSE_BOUND = 0.125    # sup-norm bound keeping the inverse iteration contracting


def standard_musical(n):
    d = 2 * n + 1
    B = np.zeros((d, d))
    for i in range(n):
        B[i, n + i] = 1.0
        B[n + i, i] = -1.0
    psi = np.zeros(d)
    psi[d - 1] = 1.0
    return B + np.outer(psi, psi)


def torus_grid(dim, res):
    axes = [np.linspace(0.0, 1.0, res, endpoint=False)] * dim
    mesh = np.meshgrid(*axes, indexing="ij")
    return np.stack([m.ravel() for m in mesh], axis=1)


def wrap_diff(a, b):
    """Componentwise displacement from b to a on the unit torus, in [-1/2, 1/2)."""
    return (np.asarray(a) - np.asarray(b) + 0.5) % 1.0 - 0.5


def torus_point_distance(a, b):
    return float(np.max(np.linalg.norm(np.atleast_2d(wrap_diff(a, b)), axis=1)))


@dataclass(frozen=True)
class TorusMap:
    n: int
    displacement: object        # batched (N, dim) -> (N, dim), 1-periodic
    jacobian: object = None     # batched jacobian of the displacement, optional
    grid_res: int = 16
    c0_bound: float = field(default=None)

    @property
    def dim(self):
        return 2 * self.n + 1

    def __post_init__(self):
        if self.c0_bound is None:
            pts = torus_grid(self.dim, min(self.grid_res, 8) if self.dim == 3 else 5)
            delta = self.displacement(pts)
            object.__setattr__(self, "c0_bound",
                               float(np.max(np.linalg.norm(delta, axis=1))))
            for axis in range(self.dim):
                e = np.zeros(self.dim)
                e[axis] = 1.0
                if np.max(np.abs(self.displacement(pts + e) - delta)) > TAU_PDE:
                    raise DimensionMismatch(
                        f"displacement is not 1-periodic along axis {axis}")

    def __call__(self, points):
        points = np.atleast_2d(np.asarray(points, dtype=float))
        return (points + self.displacement(points)) % 1.0

    def unwrapped(self, points):
        points = np.atleast_2d(np.asarray(points, dtype=float))
        return points + self.displacement(points)

    def jac(self, points, h=1e-5):
        """Jacobian of the full map x + delta(x), batched."""
        points = np.atleast_2d(np.asarray(points, dtype=float))
        d = self.dim
        if self.jacobian is not None:
            return np.eye(d) + self.jacobian(points)
        J = np.empty((len(points), d, d))
        for a in range(d):
            e = np.zeros(d)
            e[a] = 1.0
            J[:, :, a] = (-self.displacement(points + 2 * h * e)
                          + 8 * self.displacement(points + h * e)
                          - 8 * self.displacement(points - h * e)
                          + self.displacement(points - 2 * h * e)) / (12 * h)
        return np.eye(d) + J


def identity_map(n):
    return TorusMap(n, lambda P: np.zeros_like(np.atleast_2d(P)))


def translation_map(n, shift):
    shift = np.asarray(shift, dtype=float)

    def disp(P):
        P = np.atleast_2d(P)
        return np.broadcast_to(shift, (len(P), 2 * n + 1)).copy()

    def jac(P):
        P = np.atleast_2d(P)
        return np.zeros((len(P), 2 * n + 1, 2 * n + 1))

    return TorusMap(n, disp, jac)


def c0_distance(f, g, grid_res=32):
    if f.n != g.n:
        raise DimensionMismatch("maps live on different tori")
    pts = torus_grid(f.dim, grid_res if f.dim == 3 else 6)
    return torus_point_distance(f.unwrapped(pts), g.unwrapped(pts))


@dataclass(frozen=True)
class ClosedOneForm:
    dim: int
    components: object          # batched (N, dim) -> (N, dim)
    periods: np.ndarray         # integrals over the coordinate loops

    def __call__(self, points):
        return self.components(np.atleast_2d(np.asarray(points, dtype=float)))


def loop_periods(components, dim, res=64):
    """Trapezoid-rule integrals of a 1-form over the coordinate loops."""
    s = np.linspace(0.0, 1.0, res, endpoint=False)
    periods = np.empty(dim)
    for i in range(dim):
        pts = np.zeros((res, dim))
        pts[:, i] = s
        vals = components(pts)[:, i]
        periods[i] = float(np.mean(vals))
    return periods


def closedness_defect(components, dim, res=12, h=1e-4):
    pts = torus_grid(dim, res if dim == 3 else 5)
    worst = 0.0
    partials = []
    for a in range(dim):
        e = np.zeros(dim)
        e[a] = 1.0
        partials.append((-components(pts + 2 * h * e) + 8 * components(pts + h * e)
                         - 8 * components(pts - h * e) + components(pts - 2 * h * e))
                        / (12 * h))
    for i in range(dim):
        for j in range(i + 1, dim):
            worst = max(worst, float(np.max(np.abs(partials[i][:, j] - partials[j][:, i]))))
    return worst


def cosymplectomorphism_residuals(h, grid_res=8):
    """Max pullback residuals of the standard structure under h, batched."""
    n = h.n
    d = h.dim
    B = np.zeros((d, d))
    for i in range(n):
        B[i, n + i] = 1.0
        B[n + i, i] = -1.0
    psi = np.zeros(d)
    psi[-1] = 1.0
    pts = torus_grid(d, grid_res)
    J = h.jac(pts)
    pull_om = np.einsum("nau,ab,nbv->nuv", J, B, J)
    pull_et = np.einsum("a,nau->nu", psi, J)
    return (float(np.max(np.abs(pull_om - B))),
            float(np.max(np.abs(pull_et - psi))))


def _solve_midpoint_base(h, targets, tol=TAU_FIX, max_iter=50):
    """For each midpoint t, the base point x with x + delta(x)/2 = t (mod 1)."""
    x = np.array(targets, dtype=float)
    for _ in range(max_iter):
        step = wrap_diff(targets, x + h.displacement(x) / 2.0)
        x = x + step
        if np.max(np.abs(step)) < tol:
            return x % 1.0
    raise NoConvergence("midpoint inversion did not converge")


def weinstein_oneform(h, grid_res=32, tol_pde=TAU_PDE, check_graph=True):
    """Closed 1-form representing h in the flat midpoint chart, plus the Reeb shift.

    At a midpoint t between x and h(x), the dq-components are minus the
    p-displacement, the dp-components the q-displacement, and the dz-component
    is identically zero; the constant z-displacement is returned separately.
    """
    n = h.n
    d = h.dim
    if h.c0_bound >= MIDPOINT_BOUND:
        raise TooFarFromIdentity(
            f"C0 bound {h.c0_bound:.3f} exceeds the midpoint threshold {MIDPOINT_BOUND}")
    pts = torus_grid(d, grid_res if d == 3 else 6)
    delta = h.displacement(pts)
    u = float(np.mean(delta[:, -1]))
    if np.max(np.abs(delta[:, -1] - u)) > tol_pde:
        raise NonConstantReebShift("the z-displacement is not constant")
    if check_graph:
        res_om, res_et = cosymplectomorphism_residuals(h, grid_res=8 if d == 3 else 4)
        if max(res_om, res_et) > max(tol_pde, 1e-5):
            raise NotCosymplectomorphism(
                f"graph residuals {res_om:.2e}, {res_et:.2e}")

    def components(T):
        T = np.atleast_2d(np.asarray(T, dtype=float))
        x = _solve_midpoint_base(h, T)
        dl = h.displacement(x)
        out = np.zeros_like(T)
        out[:, :n] = -dl[:, n:2 * n]
        out[:, n:2 * n] = dl[:, :n]
        return out

    periods = loop_periods(components, d, grid_res)
    form = ClosedOneForm(d, components, periods)
    if closedness_defect(components, d) > max(tol_pde, 1e-5):
        raise NotCosymplectomorphism("the midpoint form is not closed")
    return form, u


def weinstein_inverse(alpha, u, grid_res=16, tol=TAU_FIX, max_iter=50):
    """The torus map whose Weinstein form is (alpha, u).

    alpha must have zero dz-component (it pairs to zero with the Reeb field)
    and sup-norm below 1/8 so the displacement iteration contracts.
    """
    dim = alpha.dim
    n = (dim - 1) // 2
    pts = torus_grid(dim, grid_res if dim == 3 else 5)
    vals = alpha(pts)
    if np.max(np.abs(vals[:, -1])) > TAU_PDE:
        raise NoConvergence("alpha has a nonzero Reeb component")
    if np.max(np.linalg.norm(vals, axis=1)) >= INVERSE_BOUND:
        raise NoConvergence("alpha exceeds the contraction threshold 1/8")

    def chart_displacement(T):
        a = alpha(T)
        out = np.zeros_like(a)
        out[:, :n] = a[:, n:2 * n]
        out[:, n:2 * n] = -a[:, :n]
        out[:, -1] = u
        return out

    def displacement(P):
        P = np.atleast_2d(np.asarray(P, dtype=float))
        delta = np.zeros_like(P)
        for _ in range(max_iter):
            new = chart_displacement(P + delta / 2.0)
            if np.max(np.abs(new - delta)) < tol:
                return new
            delta = new
        raise NoConvergence("displacement iteration did not converge")

    return TorusMap(n, displacement)


def tabulate_oneform(form, res=24):
    """Sample a 1-form on a periodic lattice and return a fast interpolating copy.

    Multilinear periodic interpolation; exact for constant forms and accurate
    to O(res^-2) for smooth ones.  Used to decouple downstream fixed-point
    solves from the cost of the original components.
    """
    dim = form.dim
    table = form(torus_grid(dim, res)).reshape((res,) * dim + (dim,))

    def components(P):
        P = np.atleast_2d(np.asarray(P, dtype=float)) % 1.0
        scaled = P * res
        base = np.floor(scaled).astype(int)
        frac = scaled - base
        out = np.zeros((len(P), dim))
        for corner in range(2 ** dim):
            bits = [(corner >> a) & 1 for a in range(dim)]
            idx = tuple(((base[:, a] + bits[a]) % res) for a in range(dim))
            w = np.ones(len(P))
            for a in range(dim):
                w = w * (frac[:, a] if bits[a] else 1.0 - frac[:, a])
            out += w[:, None] * table[idx]
        return out

    return ClosedOneForm(dim, components, form.periods.copy())


@dataclass(frozen=True)
class Isotopy:
    times: np.ndarray
    maps: list                  # TorusMap per time node; maps[0] is the identity


def canonical_isotopy(h, K=32, grid_res=16, tab_res=24):
    """The path of maps with Weinstein form t * W(h), joining identity to h."""
    alpha, u = weinstein_oneform(h, grid_res=grid_res)
    if tab_res:
        alpha = tabulate_oneform(alpha, tab_res)
    times = np.linspace(0.0, 1.0, K + 1)
    maps = []
    for t in times:
        if t == 0.0:
            maps.append(identity_map(h.n))
        else:
            scaled = ClosedOneForm(alpha.dim,
                                   lambda P, s=t: s * alpha.components(P),
                                   t * alpha.periods)
            maps.append(weinstein_inverse(scaled, t * u, grid_res=grid_res))
    return Isotopy(times, maps)


def coflux(iso, res=64):
    """Time integral of the pulled-back musical image of the isotopy velocity.

    Returns the resulting closed 1-form (with its loop periods) and the
    scalar integral of eta applied to the velocity.
    """
    maps = iso.maps
    times = iso.times
    K = len(times) - 1
    dim = maps[0].dim
    n = maps[0].n
    M = standard_musical(n)
    dt = times[1] - times[0]

    def components(P):
        P = np.atleast_2d(np.asarray(P, dtype=float))
        total = np.zeros_like(P)
        for k in range(K + 1):
            w = 0.5 if k in (0, K) else 1.0
            km = max(k - 1, 0)
            kp = min(k + 1, K)
            vel = (maps[kp].unwrapped(P) - maps[km].unwrapped(P)) / ((kp - km) * dt)
            cov = vel @ M          # musical image of the velocity, pointwise
            J = maps[k].jac(P)
            total += w * np.einsum("na,nab->nb", cov, J)
        return total * dt

    def eta_velocity_scalar(P):
        P = np.atleast_2d(np.asarray(P, dtype=float))
        total = np.zeros(len(P))
        for k in range(K + 1):
            w = 0.5 if k in (0, K) else 1.0
            km = max(k - 1, 0)
            kp = min(k + 1, K)
            vel = (maps[kp].unwrapped(P) - maps[km].unwrapped(P)) / ((kp - km) * dt)
            total += w * vel[:, -1]
        return total * dt

    periods = loop_periods(components, dim, res)
    form = ClosedOneForm(dim, components, periods)
    sample = torus_grid(dim, 4 if dim == 3 else 3)
    scal = eta_velocity_scalar(sample)
    return form, float(np.mean(scal))


@dataclass(frozen=True)
class FluxReport:
    periods_weinstein: np.ndarray
    periods_flux: np.ndarray
    max_period_diff: float
    reeb_pairing_max: float
    can1_scalar: float
    reeb_shift: float

    def as_dict(self):
        return {
            "periods_weinstein": [float(x) for x in self.periods_weinstein],
            "periods_flux": [float(x) for x in self.periods_flux],
            "max_period_diff": self.max_period_diff,
            "reeb_pairing_max": self.reeb_pairing_max,
            "can1_scalar": self.can1_scalar,
            "reeb_shift": self.reeb_shift,
        }


def flux_vs_weinstein(h, K=32, grid_res=64):
    """Compare the Weinstein-form periods with the co-flux of the canonical isotopy."""
    alpha, u = weinstein_oneform(h, grid_res=grid_res)
    iso = canonical_isotopy(h, K=K, grid_res=min(grid_res, 16))
    flux_form, can1 = coflux(iso, res=grid_res)
    pw = loop_periods(alpha.components, alpha.dim, grid_res)
    pf = flux_form.periods
    xi_vals = alpha(torus_grid(alpha.dim, 8 if alpha.dim == 3 else 4))[:, -1]
    return FluxReport(pw, pf, float(np.max(np.abs(pw - pf))),
                      float(np.max(np.abs(xi_vals))), can1, u)


def zeros_of_weinstein_form(f, grid_res=24, tol_pde=TAU_PDE, max_zeros=64):
    """Zeros of the Weinstein form of f; these are exactly the fixed points of f.

    Coarse grid scan for local minima of the form's norm, then Gauss-Newton
    refinement.  Returns (points, identically_zero flag).
    """
    alpha, u = weinstein_oneform(f, grid_res=min(grid_res, 16))
    dim = alpha.dim
    pts = torus_grid(dim, grid_res if dim == 3 else 5)
    vals = alpha(pts)
    norms = np.linalg.norm(vals, axis=1)
    if np.max(norms) <= tol_pde and abs(u) <= tol_pde:
        return [np.zeros(dim)], True
    if abs(u) > tol_pde:
        return [], False          # a Reeb shift leaves no fixed points
    order = np.argsort(norms)[: 4 * max_zeros]
    X = pts[order].copy()
    h_fd = 1e-5
    for _ in range(40):
        V = alpha(X)
        if np.max(np.abs(V)) < tol_pde * 1e-2:
            break
        J = np.empty((len(X), dim, dim))
        for a in range(dim):
            e = np.zeros(dim)
            e[a] = h_fd
            J[:, :, a] = (alpha(X + e) - alpha(X - e)) / (2 * h_fd)
        step = np.stack([np.linalg.lstsq(J[i], -V[i], rcond=None)[0]
                         for i in range(len(X))])
        lens = np.linalg.norm(step, axis=1, keepdims=True)
        step = np.where(lens > 0.25, step * (0.25 / np.maximum(lens, 1e-30)), step)
        X = (X + step) % 1.0
    V = alpha(X)
    converged = np.max(np.abs(V), axis=1) < tol_pde * 1e-2
    zeros = []
    for x in X[converged]:
        if all(torus_point_distance(x[None], z[None]) > 1e-3 for z in zeros):
            zeros.append(x)
        if len(zeros) >= max_zeros:
            break
    return zeros, False


def hamiltonian_flow_map(n, gamma_components, steps=64):
    """Time-1 flow of the musical inverse of a closed 1-form gamma.

    gamma_components is a batched covector field with zero dz-component; the
    generated vector field is X = musical_inverse(gamma), integrated by RK4.
    The result is a cosymplectomorphism of the standard torus.
    """
    d = 2 * n + 1
    Minv = np.linalg.inv(standard_musical(n))

    def X(P):
        # row-vector form of X = M^{-T} gamma
        return gamma_components(P) @ Minv

    def displacement(P):
        P = np.atleast_2d(np.asarray(P, dtype=float))
        Y = P.copy()
        dt = 1.0 / steps
        for _ in range(steps):
            k1 = X(Y)
            k2 = X(Y + dt / 2 * k1)
            k3 = X(Y + dt / 2 * k2)
            k4 = X(Y + dt * k3)
            Y = Y + dt / 6 * (k1 + 2 * k2 + 2 * k3 + k4)
        return Y - P

    return TorusMap(n, displacement)


# --- JSON interchange: trigonometric-polynomial torus maps ------------------

def trigpoly_field(dim, tables):
    """Batched map from per-coordinate tables of frequency keys to (cos, sin) pairs.

    A key "k1,...,kd" contributes c*cos(2 pi k.x) + s*sin(2 pi k.x).
    """
    parsed = []
    for table in tables:
        terms = []
        for key, cs in table.items():
            freq = np.array([int(s) for s in key.split(",")]) if key else np.zeros(dim, int)
            if len(freq) != dim:
                raise DimensionMismatch(f"frequency key {key!r} has wrong length")
            terms.append((freq, float(cs[0]), float(cs[1])))
        parsed.append(terms)

    def field(P):
        P = np.atleast_2d(np.asarray(P, dtype=float))
        out = np.zeros((len(P), dim))
        for i, terms in enumerate(parsed):
            for freq, c, s in terms:
                phase = 2 * np.pi * (P @ freq)
                out[:, i] += c * np.cos(phase) + s * np.sin(phase)
        return out

    return field


def torusmap_from_json(obj):
    n = int(obj["n"])
    dim = 2 * n + 1
    disp = trigpoly_field(dim, obj["displacement"])
    return TorusMap(n, disp)


def oneform_from_json(obj):
    dim = int(obj["dim"])
    comps = trigpoly_field(dim, obj["components"])
    return ClosedOneForm(dim, comps, loop_periods(comps, dim))
