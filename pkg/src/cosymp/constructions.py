"""Constructive algorithms over cosymplectic vector spaces.

Lagrangian-like extension and transversals, Darboux bases, the canonical
isomorphism between two structures sharing a Lagrangian-like subspace, and
compatible co-complex structures obtained from a metric by polar
decomposition.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from . import matrices as mat
from .errors import (
    Degenerate,
    DimensionMismatch,
    NotComplement,
    NotIsotropic,
    NotLagrangian,
    NotLagrangianForBoth,
    NotPositive,
    NotSPD,
)
from .linear import CosymplecticSpace, Subspace, classify, musical, orthogonal
from .matrices import EXACT, FLOAT

TAU_POLAR = 1e-9


@dataclass(frozen=True)
class DarbouxBasis:
    tau: np.ndarray              # dim x n, columns tau_1..tau_n
    f: np.ndarray                # dim x n, columns f_1..f_n
    xi: np.ndarray
    change_of_basis: np.ndarray  # columns (tau, f, xi)


@dataclass(frozen=True)
class CoComplexStructure:
    J: np.ndarray
    space: CosymplecticSpace
    g: np.ndarray                # induced bilinear form matrix


def _reeb_corrected(space, v):
    """Project a vector into ker psi along the Reeb direction."""
    return v - (space.psi @ v) * space.reeb


def extend_to_lagrangian(space, F):
    """Grow an isotropic subspace to a Lagrangian-like one inside its orthogonal.

    Candidates are scanned in echelon order over the current orthogonal's
    basis; the first vector leaving F + <xi> wins.  The Reeb component of a
    candidate is always projected away first, which keeps the growing space
    isotropic.
    """
    if not classify(space, F).isotropic:
        raise NotIsotropic("extend_to_lagrangian needs an isotropic input")
    L = F
    xi_line = space.reeb_line()
    while L.dim < space.n:
        ortho = orthogonal(space, L)
        blocked = L.sum(xi_line)
        progressed = False
        for j in range(ortho.dim):
            v = _reeb_corrected(space, ortho.basis[:, j].copy())
            if blocked.contains(v):
                continue
            L = L.sum(Subspace.span([v], space.dim, space.mode, space.tol))
            progressed = True
            break
        if not progressed:
            raise Degenerate("no admissible extension vector found")
    assert classify(space, L).lagrangian_like
    return L


def _candidate_ladder(basis_cols, max_size=None):
    """Deterministic candidates: echelon vectors, then sums of 2, 3, ..."""
    k = basis_cols.shape[1]
    if max_size is None:
        max_size = k
    for size in range(1, max_size + 1):
        for combo in itertools.combinations(range(k), size):
            yield sum(basis_cols[:, j] for j in combo)


def transverse_lagrangian(space, lags):
    """A Lagrangian-like subspace meeting each given one only in {0}."""
    for Lj in lags:
        if not classify(space, Lj).lagrangian_like:
            raise NotLagrangian("inputs must be Lagrangian-like")
    xi_line = space.reeb_line()
    L = Subspace.span([], space.dim, space.mode, space.tol)
    while L.dim < space.n:
        ortho = orthogonal(space, L)
        blocked = L.sum(xi_line)
        # each input contributes a forbidden subspace in the quotient by L + <xi>
        forbidden = [Lj.intersect(ortho).sum(blocked) for Lj in lags]
        chosen = None
        for cand in _candidate_ladder(ortho.basis):
            v = _reeb_corrected(space, cand)
            if blocked.contains(v):
                continue
            if any(bad.contains(v) for bad in forbidden):
                continue
            chosen = v
            break
        if chosen is None:
            raise Degenerate("transversal search exhausted its candidate ladder")
        L = L.sum(Subspace.span([chosen], space.dim, space.mode, space.tol))
    assert classify(space, L).lagrangian_like
    assert all(L.intersect(Lj).dim == 0 for Lj in lags)
    return L


def darboux_basis(space):
    """A basis (tau_1..tau_n, f_1..f_n, xi) realizing the standard structure."""
    empty = Subspace.span([], space.dim, space.mode, space.tol)
    L = extend_to_lagrangian(space, empty)
    M = transverse_lagrangian(space, [L])
    n = space.n
    tau = L.basis.copy()
    # duality: b(f_j, tau_i) = delta_ij with f_j in M
    P = mat.zeros((n, n), space.mode)
    for i in range(n):
        for k in range(n):
            P[i, k] = musical(space, M.basis[:, k]) @ tau[:, i]
    C = mat.inv(P, space.mode, space.tol)
    f = M.basis @ C
    # column order (f, tau, xi) realizes the standard structure constants
    # literally, since b(f_i, tau_j) = delta_ij plays the role of b0(e_i, f_j)
    cob = mat.zeros((space.dim, space.dim), space.mode)
    cob[:, :n] = f
    cob[:, n:2 * n] = tau
    cob[:, 2 * n] = space.reeb
    return DarbouxBasis(tau, f, space.reeb.copy(), cob)


def darboux_relations_hold(space, basis):
    """Check every structure constant of a Darboux basis (exact in exact mode)."""
    from .linear import standard_space
    std = standard_space(space.n, space.mode, space.tol)
    C = basis.change_of_basis
    pulled_b = C.T @ space.b @ C
    pulled_psi = space.psi @ C
    return (mat.matrices_close(pulled_b, std.b, space.mode, space.tol)
            and mat.matrices_close(pulled_psi.reshape(1, -1),
                                   std.psi.reshape(1, -1), space.mode, space.tol))


def darboux_to_json(space, basis):
    from .linear import _scalar_to_json
    m = space.mode
    return {
        "tau": [[_scalar_to_json(x, m) for x in basis.tau[:, j]]
                for j in range(basis.tau.shape[1])],
        "f": [[_scalar_to_json(x, m) for x in basis.f[:, j]]
              for j in range(basis.f.shape[1])],
        "xi": [_scalar_to_json(x, m) for x in basis.xi],
        "C": [[_scalar_to_json(x, m) for x in row] for row in basis.change_of_basis],
    }


def _lagrangian_complement_in_kernel(space, U, W):
    """A Lagrangian-like complement of U in ker psi, built canonically from W.

    W's basis is projected into ker psi along the Reeb direction, a complement
    of U in ker psi is extracted in echelon order, and the symplectic graph
    correction (subtracting half the pairing against U) makes it isotropic.
    """
    kerpsi = space.kernel_psi()
    proj_cols = mat.zeros((space.dim, W.dim), space.mode)
    for j in range(W.dim):
        proj_cols[:, j] = _reeb_corrected(space, W.basis[:, j].copy())
    Wbar = Subspace.from_columns(proj_cols, space.dim, space.mode, space.tol)
    n = space.n
    picked = U
    chosen = []
    for j in range(Wbar.dim):
        if len(chosen) == n:
            break
        v = Wbar.basis[:, j]
        trial = picked.sum(Subspace.span([v], space.dim, space.mode, space.tol))
        if trial.dim > picked.dim:
            picked = trial
            chosen.append(v.copy())
    if len(chosen) < n:
        # W projected into ker psi may fail to span a full complement; finish
        # the extraction from ker psi's own echelon basis
        for j in range(kerpsi.dim):
            if len(chosen) == n:
                break
            v = kerpsi.basis[:, j]
            trial = picked.sum(Subspace.span([v], space.dim, space.mode, space.tol))
            if trial.dim > picked.dim:
                picked = trial
                chosen.append(v.copy())
    O_raw = mat.zeros((space.dim, n), space.mode)
    for j, v in enumerate(chosen):
        O_raw[:, j] = v
    # graph correction: o_j -> o_j - u(o_j), with b(u(o_j), o_i) = b(o_j, o_i)/2
    A = mat.zeros((n, n), space.mode)   # A[i,k] = b(u_k, o_i)
    S = mat.zeros((n, n), space.mode)   # S[i,j] = b(o_j, o_i)/2
    half = mat.as_vector(["1/2"], EXACT)[0] if space.mode == EXACT else 0.5
    for i in range(n):
        for k in range(n):
            A[i, k] = U.basis[:, k] @ space.b @ O_raw[:, i]
            S[i, k] = (O_raw[:, k] @ space.b @ O_raw[:, i]) * half
    X = mat.solve_matrix(A, S, space.mode, space.tol)
    O_cols = O_raw - U.basis @ X
    O = Subspace.from_columns(O_cols, space.dim, space.mode, space.tol)
    if not classify(space, O).lagrangian_like:
        raise NotComplement("graph correction did not produce a Lagrangian-like complement")
    return O_cols


def canonical_isomorphism(dim, s1, s2, U, W):
    """Linear map fixing U that intertwines two structures sharing U."""
    if s1.dim != dim or s2.dim != dim or U.ambient_dim != dim or W.ambient_dim != dim:
        raise DimensionMismatch("all inputs must share the ambient dimension")
    if not (classify(s1, U).lagrangian_like and classify(s2, U).lagrangian_like):
        raise NotLagrangianForBoth("U must be Lagrangian-like for both structures")
    if U.intersect(W).dim != 0 or U.sum(W).dim != dim:
        raise NotComplement("W must be a complement of U")
    n = (dim - 1) // 2
    O1 = _lagrangian_complement_in_kernel(s1, U, W)
    O2 = _lagrangian_complement_in_kernel(s2, U, W)
    # Btilde: O1 -> O2 with b1(o1, u) = b2(Btilde o1, u) for all u in U
    A2 = mat.zeros((n, n), s1.mode)   # A2[k,m] = b2(o2_m, u_k)
    R = mat.zeros((n, n), s1.mode)    # R[k,j]  = b1(o1_j, u_k)
    for k in range(n):
        for m in range(n):
            A2[k, m] = O2[:, m] @ s2.b @ U.basis[:, k]
        for j in range(n):
            R[k, j] = O1[:, j] @ s1.b @ U.basis[:, k]
    Y = mat.solve_matrix(A2, R, s1.mode, s1.tol)
    images_O1 = O2 @ Y
    domain = mat.zeros((dim, dim), s1.mode)
    image = mat.zeros((dim, dim), s1.mode)
    domain[:, :n] = U.basis
    image[:, :n] = U.basis
    domain[:, n:2 * n] = O1
    image[:, n:2 * n] = images_O1
    domain[:, 2 * n] = s1.reeb
    image[:, 2 * n] = s2.reeb
    L = image @ mat.inv(domain, s1.mode, s1.tol)
    return L


def is_cocomplex(space, J, tol=TAU_POLAR):
    """True when J acts as a complex structure on ker psi and fixes the Reeb line."""
    J = np.asarray(J, dtype=float)
    if J.shape != (space.dim, space.dim):
        raise DimensionMismatch("J must be dim x dim")
    psi = mat.to_float(space.psi)
    xi = mat.to_float(space.reeb)
    K = mat.to_float(space.kernel_psi().basis)
    if np.max(np.abs(psi @ J @ K)) > tol:
        return False                      # J must preserve ker psi
    if np.max(np.abs(J @ xi - xi)) > tol:
        return False                      # J must fix the Reeb vector
    P1 = np.eye(space.dim) - np.outer(xi, psi)
    if np.max(np.abs(P1 @ J @ J @ K + K)) > tol:
        return False                      # square is -Id on ker psi
    if abs(psi @ J @ J @ xi - 1.0) > tol:
        return False                      # square is +Id on the Reeb line
    return True


def induced_metric(space, J):
    Mf = mat.to_float(space.musical_matrix)
    return Mf @ np.asarray(J, dtype=float)


def is_compatible(space, J, tol=TAU_POLAR):
    if not is_cocomplex(space, J, tol):
        return False
    G = induced_metric(space, J)
    if np.max(np.abs(G - G.T)) > max(tol, 1e-9) * max(1.0, np.max(np.abs(G))):
        return False
    return bool(np.min(np.linalg.eigvalsh(0.5 * (G + G.T))) > tol)


def cocomplex_from_metric(space, R, tol=TAU_POLAR):
    """Compatible co-complex structure from an inner product, via polar
    decomposition on ker psi.

    The kernel of psi is equipped with a basis orthonormal for R; in that
    basis the transfer matrix between the restricted structure form and R is
    antisymmetric, so its polar unitary factor is the sought complex
    structure.  The Reeb vector is fixed directly.
    """
    R = np.asarray(R, dtype=float)
    if R.shape != (space.dim, space.dim):
        raise DimensionMismatch("metric must be dim x dim")
    if np.max(np.abs(R - R.T)) > 1e-12 * max(1.0, np.max(np.abs(R))):
        raise NotSPD("metric is not symmetric")
    if np.min(np.linalg.eigvalsh(R)) <= tol:
        raise NotSPD("metric is not positive definite")
    xi = mat.to_float(space.reeb)
    if xi @ R @ xi <= 0:
        raise NotPositive("metric is not positive on the Reeb vector")
    Mf = mat.to_float(space.musical_matrix)
    K = mat.to_float(space.kernel_psi().basis)
    # R-orthonormalize the kernel basis
    G = K.T @ R @ K
    Lchol = np.linalg.cholesky(G)
    Kp = K @ np.linalg.inv(Lchol).T
    Bk = Kp.T @ Mf @ Kp                     # structure form on ker psi
    A = np.linalg.solve(Bk, np.eye(Bk.shape[0]))   # b(u, A v) = R(u, v) = <u, v>
    S = A.T @ A
    w, V = np.linalg.eigh(S)
    w = np.maximum(w, tol)
    S_inv_sqrt = (V * (1.0 / np.sqrt(w))) @ V.T
    Jk = A @ S_inv_sqrt
    # assemble on V = ker psi + <xi>
    frame = np.column_stack([Kp, xi])
    images = np.column_stack([Kp @ Jk, xi])
    J = images @ np.linalg.inv(frame)
    return CoComplexStructure(J, space, induced_metric(space, J))


def grassmannian_dim(n):
    """Dimension n(n+1)/2 of the space of Lagrangian-like subspaces."""
    if n < 1:
        raise DimensionMismatch("n must be >= 1")
    return n * (n + 1) // 2
