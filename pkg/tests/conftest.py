"""Shared generators for randomized property tests.

All random structures are integer-entry and exact-mode so that rank decisions
and identity checks are tolerance-free.
"""

import numpy as np
import pytest
from fractions import Fraction

from cosymp import linear as lin
from cosymp import matrices as mat


def random_space(rng, dim, entry_bound=9):
    """Random exact cosymplectic space with integer entries.

    Draws antisymmetric integer B and a nonzero integer covector psi,
    retrying until the musical matrix is invertible.
    """
    while True:
        raw = rng.integers(-entry_bound, entry_bound + 1, size=(dim, dim))
        B = np.triu(raw, 1)
        B = B - B.T
        psi = rng.integers(-entry_bound, entry_bound + 1, size=dim)
        if not np.any(psi):
            continue
        try:
            return lin.build_space(B.tolist(), psi.tolist(), mode=mat.EXACT)
        except Exception:
            continue


def random_subspace(rng, space, max_dim=None):
    """Random subspace spanned by integer vectors (possibly dependent)."""
    d = space.dim
    k = int(rng.integers(0, (max_dim or d) + 1))
    if k == 0:
        return lin.Subspace.span([], d, space.mode)
    cols = rng.integers(-4, 5, size=(d, k))
    return lin.Subspace.from_columns(
        mat.as_matrix(cols.tolist(), space.mode), d, space.mode, space.tol)


def random_split_subspace(rng, space):
    """Random subspace of the form F0 (+ span xi) with F0 inside ker psi.

    These are the subspaces for which the double-orthogonal identity is an
    equality; isotropic subspaces are automatically of this form.
    """
    ker = space.kernel_psi()
    k = int(rng.integers(0, ker.dim + 1))
    cols = []
    if k:
        raw = ker.basis @ mat.as_matrix(
            rng.integers(-3, 4, size=(ker.dim, k)).tolist(), space.mode)
        cols.append(raw)
    if rng.integers(0, 2):
        cols.append(space.reeb.reshape(-1, 1))
    if not cols:
        return lin.Subspace.span([], space.dim, space.mode)
    stacked = np.concatenate(cols, axis=1)
    return lin.Subspace.from_columns(stacked, space.dim, space.mode, space.tol)


def random_nonzero_kernel_vector(rng, space):
    """Random integer vector in ker psi (isotropic line generator)."""
    ker = space.kernel_psi()
    while True:
        coeffs = rng.integers(-3, 4, size=ker.dim)
        v = ker.basis @ mat.as_vector(coeffs.tolist(), space.mode)
        if any(x != 0 for x in v):
            return v


def random_invertible(rng, dim, mode, entry_bound=3):
    """Random invertible integer matrix (exact determinant test)."""
    while True:
        A = mat.as_matrix(
            rng.integers(-entry_bound, entry_bound + 1, size=(dim, dim)).tolist(),
            mode)
        if mat.rank(A, mode) == dim:
            return A


def pullback_space(space, Q):
    """The space whose structure is the pullback of `space` along Q."""
    B2 = Q.T @ space.b @ Q
    psi2 = space.psi @ Q
    return lin.build_space(B2, psi2, mode=space.mode, tol=space.tol)


def space_pair_sharing_lagrangian(rng, dim=5):
    """(s1, s2, U, W): two exact spaces for which U is Lagrangian-like, and a
    random complement W of U.

    s2 is the pullback of s1 along an invertible integer map preserving U, so
    the shared-Lagrangian hypothesis holds by construction.
    """
    from cosymp import constructions as con
    n = (dim - 1) // 2
    s1 = random_space(rng, dim)
    v = random_nonzero_kernel_vector(rng, s1)
    F = lin.Subspace.from_columns(v.reshape(-1, 1), dim, s1.mode, s1.tol)
    U = con.extend_to_lagrangian(s1, F)

    # invertible Q with Q(U) = U: conjugate a block-triangular map through a
    # basis extending U
    P = mat.zeros((dim, dim), s1.mode)
    P[:, :n] = U.basis
    col = n
    for j in range(dim):
        if col == dim:
            break
        trial = P.copy()
        trial[j, col] = Fraction(1) if s1.mode == mat.EXACT else 1.0
        if mat.rank(trial[:, : col + 1], s1.mode) == col + 1:
            P = trial
            col += 1
    block = mat.zeros((dim, dim), s1.mode)
    block[:n, :n] = random_invertible(rng, n, s1.mode)
    block[n:, n:] = random_invertible(rng, dim - n, s1.mode)
    off = mat.as_matrix(rng.integers(-2, 3, size=(n, dim - n)).tolist(), s1.mode)
    block[:n, n:] = off
    Q = P @ block @ mat.inv(P, s1.mode)
    s2 = pullback_space(s1, Q)

    while True:
        W = random_subspace(rng, s1, max_dim=dim - n)
        if W.dim == dim - n and U.intersect(W).dim == 0 and U.sum(W).dim == dim:
            break
    return s1, s2, U, W


@pytest.fixture
def rng():
    return np.random.default_rng(20260823)
