"""Linear algebra of cosymplectic vector spaces.

A cosymplectic structure on an odd-dimensional space V is a pair (b, psi) of
an antisymmetric bilinear form and a nonzero covector whose musical matrix
M = B + psi^T psi is invertible.  This module builds and validates such
structures, computes the musical isomorphism and the Reeb vector, and
classifies subspaces (isotropic / coisotropic / cosymplectic / Lagrangian-like).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import matrices as mat
from .errors import (
    Degenerate,
    DimensionMismatch,
    EvenDimension,
    NotAntisymmetric,
    TrivialPsi,
)
from .matrices import EXACT, FLOAT


@dataclass(frozen=True)
class CosymplecticSpace:
    dim: int
    b: np.ndarray            # antisymmetric (dim x dim)
    psi: np.ndarray          # covector, length dim
    musical_matrix: np.ndarray   # M = B + psi^T psi
    reeb: np.ndarray         # xi with psi(xi) = 1, B xi = 0
    mode: str
    tol: float = mat.DEFAULT_TOL

    @property
    def n(self):
        return (self.dim - 1) // 2

    def kernel_psi(self):
        """Canonical basis of ker psi as a Subspace."""
        return Subspace.from_columns(
            mat.nullspace(self.psi.reshape(1, -1), self.mode, self.tol),
            self.dim, self.mode, self.tol)

    def reeb_line(self):
        return Subspace.from_columns(
            self.reeb.reshape(-1, 1), self.dim, self.mode, self.tol)


@dataclass(frozen=True)
class Subspace:
    ambient_dim: int
    basis: np.ndarray        # canonical reduced column-echelon, ambient_dim x dim
    mode: str
    tol: float = mat.DEFAULT_TOL

    @classmethod
    def from_columns(cls, cols, ambient_dim, mode, tol=mat.DEFAULT_TOL):
        cols = mat.as_matrix(cols, mode) if not isinstance(cols, np.ndarray) else cols
        if cols.size == 0:
            basis = mat.zeros((ambient_dim, 0), mode)
        else:
            if cols.shape[0] != ambient_dim:
                raise DimensionMismatch(
                    f"basis has {cols.shape[0]} rows, ambient dim is {ambient_dim}")
            basis = mat.column_echelon(cols, mode, tol)
        return cls(ambient_dim, basis, mode, tol)

    @classmethod
    def span(cls, vectors, ambient_dim, mode, tol=mat.DEFAULT_TOL):
        if not vectors:
            return cls(ambient_dim, mat.zeros((ambient_dim, 0), mode), mode, tol)
        cols = mat.zeros((ambient_dim, len(vectors)), mode)
        for j, v in enumerate(vectors):
            cols[:, j] = mat.as_vector(v, mode)
        return cls.from_columns(cols, ambient_dim, mode, tol)

    @property
    def dim(self):
        return self.basis.shape[1]

    def __eq__(self, other):
        if not isinstance(other, Subspace):
            return NotImplemented
        return (self.ambient_dim == other.ambient_dim
                and self.dim == other.dim
                and mat.matrices_close(self.basis, other.basis, self.mode, self.tol))

    def __hash__(self):
        return hash((self.ambient_dim, self.dim))

    def contains(self, vector):
        v = mat.as_vector(vector, self.mode)
        if v.shape[0] != self.ambient_dim:
            raise DimensionMismatch("vector length mismatch")
        if self.dim == 0:
            thresh = None if self.mode == EXACT else self.tol
            return all(mat._is_zero(x, thresh) for x in v)
        aug = mat.zeros((self.ambient_dim, self.dim + 1), self.mode)
        aug[:, : self.dim] = self.basis
        aug[:, self.dim] = v
        return mat.rank(aug, self.mode, self.tol) == self.dim

    def contains_subspace(self, other):
        return all(self.contains(other.basis[:, j]) for j in range(other.dim))

    def sum(self, other):
        self._check(other)
        cols = mat.zeros((self.ambient_dim, self.dim + other.dim), self.mode)
        cols[:, : self.dim] = self.basis
        cols[:, self.dim:] = other.basis
        return Subspace.from_columns(cols, self.ambient_dim, self.mode, self.tol)

    def intersect(self, other):
        """Kernel of the stacked system [U | -W] gives coefficients of common vectors."""
        self._check(other)
        if self.dim == 0 or other.dim == 0:
            return Subspace.from_columns(
                mat.zeros((self.ambient_dim, 0), self.mode),
                self.ambient_dim, self.mode, self.tol)
        stacked = mat.zeros((self.ambient_dim, self.dim + other.dim), self.mode)
        stacked[:, : self.dim] = self.basis
        stacked[:, self.dim:] = -other.basis
        ker = mat.nullspace(stacked, self.mode, self.tol)
        vecs = self.basis @ ker[: self.dim]
        return Subspace.from_columns(vecs, self.ambient_dim, self.mode, self.tol)

    def _check(self, other):
        if self.ambient_dim != other.ambient_dim:
            raise DimensionMismatch("ambient dimensions differ")


@dataclass(frozen=True)
class Classification:
    isotropic: bool
    coisotropic: bool
    cosymplectic_sub: bool
    lagrangian_like: bool
    contains_reeb: bool

    def as_dict(self):
        return {
            "isotropic": self.isotropic,
            "coisotropic": self.coisotropic,
            "cosymplectic_sub": self.cosymplectic_sub,
            "lagrangian_like": self.lagrangian_like,
            "contains_reeb": self.contains_reeb,
        }


def build_space(B, psi, mode=EXACT, tol=mat.DEFAULT_TOL):
    B = mat.as_matrix(B, mode)
    psi = mat.as_vector(psi, mode)
    n_rows, n_cols = B.shape
    if n_rows != n_cols:
        raise DimensionMismatch("b must be square")
    if psi.shape[0] != n_rows:
        raise DimensionMismatch("psi length must match b")
    if n_rows % 2 == 0:
        raise EvenDimension(f"dimension {n_rows} is even")
    if not mat.matrices_close(B.T, -B, mode, tol):
        raise NotAntisymmetric("b is not antisymmetric")
    thresh = None if mode == EXACT else tol * max(1.0, float(np.max(np.abs(mat.to_float(psi)))))
    if all(mat._is_zero(x, thresh) for x in psi):
        raise TrivialPsi("psi is the zero covector")
    M = B + np.outer(psi, psi)
    try:
        reeb = mat.solve(M, psi.copy(), mode, tol)
    except Degenerate:
        raise Degenerate("b + psi^T psi is singular: not a cosymplectic structure")
    # structural sanity: these follow from invertibility, re-checked after the solve
    pairing = psi @ reeb
    b_reeb = B @ reeb
    if mode == EXACT:
        ok = pairing == 1 and all(x == 0 for x in b_reeb)
    else:
        scale = max(1.0, float(np.max(np.abs(mat.to_float(B)))))
        ok = abs(pairing - 1.0) <= tol and np.max(np.abs(mat.to_float(b_reeb))) <= tol * scale
    if not ok:
        raise Degenerate("Reeb verification failed after solve")
    return CosymplecticSpace(n_rows, B, psi, M, reeb, mode, tol)


def musical(space, v):
    """The covector v^T (B + psi^T psi)."""
    v = mat.as_vector(v, space.mode)
    if v.shape[0] != space.dim:
        raise DimensionMismatch("vector length mismatch")
    return v @ space.musical_matrix


def musical_inverse(space, alpha):
    """The unique v with musical(v) = alpha."""
    alpha = mat.as_vector(alpha, space.mode)
    if alpha.shape[0] != space.dim:
        raise DimensionMismatch("covector length mismatch")
    return mat.solve(space.musical_matrix.T.copy(), alpha, space.mode, space.tol)


def pairing(space, x, y):
    """The scalar b(x, y) + psi(x) psi(y)."""
    return musical(space, x) @ mat.as_vector(y, space.mode)


def orthogonal(space, F):
    """All x whose musical covector vanishes on F."""
    if F.ambient_dim != space.dim:
        raise DimensionMismatch("subspace ambient dim mismatch")
    if F.dim == 0:
        full = mat.identity(space.dim, space.mode)
        return Subspace.from_columns(full, space.dim, space.mode, space.tol)
    constraints = (space.musical_matrix @ F.basis).T.copy()
    ker = mat.nullspace(constraints, space.mode, space.tol)
    return Subspace.from_columns(ker, space.dim, space.mode, space.tol)


def orthogonal_bruteforce(space, F):
    """Independent oracle: assemble the constraint rows one basis vector at a time."""
    rows = []
    for k in range(F.dim):
        g = F.basis[:, k]
        # row of the condition musical(x)(g) = 0 expressed in x-coordinates
        rows.append([pairing(space, e, g) for e in np.eye(space.dim, dtype=int)])
    if not rows:
        rows = [[0] * space.dim]
    A = mat.as_matrix(rows, space.mode)
    return Subspace.from_columns(
        mat.nullspace(A, space.mode, space.tol), space.dim, space.mode, space.tol)


def gram(space, F):
    return F.basis.T @ space.musical_matrix @ F.basis


def classify(space, F):
    if F.ambient_dim != space.dim:
        raise DimensionMismatch("subspace ambient dim mismatch")
    G = gram(space, F)
    thresh = None if space.mode == EXACT else mat._threshold(space.musical_matrix, space.mode, space.tol)
    isotropic = all(mat._is_zero(x, thresh) for x in G.flat)
    ortho = orthogonal(space, F)
    coisotropic = F.contains_subspace(ortho)
    cosymplectic_sub = F.dim > 0 and mat.rank(G, space.mode, space.tol) == F.dim
    contains_reeb = F.contains(space.reeb)
    lagrangian_like = False
    if isotropic and not contains_reeb:
        xi_plus_F = F.sum(space.reeb_line())
        lagrangian_like = ortho == xi_plus_F
    return Classification(isotropic, coisotropic, cosymplectic_sub,
                          lagrangian_like, contains_reeb)


def standard_space(n, mode=EXACT, tol=mat.DEFAULT_TOL):
    """R^{2n+1} with b0(e_i, f_j) = delta_ij and psi0 dual to the last basis vector."""
    if n < 1:
        raise DimensionMismatch("n must be >= 1")
    m = 2 * n + 1
    B = np.zeros((m, m), dtype=int)
    for i in range(n):
        B[i, n + i] = 1
        B[n + i, i] = -1
    psi = np.zeros(m, dtype=int)
    psi[m - 1] = 1
    return build_space(B, psi, mode, tol)


def weil_space(n, l, mode=EXACT, tol=mat.DEFAULT_TOL):
    """Chart model of the Weil-bundle structure: dimension (2n+1)l, coordinates
    ((x_{i,j}), (y_{i,j}), z_1..z_l) with omega = sum dx_{i,j}^dy_{i,j} and
    eta = sum dz_j.

    For l > 1 the musical matrix B + psi^T psi is singular (rank 2nl + 1), so
    the full build-time validation cannot apply; the canonical Reeb vector
    (1/l) sum d/dz_j is installed directly and the defining relations
    psi(xi) = 1, B xi = 0 are verified instead.  musical_inverse is
    unavailable on such spaces.
    """
    if n < 1:
        raise DimensionMismatch("n must be >= 1")
    if l < 1 or l % 2 == 0:
        raise EvenDimension(f"Weil fibre dimension l={l} must be odd")
    m = (2 * n + 1) * l
    nl = n * l
    B = np.zeros((m, m), dtype=int)
    for k in range(nl):
        B[k, nl + k] = 1
        B[nl + k, k] = -1
    psi = np.zeros(m, dtype=int)
    psi[2 * nl:] = 1
    if l == 1:
        return build_space(B, psi, mode, tol)
    Bm = mat.as_matrix(B, mode)
    psim = mat.as_vector(psi, mode)
    M = Bm + np.outer(psim, psim)
    reeb = mat.zeros((m,), mode)
    inv_l = Fraction(1, l) if mode == EXACT else 1.0 / l
    for j in range(l):
        reeb[2 * nl + j] = inv_l
    assert psim @ reeb == 1 if mode == EXACT else abs(psim @ reeb - 1.0) <= tol
    return CosymplecticSpace(m, Bm, psim, M, reeb, mode, tol)


# --- JSON interchange -------------------------------------------------------

def _scalar_to_json(x, mode):
    if mode == EXACT:
        f = Fraction(x)
        return str(f.numerator) if f.denominator == 1 else f"{f.numerator}/{f.denominator}"
    return float(x)


def space_to_json(space):
    return {
        "dim": space.dim,
        "mode": space.mode,
        "b": [[_scalar_to_json(x, space.mode) for x in row] for row in space.b],
        "psi": [_scalar_to_json(x, space.mode) for x in space.psi],
    }


def space_from_json(obj, tol=mat.DEFAULT_TOL):
    mode = obj.get("mode", EXACT)
    if mode not in (EXACT, FLOAT):
        raise DimensionMismatch(f"unknown mode {mode!r}")
    return build_space(obj["b"], obj["psi"], mode, tol)


def subspace_to_json(sub):
    return {"basis": [[_scalar_to_json(x, sub.mode) for x in sub.basis[:, j]]
                      for j in range(sub.dim)]}


def subspace_from_json(obj, ambient_dim, mode, tol=mat.DEFAULT_TOL):
    cols = obj["basis"]
    if not cols:
        return Subspace.from_columns(mat.zeros((ambient_dim, 0), mode),
                                     ambient_dim, mode, tol)
    cols = mat.as_matrix(cols, mode).T.copy()
    return Subspace.from_columns(cols, ambient_dim, mode, tol)
