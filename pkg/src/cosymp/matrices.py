"""Mode-aware dense linear algebra.

Exact mode stores ``fractions.Fraction`` entries in object ndarrays and makes
rank decisions by literal comparison with zero; float mode stores float64 and
uses a pivot threshold relative to the matrix max-norm.  Both modes share the
same elimination code so canonical forms agree on integer inputs.
"""

from __future__ import annotations

from fractions import Fraction

import numpy as np

from .errors import Degenerate, DimensionMismatch

EXACT = "exact"
FLOAT = "float"

DEFAULT_TOL = 1e-9


def as_matrix(data, mode):
    """Coerce nested sequences (or an ndarray) into a 2-d matrix of the mode's scalar type."""
    arr = np.asarray(data, dtype=object)
    if arr.ndim == 1:
        arr = arr.reshape(1, -1)
    if mode == EXACT:
        out = np.empty(arr.shape, dtype=object)
        for idx in np.ndindex(arr.shape):
            out[idx] = _to_fraction(arr[idx])
        return out
    return np.asarray(arr, dtype=float)


def as_vector(data, mode):
    arr = np.asarray(data, dtype=object).reshape(-1)
    if mode == EXACT:
        out = np.empty(arr.shape, dtype=object)
        for i, x in enumerate(arr):
            out[i] = _to_fraction(x)
        return out
    return np.asarray(arr, dtype=float)


def _to_fraction(x):
    if isinstance(x, Fraction):
        return x
    if isinstance(x, str):
        return Fraction(x)
    if isinstance(x, (int, np.integer)):
        return Fraction(int(x))
    if isinstance(x, float):
        return Fraction(x).limit_denominator(10**12)
    return Fraction(x)


def zeros(shape, mode):
    if mode == EXACT:
        out = np.empty(shape, dtype=object)
        out[...] = Fraction(0)
        return out.copy()
    return np.zeros(shape, dtype=float)


def identity(n, mode):
    out = zeros((n, n), mode)
    one = Fraction(1) if mode == EXACT else 1.0
    for i in range(n):
        out[i, i] = one
    return out


def _threshold(A, mode, tol):
    if mode == EXACT:
        return None
    m = max((abs(float(x)) for x in np.asarray(A, dtype=float).flat), default=0.0)
    return tol * max(m, 1.0)


def _is_zero(x, thresh):
    if thresh is None:
        return x == 0
    return abs(x) <= thresh


def rref(A, mode, tol=DEFAULT_TOL):
    """Reduced row echelon form.  Returns (R, pivot_columns)."""
    R = A.copy()
    nrows, ncols = R.shape
    thresh = _threshold(R, mode, tol)
    piv_cols = []
    r = 0
    for c in range(ncols):
        if r >= nrows:
            break
        # exact mode: first nonzero; float mode: largest magnitude for stability
        if mode == EXACT:
            pr = next((i for i in range(r, nrows) if R[i, c] != 0), None)
        else:
            i_best = r + int(np.argmax(np.abs(R[r:, c])))
            pr = i_best if not _is_zero(R[i_best, c], thresh) else None
        if pr is None:
            continue
        if pr != r:
            R[[r, pr]] = R[[pr, r]]
        R[r] = R[r] / R[r, c]
        for i in range(nrows):
            if i != r and not _is_zero(R[i, c], thresh):
                R[i] = R[i] - R[i, c] * R[r]
        piv_cols.append(c)
        r += 1
    return R, piv_cols


def rank(A, mode, tol=DEFAULT_TOL):
    return len(rref(A, mode, tol)[1])


def column_echelon(V, mode, tol=DEFAULT_TOL):
    """Canonical reduced column-echelon basis for the column span of V.

    Columns carry leading-one pivots with pivot rows in increasing order; the
    result is the unique canonical matrix of the spanned subspace.
    """
    R, piv = rref(V.T.copy(), mode, tol)
    return R[: len(piv)].T.copy()


def nullspace(A, mode, tol=DEFAULT_TOL):
    """Canonical basis (columns) of {x : A x = 0}."""
    nrows, ncols = A.shape
    R, piv = rref(A, mode, tol)
    free = [c for c in range(ncols) if c not in piv]
    basis = zeros((ncols, len(free)), mode)
    one = Fraction(1) if mode == EXACT else 1.0
    for k, fc in enumerate(free):
        basis[fc, k] = one
        for r, pc in enumerate(piv):
            basis[pc, k] = -R[r, fc]
    if basis.shape[1] == 0:
        return basis
    return column_echelon(basis, mode, tol)


def solve(A, b, mode, tol=DEFAULT_TOL):
    """Solve A x = b for square invertible A; raises Degenerate otherwise."""
    n, m = A.shape
    if n != m:
        raise DimensionMismatch("solve expects a square matrix")
    b = b.reshape(-1)
    if b.shape[0] != n:
        raise DimensionMismatch("right-hand side length mismatch")
    aug = zeros((n, m + 1), mode)
    aug[:, :m] = A
    aug[:, m] = b
    R, piv = rref(aug, mode, tol)
    if len(piv) != n or m in piv:
        raise Degenerate("matrix is singular")
    return R[:, m].copy()


def solve_matrix(A, B, mode, tol=DEFAULT_TOL):
    """Solve A X = B column by column for square invertible A."""
    n, m = A.shape
    if n != m:
        raise DimensionMismatch("solve_matrix expects a square matrix")
    X = zeros((n, B.shape[1]), mode)
    Ai = inv(A, mode, tol)
    for j in range(B.shape[1]):
        X[:, j] = Ai @ B[:, j]
    return X


def inv(A, mode, tol=DEFAULT_TOL):
    n, m = A.shape
    if n != m:
        raise DimensionMismatch("inv expects a square matrix")
    aug = zeros((n, 2 * n), mode)
    aug[:, :n] = A
    aug[:, n:] = identity(n, mode)
    R, piv = rref(aug, mode, tol)
    if piv[:n] != list(range(n)):
        raise Degenerate("matrix is singular")
    return R[:, n:].copy()


def matrices_close(A, B, mode, tol=DEFAULT_TOL):
    if A.shape != B.shape:
        return False
    if mode == EXACT:
        return all(A[idx] == B[idx] for idx in np.ndindex(A.shape))
    return bool(np.all(np.abs(np.asarray(A, float) - np.asarray(B, float)) <= tol))


def to_float(A):
    return np.asarray(A, dtype=float)
