"""Linear-system solvers backing the inverse/RQI iterations.

Two routes: a banded elimination solver for tridiagonal systems and a
dense LU with partial pivoting, both real and complex.  Shifted-inverse
iteration deliberately drives these systems toward singularity, so
"nearly singular" is the normal operating regime here and must not
error; only pivots below an absolute floor (an exact hit on an
eigenvalue) raise, and the iteration driver handles that.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import BreakdownError, DimensionMismatch, SingularError
from .numat import as_square_matrix, as_vector

__all__ = ["PIVOT_FLOOR", "LuFactors", "lu_factor", "lu_solve", "tridiag_solve"]

# Far below any legitimate pivot at desk scale; signals an exact eigenvalue hit.
PIVOT_FLOOR = 1e-30


def tridiag_solve(lower, diag, upper, rhs):
    """Solve a tridiagonal system by elimination with adjacent-row pivoting.

    ``lower[i]`` couples row i+1 to column i, ``upper[i]`` row i to
    column i+1.  Row swaps between adjacent rows create fill-in on a
    second super-diagonal, which is carried explicitly; this keeps the
    solve stable on the shifted, nearly singular systems RQI produces,
    where the pivot-free forward recurrence can fail.

    Raises BreakdownError when a pivot falls below PIVOT_FLOOR.
    """
    d = as_vector(diag).copy()
    n = len(d)
    l = as_vector(lower) if n > 1 else np.zeros(0)
    u = as_vector(upper).copy() if n > 1 else np.zeros(0)
    x = as_vector(rhs).copy()
    if n > 1 and (len(l) != n - 1 or len(u) != n - 1):
        raise DimensionMismatch("lower/upper diagonals must have length n-1")
    if len(x) != n:
        raise DimensionMismatch("rhs length does not match the system order")

    dtype = np.result_type(d.dtype, l.dtype if n > 1 else d.dtype, u.dtype if n > 1 else d.dtype, x.dtype)
    d = d.astype(dtype)
    x = x.astype(dtype)
    if n > 1:
        l = l.astype(dtype)
        u = u.astype(dtype)
    s = np.zeros(n, dtype=dtype)  # fill-in second super-diagonal

    for i in range(n - 1):
        if abs(l[i]) > abs(d[i]):
            # bring the larger sub-diagonal entry onto the pivot
            d[i], l[i] = l[i], d[i]
            u[i], d[i + 1] = d[i + 1], u[i]
            if i + 1 < n - 1:
                s[i], u[i + 1] = u[i + 1], s[i]
            else:
                s[i] = 0.0
            x[i], x[i + 1] = x[i + 1], x[i]
        if abs(d[i]) < PIVOT_FLOOR:
            raise BreakdownError(f"tridiagonal pivot {d[i]!r} below floor at row {i}")
        f = l[i] / d[i]
        d[i + 1] = d[i + 1] - f * u[i]
        if i + 1 < n - 1:
            u[i + 1] = u[i + 1] - f * s[i]
        x[i + 1] = x[i + 1] - f * x[i]

    if abs(d[n - 1]) < PIVOT_FLOOR:
        raise BreakdownError(f"tridiagonal pivot {d[n - 1]!r} below floor at row {n - 1}")

    x[n - 1] = x[n - 1] / d[n - 1]
    if n > 1:
        x[n - 2] = (x[n - 2] - u[n - 2] * x[n - 1]) / d[n - 2]
    for i in range(n - 3, -1, -1):
        x[i] = (x[i] - u[i] * x[i + 1] - s[i] * x[i + 2]) / d[i]
    return x


@dataclass(frozen=True)
class LuFactors:
    """Packed LU factorization P A = L U with partial pivoting."""

    lu: np.ndarray    # unit-lower factors below, U on and above the diagonal
    piv: np.ndarray   # row swapped with row k at elimination step k
    parity: int       # +1/-1, sign of the permutation
    rcond: float      # heuristic reciprocal condition estimate min|U_ii|/max|U_ii|

    @property
    def order(self) -> int:
        return self.lu.shape[0]


def lu_factor(A) -> LuFactors:
    """Factor a square matrix with partial pivoting by max column magnitude.

    Raises SingularError when a pivot falls below PIVOT_FLOOR after pivoting.
    """
    lu = as_square_matrix(A).copy()
    n = lu.shape[0]
    piv = np.arange(n)
    parity = 1
    for k in range(n):
        p = k + int(np.argmax(np.abs(lu[k:, k])))
        if abs(lu[p, k]) < PIVOT_FLOOR:
            raise SingularError(f"pivot below floor in column {k}")
        if p != k:
            lu[[k, p], :] = lu[[p, k], :]
            parity = -parity
        piv[k] = p
        if k < n - 1:
            lu[k + 1:, k] /= lu[k, k]
            lu[k + 1:, k + 1:] -= np.outer(lu[k + 1:, k], lu[k, k + 1:])
    absdiag = np.abs(np.diag(lu))
    rcond = float(absdiag.min() / absdiag.max())
    return LuFactors(lu=lu, piv=piv, parity=parity, rcond=rcond)


def lu_solve(factors: LuFactors, rhs):
    """Solve A x = rhs given factors from lu_factor."""
    lu = factors.lu
    n = factors.order
    x = as_vector(rhs).astype(np.result_type(lu.dtype, np.asarray(rhs).dtype)).copy()
    if len(x) != n:
        raise DimensionMismatch("rhs length does not match the factored order")
    for k in range(n):
        p = factors.piv[k]
        if p != k:
            x[k], x[p] = x[p], x[k]
    for i in range(1, n):
        x[i] -= lu[i, :i] @ x[:i]
    for i in range(n - 1, -1, -1):
        x[i] = (x[i] - lu[i, i + 1:] @ x[i + 1:]) / lu[i, i]
    return x
