"""Built-in matrix families used by the reproduction suite and the CLI.

Every generator is deterministic and total on its stated domain.  The
generator-type families (bd_squares, triangular, branching) produce
nonnegative off-diagonals with nonpositive row sums; toeplitz and
poisson produce exactly symmetric matrices.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .errors import DimensionMismatch
from .numat import TridiagonalSystem

__all__ = [
    "ModelSpec",
    "MODEL_NAMES",
    "bd_squares",
    "poisson_block",
    "toeplitz_linear",
    "triangular_model",
    "branching_model",
    "negative3",
    "complex3",
]

TRIANGULAR_RULES = {
    "inv_kp1": lambda k: 1.0 / (k + 1),
    "one": lambda k: 1.0,
    "k": lambda k: float(k),
    "k2": lambda k: float(k) ** 2,
}


def bd_squares(N: int) -> TridiagonalSystem:
    """Birth-death generator driven by the squares: b_k = (k+1)^2, a_k = k^2.

    Every row sums to zero except the last, which carries the killing
    rate (N+1)^2; the truncation of the infinite chain whose decay rate
    tends to 1/4 from above.
    """
    if N < 1:
        raise DimensionMismatch("bd_squares needs N >= 1")
    k = np.arange(N + 1, dtype=float)
    a = k**2
    b = (k + 1.0) ** 2
    b[N] = 0.0
    c = np.zeros(N + 1)
    c[N] = (N + 1.0) ** 2
    return TridiagonalSystem(a, b, c)


def triangular_model(N: int, rule="inv_kp1") -> np.ndarray:
    """Lower-triangular-plus-superdiagonal generator.

    Column 0 holds the return rates a_k, the superdiagonal holds k+1,
    and the diagonal closes each row (row N sums to -(N+1)).  ``rule``
    names the a_k family or is a callable k -> a_k.
    """
    if N < 1:
        raise DimensionMismatch("triangular_model needs N >= 1")
    a_of = TRIANGULAR_RULES[rule] if isinstance(rule, str) else rule
    n = N + 1
    Q = np.zeros((n, n))
    for kk in range(n):
        ak = 0.0 if kk == 0 else float(a_of(kk))
        if kk >= 1:
            Q[kk, 0] = ak
        if kk < N:
            Q[kk, kk + 1] = kk + 1.0
        Q[kk, kk] = -ak - (kk + 1.0)
    return Q


def branching_model(N: int, alpha: float) -> np.ndarray:
    """Truncated branching generator on states 1..N (order N).

    Offspring law p_0 = alpha/2, p_1 = 0, p_n = (2-alpha)/2^n; the last
    column absorbs the exact geometric tail sums (2-alpha)/2^(m-1), so
    each row closes in closed form.  Subcritical iff alpha > 4/3.
    """
    if N < 2:
        raise DimensionMismatch("branching_model needs N >= 2")
    if not 0.0 < alpha < 2.0:
        raise DimensionMismatch("alpha must lie in (0, 2)")
    p0 = alpha / 2.0
    Q = np.zeros((N, N))

    def p(kk):
        return (2.0 - alpha) / 2.0**kk

    def tail(m):  # sum_{k >= m} p_k, closed form for m >= 2
        return (2.0 - alpha) / 2.0 ** (m - 1)

    for i in range(1, N + 1):
        row = i - 1
        if i == N:
            Q[row, row - 1] = N * p0
            Q[row, row] = -N * p0
            continue
        if i >= 2:
            Q[row, row - 1] = i * p0
        Q[row, row] = -float(i)
        for kk in range(2, N - i + 1):
            Q[row, i + kk - 2] += i * p(kk)
        Q[row, N - 1] += i * tail(N - i + 1)
    return Q


def toeplitz_linear(n: int) -> np.ndarray:
    """Symmetric Toeplitz matrix with entries |i - j| + 1."""
    if n < 2:
        raise DimensionMismatch("toeplitz_linear needs n >= 2")
    idx = np.arange(n)
    return (np.abs(idx[:, None] - idx[None, :]) + 1).astype(float)


def poisson_block(grid: int, block_size: int | None = None,
                  stencil_diag: float = -4.0, stencil_off: float = 1.0) -> np.ndarray:
    """Block-tridiagonal matrix with identity off-diagonal blocks.

    The diagonal blocks are tridiagonal with the given stencil; the
    default (-4 diagonal, 1 off-diagonal) is the five-point grid
    Laplacian with absorbing boundary, order grid * block_size.
    """
    if grid < 2:
        raise DimensionMismatch("poisson_block needs grid >= 2")
    bs = grid if block_size is None else block_size
    if bs < 2:
        raise DimensionMismatch("poisson_block needs block_size >= 2")
    blk = np.zeros((bs, bs))
    ii = np.arange(bs)
    blk[ii, ii] = stencil_diag
    blk[ii[:-1], ii[1:]] = stencil_off
    blk[ii[1:], ii[:-1]] = stencil_off
    n = grid * bs
    out = np.zeros((n, n))
    eye = np.eye(bs)
    for B in range(grid):
        s = B * bs
        out[s:s + bs, s:s + bs] = blk
        if B + 1 < grid:
            out[s:s + bs, s + bs:s + 2 * bs] = eye
            out[s + bs:s + 2 * bs, s:s + bs] = eye
    return out


def negative3() -> np.ndarray:
    """The fixed 3x3 example with several negative entries."""
    return np.array([[-1.0, 8.0, -1.0],
                     [8.0, 8.0, 8.0],
                     [-1.0, 8.0, 8.0]])


def complex3() -> np.ndarray:
    """The fixed complex 3x3 example (coefficients exact to four decimals)."""
    return np.array([
        [0.75 - 1.125j, 0.5882 - 0.1471j, 1.0735 + 1.4191j],
        [-0.5 - 1.0j, 2.1765 + 0.7059j, 2.1471 - 0.4118j],
        [2.75 - 0.125j, 0.5882 - 0.1471j, -0.9265 + 0.4191j],
    ])


MODEL_NAMES = ("bd_squares", "poisson_block", "toeplitz", "triangular", "branching",
               "negative3", "complex3")


@dataclass(frozen=True)
class ModelSpec:
    """A serializable description of one built-in model instance."""

    name: str
    size: int | None = None
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.name not in MODEL_NAMES:
            raise DimensionMismatch(f"unknown model {self.name!r}; choose from {MODEL_NAMES}")

    def render(self):
        """Materialize the concrete matrix or tridiagonal system."""
        if self.name == "bd_squares":
            return bd_squares(self.size)
        if self.name == "poisson_block":
            return poisson_block(self.size, **self.params)
        if self.name == "toeplitz":
            return toeplitz_linear(self.size)
        if self.name == "triangular":
            return triangular_model(self.size, self.params.get("rule", "inv_kp1"))
        if self.name == "branching":
            return branching_model(self.size, self.params.get("alpha", 1.75))
        if self.name == "negative3":
            return negative3()
        return complex3()

    def to_json(self) -> str:
        return json.dumps({"name": self.name, "size": self.size, "params": self.params})

    @classmethod
    def from_json(cls, text: str) -> "ModelSpec":
        doc = json.loads(text)
        return cls(name=doc["name"], size=doc.get("size"), params=doc.get("params") or {})
