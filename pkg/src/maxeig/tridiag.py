"""Efficient initials and the O(N) RQI pipeline for tridiagonal generators.

Pipeline for a system Qc built from rates (a, b, c) with c not
identically zero:

1. the near-harmonic vector h via a one-step recurrence; the similarity
   transform Diag(h)^-1 Qc Diag(h) zeroes every killing rate except the
   last one, which is then treated as the right-endpoint exit rate b_N;
2. the weight sequence mu and the decreasing tail sequence phi, whose
   square root seeds the initial vector; the variational quantity
   delta_1 seeds the initial shift from below;
3. weighted RQI, where every shifted system is solved either by the
   closed-form O(N) representation or by the generic banded solver;
4. recovery of the original eigenpair by undoing the h-scaling.

Everything works on the positive spectrum side: eigenvalues reported by
this module are lambda_min(-Qc), the decay rate of the associated
chain, so all shifts and table entries stay positive.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import iterengine, linsolve
from .errors import DenominatorBreakdown, DimensionMismatch, NonFiniteInput, NonPositiveR
from .iterengine import EigenpairResult, run_shifted_iteration
from .numat import TridiagonalSystem, as_vector, matrix_scale, matvec, weighted_norm

__all__ = [
    "HTransform",
    "InitialData",
    "compute_h",
    "compute_initials",
    "z0_combination",
    "explicit_rqi_solve",
    "tridiag_rqi",
    "recover_original",
]


@dataclass(frozen=True)
class HTransform:
    """The near-harmonic vector h and the transformed system it produces."""

    h: np.ndarray                     # h[0] == 1, positive
    r: np.ndarray                     # one-step ratios, length N
    transformed: TridiagonalSystem    # killing only at the right endpoint
    original_c_last: float

    @property
    def killing_rate(self) -> float:
        """The surviving right-endpoint rate (the renamed b_N)."""
        return float(self.transformed.c[-1])


def compute_h(system: TridiagonalSystem) -> HTransform:
    """Build h with (Qc h)_i = 0 on every row except the last.

    r_0 = 1 + c_0/b_0,  r_n = 1 + (a_n + c_n)/b_n - a_n/(b_n r_{n-1}),
    h_0 = 1,  h_n = h_{n-1} r_{n-1}.  When c vanishes below the last row
    the ratios are all 1 and the transform is the identity.
    """
    a, b, c = system.a, system.b, system.c
    N = system.n_max
    if (c[:-1] == 0).all():
        # no interior killing: the transform is the exact identity, which
        # keeps such runs bit-stable
        return HTransform(h=np.ones(N + 1), r=np.ones(N),
                          transformed=system, original_c_last=float(c[N]))
    r = np.ones(N)
    r[0] = 1.0 + c[0] / b[0]
    for n in range(1, N):
        r[n] = 1.0 + (a[n] + c[n]) / b[n] - a[n] / (b[n] * r[n - 1])
        if r[n] <= 0.0:
            raise NonPositiveR(f"r[{n}] = {r[n]} <= 0; input violates positivity assumptions")
    if r[0] <= 0.0:
        raise NonPositiveR(f"r[0] = {r[0]} <= 0")
    h = np.ones(N + 1)
    h[1:] = np.cumprod(r)

    new_a = a.copy()
    new_a[1:] = a[1:] * h[:-1] / h[1:]
    new_b = b.copy()
    new_b[:-1] = b[:-1] * h[1:] / h[:-1]
    # rows below N lose their killing term by harmonicity; row N keeps
    # the diagonal defect since the transform preserves the diagonal
    new_c = np.zeros(N + 1)
    new_c[N] = a[N] + c[N] - new_a[N]
    transformed = TridiagonalSystem(new_a, new_b, new_c)
    return HTransform(h=h, r=r, transformed=transformed, original_c_last=float(c[N]))


@dataclass(frozen=True)
class InitialData:
    """The weight/tail sequences and the initials they define.

    After the transform the right-endpoint killing rate plays the role
    of b_N, so the effective exit-rate sequence is b_0..b_{N-1}, c_N.
    z0 here is the reciprocal of delta_1; see z0_combination for the
    blend used by the reproduction tables.
    """

    mu: np.ndarray
    phi: np.ndarray
    v0_raw: np.ndarray
    v0: np.ndarray
    delta1: float

    @property
    def z0(self) -> float:
        return 1.0 / self.delta1


def compute_initials(transformed: TridiagonalSystem) -> InitialData:
    """Compute mu, phi, the seed vector, and delta_1 for a transformed system."""
    a, b, c = transformed.a, transformed.b, transformed.c
    N = transformed.n_max
    if (c[:-1] != 0).any():
        raise DimensionMismatch("compute_initials expects killing only at the right endpoint")
    if c[N] <= 0:
        raise NonFiniteInput("the right-endpoint rate must be positive (c must not vanish)")

    b_eff = b.copy()
    b_eff[N] = c[N]

    mu = np.ones(N + 1)
    mu[1:] = np.cumprod(b_eff[:-1] / a[1:])

    inv = 1.0 / (mu * b_eff)
    phi = np.cumsum(inv[::-1])[::-1]

    sqrt_phi = np.sqrt(phi)
    v0_raw = sqrt_phi
    v0 = v0_raw / weighted_norm(v0_raw, mu)

    # delta_1 = max_n [ sqrt(phi_n) * sum_{k<=n} mu_k sqrt(phi_k)
    #                   + (1/sqrt(phi_n)) * sum_{j>n} mu_j phi_j^{3/2} ]
    # evaluated with prefix/suffix sums, O(N) overall
    prefix = np.cumsum(mu * sqrt_phi)
    tail_terms = mu * phi * sqrt_phi
    suffix = np.concatenate([np.cumsum(tail_terms[::-1])[::-1][1:], [0.0]])
    delta1 = float(np.max(sqrt_phi * prefix + suffix / sqrt_phi))
    return InitialData(mu=mu, phi=phi, v0_raw=v0_raw, v0=v0, delta1=delta1)


def z0_combination(delta1: float, rayleigh_quotient: float) -> float:
    """Initial shift blending the delta_1 bound with the Rayleigh quotient.

    The fixed convex combination 7/8 : 1/8 reproduces the reference
    tables at every size; the weighting does not vary with the order.
    """
    if delta1 <= 0:
        raise NonFiniteInput("delta1 must be positive")
    return (7.0 / delta1 + rayleigh_quotient) / 8.0


def explicit_rqi_solve(transformed: TridiagonalSystem, mu, z, v):
    """Closed-form O(N) solve of (-Q - z I) w = v for a transformed system.

    Uses the running-sum factorization M_{s,j} = mu_j (kappa_s -
    kappa_{j-1}) with kappa_s the prefix sums of 1/(mu_k b_k), so the
    triangular kernel is never materialized.  Raises
    DenominatorBreakdown when the closed-form denominator vanishes
    (z is an eigenvalue to machine precision).
    """
    mu = as_vector(mu)
    v = as_vector(v)
    N = transformed.n_max
    if len(v) != N + 1 or len(mu) != N + 1:
        raise DimensionMismatch("mu and v must match the system order")
    b_eff = transformed.b.copy()
    b_eff[N] = transformed.c[N]

    kappa = np.cumsum(1.0 / (mu * b_eff))
    A_seq = np.zeros(N + 1)
    B_seq = np.zeros(N + 1)
    B_seq[0] = 1.0
    # running sums over j <= s-1 of mu_j * (term_j) and mu_j * kappa_{j-1} * (term_j)
    sa1 = sa2 = sb1 = sb2 = 0.0
    for s in range(1, N + 1):
        j = s - 1
        km1 = kappa[j - 1] if j > 0 else 0.0
        ta = mu[j] * (v[j] + z * A_seq[j])
        tb = mu[j] * B_seq[j]
        sa1 += ta
        sa2 += km1 * ta
        sb1 += tb
        sb2 += km1 * tb
        A_seq[s] = -(kappa[s - 1] * sa1 - sa2)
        B_seq[s] = 1.0 - z * (kappa[s - 1] * sb1 - sb2)

    mb = mu[N] * b_eff[N]
    numer = float(np.sum(mu * (v + z * A_seq))) - mb * A_seq[N]
    denom = mb * B_seq[N] - z * float(np.sum(mu * B_seq))
    scale = max(1.0, abs(mb * B_seq[N]), abs(z) * float(np.abs(mu * B_seq).sum()))
    if abs(denom) < linsolve.PIVOT_FLOOR * scale:
        raise DenominatorBreakdown(f"closed-form denominator {denom} vanished")
    x = numer / denom
    return A_seq + x * B_seq


def _shifted_solver(transformed: TridiagonalSystem, mu, choice):
    """Return solve(z, v) giving a multiple of (z I - (-Q))^{-1} v."""
    if choice == "explicit":
        return lambda z, v: explicit_rqi_solve(transformed, mu, z, v)
    if choice == "generic":
        lower = -transformed.a[1:]
        upper = -transformed.b[:-1]
        base_diag = transformed.a + transformed.b + transformed.c

        def solve(z, v):
            return linsolve.tridiag_solve(lower, base_diag - z, upper, v)

        return solve
    raise ValueError(f"unknown solver {choice!r}")


def tridiag_rqi(
    system: TridiagonalSystem,
    *,
    solver="explicit",
    z0="combination",
    v0=None,
    tol_z=iterengine.DEFAULT_TOL_Z,
    tol_residual=iterengine.DEFAULT_TOL_RESIDUAL,
    max_iterations=50,
    store_vectors=False,
):
    """Full pipeline: transform, initials, weighted RQI on the transformed system.

    Returns (result, trace) where the result holds the converged pair
    (z, v) for the transformed system: the eigenvalue is
    lambda_min(-Qc) and the eigenvector lives in the h-scaled
    coordinates.  Map back with recover_original.

    ``z0`` is "combination" (the table initial), "delta1" (its
    reciprocal-bound part alone), "rayleigh", or a number.  ``v0`` is
    None for the efficient sqrt(phi) seed, "uniform", or a vector.
    """
    if (system.c == 0).all():
        raise NonFiniteInput("tridiag_rqi requires some killing rate (c not identically zero)")
    ht = compute_h(system)
    transformed = ht.transformed
    init = compute_initials(transformed)
    mu = init.mu

    if v0 is None:
        start = init.v0
    elif isinstance(v0, str) and v0 == "uniform":
        ones = np.ones(transformed.order)
        start = ones / weighted_norm(ones, mu)
    else:
        start = as_vector(v0)
        start = start / weighted_norm(start, mu)

    neg_q = lambda vec: -matvec(transformed, vec)
    rayleigh = float((mu * start * neg_q(start)).sum() / (mu * start * start).sum())
    if isinstance(z0, str):
        if z0 == "combination":
            z_start = z0_combination(init.delta1, rayleigh)
        elif z0 == "delta1":
            z_start = init.z0
        elif z0 == "rayleigh":
            z_start = rayleigh
        else:
            raise ValueError(f"unknown z0 choice {z0!r}")
    else:
        z_start = float(z0)

    z, v, trace = run_shifted_iteration(
        neg_q,
        _shifted_solver(transformed, mu, solver),
        start,
        z_start,
        z_update="weighted_rayleigh",
        norm="l2mu",
        mu=mu,
        scale=matrix_scale(transformed),
        tol_z=tol_z,
        tol_residual=tol_residual,
        max_iterations=max_iterations,
        store_vectors=store_vectors,
    )
    result = EigenpairResult(
        eigenvalue=z,
        eigenvector=v,
        iterations=trace.iterations,
        residual=trace.steps[-1].residual,
        shift_m=0.0,
        h_scaling=ht.h,
        norm_tag="l2mu",
    )
    return result, trace


def recover_original(result: EigenpairResult, ht=None, m=0.0, normalize="last"):
    """Map a transformed-system eigenpair back to the original matrix.

    Returns the maximal pair (m - z, Diag(h) v), with the eigenvector
    rescaled so its last component is 1 (the display convention) or to
    unit length with ``normalize="l2"``.
    """
    h = None
    if ht is not None:
        h = ht.h if isinstance(ht, HTransform) else as_vector(ht)
    elif result.h_scaling is not None:
        h = result.h_scaling
    g = result.eigenvector if h is None else h * result.eigenvector
    if normalize == "last":
        g = g / g[-1]
    elif normalize == "l2":
        g = g / np.linalg.norm(g)
    return EigenpairResult(
        eigenvalue=m - result.eigenvalue,
        eigenvector=g,
        iterations=result.iterations,
        residual=result.residual,
        shift_m=m,
        h_scaling=h,
        norm_tag=result.norm_tag,
    )
