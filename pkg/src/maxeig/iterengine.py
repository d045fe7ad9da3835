"""Iteration algorithms: power iteration, RQI, and the two global algorithms.

All shifted-inverse variants share one driver that records a uniform
trace and applies the same convergence control: the iteration stops
when the relative shift change and the relative eigen-residual are both
below tolerance.  An exactly singular solve (the shift landed on an
eigenvalue to machine precision) is accepted as convergence when the
current residual already passes, otherwise the shift is perturbed once
and the solve retried.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field

import numpy as np

from . import linsolve
from .errors import (
    DimensionMismatch,
    MaxIterationsExceeded,
    NonPositiveIterate,
    SolverBreakdown,
)
from .numat import (
    TridiagonalSystem,
    as_square_matrix,
    as_vector,
    is_positive_vector,
    matrix_scale,
    matvec,
)

__all__ = [
    "TraceStep",
    "IterationTrace",
    "EigenpairResult",
    "power_iteration",
    "rqi",
    "algorithm1",
    "algorithm2",
]

DEFAULT_TOL_Z = 1e-10
DEFAULT_TOL_RESIDUAL = 1e-8
DEFAULT_MAX_ITERATIONS = 100


@dataclass(frozen=True)
class TraceStep:
    k: int
    z: float | complex
    residual: float
    seconds: float


@dataclass
class IterationTrace:
    """Ordered record of shift estimates and residuals for one run."""

    steps: list[TraceStep] = field(default_factory=list)
    termination: str = "running"
    vectors: list[np.ndarray] | None = None

    def record(self, k, z, residual, seconds, vector=None):
        self.steps.append(TraceStep(k, z, residual, seconds))
        if self.vectors is not None and vector is not None:
            self.vectors.append(vector.copy())

    def zs(self) -> np.ndarray:
        return np.array([s.z for s in self.steps])

    def residuals(self) -> np.ndarray:
        return np.array([s.residual for s in self.steps])

    @property
    def iterations(self) -> int:
        return self.steps[-1].k if self.steps else 0

    def stabilized_at(self, rtol=5e-6) -> int:
        """First step k from which every later z agrees with the final one.

        Agreement is relative to the final value; this is the step at
        which the printed-table value of the run stops changing, which
        can precede the stopping test by the one confirming iterate the
        convergence control needs.
        """
        zs = self.zs()
        zfinal = zs[-1]
        scale = max(abs(zfinal), 1e-300)
        k = len(zs) - 1
        while k > 0 and abs(zs[k - 1] - zfinal) <= rtol * scale:
            k -= 1
        return self.steps[k].k


@dataclass
class EigenpairResult:
    """A converged eigenpair plus recovery metadata."""

    eigenvalue: float | complex
    eigenvector: np.ndarray
    iterations: int
    residual: float
    shift_m: float = 0.0
    h_scaling: np.ndarray | None = None
    norm_tag: str = "l2"
    z0_fallback: bool = False

    @property
    def eigenvector_positive(self) -> bool:
        """True when the converged eigenvector is strictly positive.

        The maximal (Perron) eigenvector of an irreducible matrix with
        nonnegative off-diagonals is positive; a sign-changing vector
        therefore signals capture of a non-maximal pair.
        """
        return is_positive_vector(self.eigenvector, imag_tol=1e-10)


def _sign_fix(v):
    """Rotate/flip so the largest-magnitude component is positive real."""
    i = int(np.argmax(np.abs(v)))
    pivot = v[i]
    if pivot == 0:
        return v
    if np.iscomplexobj(v):
        return v * (np.conj(pivot) / abs(pivot))
    return v if pivot > 0 else -v


def _norm_factory(norm, mu):
    if norm == "l1":
        return lambda v: float(np.abs(v).sum())
    if norm == "l2":
        return lambda v: float(np.linalg.norm(v))
    if norm == "l2mu":
        if mu is None:
            raise DimensionMismatch("norm 'l2mu' requires the weight sequence mu")
        return lambda v: float(np.sqrt((mu * np.abs(v) ** 2).sum()))
    raise ValueError(f"unknown norm {norm!r}")


def _update_factory(z_update, mu):
    if z_update == "rayleigh":
        def update(v, av):
            z = (np.conj(v) @ av) / (np.conj(v) @ v)
            return z if np.iscomplexobj(av) else float(z.real if np.iscomplexobj(z) else z)
        return update
    if z_update == "weighted_rayleigh":
        if mu is None:
            raise DimensionMismatch("weighted_rayleigh requires the weight sequence mu")
        def update(v, av):
            z = (mu * np.conj(v) * av).sum() / (mu * np.abs(v) ** 2).sum()
            return z if np.iscomplexobj(av) else float(z.real if np.iscomplexobj(z) else z)
        return update
    if z_update == "max_ratio":
        def update(v, av):
            if not is_positive_vector(v):
                raise NonPositiveIterate("max-ratio update met a non-positive iterate")
            ratios = av / v
            return float(ratios[int(np.argmax(ratios))])
        return update
    raise ValueError(f"unknown z_update {z_update!r}")


def run_shifted_iteration(
    apply_matrix,
    solve_shifted,
    v0,
    z0,
    *,
    z_update="rayleigh",
    norm="l2",
    mu=None,
    scale=1.0,
    tol_z=DEFAULT_TOL_Z,
    tol_residual=DEFAULT_TOL_RESIDUAL,
    max_iterations=DEFAULT_MAX_ITERATIONS,
    negate=False,
    store_vectors=False,
):
    """Shared shifted-inverse driver; returns (z, v, trace).

    ``solve_shifted(z, v)`` must return any nonzero multiple of
    (z I - A)^{-1} v; normalization and sign fixing happen here.  With
    ``negate`` the recorded and returned shift values are negated
    (reporting lambda_min(-A) for generator-type input); the arithmetic
    path is identical either way.
    """
    norm_fn = _norm_factory(norm, mu)
    update = _update_factory(z_update, mu)
    sign = -1.0 if negate else 1.0

    t0 = time.perf_counter()
    trace = IterationTrace(vectors=[] if store_vectors else None)
    v = as_vector(v0)
    v = _sign_fix(v / norm_fn(v))
    z = z0
    av = apply_matrix(v)
    residual = norm_fn(av - z * v) / (scale * norm_fn(v))
    trace.record(0, sign * z, residual, time.perf_counter() - t0, v)

    for k in range(1, max_iterations + 1):
        try:
            w = solve_shifted(z, v)
        except SolverBreakdown:
            if residual <= tol_residual:
                trace.termination = "converged"
                return sign * z, v, trace
            # one perturb-and-retry, standard practice at an exact eigenvalue hit
            z_pert = z + 1e-12 * (1.0 + abs(z))
            try:
                w = solve_shifted(z_pert, v)
            except SolverBreakdown as exc:
                trace.termination = "breakdown"
                raise type(exc)(f"{exc} (iteration {k}, after one retry)") from exc
        v = _sign_fix(w / norm_fn(w))
        av = apply_matrix(v)
        z_new = update(v, av)
        residual = norm_fn(av - z_new * v) / (scale * norm_fn(v))
        trace.record(k, sign * z_new, residual, time.perf_counter() - t0, v)
        if abs(z_new - z) <= tol_z * max(1.0, abs(z_new)) and residual <= tol_residual:
            trace.termination = "converged"
            return sign * z_new, v, trace
        z = z_new

    trace.termination = "max_iterations"
    raise MaxIterationsExceeded(
        f"no convergence within {max_iterations} iterations", trace=trace
    )


def power_iteration(A, v0=None, norm="l1", steps=100, tol=0.0, store_vectors=False):
    """Power iteration v_k = A v_{k-1} / ||A v_{k-1}||, z_k = ||A v_k||.

    Runs exactly ``steps`` iterations, or stops early once the change in
    z falls below ``tol`` (relative).  Convergence requires the dominant
    eigenvalue to be the target; slow convergence, not divergence, is
    the failure mode.
    """
    norm_fn = _norm_factory(norm, None)
    t0 = time.perf_counter()
    trace = IterationTrace(vectors=[] if store_vectors else None)
    n = A.order if isinstance(A, TridiagonalSystem) else A.shape[0]
    v = as_vector(v0) if v0 is not None else np.ones(n)
    v = v / norm_fn(v)
    scale = matrix_scale(A)

    av = matvec(A, v)
    z = norm_fn(av)
    trace.record(0, z, norm_fn(av - z * v) / (scale * norm_fn(v)), time.perf_counter() - t0, v)
    for k in range(1, steps + 1):
        v = av / z
        av = matvec(A, v)
        z_new = norm_fn(av)
        residual = norm_fn(av - z_new * v) / (scale * norm_fn(v))
        trace.record(k, z_new, residual, time.perf_counter() - t0, v)
        if tol > 0.0 and abs(z_new - z) <= tol * max(1.0, abs(z_new)):
            z = z_new
            trace.termination = "converged"
            return trace
        z = z_new
    trace.termination = "steps_exhausted"
    return trace


def _dense_shifted_solver(A):
    n = A.shape[0]
    eye = np.eye(n, dtype=A.dtype)

    def solve(z, v):
        factors = linsolve.lu_factor(z * eye - A)
        return linsolve.lu_solve(factors, v)

    return solve


def rqi(A, v0, z0, z_update="rayleigh", *, mu=None, norm=None, negate=False,
        tol_z=DEFAULT_TOL_Z, tol_residual=DEFAULT_TOL_RESIDUAL,
        max_iterations=DEFAULT_MAX_ITERATIONS, store_vectors=False):
    """Rayleigh quotient iteration on a dense matrix.

    v_k = (z_{k-1} I - A)^{-1} v_{k-1} normalized, with the shift update
    selected by ``z_update`` (rayleigh | weighted_rayleigh | max_ratio;
    the last realizes shifted inverse iteration).
    """
    A = as_square_matrix(A)
    if norm is None:
        norm = "l2mu" if z_update == "weighted_rayleigh" else "l2"
    z, v, trace = run_shifted_iteration(
        lambda vec: matvec(A, vec),
        _dense_shifted_solver(A),
        v0,
        z0,
        z_update=z_update,
        norm=norm,
        mu=mu,
        scale=matrix_scale(A),
        tol_z=tol_z,
        tol_residual=tol_residual,
        max_iterations=max_iterations,
        negate=negate,
        store_vectors=store_vectors,
    )
    result = EigenpairResult(
        eigenvalue=z,
        eigenvector=v,
        iterations=trace.iterations,
        residual=trace.steps[-1].residual,
        norm_tag=norm,
    )
    return result, trace


def _uniform_start(A):
    n = A.shape[0]
    v0 = np.ones(n, dtype=A.dtype) / np.sqrt(n)
    if np.iscomplexobj(A):
        # max-ratio is undefined over complex ratios; start from the
        # largest row-sum real part instead
        z0 = float(A.sum(axis=1).real.max())
    else:
        av = A @ v0
        ratios = av / v0
        z0 = float(ratios[int(np.argmax(ratios))])
    return v0, z0


def algorithm1(A, z0=None, negate=False, **opts):
    """Global specific RQI: uniform start, z0 = max(A v0 / v0), Rayleigh updates.

    Guaranteed for matrices with the Perron-Frobenius property (up to a
    shift); in practice it converges on a much wider class, complex
    input included, but with a small chance of capturing a non-maximal
    pair -- check ``eigenvector_positive`` on the result.
    """
    A = as_square_matrix(A)
    v0, z0_auto = _uniform_start(A)
    return rqi(A, v0, z0_auto if z0 is None else z0, "rayleigh", negate=negate, **opts)


def algorithm2(A, z0=None, negate=False, **opts):
    """Global shifted inverse iteration: like algorithm1 but z_k = max(A v_k / v_k).

    The max ratio stays above the Perron root for positive iterates, so
    the shift approaches it from the safe side.  Real input only.
    """
    A = as_square_matrix(A)
    if np.iscomplexobj(A):
        raise NonPositiveIterate(
            "the max-ratio update is undefined for complex input; use algorithm1"
        )
    v0, z0_auto = _uniform_start(A)
    return rqi(A, v0, z0_auto if z0 is None else z0, "max_ratio", negate=negate, **opts)
