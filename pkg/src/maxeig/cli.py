"""Command-line front end: solve, model, reproduce.

Exit codes: 0 success, 1 gated reproduction mismatch, 2 input/parse
errors, 3 convergence failure, 4 algorithm-domain errors.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from dataclasses import asdict, dataclass, field

import numpy as np

from . import __version__, matrixio, models, reference
from .errors import (
    MaxeigError,
    MaxIterationsExceeded,
    NonFiniteInput,
    NonPositiveIterate,
    SolverBreakdown,
)
from .general_init import general_rqi, tridiagonal_from_dense
from .iterengine import algorithm1, algorithm2, power_iteration
from .numat import TridiagonalSystem
from .tridiag import recover_original, tridiag_rqi

METHODS = ("power", "rqi-tridiag", "rqi-general", "alg1", "alg2")

EXIT_PARSE = 2
EXIT_CONVERGENCE = 3
EXIT_DOMAIN = 4


@dataclass
class RunRecord:
    """Round-trippable record of one solve invocation."""

    input: str
    method: str
    options: dict
    trace: list = field(default_factory=list)
    result: dict = field(default_factory=dict)
    wall_time: float = 0.0
    version: str = __version__

    def to_json(self) -> str:
        return json.dumps(asdict(self), indent=2)


def _fmt(x) -> str:
    """Mirror the table convention: 6 significant digits."""
    if isinstance(x, complex) or np.iscomplexobj(x):
        x = complex(x)
        return f"{x.real:.6g}{x.imag:+.6g}i"
    return f"{float(x):.6g}"


def _scalar(x):
    x = complex(x)
    return float(x.real) if x.imag == 0 else [x.real, x.imag]


def _load_input(args):
    """Build the model or read the matrix file named on the command line."""
    sources = sum(1 for s in (args.model, args.input, args.spec) if s)
    if sources != 1:
        raise matrixio.parse_error("exactly one of --model, --input, --spec is required")
    if args.input:
        return matrixio.read_matrix(args.input), f"file:{args.input}"
    if args.spec:
        with open(args.spec) as fh:
            spec = models.ModelSpec.from_json(fh.read())
    else:
        params = {}
        if args.model == "triangular":
            params["rule"] = args.rule
        if args.model == "branching":
            params["alpha"] = args.alpha
        if args.model == "poisson_block" and args.block_size:
            params["block_size"] = args.block_size
        spec = models.ModelSpec(name=args.model, size=args.n, params=params)
    return spec.render(), spec.to_json()


def _start_vector(choice):
    if choice in (None, "efficient"):
        return None
    return "uniform"


def _parse_z0(text, default):
    if text is None:
        return default
    if text in ("rayleigh", "safe", "combination", "delta1", "max-ratio"):
        return text
    try:
        return float(text)
    except ValueError:
        raise matrixio.parse_error(f"--z0 must be a number or a named policy, got {text!r}")


def cmd_solve(args) -> int:
    matrix, descriptor = _load_input(args)
    t0 = time.perf_counter()
    opts = {
        "tol_z": args.tol,
        "tol_residual": args.res_tol,
        "max_iterations": args.max_iter,
    }
    lines = []
    warn = None

    if args.method == "power":
        if isinstance(matrix, TridiagonalSystem):
            # shift to a nonnegative matrix so the maximal pair dominates;
            # presented values are m - z_k, the decay-rate estimates
            dense = matrix.dense()
            m = float(np.abs(np.diag(dense)).max())
            A = m * np.eye(matrix.order) + dense
            v0 = None if _start_vector(args.v0) == "uniform" else _efficient_seed(matrix)
            trace = power_iteration(A, v0=v0, norm=args.norm or "l1", steps=args.steps)
            for i, step in enumerate(trace.steps):
                trace.steps[i] = type(step)(step.k, m - step.z, step.residual, step.seconds)
        else:
            trace = power_iteration(np.asarray(matrix), norm=args.norm or "l1", steps=args.steps)
        zfinal = trace.steps[-1].z
        lines.append(f"power iteration: z = {_fmt(zfinal)} after {trace.iterations} steps")
        result_doc = {"eigenvalue": _scalar(zfinal), "iterations": trace.iterations}
        result = None
    else:
        result, trace, primary, label = _run_method(args, matrix, opts)
        stab = trace.stabilized_at()
        lines.append(
            f"{label} = {_fmt(primary)}   ({trace.iterations} solves, stabilized at"
            f" iteration {stab}, residual {trace.steps[-1].residual:.2e})"
        )
        if result.shift_m:
            lines.append(f"rho(A) = {_fmt(result.eigenvalue)}   (shift m = {_fmt(result.shift_m)})")
        if not np.iscomplexobj(result.eigenvector) and not result.eigenvector_positive:
            # positivity certifies maximality only on the real path
            warn = ("WARNING: non-maximal capture -- the converged eigenvector changes sign; "
                    "the maximal pair of a generator-type matrix is strictly positive "
                    "(rerun with --method alg2 or the efficient initials)")
        result_doc = {
            "eigenvalue": _scalar(primary),
            "rho": _scalar(result.eigenvalue),
            "iterations": trace.iterations,
            "stabilized_at": stab,
            "residual": float(trace.steps[-1].residual),
            "eigenvector": [_scalar(x) for x in result.eigenvector],
            "eigenvector_positive": bool(result.eigenvector_positive),
            "shift_m": float(result.shift_m),
        }

    wall = time.perf_counter() - t0
    record = RunRecord(
        input=descriptor,
        method=args.method,
        options={k: v for k, v in opts.items()} | {
            "z0": args.z0, "v0": args.v0, "norm": args.norm,
            "negate": args.negate, "steps": args.steps,
        },
        trace=[{"k": s.k, "z": _scalar(s.z), "residual": float(s.residual),
                "seconds": float(s.seconds)} for s in trace.steps],
        result=result_doc,
        wall_time=wall,
    )
    if args.trace_out:
        matrixio.write_trace_csv(args.trace_out, trace)
    if args.json:
        print(record.to_json())
    else:
        for ln in lines:
            print(ln)
        if warn:
            print(warn)
    return 0


def _efficient_seed(system: TridiagonalSystem):
    from .tridiag import compute_h, compute_initials

    ht = compute_h(system)
    init = compute_initials(ht.transformed)
    return ht.h * init.v0_raw


def _run_method(args, matrix, opts):
    """Dispatch one solve; returns (result, trace, primary_value, label)."""
    if args.method == "rqi-tridiag":
        system = matrix if isinstance(matrix, TridiagonalSystem) else tridiagonal_from_dense(matrix)
        if system is None:
            raise NonFiniteInput("rqi-tridiag needs tridiagonal generator input")
        z0 = _parse_z0(args.z0, "combination")
        result, trace = tridiag_rqi(system, z0=z0, v0=_start_vector(args.v0), **opts)
        recovered = recover_original(result)
        return recovered, trace, result.eigenvalue, "lambda_min(-Q)"
    if args.method == "rqi-general":
        dense = matrix.dense() if isinstance(matrix, TridiagonalSystem) else np.asarray(matrix)
        z0 = _parse_z0(args.z0, "safe")
        result, trace = general_rqi(dense, z0=z0, v0=_start_vector(args.v0), **opts)
        primary = float(trace.steps[-1].z)  # lambda_min(-Qc) = m - rho
        return result, trace, primary, "lambda_min(-Qc)"
    dense = matrix.dense() if isinstance(matrix, TridiagonalSystem) else np.asarray(matrix)
    z0 = _parse_z0(args.z0, None)
    z0 = None if z0 == "max-ratio" else z0
    if args.method == "alg1" or np.iscomplexobj(dense):
        if args.method == "alg2":
            print("note: complex input routes to alg1 (max-ratio undefined)", file=sys.stderr)
        result, trace = algorithm1(dense, z0=z0, negate=args.negate, **opts)
    else:
        result, trace = algorithm2(dense, z0=z0, negate=args.negate, **opts)
    label = "lambda_min(-A)" if args.negate else "rho(A)"
    return result, trace, result.eigenvalue, label


def cmd_model(args) -> int:
    params = {}
    if args.name == "triangular":
        params["rule"] = args.rule
    if args.name == "branching":
        params["alpha"] = args.alpha
    if args.name == "poisson_block" and args.block_size:
        params["block_size"] = args.block_size
    spec = models.ModelSpec(name=args.name, size=args.n, params=params)
    matrix = spec.render()
    if args.emit:
        matrixio.write_matrix(args.emit, matrix, fmt=args.format)
        print(f"wrote {args.emit}")
    if args.spec_out:
        with open(args.spec_out, "w") as fh:
            fh.write(spec.to_json() + "\n")
        print(f"wrote {args.spec_out}")
    if not args.emit and not args.spec_out:
        order = matrix.order if isinstance(matrix, TridiagonalSystem) else matrix.shape[0]
        print(f"{spec.to_json()}  (order {order})")
    return 0


def cmd_reproduce(args) -> int:
    reports = reference.run_table(args.table, max_size=args.max_size)
    gated_pass = gated_fail = 0
    for rep in reports:
        computed = "n/a" if rep.computed is None else _fmt(rep.computed)
        status = "ref-only"
        if rep.gated:
            ok = rep.passed
            status = "PASS" if ok else "FAIL"
            gated_pass += 1 if ok else 0
            gated_fail += 0 if ok else 1
        ref = _fmt(rep.reference)
        line = (f"{rep.table:<4} {rep.row:<11} {rep.cell:<21} computed={computed:<15} "
                f"reference={ref:<15} atol={rep.atol:<8g} {status}")
        if rep.note:
            line += f"  [{rep.note}]"
        print(line)
    print(f"gated cells: {gated_pass} passed, {gated_fail} failed")
    return 1 if gated_fail else 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="maxeig",
        description="Maximal eigenpair solvers: efficient initials and global shifted-inverse iteration",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    solve = sub.add_parser("solve", help="compute the maximal eigenpair of a model or matrix file")
    solve.add_argument("--model", choices=models.MODEL_NAMES)
    solve.add_argument("--n", type=int, help="model size parameter")
    solve.add_argument("--alpha", type=float, default=1.75, help="branching offspring parameter")
    solve.add_argument("--rule", default="inv_kp1", choices=sorted(models.TRIANGULAR_RULES),
                       help="triangular-model rate rule")
    solve.add_argument("--block-size", type=int, help="poisson_block block size (defaults to grid)")
    solve.add_argument("--input", help="matrix file (coordinate or TRIDIAG format)")
    solve.add_argument("--spec", help="model spec JSON file")
    solve.add_argument("--method", choices=METHODS, default="alg2")
    solve.add_argument("--tol", type=float, default=1e-10, help="relative shift-change tolerance")
    solve.add_argument("--res-tol", type=float, default=1e-8, help="relative residual tolerance")
    solve.add_argument("--max-iter", type=int, default=100)
    solve.add_argument("--steps", type=int, default=1000, help="power-iteration step count")
    solve.add_argument("--z0", help="number | rayleigh | safe | max-ratio | combination | delta1")
    solve.add_argument("--v0", choices=("efficient", "uniform"))
    solve.add_argument("--norm", choices=("l1", "l2", "l2mu"))
    solve.add_argument("--negate", action="store_true",
                       help="report lambda_min(-A) for generator-type input")
    solve.add_argument("--trace-out", help="write the iteration trace as CSV")
    solve.add_argument("--json", action="store_true", help="print the RunRecord as JSON")
    solve.set_defaults(fn=cmd_solve)

    model = sub.add_parser("model", help="render a built-in model to a matrix file")
    model.add_argument("--name", required=True, choices=models.MODEL_NAMES)
    model.add_argument("--n", type=int)
    model.add_argument("--alpha", type=float, default=1.75)
    model.add_argument("--rule", default="inv_kp1", choices=sorted(models.TRIANGULAR_RULES))
    model.add_argument("--block-size", type=int)
    model.add_argument("--emit", help="output matrix path")
    model.add_argument("--format", choices=("coord", "tridiag"),
                       help="matrix format (default: natural for the model)")
    model.add_argument("--spec-out", help="write the model spec JSON")
    model.set_defaults(fn=cmd_model)

    repro = sub.add_parser("reproduce", help="recompute a reference table and diff it")
    repro.add_argument("table", choices=reference.TABLE_IDS)
    repro.add_argument("--max-size", type=int, help="largest row size to compute")
    repro.set_defaults(fn=cmd_reproduce)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except (matrixio.parse_error, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except MaxIterationsExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONVERGENCE
    except (NonPositiveIterate, SolverBreakdown, MaxeigError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN


if __name__ == "__main__":
    sys.exit(main())
