"""Command-line front end.

Subcommands: bures, cbnorm, bounds, rigidity, verify, suite, matrix.
CP maps are read from JSON files ({"dim_in", "dim_out", "kraus"|"choi"},
complex scalars as [re, im] pairs, matrices row-major). Reports are JSON on
stdout or --output; `matrix` emits CSV. Exit codes: 0 success, 2 validation
or parse error, 3 solver failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
import time
from dataclasses import dataclass, field
from importlib import resources

import numpy as np

from . import bures as bures_mod
from . import cpmap
from .errors import (
    CpBuresError,
    ParseError,
    SolverFailureError,
    ValidationError,
)

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_SOLVER = 3


@dataclass
class JobSpec:
    command: str
    inputs: list[str] = field(default_factory=list)
    formulation: str = "auto"
    tol: float = 1e-8
    seed: int = 0
    trials: int = 50
    output: str | None = None


def fixtures_dir():
    """Path-like handle on the shipped example-map fixtures."""
    return resources.files("cpbures").joinpath("fixtures")


def _load_map(path: str) -> cpmap.CpMap:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            data = json.load(fh)
    except OSError as exc:
        raise ParseError(f"{path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: invalid JSON: {exc}") from exc
    try:
        return cpmap.from_json_dict(data)
    except (ParseError, ValidationError) as exc:
        raise type(exc)(f"{path}: {exc}") from exc


def _matrix_json(mat: np.ndarray) -> list:
    return cpmap._matrix_to_pairs(np.asarray(mat, dtype=complex))


def _need_inputs(job: JobSpec, count: int) -> None:
    if len(job.inputs) != count:
        raise ValidationError(
            f"command {job.command!r} needs {count} input file(s), "
            f"got {len(job.inputs)}"
        )


def _cmd_bures(job: JobSpec) -> dict:
    _need_inputs(job, 2)
    a, b = (_load_map(p) for p in job.inputs)
    out: dict = {}
    if job.formulation in ("intertwiner", "auto"):
        res_i = bures_mod.bures_intertwiner(a, b, tol=job.tol)
        out["intertwiner"] = res_i.value
        out["gap"] = res_i.report.gap
        out["witness"] = _matrix_json(res_i.witness)
    if job.formulation in ("extension", "auto"):
        res_e = bures_mod.bures_extension(a, b, tol=job.tol)
        out["extension"] = res_e.value
        if job.formulation == "extension":
            out["gap"] = res_e.report.gap
            out["witness"] = _matrix_json(res_e.witness)
    if job.formulation == "auto":
        out["difference"] = abs(out["intertwiner"] - out["extension"])
        out["value"] = out["intertwiner"]
    else:
        out["value"] = out.get("intertwiner", out.get("extension"))
    return out


def _cmd_cbnorm(job: JobSpec) -> dict:
    _need_inputs(job, 2)
    a, b = (_load_map(p) for p in job.inputs)
    value = cpmap.cb_norm_diff(a, b, tol=max(job.tol, 1e-9))
    return {"value": value, "gap": max(job.tol, 1e-9)}


def _cmd_bounds(job: JobSpec) -> dict:
    _need_inputs(job, 2)
    a, b = (_load_map(p) for p in job.inputs)
    rep = bures_mod.bound_report(a, b, tol=job.tol)
    return {
        "value": rep.beta,
        "beta": rep.beta,
        "cb": rep.cb,
        "lower": rep.lower,
        "upper": rep.upper,
        "ok": rep.ok,
    }


def _cmd_rigidity(job: JobSpec) -> dict:
    _need_inputs(job, 1)
    phi = _load_map(job.inputs[0])
    rd = bures_mod.rigidity_decompose(phi)
    return {
        "value": rd.beta_id,
        "beta_id": rd.beta_id,
        "c": _matrix_json(rd.c),
        "c_invertible": rd.c_invertible,
        "c_min_singular": rd.c_min_singular,
        "residual_min_eig": rd.residual_min_eig,
        "psi_rank": rd.psi.kraus_rank,
    }


def _cmd_verify(job: JobSpec) -> dict:
    _need_inputs(job, 1)
    phi = _load_map(job.inputs[0])
    return {
        "valid": True,
        "dim_in": phi.dim_in,
        "dim_out": phi.dim_out,
        "kraus_rank": phi.kraus_rank,
        "cp_norm": cpmap.cp_norm(phi),
    }


def _cmd_suite(job: JobSpec) -> dict:
    report = bures_mod.property_suites(seed=job.seed, trials=job.trials)
    return {
        "passed": report.passed,
        "suites": {
            name: {
                "passed": r.passed,
                "worst_margin": r.worst_margin,
                "trials": r.trials,
            }
            for name, r in report.results.items()
        },
    }


def batch_matrix(files: list[str], tol: float = 1e-8) -> str:
    """Symmetric CSV of pairwise distances; header row holds the file names."""
    if len(files) < 2:
        raise ValidationError("matrix needs at least two input files")
    maps = [_load_map(p) for p in files]
    k = len(maps)
    vals = np.zeros((k, k))
    for i in range(k):
        vals[i, i] = bures_mod.bures_intertwiner(maps[i], maps[i], tol=tol).value
        for j in range(i + 1, k):
            vals[i, j] = vals[j, i] = bures_mod.bures_intertwiner(
                maps[i], maps[j], tol=tol
            ).value
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow([""] + list(files))
    for i, name in enumerate(files):
        writer.writerow([name] + [repr(float(v)) for v in vals[i]])
    return buf.getvalue()


_COMMANDS = {
    "bures": _cmd_bures,
    "cbnorm": _cmd_cbnorm,
    "bounds": _cmd_bounds,
    "rigidity": _cmd_rigidity,
    "verify": _cmd_verify,
    "suite": _cmd_suite,
}


def run(job: JobSpec) -> tuple[int, str]:
    """Execute a job; returns (exit code, rendered report text)."""
    start = time.perf_counter()
    try:
        if job.command == "matrix":
            return EXIT_OK, batch_matrix(job.inputs, tol=job.tol)
        handler = _COMMANDS.get(job.command)
        if handler is None:
            raise ValidationError(f"unknown command {job.command!r}")
        payload = handler(job)
    except (ParseError, ValidationError) as exc:
        report = {"command": job.command, "inputs": job.inputs, "error": str(exc)}
        return EXIT_VALIDATION, json.dumps(report, indent=2)
    except SolverFailureError as exc:
        report = {"command": job.command, "inputs": job.inputs, "error": str(exc)}
        return EXIT_SOLVER, json.dumps(report, indent=2)
    except CpBuresError as exc:
        report = {"command": job.command, "inputs": job.inputs, "error": str(exc)}
        return EXIT_VALIDATION, json.dumps(report, indent=2)
    elapsed_ms = (time.perf_counter() - start) * 1000.0
    report = {
        "command": job.command,
        "inputs": job.inputs,
        "formulation": job.formulation if job.command == "bures" else None,
        "elapsed_ms": elapsed_ms,
    }
    report.update(payload)
    return EXIT_OK, json.dumps(report, indent=2)


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cpbures",
        description="Bures distance between completely positive maps",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, n_inputs):
        if n_inputs:
            p.add_argument("inputs", nargs=n_inputs, metavar="FILE")
        p.add_argument("--tol", type=float, default=1e-8)
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--output", default=None)

    p = sub.add_parser("bures", help="distance between two maps")
    common(p, 2)
    p.add_argument(
        "--formulation",
        choices=("intertwiner", "extension", "auto"),
        default="auto",
    )
    common(sub.add_parser("cbnorm", help="cb norm of the difference"), 2)
    common(sub.add_parser("bounds", help="cb-norm bounds on the distance"), 2)
    common(sub.add_parser("rigidity", help="near-identity decomposition"), 1)
    common(sub.add_parser("verify", help="validate a map file"), 1)
    p = sub.add_parser("suite", help="randomized property suites")
    common(p, 0)
    p.add_argument("--trials", type=int, default=50)
    p = sub.add_parser("matrix", help="pairwise distance matrix (CSV)")
    p.add_argument("inputs", nargs="+", metavar="FILE")
    p.add_argument("--tol", type=float, default=1e-8)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--output", default=None)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    job = JobSpec(
        command=args.command,
        inputs=list(getattr(args, "inputs", []) or []),
        formulation=getattr(args, "formulation", "auto"),
        tol=args.tol,
        seed=args.seed,
        trials=getattr(args, "trials", 50),
        output=args.output,
    )
    if job.tol <= 0:
        print("tol must be positive", file=sys.stderr)
        return EXIT_VALIDATION
    code, text = run(job)
    if job.output:
        with open(job.output, "w", encoding="utf-8") as fh:
            fh.write(text)
            if not text.endswith("\n"):
                fh.write("\n")
    else:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")
    return code


if __name__ == "__main__":
    raise SystemExit(main())
