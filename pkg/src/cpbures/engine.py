"""Small dense convex solver layer.

Two problem shapes are supported:

* AffineSpectralProblem -- minimize the largest eigenvalue of an affine
  Hermitian family D(C) = base - 2 Herm(sum_ij C_ij G_ij) over the operator
  norm unit ball ||C|| <= 1;
* SdpProblem -- generic standard-form SDP over Hermitian PSD blocks with
  real affine equality constraints and a real linear objective.

Both are reformulated as conic programs and handed to an interior-point
backend (CLARABEL, with an SCS fallback); complex data enters the backend
through cvxpy's complex-to-real embedding. The SolveReport gap contract is
the interface either way. A solver run owns its own workspace; problems and
reports are plain data and safe to share.
"""

from __future__ import annotations

import threading
import warnings
from dataclasses import dataclass
from typing import Optional

import cvxpy as cp
import numpy as np

from . import matcore
from .errors import SolverFailureError

DEFAULT_TOL = 1e-8
MAX_ITER = 10_000

STATUS_CONVERGED = "converged"
STATUS_ITER_LIMIT = "iter_limit"
STATUS_INFEASIBLE = "infeasible"

_OK_STATUSES = (cp.OPTIMAL, cp.OPTIMAL_INACCURATE)


@dataclass(frozen=True)
class SolveReport:
    """Outcome of a convex solve.

    value is the reported optimum, optimizer the witness (a matrix for
    spectral problems, a name -> matrix dict for SDPs). status 'converged'
    guarantees gap <= the tolerance the solve was asked for.
    """

    value: float
    optimizer: object
    gap: float
    iterations: int
    status: str


@dataclass(frozen=True)
class AffineSpectralProblem:
    """min over ||C|| <= 1 of lambda_max(base - 2 Herm(sum_ij C_ij G_ij)).

    base is Hermitian m x m; generators has shape (r1, r2, m, m) with
    G[i, j] the precomputed coefficient of C_ij.
    """

    base: np.ndarray
    generators: np.ndarray

    def __post_init__(self):
        base = matcore.hermitize(matcore.as_matrix(self.base))
        gen = np.asarray(self.generators, dtype=complex)
        if gen.ndim != 4 or gen.shape[2:] != base.shape:
            raise ValueError(
                f"generators have shape {gen.shape}, expected (r1, r2, m, m) "
                f"with m = {base.shape[0]}"
            )
        object.__setattr__(self, "base", base)
        object.__setattr__(self, "generators", gen)

    @property
    def ball_shape(self) -> tuple[int, int]:
        return self.generators.shape[:2]

    @property
    def dim(self) -> int:
        return self.base.shape[0]

    def objective_matrix(self, c: np.ndarray) -> np.ndarray:
        """D(C) for a single ball point C."""
        s = np.einsum("ij,ijqs->qs", np.asarray(c, dtype=complex), self.generators)
        return self.base - s - s.conj().T

    def value_at(self, c: np.ndarray) -> float:
        """Exact objective lambda_max(D(C)) at a feasible point."""
        return float(
            np.linalg.eigvalsh(matcore.hermitize(self.objective_matrix(c)))[-1]
        )

    def values_at(self, cs: np.ndarray) -> np.ndarray:
        """Vectorized value_at over a batch of ball points (N, r1, r2)."""
        s = np.einsum("nij,ijqs->nqs", np.asarray(cs, dtype=complex), self.generators)
        d = self.base[None] - s - np.conj(np.transpose(s, (0, 2, 1)))
        d = (d + np.conj(np.transpose(d, (0, 2, 1)))) / 2
        return np.linalg.eigvalsh(d)[:, -1]


def clip_to_ball(c: np.ndarray) -> np.ndarray:
    """Nearest point of the operator-norm unit ball (singular value clipping)."""
    u, s, vh = np.linalg.svd(np.asarray(c, dtype=complex), full_matrices=False)
    if s.size == 0 or s[0] <= 1.0:
        return np.asarray(c, dtype=complex)
    return (u * np.minimum(s, 1.0)) @ vh


def hermitian_basis(d: int) -> list[np.ndarray]:
    """Orthonormal Hermitian basis of M_d (diagonal units, then real/imag pairs)."""
    out = []
    for a in range(d):
        e = np.zeros((d, d), dtype=complex)
        e[a, a] = 1.0
        out.append(e)
    for a in range(d):
        for b in range(a + 1, d):
            e = np.zeros((d, d), dtype=complex)
            e[a, b] = e[b, a] = 1 / np.sqrt(2)
            out.append(e)
            e = np.zeros((d, d), dtype=complex)
            e[a, b] = 1j / np.sqrt(2)
            e[b, a] = -1j / np.sqrt(2)
            out.append(e)
    return out


def _solve_with_ladder(problem: cp.Problem, tol: float) -> tuple[float, int, str]:
    """Solve a cvxpy problem, walking down a robustness ladder.

    Returns (objective value, iterations, cvxpy status). Raises
    SolverFailureError when no backend produces a usable solution.
    """
    attempts = [
        dict(
            solver=cp.CLARABEL,
            tol_gap_abs=max(tol * 1e-2, 1e-11),
            tol_gap_rel=max(tol * 1e-2, 1e-11),
            tol_feas=max(tol * 1e-2, 1e-11),
            max_iter=min(MAX_ITER, 10_000),
        ),
        dict(solver=cp.CLARABEL),
        dict(solver=cp.SCS, eps=max(tol * 1e-1, 1e-9), max_iters=50_000),
    ]
    last_exc: Optional[Exception] = None
    for kwargs in attempts:
        try:
            with warnings.catch_warnings():
                warnings.simplefilter("ignore")
                # warm_start=False: cached parametrized problems change
                # sparsity between solves, which in-place updates reject
                value = problem.solve(warm_start=False, **kwargs)
        except Exception as exc:  # backends leak raw exceptions
            last_exc = exc
            continue
        if problem.status in _OK_STATUSES and value is not None:
            iters = getattr(problem.solver_stats, "num_iters", None) or 0
            return float(value), int(iters), problem.status
        if problem.status in (cp.INFEASIBLE, cp.INFEASIBLE_INACCURATE):
            return float("inf"), 0, cp.INFEASIBLE
        if problem.status in (cp.UNBOUNDED, cp.UNBOUNDED_INACCURATE):
            raise SolverFailureError("problem is unbounded")
    raise SolverFailureError(f"all solver attempts failed: {last_exc}")


# Compiled problems keyed by (r1, r2, m); data enters through parameters so
# repeated solves of one shape skip cvxpy canonicalization. Thread-local:
# a compiled problem carries mutable state and must not be shared mid-solve.
_SPECTRAL_CACHE = threading.local()


def _spectral_template(r1: int, r2: int, m: int):
    cache = getattr(_SPECTRAL_CACHE, "problems", None)
    if cache is None:
        cache = _SPECTRAL_CACHE.problems = {}
    key = (r1, r2, m)
    tpl = cache.get(key)
    if tpl is None:
        c_var = cp.Variable((r1, r2), complex=True)
        t_var = cp.Variable()
        g_par = cp.Parameter((m * m, r1 * r2), complex=True)
        b_par = cp.Parameter((m, m), hermitian=True)
        s = cp.reshape(g_par @ cp.vec(c_var, order="F"), (m, m), order="F")
        d = b_par - s - cp.conj(s).T
        constraints = [
            cp.bmat(
                [
                    [np.eye(r1), c_var],
                    [cp.conj(c_var).T, np.eye(r2)],
                ]
            )
            >> 0,
            t_var * np.eye(m) - d >> 0,
        ]
        tpl = (cp.Problem(cp.Minimize(t_var), constraints), c_var, g_par, b_par)
        cache[key] = tpl
    return tpl


def minimize_spectral(
    problem: AffineSpectralProblem, tol: float = DEFAULT_TOL
) -> SolveReport:
    """Globally minimize lambda_max(D(C)) over the contraction ball.

    The problem is convex (pointwise max of affine Hermitian forms over a
    spectral-norm ball), solved as an SDP. The reported value is the exact
    objective at the best feasible witness found (the projected solver
    optimizer, or C = 0 if that is better), so it is always an upper bound
    on the true optimum, within `gap` of it on converged solves.
    """
    r1, r2 = problem.ball_shape
    m = problem.dim
    prob, c_var, g_par, b_par = _spectral_template(r1, r2, m)
    # column for C_ij sits at Fortran-vec index i + r1*j
    cols = np.empty((m * m, r1 * r2), dtype=complex)
    for j in range(r2):
        for i in range(r1):
            cols[:, i + r1 * j] = problem.generators[i, j].flatten(order="F")
    g_par.value = cols
    b_par.value = problem.base
    solver_value, iters, cvx_status = _solve_with_ladder(prob, tol)

    candidates = [np.zeros((r1, r2), dtype=complex)]
    if c_var.value is not None:
        candidates.insert(0, clip_to_ball(np.asarray(c_var.value, dtype=complex)))
    values = [problem.value_at(c) for c in candidates]
    best = int(np.argmin(values))
    value = values[best]
    witness = candidates[best]

    gap = abs(value - solver_value) + max(tol * 1e-2, 1e-11)
    # converged status promises gap <= tol, independent of the backend's view
    status = STATUS_CONVERGED if gap <= tol else STATUS_ITER_LIMIT
    return SolveReport(
        value=value, optimizer=witness, gap=gap, iterations=iters, status=status
    )


class SdpProblem:
    """Standard-form SDP: Hermitian PSD blocks, real affine equalities.

    Blocks are named Hermitian matrix variables constrained PSD. Each
    equality is sum_b <A_b, X_b> = rhs with Hermitian coefficient matrices
    A_b (so the left side is real). The objective is min sum_b <C_b, X_b>.
    Build with add_block / add_equality / set_objective; treat as immutable
    once handed to solve_sdp.
    """

    def __init__(self):
        self.blocks: dict[str, int] = {}
        self.equalities: list[tuple[dict[str, np.ndarray], float]] = []
        self.objective: dict[str, np.ndarray] = {}

    def add_block(self, name: str, dim: int) -> None:
        if name in self.blocks:
            raise ValueError(f"duplicate block {name!r}")
        if dim < 1:
            raise ValueError("block dimension must be positive")
        self.blocks[name] = int(dim)

    def _check_coeffs(self, coeffs: dict[str, np.ndarray]) -> dict[str, np.ndarray]:
        out = {}
        for name, a in coeffs.items():
            if name not in self.blocks:
                raise ValueError(f"unknown block {name!r}")
            a = np.asarray(a, dtype=complex)
            d = self.blocks[name]
            if a.shape != (d, d):
                raise ValueError(
                    f"coefficient for block {name!r} is {a.shape}, expected ({d}, {d})"
                )
            out[name] = a
        return out

    def add_equality(self, coeffs: dict[str, np.ndarray], rhs: float) -> None:
        self.equalities.append((self._check_coeffs(coeffs), float(rhs)))

    def set_objective(self, coeffs: dict[str, np.ndarray]) -> None:
        self.objective = self._check_coeffs(coeffs)


def solve_sdp(problem: SdpProblem, tol: float = DEFAULT_TOL) -> SolveReport:
    """Solve a standard-form SDP, or detect infeasibility.

    status 'infeasible' is reported with value +inf and an empty optimizer.
    """
    if not problem.blocks:
        raise ValueError("SDP has no blocks")
    variables = {
        name: cp.Variable((d, d), hermitian=True)
        for name, d in problem.blocks.items()
    }
    constraints = [x >> 0 for x in variables.values()]

    n_eq = len(problem.equalities)
    if n_eq:
        # <A, X> = vecF(conj(A)) . vecF(X); stack rows per block and emit one
        # vector equality so canonicalization stays cheap.
        rhs = np.array([rhs for _, rhs in problem.equalities])
        expr = None
        for name, d in problem.blocks.items():
            rows = np.zeros((n_eq, d * d), dtype=complex)
            used = False
            for k, (coeffs, _) in enumerate(problem.equalities):
                a = coeffs.get(name)
                if a is not None:
                    rows[k] = np.conj(a).flatten(order="F")
                    used = True
            if used:
                term = rows @ cp.vec(variables[name], order="F")
                expr = term if expr is None else expr + term
        if expr is not None:
            constraints.append(cp.real(expr) == rhs)

    obj = None
    for name, c_mat in problem.objective.items():
        row = np.conj(c_mat).flatten(order="F")
        term = cp.real(row @ cp.vec(variables[name], order="F"))
        obj = term if obj is None else obj + term
    if obj is None:
        obj = cp.Constant(0.0)

    prob = cp.Problem(cp.Minimize(obj), constraints)
    value, iters, cvx_status = _solve_with_ladder(prob, tol)
    if cvx_status == cp.INFEASIBLE:
        return SolveReport(
            value=float("inf"),
            optimizer={},
            gap=float("nan"),
            iterations=iters,
            status=STATUS_INFEASIBLE,
        )
    optimizer = {
        name: matcore.hermitize(np.asarray(var.value, dtype=complex))
        for name, var in variables.items()
    }
    status = STATUS_CONVERGED if cvx_status == cp.OPTIMAL else STATUS_ITER_LIMIT
    return SolveReport(
        value=float(value),
        optimizer=optimizer,
        gap=tol,
        iterations=iters,
        status=status,
    )
