"""Bures distance between CP maps, bounds, and the rigidity decomposition.

The distance beta(phi1, phi2) is computed from minimal Kraus stacks via the
intertwiner characterization

    beta^2 = min over ||C|| <= 1 of  || phi1(1) + phi2(1) - 2 Re(M(C)) ||,
    M(C)   = sum_ij C_ij K_i^(1)* K_j^(2),

a convex spectral-norm minimization over the contraction ball, and
independently via the CP-extension characterization (a semidefinite
program over joint extensions with the two Choi matrices pinned on the
diagonal). Closed forms for commuting diagonal states and for unitary
conjugations, a sampled feasible-point upper bound, and completely-bounded
norm bounds serve as cross-checks.
"""

from __future__ import annotations

import math
import zlib
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np

from . import engine, gns, matcore
from .cpmap import (
    CpMap,
    KrausSet,
    amplify,
    cb_norm,
    choi_from_kraus,
    compose,
    cp_norm,
    random_cp_map,
)
from .errors import (
    DimensionMismatchError,
    NonSquareError,
    NotProbabilityError,
    NotUnitaryError,
    ResidualNotCpError,
)

FORM_INTERTWINER = "intertwiner"
FORM_EXTENSION = "extension"
FORM_STATES = "closed-form-states"
FORM_UNITARY = "closed-form-unitary"
FORM_BRUTE = "brute-force-upper"


@dataclass(frozen=True)
class BuresResult:
    """A computed distance value with its witness and solve diagnostics.

    value is beta >= 0; value**2 is an exact objective evaluation at the
    witness, so value**2 >= optimum >= value**2 - report.gap on converged
    solves.
    """

    value: float
    formulation: str
    witness: Optional[np.ndarray]
    report: engine.SolveReport


def _check_pair(phi1: CpMap, phi2: CpMap) -> None:
    if (phi1.dim_in, phi1.dim_out) != (phi2.dim_in, phi2.dim_out):
        raise DimensionMismatchError(
            f"maps act on different algebras: "
            f"M_{phi1.dim_in}->M_{phi1.dim_out} vs M_{phi2.dim_in}->M_{phi2.dim_out}"
        )


def spectral_problem_from_stacks(
    blocks1: np.ndarray, blocks2: np.ndarray, n: int, m: int
) -> engine.AffineSpectralProblem:
    """Assemble base = phi1(1) + phi2(1) and generators G_ij = K_i^(1)* K_j^(2)."""
    b1 = np.asarray(blocks1, dtype=complex)
    b2 = np.asarray(blocks2, dtype=complex)
    base = np.einsum("iqp,iqs->ps", np.conj(b1), b1) + np.einsum(
        "iqp,iqs->ps", np.conj(b2), b2
    )
    gen = np.einsum("iqp,jqs->ijps", np.conj(b1), b2)
    return engine.AffineSpectralProblem(base=base, generators=gen)


def spectral_problem(phi1: CpMap, phi2: CpMap) -> engine.AffineSpectralProblem:
    _check_pair(phi1, phi2)
    return spectral_problem_from_stacks(
        phi1.kraus.blocks, phi2.kraus.blocks, phi1.dim_in, phi1.dim_out
    )


def _heuristic_contractions(
    blocks1: np.ndarray, blocks2: np.ndarray
) -> list[np.ndarray]:
    """Cheap feasible candidates: orthogonal representatives, identity pad,
    and the polar factor of the Hilbert-Schmidt overlap matrix."""
    r1, r2 = blocks1.shape[0], blocks2.shape[0]
    cands = [np.zeros((r1, r2), dtype=complex), np.eye(r1, r2, dtype=complex)]
    overlap = np.einsum("ipq,jpq->ij", np.conj(blocks1), blocks2)
    u, _, vh = np.linalg.svd(overlap, full_matrices=False)
    cands.append(u @ vh)
    return cands


def bures_intertwiner_stacks(
    blocks1, blocks2, n: int, m: int, tol: float = 1e-8
) -> BuresResult:
    """Distance from two explicit Kraus stacks (minimal or padded).

    The attainable pairing values depend only on the maps, not the stacks,
    so padded stacks give the same optimum; this entry point exists to make
    that checkable and to serve callers that already hold stacks.
    """
    blocks1 = np.asarray(blocks1, dtype=complex)
    blocks2 = np.asarray(blocks2, dtype=complex)
    problem = spectral_problem_from_stacks(blocks1, blocks2, n, m)
    report = engine.minimize_spectral(problem, tol=tol)
    candidates = _heuristic_contractions(blocks1, blocks2)
    candidates.append(np.asarray(report.optimizer, dtype=complex))
    values = [problem.value_at(c) for c in candidates]
    best = int(np.argmin(values))
    value, witness = values[best], candidates[best]
    gap = abs(value - report.value) + report.gap
    final = engine.SolveReport(
        value=value,
        optimizer=witness,
        gap=gap,
        iterations=report.iterations,
        status=report.status,
    )
    return BuresResult(
        value=math.sqrt(max(value, 0.0)),
        formulation=FORM_INTERTWINER,
        witness=witness,
        report=final,
    )


def bures_intertwiner(phi1: CpMap, phi2: CpMap, tol: float = 1e-8) -> BuresResult:
    """Bures distance via the intertwiner formulation (the main solver)."""
    _check_pair(phi1, phi2)
    return bures_intertwiner_stacks(
        phi1.kraus.blocks,
        phi2.kraus.blocks,
        phi1.dim_in,
        phi1.dim_out,
        tol=tol,
    )


def _cross_choi(za: np.ndarray, zb: np.ndarray, nm: int) -> np.ndarray:
    """Choi block of (i, j) -> <z_a, E_ij z_b> for stacks in one module."""
    fa = np.asarray(za, dtype=complex).reshape(za.shape[0], nm)
    fb = np.asarray(zb, dtype=complex).reshape(zb.shape[0], nm)
    return fa.conj().T @ fb


def _range_basis(j: np.ndarray, tol: float = 1e-10) -> np.ndarray:
    lam, v = np.linalg.eigh(matcore.hermitize(j))
    keep = lam > tol * max(float(lam[-1]), 1e-300)
    return v[:, keep]


def bures_extension(phi1: CpMap, phi2: CpMap, tol: float = 1e-8) -> BuresResult:
    """Bures distance via joint CP extensions.

    Optimizes over CP maps into M_2(M_m) whose diagonal compressions are the
    two inputs; the objective is ||phi1(1) + phi2(1) - 2 Re phi12(1)||. The
    extension Choi matrix necessarily lives on range(J1) (+) range(J2), so
    the SDP is posed on that face (restoring strict feasibility, which the
    interior-point backend needs).
    """
    _check_pair(phi1, phi2)
    n, m = phi1.dim_in, phi1.dim_out
    nm = n * m
    j1, j2 = phi1.choi, phi2.choi
    q1, q2 = _range_basis(j1), _range_basis(j2)
    p1, p2 = q1.shape[1], q2.shape[1]
    m11 = matcore.hermitize(q1.conj().T @ j1 @ q1)
    m22 = matcore.hermitize(q2.conj().T @ j2 @ q2)
    base = phi1.unit_image() + phi2.unit_image()

    prob = engine.SdpProblem()
    prob.add_block("M", p1 + p2)
    prob.add_block("S", m)
    prob.add_block("u", 1)
    for basis_el in engine.hermitian_basis(p1):
        lift = np.zeros((p1 + p2, p1 + p2), dtype=complex)
        lift[:p1, :p1] = basis_el
        rhs = float(np.real(np.vdot(basis_el, m11)))
        prob.add_equality({"M": lift}, rhs)
    for basis_el in engine.hermitian_basis(p2):
        lift = np.zeros((p1 + p2, p1 + p2), dtype=complex)
        lift[p1:, p1:] = basis_el
        rhs = float(np.real(np.vdot(basis_el, m22)))
        prob.add_equality({"M": lift}, rhs)
    # S = u I - base + 2 Herm(N), N[s,t] = sum_i X[(i,s),(i,t)],
    # X = q1 M12 q2*; the M-coefficient of <B, 2 Herm N> is the Hermitian
    # embedding of F = q1* (I_n (x) B) q2 into the off-diagonal corner.
    for basis_el in engine.hermitian_basis(m):
        f = q1.conj().T @ np.kron(np.eye(n), basis_el) @ q2
        a_b = np.zeros((p1 + p2, p1 + p2), dtype=complex)
        a_b[:p1, p1:] = f
        a_b[p1:, :p1] = f.conj().T
        rhs = -float(np.real(np.vdot(basis_el, base)))
        prob.add_equality(
            {
                "S": basis_el,
                "u": -np.trace(basis_el).real * np.eye(1),
                "M": -a_b,
            },
            rhs,
        )
    prob.set_objective({"u": np.eye(1)})
    report = engine.solve_sdp(prob, tol=tol)

    sdp_value = report.value
    m12 = report.optimizer["M"][:p1, p1:]
    witness = q1 @ m12 @ q2.conj().T

    # Exact feasible candidates through the direct-sum construction; they
    # replace the SDP answer only when strictly better (degenerate pairs).
    problem = spectral_problem(phi1, phi2)
    value, best_c = sdp_value, None
    for cand in _heuristic_contractions(phi1.kraus.blocks, phi2.kraus.blocks):
        v = problem.value_at(cand)
        if v < value:
            value, best_c = v, cand
    if best_c is not None:
        g1, g2 = gns.build_gns(phi1), gns.build_gns(phi2)
        z1, z2 = gns.defect_embed(g1, g2, best_c)
        witness = _cross_choi(z1, z2, nm)
    final = engine.SolveReport(
        value=value,
        optimizer=witness,
        gap=report.gap + abs(value - sdp_value),
        iterations=report.iterations,
        status=report.status,
    )
    return BuresResult(
        value=math.sqrt(max(value, 0.0)),
        formulation=FORM_EXTENSION,
        witness=witness,
        report=final,
    )


# ---------------------------------------------------------------------------
# Closed forms
# ---------------------------------------------------------------------------


def _check_probability(p) -> np.ndarray:
    p = np.asarray(p, dtype=float)
    if p.ndim != 1:
        raise NotProbabilityError("probability vector must be 1-D")
    if np.any(p < -1e-12) or abs(p.sum() - 1.0) > 1e-9:
        raise NotProbabilityError(
            f"not a probability vector (sum {p.sum():.12g}, min {p.min():.3g})"
        )
    return np.clip(p, 0.0, None)


def bures_states_classical(p, q) -> float:
    """sqrt(2) (1 - sum_i sqrt(p_i q_i))^(1/2) for probability vectors.

    Zero entries are allowed; the overlap extends continuously.
    """
    p, q = _check_probability(p), _check_probability(q)
    if p.shape != q.shape:
        raise NotProbabilityError("probability vectors differ in length")
    overlap = float(np.sum(np.sqrt(p * q)))
    return math.sqrt(2.0 * max(0.0, 1.0 - overlap))


def classical_state_map(p) -> CpMap:
    """Diagonal encoding of a probability vector as a CP map M_k -> C."""
    p = _check_probability(p)
    k = p.size
    return CpMap.from_choi(np.diag(p).astype(complex), k, 1)


def state_map(rho: np.ndarray) -> CpMap:
    """a -> Tr(rho a) as a CP map M_d -> C (Choi matrix = rho^T)."""
    rho = matcore.check_hermitian(matcore.as_matrix(rho), tol=1e-8)
    return CpMap.from_choi(rho.T, rho.shape[0], 1)


def bures_id_unitary(u: np.ndarray) -> float:
    """Distance between the identity map and a -> u* a u, in closed form.

    Reduces over the commutant to a complex unit-disc scalar against the
    eigenphases of u: beta^2 = 2 - 2 max(0, cos(rho)) where rho is the
    radius of the smallest arc covering all eigenphases (half the
    complement of the largest phase gap). Exact up to the eigensolver.
    """
    u = matcore.check_square(u)
    n = u.shape[0]
    if matcore.op_norm(u.conj().T @ u - np.eye(n)) > 1e-9:
        raise NotUnitaryError("matrix is not unitary within 1e-9")
    phases = np.sort(np.angle(np.linalg.eigvals(u)))
    gaps = np.diff(np.concatenate([phases, [phases[0] + 2 * np.pi]]))
    rho = (2 * np.pi - float(gaps.max())) / 2
    best = max(0.0, math.cos(rho))
    return math.sqrt(max(0.0, 2.0 - 2.0 * best))


# ---------------------------------------------------------------------------
# Sampled upper bound
# ---------------------------------------------------------------------------


def brute_force_upper(
    phi1: CpMap, phi2: CpMap, samples: int, seed: int = 0
) -> float:
    """min over sampled feasible contractions of sqrt(lambda_max(D(C))).

    Always evaluates C = 0; from two samples on, the identity pad and the
    overlap polar factor join, and the remaining budget is spent on random
    complex-normal matrices clipped to the ball (half rescaled inward).
    Deterministic for a fixed seed; an upper bound on the true distance, so
    never more than a solver gap below the reported optimum.
    """
    _check_pair(phi1, phi2)
    if samples < 1:
        raise ValueError("samples must be >= 1")
    b1, b2 = phi1.kraus.blocks, phi2.kraus.blocks
    problem = spectral_problem(phi1, phi2)
    r1, r2 = problem.ball_shape
    cands = [np.zeros((r1, r2), dtype=complex)]
    if samples >= 2:
        cands.extend(_heuristic_contractions(b1, b2)[1:])
    n_random = max(0, int(samples) - len(cands))
    if n_random:
        rng = np.random.default_rng(seed)
        raw = (
            rng.standard_normal((n_random, r1, r2))
            + 1j * rng.standard_normal((n_random, r1, r2))
        ) / np.sqrt(2)
        clipped = np.stack([engine.clip_to_ball(c) for c in raw])
        shrink = rng.uniform(0.0, 1.0, size=n_random)
        half = n_random // 2
        clipped[:half] *= shrink[:half, None, None]
        cands.extend(clipped)
    values = problem.values_at(np.stack(cands))
    return math.sqrt(max(float(values.min()), 0.0))


# ---------------------------------------------------------------------------
# Completely bounded norm bounds
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class BoundReport:
    """beta against the cb-norm bounds cb/(sqrt||phi1|| + sqrt||phi2||) <= beta <= sqrt(cb)."""

    beta: float
    cb: float
    lower: float
    upper: float
    ok: bool


def bound_report(phi1: CpMap, phi2: CpMap, tol: float = 1e-8) -> BoundReport:
    _check_pair(phi1, phi2)
    beta = bures_intertwiner(phi1, phi2, tol=tol).value
    cb = cb_norm(phi1.choi - phi2.choi, phi1.dim_in, phi1.dim_out, tol=max(tol, 1e-9))
    lower = cb / (math.sqrt(cp_norm(phi1)) + math.sqrt(cp_norm(phi2)))
    upper = math.sqrt(max(cb, 0.0))
    ok = (lower - 1e-6 <= beta) and (beta <= upper + 1e-6)
    return BoundReport(beta=beta, cb=cb, lower=lower, upper=upper, ok=ok)


# ---------------------------------------------------------------------------
# Rigidity
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class RigidityDecomposition:
    """phi(b) = c* b c + psi(b) extracted from a distance-to-identity witness.

    When beta_id < 1 the theory guarantees ||I - c|| < 1, hence an
    invertible c; psi is CP (its Choi matrix is clamped within tol of PSD)
    and may be the zero map.
    """

    c: np.ndarray
    psi: CpMap
    beta_id: float
    c_invertible: bool
    c_min_singular: float
    residual_min_eig: float


def _rigidity_once(phi: CpMap, solver_tol: float):
    n = phi.dim_in
    ident = CpMap.identity(n)
    res = bures_intertwiner(ident, phi, tol=solver_tol)
    c_row = np.asarray(res.witness, dtype=complex).reshape(1, -1)
    c = np.einsum("j,jpq->pq", c_row[0], phi.kraus.blocks)
    j_res = phi.choi - choi_from_kraus(KrausSet(n, n, c[None]))
    min_eig = float(np.linalg.eigvalsh(matcore.hermitize(j_res))[0])
    return res, c, j_res, min_eig


def rigidity_decompose(phi: CpMap, tol: float = 1e-7) -> RigidityDecomposition:
    """Split a square CP map as c*(.)c plus a CP residual via the identity witness.

    Runs the intertwiner solve against the identity map (whose module has
    rank one, so the witness is a row vector), reads off c as the paired
    combination of Kraus blocks, and subtracts its Choi matrix. Residual
    eigenvalues in (-tol, 0) are clamped; anything lower triggers one
    re-solve at a tighter tolerance before failing.
    """
    if phi.dim_in != phi.dim_out:
        raise NonSquareError("rigidity decomposition needs a square map")
    n = phi.dim_in
    res, c, j_res, min_eig = _rigidity_once(phi, solver_tol=1e-9)
    if min_eig < -tol:
        res, c, j_res, min_eig = _rigidity_once(phi, solver_tol=1e-10)
        if min_eig < -tol:
            raise ResidualNotCpError(
                f"residual Choi matrix has eigenvalue {min_eig:.3e} < -{tol:.1e}"
            )
    lam, v = np.linalg.eigh(matcore.hermitize(j_res))
    clamped = (v * np.clip(lam, 0.0, None)) @ v.conj().T
    psi = CpMap.from_choi(clamped, n, n, allow_zero=True)
    svals = np.linalg.svd(c, compute_uv=False)
    smin = float(svals.min()) if svals.size else 0.0
    return RigidityDecomposition(
        c=c,
        psi=psi,
        beta_id=res.value,
        c_invertible=smin > tol,
        c_min_singular=smin,
        residual_min_eig=min_eig,
    )


# ---------------------------------------------------------------------------
# Randomized property suites
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SuiteResult:
    name: str
    trials: int
    passed: bool
    worst_margin: float
    note: str = ""


@dataclass(frozen=True)
class SuitesReport:
    results: dict[str, SuiteResult] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.results.values())

    def worst(self) -> float:
        margins = [r.worst_margin for r in self.results.values()]
        return min(margins) if margins else math.inf


ALL_SUITES = (
    "metric",
    "ampliation",
    "composition",
    "perturbation",
    "bounds",
    "conjecture",
    "witness",
    "equivalence",
    "rigidity",
)

BetaFn = Callable[[CpMap, CpMap], float]


def _default_beta(a: CpMap, b: CpMap) -> float:
    return bures_intertwiner(a, b).value


def _rand_pair(rng, dim):
    r1, r2 = int(rng.integers(1, 3)), int(rng.integers(1, 3))
    return (
        random_cp_map(rng, dim, dim, r1),
        random_cp_map(rng, dim, dim, r2),
    )


def _add_maps(a: CpMap, b: CpMap) -> CpMap:
    return CpMap.from_choi(a.choi + b.choi, a.dim_in, a.dim_out)


def _suite_metric(rng, trials, dim, beta) -> float:
    worst = math.inf
    for _ in range(trials):
        phi, psi = _rand_pair(rng, dim)
        chi = random_cp_map(rng, dim, dim, int(rng.integers(1, 3)))
        worst = min(worst, 1e-6 - beta(phi, phi))
        worst = min(worst, 1e-6 - abs(beta(phi, psi) - beta(psi, phi)))
        worst = min(
            worst, beta(phi, psi) + beta(psi, chi) + 1e-5 - beta(phi, chi)
        )
    return worst


def _suite_ampliation(rng, trials, dim, beta) -> float:
    worst = math.inf
    for _ in range(trials):
        phi, psi = _rand_pair(rng, dim)
        d = abs(beta(phi, psi) - beta(amplify(phi, 2), amplify(psi, 2)))
        worst = min(worst, 1e-4 - d)
    return worst


def _suite_composition(rng, trials, dim, beta) -> float:
    worst = math.inf
    for _ in range(trials):
        phi1, phi2 = _rand_pair(rng, dim)
        psi1, psi2 = _rand_pair(rng, dim)
        lhs = beta(compose(psi1, phi1), compose(psi2, phi2))
        rhs = (
            math.sqrt(cp_norm(phi1)) * beta(psi1, psi2)
            + math.sqrt(cp_norm(psi2)) * beta(phi1, phi2)
        )
        worst = min(worst, rhs + 1e-5 - lhs)
    return worst


def _suite_perturbation(rng, trials, dim, beta) -> float:
    worst = math.inf
    for _ in range(trials):
        phi1, phi2 = _rand_pair(rng, dim)
        worst = min(
            worst,
            math.sqrt(cp_norm(phi2)) + 1e-6 - beta(phi1, _add_maps(phi1, phi2)),
        )
        # contractive normalizations for the norm-difference bound
        a = random_cp_map(rng, dim, dim, 2, norm=float(rng.uniform(0.2, 1.0)))
        b = random_cp_map(rng, dim, dim, 2, norm=float(rng.uniform(0.2, 1.0)))
        worst = min(
            worst, 2 * beta(a, b) + 1e-6 - abs(cp_norm(a) - cp_norm(b))
        )
    return worst


def _suite_bounds(rng, trials, dim, beta) -> float:
    worst = math.inf
    for _ in range(trials):
        phi, psi = _rand_pair(rng, dim)
        b = beta(phi, psi)
        cb = cb_norm(phi.choi - psi.choi, dim, dim)
        lower = cb / (math.sqrt(cp_norm(phi)) + math.sqrt(cp_norm(psi)))
        upper = math.sqrt(max(cb, 0.0))
        worst = min(worst, b - (lower - 1e-6))
        worst = min(worst, (upper + 1e-6) - b)
    return worst


def _suite_conjecture(rng, trials, dim, beta) -> float:
    # proven direction only: composing with states after ampliation never
    # increases the distance
    worst = math.inf
    for _ in range(trials):
        phi, psi = _rand_pair(rng, dim)
        b = beta(phi, psi)
        for k in (1, 2):
            d = k * dim
            a = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
            rho = a @ a.conj().T
            rho /= np.trace(rho).real
            sigma = state_map(rho)
            lhs = beta(compose(sigma, amplify(phi, k)), compose(sigma, amplify(psi, k)))
            worst = min(worst, b + 1e-5 - lhs)
    return worst


def _suite_witness(rng, trials, dim, beta) -> float:
    worst = math.inf
    for _ in range(trials):
        phi, psi = _rand_pair(rng, dim)
        res = bures_intertwiner(phi, psi)
        problem = spectral_problem(phi, psi)
        recomputed = math.sqrt(max(problem.value_at(res.witness), 0.0))
        worst = min(worst, res.report.gap + 1e-9 - abs(recomputed - res.value))
    return worst


def _suite_equivalence(rng, trials, dim, beta) -> float:
    worst = math.inf
    for _ in range(trials):
        phi, psi = _rand_pair(rng, dim)
        d = abs(
            bures_intertwiner(phi, psi).value - bures_extension(phi, psi).value
        )
        worst = min(worst, 1e-5 - d)
    return worst


def _suite_rigidity(rng, trials, dim, beta) -> float:
    worst = math.inf
    for _ in range(trials):
        h = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
        h = matcore.hermitize(h)
        h /= matcore.op_norm(h)
        c0 = 0.9 * np.eye(dim) + 0.05 * h
        small = random_cp_map(rng, dim, dim, 2, norm=0.05)
        phi = CpMap.from_kraus(
            np.concatenate([c0[None], small.kraus.blocks]), dim, dim
        )
        rd = rigidity_decompose(phi)
        worst = min(worst, 1.0 - 1e-3 - rd.beta_id)
        worst = min(worst, rd.residual_min_eig + 1e-7)
        if rd.beta_id < 1.0 - 1e-3:
            module = gns.minimal_basis(gns.build_gns(phi))
            center = gns.center_unit_vector(module)
            worst = min(worst, math.inf if center is not None else -1.0)
    return worst


_SUITE_FNS = {
    "metric": _suite_metric,
    "ampliation": _suite_ampliation,
    "composition": _suite_composition,
    "perturbation": _suite_perturbation,
    "bounds": _suite_bounds,
    "conjecture": _suite_conjecture,
    "witness": _suite_witness,
    "equivalence": _suite_equivalence,
    "rigidity": _suite_rigidity,
}


def property_suites(
    seed: int = 0,
    trials: int = 50,
    dim: int = 2,
    beta_fn: Optional[BetaFn] = None,
    suites: Optional[Sequence[str]] = None,
) -> SuitesReport:
    """Run the randomized invariant suites and report pass/fail with margins.

    A margin is slack + bound - value for each checked inequality;
    nonnegative means pass, and worst_margin is the minimum over a suite's
    trials. beta_fn replaces the distance computation (the hook the
    harness self-test uses to verify that corrupted values are flagged).
    Failures are data, not exceptions. trials = 0 passes vacuously.
    """
    beta = beta_fn or _default_beta
    names = tuple(suites) if suites is not None else ALL_SUITES
    results = {}
    for name in names:
        fn = _SUITE_FNS.get(name)
        if fn is None:
            raise ValueError(f"unknown suite {name!r}")
        rng = np.random.default_rng([seed, zlib.crc32(name.encode())])
        worst = fn(rng, int(trials), dim, beta) if trials > 0 else math.inf
        results[name] = SuiteResult(
            name=name,
            trials=int(trials),
            passed=bool(worst >= 0),
            worst_margin=float(worst),
        )
    return SuitesReport(results=results)
