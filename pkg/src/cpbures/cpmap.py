"""Completely positive maps M_n -> M_m in Choi form with cached Kraus sets.

Conventions used throughout the package (and in the JSON schema):

* Kraus action:  phi(a) = sum_i K_i* a K_i  with K_i an n x m block.
* Choi matrix:   J(phi) = sum_{ij} E_ij (x) phi(E_ij), an (nm) x (nm)
  Hermitian matrix, PSD exactly when phi is completely positive. Index
  pairs are flattened row-major: (i, s) -> i*m + s.

Under these conventions J = sum_k w_k w_k* where w_k is the row-major
flattening of conj(K_k).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import matcore
from .errors import (
    DimensionMismatchError,
    NotPsdError,
    ZeroMapError,
)

CHOI_PSD_TOL = 1e-8
KRAUS_RANK_TOL = 1e-10


@dataclass(frozen=True)
class KrausSet:
    """An ordered family of Kraus blocks K_i, each dim_in x dim_out."""

    dim_in: int
    dim_out: int
    blocks: np.ndarray  # shape (r, dim_in, dim_out)

    def __post_init__(self):
        b = np.asarray(self.blocks, dtype=complex)
        if b.ndim != 3 or b.shape[1:] != (self.dim_in, self.dim_out):
            raise DimensionMismatchError(
                f"Kraus blocks have shape {b.shape}, expected "
                f"(r, {self.dim_in}, {self.dim_out})"
            )
        object.__setattr__(self, "blocks", b)

    @property
    def rank(self) -> int:
        return self.blocks.shape[0]


def _choi_from_blocks(blocks: np.ndarray, n: int, m: int) -> np.ndarray:
    w = np.conj(blocks).reshape(blocks.shape[0], n * m)
    return np.einsum("ka,kb->ab", w, w.conj())


def choi_from_kraus(ks: KrausSet) -> np.ndarray:
    """Choi matrix of the map represented by a Kraus set."""
    return _choi_from_blocks(ks.blocks, ks.dim_in, ks.dim_out)


def kraus_from_choi(
    choi: np.ndarray, dim_in: int, dim_out: int, tol: float = KRAUS_RANK_TOL
) -> KrausSet:
    """Minimal Kraus set of a PSD Choi matrix.

    Blocks are ordered by descending Choi eigenvalue and inherit the
    deterministic eigenvector phase convention, so extraction is
    reproducible. Eigenvalues <= tol * lambda_max are dropped.

    Raises NotPsdError for significantly negative eigenvalues and
    ZeroMapError when the matrix is essentially zero.
    """
    n, m = dim_in, dim_out
    choi = matcore.as_matrix(choi)
    if choi.shape != (n * m, n * m):
        raise DimensionMismatchError(
            f"Choi matrix is {choi.shape}, expected ({n * m}, {n * m})"
        )
    eig = matcore.herm_eig(choi)
    lam, u = eig.eigenvalues, eig.eigenvectors
    lam_max = float(lam[-1]) if lam.size else 0.0
    if lam_max <= 1e-12:
        raise ZeroMapError("Choi matrix is zero (or indistinguishable from it)")
    if lam[0] < -CHOI_PSD_TOL * max(1.0, lam_max):
        raise NotPsdError(f"Choi matrix is not PSD: min eigenvalue {lam[0]:.6g}")
    keep = np.nonzero(lam > tol * lam_max)[0][::-1]  # descending
    blocks = np.stack(
        [np.conj((np.sqrt(lam[k]) * u[:, k]).reshape(n, m)) for k in keep]
    )
    return KrausSet(dim_in=n, dim_out=m, blocks=blocks)


def apply_choi(choi: np.ndarray, dim_in: int, dim_out: int, a: np.ndarray) -> np.ndarray:
    """Evaluate the (not necessarily CP) map with the given Choi matrix at a."""
    n, m = dim_in, dim_out
    a = matcore.as_matrix(a)
    if a.shape != (n, n):
        raise DimensionMismatchError(f"argument is {a.shape}, expected ({n}, {n})")
    jr = np.asarray(choi, dtype=complex).reshape(n, m, n, m)
    return np.einsum("ij,isjt->st", a, jr)


class CpMap:
    """A nonzero CP map M_n -> M_m, immutable after construction.

    The Choi matrix is validated (Hermitian, PSD within 1e-8, nonzero) and a
    minimal Kraus set is extracted eagerly, so instances may be shared
    across threads freely.
    """

    __slots__ = ("_choi", "_kraus", "dim_in", "dim_out")

    def __init__(
        self,
        choi: np.ndarray,
        dim_in: int,
        dim_out: int,
        *,
        allow_zero: bool = False,
        rank_tol: float = KRAUS_RANK_TOL,
    ):
        n, m = int(dim_in), int(dim_out)
        if n < 1 or m < 1:
            raise DimensionMismatchError("dimensions must be positive")
        choi = matcore.as_matrix(choi)
        if choi.shape != (n * m, n * m):
            raise DimensionMismatchError(
                f"Choi matrix is {choi.shape}, expected ({n * m}, {n * m})"
            )
        lam_min, lam_max = matcore.eig_bounds(choi)
        if lam_min < -CHOI_PSD_TOL * max(1.0, abs(lam_max)):
            raise NotPsdError(
                f"Choi matrix is not PSD: min eigenvalue {lam_min:.6g}"
            )
        herm_defect = matcore.op_norm(choi - choi.conj().T)
        choi = matcore.hermitize(choi)
        if herm_defect > 1e-8 * max(1.0, abs(lam_max)):
            raise NotPsdError(
                f"Choi matrix is not Hermitian: defect {herm_defect:.3e}"
            )
        object.__setattr__(self, "dim_in", n)
        object.__setattr__(self, "dim_out", m)
        object.__setattr__(self, "_choi", choi)
        if lam_max <= 1e-12:
            if not allow_zero:
                raise ZeroMapError("zero CP maps are not admitted")
            kraus = KrausSet(n, m, np.zeros((0, n, m), dtype=complex))
        else:
            kraus = kraus_from_choi(choi, n, m, tol=rank_tol)
        object.__setattr__(self, "_kraus", kraus)

    def __setattr__(self, *_):
        raise AttributeError("CpMap is immutable")

    @classmethod
    def from_choi(cls, choi, dim_in: int, dim_out: int, **kw) -> "CpMap":
        return cls(choi, dim_in, dim_out, **kw)

    @classmethod
    def from_kraus(cls, blocks, dim_in: int, dim_out: int, **kw) -> "CpMap":
        """Build from Kraus blocks (r, dim_in, dim_out).

        The stored Kraus cache is re-minimized from the Choi matrix, so
        linearly dependent or zero input blocks are harmless.
        """
        ks = KrausSet(dim_in, dim_out, np.asarray(blocks, dtype=complex))
        return cls(choi_from_kraus(ks), dim_in, dim_out, **kw)

    @classmethod
    def identity(cls, n: int) -> "CpMap":
        return cls.from_kraus(np.eye(n, dtype=complex)[None], n, n)

    @property
    def choi(self) -> np.ndarray:
        return self._choi.copy()

    @property
    def kraus(self) -> KrausSet:
        return self._kraus

    @property
    def kraus_rank(self) -> int:
        return self._kraus.rank

    @property
    def is_zero(self) -> bool:
        return self._kraus.rank == 0

    def apply(self, a: np.ndarray) -> np.ndarray:
        """phi(a) = sum_i K_i* a K_i."""
        a = matcore.as_matrix(a)
        if a.shape != (self.dim_in, self.dim_in):
            raise DimensionMismatchError(
                f"argument is {a.shape}, expected ({self.dim_in}, {self.dim_in})"
            )
        k = self._kraus.blocks
        if k.shape[0] == 0:
            return np.zeros((self.dim_out, self.dim_out), dtype=complex)
        return np.einsum("ipq,pr,irs->qs", np.conj(k), a, k)

    __call__ = apply

    def unit_image(self) -> np.ndarray:
        """phi(1) = sum_i K_i* K_i."""
        return self.apply(np.eye(self.dim_in))

    def __repr__(self):
        return (
            f"CpMap(M_{self.dim_in} -> M_{self.dim_out}, "
            f"rank={self.kraus_rank})"
        )


def apply(phi: CpMap, a: np.ndarray) -> np.ndarray:
    return phi.apply(a)


def compose(psi: CpMap, phi: CpMap) -> CpMap:
    """psi o phi for phi: M_n -> M_m and psi: M_m -> M_p.

    Kraus blocks of the composite are the products K_i^phi K_j^psi,
    re-minimized through the Choi round trip.
    """
    if phi.dim_out != psi.dim_in:
        raise DimensionMismatchError(
            f"cannot compose M_{phi.dim_in}->M_{phi.dim_out} "
            f"with M_{psi.dim_in}->M_{psi.dim_out}"
        )
    kp = phi.kraus.blocks
    kq = psi.kraus.blocks
    prods = np.einsum("ipq,jqs->ijps", kp, kq).reshape(
        -1, phi.dim_in, psi.dim_out
    )
    return CpMap.from_kraus(prods, phi.dim_in, psi.dim_out)


def amplify(phi: CpMap, k: int) -> CpMap:
    """Entrywise ampliation phi_k: M_k(M_n) -> M_k(M_m).

    The ampliation factor is the outer tensor index: Kraus blocks of phi_k
    are I_k (x) K_i.
    """
    k = int(k)
    if k < 1:
        raise ValueError("ampliation order must be >= 1")
    if k == 1:
        return phi
    eye = np.eye(k, dtype=complex)
    blocks = np.stack([np.kron(eye, b) for b in phi.kraus.blocks])
    return CpMap.from_kraus(blocks, k * phi.dim_in, k * phi.dim_out)


def cp_norm(phi: CpMap) -> float:
    """||phi|| = ||phi(1)|| for CP maps."""
    return matcore.op_norm(phi.unit_image())


def map_norm_sampled(
    choi: np.ndarray,
    dim_in: int,
    dim_out: int,
    samples: int = 2000,
    seed: int = 0,
) -> float:
    """Sampled lower estimate of the level-1 operator norm sup ||Phi(a)||, ||a|| <= 1.

    Maximizes over random unit-norm inputs (plus the identity); converges
    from below as samples grow.
    """
    n = dim_in
    rng = np.random.default_rng(seed)
    best = matcore.op_norm(apply_choi(choi, dim_in, dim_out, np.eye(n)))
    for _ in range(int(samples)):
        a = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
        a /= matcore.op_norm(a)
        best = max(best, matcore.op_norm(apply_choi(choi, dim_in, dim_out, a)))
    return best


def cb_norm(
    choi: np.ndarray, dim_in: int, dim_out: int, tol: float = 1e-7
) -> float:
    """Completely bounded norm of the Hermitian-Choi map Phi: M_n -> M_m.

    The input need not be CP, only Hermiticity-preserving (Hermitian Choi
    matrix); differences of CP maps are the intended use. Computed as the
    completely bounded trace norm of the trace-duality adjoint via the
    standard semidefinite program, so the value carries the solver's gap
    (<= tol relative on converged solves).
    """
    from . import engine  # deferred: engine has no cpmap dependency

    n, m = int(dim_in), int(dim_out)
    choi = matcore.check_hermitian(
        matcore.as_matrix(choi), tol=1e-8
    )
    if choi.shape != (n * m, n * m):
        raise DimensionMismatchError(
            f"Choi matrix is {choi.shape}, expected ({n * m}, {n * m})"
        )
    # Trace-dual Psi: M_m -> M_n; for Hermitian J its Choi matrix is the
    # factor-swapped complex conjugate.
    j_dual = np.conj(
        np.transpose(choi.reshape(n, m, n, m), (1, 0, 3, 2))
    ).reshape(m * n, m * n)

    prob = engine.SdpProblem()
    mn = m * n
    prob.add_block("Z", 2 * mn)
    prob.add_block("W0", m)
    prob.add_block("W1", m)
    prob.add_block("u0", 1)
    prob.add_block("u1", 1)
    # Off-diagonal block of Z is pinned to -J_dual.
    for a in range(mn):
        for b in range(mn):
            target = -j_dual[a, b]
            re = np.zeros((2 * mn, 2 * mn), dtype=complex)
            re[a, mn + b] = 0.5
            re[mn + b, a] = 0.5
            prob.add_equality({"Z": re}, float(target.real))
            im = np.zeros((2 * mn, 2 * mn), dtype=complex)
            im[a, mn + b] = 0.5j
            im[mn + b, a] = -0.5j
            prob.add_equality({"Z": im}, float(target.imag))
    # W_k = u_k I - Tr_out(Z_kk); Tr_out is the partial trace over the
    # output factor of the dual map (dimension n, the inner index).
    for k, wname, uname in ((0, "W0", "u0"), (1, "W1", "u1")):
        off = k * mn
        for basis in engine.hermitian_basis(m):
            lift = np.zeros((2 * mn, 2 * mn), dtype=complex)
            lift[off : off + mn, off : off + mn] = np.kron(basis, np.eye(n))
            prob.add_equality(
                {
                    wname: basis,
                    uname: -np.trace(basis).real * np.eye(1),
                    "Z": lift,
                },
                0.0,
            )
    prob.set_objective({"u0": 0.5 * np.eye(1), "u1": 0.5 * np.eye(1)})
    report = engine.solve_sdp(prob, tol=tol)
    return float(report.value)


def cb_norm_diff(phi1: CpMap, phi2: CpMap, tol: float = 1e-7) -> float:
    """||phi1 - phi2||_cb."""
    if (phi1.dim_in, phi1.dim_out) != (phi2.dim_in, phi2.dim_out):
        raise DimensionMismatchError("maps must share dimensions")
    return cb_norm(phi1.choi - phi2.choi, phi1.dim_in, phi1.dim_out, tol=tol)


def random_cp_map(
    rng: np.random.Generator,
    dim_in: int,
    dim_out: int,
    rank: int,
    norm: float | None = None,
) -> CpMap:
    """Random CP map with complex unit-normal Kraus blocks.

    Used by the randomized suites; fully determined by the generator state.
    If norm is given the map is rescaled so that ||phi(1)|| equals it.
    """
    blocks = (
        rng.standard_normal((rank, dim_in, dim_out))
        + 1j * rng.standard_normal((rank, dim_in, dim_out))
    ) / np.sqrt(2)
    phi = CpMap.from_kraus(blocks, dim_in, dim_out)
    if norm is not None:
        scale = np.sqrt(norm / cp_norm(phi))
        phi = CpMap.from_kraus(scale * phi.kraus.blocks, dim_in, dim_out)
    return phi


# ---------------------------------------------------------------------------
# JSON schema: {"dim_in": n, "dim_out": m, "kraus": [...]} or {"choi": ...};
# complex scalars are [re, im] pairs, matrices are row-major nested lists.
# ---------------------------------------------------------------------------


def _matrix_to_pairs(mat: np.ndarray) -> list:
    return [[[float(z.real), float(z.imag)] for z in row] for row in mat]


def _pairs_to_matrix(rows, what: str) -> np.ndarray:
    from .errors import ParseError

    try:
        arr = np.asarray(rows, dtype=float)
    except (TypeError, ValueError) as exc:
        raise ParseError(f"{what}: entries must be [re, im] pairs") from exc
    if arr.ndim != 3 or arr.shape[2] != 2:
        raise ParseError(f"{what}: expected a nested list of [re, im] pairs")
    return arr[..., 0] + 1j * arr[..., 1]


def to_json_dict(phi: CpMap, form: str = "kraus") -> dict:
    """Serialize a CpMap. form is 'kraus' or 'choi'."""
    d = {"dim_in": phi.dim_in, "dim_out": phi.dim_out}
    if form == "kraus":
        d["kraus"] = [_matrix_to_pairs(b) for b in phi.kraus.blocks]
    elif form == "choi":
        d["choi"] = _matrix_to_pairs(phi.choi)
    else:
        raise ValueError(f"unknown form {form!r}")
    return d


def from_json_dict(d: dict) -> CpMap:
    """Parse the JSON object schema into a validated CpMap."""
    from .errors import ParseError, ValidationError

    if not isinstance(d, dict):
        raise ParseError("top-level JSON value must be an object")
    try:
        n = int(d["dim_in"])
        m = int(d["dim_out"])
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError("missing or malformed dim_in / dim_out") from exc
    has_kraus = "kraus" in d
    has_choi = "choi" in d
    if has_kraus == has_choi:
        raise ParseError("exactly one of 'kraus' or 'choi' must be present")
    try:
        if has_kraus:
            blocks = np.stack(
                [_pairs_to_matrix(b, "kraus block") for b in d["kraus"]]
            )
            return CpMap.from_kraus(blocks, n, m)
        choi = _pairs_to_matrix(d["choi"], "choi")
        return CpMap.from_choi(choi, n, m)
    except ParseError:
        raise
    except (
        NotPsdError,
        ZeroMapError,
        DimensionMismatchError,
        ValueError,
    ) as exc:
        raise ValidationError(str(exc)) from exc
