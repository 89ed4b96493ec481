"""Dense complex matrix kernel.

Hermitian eigendecomposition with a deterministic eigenvector phase
convention, operator norms, PSD tests and PSD square roots. Every function
takes and returns plain complex ndarrays; inputs are validated, never
mutated.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import NonHermitianError, NonSquareError, NotPsdError

HERM_TOL = 1e-10
PSD_TOL = 1e-8


def as_matrix(a) -> np.ndarray:
    """Coerce to a 2-D complex128 array and reject non-finite entries."""
    m = np.asarray(a, dtype=complex)
    if m.ndim != 2:
        raise ValueError(f"expected a matrix, got ndim={m.ndim}")
    if not np.all(np.isfinite(m.real)) or not np.all(np.isfinite(m.imag)):
        raise ValueError("matrix has non-finite entries")
    return m


def hermitize(h: np.ndarray) -> np.ndarray:
    """Hermitian part (H + H*)/2."""
    return (h + h.conj().T) / 2


def check_square(m: np.ndarray) -> np.ndarray:
    m = as_matrix(m)
    if m.shape[0] != m.shape[1]:
        raise NonSquareError(f"matrix is {m.shape[0]}x{m.shape[1]}, not square")
    return m


def check_hermitian(h: np.ndarray, tol: float = HERM_TOL) -> np.ndarray:
    """Validate Hermitian symmetry and return the symmetrized matrix.

    The symmetry defect is measured in operator norm relative to
    max(1, ||H||); inputs are symmetrized before use so accumulation error
    from upstream products is absorbed.
    """
    h = check_square(h)
    defect = op_norm(h - h.conj().T)
    if defect > tol * max(1.0, op_norm(h)):
        raise NonHermitianError(
            f"matrix is not Hermitian: symmetry defect {defect:.3e}"
        )
    return hermitize(h)


@dataclass(frozen=True)
class HermEig:
    """Spectral data of a Hermitian matrix.

    eigenvalues are ascending; eigenvectors holds the corresponding
    orthonormal columns with the phase convention that each column's
    largest-modulus entry is real and positive.
    """

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    def reconstruct(self) -> np.ndarray:
        u = self.eigenvectors
        return (u * self.eigenvalues) @ u.conj().T


def _fix_phases(u: np.ndarray) -> np.ndarray:
    u = u.copy()
    for k in range(u.shape[1]):
        col = u[:, k]
        idx = int(np.argmax(np.abs(col)))
        pivot = col[idx]
        if np.abs(pivot) > 0:
            u[:, k] = col * (np.abs(pivot) / pivot)
    return u


def herm_eig(h: np.ndarray, tol: float = HERM_TOL) -> HermEig:
    """Eigendecomposition of a Hermitian matrix.

    Raises NonSquareError / NonHermitianError on bad input. The
    reconstruction residual and the unitarity defect of the eigenvector
    matrix are both bounded by 1e-10 * max(1, ||H||).
    """
    h = check_hermitian(h, tol=tol)
    lam, u = np.linalg.eigh(h)
    return HermEig(eigenvalues=lam, eigenvectors=_fix_phases(u))


def op_norm(m) -> float:
    """Operator norm (largest singular value)."""
    m = as_matrix(m)
    if m.size == 0:
        return 0.0
    return float(np.linalg.norm(m, 2))


def eig_bounds(h: np.ndarray) -> tuple[float, float]:
    """(lambda_min, lambda_max) of the Hermitian part of h."""
    lam = np.linalg.eigvalsh(hermitize(as_matrix(h)))
    return float(lam[0]), float(lam[-1])


def is_psd(h: np.ndarray, tol: float = PSD_TOL) -> bool:
    """True iff lambda_min(H) >= -tol * max(1, ||H||). H must be Hermitian."""
    h = check_hermitian(h)
    lam_min, lam_max = eig_bounds(h)
    return lam_min >= -tol * max(1.0, max(abs(lam_min), abs(lam_max)))


def psd_sqrt(h: np.ndarray, tol: float = PSD_TOL) -> np.ndarray:
    """Hermitian square root of a PSD matrix.

    Eigenvalues within -tol * max(1, ||H||) of zero are clamped to zero;
    anything more negative raises NotPsdError.
    """
    h = check_hermitian(h)
    lam, u = np.linalg.eigh(h)
    scale = max(1.0, float(np.abs(lam).max(initial=0.0)))
    if lam.size and lam[0] < -tol * scale:
        raise NotPsdError(
            f"matrix is not PSD: min eigenvalue {lam[0]:.6g}"
        )
    root = np.sqrt(np.clip(lam, 0.0, None))
    return hermitize((u * root) @ u.conj().T)
