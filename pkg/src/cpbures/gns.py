"""Finite-dimensional bimodules of CP maps realized as Kraus-block stacks.

A map phi: M_n -> M_m with Kraus blocks K_1..K_r is represented in the
module C^r (x) M_{n x m}: elements are stacks x = (x_1, ..., x_r) of
n x m blocks with

    inner product   <x, y> = sum_i x_i* y_i          (an m x m matrix),
    two-sided action  a.x.b = (a x_i b)_i,

so the Kraus stack is a representing vector: <x, a x> = phi(a). Every
bounded bilinear adjointable map between two such stack modules acts as
C (x) id on the stack index for a matrix C, with module norm ||C||; those
matrices are the intertwiners below.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Optional

import numpy as np

from . import matcore
from .cpmap import CpMap
from .errors import (
    CenterNotScalarGramError,
    DimensionMismatchError,
    NonSquareError,
    NotContractionError,
)

CONTRACTION_SLACK = 1e-9
BASIS_DROP_TOL = 1e-10
CENTER_SV_CUTOFF = 1e-9


@dataclass(frozen=True)
class GnsModule:
    """Stack module C^rank (x) M_{dim_in x dim_out} with a cyclic vector.

    cyclic holds the Kraus stack (rank, dim_in, dim_out). minimal_basis,
    when filled, is an orthonormal (trace inner product) basis of the
    two-sided span of the cyclic vector, shape (dim, rank, dim_in, dim_out).
    is_minimal records whether that span is the whole stack module.
    """

    dim_in: int
    dim_out: int
    rank: int
    cyclic: np.ndarray
    minimal_basis: Optional[np.ndarray] = None
    is_minimal: bool = False

    def apply(self, a: np.ndarray) -> np.ndarray:
        """<x, a x> for the cyclic vector x (the generating map)."""
        k = self.cyclic
        return np.einsum("ipq,pr,irs->qs", np.conj(k), a, k)


@dataclass(frozen=True)
class Intertwiner:
    """A contraction C acting on stack indices (a bilinear module map)."""

    matrix: np.ndarray

    def __post_init__(self):
        c = matcore.as_matrix(self.matrix)
        if matcore.op_norm(c) > 1.0 + CONTRACTION_SLACK:
            raise NotContractionError(
                f"intertwiner norm {matcore.op_norm(c):.12f} exceeds 1"
            )
        object.__setattr__(self, "matrix", c)


def _as_contraction(c) -> np.ndarray:
    if isinstance(c, Intertwiner):
        return c.matrix
    return matcore.as_matrix(c)


def module_from_stack(blocks, dim_in: int, dim_out: int) -> GnsModule:
    """Wrap an arbitrary Kraus stack (minimal or not) as a module."""
    blocks = np.asarray(blocks, dtype=complex)
    if blocks.ndim != 3 or blocks.shape[1:] != (dim_in, dim_out):
        raise DimensionMismatchError(
            f"stack has shape {blocks.shape}, expected (r, {dim_in}, {dim_out})"
        )
    return GnsModule(
        dim_in=dim_in, dim_out=dim_out, rank=blocks.shape[0], cyclic=blocks
    )


def build_gns(phi: CpMap) -> GnsModule:
    """Stack module carrying phi, with the minimal Kraus stack as cyclic vector.

    The module itself is the full stack space (is_minimal stays False until
    minimal_basis determines otherwise); its rank is the Choi rank.
    """
    ks = phi.kraus
    return module_from_stack(ks.blocks, phi.dim_in, phi.dim_out)


def pairing(g1: GnsModule, g2: GnsModule, c) -> np.ndarray:
    """<x1, Phi x2> = sum_ij C_ij K_i^(1)* K_j^(2), an m x m matrix."""
    if (g1.dim_in, g1.dim_out) != (g2.dim_in, g2.dim_out):
        raise DimensionMismatchError("modules must share algebra dimensions")
    c = _as_contraction(c)
    if c.shape != (g1.rank, g2.rank):
        raise DimensionMismatchError(
            f"intertwiner is {c.shape}, expected ({g1.rank}, {g2.rank})"
        )
    return np.einsum("ij,iqp,jqs->ps", c, np.conj(g1.cyclic), g2.cyclic)


def stack_gram(z: np.ndarray) -> np.ndarray:
    """<z, z> = sum_i z_i* z_i."""
    return np.einsum("iqp,iqs->ps", np.conj(z), z)


def stack_norm(z: np.ndarray) -> float:
    """Module norm ||z|| = ||<z, z>||^(1/2)."""
    return float(np.sqrt(max(np.linalg.eigvalsh(matcore.hermitize(stack_gram(z)))[-1], 0.0)))


def defect_embed(g1: GnsModule, g2: GnsModule, c) -> tuple[np.ndarray, np.ndarray]:
    """Direct-sum representatives (z1, z2) induced by a contraction.

    z1 = x1 (+) 0 and z2 = (C x2) (+) (sqrt(I - C*C) x2), both stacks of
    length rank1 + rank2 in the direct-sum module. For any contraction the
    second stack again represents the second map; that identity is checked
    on a matrix-unit basis before returning.
    """
    if (g1.dim_in, g1.dim_out) != (g2.dim_in, g2.dim_out):
        raise DimensionMismatchError("modules must share algebra dimensions")
    c = _as_contraction(c)
    if c.shape != (g1.rank, g2.rank):
        raise DimensionMismatchError(
            f"intertwiner is {c.shape}, expected ({g1.rank}, {g2.rank})"
        )
    if matcore.op_norm(c) > 1.0 + CONTRACTION_SLACK:
        raise NotContractionError(
            f"intertwiner norm {matcore.op_norm(c):.12f} exceeds 1"
        )
    n, m = g1.dim_in, g1.dim_out
    defect = matcore.psd_sqrt(np.eye(g2.rank) - c.conj().T @ c)
    z1 = np.concatenate([g1.cyclic, np.zeros((g2.rank, n, m), dtype=complex)])
    top = np.einsum("ij,jpq->ipq", c, g2.cyclic)
    bottom = np.einsum("ij,jpq->ipq", defect, g2.cyclic)
    z2 = np.concatenate([top, bottom])

    target = g2.apply  # <x2, a x2>
    for i in range(n):
        for j in range(n):
            e = np.zeros((n, n), dtype=complex)
            e[i, j] = 1.0
            lhs = np.einsum("iqp,qr,irs->ps", np.conj(z2), e, z2)
            if np.abs(lhs - target(e)).max() > 1e-9 * max(1.0, stack_norm(g2.cyclic) ** 2):
                raise ArithmeticError(
                    "defect embedding failed to reproduce the second map"
                )
    return z1, z2


def _generator_stacks(g: GnsModule) -> np.ndarray:
    """All E_pq . x . E_st in lexicographic (p, q, s, t) order."""
    n, m, r = g.dim_in, g.dim_out, g.rank
    x = g.cyclic
    gens = np.zeros((n, n, m, m, r, n, m), dtype=complex)
    for p in range(n):
        for q in range(n):
            for s in range(m):
                for t in range(m):
                    gens[p, q, s, t, :, p, t] = x[:, q, s]
    return gens.reshape(n * n * m * m, r, n, m)


def minimal_basis(g: GnsModule) -> GnsModule:
    """Fill in an orthonormal basis of the two-sided span of the cyclic vector.

    Gram-Schmidt over the n^2 m^2 generator stacks in lexicographic order
    with drop tolerance 1e-10, re-orthogonalized once for stability; the
    result is deterministic. Returns a new module value.
    """
    gens = _generator_stacks(g)
    flat = gens.reshape(gens.shape[0], -1)
    basis: list[np.ndarray] = []
    for row in flat:
        v = row.copy()
        for _ in range(2):
            for b in basis:
                v -= np.vdot(b, v) * b
        norm = np.linalg.norm(v)
        if norm > BASIS_DROP_TOL * max(1.0, np.linalg.norm(row)):
            basis.append(v / norm)
    dim = len(basis)
    arr = (
        np.array(basis).reshape(dim, g.rank, g.dim_in, g.dim_out)
        if dim
        else np.zeros((0, g.rank, g.dim_in, g.dim_out), dtype=complex)
    )
    return replace(
        g,
        minimal_basis=arr,
        is_minimal=(dim == g.rank * g.dim_in * g.dim_out),
    )


def center_unit_vector(g: GnsModule) -> Optional[np.ndarray]:
    """A unit vector commuting with the algebra inside the minimal module.

    Requires dim_in == dim_out. Solves {b.y = y.b for all b, y in the
    minimal module} by null-space extraction (singular value cutoff 1e-9);
    when a nonzero solution exists its Gram matrix must be a positive
    scalar multiple of I (automatic for full matrix algebras;
    CenterNotScalarGramError otherwise signals a bug) and the normalized
    stack with <y, y> = I is returned. Returns None when the center is
    trivial.
    """
    if g.dim_in != g.dim_out:
        raise NonSquareError("center is defined for square algebras only")
    n = g.dim_in
    if g.minimal_basis is None:
        g = minimal_basis(g)
    basis = g.minimal_basis
    dim = basis.shape[0]
    if dim == 0:
        return None
    rows = []
    for a in range(n):
        for b in range(n):
            e = np.zeros((n, n), dtype=complex)
            e[a, b] = 1.0
            comm = np.einsum("pq,lIqs->lIps", e, basis) - np.einsum(
                "lIps,sq->lIpq", basis, e
            )
            rows.append(comm.reshape(dim, -1).T)
    system = np.concatenate(rows, axis=0)
    _, sv, vh = np.linalg.svd(system)
    smax = sv[0] if sv.size else 0.0
    null = [
        vh[k].conj()
        for k in range(dim)
        if k >= sv.size or sv[k] <= CENTER_SV_CUTOFF * max(1.0, smax)
    ]
    if not null:
        return None
    y = np.einsum("l,lIps->Ips", null[0], basis)
    gram = matcore.hermitize(stack_gram(y))
    lam = float(np.trace(gram).real) / n
    if lam <= 0 or np.abs(gram - lam * np.eye(n)).max() > 1e-8 * max(1.0, lam):
        raise CenterNotScalarGramError(
            "central vector has non-scalar Gram matrix"
        )
    return y / np.sqrt(lam)
