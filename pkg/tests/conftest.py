import numpy as np

from cpbures.cpmap import CpMap

E11 = np.array([[1, 0], [0, 0]], dtype=complex)
E12 = np.array([[0, 1], [0, 0]], dtype=complex)


def transpose_gap_pair():
    """phi1([a]) = [[a11+2a22, a21],[a12, a22+2a11]], phi2([a]) = diag(2a22, 2a11).

    Their difference is the transpose map; the pair separates the level-1
    norm, the squared distance, and the cb norm (1 < beta^2 < 2).
    """
    phi1 = CpMap.from_kraus(
        np.stack(
            [
                np.array([[1, 0], [0, 0]]),
                np.array([[0, 0], [0, 1]]),
                np.sqrt(1.5) * np.array([[0, 1], [1, 0]]),
                np.sqrt(0.5) * np.array([[0, 1], [-1, 0]]),
            ]
        ).astype(complex),
        2,
        2,
    )
    phi2 = CpMap.from_kraus(
        np.stack(
            [
                np.sqrt(2) * np.array([[0, 0], [1, 0]]),
                np.sqrt(2) * np.array([[0, 1], [0, 0]]),
            ]
        ).astype(complex),
        2,
        2,
    )
    return phi1, phi2


def corner_pair():
    """a -> e11* a e11 and a -> e12* a e12 on M_2."""
    return (
        CpMap.from_kraus(E11[None], 2, 2),
        CpMap.from_kraus(E12[None], 2, 2),
    )


def haar_unitary(rng, n):
    z = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    q, r = np.linalg.qr(z)
    return q * (np.diag(r) / np.abs(np.diag(r)))
