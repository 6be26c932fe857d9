"""Dense complex linear algebra, sampling, and special functions for the channel model.

Vectors and matrices are plain ``numpy`` arrays with dtype ``complex128``.
Everything here is a pure function of its inputs; random draws come from an
explicitly passed ``numpy.random.Generator``.
"""

import numpy as np


class SingularMatrixError(ValueError):
    """Raised when Gauss-Jordan elimination meets a pivot below threshold."""


class RankDeficiencyError(SingularMatrixError):
    """Raised when a channel matrix has (numerically) colliding columns."""


# Pivot moduli below this are treated as exact rank deficiency.  Channel
# gram matrices live around 1e-9 per entry, so a hit signals a bug upstream.
PIVOT_TOL = 1e-14


def sample_complex_gaussian(n: int, variance: float, rng: np.random.Generator) -> np.ndarray:
    """Draw a circularly symmetric complex Gaussian vector.

    Each entry is (x + iy)/sqrt(2) * sqrt(variance) with x, y independent
    standard normals, so E[|entry|^2] = variance.
    """
    if variance < 0:
        raise ValueError(f"variance must be >= 0, got {variance}")
    re = rng.standard_normal(n)
    im = rng.standard_normal(n)
    return np.sqrt(variance / 2.0) * (re + 1j * im)


def hermitian_gram(H: np.ndarray) -> np.ndarray:
    """Return H^H H for a tall N x M matrix (N >= M >= 1)."""
    H = np.asarray(H, dtype=np.complex128)
    if H.ndim != 2 or H.shape[0] < H.shape[1] or H.shape[1] < 1:
        raise ValueError(f"expected a tall 2-D matrix, got shape {H.shape}")
    return H.conj().T @ H


def cmat_inverse(A: np.ndarray) -> np.ndarray:
    """Invert a square complex matrix by Gauss-Jordan elimination.

    Partial pivoting on the largest modulus in each column.  Sizes here are
    tiny (M <= number of users), so robustness beats asymptotics.

    Raises:
        SingularMatrixError: pivot modulus fell below ``PIVOT_TOL``.
    """
    A = np.asarray(A, dtype=np.complex128)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {A.shape}")
    m = A.shape[0]
    aug = np.hstack([A.copy(), np.eye(m, dtype=np.complex128)])
    for col in range(m):
        pivot_row = col + int(np.argmax(np.abs(aug[col:, col])))
        pivot = aug[pivot_row, col]
        if np.abs(pivot) < PIVOT_TOL:
            raise SingularMatrixError(
                f"pivot modulus {np.abs(pivot):.3e} below {PIVOT_TOL:.0e} in column {col}"
            )
        if pivot_row != col:
            aug[[col, pivot_row]] = aug[[pivot_row, col]]
        aug[col] /= pivot
        for row in range(m):
            if row != col:
                aug[row] -= aug[row, col] * aug[col]
    return aug[:, m:]


def zf_diag(H: np.ndarray) -> np.ndarray:
    """Diagonal of (H^H H)^{-1} as positive reals.

    These are the per-user noise amplification factors of the zero-forcing
    detector; entry m equals ||g_m||^2 where g_m^H is row m of the
    pseudo-inverse H^dagger.

    Raises:
        RankDeficiencyError: the gram matrix is numerically singular,
            i.e. two users' channel vectors collide.
    """
    gram = hermitian_gram(H)
    try:
        inv = cmat_inverse(gram)
    except SingularMatrixError as exc:
        raise RankDeficiencyError(f"channel matrix is rank deficient: {exc}") from exc
    diag = np.real(np.diag(inv))
    if np.any(diag <= 0):
        raise RankDeficiencyError("non-positive diagonal in inverse gram matrix")
    return diag


def bessel_j0(x: float) -> float:
    """Bessel function of the first kind, order zero.

    Truncated power series sum_k (-1)^k (x/2)^{2k} / (k!)^2, accurate to
    ~1e-8 absolute for |x| <= 20.  The fading model only needs |x| < 1.
    """
    q = 0.25 * x * x
    term = 1.0
    total = 1.0
    for k in range(1, 41):
        term *= -q / (k * k)
        total += term
    return total
