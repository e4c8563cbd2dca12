"""Dense linear-algebra kernel: uncentered covariance, SVD, least-singular subspace.

The SVD itself is LAPACK's (via numpy); everything around it (sign
convention, subspace selection, gap check) lives here.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DegenerateGap, NonPositiveVariance, NumericalFailure

GAP_TOL = 1e-12


def _as_matrix(z) -> np.ndarray:
    values = getattr(z, "values", z)
    return np.asarray(values, dtype=np.float64)


@dataclass(frozen=True, eq=False)
class SvdResult:
    left_vectors: np.ndarray  # n x n
    singular_values: np.ndarray  # min(n, N), non-increasing
    right_vectors: np.ndarray  # N x min(n, N)

    @property
    def n(self) -> int:
        return self.left_vectors.shape[0]

    def spectrum(self) -> np.ndarray:
        """Singular values padded with zeros to length n (one per left vector)."""
        s = self.singular_values
        return np.concatenate([s, np.zeros(self.n - s.shape[0])])

    def reconstruct(self) -> np.ndarray:
        k = self.singular_values.shape[0]
        return (self.left_vectors[:, :k] * self.singular_values) @ self.right_vectors.T


@dataclass(frozen=True, eq=False)
class DiagonalScaling:
    """Diagonal Cholesky factor of a diagonal error covariance."""

    std_devs: np.ndarray

    def __post_init__(self):
        std = np.array(self.std_devs, dtype=np.float64, copy=True)
        if std.ndim != 1:
            raise ValueError("std_devs must be 1-D")
        if not (np.all(np.isfinite(std)) and np.all(std > 0)):
            raise NonPositiveVariance("standard deviations must be finite and > 0")
        std.setflags(write=False)
        object.__setattr__(self, "std_devs", std)

    @property
    def variances(self) -> np.ndarray:
        return self.std_devs**2

    def factor(self) -> np.ndarray:
        return np.diag(self.std_devs)

    def scaled(self, c: float) -> "DiagonalScaling":
        return DiagonalScaling(self.std_devs * c)

    def reciprocal(self) -> "DiagonalScaling":
        return DiagonalScaling(1.0 / self.std_devs)


def covariance(z) -> np.ndarray:
    """Uncentered, unnormalized Z Z^T."""
    z = _as_matrix(z)
    return z @ z.T


def _fix_signs(u: np.ndarray, vt: np.ndarray) -> None:
    """Flip (u_k, v_k) pairs in place so each left vector's first nonzero entry is >= 0."""
    k = vt.shape[0]
    nonzero = u != 0
    first = np.argmax(nonzero, axis=0)
    lead = u[first, np.arange(u.shape[1])]
    flip = lead < 0
    u[:, flip] *= -1
    vt[flip[:k]] *= -1


def svd(z) -> SvdResult:
    """Full left basis, thin right basis, deterministic signs."""
    z = _as_matrix(z)
    if z.ndim != 2 or min(z.shape) < 1:
        raise ValueError(f"svd needs a non-empty 2-D matrix, got shape {z.shape}")
    if not np.all(np.isfinite(z)):
        raise ValueError("svd input contains non-finite entries")
    n, N = z.shape
    try:
        # full_matrices only matters for U when n > N; for n <= N a thin call already gives n x n.
        u, s, vt = np.linalg.svd(z, full_matrices=n > N)
    except np.linalg.LinAlgError as exc:
        raise NumericalFailure(f"SVD did not converge: {exc}") from exc
    k = min(n, N)
    vt = vt[:k]
    _fix_signs(u, vt)
    return SvdResult(left_vectors=u, singular_values=s, right_vectors=vt.T)


def smallest_subspace(s: SvdResult, m: int) -> np.ndarray:
    """Rows: the m left singular vectors with the smallest singular values (m x n).

    Raises DegenerateGap when the m-th smallest and (m+1)-th smallest singular
    values coincide to within GAP_TOL relative to the largest, in which case
    the subspace is not unique.
    """
    n = s.n
    if not 1 <= m <= n:
        raise ValueError(f"m must be in [1, {n}], got {m}")
    if m < n:
        spec = s.spectrum()
        scale = spec[0]
        gap = spec[n - m - 1] - spec[n - m]
        if scale == 0 or gap <= GAP_TOL * scale:
            raise DegenerateGap(
                f"singular values {spec[n - m - 1]:.3e} and {spec[n - m]:.3e} "
                f"are not separated (largest {scale:.3e})"
            )
    return s.left_vectors[:, n - m :].T.copy()


def cholesky_diagonal(variances) -> DiagonalScaling:
    variances = np.asarray(variances, dtype=np.float64)
    if variances.ndim != 1:
        raise ValueError("variances must be 1-D")
    if not np.all(variances > 0):
        bad = int(np.flatnonzero(~(variances > 0))[0])
        raise NonPositiveVariance(f"variance at index {bad} is {variances[bad]!r}")
    return DiagonalScaling(np.sqrt(variances))
