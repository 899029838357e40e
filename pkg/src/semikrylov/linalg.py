"""Dense matrix/vector validation, symmetric eigendecomposition, and SVD.

Everything is plain float64 numpy. The eigensolver is a cyclic Jacobi
iteration and the SVD is one-sided Jacobi on the columns: both are simple,
accurate at the dense desk scale this library targets (up to roughly a
thousand rows), and keep the dependency surface to numpy alone. They also
serve as the spectral ground truth every solver diagnostic is checked
against, so they are deliberately independent of the iterative methods.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

DEFAULT_RANK_TOL = 1e-10

_SYMMETRY_TOL = 1e-12
_JACOBI_OFF_TOL = 1e-14
_JACOBI_SWEEP_CAP = 100
_ORTHO_SKIP = 1e-15  # sweep skips column pairs already this orthogonal


class ConvergenceError(RuntimeError):
    """Raised when a Jacobi iteration exhausts its sweep budget."""


def as_matrix(a) -> np.ndarray:
    """Validate and return ``a`` as a 2-d float64 array with finite entries."""
    m = np.asarray(a, dtype=np.float64)
    if m.ndim != 2:
        raise ValueError(f"expected a 2-d matrix, got ndim={m.ndim}")
    if m.shape[0] < 1 or m.shape[1] < 1:
        raise ValueError(f"matrix dimensions must be positive, got {m.shape}")
    if not np.all(np.isfinite(m)):
        raise ValueError("matrix entries must all be finite")
    return m


def as_vector(v) -> np.ndarray:
    """Validate and return ``v`` as a 1-d float64 array with finite entries."""
    w = np.asarray(v, dtype=np.float64)
    if w.ndim != 1:
        raise ValueError(f"expected a 1-d vector, got ndim={w.ndim}")
    if w.shape[0] < 1:
        raise ValueError("vector must have positive length")
    if not np.all(np.isfinite(w)):
        raise ValueError("vector entries must all be finite")
    return w


def check_symmetric(a: np.ndarray) -> None:
    """Raise ValueError if the (square) matrix is not symmetric within tolerance."""
    scale = max(float(np.max(np.abs(a))), 1.0)
    if float(np.max(np.abs(a - a.T))) > _SYMMETRY_TOL * scale:
        raise ValueError("matrix is not symmetric within tolerance")


def matvec(a, x) -> np.ndarray:
    """Dense matrix-vector product y = A x."""
    a = as_matrix(a)
    x = as_vector(x)
    if a.shape[1] != x.shape[0]:
        raise ValueError(
            f"cannot multiply {a.shape[0]}x{a.shape[1]} matrix with "
            f"length-{x.shape[0]} vector"
        )
    return a @ x


@dataclass(frozen=True)
class SpectralDecomposition:
    """Orthogonal eigendecomposition A = Q diag(lambdas) Q^T with a rank cut.

    Columns of ``q`` are eigenvectors sorted by eigenvalue, largest first.
    Exactly the first ``rank`` eigenvalues exceed rank_tol * max(lambdas[0], 1);
    the corresponding leading columns span the numerical range of A and the
    trailing columns span its null space. Instances are immutable and safe to
    share across threads.
    """

    q: np.ndarray
    lambdas: np.ndarray
    rank: int
    rank_tol: float

    @property
    def dim(self) -> int:
        return self.q.shape[0]

    @property
    def q1(self) -> np.ndarray:
        """Orthonormal basis of the numerical range (dim x rank)."""
        return self.q[:, : self.rank]

    @property
    def q2(self) -> np.ndarray:
        """Orthonormal basis of the numerical null space (dim x (dim - rank))."""
        return self.q[:, self.rank :]

    @property
    def lambdas_r(self) -> np.ndarray:
        """The leading ``rank`` (positive) eigenvalues."""
        return self.lambdas[: self.rank]

    def apply(self, x: np.ndarray) -> np.ndarray:
        """Apply the reconstructed operator Q diag(lambdas) Q^T to x."""
        return self.q @ (self.lambdas * (self.q.T @ x))


@dataclass(frozen=True)
class SingularDecomposition:
    """Full SVD A = U Sigma V^T with a rank cut on the singular values."""

    u: np.ndarray
    sigmas: np.ndarray
    v: np.ndarray
    rank: int
    rank_tol: float

    @property
    def shape(self) -> tuple[int, int]:
        return (self.u.shape[0], self.v.shape[0])

    @property
    def u1(self) -> np.ndarray:
        return self.u[:, : self.rank]

    @property
    def u2(self) -> np.ndarray:
        return self.u[:, self.rank :]

    @property
    def v1(self) -> np.ndarray:
        return self.v[:, : self.rank]

    @property
    def v2(self) -> np.ndarray:
        return self.v[:, self.rank :]

    @property
    def sigmas_r(self) -> np.ndarray:
        return self.sigmas[: self.rank]

    def apply(self, x: np.ndarray) -> np.ndarray:
        """Apply the reconstructed A to a length-n vector."""
        k = self.sigmas.shape[0]
        return self.u[:, :k] @ (self.sigmas * (self.v[:, :k].T @ x))

    def apply_transpose(self, y: np.ndarray) -> np.ndarray:
        """Apply the reconstructed A^T to a length-m vector."""
        k = self.sigmas.shape[0]
        return self.v[:, :k] @ (self.sigmas * (self.u[:, :k].T @ y))


def _offdiag_norm(b: np.ndarray) -> float:
    off = b - np.diag(np.diag(b))
    return float(np.linalg.norm(off))


def _numerical_rank(values: np.ndarray, rank_tol: float) -> int:
    if values.size == 0:
        return 0
    cut = rank_tol * max(float(values[0]), 1.0)
    return int(np.sum(values > cut))


def _jacobi_rotate(b: np.ndarray, vecs: np.ndarray, p: int, q: int) -> None:
    """One two-sided rotation zeroing b[p, q] (and b[q, p]) in place."""
    apq = b[p, q]
    if apq == 0.0:
        return
    tau = (b[q, q] - b[p, p]) / (2.0 * apq)
    if tau >= 0.0:
        t = 1.0 / (tau + np.hypot(1.0, tau))
    else:
        t = 1.0 / (tau - np.hypot(1.0, tau))
    c = 1.0 / np.hypot(1.0, t)
    s = t * c

    bp = b[:, p].copy()
    bq = b[:, q].copy()
    b[:, p] = c * bp - s * bq
    b[:, q] = s * bp + c * bq
    bp = b[p, :].copy()
    bq = b[q, :].copy()
    b[p, :] = c * bp - s * bq
    b[q, :] = s * bp + c * bq
    b[p, q] = 0.0
    b[q, p] = 0.0

    vp = vecs[:, p].copy()
    vq = vecs[:, q].copy()
    vecs[:, p] = c * vp - s * vq
    vecs[:, q] = s * vp + c * vq


def symmetric_eig(a, rank_tol: float = DEFAULT_RANK_TOL) -> SpectralDecomposition:
    """Eigendecomposition of a symmetric matrix by cyclic Jacobi rotations.

    Sweeps run until the off-diagonal Frobenius norm falls to
    1e-14 * ||A||_F, with a hard cap of 100 sweeps. Eigenpairs come back
    sorted by eigenvalue, descending, stable on ties.

    Raises
    ------
    ValueError
        If the matrix is not square, not symmetric within 1e-12 relative
        in the max-norm, or rank_tol is not positive.
    ConvergenceError
        If the sweep cap is reached before the off-diagonal target.
    """
    a = as_matrix(a)
    n = a.shape[0]
    if a.shape[1] != n:
        raise ValueError(f"matrix must be square, got {a.shape[0]}x{a.shape[1]}")
    if rank_tol <= 0.0:
        raise ValueError("rank_tol must be positive")
    check_symmetric(a)

    b = 0.5 * (a + a.T)
    vecs = np.eye(n)
    target = _JACOBI_OFF_TOL * float(np.linalg.norm(b))
    for _ in range(_JACOBI_SWEEP_CAP):
        if _offdiag_norm(b) <= target:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                _jacobi_rotate(b, vecs, p, q)
    else:
        if _offdiag_norm(b) > target:
            raise ConvergenceError(
                f"Jacobi eigensolver did not converge in {_JACOBI_SWEEP_CAP} sweeps"
            )

    lambdas = np.diag(b).copy()
    order = np.argsort(-lambdas, kind="stable")
    lambdas = lambdas[order]
    vecs = vecs[:, order]
    return SpectralDecomposition(vecs, lambdas, _numerical_rank(lambdas, rank_tol), rank_tol)


def _onesided_rotate(work: np.ndarray, v: np.ndarray, i: int, j: int) -> None:
    """Rotate columns i, j of ``work`` (and of v) to make them orthogonal."""
    ci = work[:, i]
    cj = work[:, j]
    aii = float(ci @ ci)
    ajj = float(cj @ cj)
    aij = float(ci @ cj)
    if aij * aij <= (_ORTHO_SKIP**2) * aii * ajj:
        return
    zeta = (ajj - aii) / (2.0 * aij)
    if zeta >= 0.0:
        t = 1.0 / (zeta + np.hypot(1.0, zeta))
    else:
        t = 1.0 / (zeta - np.hypot(1.0, zeta))
    c = 1.0 / np.hypot(1.0, t)
    s = t * c
    wi = ci.copy()
    work[:, i] = c * wi - s * cj
    work[:, j] = s * wi + c * cj
    vi = v[:, i].copy()
    v[:, i] = c * vi - s * v[:, j]
    v[:, j] = s * vi + c * v[:, j]


def _gram_converged(work: np.ndarray, zero_floor: float) -> bool:
    g = work.T @ work
    n = g.shape[0]
    if n < 2:
        return True
    d = np.diag(g).copy()
    off2 = g * g
    np.fill_diagonal(off2, 0.0)
    lim = (_JACOBI_OFF_TOL**2) * np.outer(d, d)
    dead = d <= zero_floor**2
    lim[dead, :] = np.inf
    lim[:, dead] = np.inf
    return bool(np.all(off2 <= lim))


def _complete_orthonormal(cols: list[np.ndarray], dim: int) -> np.ndarray:
    """Extend orthonormal columns to a full dim x dim orthogonal matrix."""
    basis = [np.asarray(c, dtype=np.float64) for c in cols]
    for threshold in (0.5, 1e-6):
        for k in range(dim):
            if len(basis) == dim:
                break
            w = np.zeros(dim)
            w[k] = 1.0
            for u in basis:
                w -= (u @ w) * u
            for u in basis:
                w -= (u @ w) * u
            norm_w = float(np.linalg.norm(w))
            if norm_w > threshold:
                basis.append(w / norm_w)
        if len(basis) == dim:
            break
    if len(basis) != dim:
        raise RuntimeError("failed to complete an orthonormal basis")
    return np.column_stack(basis)


def svd(a, rank_tol: float = DEFAULT_RANK_TOL) -> SingularDecomposition:
    """Singular value decomposition by one-sided Jacobi on the columns.

    Column pairs are rotated until every pair of numerically nonzero columns
    is mutually orthogonal to 1e-14 relative (cap 100 sweeps). Left singular
    vectors on the numerical range are the normalized rotated columns; the
    remaining columns of U are completed by Gram-Schmidt against them, so U
    is orthogonal even for rank-deficient input.
    """
    a = as_matrix(a)
    if rank_tol <= 0.0:
        raise ValueError("rank_tol must be positive")
    m, n = a.shape
    work = a.copy()
    v = np.eye(n)
    fro = float(np.linalg.norm(a))
    zero_floor = max(m, n) * np.finfo(np.float64).eps * fro
    for _ in range(_JACOBI_SWEEP_CAP):
        if _gram_converged(work, zero_floor):
            break
        for i in range(n - 1):
            for j in range(i + 1, n):
                _onesided_rotate(work, v, i, j)
    else:
        if not _gram_converged(work, zero_floor):
            raise ConvergenceError(
                f"one-sided Jacobi SVD did not converge in {_JACOBI_SWEEP_CAP} sweeps"
            )

    norms = np.linalg.norm(work, axis=0)
    order = np.argsort(-norms, kind="stable")
    work = work[:, order]
    v = v[:, order]
    k = min(m, n)
    sigmas = norms[order][:k].copy()

    u_cols = [work[:, j] / sigmas[j] for j in range(k) if sigmas[j] > zero_floor]
    u = _complete_orthonormal(u_cols, m)
    return SingularDecomposition(u, sigmas, v, _numerical_rank(sigmas, rank_tol), rank_tol)
