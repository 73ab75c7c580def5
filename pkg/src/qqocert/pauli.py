"""Pauli-basis representation of the 2x2 complex matrix algebra.

Every matrix is expanded in the basis {1, sigma_1, sigma_2, sigma_3} and
stored as a scalar coefficient ``w0`` plus a complex 3-vector ``w``.  The
module also provides the small dense-matrix kernel the certifiers build
on: Kronecker products, the (bilinear, unconjugated) cross product on
C^3, and a cyclic Jacobi eigensolver for hermitian matrices.  All
matrices in this package are 2x2, 4x4 or 8x8, where Jacobi is robust,
deterministic and accurate to machine precision.

Index convention: ``SIGMA[k]`` is sigma_{k+1}; storage is 0-indexed
throughout while the algebra's customary labels run 1..3.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

# Tolerances shared across the package (declared once, used everywhere).
HERMITICITY_ATOL = 1e-13     # entrywise |m - m*| allowed before eigensolving
POSITIVITY_EIG_TOL = 1e-10   # min eigenvalue >= -tol counts as positive

SIGMA1 = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
SIGMA2 = np.array([[0.0, -1.0j], [1.0j, 0.0]], dtype=complex)
SIGMA3 = np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex)
SIGMA = np.stack([SIGMA1, SIGMA2, SIGMA3])
ID2 = np.eye(2, dtype=complex)
ID4 = np.eye(4, dtype=complex)


class NonHermitianInput(ValueError):
    """Raised when an operation requires a hermitian matrix or real coefficients."""


@dataclass(frozen=True, eq=False)
class PauliCoeffs:
    """Coefficients (w0, w) of a 2x2 matrix w0*1 + w.sigma."""

    w0: complex
    w: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "w0", complex(self.w0))
        object.__setattr__(self, "w", np.asarray(self.w, dtype=complex).reshape(3))

    def is_hermitian(self, atol: float = HERMITICITY_ATOL) -> bool:
        """The represented matrix is hermitian iff w0 and w are real."""
        return abs(self.w0.imag) <= atol and np.all(np.abs(self.w.imag) <= atol)


def pauli_compose(c: PauliCoeffs) -> np.ndarray:
    """Assemble the 2x2 matrix w0*1 + w1*sigma1 + w2*sigma2 + w3*sigma3."""
    return c.w0 * ID2 + np.einsum("k,kab->ab", c.w, SIGMA)


def pauli_decompose(m: np.ndarray) -> PauliCoeffs:
    """Unique Pauli coefficients of a 2x2 matrix: w0 = tr(m)/2, wk = tr(sigma_k m)/2."""
    m = np.asarray(m, dtype=complex)
    w0 = np.trace(m) / 2.0
    w = np.array([np.trace(SIGMA[k] @ m) / 2.0 for k in range(3)])
    return PauliCoeffs(w0, w)


def tensor_product(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Kronecker product, block row-major."""
    return np.kron(np.asarray(a, dtype=complex), np.asarray(b, dtype=complex))


def cross_product(u, v) -> np.ndarray:
    """Bilinear cross product on C^3, no conjugation; broadcasts over leading axes."""
    u = np.asarray(u, dtype=complex)
    v = np.asarray(v, dtype=complex)
    out = np.empty(np.broadcast_shapes(u.shape, v.shape), dtype=complex)
    out[..., 0] = u[..., 1] * v[..., 2] - u[..., 2] * v[..., 1]
    out[..., 1] = u[..., 2] * v[..., 0] - u[..., 0] * v[..., 2]
    out[..., 2] = u[..., 0] * v[..., 1] - u[..., 1] * v[..., 0]
    return out


def require_hermitian(m: np.ndarray, atol: float = HERMITICITY_ATOL) -> np.ndarray:
    """Return m as a complex array, raising NonHermitianInput if m != m*."""
    m = np.asarray(m, dtype=complex)
    dev = np.max(np.abs(m - m.conj().T)) if m.size else 0.0
    if dev > atol:
        raise NonHermitianInput(f"matrix deviates from hermitian by {dev:.3e}")
    return m


def _rotation(apq, app, aqq):
    """Jacobi rotation (c, s, phase) zeroing a hermitian off-diagonal entry.

    Works elementwise on arrays so the batched sweep can reuse it.  For
    entries already (numerically) zero the identity rotation is returned.
    """
    absb = np.abs(apq)
    active = absb > 0.0
    safe = np.where(active, absb, 1.0)
    phase = np.where(active, apq / safe, 1.0)
    tau = (np.real(aqq) - np.real(app)) / (2.0 * safe)
    t = np.where(
        tau == 0.0,
        1.0,
        np.sign(tau) / (np.abs(tau) + np.sqrt(1.0 + tau * tau)),
    )
    c = 1.0 / np.sqrt(1.0 + t * t)
    s = t * c
    c = np.where(active, c, 1.0)
    s = np.where(active, s, 0.0)
    return c, s, phase


def _offdiag_norm(a: np.ndarray) -> np.ndarray:
    """Frobenius norm of the off-diagonal part, per matrix in a (..., n, n) stack."""
    d = np.zeros_like(a)
    idx = np.arange(a.shape[-1])
    d[..., idx, idx] = a[..., idx, idx]
    return np.sqrt(np.sum(np.abs(a - d) ** 2, axis=(-2, -1)))


def jacobi_eigh(m: np.ndarray, max_sweeps: int = 100):
    """Eigendecomposition of a hermitian matrix by cyclic Jacobi rotations.

    Returns (values, vectors) with eigenvalues ascending and eigenvectors
    in the matching columns.  Converges when the off-diagonal Frobenius
    norm drops below 1e-14 times the spectral radius estimate.
    """
    a = require_hermitian(m).copy()
    n = a.shape[0]
    v = np.eye(n, dtype=complex)
    for _ in range(max_sweeps):
        off = _offdiag_norm(a)
        scale = max(np.max(np.abs(np.diagonal(a).real)), off)
        if off <= 1e-14 * scale:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                if np.abs(a[p, q]) <= 1e-300:
                    continue
                c, s, ph = _rotation(a[p, q], a[p, p], a[q, q])
                rp, rq = a[p, :].copy(), a[q, :].copy()
                a[p, :] = c * rp - s * ph * rq
                a[q, :] = s * np.conj(ph) * rp + c * rq
                cp_, cq = a[:, p].copy(), a[:, q].copy()
                a[:, p] = c * cp_ - s * np.conj(ph) * cq
                a[:, q] = s * ph * cp_ + c * cq
                vp, vq = v[:, p].copy(), v[:, q].copy()
                v[:, p] = c * vp - s * np.conj(ph) * vq
                v[:, q] = s * ph * vp + c * vq
    vals = np.diagonal(a).real
    order = np.argsort(vals, kind="stable")
    return vals[order], v[:, order]


def jacobi_eigvalsh_batch(ms: np.ndarray, max_sweeps: int = 100) -> np.ndarray:
    """Eigenvalues (ascending) of a stack of hermitian matrices, shape (N, n, n).

    Cyclic Jacobi with a fixed pivot schedule, applied to all matrices of
    the batch simultaneously; used by the sampled certification scans.
    """
    a = np.array(ms, dtype=complex)
    n = a.shape[-1]
    for _ in range(max_sweeps):
        off = _offdiag_norm(a)
        scale = np.maximum(np.max(np.abs(a.diagonal(axis1=-2, axis2=-1).real), axis=-1), off)
        if np.all(off <= 1e-14 * scale):
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                c, s, ph = _rotation(a[:, p, q], a[:, p, p], a[:, q, q])
                c = c[:, None]
                rp, rq = a[:, p, :].copy(), a[:, q, :].copy()
                a[:, p, :] = c * rp - (s * ph)[:, None] * rq
                a[:, q, :] = (s * np.conj(ph))[:, None] * rp + c * rq
                cp_, cq = a[:, :, p].copy(), a[:, :, q].copy()
                a[:, :, p] = c * cp_ - (s * np.conj(ph))[:, None] * cq
                a[:, :, q] = (s * ph)[:, None] * cp_ + c * cq
    return np.sort(a.diagonal(axis1=-2, axis2=-1).real, axis=-1)


def min_eigenvalue_hermitian(m: np.ndarray) -> float:
    """Smallest eigenvalue of a hermitian matrix (checked to HERMITICITY_ATOL)."""
    vals, _ = jacobi_eigh(m)
    return float(vals[0])


def positivity_2x2(c: PauliCoeffs) -> bool:
    """Positivity of the hermitian 2x2 matrix (w0, w): true iff ||w|| <= w0."""
    if not c.is_hermitian():
        raise NonHermitianInput("positivity test needs real coefficients")
    return float(np.linalg.norm(c.w.real)) <= c.w0.real + 1e-12


def state_eval(f: np.ndarray, c: PauliCoeffs) -> complex:
    """Value of the state with Bloch vector f on the matrix (w0, w): w0 + sum w_k f_k."""
    f = np.asarray(f, dtype=float).reshape(3)
    return complex(c.w0 + np.dot(c.w, f))
