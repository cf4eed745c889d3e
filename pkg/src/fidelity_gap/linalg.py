"""Small dense linear algebra for 2x2 and 4x4 Hermitian / symmetric matrices.

Everything here is deterministic and dependency-light: a closed form for
2x2 blocks and cyclic Jacobi sweeps otherwise.  The routines back the
density-matrix oracles and the covariance-matrix formulas, so accuracy at
the 1e-12 level matters more than speed.
"""

from __future__ import annotations

import math
from typing import NamedTuple

import numpy as np

__all__ = [
    "EigenDecomposition",
    "LinalgError",
    "NotHermitianError",
    "NotPSDError",
    "SingularMatrixError",
    "as_hermitian",
    "as_symmetric",
    "eig_hermitian",
    "eigvals_hermitian",
    "sqrt_psd",
    "det_sym",
    "inv_sym",
]

HERMITIAN_TOL = 1e-12
PSD_CLAMP = 1e-12
SINGULAR_TOL = 1e-14
_MAX_SWEEPS = 64


class LinalgError(ValueError):
    """Base class for rejected matrix inputs."""


class NotHermitianError(LinalgError):
    pass


class NotPSDError(LinalgError):
    pass


class SingularMatrixError(LinalgError):
    pass


class EigenDecomposition(NamedTuple):
    """Eigenvalues in ascending order and the matching eigenvector columns."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    def reconstruct(self) -> np.ndarray:
        v = self.eigenvectors
        return (v * self.eigenvalues) @ v.conj().T


def _square(m) -> np.ndarray:
    a = np.asarray(m)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise LinalgError(f"expected a square matrix, got shape {a.shape}")
    if a.shape[0] == 0:
        raise LinalgError("empty matrix")
    return a


def as_hermitian(m, tol: float = HERMITIAN_TOL) -> np.ndarray:
    """Validate ``m`` as Hermitian and return it as a complex array."""
    a = _square(m).astype(complex)
    err = np.max(np.abs(a - a.conj().T))
    if err > tol:
        raise NotHermitianError(
            f"matrix is not Hermitian: max |M - M^H| = {err:.3e} > {tol:.0e}"
        )
    return 0.5 * (a + a.conj().T)


def as_symmetric(m, tol: float = HERMITIAN_TOL) -> np.ndarray:
    a = _square(m)
    if np.iscomplexobj(a):
        if np.max(np.abs(a.imag)) > tol:
            raise NotHermitianError("symmetric matrix must be real")
        a = a.real
    a = a.astype(float)
    err = np.max(np.abs(a - a.T))
    if err > tol:
        raise NotHermitianError(
            f"matrix is not symmetric: max |M - M^T| = {err:.3e} > {tol:.0e}"
        )
    return 0.5 * (a + a.T)


def _unit_phase(z):
    """``z / |z|`` computed on scaled parts, so subnormal ``z`` cannot
    overflow the complex division."""
    if not np.iscomplexobj(z):
        return math.copysign(1.0, z)
    re, im = float(z.real), float(z.imag)
    m = max(abs(re), abs(im))
    re, im = re / m, im / m
    h = math.hypot(re, im)
    return complex(re / h, im / h)


def _eig2(a: np.ndarray) -> EigenDecomposition:
    p = a[0, 0].real
    q = a[1, 1].real
    b = a[0, 1]
    mean = 0.5 * (p + q)
    half = 0.5 * (p - q)
    rad = math.hypot(half, abs(b))
    vals = np.array([mean - rad, mean + rad])
    vecs = np.eye(2, dtype=a.dtype)
    if abs(b) > 0.0:
        # Rotation angle from tan(2t) = 2|b| / (p - q); phase carried by b.
        phase = _unit_phase(b)
        t = 0.5 * math.atan2(2.0 * abs(b), p - q)
        c, s = math.cos(t), math.sin(t)
        # Column for the larger eigenvalue is (c, s * conj(phase)).
        hi = np.array([c, s * np.conj(phase)], dtype=a.dtype)
        lo = np.array([-s * phase, c], dtype=a.dtype)
        vecs = np.column_stack([lo, hi])
    elif p > q:
        vecs = vecs[:, ::-1].copy()
    return EigenDecomposition(vals, vecs)


def _jacobi(a: np.ndarray) -> EigenDecomposition:
    a = a.copy()
    n = a.shape[0]
    v = np.eye(n, dtype=a.dtype)
    scale = max(np.max(np.abs(a)), 1e-300)
    for _ in range(_MAX_SWEEPS):
        off = math.sqrt(sum(abs(a[i, j]) ** 2 for i in range(n) for j in range(n) if i != j))
        if off <= 1e-15 * scale:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                mag = abs(apq)
                if mag <= 1e-300:
                    continue
                phase = _unit_phase(apq)
                tau = (a[q, q].real - a[p, p].real) / (2.0 * mag)
                t = math.copysign(1.0, tau) / (abs(tau) + math.sqrt(1.0 + tau * tau))
                c = 1.0 / math.sqrt(1.0 + t * t)
                s = t * c
                # G = identity except G[p,p]=G[q,q]=c, G[p,q]=s*phase, G[q,p]=-s*conj(phase)
                cp = a[:, p].copy()
                cq = a[:, q].copy()
                a[:, p] = c * cp - s * np.conj(phase) * cq
                a[:, q] = s * phase * cp + c * cq
                rp = a[p, :].copy()
                rq = a[q, :].copy()
                a[p, :] = c * rp - s * phase * rq
                a[q, :] = s * np.conj(phase) * rp + c * rq
                a[p, q] = 0.0
                a[q, p] = 0.0
                vp = v[:, p].copy()
                vq = v[:, q].copy()
                v[:, p] = c * vp - s * np.conj(phase) * vq
                v[:, q] = s * phase * vp + c * vq
    else:  # pragma: no cover - Jacobi converges quadratically for n <= 4
        raise LinalgError("Jacobi iteration did not converge")
    vals = np.real(np.diag(a)).copy()
    order = np.argsort(vals, kind="stable")
    return EigenDecomposition(vals[order], v[:, order])


def eig_hermitian(m) -> EigenDecomposition:
    """Eigendecomposition of a small Hermitian (or real symmetric) matrix.

    Uses a closed form for 2x2 input and cyclic Jacobi rotations for larger
    sizes.  Real input yields real eigenvectors.

    Raises
    ------
    NotHermitianError
        If ``m`` deviates from Hermitian by more than 1e-12 in any entry.
    """
    a = np.asarray(m)
    if np.iscomplexobj(a):
        a = as_hermitian(a)
    else:
        a = as_symmetric(a)
    if a.shape[0] == 1:
        return EigenDecomposition(np.array([a[0, 0].real]), np.ones((1, 1), dtype=a.dtype))
    if a.shape[0] == 2:
        return _eig2(a)
    return _jacobi(a)


def eigvals_hermitian(m) -> np.ndarray:
    return eig_hermitian(m).eigenvalues


def sqrt_psd(m) -> np.ndarray:
    """Principal square root of a positive semidefinite Hermitian matrix.

    Eigenvalues down to -1e-12 are treated as round-off and clamped to zero.
    """
    vals, vecs = eig_hermitian(m)
    if vals[0] < -PSD_CLAMP:
        raise NotPSDError(f"matrix is not PSD: smallest eigenvalue {vals[0]:.3e}")
    roots = np.sqrt(np.clip(vals, 0.0, None))
    out = (vecs * roots) @ vecs.conj().T
    if np.iscomplexobj(out):
        out = 0.5 * (out + out.conj().T)
    else:
        out = 0.5 * (out + out.T)
    return out


def det_sym(m) -> float:
    a = as_symmetric(m)
    n = a.shape[0]
    if n == 1:
        return float(a[0, 0])
    if n == 2:
        return float(a[0, 0] * a[1, 1] - a[0, 1] * a[1, 0])
    return float(np.prod(eig_hermitian(a).eigenvalues))


def inv_sym(m) -> np.ndarray:
    """Inverse of a real symmetric matrix.

    Raises
    ------
    SingularMatrixError
        If ``|det m| < 1e-14``.
    """
    a = as_symmetric(m)
    n = a.shape[0]
    if n == 2:
        d = a[0, 0] * a[1, 1] - a[0, 1] * a[1, 0]
        if abs(d) < SINGULAR_TOL:
            raise SingularMatrixError(f"singular matrix (det = {d:.3e})")
        return np.array([[a[1, 1], -a[0, 1]], [-a[1, 0], a[0, 0]]]) / d
    vals, vecs = eig_hermitian(a)
    d = float(np.prod(vals))
    if abs(d) < SINGULAR_TOL:
        raise SingularMatrixError(f"singular matrix (det = {d:.3e})")
    out = (vecs / vals) @ vecs.T
    return 0.5 * (out + out.T)
