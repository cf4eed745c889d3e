"""Truncated Fock-space constructions used as independent oracles for the
Gaussian closed forms.

States are built by acting with matrix exponentials of the squeezing and
displacement generators on a thermal diagonal, in a working space larger
than the requested cutoff, then cropping.  Nothing here reads a covariance
matrix formula, so agreement with :mod:`.gaussian1` / :mod:`.gaussian2`
is a genuine cross-check.
"""

from __future__ import annotations

import math

import numpy as np
import scipy.linalg
import scipy.sparse as sp
from scipy.sparse.linalg import expm_multiply

from .gaussian1 import SingleModeGaussian
from .qubits import UnphysicalStateError

__all__ = [
    "InsufficientCutoffError",
    "TRACE_DEFICIT_TOL",
    "annihilation",
    "fock_oracle",
    "fock_oracle_adaptive",
    "fock_moments",
    "fock_fidelity",
    "thermal_diagonal",
    "two_mode_fock_state",
    "tmsv_fock_vector",
]

TRACE_DEFICIT_TOL = 1e-8
START_CUTOFF = 30
MAX_CUTOFF = 960


class InsufficientCutoffError(ValueError):
    def __init__(self, cutoff: int, trace: float, tol: float = TRACE_DEFICIT_TOL):
        super().__init__(
            f"insufficient cutoff {cutoff}: captured trace {trace:.12g} "
            f"(deficit {1.0 - trace:.3e} > {tol:.0e})"
        )
        self.cutoff = cutoff
        self.trace = trace


def annihilation(dim: int) -> np.ndarray:
    return np.diag(np.sqrt(np.arange(1, dim, dtype=float)), 1)


def thermal_diagonal(n_th: float, dim: int) -> np.ndarray:
    """Geometric populations ``N^n / (N+1)^(n+1)``."""
    if n_th <= 0.0:
        out = np.zeros(dim)
        out[0] = 1.0
        return out
    n = np.arange(dim)
    return np.exp(n * math.log(n_th) - (n + 1) * math.log1p(n_th))


def _decompose(g: SingleModeGaussian) -> tuple[float, float, complex]:
    """Squeezing ``r``, thermal photons and complex amplitude of a
    diagonal-CM single-mode Gaussian state."""
    cm = np.asarray(g.cm, dtype=float)
    if abs(cm[0, 1]) > 1e-12 or abs(cm[1, 0]) > 1e-12:
        raise ValueError("Fock oracle supports covariance matrices diagonal in (x, p)")
    vx, vp = cm[0, 0], cm[1, 1]
    det = vx * vp
    if det < 0.25 - 1e-12:
        raise UnphysicalStateError("covariance matrix violates the uncertainty relation")
    mu = 1.0 / (2.0 * math.sqrt(det))
    n_th = max(0.5 * (1.0 / mu - 1.0), 0.0)
    s = math.sqrt(vp / vx)
    r = -0.5 * math.log(s)
    mean = np.asarray(g.mean, dtype=float)
    return r, n_th, complex(mean[0], mean[1])


def _build(g: SingleModeGaussian, cutoff: int) -> np.ndarray:
    r, n_th, alpha = _decompose(g)
    work = 2 * cutoff + 40
    a = annihilation(work)
    ad = a.T
    rho = np.diag(thermal_diagonal(n_th, work)).astype(complex)
    if r != 0.0:
        # exp(r (a^dag^2 - a^2) / 2) stretches x by e^r
        sq = scipy.linalg.expm(0.5 * r * (ad @ ad - a @ a))
        rho = sq @ rho @ sq.T
    if alpha != 0.0:
        disp = scipy.linalg.expm(alpha * ad - np.conj(alpha) * a)
        rho = disp @ rho @ disp.conj().T
    out = rho[:cutoff, :cutoff]
    return 0.5 * (out + out.conj().T)


def fock_oracle(g: SingleModeGaussian, cutoff: int, tol: float = TRACE_DEFICIT_TOL) -> np.ndarray:
    """Fock-basis density matrix of ``g`` truncated to ``cutoff`` levels.

    Raises
    ------
    InsufficientCutoffError
        If the captured trace falls short of one by more than ``tol``.
    """
    cutoff = int(cutoff)
    if cutoff < 1:
        raise ValueError("cutoff must be positive")
    rho = _build(g, cutoff)
    tr = float(np.trace(rho).real)
    if 1.0 - tr > tol:
        raise InsufficientCutoffError(cutoff, tr, tol)
    return rho


def fock_oracle_adaptive(
    g: SingleModeGaussian, start: int = START_CUTOFF, tol: float = TRACE_DEFICIT_TOL
) -> np.ndarray:
    """As :func:`fock_oracle`, doubling the cutoff from ``start`` until the
    trace deficit drops below ``tol``.

    Photon-number moments weight the tail by ``n`` and ``n^2``; checks on
    them should pass a tighter ``tol`` (1e-13 is safe in double precision).
    """
    cutoff = start
    while True:
        try:
            return fock_oracle(g, cutoff, tol)
        except InsufficientCutoffError:
            if cutoff >= MAX_CUTOFF:
                raise
            cutoff *= 2


def fock_moments(rho: np.ndarray) -> tuple[float, float]:
    """Mean and variance of the photon number from a Fock density matrix."""
    p = np.real(np.diag(rho))
    n = np.arange(len(p), dtype=float)
    m1 = float(p @ n)
    m2 = float(p @ (n * n))
    return m1, m2 - m1 * m1


def _sqrtm_psd(rho: np.ndarray) -> np.ndarray:
    vals, vecs = scipy.linalg.eigh(rho)
    return (vecs * np.sqrt(np.clip(vals, 0.0, None))) @ vecs.conj().T


def fock_fidelity(rho1: np.ndarray, rho2: np.ndarray) -> float:
    """Uhlmann fidelity of two truncated density matrices (padded to a
    common size), via the nuclear norm of ``sqrt(rho1) sqrt(rho2)``."""
    d = max(rho1.shape[0], rho2.shape[0])
    a = np.zeros((d, d), dtype=complex)
    b = np.zeros((d, d), dtype=complex)
    a[: rho1.shape[0], : rho1.shape[0]] = rho1
    b[: rho2.shape[0], : rho2.shape[0]] = rho2
    sv = scipy.linalg.svdvals(_sqrtm_psd(a) @ _sqrtm_psd(b))
    return float(np.sum(sv)) ** 2


# -- two modes ----------------------------------------------------------------

def _two_mode_ops(dim: int):
    a = sp.csr_matrix(annihilation(dim))
    eye = sp.identity(dim, format="csr")
    return sp.kron(a, eye, format="csr"), sp.kron(eye, a, format="csr")


def _two_mode_squeeze_r(n_tot: float, beta: float) -> float:
    # beta N = 2 sinh^2 r
    return math.asinh(math.sqrt(0.5 * beta * n_tot))


def tmsv_fock_vector(n_tot: float, cutoff: int) -> np.ndarray:
    """Two-mode squeezed vacuum with ``n_tot`` total photons as a state vector
    on ``cutoff x cutoff`` levels, obtained by applying
    ``exp(r (a^dag b^dag - a b))`` to the vacuum."""
    work = cutoff + 40
    a, b = _two_mode_ops(work)
    r = _two_mode_squeeze_r(n_tot, 1.0)
    gen = r * (a.T @ b.T - a @ b)
    vac = np.zeros(work * work)
    vac[0] = 1.0
    psi = expm_multiply(gen, vac).reshape(work, work)[:cutoff, :cutoff]
    return psi.ravel()


def two_mode_fock_state(p, cutoff: int) -> np.ndarray:
    """Dense density matrix of an STS2 ``(N, beta, gamma)`` on
    ``cutoff x cutoff`` levels.

    Inverting the parametrisation: ``2 sinh^2 r = beta N`` and the thermal
    photons satisfy ``(n1 + n2) cosh 2r = (1 - beta) N`` with
    ``n1 : n2 = gamma : (1 - gamma)``.
    """
    n_tot, beta, gamma = (float(v) for v in p)
    r = _two_mode_squeeze_r(n_tot, beta)
    thermal = (1.0 - beta) * n_tot / math.cosh(2.0 * r)
    n1 = gamma * thermal
    n2 = (1.0 - gamma) * thermal
    work = cutoff + 12
    a, b = _two_mode_ops(work)
    gen = (r * (a.T @ b.T - a @ b)).toarray()
    u = scipy.linalg.expm(gen)
    pops = np.kron(thermal_diagonal(n1, work), thermal_diagonal(n2, work))
    rho = (u * pops) @ u.T
    keep = (np.arange(work)[:, None] < cutoff) & (np.arange(work)[None, :] < cutoff)
    idx = np.flatnonzero(keep.ravel())
    out = rho[np.ix_(idx, idx)]
    return 0.5 * (out + out.T)
