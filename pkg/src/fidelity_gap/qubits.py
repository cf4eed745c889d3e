"""Qubit states: Bell-diagonal (Pauli-diagonal) two-qubit algebra and
general density-matrix distance measures.

A Pauli-diagonal state is fixed by three correlation coefficients
``(c1, c2, c3)``::

    rho = (I x I + sum_j c_j sigma_j x sigma_j) / 4

Its eigenvalues are affine in ``c``; fidelity, negativity and discord all
have closed forms in terms of them.  The density-matrix functions at the
bottom of the module (:func:`uhlmann_fidelity`, :func:`measured_discord`)
work on explicit matrices and serve as independent checks.
"""

from __future__ import annotations

import math
from typing import NamedTuple

import numpy as np

from .linalg import LinalgError, as_hermitian, eig_hermitian, eigvals_hermitian, sqrt_psd

__all__ = [
    "PauliDiagonalCoeffs",
    "PDEigenvalues",
    "BlochVector",
    "ResourceReport",
    "UnphysicalStateError",
    "PHYSICAL_TOL",
    "pd_eigenvalues",
    "pd_from_eigenvalues",
    "is_physical_pd",
    "pd_to_density_matrix",
    "pd_fidelity",
    "negativity",
    "pd_discord",
    "pd_resources",
    "werner",
    "qubit_fidelity_to_zero",
    "bloch_fidelity",
    "bloch_density_matrix",
    "uhlmann_fidelity",
    "trace_distance",
    "bures_distance",
    "partial_transpose",
    "matrix_negativity",
    "measured_discord",
]

PHYSICAL_TOL = 1e-12
STATE_TOL = 1e-10

PAULI = (
    np.array([[0, 1], [1, 0]], dtype=complex),
    np.array([[0, -1j], [1j, 0]], dtype=complex),
    np.array([[1, 0], [0, -1]], dtype=complex),
)


class UnphysicalStateError(ValueError):
    """Raised when parameters do not describe a valid quantum state."""


class PauliDiagonalCoeffs(NamedTuple):
    c1: float
    c2: float
    c3: float


class PDEigenvalues(NamedTuple):
    l0: float
    l1: float
    l2: float
    l3: float


class BlochVector(NamedTuple):
    rx: float
    ry: float
    rz: float


class ResourceReport(NamedTuple):
    fidelity_to_target: float
    negativity: float
    discord: float
    separable: bool


def pd_eigenvalues(c) -> PDEigenvalues:
    """Eigenvalues of a Pauli-diagonal state, in the fixed order l0..l3.

    ``l0`` is the weight on the singlet; no physicality check is made, so
    negative entries flag points outside the tetrahedron.
    """
    c1, c2, c3 = (float(v) for v in c)
    return PDEigenvalues(
        0.25 * (1.0 - c1 - c2 - c3),
        0.25 * (1.0 - c1 + c2 + c3),
        0.25 * (1.0 + c1 - c2 + c3),
        0.25 * (1.0 + c1 + c2 - c3),
    )


def pd_from_eigenvalues(lam) -> PauliDiagonalCoeffs:
    """Inverse of :func:`pd_eigenvalues` (for a probability vector ``lam``)."""
    l0, l1, l2, l3 = (float(v) for v in lam)
    return PauliDiagonalCoeffs(l2 + l3 - l0 - l1, l1 + l3 - l0 - l2, l1 + l2 - l0 - l3)


def is_physical_pd(c) -> bool:
    return min(pd_eigenvalues(c)) >= -PHYSICAL_TOL


def _checked(c) -> PauliDiagonalCoeffs:
    c = PauliDiagonalCoeffs(*(float(v) for v in c))
    lam = pd_eigenvalues(c)
    if min(lam) < -PHYSICAL_TOL:
        raise UnphysicalStateError(
            f"Pauli-diagonal coefficients {tuple(c)} lie outside the physical "
            f"tetrahedron (min eigenvalue {min(lam):.3e})"
        )
    return c


def pd_to_density_matrix(c) -> np.ndarray:
    c = _checked(c)
    rho = np.eye(4, dtype=complex)
    for cj, s in zip(c, PAULI):
        rho = rho + cj * np.kron(s, s)
    return rho / 4.0


def pd_fidelity(a, b) -> float:
    """Uhlmann fidelity of two Pauli-diagonal states.

    Both states are diagonal in the Bell basis, so the fidelity reduces to
    the classical fidelity of their eigenvalue distributions.
    """
    la = pd_eigenvalues(_checked(a))
    lb = pd_eigenvalues(_checked(b))
    s = sum(math.sqrt(max(x, 0.0) * max(y, 0.0)) for x, y in zip(la, lb))
    return min(s * s, 1.0)


def negativity(c) -> float:
    """Negativity ``-2 * sum(negative eigenvalues of the partial transpose)``.

    Transposing subsystem A maps ``sigma_y -> -sigma_y``, so the partial
    transpose is again Pauli-diagonal with ``c2`` negated.
    """
    c1, c2, c3 = _checked(c)
    return 0.0 - 2.0 * sum(min(v, 0.0) for v in pd_eigenvalues((c1, -c2, c3)))


def _xlog2x(x: float) -> float:
    return x * math.log2(x) if x > 0.0 else 0.0


def pd_discord(c) -> float:
    """Quantum discord of a Pauli-diagonal state, in bits.

    Mutual information minus the classical correlation, where the optimal
    projective measurement is along the axis of the largest ``|c_j|``.
    """
    c = _checked(c)
    lam = pd_eigenvalues(c)
    mutual = 2.0 + sum(_xlog2x(max(v, 0.0)) for v in lam)
    cmax = min(max(abs(v) for v in c), 1.0)
    classical = 0.5 * _xlog2x(1.0 - cmax) + 0.5 * _xlog2x(1.0 + cmax)
    return max(mutual - classical, 0.0)


def pd_resources(c, target) -> ResourceReport:
    n = negativity(c)
    return ResourceReport(pd_fidelity(c, target), n, pd_discord(c), n <= PHYSICAL_TOL)


def werner(cw: float) -> PauliDiagonalCoeffs:
    """Werner state ``(1-c) I/4 + c |Psi-><Psi-|`` as Pauli-diagonal coefficients."""
    cw = float(cw)
    if not 0.0 <= cw <= 1.0:
        raise UnphysicalStateError(f"Werner weight must lie in [0, 1], got {cw}")
    return PauliDiagonalCoeffs(-cw, -cw, -cw)


# -- single qubit -----------------------------------------------------------

def _bloch(r) -> np.ndarray:
    v = np.asarray(r, dtype=float).reshape(3)
    if float(v @ v) > 1.0 + PHYSICAL_TOL:
        raise UnphysicalStateError(f"Bloch vector {tuple(v)} lies outside the unit ball")
    return v


def bloch_fidelity(r, t) -> float:
    """Fidelity between the qubit states with Bloch vectors ``r`` and ``t``."""
    r = _bloch(r)
    t = _bloch(t)
    mixed = math.sqrt(max(1.0 - r @ r, 0.0) * max(1.0 - t @ t, 0.0))
    return min(max(0.5 * (1.0 + r @ t + mixed), 0.0), 1.0)


def qubit_fidelity_to_zero(r) -> float:
    """Fidelity of the qubit ``(I + r.sigma)/2`` to ``|0>``: ``(1 + rz) / 2``."""
    return 0.5 * (1.0 + float(_bloch(r)[2]))


def bloch_density_matrix(r) -> np.ndarray:
    r = _bloch(r)
    return 0.5 * (np.eye(2, dtype=complex) + sum(x * s for x, s in zip(r, PAULI)))


# -- general density matrices -----------------------------------------------

def _state(rho, name: str) -> np.ndarray:
    try:
        a = as_hermitian(rho, tol=STATE_TOL)
    except LinalgError as exc:
        raise UnphysicalStateError(f"{name}: {exc}") from None
    tr = np.trace(a).real
    if abs(tr - 1.0) > STATE_TOL:
        raise UnphysicalStateError(f"{name}: trace {tr:.12g} != 1")
    lo = eigvals_hermitian(a)[0]
    if lo < -STATE_TOL:
        raise UnphysicalStateError(f"{name}: not PSD (min eigenvalue {lo:.3e})")
    return a


def uhlmann_fidelity(r1, r2) -> float:
    """Uhlmann fidelity ``(Tr sqrt(sqrt(r1) r2 sqrt(r1)))**2``."""
    a = _state(r1, "r1")
    b = _state(r2, "r2")
    s = sqrt_psd(a)
    inner = s @ b @ s
    vals = eigvals_hermitian(0.5 * (inner + inner.conj().T))
    tr = float(np.sum(np.sqrt(np.clip(vals, 0.0, None))))
    return min(tr * tr, 1.0)


def trace_distance(r1, r2) -> float:
    a = _state(r1, "r1")
    b = _state(r2, "r2")
    return 0.5 * float(np.sum(np.abs(eigvals_hermitian(a - b))))


def bures_distance(r1, r2) -> float:
    f = uhlmann_fidelity(r1, r2)
    return math.sqrt(max(2.0 * (1.0 - math.sqrt(f)), 0.0))


def partial_transpose(rho, dims=(2, 2), subsystem: int = 0) -> np.ndarray:
    da, db = dims
    t = np.asarray(rho).reshape(da, db, da, db)
    if subsystem == 0:
        t = t.transpose(2, 1, 0, 3)
    else:
        t = t.transpose(0, 3, 2, 1)
    return t.reshape(da * db, da * db)


def matrix_negativity(rho) -> float:
    """Negativity of a two-qubit density matrix from its partial transpose."""
    a = _state(rho, "rho")
    vals = eigvals_hermitian(partial_transpose(a))
    return 0.0 - 2.0 * float(np.sum(vals[vals < 0.0]))


# -- measurement-optimised discord (oracle) ---------------------------------

def _entropy2_batch(m: np.ndarray) -> np.ndarray:
    """Von Neumann entropy (bits) of a stack of 2x2 Hermitian PSD matrices
    with unit trace."""
    p = m[..., 0, 0].real
    q = m[..., 1, 1].real
    b = np.abs(m[..., 0, 1])
    rad = np.hypot(0.5 * (p - q), b)
    out = np.zeros(p.shape)
    for lam in (0.5 + rad, 0.5 - rad):
        lam = np.clip(lam, 0.0, 1.0)
        with np.errstate(divide="ignore", invalid="ignore"):
            out -= np.where(lam > 0.0, lam * np.log2(np.where(lam > 0.0, lam, 1.0)), 0.0)
    return out


def _entropy(rho: np.ndarray) -> float:
    vals = np.clip(eigvals_hermitian(rho), 0.0, None)
    vals = vals[vals > 0.0]
    return float(-np.sum(vals * np.log2(vals)))


def _classical_info(rho: np.ndarray, theta, phi) -> np.ndarray:
    """Classical correlation ``S(A) - sum_k p_k S(A|k)`` for projective
    measurements on B along ``n(theta, phi)``."""
    theta = np.atleast_1d(np.asarray(theta, dtype=float))
    phi = np.atleast_1d(np.asarray(phi, dtype=float))
    n = np.stack(
        [np.sin(theta) * np.cos(phi), np.sin(theta) * np.sin(phi), np.cos(theta)], axis=-1
    )
    r = rho.reshape(2, 2, 2, 2)
    # M_B[a, a', b', b] -> contract B with projector (I + n.sigma)/2.
    ns = np.einsum("...k,kij->...ij", n, np.stack(PAULI))
    eye = np.eye(2)
    s_a = _entropy(np.einsum("ibjb->ij", r))
    total = np.zeros(theta.shape)
    for sign in (1.0, -1.0):
        proj = 0.5 * (eye + sign * ns)
        # rho_A|k (unnormalised) = Tr_B[(I x P) rho] = sum_{b,b'} P[b',b] rho[a b, a' b']
        cond = np.einsum("...db,ibjd->...ij", proj, r)
        pk = np.real(cond[..., 0, 0] + cond[..., 1, 1])
        safe = np.where(pk > 1e-15, pk, 1.0)
        ent = _entropy2_batch(cond / safe[..., None, None])
        total += np.where(pk > 1e-15, pk * ent, 0.0)
    return s_a - total


def _golden_max(f, lo: float, hi: float, tol: float) -> tuple[float, float]:
    g = (math.sqrt(5.0) - 1.0) / 2.0
    a, b = lo, hi
    x1 = b - g * (b - a)
    x2 = a + g * (b - a)
    f1, f2 = f(x1), f(x2)
    while b - a > tol:
        if f1 >= f2:
            b, x2, f2 = x2, x1, f1
            x1 = b - g * (b - a)
            f1 = f(x1)
        else:
            a, x1, f1 = x1, x2, f2
            x2 = a + g * (b - a)
            f2 = f(x2)
    x = 0.5 * (a + b)
    return x, f(x)


def measured_discord(rho, n_theta: int = 181, n_phi: int = 91, tol: float = 1e-8) -> float:
    """Discord of a two-qubit state by brute-force optimisation over
    projective measurements on subsystem B (bits).

    A ``n_theta x n_phi`` grid over the measurement direction (polar angle in
    ``[0, pi]``, azimuth in ``[0, pi]``; antipodal directions give the same
    measurement) is followed by alternating golden-section refinement of the
    two angles around the best grid point.  Makes no assumption about the
    state's structure.
    """
    rho = _state(rho, "rho")
    r = rho.reshape(2, 2, 2, 2)
    s_a = _entropy(np.einsum("ibjb->ij", r))
    s_b = _entropy(np.einsum("aiaj->ij", r))
    mutual = s_a + s_b - _entropy(rho)

    thetas = np.linspace(0.0, math.pi, n_theta)
    phis = np.linspace(0.0, math.pi, n_phi)
    tt, pp = np.meshgrid(thetas, phis, indexing="ij")
    j = _classical_info(rho, tt.ravel(), pp.ravel())
    k = int(np.argmax(j))
    best = float(j[k])
    th, ph = float(tt.ravel()[k]), float(pp.ravel()[k])
    dth = thetas[1] - thetas[0]
    dph = phis[1] - phis[0]

    def at(t: float, p: float) -> float:
        return float(_classical_info(rho, t, p)[0])

    for _ in range(6):
        th_new, v1 = _golden_max(lambda t: at(t, ph), th - dth, th + dth, tol)
        ph_new, v2 = _golden_max(lambda p: at(th_new, p), ph - dph, ph + dph, tol)
        improved = max(v1, v2) - best
        if max(v1, v2) > best:
            best = max(v1, v2)
            th, ph = th_new, ph_new
        if improved < 1e-14:
            break
        dth *= 0.5
        dph *= 0.5
    return max(mutual - best, 0.0)
