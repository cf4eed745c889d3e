"""Two-mode squeezed thermal states in the ``(N, beta, gamma)`` parametrisation.

The covariance matrix has the block form ``1/2 [[A I, C Z], [C Z, B I]]``
(vacuum = ``I/2``), so every quantity below is a function of the three
coefficients ``A, B, C``.  Reordering quadratures as ``(x1, x2, p1, p2)``
splits it into ``P = [[A, C], [C, B]]`` and ``Z P Z``, which is what makes
the closed-form fidelity in :func:`fidelity_sts2` possible.
"""

from __future__ import annotations

import math
from typing import NamedTuple

import numpy as np

from .qubits import UnphysicalStateError

__all__ = [
    "STS2Params",
    "CMCoeffs",
    "SymplecticSpectrum",
    "sts2_coeffs",
    "sts2_cm",
    "symplectic_spectrum",
    "is_separable",
    "entropy_h",
    "gaussian_b_discord",
    "fidelity_sts2",
    "fidelity_two_mode",
    "mean_total_photons",
    "OMEGA",
]

SPECTRUM_TOL = 1e-12

_w = np.array([[0.0, 1.0], [-1.0, 0.0]])
OMEGA = np.kron(np.eye(2), _w)


class STS2Params(NamedTuple):
    n_tot: float
    beta: float
    gamma: float


class CMCoeffs(NamedTuple):
    a: float
    b: float
    c: float


class SymplecticSpectrum(NamedTuple):
    d_minus: float
    d_plus: float
    dt_minus: float
    dt_plus: float


def _params(p) -> STS2Params:
    n, beta, gamma = (float(v) for v in p)
    if not (n >= 0.0 and math.isfinite(n)):
        raise UnphysicalStateError(f"total photon number must be >= 0, got {n}")
    if not 0.0 <= beta <= 1.0:
        raise UnphysicalStateError(f"squeezing fraction beta must lie in [0, 1], got {beta}")
    if not 0.0 <= gamma <= 1.0:
        raise UnphysicalStateError(f"thermal fraction gamma must lie in [0, 1], got {gamma}")
    return STS2Params(n, beta, gamma)


def sts2_coeffs(p) -> CMCoeffs:
    n, beta, gamma = _params(p)
    bn = beta * n
    denom = 1.0 + bn
    sq = bn * (1.0 + n)
    a = 1.0 + (2.0 * gamma * (1.0 - beta) * n + sq) / denom
    b = 1.0 + (2.0 * (1.0 - gamma) * (1.0 - beta) * n + sq) / denom
    c = (1.0 + n) * math.sqrt(bn * (2.0 + bn)) / denom
    return CMCoeffs(a, b, c)


def sts2_cm(m) -> np.ndarray:
    """Full 4x4 CM in ``(x1, p1, x2, p2)`` order from coefficients (or params)."""
    if not isinstance(m, CMCoeffs):
        m = sts2_coeffs(m)
    a, b, c = m
    z = np.diag([1.0, -1.0])
    i2 = np.eye(2)
    return 0.5 * np.block([[a * i2, c * z], [c * z, b * i2]])


def _spectrum_pair(delta: float, det: float, root: float) -> tuple[float, float]:
    """Roots of ``d^4 - delta d^2 + det``; ``root`` is the square root of the
    discriminant, supplied in factored form by the caller."""
    lo = 0.5 * (delta - root)
    hi = 0.5 * (delta + root)
    # Product d-^2 d+^2 = det; recover the small root without cancellation.
    if hi > 0.0:
        lo = det / hi
    return math.sqrt(max(lo, 0.0)), math.sqrt(max(hi, 0.0))


def symplectic_spectrum(m) -> SymplecticSpectrum:
    """Plain and partially transposed symplectic eigenvalues.

    ``d^2 = (D +- sqrt(D^2 - 4 det s)) / 2`` with ``D = (A^2 + B^2 - 2C^2)/4``;
    the partial transpose flips the sign of the ``C^2`` term.
    """
    if not isinstance(m, CMCoeffs):
        m = sts2_coeffs(m)
    a, b, c = m
    det = ((a * b - c * c) / 4.0) ** 2
    # delta^2 - 4 det factorises exactly; forming it as a difference loses
    # everything when the two modes are nearly equal or nearly pure
    gap = a + b - 2.0 * c
    if gap < -SPECTRUM_TOL:
        raise UnphysicalStateError(f"unphysical CM: A + B - 2C = {gap:.3e} < 0")
    root = abs(a - b) * math.sqrt(max(gap, 0.0) * (a + b + 2.0 * c)) / 4.0
    root_t = math.sqrt((a - b) ** 2 + 4.0 * c * c) * (a + b) / 4.0
    dm, dp = _spectrum_pair((a * a + b * b - 2.0 * c * c) / 4.0, det, root)
    tm, tp = _spectrum_pair((a * a + b * b + 2.0 * c * c) / 4.0, det, root_t)
    if dm < 0.5 - SPECTRUM_TOL:
        raise UnphysicalStateError(f"unphysical CM: smallest symplectic eigenvalue {dm:.6g} < 1/2")
    return SymplecticSpectrum(dm, dp, tm, tp)


def is_separable(p) -> bool:
    return symplectic_spectrum(sts2_coeffs(p)).dt_minus >= 0.5 - SPECTRUM_TOL


def entropy_h(x: float) -> float:
    """Von Neumann entropy (nats) of a mode with symplectic eigenvalue ``x``."""
    if x < 0.5 - SPECTRUM_TOL:
        raise UnphysicalStateError(f"symplectic eigenvalue {x} < 1/2")
    up = x + 0.5
    lo = x - 0.5
    return up * math.log(up) - (lo * math.log(lo) if lo > 0.0 else 0.0)


def gaussian_b_discord(p) -> float:
    """Gaussian discord with local Gaussian measurements on mode B (nats).

    ``h(b) - h(d-) - h(d+) + h(a - c^2 / (b + 1/2))`` with ``a, b, c`` the
    entries ``A/2, B/2, C/2`` of the covariance matrix.
    """
    m = sts2_coeffs(p)
    sp = symplectic_spectrum(m)
    a, b, c = m.a / 2.0, m.b / 2.0, m.c / 2.0
    cond = a - c * c / (b + 0.5)
    d = entropy_h(b) - entropy_h(sp.d_minus) - entropy_h(sp.d_plus) + entropy_h(max(cond, 0.5))
    return max(d, 0.0)


def _fidelity_coeffs(m1: CMCoeffs, m2: CMCoeffs) -> float:
    a1, b1, c1 = m1
    a2, b2, c2 = m2
    p1 = a1 * b1 - c1 * c1
    p2 = a2 * b2 - c2 * c2
    # det(s1 + s2) = (S/4)^2 with S = det(P1 + P2)
    s = p1 + p2 + a1 * b2 + a2 * b1 - 2.0 * c1 * c2
    # (nu+^2 - 1)(nu-^2 - 1) per state, in vacuum-one units
    q1 = max(p1 * p1 + 1.0 - (a1 * a1 + b1 * b1 - 2.0 * c1 * c1), 0.0)
    q2 = max(p2 * p2 + 1.0 - (a2 * a2 + b2 * b2 - 2.0 * c2 * c2), 0.0)
    excess = ((1.0 - p1) * (1.0 - p2) + (a1 - b1) * (a2 - b2) + math.sqrt(q1 * q2)) / (2.0 * s)
    excess = max(excess, 0.0)
    root = math.sqrt(1.0 + excess) + math.sqrt(excess)
    return 4.0 * root * root / s


def fidelity_sts2(p1, p2) -> float:
    """Fidelity between two two-mode squeezed thermal states.

    Evaluates ``(sqrt(X) + sqrt(X - 1))^2 / sqrt(det(s1 + s2))`` with the
    block structure worked out explicitly, so ``X - 1`` is formed without
    cancellation (it vanishes for pairs of pure states).
    """
    f = _fidelity_coeffs(sts2_coeffs(p1), sts2_coeffs(p2))
    return min(f, 1.0)


def fidelity_two_mode(s1, s2) -> float:
    """Fidelity between two zero-mean two-mode Gaussian states given as 4x4
    covariance matrices in ``(x1, p1, x2, p2)`` order.

    Generic determinant form; used to cross-check :func:`fidelity_sts2`.
    """
    s1 = np.asarray(s1, dtype=float)
    s2 = np.asarray(s2, dtype=float)
    tot = np.linalg.det(s1 + s2)
    e1 = np.linalg.det(OMEGA @ s1 @ OMEGA @ s2 - 0.25 * np.eye(4)) / tot
    e2 = (np.linalg.det(s1 + 0.5j * OMEGA) * np.linalg.det(s2 + 0.5j * OMEGA)).real / tot
    x = 2.0 * math.sqrt(max(e1, 0.0)) + 2.0 * math.sqrt(max(e2, 0.0)) + 0.5
    return (math.sqrt(x) + math.sqrt(max(x - 1.0, 0.0))) ** 2 / math.sqrt(tot)


def mean_total_photons(p) -> float:
    return _params(p).n_tot


def total_photons_from_cm(m) -> float:
    """``(Tr s - 2) / 2`` evaluated on the CM coefficients."""
    if not isinstance(m, CMCoeffs):
        m = sts2_coeffs(m)
    return (m.a + m.b - 2.0) / 2.0
