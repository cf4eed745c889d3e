"""Single-mode Gaussian states: squeezed thermal states and their displaced
versions.

Conventions: the vacuum covariance matrix is ``I/2`` and a coherent state
``|alpha>`` has mean vector ``(Re alpha, Im alpha)``.  With these choices the
displacement factor of the fidelity is ``exp(-dX^T (s1 + s2)^-1 dX)`` and
the coherent-state overlap ``exp(-|alpha1 - alpha2|^2)`` comes out right.
"""

from __future__ import annotations

import math
from typing import NamedTuple

import numpy as np

from .linalg import det_sym, inv_sym
from .qubits import UnphysicalStateError

__all__ = [
    "STS1Params",
    "SingleModeGaussian",
    "PhotonStatistics",
    "sts1_cm",
    "displaced_sts1",
    "is_nonclassical_sts1",
    "fidelity_sts1",
    "fidelity_gaussian1",
    "photon_stats",
    "is_subpoissonian",
    "purity",
]

UNCERTAINTY_TOL = 1e-12
VACUUM_MEAN_N = 1e-12


class STS1Params(NamedTuple):
    """Squeezing factor ``s = exp(-2r) > 0`` and purity ``mu in (0, 1]``."""

    s: float
    mu: float


class SingleModeGaussian(NamedTuple):
    mean: np.ndarray
    cm: np.ndarray


class PhotonStatistics(NamedTuple):
    """First two photon-number moments; ``fano`` is NaN for the vacuum."""

    mean_n: float
    var_n: float
    fano: float

    @property
    def fano_defined(self) -> bool:
        return not math.isnan(self.fano)


def _params(p) -> STS1Params:
    s, mu = (float(v) for v in p)
    if not s > 0.0 or not math.isfinite(s):
        raise UnphysicalStateError(f"squeezing factor must be > 0, got s={s}")
    if not 0.0 < mu <= 1.0:
        raise UnphysicalStateError(f"purity must lie in (0, 1], got mu={mu}")
    return STS1Params(s, mu)


def _gaussian(g) -> SingleModeGaussian:
    mean = np.asarray(g.mean, dtype=float).reshape(2)
    cm = np.asarray(g.cm, dtype=float).reshape(2, 2)
    if abs(cm[0, 1] - cm[1, 0]) > UNCERTAINTY_TOL or cm[0, 0] <= 0.0:
        raise UnphysicalStateError("covariance matrix must be symmetric positive definite")
    if det_sym(cm) < 0.25 - UNCERTAINTY_TOL:
        raise UnphysicalStateError(
            f"covariance matrix violates the uncertainty relation (det = {det_sym(cm):.6g} < 1/4)"
        )
    return SingleModeGaussian(mean, cm)


def sts1_cm(p) -> SingleModeGaussian:
    """Zero-mean squeezed thermal state with CM ``diag(1/s, s) / (2 mu)``."""
    s, mu = _params(p)
    return SingleModeGaussian(np.zeros(2), np.diag([1.0 / s, s]) / (2.0 * mu))


def displaced_sts1(p, x: float) -> SingleModeGaussian:
    g = sts1_cm(p)
    return SingleModeGaussian(np.array([float(x), 0.0]), g.cm)


def purity(g) -> float:
    g = _gaussian(g)
    return 1.0 / (2.0 * math.sqrt(det_sym(g.cm)))


def is_nonclassical_sts1(p) -> bool:
    """Singular P-function criterion: ``s < mu`` or ``s > 1/mu``."""
    s, mu = _params(p)
    return s < mu or s > 1.0 / mu


def _zero_mean_fidelity(cm1: np.ndarray, cm2: np.ndarray) -> float:
    big = det_sym(cm1 + cm2)
    small = 4.0 * (det_sym(cm1) - 0.25) * (det_sym(cm2) - 0.25)
    small = max(small, 0.0)
    # 1 / (sqrt(big + small) - sqrt(small)), rationalised
    return (math.sqrt(big + small) + math.sqrt(small)) / big


def fidelity_sts1(a, b) -> float:
    return min(_zero_mean_fidelity(sts1_cm(a).cm, sts1_cm(b).cm), 1.0)


def fidelity_gaussian1(g1, g2) -> float:
    """Fidelity of two single-mode Gaussian states (means and CMs)."""
    g1 = _gaussian(g1)
    g2 = _gaussian(g2)
    d = g1.mean - g2.mean
    expo = float(d @ inv_sym(g1.cm + g2.cm) @ d)
    return min(math.exp(-expo) * _zero_mean_fidelity(g1.cm, g2.cm), 1.0)


def photon_stats(g) -> PhotonStatistics:
    """Mean, variance and Fano factor of the photon number.

    ``<n> = (Tr s - 1)/2 + |X|^2`` and
    ``<dn^2> = (Tr s^2 - 1/2)/2 + 2 X^T s X``.
    """
    g = _gaussian(g)
    s, x = g.cm, g.mean
    mean_n = 0.5 * (float(np.trace(s)) - 1.0) + float(x @ x)
    var_n = 0.5 * (float(np.trace(s @ s)) - 0.5) + 2.0 * float(x @ s @ x)
    mean_n = max(mean_n, 0.0)
    var_n = max(var_n, 0.0)
    fano = var_n / mean_n if mean_n >= VACUUM_MEAN_N else math.nan
    return PhotonStatistics(mean_n, var_n, fano)


def is_subpoissonian(g) -> bool:
    st = photon_stats(g)
    if not st.fano_defined:
        raise UnphysicalStateError("Fano factor undefined for a state with zero mean photon number")
    return st.fano < 1.0
