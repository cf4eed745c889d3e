import math

import numpy as np
import pytest

from fidelity_gap import fock
from fidelity_gap import gaussian1 as g1


def test_vacuum():
    rho = fock.fock_oracle(g1.sts1_cm((1, 1)), 10)
    expected = np.zeros((10, 10))
    expected[0, 0] = 1
    assert np.allclose(rho, expected, atol=1e-14)


def test_thermal_diagonal_is_geometric():
    rho = fock.fock_oracle(g1.sts1_cm((1, 1 / 3)), 60)
    n = np.arange(60)
    assert np.allclose(np.diag(rho).real, 1.0 / 2.0 ** (n + 1), atol=1e-14)
    assert np.allclose(rho - np.diag(np.diag(rho)), 0, atol=1e-14)


def test_squeezed_vacuum_variance_identity():
    rho = fock.fock_oracle(g1.sts1_cm((0.5, 1)), 60)
    m, v = fock.fock_moments(rho)
    assert v == pytest.approx(2 * m * (m + 1), abs=1e-6)
    # sinh^2 r with s = exp(-2r)
    assert m == pytest.approx(math.sinh(0.5 * math.log(2)) ** 2, abs=1e-9)


def test_insufficient_cutoff_reports_trace():
    g = g1.displaced_sts1((0.5, 0.5), 2.0)
    with pytest.raises(fock.InsufficientCutoffError) as e:
        fock.fock_oracle(g, 5)
    assert e.value.cutoff == 5
    assert 0 < e.value.trace < 1
    assert "insufficient cutoff" in str(e.value)


def test_adaptive_cutoff_grows_for_large_displacement():
    g = g1.displaced_sts1((0.4, 0.9), 2.0)
    rho = fock.fock_oracle_adaptive(g)
    assert rho.shape[0] > fock.START_CUTOFF
    assert 1 - np.trace(rho).real < fock.TRACE_DEFICIT_TOL


def test_oracle_output_is_a_state():
    rho = fock.fock_oracle_adaptive(g1.displaced_sts1((1.4, 0.9), 0.5))
    assert np.allclose(rho, rho.conj().T)
    assert np.linalg.eigvalsh(rho).min() > -1e-12


def test_tmsv_vector_is_pair_diagonal():
    psi = fock.tmsv_fock_vector(1.0, 30).reshape(30, 30)
    off = psi - np.diag(np.diag(psi))
    assert np.max(np.abs(off)) < 1e-12
    # |<n,n|psi>|^2 = lambda^n (1 - lambda) with lambda = tanh^2 r, n_mode = 1/2
    lam = 0.5 / 1.5
    n = np.arange(10)
    assert np.allclose(np.abs(np.diag(psi)[:10]) ** 2, lam ** n * (1 - lam), atol=1e-10)


def test_two_mode_state_reduces_to_thermal_product():
    rho = fock.two_mode_fock_state((1.0, 0.0, 0.25), 12)
    n1, n2 = 0.25, 0.75
    p1 = fock.thermal_diagonal(n1, 12)
    p2 = fock.thermal_diagonal(n2, 12)
    assert np.allclose(np.diag(rho).real, np.kron(p1, p2), atol=1e-8)
