import numpy as np
import pytest

from fidelity_gap import gaussian1, gaussian2, kernels, qubits
from fidelity_gap.selftest import random_pd

BACKENDS = kernels.available_backends()


def test_python_fallback_always_available():
    assert "python" in BACKENDS
    assert kernels.get_backend("python").NAME == "python"


def test_default_prefers_compiled():
    expected = "cython" if "cython" in BACKENDS else "python"
    assert kernels.get_backend().NAME == expected
    assert kernels.get_backend("auto").NAME == expected


def test_unknown_backend():
    with pytest.raises(ValueError):
        kernels.get_backend("fortran")


def test_use_backend_switches_and_restores():
    before = kernels.backend_name()
    try:
        kernels.use_backend("python")
        assert kernels.backend_name() == "python"
    finally:
        kernels.use_backend(before)


def random_inputs(rng, n=3000):
    u = rng.uniform(-1.1, 1.1, size=(3, n))
    return {
        "bloch": (*u, (0.1, -0.2, 0.7)),
        "pauli_diagonal": (*u, (-0.45, -0.45, -0.45)),
        "sts1": (rng.uniform(-0.1, 3, n), rng.uniform(-0.1, 1.1, n), rng.uniform(-2, 2, n), (1.4, 0.9, 0.5)),
        "sts2": (rng.uniform(-0.5, 5, n), rng.uniform(-0.1, 1.1, n), rng.uniform(-0.1, 1.1, n), (2.0, 0.2, 0.5)),
    }


@pytest.mark.skipif(len(BACKENDS) < 2, reason="compiled extension not built")
@pytest.mark.parametrize("kernel", ["bloch", "pauli_diagonal", "sts1", "sts2"])
def test_backends_agree(kernel):
    args = random_inputs(np.random.default_rng(0))[kernel]
    a = getattr(kernels.get_backend("cython"), kernel)(*args)
    b = getattr(kernels.get_backend("python"), kernel)(*args)
    assert a.keys() == b.keys()
    assert np.array_equal(a["physical"], b["physical"])
    for k in a:
        va, vb = np.asarray(a[k], float), np.asarray(b[k], float)
        assert np.array_equal(np.isnan(va), np.isnan(vb)), k
        m = ~np.isnan(va)
        assert np.max(np.abs(va[m] - vb[m]), initial=0.0) <= 1e-12, k


@pytest.mark.parametrize("backend", BACKENDS)
def test_kernels_match_scalar_modules(backend):
    k = kernels.get_backend(backend)
    rng = np.random.default_rng(1)
    cs = np.array([random_pd(rng) for _ in range(50)])
    t = (-0.45, -0.45, -0.45)
    out = k.pauli_diagonal(cs[:, 0], cs[:, 1], cs[:, 2], t)
    for i, c in enumerate(cs):
        assert out["fidelity"][i] == pytest.approx(qubits.pd_fidelity(c, t), abs=1e-13)
        assert out["negativity"][i] == pytest.approx(qubits.negativity(c), abs=1e-13)
        assert out["discord"][i] == pytest.approx(qubits.pd_discord(c), abs=1e-13)

    s, mu, x = rng.uniform(0.3, 2.5, 50), rng.uniform(0.3, 1, 50), rng.uniform(0, 2, 50)
    out = k.sts1(s, mu, x, (1.4, 0.9, 0.5))
    tgt = gaussian1.displaced_sts1((1.4, 0.9), 0.5)
    for i in range(50):
        g = gaussian1.displaced_sts1((s[i], mu[i]), x[i])
        st = gaussian1.photon_stats(g)
        assert out["fidelity"][i] == pytest.approx(gaussian1.fidelity_gaussian1(g, tgt), abs=1e-13)
        assert out["mean_n"][i] == pytest.approx(st.mean_n, abs=1e-12)
        assert out["var_n"][i] == pytest.approx(st.var_n, abs=1e-12)

    n, b, gm = rng.uniform(0, 5, 50), rng.uniform(0, 1, 50), rng.uniform(0, 1, 50)
    out = k.sts2(n, b, gm, (2.0, 0.2, 0.5))
    for i in range(50):
        p = (n[i], b[i], gm[i])
        sp = gaussian2.symplectic_spectrum(p)
        assert out["fidelity"][i] == pytest.approx(gaussian2.fidelity_sts2(p, (2.0, 0.2, 0.5)), abs=1e-13)
        assert out["dt_minus"][i] == pytest.approx(sp.dt_minus, abs=1e-13)
        assert out["discord"][i] == pytest.approx(gaussian2.gaussian_b_discord(p), abs=1e-12)


@pytest.mark.parametrize("backend", BACKENDS)
def test_unphysical_points_masked(backend):
    k = kernels.get_backend(backend)
    out = k.pauli_diagonal(np.array([1.0, 0.0]), np.array([1.0, 0.0]), np.array([1.0, 0.0]), (0, 0, 0))
    assert out["physical"].tolist() == [False, True]
    assert np.isnan(out["fidelity"][0]) and out["fidelity"][1] == pytest.approx(1.0)
    out = k.sts1(np.array([-1.0, 1.0]), np.array([0.5, 1.2]), np.zeros(2), (1, 1, 0))
    assert not out["physical"].any()
    out = k.sts2(np.array([-1.0, 1.0]), np.array([0.5, 0.5]), np.array([0.5, 0.5]), (1, 0.5, 0.5))
    assert out["physical"].tolist() == [False, True]


@pytest.mark.parametrize("backend", BACKENDS)
def test_empty_input(backend):
    k = kernels.get_backend(backend)
    out = k.bloch(np.empty(0), np.empty(0), np.empty(0), (0, 0, 1))
    assert out["fidelity"].shape == (0,)
