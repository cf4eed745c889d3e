"""Quick oracle-equivalence checks, run by ``fidelity-gap selftest``.

Each check compares a closed form against an independent computation on a
small random sample (fixed seed) and reports the worst deviation.  The
full-size versions live in the test suite.
"""

from __future__ import annotations

import math
from typing import Callable

import numpy as np

from . import fock, gaussian1, gaussian2, kernels, qubits
from .scan import Axis, FidelityConstraint, ParamGrid, scan

SEED = 20240917


def random_pd(rng: np.random.Generator) -> qubits.PauliDiagonalCoeffs:
    """Uniform over the physical tetrahedron (flat Dirichlet eigenvalues)."""
    return qubits.pd_from_eigenvalues(rng.dirichlet(np.ones(4)))


def random_sts2(rng: np.random.Generator) -> tuple[float, float, float]:
    return (float(rng.uniform(0.0, 5.0)), float(rng.uniform(0.0, 1.0)), float(rng.uniform(0.0, 1.0)))


def _pd_fidelity(rng) -> float:
    worst = 0.0
    for _ in range(200):
        a, b = random_pd(rng), random_pd(rng)
        ref = qubits.uhlmann_fidelity(qubits.pd_to_density_matrix(a), qubits.pd_to_density_matrix(b))
        worst = max(worst, abs(qubits.pd_fidelity(a, b) - ref))
    return worst


def _pd_discord(rng) -> float:
    worst = 0.0
    for _ in range(4):
        c = random_pd(rng)
        ref = qubits.measured_discord(qubits.pd_to_density_matrix(c))
        worst = max(worst, abs(qubits.pd_discord(c) - ref))
    return worst


def _fuchs_van_de_graaf(rng) -> float:
    """Largest violation of 1 - sqrt(F) <= T <= sqrt(1 - F); 0 when it holds."""
    worst = 0.0
    for _ in range(200):
        a = qubits.pd_to_density_matrix(random_pd(rng))
        b = qubits.pd_to_density_matrix(random_pd(rng))
        f = qubits.uhlmann_fidelity(a, b)
        t = qubits.trace_distance(a, b)
        worst = max(worst, (1.0 - math.sqrt(f)) - t, t - math.sqrt(max(1.0 - f, 0.0)))
    return max(worst, 0.0)


def _random_dsts1(rng) -> gaussian1.SingleModeGaussian:
    p = (float(rng.uniform(0.5, 2.0)), float(rng.uniform(0.5, 1.0)))
    return gaussian1.displaced_sts1(p, float(rng.uniform(0.0, 1.5)))


def _sts1_vs_fock(rng) -> float:
    worst = 0.0
    for _ in range(6):
        g1, g2 = _random_dsts1(rng), _random_dsts1(rng)
        r1 = fock.fock_oracle_adaptive(g1, tol=1e-13)
        r2 = fock.fock_oracle_adaptive(g2, tol=1e-13)
        worst = max(worst, abs(gaussian1.fidelity_gaussian1(g1, g2) - fock.fock_fidelity(r1, r2)))
        st = gaussian1.photon_stats(g1)
        m, v = fock.fock_moments(r1)
        worst = max(worst, abs(st.mean_n - m), abs(st.var_n - v))
    return worst


def _coherent(rng) -> float:
    worst = 0.0
    vac = (1.0, 1.0)
    for _ in range(50):
        x1, x2 = rng.uniform(0.1, 2.0, size=2)
        g1 = gaussian1.displaced_sts1(vac, x1)
        g2 = gaussian1.displaced_sts1(vac, x2)
        st = gaussian1.photon_stats(g1)
        worst = max(
            worst,
            abs(gaussian1.fidelity_gaussian1(g1, g2) - math.exp(-((x1 - x2) ** 2))),
            abs(st.mean_n - x1 * x1),
            abs(st.fano - 1.0),
        )
    return worst


def _sts2_closed_vs_generic(rng) -> float:
    worst = 0.0
    for _ in range(100):
        p1, p2 = random_sts2(rng), random_sts2(rng)
        ref = gaussian2.fidelity_two_mode(gaussian2.sts2_cm(p1), gaussian2.sts2_cm(p2))
        worst = max(worst, abs(gaussian2.fidelity_sts2(p1, p2) - ref))
    return worst


def _backend_parity(rng) -> float:
    names = kernels.available_backends()
    if len(names) < 2:
        return 0.0
    a, b = (kernels.get_backend(n) for n in names[:2])
    n = 4096
    u = rng.uniform(-1.1, 1.1, size=(3, n))
    worst = 0.0

    def cmp(x, y):
        nonlocal worst
        for k in x:
            xa, ya = np.asarray(x[k], dtype=float), np.asarray(y[k], dtype=float)
            if not np.array_equal(np.isnan(xa), np.isnan(ya)):
                worst = math.inf
                return
            m = ~np.isnan(xa)
            if m.any():
                worst = max(worst, float(np.max(np.abs(xa[m] - ya[m]))))

    cmp(a.bloch(*u, (0.1, 0.2, 0.3)), b.bloch(*u, (0.1, 0.2, 0.3)))
    cmp(a.pauli_diagonal(*u, (-0.45, -0.45, -0.45)), b.pauli_diagonal(*u, (-0.45, -0.45, -0.45)))
    s = rng.uniform(0.2, 3.0, n)
    mu = rng.uniform(0.1, 1.1, n)
    x = rng.uniform(0.0, 2.0, n)
    cmp(a.sts1(s, mu, x, (1.4, 0.9, 0.5)), b.sts1(s, mu, x, (1.4, 0.9, 0.5)))
    nn = rng.uniform(-0.5, 5.0, n)
    be = rng.uniform(-0.1, 1.1, n)
    ga = rng.uniform(-0.1, 1.1, n)
    cmp(a.sts2(nn, be, ga, (2.0, 0.2, 0.5)), b.sts2(nn, be, ga, (2.0, 0.2, 0.5)))
    return worst


def _scan_recheck(rng, backend=None) -> float:
    """Re-evaluate 100 sampled balloon records through the family modules."""
    grid = ParamGrid("pauli-diagonal", (Axis("c1", -1, 1, 21), Axis("c2", -1, 1, 21), Axis("c3", -1, 1, 21)))
    fc = FidelityConstraint({"c1": -0.45, "c2": -0.45, "c3": -0.45}, 0.9)
    table = scan(grid, fc, backend=backend)
    idx = np.flatnonzero(table.flags["in_balloon"])
    worst = 0.0
    for i in rng.choice(idx, size=min(100, idx.size), replace=False):
        rec = table[int(i)]
        ref = table.family.recheck(rec.params, table.target)
        if not fc.f_min <= ref["fidelity"] <= fc.f_max:
            return math.inf
        worst = max(worst, abs(rec.fidelity - ref["fidelity"]),
                    abs(rec.resources["negativity"] - ref["negativity"]),
                    abs(rec.resources["discord"] - ref["discord"]))
    return worst


CHECKS: list[tuple[str, Callable, float]] = [
    ("pd fidelity vs Uhlmann on matrices", _pd_fidelity, 1e-10),
    ("pd discord vs measurement optimisation", _pd_discord, 1e-6),
    ("Fuchs-van de Graaf sandwich", _fuchs_van_de_graaf, 1e-12),
    ("single-mode fidelity and moments vs Fock", _sts1_vs_fock, 1e-6),
    ("coherent-state identities", _coherent, 1e-9),
    ("two-mode closed form vs determinant form", _sts2_closed_vs_generic, 1e-9),
    ("kernel backend parity", _backend_parity, 1e-12),
    ("scan records vs family modules", _scan_recheck, 1e-12),
]


def run_selftest(verbose: bool = False, backend: str | None = None) -> bool:
    kernels.get_backend(backend)
    ok_all = True
    for name, fn, tol in CHECKS:
        rng = np.random.default_rng(SEED)
        worst = fn(rng, backend) if fn is _scan_recheck else fn(rng)
        ok = worst <= tol
        ok_all &= ok
        if verbose:
            print(f"{'ok  ' if ok else 'FAIL'} {name}: max deviation {worst:.2e} (tol {tol:.0e})")
    return ok_all
