"""Acceptance gates, one test per criterion.

Each test records a PASS/FAIL line (collected and printed by the terminal
summary hook in ``conftest.py``).  Running this file directly prints the
same lines without pytest:

    python tests/test_acceptance.py
"""

import filecmp
import math
import sys
import time
from pathlib import Path

import numpy as np
import pytest

from fidelity_gap import fock, gaussian1, gaussian2, qubits
from fidelity_gap import scan as sc
from fidelity_gap.cli import parse_document, run_panels
from fidelity_gap.presets import preset
from fidelity_gap.selftest import random_pd, random_sts2

RESULTS: dict[int, tuple[bool, str, str]] = {}


def record(n: int, title: str, ok: bool, detail: str) -> None:
    RESULTS[n] = (bool(ok), title, detail)
    assert ok, f"criterion {n} ({title}): {detail}"


def format_line(n: int) -> str:
    ok, title, detail = RESULTS[n]
    return f"{'PASS' if ok else 'FAIL'} [{n:2d}] {title}: {detail}"


def run_preset_panels(fig: str, names, out: Path):
    """Run the named panels of a figure preset, timing each separately."""
    panels, _ = parse_document(preset(fig))
    by_name = {p.name: p for p in panels}
    results, timings = {}, {}
    for name in names:
        t0 = time.perf_counter()
        top, _ = run_panels([by_name[name]], [], out / name)
        timings[name] = time.perf_counter() - t0
        results[name] = top
    return results, timings


def failed_checks(top: dict) -> list[str]:
    return [f"{c['panel']}:{c['check']}" for c in top["checks"] if not c["ok"]]


# -- 1 ---------------------------------------------------------------------------


def test_c01_bloch_ball_threshold():
    axes = tuple(sc.Axis(n, -1.0, 1.0, 201) for n in ("rx", "ry", "rz"))
    grid = sc.ParamGrid("bloch-qubit", axes)
    t0 = time.perf_counter()
    table = sc.scan(grid, sc.FidelityConstraint({"rx": 0.0, "ry": 0.0, "rz": 1.0}, 0.9))
    elapsed = time.perf_counter() - t0
    rx, ry, rz = (table.params[n] for n in ("rx", "ry", "rz"))
    expected = (rz >= 0.8) & (rx * rx + ry * ry + rz * rz <= 1.0 + qubits.PHYSICAL_TOL)
    got = table.flags["in_balloon"]
    mismatches = int(np.count_nonzero(got != expected))
    record(1, "F>=0.9 to |0> equals rz>=0.8 inside the ball (201^3)",
           mismatches == 0 and elapsed < 10.0,
           f"{int(got.sum())} points, {mismatches} mismatches, {elapsed:.2f}s")


# -- 2, 3 ------------------------------------------------------------------------

FIG2_BALLOONS = ("werner-0.95", "werner-0.99", "separable-0.95", "separable-0.99")


def test_c02_pd_balloons_cross_separability(tmp_path):
    results, timings = run_preset_panels("fig2", FIG2_BALLOONS, tmp_path)
    bad, parts = [], []
    for name in FIG2_BALLOONS:
        summ = results[name]["panels"][name]
        cc = summ["class_counts"]["separable"]
        both_on_grid = cc["true"] > 0 and cc["false"] > 0
        pairs = summ.get("refined_pairs", 0)
        if not (both_on_grid or pairs > 0) or timings[name] >= 60.0:
            bad.append(name)
        bad += failed_checks(results[name])
        parts.append(f"{name} sep/ent={cc['true']}/{cc['false']} pairs={pairs} {timings[name]:.2f}s")
    # refined endpoints re-evaluated through the scalar module
    refined = (tmp_path / "werner-0.99" / "werner-0.99" / "refined.csv").read_text().splitlines()
    header = refined[0].split(",")
    row = dict(zip(header, refined[1].split(",")))
    c = tuple(float(row[k]) for k in ("c1", "c2", "c3"))
    f = qubits.pd_fidelity(c, qubits.werner(0.45))
    if not (f >= 0.99 - 1e-9 and qubits.is_physical_pd(c)):
        bad.append("refined-recheck")
    record(2, "Werner and separable PD balloons cross the separable border",
           not bad, "; ".join(parts) + (f"; failed: {bad}" if bad else ""))


def test_c03_werner_slice_resource_ranges(tmp_path):
    results, _ = run_preset_panels("fig2", ("werner-slice-c3",), tmp_path)
    summ = results["werner-slice-c3"]["panels"]["werner-slice-c3"]
    neg, dis = summ["resources"]["negativity"], summ["resources"]["discord"]
    axes = {a["name"]: a for a in preset("fig2")["panels"][-1]["axes"]}
    shape_ok = axes["c3"]["steps"] == 1 and axes["c3"]["min"] == -0.45
    shape_ok &= axes["c1"]["steps"] == 201 and axes["c2"]["steps"] == 201
    ok = (shape_ok and neg["min"] == 0.0 and neg["max"] >= 0.15 and dis["max"] > dis["min"]
          and not failed_checks(results["werner-slice-c3"]))
    record(3, "Werner slice c3=-0.45 resource ranges (201^2)", ok,
           f"negativity [{neg['min']:.4g}, {neg['max']:.4g}], discord [{dis['min']:.4g}, {dis['max']:.4g}]")


# -- 4 ---------------------------------------------------------------------------


def test_c04_qubit_oracles():
    rng = np.random.default_rng(2024)
    worst_f, worst_fvdg = 0.0, 0.0
    for _ in range(1000):
        a, b = random_pd(rng), random_pd(rng)
        ra, rb = qubits.pd_to_density_matrix(a), qubits.pd_to_density_matrix(b)
        f_ref = qubits.uhlmann_fidelity(ra, rb)
        worst_f = max(worst_f, abs(qubits.pd_fidelity(a, b) - f_ref))
        t = qubits.trace_distance(ra, rb)
        worst_fvdg = max(worst_fvdg, (1 - math.sqrt(f_ref)) - t, t - math.sqrt(max(1 - f_ref, 0.0)))
    worst_d = 0.0
    for _ in range(50):
        c = random_pd(rng)
        worst_d = max(worst_d, abs(qubits.pd_discord(c) - qubits.measured_discord(qubits.pd_to_density_matrix(c))))
    ok = worst_f <= 1e-10 and worst_d <= 1e-6 and worst_fvdg <= 1e-12
    record(4, "PD fidelity, discord and Fuchs-van de Graaf vs matrix oracles", ok,
           f"fidelity {worst_f:.1e}, discord {worst_d:.1e}, sandwich violation {max(worst_fvdg, 0):.1e}")


# -- 5 ---------------------------------------------------------------------------

FIG3_TARGETS = ("thermal", "squeezed-0.6", "squeezed-1.6")


def test_c05_single_mode_balloons_cross_classicality(tmp_path):
    names = [f"{t}{suf}" for t in FIG3_TARGETS for suf in ("", "-mean", "-mean-var")]
    results, _ = run_preset_panels("fig3", names, tmp_path)

    def both(name):
        cc = results[name]["panels"][name]["class_counts"]["nonclassical"]
        return cc["true"] > 0 and cc["false"] > 0, cc

    plain = {t: both(t) for t in FIG3_TARGETS}
    plain_ok = all(v[0] for v in plain.values())
    mean_hit = [t for t in FIG3_TARGETS if both(f"{t}-mean")[0]]
    var_hit = [t for t in FIG3_TARGETS if both(f"{t}-mean-var")[0]]
    ok = plain_ok and bool(mean_hit) and bool(var_hit)
    detail = ", ".join(f"{t} nc/cl={v[1]['true']}/{v[1]['false']}" for t, v in plain.items())
    record(5, "STS1 balloons overlap both regions, windows for some target", ok,
           f"{detail}; mean window: {mean_hit}; mean+var window: {var_hit}")


# -- 6 ---------------------------------------------------------------------------


def test_c06_gaussian_fock_oracle():
    rng = np.random.default_rng(7)
    states = []
    for _ in range(201):
        p = (float(rng.uniform(0.4, 2.5)), float(rng.uniform(0.3, 1.0)))
        g = gaussian1.displaced_sts1(p, float(rng.uniform(0.0, 2.0)))
        states.append((g, fock.fock_oracle_adaptive(g, tol=1e-13)))
    worst_f = worst_m = 0.0
    for (g1, r1), (g2, r2) in zip(states, states[1:]):
        worst_f = max(worst_f, abs(gaussian1.fidelity_gaussian1(g1, g2) - fock.fock_fidelity(r1, r2)))
    for g, r in states:
        st = gaussian1.photon_stats(g)
        m, v = fock.fock_moments(r)
        worst_m = max(worst_m, abs(st.mean_n - m), abs(st.var_n - v))

    worst_c = 0.0
    for _ in range(200):
        x1, x2 = rng.uniform(0.05, 2.0, size=2)
        c1 = gaussian1.displaced_sts1((1.0, 1.0), x1)
        c2 = gaussian1.displaced_sts1((1.0, 1.0), x2)
        st = gaussian1.photon_stats(c1)
        worst_c = max(worst_c, abs(gaussian1.fidelity_gaussian1(c1, c2) - math.exp(-((x1 - x2) ** 2))),
                      abs(st.mean_n - x1 * x1), abs(st.fano - 1.0))
    ok = worst_f <= 1e-6 and worst_m <= 1e-6 and worst_c <= 1e-9
    record(6, "single-mode closed forms vs Fock truncation (200 pairs)", ok,
           f"fidelity {worst_f:.1e}, moments {worst_m:.1e}, coherent {worst_c:.1e}")


# -- 7 ---------------------------------------------------------------------------

FIG4_PANELS = ("sub", "sub-windows", "super", "super-windows")


def test_c07_displaced_balloons_cross_poissonian(tmp_path):
    results, _ = run_preset_panels("fig4", FIG4_PANELS, tmp_path)
    parts, bad = [], []
    for name in FIG4_PANELS:
        summ = results[name]["panels"][name]
        cc = summ["class_counts"]["subpoissonian"]
        pairs = summ.get("refined_pairs", 0)
        if name.endswith("windows") and not summ["within_window"]:
            bad.append(f"{name}:not-windowed")
        if not ((cc["true"] > 0 and cc["false"] > 0) or pairs > 0):
            bad.append(name)
        bad += failed_checks(results[name])
        parts.append(f"{name} sub/super={cc['true']}/{cc['false']} pairs={pairs}")
    record(7, "displaced STS1 balloons hold sub- and super-Poissonian points", not bad,
           "; ".join(parts) + (f"; failed: {bad}" if bad else ""))


# -- 8 ---------------------------------------------------------------------------


def test_c08_two_mode_balloons_and_tmsv_band(tmp_path):
    results, _ = run_preset_panels("fig5", ("entangled", "separable"), tmp_path)
    parts, bad = [], []
    for name in ("entangled", "separable"):
        summ = results[name]["panels"][name]
        cc = summ["class_counts"]["separable"]
        pairs = summ.get("refined_pairs", 0)
        if not ((cc["true"] > 0 and cc["false"] > 0) or pairs > 0):
            bad.append(name)
        bad += failed_checks(results[name])
        parts.append(f"{name} sep/ent={cc['true']}/{cc['false']} pairs={pairs}")

    panels, _ = parse_document(preset("fig5"))
    band = next(p for p in panels if p.name == "tmsv-band")
    table = sc.scan(band.grid, band.constraint)
    n = table.params["n_tot"]
    sel = table.flags["in_balloon"] & (n > 0.9) & (n < 1.1)
    f = table.fidelity[sel]
    beta = table.params["beta"][sel]
    strict_band = bool(np.all((f > 0.95) & (f < 0.99)))
    ok = not bad and sel.any() and bool((beta < 1).any()) and strict_band
    parts.append(f"tmsv band 0.9<N<1.1: {int(sel.sum())} points, beta min {beta.min() if sel.any() else math.nan:.3g}")
    record(8, "STS2 balloons cross d~-=1/2; TMSV band has beta<1 points", ok,
           "; ".join(parts) + (f"; failed: {bad}" if bad else ""))


# -- 9 ---------------------------------------------------------------------------


def test_c09_discord_anchors(tmp_path):
    d = gaussian2.gaussian_b_discord((2.0, 0.2, 0.5))
    t0 = time.perf_counter()
    results, _ = run_preset_panels("fig6", ("entangled",), tmp_path)
    elapsed = time.perf_counter() - t0
    summ = results["entangled"]["panels"]["entangled"]
    axes = preset("fig6")["panels"][0]["axes"]
    rel = summ["relative"]["discord"]
    ok = (abs(d - 0.22) <= 0.01 and all(a["steps"] == 41 for a in axes)
          and abs(rel["min"] - 0.38) <= 0.05 and abs(rel["max"] - 1.88) <= 0.05 and elapsed < 120.0)
    record(9, "two-mode discord anchor and relative extrema (41^3)", ok,
           f"D={d:.6f}, relative [{rel['min']:.4f}, {rel['max']:.4f}], {elapsed:.2f}s")


# -- 10 --------------------------------------------------------------------------


def test_c10_structural_invariants(tmp_path, monkeypatch):
    purity = max(max(abs(sp.d_minus - 0.5), abs(sp.d_plus - 0.5))
                 for sp in (gaussian2.symplectic_spectrum((n, 1.0, 0.5)) for n in (0.5, 1, 2, 5)))
    rng = np.random.default_rng(11)
    zero_discord = max(abs(gaussian2.gaussian_b_discord((rng.uniform(0, 5), 0.0, rng.uniform(0, 1))))
                       for _ in range(100))
    swap = 0.0
    for _ in range(100):
        p, r = random_sts2(rng), random_sts2(rng)
        ps, rs = (p[0], p[1], 1 - p[2]), (r[0], r[1], 1 - r[2])
        swap = max(swap, abs(gaussian2.fidelity_sts2(ps, rs) - gaussian2.fidelity_sts2(p, r)),
                   abs(gaussian2.symplectic_spectrum(ps).dt_minus - gaussian2.symplectic_spectrum(p).dt_minus))

    # small chunks so the multi-threaded run really splits the work
    monkeypatch.setattr(sc, "CHUNK", 4099)
    panels, anys = parse_document(preset("fig6"))
    run_panels(panels, anys, tmp_path / "t1", threads=1)
    run_panels(panels, anys, tmp_path / "t4", threads=4)
    files = sorted(p.relative_to(tmp_path / "t1") for p in (tmp_path / "t1").rglob("*") if p.is_file())
    match, mismatch, errors = filecmp.cmpfiles(tmp_path / "t1", tmp_path / "t4", [str(f) for f in files],
                                               shallow=False)
    ok = (purity <= 1e-10 and zero_discord <= 1e-12 and swap <= 1e-12
          and files and not mismatch and not errors)
    record(10, "TMSV purity, beta=0 discord, gamma swap, thread determinism", ok,
           f"purity {purity:.1e}, discord {zero_discord:.1e}, swap {swap:.1e}, "
           f"{len(match)}/{len(files)} files identical")


if __name__ == "__main__":
    import tempfile

    tests = [v for k, v in sorted(globals().items()) if k.startswith("test_c")]
    mp = pytest.MonkeyPatch()
    for i, fn in enumerate(tests, 1):
        with tempfile.TemporaryDirectory() as d:
            try:
                args = {"tmp_path": Path(d), "monkeypatch": mp}
                fn(**{k: args[k] for k in fn.__code__.co_varnames[: fn.__code__.co_argcount]})
            except AssertionError:
                pass
            except Exception as e:  # report and keep going
                RESULTS.setdefault(i, (False, fn.__name__, f"error: {e!r}"))
            finally:
                mp.undo()
        print(format_line(i) if i in RESULTS else f"FAIL [{i:2d}] {fn.__name__}: no result")
    sys.exit(0 if all(v[0] for v in RESULTS.values()) and len(RESULTS) == len(tests) else 1)
