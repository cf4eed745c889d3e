"""Scan presets reproducing each figure.

Every preset is a plain JSON-compatible document in the same schema that
``fidelity-gap scan --config`` accepts, so ``--dump-config figN`` followed
by ``scan --config`` reproduces ``figure figN`` byte for byte.

Targets and thresholds are the published ones.  Grid boxes are ours: 41
points per axis for 3-axis scans and 201 per axis for 2-axis slices.
Where a balloon is much thinner than a global box, the panel uses a box
fitted around its target so the grid resolves it.
"""

from __future__ import annotations

import copy

__all__ = ["PRESETS", "preset"]


def _axes(*axes):
    return [{"name": n, "min": lo, "max": hi, "steps": k} for n, lo, hi, k in axes]


def _panel(name, family, axes, target, f_min, f_max=1.0, *, windows=(), classifiers=(),
           within_window=False, refine=None, expect=None):
    return {
        "name": name,
        "family": family,
        "axes": axes,
        "target": target,
        "band": {"f_min": f_min, "f_max": f_max},
        "windows": [{"observable": o, "rel_tol": 0.1} for o in windows],
        "classifiers": list(classifiers),
        "within_window": within_window,
        "refine": refine,
        "expect": expect or {},
    }


BLOCH = _axes(("rx", -1.0, 1.0, 41), ("ry", -1.0, 1.0, 41), ("rz", -1.0, 1.0, 41))
PD = _axes(("c1", -1.0, 1.0, 41), ("c2", -1.0, 1.0, 41), ("c3", -1.0, 1.0, 41))
STS1 = _axes(("s", 0.3, 2.0, 201), ("mu", 0.3, 1.0, 201))
STS2 = _axes(("n_tot", 0.0, 4.0, 41), ("beta", 0.0, 1.0, 41), ("gamma", 0.0, 1.0, 41))

KET0 = {"rx": 0.0, "ry": 0.0, "rz": 1.0}
WERNER = {"c1": -0.45, "c2": -0.45, "c3": -0.45}
PD_SEP = {"c1": 0.3, "c2": -0.3, "c3": 0.1}

_EPS = 1e-9

PRESETS: dict[str, dict] = {
    # Single qubit near |0>: threshold F > 0.9 and band F = 0.925 +- 0.025.
    "fig1": {
        "panels": [
            _panel("threshold-0.90", "bloch-qubit", BLOCH, KET0, 0.9, classifiers=("pure",),
                   expect={"nonempty": True,
                           "bounds": {"param_ranges.rz.min": [0.8 - _EPS, 0.8 + _EPS]}}),
            _panel("band-0.925", "bloch-qubit", BLOCH, KET0, 0.9, 0.95, classifiers=("pure",),
                   expect={"nonempty": True,
                           "bounds": {"param_ranges.rz.min": [0.8 - _EPS, 0.8 + _EPS],
                                      "param_ranges.rz.max": [0.9 - _EPS, 0.9 + _EPS]}}),
        ]
    },
    # Werner c = 0.45 (entangled) and separable (0.3, -0.3, 0.1), F > 0.95 / 0.99,
    # plus the c3 = -0.45 slice of the Werner F > 0.95 balloon.
    "fig2": {
        "panels": [
            *(
                _panel(f"{label}-{f:.2f}", "pauli-diagonal", PD, tgt, f,
                       classifiers=("separable",), refine="separable",
                       expect={"crosses": ["separable"]})
                for label, tgt in (("werner", WERNER), ("separable", PD_SEP))
                for f in (0.95, 0.99)
            ),
            _panel("werner-slice-c3", "pauli-diagonal",
                   _axes(("c1", -1.0, 1.0, 201), ("c2", -1.0, 1.0, 201), ("c3", -0.45, -0.45, 1)),
                   WERNER, 0.95, classifiers=("separable",),
                   expect={"crosses": ["separable"],
                           "bounds": {"resources.negativity.min": [0.0, 0.0],
                                      "resources.negativity.max": [0.15, 1.0],
                                      "resources.discord.max": [1e-6, 2.0]}}),
        ]
    },
    # STS1 targets: thermal (s=1, mu=0.9) and squeezed (mu=0.7, s=0.6 / 1.6),
    # F > 0.99, alone and with 10% windows on <n> and on <n> plus <dn^2>.
    "fig3": {
        "panels": [
            p
            for label, tgt in (("thermal", {"s": 1.0, "mu": 0.9}),
                               ("squeezed-0.6", {"s": 0.6, "mu": 0.7}),
                               ("squeezed-1.6", {"s": 1.6, "mu": 0.7}))
            for p in (
                _panel(f"{label}", "sts1", STS1, tgt, 0.99, classifiers=("nonclassical",),
                       refine="nonclassical", expect={"crosses": ["nonclassical"]}),
                _panel(f"{label}-mean", "sts1", STS1, tgt, 0.99, windows=("mean-photons",),
                       classifiers=("nonclassical",), within_window=True, expect={"nonempty": True}),
                _panel(f"{label}-mean-var", "sts1", STS1, tgt, 0.99,
                       windows=("mean-photons", "photon-variance"),
                       classifiers=("nonclassical",), within_window=True, expect={"nonempty": True}),
            )
        ],
        "expect_any": [
            {"panels": ["thermal-mean", "squeezed-0.6-mean", "squeezed-1.6-mean"], "crosses": "nonclassical"},
            {"panels": ["thermal-mean-var", "squeezed-0.6-mean-var", "squeezed-1.6-mean-var"],
             "crosses": "nonclassical"},
        ],
    },
    # Displaced STS1, F_G > 0.97 around (mu=0.9, s=1.4, x=0.5) and
    # (mu=0.7, s=1.2, x=1.5); then the mu = 0.8 slice with its two targets.
    "fig4": {
        "panels": [
            p
            for label, tgt, box in (
                ("sub", {"mu": 0.9, "s": 1.4, "x": 0.5},
                 _axes(("mu", 0.6, 1.0, 41), ("s", 0.8, 2.4, 41), ("x", 0.0, 1.0, 41))),
                ("super", {"mu": 0.7, "s": 1.2, "x": 1.5},
                 _axes(("mu", 0.5, 0.9, 41), ("s", 0.7, 2.0, 41), ("x", 1.2, 1.9, 41))),
            )
            for p in (
                _panel(label, "displaced-sts1", box, tgt, 0.97, classifiers=("subpoissonian",),
                       refine="subpoissonian", expect={"crosses": ["subpoissonian"]}),
                _panel(f"{label}-windows", "displaced-sts1", box, tgt, 0.97,
                       windows=("mean-photons", "photon-variance"), classifiers=("subpoissonian",),
                       within_window=True, refine="subpoissonian",
                       expect={"crosses": ["subpoissonian"]}),
            )
        ]
        + [
            _panel(f"slice-{label}{suffix}", "displaced-sts1",
                   _axes(("mu", 0.8, 0.8, 1), ("s", 0.3, 2.5, 201), ("x", 0.0, 2.5, 201)),
                   tgt, 0.97, windows=win, classifiers=("subpoissonian",),
                   within_window=bool(win), expect={"nonempty": True})
            for label, tgt in (("sub", {"mu": 0.8, "s": 1.5, "x": 1.5}),
                               ("super", {"mu": 0.8, "s": 1.0, "x": 0.8}))
            for suffix, win in (("", ()), ("-windows", ("mean-photons", "photon-variance")))
        ]
    },
    # STS2: entangled (2.5, 0.2, 0.5) and separable (1, 0.13, 0.5) at F > 0.99;
    # TMSV N=1 band 0.95 < F < 0.99 with the 0.9 < N < 1.1 stripe.
    "fig5": {
        "panels": [
            _panel("entangled", "sts2",
                   _axes(("n_tot", 1.5, 3.5, 41), ("beta", 0.0, 0.4, 41), ("gamma", 0.0, 1.0, 41)),
                   {"n_tot": 2.5, "beta": 0.2, "gamma": 0.5}, 0.99, classifiers=("separable",),
                   refine="separable", expect={"crosses": ["separable"]}),
            _panel("separable", "sts2",
                   _axes(("n_tot", 0.0, 2.0, 41), ("beta", 0.0, 0.4, 41), ("gamma", 0.0, 1.0, 41)),
                   {"n_tot": 1.0, "beta": 0.13, "gamma": 0.5}, 0.99, classifiers=("separable",),
                   refine="separable", expect={"crosses": ["separable"]}),
            _panel("tmsv-band", "sts2", STS2, {"n_tot": 1.0, "beta": 1.0, "gamma": 0.5}, 0.95, 0.99,
                   classifiers=("separable",), expect={"nonempty": True}),
            _panel("tmsv-band-stripe", "sts2", STS2, {"n_tot": 1.0, "beta": 1.0, "gamma": 0.5}, 0.95, 0.99,
                   windows=("total-photons",), classifiers=("separable",), within_window=True,
                   expect={"nonempty": True, "bounds": {"param_ranges.beta.min": [0.0, 1.0 - _EPS]}}),
        ]
    },
    # Discord spread: entangled target (2, 0.2, 0.5) at F > 0.95 (relative
    # discord 0.38 .. 1.88), and the N=2 TMSV band with its 10% energy stripe.
    "fig6": {
        "panels": [
            _panel("entangled", "sts2", STS2, {"n_tot": 2.0, "beta": 0.2, "gamma": 0.5}, 0.95,
                   classifiers=("separable",),
                   expect={"crosses": ["separable"],
                           "bounds": {"target.discord": [0.21, 0.23],
                                      "relative.discord.min": [0.33, 0.43],
                                      "relative.discord.max": [1.83, 1.93]}}),
            _panel("tmsv-band", "sts2", STS2, {"n_tot": 2.0, "beta": 1.0, "gamma": 0.5}, 0.95, 0.99,
                   classifiers=("separable",), expect={"nonempty": True}),
            _panel("tmsv-band-stripe", "sts2", STS2, {"n_tot": 2.0, "beta": 1.0, "gamma": 0.5}, 0.95, 0.99,
                   windows=("total-photons",), classifiers=("separable",), within_window=True,
                   expect={"nonempty": True}),
        ]
    },
}


def preset(fig_id: str) -> dict:
    """Deep copy of a figure preset."""
    try:
        return copy.deepcopy(PRESETS[fig_id])
    except KeyError:
        raise KeyError(f"unknown figure {fig_id!r}; expected one of {sorted(PRESETS)}") from None
