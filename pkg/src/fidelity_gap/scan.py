"""Grid scans of fidelity and resource measures over parameter boxes.

A scan evaluates every point of a rectangular grid against a fixed target
state, marks the points whose fidelity lies in a band (the *balloon*), and
optionally those whose photon observables sit within a relative window of
the target's.  Results are held column-wise in a :class:`ScanTable`, which
also behaves as a sequence of :class:`ScanRecord` rows.

Evaluation is split into fixed-size chunks that may run on worker threads;
chunk boundaries do not depend on the thread count, so output is identical
for any degree of parallelism.
"""

from __future__ import annotations

import math
import os
from collections.abc import Mapping, Sequence
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import gaussian1, gaussian2, kernels, qubits
from .qubits import UnphysicalStateError

__all__ = [
    "Axis",
    "ParamGrid",
    "FidelityConstraint",
    "RelativeWindowConstraint",
    "ScanRecord",
    "ScanTable",
    "RegionSummary",
    "Family",
    "FAMILIES",
    "ConfigError",
    "scan",
    "summarize",
    "refine_boundary",
    "evaluate_points",
]

CHUNK = 1 << 16
CLASS_TOL = 1e-12


class ConfigError(ValueError):
    """Invalid grid, constraint or family specification."""


# -- families ------------------------------------------------------------------


@dataclass(frozen=True)
class Family:
    name: str
    params: tuple[str, ...]
    resources: tuple[str, ...]
    flags: tuple[str, ...]
    observables: Mapping[str, str]
    _evaluate: Callable[[Mapping[str, np.ndarray], Mapping[str, float], object], dict]
    _validate: Callable[[Mapping[str, float]], None]
    _recheck: Callable[[Mapping[str, float], Mapping[str, float]], dict]

    def evaluate(self, cols, target, backend=None) -> dict:
        """Kernel evaluation plus derived resources and flags (no balloon /
        window flags)."""
        return self._evaluate(cols, target, kernels.get_backend(backend))

    def validate_target(self, target: Mapping[str, float]) -> None:
        self._validate(target)

    def recheck(self, params: Mapping[str, float], target: Mapping[str, float]) -> dict:
        """Scalar re-evaluation through the family module (for audits)."""
        return self._recheck(params, target)


def _bloch_eval(cols, target, k):
    t = (target["rx"], target["ry"], target["rz"])
    out = k.bloch(cols["rx"], cols["ry"], cols["rz"], t)
    phys = out["physical"]
    n2 = cols["rx"] ** 2 + cols["ry"] ** 2 + cols["rz"] ** 2
    return {
        "fidelity": out["fidelity"],
        "resources": {"purity": out["purity"]},
        "flags": {"physical": phys, "pure": phys & (n2 >= 1.0 - 1e-9)},
    }


def _bloch_validate(t):
    if t["rx"] ** 2 + t["ry"] ** 2 + t["rz"] ** 2 > 1.0 + qubits.PHYSICAL_TOL:
        raise UnphysicalStateError("target Bloch vector lies outside the unit ball")


def _bloch_recheck(p, t):
    r = (p["rx"], p["ry"], p["rz"])
    return {"fidelity": qubits.bloch_fidelity(r, (t["rx"], t["ry"], t["rz"])),
            "purity": 0.5 * (1.0 + sum(v * v for v in r))}


def _pd_eval(cols, target, k):
    out = k.pauli_diagonal(cols["c1"], cols["c2"], cols["c3"], (target["c1"], target["c2"], target["c3"]))
    phys = out["physical"]
    with np.errstate(invalid="ignore"):
        sep = phys & (out["negativity"] <= CLASS_TOL)
    return {
        "fidelity": out["fidelity"],
        "resources": {
            "negativity": out["negativity"],
            "discord": out["discord"],
            "lambda_min": out["lambda_min"],
        },
        "flags": {"physical": phys, "separable": sep, "entangled": phys & ~sep},
    }


def _pd_validate(t):
    if not qubits.is_physical_pd((t["c1"], t["c2"], t["c3"])):
        raise UnphysicalStateError("target Pauli-diagonal coefficients are unphysical")


def _pd_recheck(p, t):
    c = (p["c1"], p["c2"], p["c3"])
    return {
        "fidelity": qubits.pd_fidelity(c, (t["c1"], t["c2"], t["c3"])),
        "negativity": qubits.negativity(c),
        "discord": qubits.pd_discord(c),
    }


def _photon_flags(cols_s, cols_mu, out):
    phys = out["physical"]
    mean_n = out["mean_n"]
    var_n = out["var_n"]
    with np.errstate(invalid="ignore", divide="ignore"):
        fano = np.where(mean_n >= gaussian1.VACUUM_MEAN_N, var_n / np.where(mean_n > 0, mean_n, 1.0), np.nan)
        nonclassical = phys & ((cols_s < cols_mu) | (cols_s * cols_mu > 1.0))
        sub = phys & (fano < 1.0)
    return fano, nonclassical, sub


def _sts1_eval(cols, target, k):
    s, mu = cols["s"], cols["mu"]
    out = k.sts1(s, mu, np.zeros_like(s), (target["s"], target["mu"], 0.0))
    fano, nonclassical, sub = _photon_flags(s, mu, out)
    return {
        "fidelity": out["fidelity"],
        "resources": {"mean_n": out["mean_n"], "var_n": out["var_n"], "fano": fano},
        "flags": {"physical": out["physical"], "nonclassical": nonclassical, "subpoissonian": sub},
    }


def _dsts1_eval(cols, target, k):
    s, mu, x = cols["s"], cols["mu"], cols["x"]
    out = k.sts1(s, mu, x, (target["s"], target["mu"], target["x"]))
    fano, nonclassical, sub = _photon_flags(s, mu, out)
    return {
        "fidelity": out["fidelity"],
        "resources": {"mean_n": out["mean_n"], "var_n": out["var_n"], "fano": fano},
        "flags": {"physical": out["physical"], "nonclassical": nonclassical, "subpoissonian": sub},
    }


def _sts1_validate(t):
    gaussian1.sts1_cm((t["s"], t["mu"]))


def _sts1_recheck(p, t):
    g = gaussian1.displaced_sts1((p["s"], p["mu"]), p.get("x", 0.0))
    gt = gaussian1.displaced_sts1((t["s"], t["mu"]), t.get("x", 0.0))
    st = gaussian1.photon_stats(g)
    return {"fidelity": gaussian1.fidelity_gaussian1(g, gt), "mean_n": st.mean_n, "var_n": st.var_n, "fano": st.fano}


def _sts2_eval(cols, target, k):
    n = cols["n_tot"]
    out = k.sts2(n, cols["beta"], cols["gamma"], (target["n_tot"], target["beta"], target["gamma"]))
    phys = out["physical"]
    with np.errstate(invalid="ignore"):
        sep = phys & (out["dt_minus"] >= 0.5 - CLASS_TOL)
    return {
        "fidelity": out["fidelity"],
        "resources": {
            "d_minus": out["d_minus"],
            "d_plus": out["d_plus"],
            "dt_minus": out["dt_minus"],
            "discord": out["discord"],
            "total_photons": np.where(phys, n, np.nan),
        },
        "flags": {"physical": phys, "separable": sep, "entangled": phys & ~sep},
    }


def _sts2_validate(t):
    gaussian2.symplectic_spectrum(gaussian2.sts2_coeffs((t["n_tot"], t["beta"], t["gamma"])))


def _sts2_recheck(p, t):
    q = (p["n_tot"], p["beta"], p["gamma"])
    sp = gaussian2.symplectic_spectrum(q)
    return {
        "fidelity": gaussian2.fidelity_sts2(q, (t["n_tot"], t["beta"], t["gamma"])),
        "dt_minus": sp.dt_minus,
        "discord": gaussian2.gaussian_b_discord(q),
    }


FAMILIES: dict[str, Family] = {
    f.name: f
    for f in (
        Family("bloch-qubit", ("rx", "ry", "rz"), ("purity",), ("physical", "pure"), {},
               _bloch_eval, _bloch_validate, _bloch_recheck),
        Family("pauli-diagonal", ("c1", "c2", "c3"), ("negativity", "discord", "lambda_min"),
               ("physical", "separable", "entangled"), {}, _pd_eval, _pd_validate, _pd_recheck),
        Family("sts1", ("s", "mu"), ("mean_n", "var_n", "fano"),
               ("physical", "nonclassical", "subpoissonian"),
               {"mean-photons": "mean_n", "photon-variance": "var_n"},
               _sts1_eval, _sts1_validate, _sts1_recheck),
        Family("displaced-sts1", ("mu", "s", "x"), ("mean_n", "var_n", "fano"),
               ("physical", "nonclassical", "subpoissonian"),
               {"mean-photons": "mean_n", "photon-variance": "var_n"},
               _dsts1_eval, _sts1_validate, _sts1_recheck),
        Family("sts2", ("n_tot", "beta", "gamma"),
               ("d_minus", "d_plus", "dt_minus", "discord", "total_photons"),
               ("physical", "separable", "entangled"), {"total-photons": "total_photons"},
               _sts2_eval, _sts2_validate, _sts2_recheck),
    )
}


def get_family(name: str) -> Family:
    try:
        return FAMILIES[name]
    except KeyError:
        raise ConfigError(f"unknown family {name!r}; expected one of {sorted(FAMILIES)}") from None


# -- grid and constraints ------------------------------------------------------


@dataclass(frozen=True)
class Axis:
    """One grid axis.  ``steps == 1`` pins the axis at ``min == max``."""

    name: str
    min: float
    max: float
    steps: int

    def __post_init__(self):
        if not isinstance(self.steps, (int, np.integer)) or self.steps < 1:
            raise ConfigError(f"axis {self.name!r}: steps must be a positive integer, got {self.steps!r}")
        if not (math.isfinite(self.min) and math.isfinite(self.max)):
            raise ConfigError(f"axis {self.name!r}: bounds must be finite")
        if self.steps == 1:
            if self.min != self.max:
                raise ConfigError(f"axis {self.name!r}: a single-step axis needs min == max")
        elif not self.min < self.max:
            raise ConfigError(f"axis {self.name!r}: min must be < max (got {self.min}, {self.max})")

    def values(self) -> np.ndarray:
        if self.steps == 1:
            return np.array([float(self.min)])
        # i/(n-1) is exact-rational-rounded, so a (2n-1)-point axis contains
        # every point of the n-point axis bit for bit.
        frac = np.arange(self.steps) / (self.steps - 1)
        v = self.min + (self.max - self.min) * frac
        v[-1] = self.max
        return v

    @property
    def step(self) -> float:
        return 0.0 if self.steps == 1 else (self.max - self.min) / (self.steps - 1)


@dataclass(frozen=True)
class ParamGrid:
    family: str
    axes: tuple[Axis, ...]

    def __post_init__(self):
        fam = get_family(self.family)
        object.__setattr__(self, "axes", tuple(self.axes))
        names = [a.name for a in self.axes]
        if len(set(names)) != len(names):
            raise ConfigError(f"duplicate axis names in {names}")
        unknown = sorted(set(names) - set(fam.params))
        missing = sorted(set(fam.params) - set(names))
        if unknown or missing:
            msg = []
            if unknown:
                msg.append(f"unknown axis {', '.join(map(repr, unknown))}")
            if missing:
                msg.append(f"missing axis {', '.join(map(repr, missing))}")
            raise ConfigError(f"family {self.family!r} expects axes {list(fam.params)}: " + "; ".join(msg))

    @property
    def shape(self) -> tuple[int, ...]:
        return tuple(a.steps for a in self.axes)

    @property
    def size(self) -> int:
        return int(np.prod(self.shape))

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(a.name for a in self.axes)

    def points(self, start: int = 0, stop: int | None = None) -> dict[str, np.ndarray]:
        """Parameter columns for grid indices ``[start, stop)``, row-major."""
        stop = self.size if stop is None else stop
        idx = np.unravel_index(np.arange(start, stop), self.shape)
        return {a.name: a.values()[i] for a, i in zip(self.axes, idx)}

    def scaled(self, factor_minus_one: int = 2) -> "ParamGrid":
        """Grid with every non-pinned axis refined from ``n`` to
        ``factor*(n-1)+1`` points (a superset of the original grid)."""
        return ParamGrid(
            self.family,
            tuple(
                a if a.steps == 1 else Axis(a.name, a.min, a.max, factor_minus_one * (a.steps - 1) + 1)
                for a in self.axes
            ),
        )


def _target_dict(family: Family, target) -> dict[str, float]:
    if isinstance(target, Mapping):
        keys = set(target)
        if keys != set(family.params):
            raise ConfigError(
                f"target for {family.name!r} needs exactly {list(family.params)}, got {sorted(keys)}"
            )
        return {k: float(target[k]) for k in family.params}
    vals = tuple(target)
    if len(vals) != len(family.params):
        raise ConfigError(f"target for {family.name!r} needs {len(family.params)} values")
    return {k: float(v) for k, v in zip(family.params, vals)}


@dataclass(frozen=True)
class FidelityConstraint:
    """Fidelity band ``f_min <= F <= f_max`` (inclusive) around ``target``."""

    target: Mapping[str, float] | Sequence[float]
    f_min: float
    f_max: float = 1.0

    def __post_init__(self):
        if not (0.0 <= self.f_min <= 1.0 and 0.0 <= self.f_max <= 1.0):
            raise ConfigError(f"fidelity bounds must lie in [0, 1], got [{self.f_min}, {self.f_max}]")
        if self.f_min > self.f_max:
            raise ConfigError(f"fidelity band is empty: f_min={self.f_min} > f_max={self.f_max}")


@dataclass(frozen=True)
class RelativeWindowConstraint:
    """``|v - v_target| <= rel_tol * v_target`` for one observable."""

    observable: str
    rel_tol: float

    def __post_init__(self):
        if not 0.0 < self.rel_tol < 1.0:
            raise ConfigError(f"rel_tol must lie in (0, 1), got {self.rel_tol}")


# -- records -------------------------------------------------------------------


@dataclass(frozen=True)
class ScanRecord:
    grid_index: int
    params: dict[str, float]
    fidelity: float
    resources: dict[str, float]
    flags: dict[str, bool]


@dataclass
class ScanTable(Sequence):
    """Column store of a scan; indexing yields :class:`ScanRecord`."""

    grid: ParamGrid
    constraint: FidelityConstraint
    windows: tuple[RelativeWindowConstraint, ...]
    target: dict[str, float]
    target_values: dict[str, float]
    params: dict[str, np.ndarray]
    fidelity: np.ndarray
    resources: dict[str, np.ndarray]
    flags: dict[str, np.ndarray]
    backend: str = ""

    def __len__(self) -> int:
        return len(self.fidelity)

    def __getitem__(self, i):
        if isinstance(i, slice):
            return [self[j] for j in range(*i.indices(len(self)))]
        i = int(i)
        if i < 0:
            i += len(self)
        if not 0 <= i < len(self):
            raise IndexError(i)
        return ScanRecord(
            grid_index=i,
            params={k: float(v[i]) for k, v in self.params.items()},
            fidelity=float(self.fidelity[i]),
            resources={k: float(v[i]) for k, v in self.resources.items()},
            flags={k: bool(v[i]) for k, v in self.flags.items()},
        )

    @property
    def family(self) -> Family:
        return get_family(self.grid.family)

    @property
    def columns(self) -> list[str]:
        return (
            ["grid_index", *self.params, "fidelity", *self.resources, *self.flags]
        )


def _classify(family: Family, target: dict, fc: FidelityConstraint, windows, tvals: dict,
              cols: dict, backend) -> dict:
    ev = family.evaluate(cols, target, backend)
    fid = ev["fidelity"]
    phys = ev["flags"]["physical"]
    with np.errstate(invalid="ignore"):
        balloon = phys & (fid >= fc.f_min) & (fid <= fc.f_max)
        in_window = phys.copy()
        for w in windows:
            key = family.observables[w.observable]
            v = ev["resources"][key]
            vt = tvals[key]
            in_window &= np.abs(v - vt) <= w.rel_tol * vt
    ev["flags"]["in_balloon"] = balloon
    ev["flags"]["in_window"] = in_window
    return ev


def _check_windows(family: Family, windows) -> tuple[RelativeWindowConstraint, ...]:
    windows = tuple(windows or ())
    for w in windows:
        if w.observable not in family.observables:
            raise ConfigError(
                f"observable {w.observable!r} not available for family {family.name!r}; "
                f"expected one of {sorted(family.observables)}"
            )
    return windows


def _target_values(family: Family, target: dict, backend) -> dict[str, float]:
    one = {k: np.array([v]) for k, v in target.items()}
    ev = family.evaluate(one, target, backend)
    return {k: float(v[0]) for k, v in ev["resources"].items()}


def default_threads() -> int:
    return os.cpu_count() or 1


def scan(grid: ParamGrid, fc: FidelityConstraint, windows=(), *, threads: int | None = None,
         backend: str | None = None) -> ScanTable:
    """Evaluate every grid point against the target of ``fc``.

    Returns one row per grid point in row-major axis order.  Unphysical
    points are kept, flagged ``physical=False`` and never in the balloon.

    Raises
    ------
    UnphysicalStateError
        If the target is not a valid state.
    ConfigError
        If target keys or window observables do not match the family.
    """
    family = get_family(grid.family)
    target = _target_dict(family, fc.target)
    family.validate_target(target)
    windows = _check_windows(family, windows)
    kmod = kernels.get_backend(backend)
    tvals = _target_values(family, target, kmod.NAME)

    size = grid.size
    starts = list(range(0, size, CHUNK))

    def work(start: int) -> tuple[dict, dict]:
        cols = grid.points(start, min(start + CHUNK, size))
        return cols, _classify(family, target, fc, windows, tvals, cols, kmod.NAME)

    threads = default_threads() if threads is None else max(int(threads), 1)
    if threads == 1 or len(starts) <= 1:
        parts = [work(s) for s in starts]
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            parts = list(pool.map(work, starts))

    def cat(get) -> np.ndarray:
        arrs = [get(p) for p in parts]
        return np.concatenate(arrs) if arrs else np.empty(0)

    params = {n: cat(lambda p, n=n: p[0][n]) for n in grid.names}
    fidelity = cat(lambda p: p[1]["fidelity"])
    res_names = parts[0][1]["resources"].keys() if parts else family.resources
    flag_names = parts[0][1]["flags"].keys() if parts else (*family.flags, "in_balloon", "in_window")
    resources = {n: cat(lambda p, n=n: p[1]["resources"][n]) for n in res_names}
    flags = {n: cat(lambda p, n=n: p[1]["flags"][n]).astype(bool) for n in flag_names}
    return ScanTable(grid, fc, windows, target, tvals, params, fidelity, resources, flags, kmod.NAME)


def evaluate_points(family: str, points: Mapping[str, np.ndarray], fc: FidelityConstraint,
                    windows=(), backend: str | None = None) -> dict:
    """Evaluate arbitrary parameter points (not on a grid) with the same
    classification as :func:`scan`."""
    fam = get_family(family)
    target = _target_dict(fam, fc.target)
    windows = _check_windows(fam, windows)
    tvals = _target_values(fam, target, backend)
    cols = {k: np.asarray(points[k], dtype=float) for k in fam.params}
    return _classify(fam, target, fc, windows, tvals, cols, backend)


# -- summaries -----------------------------------------------------------------


@dataclass
class RegionSummary:
    total_points: int = 0
    physical_points: int = 0
    balloon_points: int = 0
    window_points: int = 0
    within_window: bool = False
    resources: dict[str, dict[str, float]] = field(default_factory=dict)
    relative: dict[str, dict[str, float]] = field(default_factory=dict)
    target: dict[str, float] = field(default_factory=dict)
    class_counts: dict[str, dict[str, int]] = field(default_factory=dict)
    crosses_boundary: dict[str, bool] = field(default_factory=dict)
    fidelity: dict[str, float] = field(default_factory=dict)
    param_ranges: dict[str, dict[str, float]] = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "balloon_points": self.balloon_points,
            "class_counts": self.class_counts,
            "crosses_boundary": self.crosses_boundary,
            "fidelity": self.fidelity,
            "param_ranges": self.param_ranges,
            "physical_points": self.physical_points,
            "relative": self.relative,
            "resources": self.resources,
            "target": self.target,
            "total_points": self.total_points,
            "window_points": self.window_points,
            "within_window": self.within_window,
        }


def _records_to_columns(records: Sequence[ScanRecord]):
    if not records:
        return {}, np.empty(0), {}, {}
    params = {k: np.array([r.params[k] for r in records]) for k in records[0].params}
    fid = np.array([r.fidelity for r in records])
    res = {k: np.array([r.resources[k] for r in records]) for k in records[0].resources}
    flags = {k: np.array([r.flags[k] for r in records], dtype=bool) for k in records[0].flags}
    return params, fid, res, flags


def _stats(v: np.ndarray) -> dict[str, float]:
    v = v[np.isfinite(v)]
    if v.size == 0:
        return {}
    return {"max": float(v.max()), "mean": float(v.mean()), "min": float(v.min())}


def summarize(records, classifiers: Sequence[str] = (), *, within_window: bool = False) -> RegionSummary:
    """Aggregate a scan: counts, resource extrema over the balloon, and
    which classifiers take both values inside it.

    Extrema and class counts use physical in-balloon points (and, with
    ``within_window``, only those also inside every relative window).  An
    empty balloon yields zero counts and no extrema.
    """
    target_vals: dict[str, float] = {}
    if isinstance(records, ScanTable):
        params, fid, res, flags = records.params, records.fidelity, records.resources, records.flags
        target_vals = dict(records.target_values)
    else:
        params, fid, res, flags = _records_to_columns(list(records))
    n = len(fid)
    out = RegionSummary(total_points=n, within_window=within_window)
    if n == 0:
        out.crosses_boundary = {c: False for c in classifiers}
        out.class_counts = {c: {"false": 0, "true": 0} for c in classifiers}
        return out
    phys = flags.get("physical", np.ones(n, dtype=bool))
    balloon = flags.get("in_balloon", np.ones(n, dtype=bool)) & phys
    window = balloon & flags.get("in_window", np.ones(n, dtype=bool))
    sel = window if within_window else balloon
    out.physical_points = int(phys.sum())
    out.balloon_points = int(balloon.sum())
    out.window_points = int(window.sum())
    out.target = target_vals
    if sel.any():
        out.fidelity = _stats(fid[sel])
        out.resources = {k: s for k, v in res.items() if (s := _stats(v[sel]))}
        out.param_ranges = {k: {"max": float(v[sel].max()), "min": float(v[sel].min())} for k, v in params.items()}
        for k, s in out.resources.items():
            t = target_vals.get(k)
            if t is not None and math.isfinite(t) and abs(t) > 1e-300:
                out.relative[k] = {"max": s["max"] / t, "min": s["min"] / t}
    for c in classifiers:
        if c not in flags:
            raise ConfigError(f"unknown classifier {c!r}; available flags: {sorted(flags)}")
        t = int((flags[c] & sel).sum())
        f = int((~flags[c] & sel).sum())
        out.class_counts[c] = {"false": f, "true": t}
        out.crosses_boundary[c] = t > 0 and f > 0
    return out


# -- boundary refinement -------------------------------------------------------


def refine_boundary(grid: ParamGrid, fc: FidelityConstraint, classifier: str, windows=(), *,
                    table: ScanTable | None = None, resolution: float = 1e-4,
                    max_pairs: int | None = None, backend: str | None = None,
                    threads: int | None = None) -> list[ScanRecord]:
    """Bisect grid edges whose endpoints straddle ``classifier`` inside the
    balloon (and windows).

    Returns records in pairs ``[a0, b0, a1, b1, ...]``: each pair lies on
    one grid edge, at most ``resolution`` apart, with opposite classifier
    values and both endpoints inside the balloon.  Refined points are off
    the grid and carry ``grid_index = -1``.  No crossing gives ``[]``.
    """
    if table is None:
        table = scan(grid, fc, windows, threads=threads, backend=backend)
    family = get_family(grid.family)
    windows = _check_windows(family, windows)
    if classifier not in table.flags:
        raise ConfigError(f"unknown classifier {classifier!r}")
    valid = table.flags["in_balloon"] & table.flags["in_window"]
    cls = table.flags[classifier]
    shape = grid.shape
    flat = np.arange(grid.size).reshape(shape)
    lo_idx, hi_idx = [], []
    for k, ax in enumerate(grid.axes):
        if ax.steps < 2:
            continue
        a = np.take(flat, np.arange(ax.steps - 1), axis=k).ravel()
        b = np.take(flat, np.arange(1, ax.steps), axis=k).ravel()
        m = valid[a] & valid[b] & (cls[a] != cls[b])
        lo_idx.append(a[m])
        hi_idx.append(b[m])
    if not lo_idx:
        return []
    lo_i = np.concatenate(lo_idx)
    hi_i = np.concatenate(hi_idx)
    if lo_i.size == 0:
        return []
    order = np.lexsort((hi_i, lo_i))
    lo_i, hi_i = lo_i[order], hi_i[order]
    if max_pairs is not None:
        lo_i, hi_i = lo_i[:max_pairs], hi_i[:max_pairs]

    names = grid.names
    lo = {n: table.params[n][lo_i].copy() for n in names}
    hi = {n: table.params[n][hi_i].copy() for n in names}
    side = cls[lo_i].copy()
    target = table.target

    def classify(cols):
        return _classify(family, target, fc, windows, table.target_values, cols, backend)

    def width():
        return np.max(np.abs(np.stack([hi[n] - lo[n] for n in names])), axis=0)

    while np.any(width() > resolution):
        mid = {n: 0.5 * (lo[n] + hi[n]) for n in names}
        ev = classify(mid)
        same = ev["flags"]["physical"] & (ev["flags"][classifier] == side)
        for n in names:
            lo[n] = np.where(same, mid[n], lo[n])
            hi[n] = np.where(same, hi[n], mid[n])

    ev_lo = classify(lo)
    ev_hi = classify(hi)
    ok = (
        ev_lo["flags"]["in_balloon"] & ev_hi["flags"]["in_balloon"]
        & ev_lo["flags"]["in_window"] & ev_hi["flags"]["in_window"]
        & (ev_lo["flags"][classifier] != ev_hi["flags"][classifier])
    )
    out: list[ScanRecord] = []
    for i in np.flatnonzero(ok):
        for pts, ev in ((lo, ev_lo), (hi, ev_hi)):
            out.append(
                ScanRecord(
                    grid_index=-1,
                    params={n: float(pts[n][i]) for n in names},
                    fidelity=float(ev["fidelity"][i]),
                    resources={k: float(v[i]) for k, v in ev["resources"].items()},
                    flags={k: bool(v[i]) for k, v in ev["flags"].items()},
                )
            )
    return out
