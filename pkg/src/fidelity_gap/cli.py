"""Command-line front end.

    fidelity-gap figure fig2 [--out DIR] [--threads K] [--backend NAME]
    fidelity-gap figure fig2 --dump-config > fig2.json
    fidelity-gap scan --config fig2.json [--out DIR]
    fidelity-gap selftest

Exit status: 0 on success, 1 for usage, configuration or I/O errors, and 2
when a scan runs but one of its stated expectations is not met.
"""

from __future__ import annotations

import argparse
import json
import math
import re
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import __version__, kernels
from .presets import PRESETS, preset
from .qubits import UnphysicalStateError
from .scan import (
    FAMILIES,
    Axis,
    ConfigError,
    FidelityConstraint,
    ParamGrid,
    RelativeWindowConstraint,
    ScanRecord,
    ScanTable,
    refine_boundary,
    scan,
    summarize,
)

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_UNMET = 2

_NAME_RE = re.compile(r"^[A-Za-z0-9._-]+$")
_PANEL_KEYS = {"name", "family", "axes", "target", "band", "windows", "classifiers",
               "within_window", "refine", "expect"}
_EXPECT_KEYS = {"nonempty", "crosses", "bounds"}


# -- configuration -------------------------------------------------------------


@dataclass(frozen=True)
class PanelConfig:
    name: str
    grid: ParamGrid
    constraint: FidelityConstraint
    windows: tuple[RelativeWindowConstraint, ...]
    classifiers: tuple[str, ...]
    within_window: bool
    refine: str | None
    expect: dict


def _num(v, where: str) -> float:
    if isinstance(v, bool) or not isinstance(v, (int, float)):
        raise ConfigError(f"{where}: expected a number, got {v!r}")
    v = float(v)
    if not math.isfinite(v):
        raise ConfigError(f"{where}: must be finite")
    return v


def _obj(v, where: str) -> dict:
    if not isinstance(v, dict):
        raise ConfigError(f"{where}: expected an object")
    return v


def _list(v, where: str) -> list:
    if not isinstance(v, list):
        raise ConfigError(f"{where}: expected a list")
    return v


def _panel_flags(family: str) -> set[str]:
    return set(FAMILIES[family].flags) | {"in_balloon", "in_window"}


def parse_panel(doc, where: str = "panel") -> PanelConfig:
    d = _obj(doc, where)
    extra = sorted(set(d) - _PANEL_KEYS)
    if extra:
        raise ConfigError(f"{where}: unknown field(s) {', '.join(extra)}")
    for key in ("name", "family", "axes", "target", "band"):
        if key not in d:
            raise ConfigError(f"{where}.{key}: required field missing")
    name = d["name"]
    if not isinstance(name, str) or not _NAME_RE.match(name):
        raise ConfigError(f"{where}.name: must match {_NAME_RE.pattern}, got {name!r}")
    family = d["family"]
    if family not in FAMILIES:
        raise ConfigError(f"{where}.family: unknown family {family!r}; expected one of {sorted(FAMILIES)}")

    axes = []
    for i, a in enumerate(_list(d["axes"], f"{where}.axes")):
        aw = f"{where}.axes[{i}]"
        a = _obj(a, aw)
        missing = sorted({"name", "min", "max", "steps"} - set(a))
        if missing:
            raise ConfigError(f"{aw}: missing field(s) {', '.join(missing)}")
        steps = a["steps"]
        if isinstance(steps, bool) or not isinstance(steps, int):
            raise ConfigError(f"{aw}.steps: expected an integer, got {steps!r}")
        if a["name"] not in FAMILIES[family].params:
            raise ConfigError(
                f"{aw}.name: unknown axis {a['name']!r} for family {family!r}; "
                f"expected {list(FAMILIES[family].params)}"
            )
        try:
            axes.append(Axis(a["name"], _num(a["min"], f"{aw}.min"), _num(a["max"], f"{aw}.max"), steps))
        except ConfigError as e:
            raise ConfigError(f"{aw}: {e}") from None
    try:
        grid = ParamGrid(family, tuple(axes))
    except ConfigError as e:
        raise ConfigError(f"{where}.axes: {e}") from None

    target = _obj(d["target"], f"{where}.target")
    params = FAMILIES[family].params
    bad = sorted(set(target) ^ set(params))
    if bad:
        raise ConfigError(f"{where}.target: expected exactly the keys {list(params)}, mismatch on {bad}")
    target = {k: _num(target[k], f"{where}.target.{k}") for k in params}

    band = _obj(d["band"], f"{where}.band")
    if "f_min" not in band:
        raise ConfigError(f"{where}.band.f_min: required field missing")
    f_min = _num(band["f_min"], f"{where}.band.f_min")
    f_max = _num(band.get("f_max", 1.0), f"{where}.band.f_max")
    try:
        fc = FidelityConstraint(target, f_min, f_max)
    except ConfigError as e:
        raise ConfigError(f"{where}.band: {e}") from None

    windows = []
    for i, w in enumerate(_list(d.get("windows", []), f"{where}.windows")):
        ww = f"{where}.windows[{i}]"
        w = _obj(w, ww)
        obs = w.get("observable")
        if obs not in FAMILIES[family].observables:
            raise ConfigError(
                f"{ww}.observable: {obs!r} not available for {family!r}; "
                f"expected one of {sorted(FAMILIES[family].observables)}"
            )
        try:
            windows.append(RelativeWindowConstraint(obs, _num(w.get("rel_tol"), f"{ww}.rel_tol")))
        except ConfigError as e:
            raise ConfigError(f"{ww}.rel_tol: {e}") from None

    flags = _panel_flags(family)
    classifiers = _list(d.get("classifiers", []), f"{where}.classifiers")
    for i, c in enumerate(classifiers):
        if c not in flags:
            raise ConfigError(f"{where}.classifiers[{i}]: unknown flag {c!r}; expected one of {sorted(flags)}")
    refine = d.get("refine")
    if refine is not None and refine not in flags:
        raise ConfigError(f"{where}.refine: unknown flag {refine!r}; expected one of {sorted(flags)}")
    within = d.get("within_window", False)
    if not isinstance(within, bool):
        raise ConfigError(f"{where}.within_window: expected true or false")

    expect = _obj(d.get("expect", {}), f"{where}.expect")
    extra = sorted(set(expect) - _EXPECT_KEYS)
    if extra:
        raise ConfigError(f"{where}.expect: unknown field(s) {', '.join(extra)}")
    for i, c in enumerate(_list(expect.get("crosses", []), f"{where}.expect.crosses")):
        if c not in flags:
            raise ConfigError(f"{where}.expect.crosses[{i}]: unknown flag {c!r}")
    for path, rng in _obj(expect.get("bounds", {}), f"{where}.expect.bounds").items():
        rng = _list(rng, f"{where}.expect.bounds.{path}")
        if len(rng) != 2:
            raise ConfigError(f"{where}.expect.bounds.{path}: expected [lo, hi]")
        for v in rng:
            _num(v, f"{where}.expect.bounds.{path}")

    return PanelConfig(name, grid, fc, tuple(windows), tuple(classifiers), within, refine, expect)


def parse_document(doc) -> tuple[list[PanelConfig], list[dict]]:
    """Validate a config document.  A document is either one panel object
    or ``{"panels": [...], "expect_any": [...]}``."""
    doc = _obj(doc, "config")
    if "panels" not in doc:
        return [parse_panel(doc, "config")], []
    extra = sorted(set(doc) - {"panels", "expect_any"})
    if extra:
        raise ConfigError(f"config: unknown field(s) {', '.join(extra)}")
    raw = _list(doc["panels"], "config.panels")
    if not raw:
        raise ConfigError("config.panels: at least one panel is required")
    panels = [parse_panel(p, f"config.panels[{i}]") for i, p in enumerate(raw)]
    names = [p.name for p in panels]
    dup = sorted({n for n in names if names.count(n) > 1})
    if dup:
        raise ConfigError(f"config.panels: duplicate panel name(s) {dup}")
    anys = _list(doc.get("expect_any", []), "config.expect_any")
    for i, a in enumerate(anys):
        a = _obj(a, f"config.expect_any[{i}]")
        for n in _list(a.get("panels"), f"config.expect_any[{i}].panels"):
            if n not in names:
                raise ConfigError(f"config.expect_any[{i}].panels: unknown panel {n!r}")
        if not isinstance(a.get("crosses"), str):
            raise ConfigError(f"config.expect_any[{i}].crosses: expected a flag name")
    return panels, anys


# -- output --------------------------------------------------------------------


def _clean(v):
    """JSON-safe copy: non-finite floats become null, numpy scalars plain."""
    if isinstance(v, dict):
        return {str(k): _clean(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_clean(x) for x in v]
    if isinstance(v, (bool, np.bool_)):
        return bool(v)
    if isinstance(v, (int, np.integer)):
        return int(v)
    if isinstance(v, (float, np.floating)):
        v = float(v)
        return v + 0.0 if math.isfinite(v) else None
    return v


def write_json(path: Path, obj) -> None:
    text = json.dumps(_clean(obj), sort_keys=True, indent=2, allow_nan=False)
    path.write_text(text + "\n", encoding="utf-8", newline="\n")


def _fmt(col: np.ndarray) -> list[str]:
    if col.dtype == bool:
        return ["1" if v else "0" for v in col.tolist()]
    if np.issubdtype(col.dtype, np.integer):
        return list(map(str, col.tolist()))
    # format() is locale-independent; adding 0.0 folds -0.0 into 0.0
    return list(map("{:.12g}".format, (col.astype(float) + 0.0).tolist()))


def write_table_csv(path: Path, header: list[str], columns: list[np.ndarray]) -> None:
    cells = [_fmt(np.asarray(c)) for c in columns]
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(",".join(header) + "\n")
        fh.writelines(",".join(row) + "\n" for row in zip(*cells))


def write_records(path: Path, table: ScanTable) -> None:
    header = table.columns
    cols = [np.arange(len(table)), *table.params.values(), table.fidelity,
            *table.resources.values(), *table.flags.values()]
    write_table_csv(path, header, cols)


def write_refined(path: Path, recs: list[ScanRecord], names: list[str]) -> None:
    if not recs:
        path.write_text(",".join(["pair", *names]) + "\n", encoding="utf-8", newline="\n")
        return
    r0 = recs[0]
    header = ["pair", *r0.params, "fidelity", *r0.resources, *r0.flags]
    cols = [np.arange(len(recs)) // 2]
    cols += [np.array([r.params[k] for r in recs]) for k in r0.params]
    cols.append(np.array([r.fidelity for r in recs]))
    cols += [np.array([r.resources[k] for r in recs]) for k in r0.resources]
    cols += [np.array([r.flags[k] for r in recs], dtype=bool) for k in r0.flags]
    write_table_csv(path, header, cols)


# -- execution -----------------------------------------------------------------


def _lookup(d: dict, path: str):
    cur = d
    for part in path.split("."):
        if not isinstance(cur, dict) or part not in cur:
            return None
        cur = cur[part]
    return cur


def _panel_checks(p: PanelConfig, summary: dict, refined_pairs: int) -> list[dict]:
    checks = []
    exp = p.expect
    if exp.get("nonempty"):
        n = summary["window_points"] if p.within_window else summary["balloon_points"]
        checks.append({"check": "nonempty", "ok": n > 0, "value": n})
    for c in exp.get("crosses", []):
        grid = bool(summary["crosses_boundary"].get(c, False))
        via_refine = p.refine == c and refined_pairs > 0
        checks.append({"check": f"crosses:{c}", "ok": grid or via_refine,
                       "value": {"grid": grid, "refined_pairs": refined_pairs if p.refine == c else 0}})
    for path, (lo, hi) in sorted(exp.get("bounds", {}).items()):
        v = _lookup(summary, path)
        ok = isinstance(v, (int, float)) and lo <= v <= hi
        checks.append({"check": f"bounds:{path}", "ok": ok, "value": v, "range": [lo, hi]})
    return checks


def run_panels(panels: list[PanelConfig], expect_any: list[dict], out: Path, *,
               threads: int | None = None, backend: str | None = None) -> tuple[dict, bool]:
    """Run every panel, write its files under ``out/<panel>/`` and the
    combined ``out/summary.json``.  Returns (summary, all_checks_ok)."""
    out.mkdir(parents=True, exist_ok=True)
    results: dict[str, dict] = {}
    all_checks: list[dict] = []
    crossed: dict[str, set[str]] = {}
    for p in panels:
        table = scan(p.grid, p.constraint, p.windows, threads=threads, backend=backend)
        summ = summarize(table, p.classifiers, within_window=p.within_window).to_dict()
        refined: list[ScanRecord] = []
        pdir = out / p.name
        pdir.mkdir(parents=True, exist_ok=True)
        if p.refine:
            refined = refine_boundary(p.grid, p.constraint, p.refine, p.windows, table=table,
                                      backend=backend)
            write_refined(pdir / "refined.csv", refined, list(p.grid.names))
            summ["refined_pairs"] = len(refined) // 2
        write_records(pdir / "records.csv", table)
        checks = _panel_checks(p, summ, len(refined) // 2)
        summ["checks"] = checks
        summ["family"] = p.grid.family
        write_json(pdir / "summary.json", summ)
        results[p.name] = summ
        crossed[p.name] = {c for c, v in summ["crosses_boundary"].items() if v}
        if refined:
            crossed[p.name].add(p.refine)
        all_checks += [{"panel": p.name, **c} for c in checks]
    for a in expect_any:
        hit = [n for n in a["panels"] if a["crosses"] in crossed.get(n, set())]
        all_checks.append({"panel": "*", "check": f"any-crosses:{a['crosses']}", "ok": bool(hit),
                           "value": hit})
    ok = all(c["ok"] for c in all_checks)
    top = {
        "backend": kernels.get_backend(backend).NAME,
        "checks": all_checks,
        "panels": results,
        "status": "ok" if ok else "unmet",
        "version": __version__,
    }
    write_json(out / "summary.json", top)
    return top, ok


def _report(top: dict, out: Path) -> None:
    for c in top["checks"]:
        mark = "ok  " if c["ok"] else "FAIL"
        print(f"{mark} {c['panel']}: {c['check']} = {json.dumps(_clean(c['value']))}")
    for name, s in top["panels"].items():
        line = f"  {name}: balloon={s['balloon_points']}"
        if s["within_window"]:
            line += f" window={s['window_points']}"
        if "refined_pairs" in s:
            line += f" refined_pairs={s['refined_pairs']}"
        print(line)
    print(f"wrote {out}/summary.json ({top['status']})")


def _execute(doc, out: Path, threads, backend) -> int:
    try:
        panels, anys = parse_document(doc)
        kernels.get_backend(backend)
    except (ConfigError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_ERROR
    try:
        top, ok = run_panels(panels, anys, out, threads=threads, backend=backend)
    except UnphysicalStateError as e:
        print(f"error: unphysical target: {e}", file=sys.stderr)
        return EXIT_ERROR
    except OSError as e:
        print(f"error: cannot write output: {e}", file=sys.stderr)
        return EXIT_ERROR
    _report(top, out)
    return EXIT_OK if ok else EXIT_UNMET


def cmd_figure(args) -> int:
    if args.dump_config:
        print(json.dumps(preset(args.figure), indent=2, sort_keys=True))
        return EXIT_OK
    out = Path(args.out) if args.out else Path("out") / args.figure
    return _execute(preset(args.figure), out, args.threads, args.backend)


def cmd_scan(args) -> int:
    try:
        doc = json.loads(Path(args.config).read_text(encoding="utf-8"))
    except OSError as e:
        print(f"error: cannot read config: {e}", file=sys.stderr)
        return EXIT_ERROR
    except json.JSONDecodeError as e:
        print(f"error: config is not valid JSON: {e}", file=sys.stderr)
        return EXIT_ERROR
    out = Path(args.out) if args.out else Path("out") / Path(args.config).stem
    return _execute(doc, out, args.threads, args.backend)


def cmd_selftest(args) -> int:
    from .selftest import run_selftest

    return EXIT_OK if run_selftest(verbose=True, backend=args.backend) else EXIT_UNMET


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="fidelity-gap",
                                 description="Fidelity balloons versus quantum resources.")
    ap.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--threads", type=int, default=None, metavar="K",
                       help="worker threads (default: machine parallelism)")
        p.add_argument("--backend", choices=["auto", "cython", "python"], default="auto",
                       help="kernel backend (default: compiled if available)")

    f = sub.add_parser("figure", help="run a figure preset")
    f.add_argument("figure", choices=sorted(PRESETS))
    f.add_argument("--out", metavar="DIR", help="output directory (default: out/<figure>)")
    f.add_argument("--dump-config", action="store_true", help="print the preset as a scan config and exit")
    common(f)
    f.set_defaults(func=cmd_figure)

    s = sub.add_parser("scan", help="run a scan described by a JSON config")
    s.add_argument("--config", required=True, metavar="FILE")
    s.add_argument("--out", metavar="DIR", help="output directory (default: out/<config stem>)")
    common(s)
    s.set_defaults(func=cmd_scan)

    t = sub.add_parser("selftest", help="run the oracle-equivalence checks")
    t.add_argument("--backend", choices=["auto", "cython", "python"], default="auto")
    t.set_defaults(func=cmd_selftest)
    return ap


def main(argv: list[str] | None = None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as e:
        # argparse exits 2 on usage errors; 2 is reserved for unmet claims
        return EXIT_OK if e.code == 0 else EXIT_ERROR
    if getattr(args, "threads", None) is not None and args.threads < 1:
        print("error: --threads must be >= 1", file=sys.stderr)
        return EXIT_ERROR
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
