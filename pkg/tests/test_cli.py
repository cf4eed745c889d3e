import json
import subprocess
import sys

import pytest

from fidelity_gap.cli import EXIT_ERROR, EXIT_OK, EXIT_UNMET, main
from fidelity_gap.presets import PRESETS, preset


def run(argv):
    return main([str(a) for a in argv])


def read_tree(root):
    return {p.relative_to(root).as_posix(): p.read_bytes() for p in sorted(root.rglob("*")) if p.is_file()}


def small_panel(**over):
    doc = {
        "name": "p",
        "family": "sts2",
        "axes": [{"name": "n_tot", "min": 0, "max": 4, "steps": 11},
                 {"name": "beta", "min": 0, "max": 1, "steps": 11},
                 {"name": "gamma", "min": 0, "max": 1, "steps": 11}],
        "target": {"n_tot": 2, "beta": 0.2, "gamma": 0.5},
        "band": {"f_min": 0.9, "f_max": 1.0},
    }
    doc.update(over)
    return doc


def write_config(tmp_path, doc, name="cfg.json"):
    p = tmp_path / name
    p.write_text(json.dumps(doc))
    return p


def test_werner_figure_crosses(tmp_path, capsys):
    assert run(["figure", "fig2", "--out", tmp_path]) == EXIT_OK
    top = json.loads((tmp_path / "summary.json").read_text())
    assert top["status"] == "ok"
    for name in ("werner-0.95", "werner-0.99", "separable-0.95", "separable-0.99"):
        assert top["panels"][name]["crosses_boundary"]["separable"]
        assert (tmp_path / name / "records.csv").exists()
        assert (tmp_path / name / "refined.csv").exists()
    assert "ok" in capsys.readouterr().out


def test_qubit_figure_boundary(tmp_path):
    assert run(["figure", "fig1", "--out", tmp_path]) == EXIT_OK
    s = json.loads((tmp_path / "threshold-0.90" / "summary.json").read_text())
    assert s["param_ranges"]["rz"]["min"] == pytest.approx(0.8, abs=1e-12)


def test_discord_figure_extrema(tmp_path):
    assert run(["figure", "fig6", "--out", tmp_path]) == EXIT_OK
    s = json.loads((tmp_path / "entangled" / "summary.json").read_text())
    assert s["relative"]["discord"]["min"] == pytest.approx(0.38, abs=0.05)
    assert s["relative"]["discord"]["max"] == pytest.approx(1.88, abs=0.05)


@pytest.mark.parametrize("fig", sorted(PRESETS))
def test_every_preset_meets_its_expectations(tmp_path, fig):
    assert run(["figure", fig, "--out", tmp_path]) == EXIT_OK


def test_preset_round_trip_through_config(tmp_path, capsys):
    assert run(["figure", "fig5", "--dump-config"]) == EXIT_OK
    cfg = tmp_path / "fig5.json"
    cfg.write_text(capsys.readouterr().out)
    assert json.loads(cfg.read_text()) == preset("fig5")
    assert run(["figure", "fig5", "--out", tmp_path / "a"]) == EXIT_OK
    assert run(["scan", "--config", cfg, "--out", tmp_path / "b"]) == EXIT_OK
    assert read_tree(tmp_path / "a") == read_tree(tmp_path / "b")


def test_output_bytes_identical_across_runs_and_threads(tmp_path):
    assert run(["figure", "fig2", "--out", tmp_path / "a", "--threads", 1]) == EXIT_OK
    assert run(["figure", "fig2", "--out", tmp_path / "b", "--threads", 4]) == EXIT_OK
    assert read_tree(tmp_path / "a") == read_tree(tmp_path / "b")


def test_csv_format(tmp_path):
    assert run(["scan", "--config", write_config(tmp_path, small_panel()), "--out", tmp_path / "o"]) == EXIT_OK
    raw = (tmp_path / "o" / "p" / "records.csv").read_bytes()
    assert b"\r" not in raw
    lines = raw.decode("utf-8").splitlines()
    header = lines[0].split(",")
    assert header[:5] == ["grid_index", "n_tot", "beta", "gamma", "fidelity"]
    assert {"dt_minus", "discord", "separable", "in_balloon", "in_window"} <= set(header)
    assert len(lines) == 1 + 11**3
    row = dict(zip(header, lines[1 + 4 * 121 + 2 * 11 + 5].split(",")))
    assert row["n_tot"] == "1.6" and row["beta"] == "0.2" and row["gamma"] == "0.5"
    assert len(row["fidelity"].replace(".", "").lstrip("0")) <= 12
    assert row["separable"] in ("0", "1")


def test_summary_keys_sorted(tmp_path):
    run(["scan", "--config", write_config(tmp_path, small_panel()), "--out", tmp_path / "o"])
    text = (tmp_path / "o" / "p" / "summary.json").read_text()
    keys = list(json.loads(text).keys())
    assert keys == sorted(keys)
    assert "NaN" not in text


@pytest.mark.parametrize(
    "change, message",
    [
        ({"band": {"f_min": 0.99, "f_max": 0.95}}, "band"),
        ({"axes": [{"name": "n_tot", "min": 0, "max": 4, "steps": 3},
                   {"name": "beta", "min": 0, "max": 1, "steps": 3},
                   {"name": "delta", "min": 0, "max": 1, "steps": 3}]}, "unknown axis 'delta'"),
        ({"axes": [{"name": "n_tot", "min": 0, "max": 4, "steps": "ten"}]}, "steps"),
        ({"target": {"n_tot": 2, "beta": 0.2}}, "target"),
        ({"family": "qutrit"}, "family"),
        ({"windows": [{"observable": "mean-photons", "rel_tol": 0.1}]}, "observable"),
        ({"windows": [{"observable": "total-photons", "rel_tol": 2}]}, "rel_tol"),
        ({"classifiers": ["subpoissonian"]}, "classifiers"),
        ({"colour": "red"}, "unknown field"),
    ],
)
def test_malformed_config_exit_1(tmp_path, capsys, change, message):
    code = run(["scan", "--config", write_config(tmp_path, small_panel(**change)), "--out", tmp_path / "o"])
    assert code == EXIT_ERROR
    assert message in capsys.readouterr().err


def test_unphysical_target_exit_1(tmp_path, capsys):
    doc = small_panel(family="pauli-diagonal",
                      axes=[{"name": c, "min": -1, "max": 1, "steps": 3} for c in ("c1", "c2", "c3")],
                      target={"c1": 1, "c2": 1, "c3": 1})
    assert run(["scan", "--config", write_config(tmp_path, doc), "--out", tmp_path / "o"]) == EXIT_ERROR
    assert "unphysical" in capsys.readouterr().err


def test_unreadable_and_invalid_json_exit_1(tmp_path):
    assert run(["scan", "--config", tmp_path / "missing.json"]) == EXIT_ERROR
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert run(["scan", "--config", bad]) == EXIT_ERROR


def test_output_path_blocked_exit_1(tmp_path):
    blocker = tmp_path / "file"
    blocker.write_text("x")
    assert run(["scan", "--config", write_config(tmp_path, small_panel()), "--out", blocker]) == EXIT_ERROR


def test_unmet_expectation_exit_2(tmp_path):
    doc = small_panel(target={"n_tot": 4, "beta": 1, "gamma": 0.5},
                      band={"f_min": 0.999}, classifiers=["separable"],
                      expect={"crosses": ["separable"]})
    assert run(["scan", "--config", write_config(tmp_path, doc), "--out", tmp_path / "o"]) == EXIT_UNMET
    top = json.loads((tmp_path / "o" / "summary.json").read_text())
    assert top["status"] == "unmet"


def test_usage_errors_exit_1():
    assert run(["figure", "fig9"]) == EXIT_ERROR
    assert run([]) == EXIT_ERROR
    assert run(["figure", "fig1", "--threads", 0]) == EXIT_ERROR


def test_selftest_passes(capsys):
    assert run(["selftest"]) == EXIT_OK
    assert "FAIL" not in capsys.readouterr().out


def test_module_entry_point(tmp_path):
    r = subprocess.run([sys.executable, "-m", "fidelity_gap", "figure", "fig1", "--out", str(tmp_path)],
                       capture_output=True, text=True)
    assert r.returncode == 0, r.stderr
