from __future__ import annotations

import io
import json
import subprocess
import sys

import pytest

from milnor_boundary.cli import main


def run(argv, capsys, stdin: str | None = None, monkeypatch=None):
    if stdin is not None:
        monkeypatch.setattr(sys, "stdin", io.StringIO(stdin))
    code = main(argv)
    out, err = capsys.readouterr()
    return code, out, err


def test_gen_construct_check_pipeline(capsys, monkeypatch):
    code, gamma, _ = run(["gen", "tab", "--a", "3", "--b", "2"], capsys)
    assert code == 0
    code, plumbing, _ = run(["construct"], capsys, gamma, monkeypatch)
    assert code == 0
    code, out, _ = run(["check"], capsys, plumbing, monkeypatch)
    assert code == 0 and out.startswith("ok:")


def test_pipeline_through_processes():
    def stage(args, stdin):
        return subprocess.run([sys.executable, "-m", "milnor_boundary", *args], input=stdin,
                              capture_output=True, text=True, check=False)

    gen = stage(["gen", "tab", "--a", "3", "--b", "2"], "")
    built = stage(["construct"], gen.stdout)
    checked = stage(["check"], built.stdout)
    assert (gen.returncode, built.returncode, checked.returncode) == (0, 0, 0)


def test_golden_outputs(fixtures_dir, tmp_path, capsys):
    for stem in ("tab_3_2", "tab_7_5", "omni"):
        out = tmp_path / f"{stem}.plumbing.json"
        code, _, _ = run(["construct", str(fixtures_dir / f"{stem}.json"), "-o", str(out)], capsys)
        assert code == 0
        assert out.read_text(encoding="utf-8") == (fixtures_dir / f"{stem}.plumbing.json").read_text(encoding="utf-8")
    code, dot, _ = run(["export", "--format", "dot", str(fixtures_dir / "tab_3_2.plumbing.json")], capsys)
    assert code == 0
    assert dot == (fixtures_dir / "tab_3_2.dot").read_text(encoding="utf-8")


def test_validate(fixtures_dir, tmp_path, capsys):
    path = fixtures_dir / "tab_3_2.json"
    code, out, _ = run(["validate", str(path)], capsys)
    assert code == 0 and out.startswith("balanced")
    doc = json.loads(path.read_text(encoding="utf-8"))
    doc["mult"]["m"]["v2"] = 7
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps(doc), encoding="utf-8")
    code, out, err = run(["validate", str(bad)], capsys)
    assert code == 1 and out == ""
    rows = err.splitlines()
    assert rows[0].split() == ["vertex", "family", "residual"]
    assert {r.split()[0] for r in rows[1:]} == {"v1", "v2", "v3"}


def test_validate_without_mult(fixtures_dir, tmp_path, capsys):
    doc = json.loads((fixtures_dir / "tab_3_2.json").read_text(encoding="utf-8"))
    del doc["mult"]
    path = tmp_path / "bare.json"
    path.write_text(json.dumps(doc), encoding="utf-8")
    assert run(["validate", str(path)], capsys)[0] == 65


def test_solve_fills_multiplicities(fixtures_dir, tmp_path, capsys):
    text = (fixtures_dir / "tab_7_5.json").read_text(encoding="utf-8")
    doc = json.loads(text)
    del doc["mult"]
    path = tmp_path / "bare.json"
    path.write_text(json.dumps(doc), encoding="utf-8")
    code, out, _ = run(["solve", str(path)], capsys)
    assert code == 0 and out == text
    # construct solves on its own when mult is missing
    code, out, _ = run(["construct", str(path)], capsys)
    assert out == (fixtures_dir / "tab_7_5.plumbing.json").read_text(encoding="utf-8")


def test_partition(fixtures_dir, capsys):
    code, out, _ = run(["partition", str(fixtures_dir / "omni.json")], capsys)
    doc = json.loads(out)
    assert code == 0
    assert doc["W1"] == ["w1", "w2", "w3"] and doc["A_f1"] == ["fA"]
    assert doc["components"] == [{"vertices": ["w1", "w2", "w3"], "d": 1, "genus": 17, "euler": -90}]


def test_check_with_gamma(fixtures_dir, tmp_path, capsys):
    plumbing = fixtures_dir / "omni.plumbing.json"
    code, out, _ = run(["check", str(plumbing), "--gamma", str(fixtures_dir / "omni.json")], capsys)
    assert code == 0
    doc = json.loads(plumbing.read_text(encoding="utf-8"))
    doc["vertices"][0]["m"] += 1
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps(doc), encoding="utf-8")
    code, out, err = run(["check", str(bad)], capsys)
    assert code == 2 and "FAIL residual" in err


def test_simplify(fixtures_dir, capsys):
    code, out, _ = run(["simplify", str(fixtures_dir / "tab_3_2.plumbing.json")], capsys)
    assert code == 0
    assert len(json.loads(out)["vertices"]) < 13


def test_export_native_is_identity(fixtures_dir, capsys):
    path = fixtures_dir / "tab_3_2.plumbing.json"
    code, out, _ = run(["export", "--format", "native", str(path)], capsys)
    assert code == 0 and out == path.read_text(encoding="utf-8")


@pytest.mark.parametrize(
    "argv",
    [[], ["bogus"], ["gen", "tab", "--a", "2", "--b", "3"], ["gen", "tab", "--a", "x", "--b", "2"],
     ["export", "--format", "svg", "x"]],
)
def test_usage_errors(argv, capsys):
    code, out, err = run(argv, capsys)
    assert code == 64 and out == "" and err


def test_io_error(tmp_path, capsys):
    code, _, err = run(["check", str(tmp_path / "missing.json")], capsys)
    assert code == 66 and "I/O error" in err


def test_data_errors(tmp_path, capsys, monkeypatch):
    assert run(["validate"], capsys, "{", monkeypatch)[0] == 65
    assert run(["check"], capsys, '{"vertices": 3}', monkeypatch)[0] == 65
