import json
import shutil
import subprocess
import sys
import xml.etree.ElementTree as ET
from pathlib import Path

import pytest

from platdist.cli import INTERNAL, INVALID, OK, main
from platdist.curves import round_curve

PLATS = Path(__file__).resolve().parent.parent / "plats"


@pytest.fixture
def plat(tmp_path):
    def copy(name):
        dst = tmp_path / name
        shutil.copy(PLATS / name, dst)
        return dst
    return copy


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


def test_check(capsys, plat):
    code, out, _ = run(capsys, "check", plat("m3n4.plat"))
    assert code == OK
    assert "d = 2" in out and "highly twisted: yes" in out


def test_check_json(capsys, plat):
    code, out, _ = run(capsys, "check", plat("m3n5.plat"), "--format", "json")
    data = json.loads(out)
    assert code == OK and data["formula_value"] == 3 and data["unique_minimal_sphere"] is False


def test_check_bad_file_names_line(capsys, tmp_path):
    bad = tmp_path / "bad.plat"
    bad.write_text("plat m=3 n=3\nrow 1: 3\nrow 2: 3 3 3\n")
    code, _, err = run(capsys, "check", bad)
    assert code == INVALID and "line 2" in err


def test_missing_file(capsys, tmp_path):
    code, _, err = run(capsys, "check", tmp_path / "nope.plat")
    assert code == INVALID and "cannot read" in err


def test_distance_then_verify(capsys, plat):
    p = plat("m3n4.plat")
    code, out, _ = run(capsys, "distance", p)
    assert code == OK and out.strip() == "d = 2"
    cert = p.with_suffix(".cert.json")
    assert cert.exists()
    code, out, _ = run(capsys, "verify", cert)
    assert code == OK and out.strip() == "ok: path of length 2 verified"


def test_verify_tampered_names_the_pair(capsys, plat, tmp_path):
    p = plat("m3n4.plat")
    out_file = tmp_path / "c.json"
    run(capsys, "distance", p, "--out", out_file)
    data = json.loads(out_file.read_text())
    data["path"][1]["word"] = [1, 3]
    out_file.write_text(json.dumps(data))
    code, out, _ = run(capsys, "verify", out_file)
    assert code == INVALID
    assert out.startswith("FAILED:") and "vertices" in out and "intersect" in out


def test_verify_malformed(capsys, tmp_path):
    f = tmp_path / "x.json"
    f.write_text("{\"plat\": 3}")
    assert run(capsys, "verify", f)[0] == INVALID
    f.write_text("not json")
    assert run(capsys, "verify", f)[0] == INVALID


def test_distance_refuses_weak_twisting(capsys, tmp_path):
    p = tmp_path / "w.plat"
    p.write_text("plat m=3 n=2\nrow 1: 2 3\n")
    code, _, err = run(capsys, "distance", p)
    assert code == INVALID and "highly twisted" in err


def test_path(capsys, plat):
    code, out, _ = run(capsys, "path", plat("m3n5.plat"))
    assert code == OK
    lines = out.strip().splitlines()
    assert len(lines) == 4 and lines[0].startswith("0: loop(0,1) in plane 1")


def test_audit_small(capsys, plat, tmp_path):
    t = tmp_path / "t.json"
    code, out, _ = run(capsys, "audit", plat("m3n2.plat"), "--budget", "3", "--out", t)
    assert code == OK and out.startswith("audit passed")
    assert json.loads(t.read_text())["budget"] == 3


def test_enumerate_with_bfs(capsys, plat, tmp_path):
    code, out, _ = run(capsys, "enumerate", "--m", "3", "--bound", "2", "--bfs", plat("m3n2.plat"),
                       "--cache-dir", tmp_path / "cache")
    assert code == OK
    assert out.splitlines() == ["inventory: 9 curves on 6 punctures with at most 2 crossings (3 bound a disk below)",
                                "bfs = 1 (within-bound: yes)"]
    code, out, _ = run(capsys, "enumerate", "--m", "3", "--bound", "0", "--bfs", plat("m3n2.plat"),
                       "--cache-dir", tmp_path / "cache")
    assert code == OK and out.splitlines()[1] == "bfs = inf (within-bound: no)"


def test_enumerate_rejects_odd_bound_and_mismatch(capsys, plat, tmp_path):
    assert run(capsys, "enumerate", "--m", "3", "--bound", "3", "--cache-dir", tmp_path)[0] == INVALID
    code, _, err = run(capsys, "enumerate", "--m", "4", "--bound", "2", "--bfs", plat("m3n2.plat"),
                       "--cache-dir", tmp_path)
    assert code == INVALID and "strands" in err


def test_enumerate_budget(capsys, tmp_path):
    code, _, err = run(capsys, "enumerate", "--m", "3", "--bound", "10", "--budget", "10", "--cache-dir", tmp_path)
    assert code == INVALID and "budget" in err


def _svg_ok(path):
    root = ET.parse(path).getroot()
    assert root.tag == "{http://www.w3.org/2000/svg}svg"
    return path.read_bytes()


def test_render_plat_is_stable(capsys, plat, tmp_path):
    p = plat("m3n5.plat")
    a, b = tmp_path / "a.svg", tmp_path / "b.svg"
    assert run(capsys, "render", p, "--out", a)[0] == OK
    assert run(capsys, "render", p, "--out", b)[0] == OK
    assert _svg_ok(a) == _svg_ok(b)
    assert b"<rect" in a.read_bytes()


def test_render_track_and_curve(capsys, plat, tmp_path):
    p = plat("m3n5.plat")
    out = tmp_path / "t.svg"
    assert run(capsys, "render", p, "--track", "1", "--out", out)[0] == OK
    assert b'class="eyelet"' in _svg_ok(out)
    assert run(capsys, "render", p, "--track", "9")[0] == INVALID
    curve = tmp_path / "c.json"
    curve.write_text(json.dumps(round_curve(6, 2, 5).to_json()))
    code, out_text, _ = run(capsys, "render", curve)
    assert code == OK and "wrote curve" in out_text
    _svg_ok(curve.with_suffix(".svg"))


def test_audit_failure_exits_internal(capsys, plat, tmp_path, monkeypatch):
    import platdist.cli as cli
    from platdist.distance import AuditFailure

    def broken(*a, **k):
        raise AuditFailure("check next-row-loop failed on x", {"lemma": "next-row-loop"})
    monkeypatch.setattr(cli, "audit_lower_bound", broken)
    dump = tmp_path / "fail.json"
    code, _, err = run(capsys, "audit", plat("m3n2.plat"), "--out", dump)
    assert code == INTERNAL and "audit FAILED" in err
    assert json.loads(dump.read_text())["failure"]["lemma"] == "next-row-loop"


def test_module_entry_point(plat):
    res = subprocess.run([sys.executable, "-m", "platdist.cli", "check", str(plat("m3n4.plat"))],
                         capture_output=True, text=True)
    assert res.returncode == 0 and "d = 2" in res.stdout
