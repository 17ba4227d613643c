from __future__ import annotations

import json
import subprocess
import sys

import pytest

from cdkit.cli import main, parse_spec
from cdkit.errors import ParseError


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


@pytest.mark.parametrize(
    "text, order",
    [("C6", 6), ("D4", 8), ("Q16", 16), ("M27", 27), ("S4", 24), ("A4", 12), ("Heis3", 27),
     ("C2xC2", 4), ("metacyclic(7,3,2)", 21), ("D4xC2", 16), ("metacyclic(3,2,2)xC3", 18), ("Dic3", 12)],
)
def test_spec_parsing_and_building(text, order):
    assert parse_spec(text).build().order == order


@pytest.mark.parametrize("text", ["Q12", "Q4", "M12", "M9", "X5", "C", "C2x", "metacyclic(7,3)", "C2x(C3"])
def test_spec_parse_errors(text):
    with pytest.raises(ParseError):
        parse_spec(text)


def test_info_q8(capsys):
    code, out, _ = run(capsys, "info", "Q8")
    assert code == 0
    assert "order: 8\n" in out and "abelian: no\n" in out and "center order: 2\n" in out
    assert "tag: GeneralizedQuaternion(8)\n" in out


def test_info_m27(capsys):
    code, out, _ = run(capsys, "info", "M27")
    assert code == 0
    assert "order: 27\n" in out and "abelian: no\n" in out and "center order: 3\n" in out


def test_info_from_file(capsys, tmp_path):
    path = tmp_path / "g.grp"
    path.write_text("perm 3\n1 0 2\n1 2 0\n", encoding="utf-8")
    code, out, _ = run(capsys, "info", f"@{path}")
    assert code == 0
    assert "order: 6\n" in out and f"construction: {path}\n" in out


def test_cd_q8(capsys):
    code, out, _ = run(capsys, "cd", "Q8")
    assert code == 0
    assert out.rstrip().endswith("m* = 16, δ = 1, v = 1")
    assert sum(1 for line in out.splitlines() if " yes " in line) == 5


def test_cd_c9(capsys):
    code, out, _ = run(capsys, "cd", "C9")
    assert code == 0 and "δ = 2, v = 2" in out


def test_cd_json_and_dot(capsys, tmp_path):
    dot = tmp_path / "s3.dot"
    code, out, _ = run(capsys, "cd", "S3", "--json", "--dot", str(dot))
    assert code == 0
    data = json.loads(out)
    assert data["delta"] == 5 and data["v"] == 3 and data["m_star"] == "9"
    text = dot.read_text(encoding="utf-8")
    assert text.count("doublecircle") == 1 and "m=9" in text


def test_cd_table_marks_class_representatives(capsys):
    code, out, _ = run(capsys, "cd", "S3")
    rows = [line for line in out.splitlines() if line.strip()[:1].isdigit()]
    assert len(rows) == 6
    # three conjugate subgroups of order 2, one representative
    assert sum(1 for r in rows if r.split()[1] == "2" and r.endswith("*")) == 1


@pytest.mark.parametrize(
    "argv, code",
    [
        (["info", "Q12"], 2),
        (["info", "nonsense"], 2),
        (["info", "@/nonexistent/file.grp"], 2),
        (["info", "M8"], 3),
        (["info", "metacyclic(7,3,3)"], 3),
        (["info", "Heis4"], 3),
        (["scan", "--max-order", "500"], 2),
    ],
)
def test_exit_codes(capsys, argv, code):
    assert run(capsys, *argv)[0] == code


def test_malformed_file_exit_code(capsys, tmp_path):
    path = tmp_path / "bad.grp"
    path.write_text("perm 3\n1 0\n", encoding="utf-8")
    code, _, err = run(capsys, "info", f"@{path}")
    assert code == 2 and "line 2" in err
    path.write_text("cayley 2\n0 1\n1 1\n", encoding="utf-8")
    assert run(capsys, "info", f"@{path}")[0] == 3


def test_cap_exit_code(capsys, monkeypatch):
    monkeypatch.setenv("CDKIT_ELEMENT_CAP", "100")
    assert run(capsys, "cd", "S5")[0] == 4
    assert run(capsys, "info", "C101")[0] == 4


def test_scan_trivial(capsys, tmp_path):
    out_path = tmp_path / "r.json"
    code, out, _ = run(capsys, "scan", "--max-order", "1", "--check", "all", "--out", str(out_path))
    assert code == 0
    data = json.loads(out_path.read_text(encoding="utf-8"))
    assert data["summary"]["groups_scanned"] == 1
    assert data["summary"]["counterexamples"] == 0
    assert all(c["status"] == "pass" for c in data["groups"][0]["checks"])


def test_scan_v_lists_nilpotent_v3(capsys, tmp_path):
    out_path = tmp_path / "v.json"
    code, out, _ = run(capsys, "scan", "--max-order", "60", "--check", "v", "--out", str(out_path))
    assert code == 0
    data = json.loads(out_path.read_text(encoding="utf-8"))
    assert data["summary"]["counterexamples"] == 0
    assert {"C8", "C27", "C6"} <= set(data["summary"]["nilpotent_v3"])


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "cdkit", "info", "C5"], capture_output=True, text=True,
                          encoding="utf-8")
    assert proc.returncode == 0 and "order: 5" in proc.stdout
