import json

import pytest

from _support import sample_certificate_text
from pascal_ecpp.cli import _int, main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_int_forms():
    assert _int("1e9") == 10**9 and _int("2^20") == 2**20 and _int("1_000") == 1000
    with pytest.raises(ValueError):
        _int("ten")


def test_triangle_rows(capsys):
    code, out, _ = run(capsys, "triangle", "rows", "--max-row", "2")
    assert code == 0
    assert out == "0: 1\n1: 1 1 2\n2: 1 2 5 4 4\n"


def test_center_row_zero(capsys):
    assert run(capsys, "triangle", "center", "--row", "0")[1] == "1\n"
    assert run(capsys, "triangle", "center", "--row", "24")[1] == "9232029156001\n"


def test_hunt_with_figure(capsys, tmp_path):
    fig = tmp_path / "hunt.png"
    code, out, _ = run(capsys, "triangle", "hunt", "--max-row", "30", "--figure", str(fig))
    assert code == 0
    assert out.splitlines()[-1] == "24;13;9232029156001"
    assert len(out.splitlines()) == 6 and fig.stat().st_size > 0


def test_first_factor(capsys):
    code, out, _ = run(capsys, "triangle", "first-factor", "--max-row", "72",
                       "--prime", "41", "--prime", "947")
    assert out == "41 -> 27\n947 -> not found (max row 72)\n"


def test_easy_factor(capsys):
    code, out, _ = run(capsys, "triangle", "easy-factor", "--row", "20", "--bound", "1000",
                       "--effort", "0")
    assert code == 0 and out.startswith("20, 20;")


def test_stats_report_and_figure(capsys, tmp_path):
    fig, rep, csv = tmp_path / "s.pdf", tmp_path / "r.json", tmp_path / "s.txt"
    code, out, _ = run(capsys, "--report", str(rep), "triangle", "stats", "--max-row", "200",
                       "--divisors", "2,5", "--figure", str(fig), "--out", str(csv))
    assert code == 0 and out == ""
    lines = csv.read_text().splitlines()
    assert lines[0] == "d;hits;rows;fraction" and lines[1] == "2;0;200;0.000000"
    report = json.loads(rep.read_text())
    assert report["command"] == "triangle stats" and str(fig) in report["outputs"]
    assert fig.read_bytes().startswith(b"%PDF")


def test_bad_base_is_an_error(capsys):
    code, _, err = run(capsys, "triangle", "rows", "--base", "1x2")
    assert code == 1 and "error" in err


def test_prove_and_verify(capsys, tmp_path):
    cert = tmp_path / "c.txt"
    code, _, err = run(capsys, "prove", "9232029156001", "--cert", str(cert), "--seed", "4")
    assert code == 0 and "proved" in err
    first = cert.read_bytes()
    code, out, _ = run(capsys, "verify", str(cert))
    assert code == 0 and out.startswith("accepted: 9232029156001")
    run(capsys, "prove", "9232029156001", "--cert", str(cert), "--seed", "4")
    assert cert.read_bytes() == first


def test_prove_from_file_with_figure(capsys, tmp_path):
    src = tmp_path / "n.txt"
    src.write_text("92320291\\\n56001\n")
    fig = tmp_path / "down.png"
    code, out, _ = run(capsys, "prove", f"@{src}", "--figure", str(fig))
    assert code == 0 and out.startswith("ECPP-CERT v1\nN 9232029156001\n")
    assert fig.exists()


def test_prove_composite_and_small(capsys):
    code, _, err = run(capsys, "prove", "561")
    assert code == 2 and "composite" in err
    code, out, _ = run(capsys, "prove", "7", "--threshold", "1000000000")
    assert code == 0 and "prime" in out


def test_verify_rejections(capsys, tmp_path):
    good = sample_certificate_text()
    path = tmp_path / "c.txt"
    path.write_text(good.replace("f=2*3^3*11*41*43", "f=2*3^3*11*41*47"))
    code, _, err = run(capsys, "verify", str(path))
    assert code == 1 and "step 1" in err
    path.write_text("")
    code, _, err = run(capsys, "verify", str(path))
    assert code == 1 and "empty" in err
    code, _, _ = run(capsys, "verify", str(tmp_path / "missing.txt"))
    assert code == 1


def test_tables_command(capsys, tmp_path, monkeypatch):
    out = tmp_path / "d.txt"
    code, text, _ = run(capsys, "tables", "--out", str(out), "--max-d", "60", "--max-h", "2")
    assert code == 0 and "records" in text
    lines = [ln for ln in out.read_text().splitlines() if not ln.startswith("#")]
    assert lines[0].startswith("-7;7^1;1;")
    monkeypatch.setenv("PASCAL_ECPP_TABLES", str(out))
    from pascal_ecpp.cm import default_table_path
    assert default_table_path() == out
