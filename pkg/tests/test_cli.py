import csv
import json
import math

import pytest

from hvf.cli import main


def test_verify_confirmed(capsys):
    code = main(
        "verify --family confgrad --n 3 --epsilon 1 --mu 1 --p 4 --q -1 --points 50".split()
    )
    out = capsys.readouterr().out
    assert code == 0
    assert "harmonic=True" in out


def test_verify_refuted(capsys):
    code = main(
        "verify --family confgrad --n 3 --epsilon 1 --mu 1 --p 4 --q -0.9 --points 50".split()
    )
    assert code == 1
    assert "harmonic=False" in capsys.readouterr().out


def test_verify_parse_errors(capsys):
    assert main("verify --family bogus --n 3 --epsilon 1 --p 4 --q -1".split()) == 2
    assert main("verify --family confgrad --n 3 --epsilon 1 --p 4 --q -1".split()) == 2
    assert main("verify --family confgrad --n 3 --epsilon 1 --mu 1".split()) == 2
    capsys.readouterr()


def test_verify_spec_file_and_flag_override(tmp_path, capsys):
    spec = tmp_path / "field.spec"
    spec.write_text(
        "# harmonic conformal gradient on S^3\n"
        "family = confgrad\nn = 3\nepsilon = 1\nmu = 1\np = 4\nq = -1\n"
    )
    assert main(["verify", "--spec", str(spec), "--points", "30"]) == 0
    # flag overrides the file's q, refuting
    assert main(["verify", "--spec", str(spec), "--points", "30", "--q", "-0.8"]) == 1
    capsys.readouterr()


def test_verify_json_deterministic(tmp_path, capsys):
    out1, out2 = tmp_path / "a.json", tmp_path / "b.json"
    argv = "verify --family killing --n 2 --epsilon -1 --r 1 --omega 1 --p 3 --q -0.5 --points 40".split()
    assert main(argv + ["--json", str(out1)]) == 0
    assert main(argv + ["--json", str(out2)]) == 0
    assert out1.read_bytes() == out2.read_bytes()
    doc = json.loads(out1.read_text())
    assert doc["verdicts"]["harmonic"] is True
    assert set(doc) >= {"family", "params", "p", "q", "n", "epsilon", "seed", "count",
                        "max_rel_residual", "verdicts", "per_point"}
    capsys.readouterr()


def test_solve_killing(capsys):
    assert main("solve --family killing --n 4 --r 2 --epsilon 1".split()) == 0
    out = capsys.readouterr().out
    assert "(sqrt(73) - 13)/8" in out
    assert "-0.5569995318" in out


def test_solve_nonexistence_exit_codes(capsys):
    assert main("solve --family quadratic --n 6".split()) == 3
    assert main("solve --family quadratic --n 3".split()) == 3
    assert main("solve --family confgrad --n 2 --epsilon 1".split()) == 3
    assert main("solve --family killing --n 4 --r 1 --epsilon 1".split()) == 3
    capsys.readouterr()


def test_solve_loxodromic(capsys):
    assert main("solve --family loxodromic".split()) == 0
    assert "(3, -0.5)" in capsys.readouterr().out


def test_table_values_and_csv(tmp_path, capsys):
    path1, path2 = tmp_path / "t1.csv", tmp_path / "t2.csv"
    assert main(["table", "--csv", str(path1)]) == 0
    assert main(["table", "--csv", str(path2)]) == 0
    assert path1.read_bytes() == path2.read_bytes()
    rows = list(csv.DictReader(path1.open()))
    assert [row["n"] for row in rows] == ["5", "7", "9"]
    got = {int(r["n"]): (float(r["q"]), float(r["lambda0_sq_over_4"])) for r in rows}
    assert got[5][0] == pytest.approx(1 / math.sqrt(3) - 1, abs=1e-9)
    assert got[5][1] == pytest.approx(math.sqrt(3) - 1, abs=1e-9)
    assert got[7][0] == pytest.approx((math.sqrt(201) - 29) / 16, abs=1e-9)
    assert got[9][1] == pytest.approx((math.sqrt(34) - 5) / 3, abs=1e-9)
    capsys.readouterr()


def test_scan2d_spherical_no_hits(capsys):
    code = main(
        "scan2d --epsilon 1 --omega 0.5,1 --rr 0.5,1 --h 0.5,1 --p 3,4 --q=-0.5,-1".split()
    )
    assert code == 0
    assert "0 harmonic hits" in capsys.readouterr().out


def test_scan2d_hyperbolic_loop_hits(tmp_path, capsys):
    out = tmp_path / "scan.json"
    code = main(
        (
            "scan2d --epsilon -1 --omega 0,0.6,1 --rr 0 --h 0,0.8,1 --p 3 --q=-0.5 "
            "--json " + str(out)
        ).split()
    )
    assert code == 0
    doc = json.loads(out.read_text())
    hits = {(row["omega"], row["h"]) for row in doc["rows"] if row["harmonic"]}
    # exactly the loop members (omega^2 + h^2 = 1) and the endpoints sigma_0, sigma_1
    assert hits == {(0.6, 0.8), (1.0, 0.0), (0.0, 1.0)}
    capsys.readouterr()


def test_scan2d_empty_grid(capsys):
    assert main(["scan2d", "--epsilon", "1", "--omega", "", "--rr", "1", "--h", "1"]) == 0
    assert "0 grid points, 0 harmonic hits" in capsys.readouterr().out


def test_scan2d_json_deterministic(tmp_path, capsys):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    argv = "scan2d --epsilon -1 --omega 0.5,1 --rr 0,1 --h 1 --p 3 --q=-0.5,-1".split()
    assert main(argv + ["--json", str(a)]) == 0
    assert main(argv + ["--json", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()
    capsys.readouterr()


def test_scan2d_numeric_mode(capsys):
    code = main("scan2d --epsilon -1 --numeric --omega 0.6 --rr 0 --h 0.8 --p 3 --q=-0.5".split())
    assert code == 0
    assert "1 harmonic hits" in capsys.readouterr().out


def test_verify_fd_override(capsys):
    code = main(
        "verify --family confgrad --n 3 --epsilon 1 --mu 1 --p 4 --q -1 "
        "--points 10 --fd --h-fd 0.001 --tol 0.001".split()
    )
    assert code == 0
    assert "derivatives=finite-difference" in capsys.readouterr().out
