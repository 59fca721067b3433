import json
import re
import subprocess
import sys

import pytest

from cartan_courant.cli import h_file_text, main, run_suite
from cartan_courant.courant import CourantAlgebroid, Limits
from cartan_courant.modelfile import bundled_model
from conftest import FIXTURES, bundled

FLAT = str(bundled_model("flat-abelian"))
D8 = str(bundled_model("d8-hyperbolic"))


def test_validate_ok(capsys):
    assert main(["validate", D8]) == 0
    out = capsys.readouterr().out
    assert "verdict: PASS" in out


def test_validate_broken_jacobi_exit_2(capsys):
    assert main(["validate", str(FIXTURES / "sl2-broken-jacobi.model")]) == 2
    err = capsys.readouterr().err
    assert "jacobi" in err and "(Xm, H, Xp)" in err


def test_unparsable_file_exit_2(tmp_path, capsys):
    bad = tmp_path / "bad.model"
    bad.write_text("name: x\n[algebra]\nbasis: a\nform: a a = 1 +\n")
    assert main(["run", str(bad)]) == 2
    assert f"{bad}:4" in capsys.readouterr().err
    assert main(["run", str(tmp_path / "missing.model")]) == 2


def test_run_twisted_d8(tmp_path, capsys):
    out_json = tmp_path / "r.json"
    assert main(["run", D8, "--suite", "twisted", "--json", str(out_json)]) == 0
    text = capsys.readouterr().out
    assert "[PASS] twisted.s1_pperp" in text
    assert "[PASS] twisted.s2_kernel" in text
    assert "[PASS] twisted.h_closed" in text
    data = json.loads(out_json.read_text())
    assert data["verdict"] == "pass"
    assert data["meta"]["seed"] == 20240611
    assert data["meta"]["H"] == "0"


def test_corrupted_bracket_exit_1(capsys):
    assert main(["run", str(FIXTURES / "d8-drop-nabla.model"), "--suite", "precourant"]) == 1
    text = capsys.readouterr().out
    assert "[FAIL] precourant.metric_invariance" in text
    assert "residual = " in text


def test_report_is_deterministic(capsys):
    main(["run", D8, "--suite", "pontryagin", "--seed", "17"])
    first = capsys.readouterr().out
    main(["run", D8, "--suite", "pontryagin", "--seed", "17"])
    assert capsys.readouterr().out == first
    assert "seed: 17" in first


def test_seed_changes_battery():
    spec = bundled("d8-hyperbolic")
    small = Limits(pairs=30, triples=20, quads=10, quints=5)
    a = run_suite(spec, "pontryagin", 1, small).to_text()
    b = run_suite(spec, "pontryagin", 2, small).to_text()
    assert a != b


def test_timings_are_opt_in(capsys):
    timed = re.compile(r"cases\)  \d+\.\d{3}s$", re.M)
    main(["run", FLAT, "--suite", "pontryagin", "--timings"])
    assert timed.search(capsys.readouterr().out)
    main(["run", FLAT, "--suite", "pontryagin"])
    assert not timed.search(capsys.readouterr().out)


def test_unknown_suite():
    with pytest.raises(ValueError):
        run_suite(bundled("flat-abelian"), "everything")


@pytest.mark.parametrize("name,expected", [
    ("flat-abelian", ["x1 x2 x3 x4: 0"]),
    ("d8-hyperbolic", ["x1 x2 x3 x4: 0"]),
    ("sl3-borel", []),
    ("sl4-grassmannian", ["x1 x2 x3 x4: 8*x1*x2 + 16"]),
])
def test_emit_h(tmp_path, name, expected):
    out = tmp_path / "H.txt"
    assert main(["emit-h", str(bundled_model(name)), str(out)]) == 0
    lines = out.read_text().splitlines()
    assert lines[0].startswith("#")
    assert lines[1].startswith("coordinates:")
    assert lines[2:] == expected


def test_emit_h_refuses_on_failure(tmp_path, capsys):
    out = tmp_path / "H.txt"
    assert main(["emit-h", str(FIXTURES / "sl4-flipped-pontryagin.model"), str(out)]) == 1
    assert not out.exists()
    assert "refusing" in capsys.readouterr().err


def test_h_file_text_matches_form():
    spec = bundled("sl4-grassmannian")
    text = h_file_text(spec, CourantAlgebroid(spec.model).h_form())
    assert text.endswith("x1 x2 x3 x4: 8*x1*x2 + 16\n")


def test_identities_skipped_for_synthetic_models():
    rep = run_suite(bundled("d8-skew-kappa"), "identities", limits=Limits(triples=20))
    assert rep["identities.gauge_mode_only"].note.startswith("skipped")
    assert rep["identities.alt_bracket_jacobi"].passed


def test_console_script_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "cartan_courant.cli", "run", FLAT, "--suite", "algebra"],
        capture_output=True, text=True,
    )
    assert proc.returncode == 0
    assert proc.stdout.startswith("== flat-abelian: algebra ==")
