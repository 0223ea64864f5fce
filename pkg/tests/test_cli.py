"""End-to-end command-line checks: outputs, files, exit codes, determinism."""

import json
import math

import numpy as np
import pytest

from gaussmink import Polygon, c_threshold, polygon_measure
from gaussmink.cli import main, parse_density_spec


def run(capsys, argv):
    code = main(argv)
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_constants_text_and_json(capsys):
    code, out, _ = run(capsys, ["constants", "--p", "1"])
    assert code == 0
    assert "c_p = 0.60653065971263342" in out
    code, out, _ = run(capsys, ["constants", "--p", "0.5", "--json"])
    assert code == 0
    payload = json.loads(out)
    assert payload["c_p"] == pytest.approx(c_threshold(0.5), rel=1e-15)
    assert set(payload) == {"c_p", "density_threshold", "critical_radius"}


def test_roots_counts(capsys):
    code, out, _ = run(capsys, ["roots", "--p", "0.5", "--c", "0.3"])
    assert code == 0
    assert out.splitlines()[0] == "count = 2"
    assert "m1 = " in out and "m2 = " in out
    code, out, _ = run(capsys, ["roots", "--p", "0.5", "--c", "0.9"])
    assert code == 0
    assert out.strip() == "count = 0"


def test_goodset_lines(capsys):
    code, out, _ = run(capsys, ["goodset", "--c", "0.2", "--p", "0.5", "--s", "2"])
    assert code == 0
    lines = out.splitlines()
    assert lines[0].startswith("h0 = ")
    assert lines[3] == "aspect bound = inf"
    h0 = float(lines[0].split(" = ")[1])
    h1 = float(lines[1].split(" = ")[1])
    assert h1 == pytest.approx(2.0 * h0, rel=1e-12)


def test_theta_json_payload(capsys):
    code, out, _ = run(
        capsys, ["theta", "--p", "0.5", "--s", "2", "--c", "0.2", "--json"]
    )
    assert code == 0
    payload = json.loads(out)
    assert payload["form"] == "normalized"
    assert payload["gt_pi"] is False
    assert 0.0 < payload["theta"] < math.pi
    assert payload["k_nearest"] >= 1


def test_theta_deterministic_bytes(capsys):
    argv = ["theta", "--p", "0.25", "--s", "3", "--c", "0.1"]
    _, first, _ = run(capsys, argv)
    _, second, _ = run(capsys, argv)
    assert first == second


def test_theta_scan_csv_roundtrip(tmp_path, capsys):
    out_a = tmp_path / "scan_a.csv"
    out_b = tmp_path / "scan_b.csv"
    argv = [
        "theta-scan",
        "--p-values", "0,0.5",
        "--s-values", "2",
        "--n-c", "3",
    ]
    code, _, _ = run(capsys, argv + ["--out", str(out_a)])
    assert code == 0
    code, _, _ = run(capsys, argv + ["--out", str(out_b)])
    assert code == 0
    text = out_a.read_text()
    header = text.splitlines()[0]
    assert header.startswith("c,p,s,h0,theta")
    assert len(text.splitlines()) == 7
    assert out_a.read_bytes() == out_b.read_bytes()


def test_theta_scan_partial_failure_exit_code(capsys):
    # a level within 1e-6 of the admissible ceiling runs the quadrature into
    # the divergent corner; the cell records its failure and the run says so
    code, out, _ = run(
        capsys,
        [
            "theta-scan",
            "--p-values", "0",
            "--s-values", "80",
            "--n-c", "3",
            "--frac-hi", "0.999999",
            "--tol", "1e-10",
        ],
    )
    assert code == 3
    assert len(out.splitlines()) == 4


def test_shoot_half_period_and_csv(tmp_path, capsys):
    out_file = tmp_path / "traj.csv"
    code, out, _ = run(
        capsys,
        ["shoot", "--c", "0.2", "--p", "0.5", "--h0", "0.2",
         "--half-period", "--out", str(out_file)],
    )
    assert code == 0
    assert out.splitlines()[0].startswith("half period = 2.65499889")
    drift = float(out.splitlines()[3].split(" = ")[1])
    assert abs(drift) < 1e-8
    header = out_file.read_text().splitlines()[0]
    assert header == "theta,h,hp,E"


def test_find_closed_reports_empty_candidates(capsys):
    code, out, _ = run(
        capsys, ["find-closed", "--c", "0.25", "--p", "0.5", "--n-h0", "40"]
    )
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "cells = 40"
    assert lines[1] == "failures = 0"
    assert "candidates (dist < 0.0001) = 0" in lines
    assert "brackets = 0" in lines


def test_solve_manufactured_roundtrip(tmp_path, capsys):
    report_file = tmp_path / "report.json"
    code, out, _ = run(
        capsys,
        ["solve", "--p", "0.5", "--f", "const:1,cos:2:0.1", "--n", "64",
         "--manufactured", "--report", str(report_file)],
    )
    assert code == 0
    sup_line = [l for l in out.splitlines() if l.startswith("manufactured sup-error")]
    assert sup_line and float(sup_line[0].split(" = ")[1]) < 1e-8
    payload = json.loads(report_file.read_text())
    assert payload["parity"] == "even-symmetric"
    assert payload["residual_sup"] < 1e-10
    assert payload["apriori"]["h_min"] > 0.0


def test_solve_parity_refusal(capsys):
    code, _, err = run(
        capsys, ["solve", "--p", "0.5", "--f", "const:0.05,cos:1:0.01", "--n", "32"]
    )
    assert code == 2
    assert "error:" in err


def test_solve_stall_exit_code(capsys):
    level = 1.5 * c_threshold(0.5) / (2.0 * math.pi)
    code, _, err = run(
        capsys,
        ["solve", "--p", "0.5", "--f", f"const:{level}", "--n", "32",
         "--max-newton", "20"],
    )
    assert code == 4
    assert "reached t = " in err


def test_counterexample_exact_floor(tmp_path, capsys):
    out_file = tmp_path / "member.csv"
    code, out, _ = run(
        capsys,
        ["counterexample", "--p", "0.5", "--j", "2", "--n", "512",
         "--out", str(out_file)],
    )
    assert code == 0
    lines = out.splitlines()
    assert lines[0].split(" = ")[1] == lines[1].split(" = ")[1]
    assert float(lines[0].split(" = ")[1]) == pytest.approx(2.0 ** (-4.0 / 3.0))
    assert out_file.read_text().splitlines()[0] == "theta,h,f"


def test_measure_regular_and_polygon_file(tmp_path, capsys):
    code, out, _ = run(capsys, ["measure", "--p", "0.5", "--regular", "64",
                                "--out", str(tmp_path / "m.csv")])
    assert code == 0
    total = float(out.splitlines()[0].split(" = ")[1])

    poly_file = tmp_path / "square.csv"
    verts = np.array([[0.8, 0.8], [-0.8, 0.8], [-0.8, -0.8], [0.8, -0.8]])
    poly_file.write_text("\n".join(f"{x},{y}" for x, y in verts) + "\n")
    code, out, _ = run(capsys, ["measure", "--p", "0.5", "--poly", str(poly_file)])
    assert code == 0
    assert out.splitlines()[0] == "angle,weight"
    expect = polygon_measure(Polygon(verts), 0.5).total
    assert float(out.splitlines()[-1].split(" = ")[1]) == pytest.approx(expect, rel=1e-12)
    assert total > 0.0


def test_measure_convergence_mode(capsys):
    code, out, _ = run(
        capsys, ["measure", "--p", "0.5", "--convergence", "8,16,32"]
    )
    assert code == 0
    assert "monotone decreasing = true" in out


def test_measure_rejects_bad_polygon(tmp_path, capsys):
    poly_file = tmp_path / "bad.csv"
    poly_file.write_text("2,1\n3,1\n2,2\n")  # origin outside
    code, _, err = run(capsys, ["measure", "--p", "0.5", "--poly", str(poly_file)])
    assert code == 2
    assert "error:" in err


def test_usage_errors_exit_two(capsys):
    assert run(capsys, ["constants", "--p", "1.5"])[0] == 2
    assert run(capsys, ["measure", "--p", "0.5"])[0] == 2
    assert run(capsys, ["solve", "--p", "0.5", "--f", "wavelet:3"])[0] == 2


def test_io_failure_exit_five(capsys):
    code, _, err = run(
        capsys, ["constants", "--p", "0.5", "--out", "/nonexistent_dir_xx/c.txt"]
    )
    assert code == 5
    assert "error:" in err


def test_density_spec_parser():
    vals = parse_density_spec("const:1,cos:2:0.1,sin:3:0.05", 16)
    th = 2.0 * np.pi * np.arange(16) / 16
    assert np.allclose(vals, 1.0 + 0.1 * np.cos(2 * th) + 0.05 * np.sin(3 * th))
    with pytest.raises(ValueError):
        parse_density_spec("cos:0:1", 16)
    with pytest.raises(ValueError):
        parse_density_spec("const:a", 16)
