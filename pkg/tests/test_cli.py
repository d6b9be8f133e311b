import csv
import io
import json
import math
import subprocess
import sys

import pytest

from lagrange_so3 import cli
from lagrange_so3.core import Metric, SolverError, covector_from_angles, quaternion_from_axis_angle
from lagrange_so3.cut import cut_time, diameter
from lagrange_so3.geodesic import sample_geodesic
from lagrange_so3.inverse import invert_exp


def run(capsys, *args):
    code = cli.main(list(args))
    out = capsys.readouterr()
    return code, out.out, out.err


def rows(text):
    return list(csv.reader(io.StringIO(text)))


def test_geodesic_rows_and_header(capsys):
    code, out, _ = run(capsys, "--i1", "1", "--i3", "1", "geodesic", "--pbar3", "0", "--azimuth", "0",
                       "--t-end", "3.14159", "--n", "10")
    assert code == 0
    table = rows(out)
    assert table[0] == ["t", "w", "x", "y", "z"]
    assert len(table) == 11
    for r in table[1:]:
        assert float(r[1]) == pytest.approx(math.cos(float(r[0]) / 2), abs=1e-15)


def test_geodesic_bit_for_bit(capsys):
    _, out, _ = run(capsys, "--i1", "1", "--eta", "-0.75", "geodesic", "--pbar3", "0.5", "--azimuth", "0.3",
                    "--t-end", "3", "--n", "25")
    m = Metric.from_eta(1.0, -0.75)
    lib = sample_geodesic(m, covector_from_angles(m, 0.5, 0.3), 3.0, 25)
    for r, (t, q) in zip(rows(out)[1:], lib):
        assert [float(v) for v in r] == [t, q.w, q.x, q.y, q.z]


def test_cut_time_command(capsys):
    _, out, _ = run(capsys, "--i1", "1", "--i3", "4", "cut-time", "--pbar3", "1")
    table = rows(out)
    assert table[0] == ["pbar3", "cut_time", "tau", "stratum"]
    assert float(table[1][1]) == pytest.approx(math.pi) and table[1][3] == "L_segment"


def test_diameter_json_roundtrip(capsys):
    _, out, _ = run(capsys, "--i1", "1", "--i3", "1", "diameter")
    doc = json.loads(out)
    assert list(doc) == ["value", "farthest_kind", "representatives"]
    assert doc["farthest_kind"] == "PlaneP"
    assert doc["value"] == diameter(Metric(1, 1))[0]


def test_distance_json_roundtrip(capsys):
    _, out, _ = run(capsys, "--i1", "1", "--i3", "2", "distance", "--axis", "1", "2", "2", "--angle", "1.2")
    doc = json.loads(out)
    sol = invert_exp(Metric(1, 2), quaternion_from_axis_angle((1, 2, 2), 1.2))
    assert list(doc)[:5] == ["distance", "covector", "time", "residual", "on_cut_locus"]
    assert doc["distance"] == pytest.approx(sol.time, abs=1e-12)
    assert doc["covector"] == pytest.approx(list(sol.covector.as_array()), abs=1e-12)
    assert doc["on_cut_locus"] is False


def test_distance_on_plane(capsys):
    _, out, _ = run(capsys, "--i1", "1", "--i3", "1", "distance", "--quaternion", "0", "0", "1", "0")
    doc = json.loads(out)
    assert doc["on_cut_locus"] and doc["stratum"] == "P_plane"
    assert doc["distance"] == pytest.approx(math.pi)


def test_locus_commands(capsys):
    _, out, _ = run(capsys, "--i1", "1", "--i3", "4", "cut-locus", "--n", "5")
    table = rows(out)
    assert table[0] == cli.LOCUS_HEADER and len(table) == 26
    _, out, _ = run(capsys, "--i1", "1", "--eta", "1", "su2-locus", "--n", "4")
    assert {r[6] for r in rows(out)[1:]} == {"D_disk", "S_circle"}
    _, out, _ = run(capsys, "--i1", "1", "--i3", "1", "--format", "json", "wavefront", "--t", "1", "--n", "4")
    assert len(json.loads(out)) == 16


def test_sr_compare_errors_decrease(capsys):
    _, out, _ = run(capsys, "--i1", "1", "--i3", "4", "sr-compare", "--quantity", "conjugate_time", "--c", "1")
    table = rows(out)
    assert table[0] == ["eta", "riemannian", "sub_riemannian", "abs_error"]
    errs = [float(r[3]) for r in table[1:]]
    assert errs == sorted(errs, reverse=True)


def test_deterministic(capsys):
    args = ("--i1", "1", "--i3", "4", "cut-locus", "--n", "6")
    assert run(capsys, *args)[1] == run(capsys, *args)[1]


def test_exit_codes(capsys, monkeypatch):
    assert run(capsys, "--i1", "1", "--i3", "-1", "diameter")[0] == 2
    assert run(capsys, "--i1", "1", "--i3", "1", "distance", "--axis", "0", "0", "1", "--angle", "0")[0] == 2
    with pytest.raises(SystemExit) as exc:
        cli.main(["--i1", "1", "diameter"])
    assert exc.value.code == 2

    def boom(metric, args):
        raise SolverError("no root")

    monkeypatch.setattr(cli, "cmd_diameter", boom)
    code, _, err = run(capsys, "--i1", "1", "--i3", "1", "diameter")
    assert code == 3 and "no root" in err


def test_module_entry_point(tmp_path):
    out = tmp_path / "d.json"
    proc = subprocess.run([sys.executable, "-m", "lagrange_so3", "--i1", "1", "--i3", "4", "-o", str(out), "diameter"],
                          capture_output=True, text=True)
    assert proc.returncode == 0
    assert json.loads(out.read_text())["farthest_kind"] == "TwoPoles"
    assert b"\r\n" not in (tmp_path / "d.json").read_bytes()


def test_cut_time_grid_matches_library(capsys):
    _, out, _ = run(capsys, "--i1", "2", "--eta", "-0.6", "cut-time", "--n", "5")
    m = Metric.from_eta(2.0, -0.6)
    for r in rows(out)[1:]:
        assert float(r[1]) == cut_time(m, float(r[0])).cut_time
