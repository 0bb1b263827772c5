"""Command line surface: formats, methods, exit codes, determinism."""

import json

import pytest

from permhomology.cli import main


def run(capsys, *argv):
    rc = main(list(argv))
    out = capsys.readouterr().out
    return rc, out


def run_json(capsys, *argv):
    rc, out = run(capsys, *argv)
    assert rc == 0
    return json.loads(out)


def test_homology_cyclic_formatting(capsys):
    d = run_json(capsys, "homology", "Z12", "-n", "3")
    (r,) = d["results"]
    assert r["invariants"] == [4, 3]
    assert r["method"] == "small"
    assert d["order"] == 12


def test_homology_m24_seven_part(capsys):
    d = run_json(capsys, "homology", "M24", "-n", "3", "-p", "7")
    assert d["results"][0]["invariants"] == []
    assert d["results"][0]["method"] == "sylow"
    assert d["p_restriction"] == 7


def test_homology_m23_degree_five_large_primes(capsys):
    d = run_json(capsys, "homology", "M23", "-n", "5", "--p-min", "5")
    assert d["results"][0]["invariants"] == [7]
    assert d["p_restriction"] == ">=5"


def test_homology_degree_range_with_restriction(capsys):
    d = run_json(capsys, "homology", "Z12", "-n", "1", "--to", "3", "-p", "2")
    got = {r["degree"]: r["invariants"] for r in d["results"]}
    assert got == {1: [4], 2: [], 3: [4]}


def test_wall_method_polygon(capsys):
    d = run_json(capsys, "homology", "Z4", "-n", "1", "--to", "3",
                 "--method", "wall")
    got = {r["degree"]: r["invariants"] for r in d["results"]}
    assert got == {1: [4], 2: [], 3: [4]}
    assert d["results"][0]["method"] == "wall"


def test_bar_method(capsys):
    d = run_json(capsys, "homology", "Z4", "-n", "2", "--method", "bar")
    assert d["results"][0]["invariants"] == []


def test_report_envelope_and_determinism(capsys):
    rc1, out1 = run(capsys, "homology", "Z6", "-n", "3")
    rc2, out2 = run(capsys, "homology", "Z6", "-n", "3")
    assert (rc1, rc2) == (0, 0)
    assert out1 == out2
    d = json.loads(out1)
    for key in ("tool", "version", "seed", "ce_convention", "command"):
        assert key in d


def test_big_group_without_route_hits_cap(capsys):
    rc = main(["homology", "M24", "-n", "3"])
    assert rc == 2


def test_unknown_group_is_bad_input(capsys):
    rc = main(["homology", "NOSUCH", "-n", "1"])
    assert rc == 2


def test_ppart_table_csv(capsys):
    rc, out = run(capsys, "ppart-table", "--groups", "S3,S5",
                  "--primes", "3,5", "--csv")
    assert rc == 0
    lines = out.strip().splitlines()
    assert lines[0] == "group,3,5"
    assert lines[1] == "S3,4k-1,-"
    assert lines[2].startswith("S5,")


def test_wythoff_m24_report(capsys):
    d = run_json(capsys, "wythoff", "M24", "--rings", "0,1,2,3,4")
    assert d["f_vector"]["0"] == 5100480
    assert d["f_vector"]["1"] == 58655520
    assert d["vertex_degree"] == 23
    eo = d["edge_orbits"]
    assert eo["vertex_stabilizer_order"] == 48
    assert sorted(o["stabilizer_order"] for o in eo["orbits"]) == \
        [6, 32, 96, 96, 96, 96]


def test_wythoff_orbit_mode(capsys):
    d = run_json(capsys, "wythoff", "M22", "--rings", "0,1,2",
                 "--orbit-dim", "0")
    assert d["orbits"]["counts"] == [1]


def test_edge_degree_hexagon(capsys, tmp_path):
    dump = tmp_path / "points.csv"
    d = run_json(capsys, "edge-degree", "S3", "--vector", "1,2,3",
                 "--dump-points", str(dump))
    assert d["points"] == 6
    assert d["degree"] == 2
    assert d["edges"] == 6
    assert len(dump.read_text().strip().splitlines()) == 6


def test_resolution_report(capsys):
    d = run_json(capsys, "resolution", "Z6", "--length", "3")
    assert d["ranks"] == [1, 1, 1, 1]
    assert d["homology"][0] == {"degree": 1, "invariants": [2, 3]}


def test_csv_homology(capsys):
    rc, out = run(capsys, "homology", "Z12", "-n", "3", "--csv")
    assert rc == 0
    lines = out.strip().splitlines()
    assert lines[0] == "degree,invariants,method"
    assert lines[1] == "3,4 3,small"
