"""Command-line interface: parsing, outputs, determinism, exit codes."""

import json
import subprocess
import sys

import pytest

from polyshift.cli import main, parse_polytope_input
from polyshift.counting import ZonotopeSpec
from polyshift.errors import GeometryError
from polyshift.geometry import Polytope, as_vec


def run_cli(args, capsys):
    code = main(args)
    out = capsys.readouterr().out
    return code, out


# ---------------------------------------------------------------------------
# input parsing


def test_parse_simplex():
    p = parse_polytope_input("simplex:2")
    assert set(p.vertices) == {as_vec(v) for v in [(0, 0), (1, 0), (0, 1)]}


def test_parse_reeve():
    p = parse_polytope_input("reeve:4")
    assert as_vec((1, 1, 4)) in p.vertices


def test_parse_slab():
    p = parse_polytope_input("slab:3:2")
    assert len(p.vertices) == 6


def test_parse_file(tmp_path):
    path = tmp_path / "box.json"
    path.write_text(
        json.dumps({"dim": 2, "vertices": [["0", "0"], ["1", "0"], ["0", "1"], ["1", "1"]]})
    )
    p = parse_polytope_input(f"file:{path}")
    assert isinstance(p, Polytope)
    assert len(p.vertices) == 4


def test_parse_zonotope_file(tmp_path):
    path = tmp_path / "hex.json"
    path.write_text(json.dumps({"dim": 2, "generators": [[1, 0], [0, 1], [1, 1]]}))
    z = parse_polytope_input(f"zonotope:{path}")
    assert isinstance(z, ZonotopeSpec)


@pytest.mark.parametrize(
    "bad", ["nonsense:2", "simplex:x", "file:/no/such/file.json", "slab:3:9"]
)
def test_parse_errors(bad):
    with pytest.raises(GeometryError):
        parse_polytope_input(bad)


# ---------------------------------------------------------------------------
# commands


def test_moments_reeve_1(capsys):
    code, out = run_cli(["moments", "--input", "reeve:1"], capsys)
    assert code == 0
    data = json.loads(out)
    assert data["mean"] == "1/6"
    assert data["variance"] == "5/36"
    assert data["seed"] == 0


def test_volume_command(capsys):
    code, out = run_cli(["volume", "--input", "central-slab:3"], capsys)
    data = json.loads(out)
    assert code == 0
    assert data["volume"] == "2/3"
    assert data["isLattice"] is True


def test_distribution_exact_csv(capsys):
    code, out = run_cli(
        ["distribution", "--input", "simplex:3", "--method", "exact", "--format", "csv"],
        capsys,
    )
    assert code == 0
    assert out == "count,probability\n0,5/6\n1,1/6\n"


def test_distribution_mc_deterministic(capsys):
    args = [
        "distribution", "--input", "simplex:2", "--method", "mc",
        "--samples", "2000", "--seed", "11",
    ]
    _, first = run_cli(args, capsys)
    _, second = run_cli(args, capsys)
    assert first == second
    data = json.loads(first)
    assert data["distribution"]["samples"] == 2000


def test_count_command(capsys):
    code, out = run_cli(
        ["count", "--input", "simplex:2", "--shifts", "5", "--seed", "3"], capsys
    )
    data = json.loads(out)
    assert code == 0
    assert len(data["counts"]) == 5
    assert all(c in (0, 1) for c in data["counts"])


def test_verify_zonotope_file(tmp_path, capsys):
    path = tmp_path / "hexagon.json"
    path.write_text(json.dumps({"dim": 2, "generators": [[1, 0], [0, 1], [1, 1]]}))
    code, out = run_cli(
        [
            "verify", "--identity", "zonotope-constancy",
            "--input", f"zonotope:{path}", "--shifts", "100",
        ],
        capsys,
    )
    data = json.loads(out)
    assert code == 0
    assert data["status"] == "pass"
    assert any("constant 3" in n for n in data["notes"])


def test_verify_counterexample_exits_zero(capsys):
    code, out = run_cli(
        ["verify", "--identity", "counterexample-symmetry"], capsys
    )
    data = json.loads(out)
    assert code == 0
    assert data["status"] == "expected-failure-confirmed"


def test_reeve_audit_command(capsys):
    code, out = run_cli(["reeve-audit", "--n", "2"], capsys)
    data = json.loads(out)
    assert code == 0
    assert data["varLayerOracle"] == "2/9"
    assert data["varClosedForm"] == "29/144"
    assert data["oraclesAgree"] is True
    assert data["matchesClosedForm"] is False


def test_catalog_list(capsys):
    code, out = run_cli(["catalog"], capsys)
    data = json.loads(out)
    assert code == 0
    assert "simplex:<d>" in data["constructions"]
    assert "zonotope-constancy" in data["identities"]


def test_catalog_dump_round_trip(tmp_path, capsys):
    path = tmp_path / "dump.json"
    code, _ = run_cli(["catalog", "--dump", "simplex:2", "--out", str(path)], capsys)
    assert code == 0
    reparsed = parse_polytope_input(f"file:{path}")
    assert reparsed == parse_polytope_input("simplex:2")


def test_verify_failure_exits_one(capsys, monkeypatch):
    import polyshift.cli as cli_mod
    from polyshift.verifier import VerificationReport

    def fake_verify(kind, **kwargs):
        return VerificationReport(
            identity=kind, instances=1, shifts_per_instance=1, status="fail"
        )

    monkeypatch.setattr(cli_mod, "verify", fake_verify)
    code, out = run_cli(["verify", "--identity", "minkowski-2d"], capsys)
    assert code == 1
    assert json.loads(out)["status"] == "fail"


def test_error_exit_code_and_payload(capsys):
    code, out = run_cli(["moments", "--input", "nonsense:1"], capsys)
    assert code == 2
    data = json.loads(out)
    assert "error" in data


def test_flat_input_moment_error(capsys):
    code, out = run_cli(["moments", "--input", "central-slab:2"], capsys)
    assert code == 2
    assert "error" in json.loads(out)


def test_cell_budget_flag(capsys):
    code, out = run_cli(
        [
            "distribution", "--input", "reeve:3", "--method", "exact",
            "--cell-budget", "4",
        ],
        capsys,
    )
    assert code == 2
    assert "error" in json.loads(out)


def test_byte_determinism_across_processes():
    cmd = [
        sys.executable, "-m", "polyshift",
        "distribution", "--input", "simplex:2", "--method", "mc",
        "--samples", "500", "--seed", "7",
    ]
    a = subprocess.run(cmd, capture_output=True, check=True).stdout
    b = subprocess.run(cmd, capture_output=True, check=True).stdout
    assert a == b


def test_output_to_file(tmp_path, capsys):
    path = tmp_path / "out.json"
    code, out = run_cli(
        ["moments", "--input", "simplex:2", "--out", str(path)], capsys
    )
    assert code == 0
    assert out == ""
    assert json.loads(path.read_text())["mean"] == "1/2"
