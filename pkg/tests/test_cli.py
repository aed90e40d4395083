import json
import os
import subprocess
import sys

import pytest

from cyclograph.cli import main, parse_generator
from cyclograph.core import from_rho, make_context
from cyclograph.errors import InvalidParameterError


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_parse_generator():
    assert parse_generator(3, "1,9") == from_rho(1, 9)
    assert parse_generator(3, "1,9", rho=False) == make_context(3).element((1, 9))
    assert parse_generator(4, "7, 4") == make_context(4).element((7, 4))
    for m, text in [(4, "1,2,3"), (4, "x,1"), (5, "1,2")]:
        with pytest.raises(InvalidParameterError):
            parse_generator(m, text)
    with pytest.raises(InvalidParameterError):
        parse_generator(4, "1,2", rho=True)


def test_graph_text(capsys):
    code, out, _ = run(capsys, "graph", "--m", "3", "--gen", "1,9")
    assert code == 0
    assert "order: 91" in out and "valency: 6" in out and "diameter: 6" in out


def test_graph_json_is_byte_identical(capsys):
    args = ["graph", "--m", "4", "--gen", "7,4", "--format", "json"]
    _, first, _ = run(capsys, *args)
    _, second, _ = run(capsys, *args)
    assert first == second
    doc = json.loads(first)
    assert doc["n_vertices"] == 65 and doc["valency"] == 4 and len(doc["edges"]) == 130
    assert doc["summary"]["complete_rotation"] is True


def test_graph_dot_to_file(capsys, tmp_path):
    path = tmp_path / "g.dot"
    code, out, _ = run(capsys, "graph", "--n", "7", "--S", "1,6", "--format", "dot", "--output", str(path))
    assert code == 0 and out == ""
    assert path.read_text().count("--") == 7


def test_power_basis_flag(capsys):
    code, out, _ = run(capsys, "graph", "--m", "3", "--power", "--gen", "1,9")
    assert code == 0 and "order: 73" in out


def test_codes(capsys):
    code, out, _ = run(capsys, "codes", "--m", "3", "--gen", "1,9", "--t", "1")
    assert code == 0
    assert "1 perfect ideal code(s)" in out and "(1+2rho), N(D) = 7, 13 members" in out
    code, out, _ = run(capsys, "codes", "--m", "3", "--gen", "1,9", "--t", "1", "--format", "json")
    doc = json.loads(out)
    assert doc["agreement"] and doc["theorem"]["agreement"]
    assert [r["norm"] for r in doc["perfect"]] == [7]


def test_frobenius(capsys):
    code, out, _ = run(capsys, "frobenius", "--p", "3", "--n", "91")
    assert code == 0 and out.count("bridge verified") == 4
    code, out, _ = run(capsys, "frobenius", "--p", "3", "--n", "9")
    assert code == 0 and "no candidates" in out
    code, out, _ = run(capsys, "frobenius", "--p", "5", "--n-range", "10:40", "--format", "json")
    doc = json.loads(out)
    assert [r["n"] for r in doc["results"] if r["candidates"]] == [11, 31]


@pytest.mark.parametrize(
    "argv",
    [
        ["graph", "--m", "4", "--gen", "0,0"],
        ["graph", "--m", "4"],
        ["graph", "--m", "5", "--gen", "1,1,1,1"],
        ["codes", "--m", "3", "--gen", "1,9", "--t", "0"],
        ["frobenius", "--p", "4", "--n", "91"],
        ["frobenius", "--p", "3"],
        ["frobenius", "--p", "3", "--n-range", "9:2"],
        ["nonsense"],
        ["graph", "--kind", "triangle"],
    ],
)
def test_usage_errors_exit_2(capsys, argv):
    with pytest.raises(SystemExit) as exc:
        sys.exit(main(argv))
    assert exc.value.code == 2


def test_resource_limit_exit_3(capsys):
    code, _, err = run(capsys, "--max-vertices", "10", "graph", "--m", "4", "--gen", "7,4")
    assert code == 3 and "resource limit" in err
    assert "CYCLOGRAPH_MAX_VERTICES" not in os.environ


def test_accept_subset(capsys):
    code, out, _ = run(capsys, "accept", "--only", "1,7")
    assert code == 0
    assert out.splitlines()[0].startswith("[PASS] criterion 1")
    code, out, _ = run(capsys, "accept", "--only", "1", "--format", "json")
    doc = json.loads(out)
    assert doc["passed"] and doc["criteria"][0]["number"] == 1


def test_accept_with_injected_fault_exits_1(capsys):
    code, out, _ = run(capsys, "accept", "--only", "1,6", "--inject-fault", "adjacency")
    assert code == 1 and "[FAIL] criterion 1" in out
    code, out, _ = run(capsys, "accept", "--only", "6", "--inject-fault", "classifier")
    assert code == 1 and "[FAIL] criterion 6" in out


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "cyclograph", "graph", "--m", "4", "--gen", "2,1"],
        capture_output=True, text=True, check=False,
    )
    assert proc.returncode == 0 and "order: 5" in proc.stdout
