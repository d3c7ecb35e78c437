from fractions import Fraction as F
import importlib.util
import random
import subprocess
import sys
from pathlib import Path

import pytest

from wturan.errors import FormatError
from wturan.flags.certificate import read_certificate, round_solution, verify_certificate
from wturan.flags.colored import ColoredGraph
from wturan.flags.sdp import DensityProblem, build_sdp, case_problem, mantel_problem
from wturan.flags.sdpa import (constraint_rows, export_sdpa, format_sdpa, parse_sdpa, read_sdpa, to_sdpa,
                               variable_map)

TOOL = Path(__file__).resolve().parents[1] / "tools" / "solve_sdpa_cvxpy.py"


def random_problem(seed: int) -> DensityProblem:
    rng = random.Random(seed)
    k = rng.choice([2, 3])
    pool = [ColoredGraph.monochromatic(3, c) for c in range(2, k + 1)] + [ColoredGraph.parse("3:112"),
                                                                          ColoredGraph.parse("2:2")]
    forb = tuple(rng.sample(pool, rng.randint(0, 2)))
    u = (F(0),) + tuple(F(rng.randint(0, 6), 6) for _ in range(k - 1))
    return DensityProblem(k, u, tuple(g for g in forb if max(g.code) <= k), rng.choice([3, 4]), f"r{seed}")


FIXTURES = [mantel_problem()] + [random_problem(s) for s in range(19)]


def test_mantel_layout():
    inst = build_sdp(mantel_problem())
    data = to_sdpa(inst)
    assert data.block_struct == [2, -3]
    assert data.m == 1 + 3
    assert data.c == [1, 0, 0, 0]
    assert data.types == ["1:"]
    assert data.graphs == ["3:111", "3:112", "3:122"]
    assert data.row_scale == [1, 3, 3]
    assert all(v.denominator == 1 for v in data.entries.values())
    assert variable_map(inst) == {(0, 0, 0): 2, (0, 0, 1): 3, (0, 1, 1): 4}


@pytest.mark.parametrize("problem", FIXTURES, ids=lambda p: p.name)
def test_round_trip(problem, tmp_path):
    inst = build_sdp(problem)
    path = tmp_path / "x.dat-s"
    data = export_sdpa(inst, path)
    again = read_sdpa(path)
    assert again == data
    assert parse_sdpa(format_sdpa(data)) == data


def test_constraint_rows_match_instance():
    inst = build_sdp(case_problem("rho512"))
    data = to_sdpa(inst)
    vmap = variable_map(inst)
    rows = constraint_rows(data)
    assert len(rows) == len(inst.graphs)
    for g, (obj, coeffs) in enumerate(rows):
        assert obj == inst.objective_values[g]
        expect = {vmap[(b, i, j)]: (v if i == j else 2 * v)
                  for b in range(len(inst.blocks)) for (i, j), v in inst.densities[g][b].items()}
        assert coeffs == expect
    assert data.block_struct == [36, 36, 31, 28, 26, 21, -1145]
    assert all(v.denominator == 1 for v in data.entries.values())


def test_decimal_rendering():
    text = "2\n1\n-1\n1 0\n0 1 1 1 0.25\n1 1 1 1 1/3\n"
    data = parse_sdpa(text)
    assert data.entries[(0, 1, 1, 1)] == F(1, 4)
    assert "0 1 1 1 0.25" in format_sdpa(data)
    assert parse_sdpa(format_sdpa(data)) == data


@pytest.mark.parametrize("text,line", [
    ("1\n1\n", None),
    ("x\n1\n1\n1\n", 1),
    ("1\n2\n1\n1\n", 3),
    ("2\n1\n1\n1\n", 4),
    ("1\n1\n1\n1\n0 1 1\n", 5),
    ("1\n1\n1\n1\n0 2 1 1 1\n", 5),
    ("1\n1\n2\n1\n0 1 2 1 1\n", 5),
    ("1\n1\n-2\n1\n0 1 1 2 1\n", 5),
    ("1\n1\n1\n1\n0 1 1 1 1\n0 1 1 1 2\n", 6),
    ("1\n1\n1\n1\n0 1 1 1 abc\n", 5),
])
def test_parse_errors(text, line):
    with pytest.raises(FormatError) as exc:
        parse_sdpa(text)
    assert exc.value.line == line


def test_unwritable_destination(tmp_path):
    inst = build_sdp(mantel_problem())
    with pytest.raises(OSError):
        export_sdpa(inst, tmp_path / "missing" / "x.dat-s")


@pytest.mark.skipif(importlib.util.find_spec("cvxpy") is None, reason="cvxpy not installed")
def test_external_solve_of_mantel(tmp_path):
    inst = build_sdp(mantel_problem())
    export_sdpa(inst, tmp_path / "m.dat-s")
    subprocess.run([sys.executable, str(TOOL), str(tmp_path / "m.dat-s"), "-o", str(tmp_path / "m.sol")],
                   check=True, capture_output=True)
    sol = read_certificate(tmp_path / "m.sol", numeric=True)
    assert abs(float(sol.bound) - 0.5) < 1e-6
    cert = round_solution(inst, sol.blocks, 1000)
    assert cert.bound == F(1, 2)
    assert verify_certificate(inst, cert).accepted
