import json
import math
import shutil
import subprocess
import sys

import numpy as np
import pytest

from cstarframes import cli, frames
from cstarframes.errors import (
    BlockPatternViolation,
    NamedObjectMissing,
    ParseError,
    SchemaError,
    UnknownCommand,
)
from cstarframes.measure import FrameMap
from cstarframes.problem import (
    bundled_example,
    dumps,
    map_json,
    parse_problem,
    parse_problem_file,
    parse_problem_text,
)

from cli_cases import CASES, EXAMPLE, GOLDEN, normalise, run


def base(**extra):
    data = {"algebra": {"blocks": [2]}, "rank": 1,
            "measure": {"type": "interval", "a": 0, "b": 1}}
    data.update(extra)
    return data


# problem files


def test_example_file_parses():
    p = parse_problem_file(EXAMPLE)
    assert set(p.maps) == {"F", "G", "G_scaled2"}
    Q = frames.frame_operator(p.map("F"), p.rule)
    assert np.allclose(Q.dense, [[5 / 3, 5 / 3], [5 / 3, 10 / 3]], atol=1e-14)
    assert p.rule.degree == 5 and len(p.rule) == 3
    assert p.scalar("alpha") == 2 and p.scalar("beta") == -1


def test_bundled_copy_matches():
    assert bundled_example().read_text() == open(EXAMPLE).read()


def test_off_block_entry():
    data = base(algebra={"blocks": [1, 1]}, elements={"a": {"dense": [[1, 0.5], [0, 1]]}})
    with pytest.raises(BlockPatternViolation):
        parse_problem(data)


def test_bad_json_reports_position():
    with pytest.raises(ParseError, match=r":2:"):
        parse_problem_text('{"rank": 1,\n "algebra": }', "p.json")


@pytest.mark.parametrize("data", [
    base(extra_field=1),
    base(rank=0),
    base(algebra={"blocks": []}),
    base(measure={"type": "sphere"}),
    base(measure={"type": "interval", "a": 1, "b": 0}),
    base(maps={"F": {"type": "polynomial", "degree": 2, "coeffs": [[[[[1, 0]]]]]}}),
    base(maps={"F": {"type": "polynomial", "coeffs": [[[[[1, 0, 0], [0, 1, 0], [0, 0, 1]]]]]}}),
    base(maps={"F": {"type": "spline"}}),
    base(quadrature_degree=1, maps={"F": {"type": "polynomial", "coeffs": [
        [[[[0, 0], [0, 0]], [[0, 0], [0, 0]]]], [[[[1, 0], [0, 0]], [[0, 0], [1, 0]]]]]}}),
    base(maps={"T": {"type": "tabulated", "samples": []}}),
    base(operators=[]),
])
def test_schema_errors(data):
    with pytest.raises(SchemaError):
        parse_problem_text(json.dumps(data))


def test_empty_maps_fail_downstream():
    p = parse_problem(base(maps={}))
    with pytest.raises(NamedObjectMissing):
        p.map("F")


def test_tabulated_maps():
    F = parse_problem_file(EXAMPLE).map("F")
    p0 = parse_problem(base(quadrature_degree=4))
    tab = map_json(F.tabulate(p0.rule))
    p = parse_problem(base(quadrature_degree=4, maps={"T": tab}))
    T = p.map("T")
    assert not T.is_polynomial and T.allclose(F.tabulate(p.rule))
    shifted = dict(tab, nodes=[x + 1e-6 for x in tab["nodes"]])
    with pytest.raises(SchemaError):
        parse_problem(base(quadrature_degree=4, maps={"T": shifted}))
    without_nodes = {k: v for k, v in tab.items() if k != "nodes"}
    with pytest.raises(SchemaError):
        parse_problem(base(quadrature_degree=4, maps={"T": without_nodes}))


def test_discrete_measure_with_tabulated_map():
    data = {"algebra": {"blocks": [1]}, "rank": 1,
            "measure": {"type": "discrete", "points": [0, 1], "masses": [1, 2]},
            "maps": {"F": {"type": "tabulated", "samples": [[[[[[1, 0]]]]], [[[[[0, 1]]]]]]}}}
    p = parse_problem(data)
    assert math.isinf(p.rule.degree)
    assert frames.frame_operator(p.map("F"), p.rule).dense[0, 0] == pytest.approx(3.0)


def test_map_json_round_trip():
    p = parse_problem_file(EXAMPLE)
    again = parse_problem(base(maps={"G": map_json(p.map("G"))}))
    assert again.map("G").allclose(p.map("G"))
    assert isinstance(again.map("G"), FrameMap)


def test_dumps_is_valid_and_compact():
    obj = {"a": [1.5, [2, 3]], "b": {"c": None, "d": "x" * 120}}
    text = dumps(obj)
    assert json.loads(text) == obj
    assert dumps({"a": [1, 2]}) == '{"a": [1, 2]}'


# CLI


def _close(a, b, path="$"):
    if isinstance(a, dict):
        assert isinstance(b, dict) and list(a) == list(b), path
        for k in a:
            _close(a[k], b[k], f"{path}.{k}")
    elif isinstance(a, list):
        assert isinstance(b, list) and len(a) == len(b), path
        for i, (x, y) in enumerate(zip(a, b)):
            _close(x, y, f"{path}[{i}]")
    elif isinstance(a, float) or isinstance(b, float):
        assert not isinstance(a, bool) and not isinstance(b, bool), path
        assert a == pytest.approx(b, abs=1e-9, rel=1e-9), path
    else:
        assert a == b, path


@pytest.mark.parametrize("name,argv,expected", CASES, ids=[c[0] for c in CASES])
def test_cli_golden(name, argv, expected, monkeypatch):
    monkeypatch.delenv("FRAMES_TOL", raising=False)
    code, out, _ = run(argv)
    assert code == expected
    golden = json.loads((GOLDEN / f"{name}.json").read_text())
    _close(json.loads(normalise(out)), golden)


@pytest.mark.parametrize("name,argv,expected", CASES[:8], ids=[c[0] for c in CASES[:8]])
def test_cli_byte_stable(name, argv, expected, monkeypatch):
    monkeypatch.delenv("FRAMES_TOL", raising=False)
    assert run(argv)[1] == run(argv)[1]


def test_spec_examples(monkeypatch):
    monkeypatch.delenv("FRAMES_TOL", raising=False)
    code, out, _ = run(["dual-check", "--file", EXAMPLE, "--frame", "F", "--dual", "G"])
    assert code == 0 and json.loads(out)["residual_norm"] <= 1e-12
    code, out, _ = run(["verify-bounds", "--file", EXAMPLE, "--frame", "F",
                        "--lower", "0.5", "--upper", "4.5"])
    report = json.loads(out)
    assert code == 0 and report["lower_margin"] == pytest.approx(0.1366, abs=1e-4)
    code, out, _ = run(["dual-check", "--file", EXAMPLE, "--dual", "G_scaled2"])
    assert code == 1 and json.loads(out)["residual_norm"] == pytest.approx(1.0)


def test_diagnostics_go_to_stderr():
    code, out, err = run(["dual-check", "--file", EXAMPLE, "--dual", "nope"])
    assert code == 2 and "nope" in err and json.loads(out)["status"] == "error"


def test_unknown_command():
    code, _, err = run(["frobnicate"])
    assert code == 2 and "invalid choice" in err
    with pytest.raises(UnknownCommand):
        cli.execute("frobnicate", None, None)


def test_missing_file(tmp_path):
    code, out, _ = run(["bounds", "--file", str(tmp_path / "absent.json")])
    assert code == 2 and json.loads(out)["error"] == "ParseError"


def test_tolerance_precedence(monkeypatch):
    argv = ["dual-check", "--file", EXAMPLE, "--dual", "G_scaled2"]
    monkeypatch.setenv("FRAMES_TOL", "2.0")
    code, out, _ = run(argv)
    assert code == 0 and json.loads(out)["tol"] == 2.0
    code, out, _ = run(argv + ["--tol", "1e-6"])
    assert code == 1 and json.loads(out)["tol"] == 1e-6
    monkeypatch.setenv("FRAMES_TOL", "lots")
    assert run(argv)[0] == 2
    monkeypatch.setenv("FRAMES_TOL", "-1")
    assert run(argv)[0] == 2


def test_inline_and_file_operators(tmp_path, monkeypatch):
    monkeypatch.delenv("FRAMES_TOL", raising=False)
    op = tmp_path / "op.json"
    op.write_text('{"dense": [[0.5, 0], [0, 0.5]]}')
    code, out, _ = run(["sum-frame", "--file", EXAMPLE, "--op1", '{"dense": [[2, 0], [0, 2]]}',
                        "--op2", f"@{op}"])
    assert code == 0 and json.loads(out)["hypothesis_residual"] == 0
    code, out, _ = run(["sum-frame", "--file", EXAMPLE, "--op1", "[[1", "--op2", "X2"])
    assert code == 2 and json.loads(out)["error"] == "ParseError"
    code, _, _ = run(["sum-dual", "--file", EXAMPLE, "--other", "G", "--op1", "X1",
                      "--alpha", "0.5"])
    assert code == 2


def test_central_sum_dual_command(tmp_path):
    data = {"algebra": {"blocks": [1, 1]}, "rank": 1,
            "measure": {"type": "interval", "a": 0, "b": 1},
            "maps": {
                "F": {"type": "polynomial", "coeffs": [
                    [[[[1]], [[0]]]], [[[[0]], [[1]]]], [[[[1]], [[2]]]]]},
            },
            "elements": {"a1": [[[0.25]], [[3]]], "a2": [[[0.75]], [[-2]]],
                         "bad": {"dense": [[1, 0], [0, 1]]}}}
    path = tmp_path / "p.json"
    path.write_text(json.dumps(data))
    code, out, _ = run(["canonical-dual", "--file", str(path), "--dump"])
    assert code == 0
    data["maps"]["D"] = json.loads(out)["map"]
    path.write_text(json.dumps(data))
    code, out, _ = run(["sum-dual", "--file", str(path), "--dual", "D", "--other", "D",
                        "--a1", "a1", "--a2", "a2"])
    assert code == 0, out
    code, out, _ = run(["sum-dual", "--file", str(path), "--dual", "D", "--other", "D",
                        "--a1", "a1", "--a2", "bad"])
    assert code == 1 and json.loads(out)["error"] == "AffinityViolated"


def test_console_script():
    exe = shutil.which("frames")
    cmd = [exe] if exe else [sys.executable, "-m", "cstarframes.cli"]
    proc = subprocess.run(cmd + ["dual-check", "--file", EXAMPLE, "--dual", "G_scaled2"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 1 and json.loads(proc.stdout)["verdict"] == "not_dual"
