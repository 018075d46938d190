import json
import random
import subprocess
import sys

import pytest

from gvlat.cli import main


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out = capsys.readouterr()
    return code, out.out, out.err


@pytest.mark.parametrize(
    "name, error",
    [("odd", "OddLattice"), ("degenerate", "DegenerateForm"), ("ff_not_dual", "FFNotInDual")],
)
def test_data_errors_exit_3(capsys, data_dir, name, error):
    code, out, err = run(capsys, "validate", data_dir / f"{name}.json")
    assert code == 3
    assert json.loads(out)["error"] == error
    assert error in err


def test_missing_file_and_bad_json(capsys, tmp_path):
    code, out, _ = run(capsys, "validate", tmp_path / "nope.json")
    assert code == 3 and json.loads(out)["error"] == "MalformedInput"
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    code, out, _ = run(capsys, "decompose", bad)
    assert code == 3 and json.loads(out)["error"] == "MalformedInput"


def test_usage_errors_exit_2(capsys, data_dir):
    assert run(capsys, "bogus")[0] == 2
    assert run(capsys)[0] == 2
    assert run(capsys, "characters", data_dir / "a1.json", "--order", "x")[0] == 2
    assert run(capsys, "fuse", data_dir / "a1.json", "1/2")[0] == 2


def test_bad_label_exit_3(capsys, data_dir):
    for bad in ("abc", "1/0", "[0.5]", "[true]", "1,2"):
        code, out, _ = run(capsys, "dual", data_dir / "a1.json", bad)
        assert code == 3 and json.loads(out)["error"] == "MalformedInput", bad
    # exact decimal strings are rationals
    code, out, _ = run(capsys, "dual", data_dir / "a1.json", "0.5")
    assert code == 0 and json.loads(out)["result"]["dual"] == ["1/2"]
    code, out, _ = run(capsys, "dual", data_dir / "a1.json", "1/3")
    assert code == 3 and json.loads(out)["error"] == "NotInDual"


def test_structure_a1(capsys, data_dir):
    code, out, _ = run(capsys, "structure", data_dir / "a1.json")
    assert code == 0
    objs = {tuple(o["label"]): o for o in json.loads(out)["result"]["objects"]}
    assert objs[("1/2",)]["q"] == {"exp": "1/2"}
    assert objs[("1/2",)]["theta"] == {"exp": "1/2"}


def test_fuse_and_dual(capsys, data_dir):
    code, out, _ = run(capsys, "fuse", data_dir / "a1.json", "1/2", "1/2")
    assert code == 0 and json.loads(out)["result"]["fusion"] == ["0/1"]
    code, out, _ = run(capsys, "dual", data_dir / "halfrank.json", "[\"0\", \"0\"]")
    assert code == 0 and json.loads(out)["result"]["dual"] == ["2/1", "0/1"]


@pytest.mark.parametrize(
    "argv",
    [
        ["axioms", "a2_ff.json"],
        ["axioms", "halfrank.json", "--samples", "200"],
        ["characters", "a2.json", "--order", "4"],
        ["tmatrix", "a1.json", "--convention", "both"],
        ["smatrix", "a2.json"],
        ["verify-s", "a1.json", "--t", "1.3"],
        ["verlinde", "order8.json"],
        ["verlinde", "a1.json", "1/2", "1/2", "0"],
        ["fock-check", "a1.json", "--level", "4"],
        ["extend", "--base", "two_a1.json", "--target", "a1.json"],
        ["decompose", "halfrank.json"],
    ],
)
def test_check_commands_pass(capsys, data_dir, argv):
    argv = [str(data_dir / a) if a.endswith(".json") else a for a in argv]
    code, out, _ = run(capsys, *argv)
    rep = json.loads(out)
    assert code == 0 and rep["pass"] is True


def test_large_group_is_sampled_unless_forced(capsys, tmp_path):
    path = tmp_path / "g36.json"
    path.write_text(json.dumps({"dim": 1, "gram": [["4"]], "lattice_basis": [["3"]], "ff": ["0"]}))
    code, out, _ = run(capsys, "axioms", path, "--samples", "50")
    rep = json.loads(out)["result"]
    assert code == 0 and rep["mode"] == "sampled"
    code, out, _ = run(capsys, "structure", path, "--samples", "6")
    rep = json.loads(out)["result"]
    assert code == 0 and rep["sampled"] and len(rep["labels"]) == 6


def test_infinite_group_commands(capsys, data_dir):
    code, out, _ = run(capsys, "smatrix", data_dir / "halfrank.json")
    assert code == 3 and json.loads(out)["error"] == "InfiniteDiscriminant"


def test_text_output(capsys, data_dir):
    code, out, _ = run(capsys, "fuse", data_dir / "a1.json", "1/2", "0", "--output", "text")
    assert code == 0 and out.strip() and not out.lstrip().startswith("{")


def test_output_is_byte_identical(capsys, data_dir):
    argv = ["axioms", data_dir / "halfrank.json", "--samples", "50", "--seed", "7"]
    first = run(capsys, *argv)[1]
    second = run(capsys, *argv)[1]
    assert first == second and '"seed": 7' in first


def test_console_script_subprocess(data_dir):
    cmd = [sys.executable, "-m", "gvlat.cli", "tmatrix", str(data_dir / "a2_ff.json")]
    a = subprocess.run(cmd, capture_output=True, check=False)
    b = subprocess.run(cmd, capture_output=True, check=False)
    assert a.returncode == 0 and a.stdout == b.stdout


def _random_input(rng: random.Random):
    def q():
        kind = rng.random()
        if kind < 0.05:
            return rng.choice([1.5, True, None, "x", "1/0", [], {}])
        return f"{rng.randint(-6, 6)}/{rng.randint(1, 4)}"

    n = rng.randint(0, 3)
    gram = [[None] * n for _ in range(n)]
    for i in range(n):
        for j in range(i, n):
            gram[i][j] = gram[j][i] = q() if rng.random() < 0.3 else str(rng.randint(-3, 3) * (2 if i == j else 1))
    rank = rng.randint(0, n)
    basis = [[q() if rng.random() < 0.2 else str(rng.randint(-2, 2)) for _ in range(n)] for _ in range(rank)]
    ff = [q() for _ in range(n)]
    obj = {"dim": n, "gram": gram, "lattice_basis": basis, "ff": ff}
    if rng.random() < 0.1:
        obj.pop(rng.choice(list(obj)))
    if rng.random() < 0.05:
        obj["dim"] = rng.choice([-1, "2", 2.0, n + 1])
    return obj


def test_fuzz_random_inputs(capsys, tmp_path):
    rng = random.Random(1234)
    path = tmp_path / "fuzz.json"
    seen = set()
    for i in range(1000):
        path.write_text(json.dumps(_random_input(rng)))
        cmd = ["validate", "decompose", "structure"][i % 3]
        code, out, _ = run(capsys, cmd, path, "--samples", "5")
        assert code in (0, 1, 2, 3)
        rep = json.loads(out)
        if code == 3:
            seen.add(rep["error"])
    assert {"MalformedInput", "OddLattice", "DegenerateForm"} <= seen
