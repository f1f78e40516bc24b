from __future__ import annotations

import json
import subprocess
import sys

import pytest

from qrank.cli import main
from qrank.codes import code_to_json
from qrank.invariants import weight_distribution_bruteforce


@pytest.fixture(scope="module")
def files(tmp_path_factory, ex34, gab):
    d = tmp_path_factory.mktemp("cli")
    ex = d / "ex34.json"
    ex.write_text(json.dumps(code_to_json(ex34)))
    g = d / "gab.json"
    g.write_text(json.dumps(code_to_json(gab)))
    empty = d / "empty.json"
    empty.write_text("")
    return {"ex34": str(ex), "gab": str(g), "empty": str(empty), "dir": d}


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_weights_matches_bruteforce(capsys, files, ex34):
    code, out, err = run(capsys, "weights", files["ex34"])
    assert code == 0
    report = json.loads(out)
    assert tuple(report["result"]["A"]) == weight_distribution_bruteforce(ex34).A
    assert "wall-time" in err and "wall" not in out


def test_output_is_deterministic(capsys, files):
    first = run(capsys, "code", "check-aa", files["ex34"], "--scope", "sample=20", "--seed", "4")
    second = run(capsys, "code", "check-aa", files["ex34"], "--scope", "sample=20", "--seed", "4")
    assert first[0] == second[0] == 0
    assert first[1] == second[1]


def test_json_file_matches_stdout(capsys, files):
    path = files["dir"] / "out.json"
    code, out, _ = run(capsys, "gen-weights", files["gab"], "--json", str(path))
    assert code == 0
    assert path.read_text() == out
    assert json.loads(out)["result"]["d"] == [3, 4]


@pytest.mark.parametrize("argv,expected", [
    (["frobnicate"], 2),
    (["code", "info"], 2),
    (["code", "check-aa", "{empty}"], 3),
    (["code", "check-aa", "{ex34}", "--scope", "dims=oops"], 3),
    (["code", "shorten", "{ex34}", "--z", "[[1, 0]]"], 3),
    (["code", "check-aa", "{ex34}", "--budget", "3"], 4),
    (["geometry", "build", "{ex34}"], 5),
    (["construct", "semifield-search", "--q", "2", "--m", "2"], 5),
    (["code", "check-aa", "{ex34}"], 0),
])
def test_exit_codes(capsys, files, argv, expected):
    argv = [a.format(**files) for a in argv]
    code, _, _ = run(capsys, *argv)
    assert code == expected


def test_console_script(files):
    proc = subprocess.run([sys.executable, "-m", "qrank", "circuits", files["ex34"], "--dual"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0
    assert len(json.loads(proc.stdout)["result"]["circuits"]) == 5
