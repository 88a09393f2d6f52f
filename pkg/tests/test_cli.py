import json
import pathlib
import shlex
import subprocess
import sys

import pytest

from zonal.cli import main

README = pathlib.Path(__file__).resolve().parents[1] / "README.md"


def run(*args):
    return subprocess.run([sys.executable, "-m", "zonal", *args], capture_output=True, text=True)


def call(capsys, *args):
    code = main(list(args))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_coeffs_n2(capsys):
    code, out, _ = call(capsys, "coeffs", "--n", "2", "--l", "2")
    assert code == 0
    table = {tuple(e["k"]): (int(e["num"]), int(e["den"])) for e in json.loads(out)["coefficients"]}
    assert table == {(2, 0): (3, 8), (1, 1): (1, 4), (0, 2): (3, 8)}


def test_coeffs_n3(capsys):
    _, out, _ = call(capsys, "coeffs", "--n", "3", "--l", "1")
    rows = json.loads(out)["coefficients"]
    assert rows[0] == {"k": [1, 0, 0], "num": "1", "den": "3"}
    assert len(rows) == 3


def test_usage_errors_exit_2():
    for args in (["coeffs", "--n", "0", "--l", "1"], ["eval", "--n", "3", "--l", "1", "--x", "1,1"],
                 ["mc", "--n", "4", "-p", "1"], ["frobnicate"], ["verify", "--only", "99"],
                 ["mc", "--n", "3", "--l", "1", "--samples", "0"],
                 ["eval", "--n", "3", "--l", "1", "--x", "1,1,1", "--theta", "0,0"]):
        res = run(*args)
        assert res.returncode == 2, args
        assert res.stdout == ""
        assert "usage" in res.stderr or "error" in res.stderr


def test_numerical_failure_exit_1():
    res = run("genfun", "--x", "1,1,1", "--t1", "0.9j", "--t2", "0.9j")
    assert res.returncode == 1
    assert "numerical failure" in res.stderr
    res = run("genfun", "--n", "2", "--x", "4,1", "--t1", "0.5")
    assert res.returncode == 1


def test_domain_error_exit_2():
    res = run("genfun", "--x", "2,1,1", "--t1", "0.1", "--t2", "0.1")
    assert res.returncode == 2


def test_mc_trivial(capsys):
    _, out, _ = call(capsys, "mc", "--n", "3", "-p", "1", "-q", "0", "--x", "1,1,1", "--samples", "1000", "--seed", "7")
    d = json.loads(out)
    assert (d["mean_re"], d["mean_im"], d["stderr"]) == (1.0, 0.0, 0.0)


def test_genfun_identity(capsys):
    _, out, _ = call(capsys, "genfun", "--x", "1,1,1", "--t1", "0.5", "--t2", "0.5", "--tol", "1e-10")
    assert abs(json.loads(out)["value_re"] - 4.0) <= 1e-9


def test_series_table(capsys):
    _, out, _ = call(capsys, "series", "--pmax", "1", "--qmax", "1")
    rows = {(r["p"], r["q"]): r["polynomial"] for r in json.loads(out)}
    assert rows[(1, 0)] == {"vars": ["z1", "z2"], "terms": [{"exp": [1, 0], "num": "1", "den": "3"}]}


def test_eigencheck_outputs(capsys):
    _, out, _ = call(capsys, "eigencheck", "--n", "3", "-p", "2", "-q", "1")
    assert json.loads(out)["eigenvalue"] == {"num": "13", "den": "1"}
    _, out, _ = call(capsys, "eigencheck", "--n", "2", "--l", "1", "--convention", "literal")
    assert "residual" in json.loads(out)


def test_theta_point_is_unimodular(capsys):
    _, out, _ = call(capsys, "eval", "--n", "3", "-p", "0", "-q", "0", "--theta", "0.4,1.1")
    d = json.loads(out)
    assert d["value_re"] == 1.0 and len(d["point"]) == 3


def test_formats(capsys):
    _, out, _ = call(capsys, "coeffs", "--n", "2", "--l", "1", "--format", "csv")
    assert out.splitlines()[0] == "k,num,den"
    _, out, _ = call(capsys, "genfun", "--x", "1,1,1", "--t1", "0.5", "--t2", "0.5", "--format", "pretty")
    assert out.startswith("value_re=4")


def test_pretty_uses_17_digits(capsys):
    _, out, _ = call(capsys, "eval", "--n", "2", "--l", "3", "--x", "0.3,0.7", "--format", "pretty")
    v = float(out.split("value_re=")[1].split()[0])
    _, js, _ = call(capsys, "eval", "--n", "2", "--l", "3", "--x", "0.3,0.7")
    assert v == json.loads(js)["value_re"]


def test_byte_identical_output():
    args = ["mc", "--n", "3", "-p", "1", "-q", "1", "--theta", "0.3,0.9", "--samples", "70000", "--seed", "5"]
    a, b = run(*args), run(*args, "--threads", "3")
    assert a.returncode == 0
    assert a.stdout == b.stdout == run(*args).stdout


def readme_commands():
    lines = README.read_text().splitlines()
    return [shlex.split(l[len("$ zonal "):]) for l in lines if l.startswith("$ zonal ")]


def test_readme_has_examples():
    assert len(readme_commands()) >= 8


@pytest.mark.parametrize("argv", readme_commands(), ids=lambda a: " ".join(a))
def test_readme_examples_run(argv):
    res = run(*argv)
    assert res.returncode == 0, res.stderr
    assert res.stdout.strip()
