import json

import numpy as np
import pytest

from shufflecopula.cli import main
from shufflecopula.io import read_descriptor
from shufflecopula.shuffles import selfsimilar


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_norm_pi_inline(capsys):
    code, out, _ = run(capsys, "norm", '{"type":"param","name":"Pi"}')
    assert code == 0
    assert out.startswith("norm_sq 0.666667")


def test_dist_selfsimilar(capsys):
    code, out, _ = run(capsys, "dist", "selfsimilar5", "selfsimilar4")
    assert code == 0 and out.strip() == "dist_sq 0.0078125 exact 1/128"


def test_omega_star_budget_zero(capsys):
    _, a, _ = run(capsys, "omega", "fgm05")
    _, b, _ = run(capsys, "omega-star", "fgm05", "--budget", "0", "--depth", "0")
    assert float(a.split()[1]) == float(b.split()[1]) == float(b.split()[3])


def test_usage_errors_exit_2(capsys):
    for argv in (["frobnicate"], ["norm"], ["selfsimilar"], ["norm", "Pi", "--grid", "1"]):
        with pytest.raises(SystemExit) as err:
            main(argv)
        assert err.value.code == 2
    capsys.readouterr()


def test_validation_errors_exit_1(capsys, tmp_path):
    bad = '{"type":"grid","n":2,"mass":[[0.5,0.5],[0,0]]}'
    code, out, _ = run(capsys, "validate", bad)
    assert code == 1 and '"ok": false' in out
    code, _, err = run(capsys, "norm", bad)
    assert code == 1 and "validation failed" in err
    code, _, err = run(capsys, "norm", "no-such-copula")
    assert code == 1 and "invalid descriptor" in err
    code, _, err = run(capsys, "selfsimilar", "--level", "20")
    assert code == 1


def test_selfsimilar_and_support(capsys, tmp_path):
    out = tmp_path / "s.json"
    assert run(capsys, "selfsimilar", "--level", "3", "-o", str(out))[0] == 0
    assert read_descriptor(out) == selfsimilar(3)
    poly = tmp_path / "p.csv"
    assert run(capsys, "support", str(out), "-o", str(poly))[0] == 0
    assert len(poly.read_text().splitlines()) == 1 + len(selfsimilar(3).segments())


def test_star_and_transpose(capsys, tmp_path):
    code, out, err = run(capsys, "star", "halfswap", "quartercycle")
    assert code == 0 and "exact" in err
    assert json.loads(out)["type"] == "shuffle"
    code, out, _ = run(capsys, "transpose", "doubling")
    assert json.loads(out)["transposed"] is True


def test_shuffle_of(capsys):
    code, out, err = run(capsys, "shuffle-of", "fgm1", "--by", "salpha1/2", "--grid", "16")
    assert code == 0 and json.loads(out)["n"] == 16
    code, _, err = run(capsys, "shuffle-of", "fgm1", "--by", "fgm05")
    assert code == 1


def test_sorting_shuffle(capsys):
    code, out, _ = run(capsys, "sorting-shuffle", "--set", "0.5,1")
    pieces = json.loads(out)["pieces"]
    assert [p["target"] for p in pieces] == [0.5, 0]
    assert run(capsys, "sorting-shuffle", "--set", "0.5")[0] == 1


def test_diagonalize_outputs(capsys, tmp_path):
    trace, shuf = tmp_path / "t.csv", tmp_path / "b.json"
    code, out, _ = run(capsys, "diagonalize", "doubling", "--depth", "3", "-o", str(trace), "--shuffle-out", str(shuf))
    assert code == 0 and "exact" in out
    assert trace.read_text().splitlines() == ["step,norm_sq", "0,0.875", "1,0.9375", "2,0.96875", "3,0.984375"]
    assert shuf.exists()
    assert run(capsys, "diagonalize", "fgm1", "--depth", "6", "--grid", "32")[0] == 1


def test_approx(capsys, tmp_path):
    rep = tmp_path / "r.json"
    code, _, err = run(capsys, "approx-shuffles", "selfsimilar6", "--bins", "8", "--report", str(rep))
    assert code == 0 and json.loads(rep.read_text())["bins"] == 8
    assert run(capsys, "approx-shuffles", "fgm05", "--bins", "8")[0] == 1


def test_empirical(capsys, tmp_path):
    rng = np.random.default_rng(0)
    x = rng.random(500)
    samples = tmp_path / "s.csv"
    samples.write_text("x,y\n" + "\n".join(f"{a},{a}" for a in x) + "\n")
    out, rep = tmp_path / "g.json", tmp_path / "r.json"
    code, _, err = run(capsys, "empirical", str(samples), "--bins", "8", "-o", str(out), "--report", str(rep))
    assert code == 0
    assert json.loads(rep.read_text())["label"] == "exploratory"
    assert read_descriptor(out).n == 8
    samples.write_text("1,2\nfoo\n")
    code, _, err = run(capsys, "empirical", str(samples), "--bins", "2")
    assert code == 1 and "line 2" in err


def test_byte_identical_outputs(capsys, tmp_path):
    outs = []
    for i in range(2):
        rep, trace = tmp_path / f"r{i}.json", tmp_path / f"t{i}.csv"
        run(capsys, "omega-star", "fgm1", "--budget", "40", "--seed", "3", "--grid", "32",
            "-o", str(rep), "--trace", str(trace))
        outs.append((rep.read_bytes(), trace.read_bytes()))
    assert outs[0] == outs[1]


def test_norm_report(capsys, tmp_path):
    rep = tmp_path / "n.json"
    run(capsys, "norm", "doubling", "-o", str(rep))
    assert json.loads(rep.read_text())["norm_sq"] == 0.875
