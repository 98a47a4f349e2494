import csv
import io
import json
from fractions import Fraction

import pytest

from uqzrp.cli import main

BASE = ["--n", "2", "--L", "2", "--m", "1,1", "--q", "1/3"]


def run(capsys, *argv):
    code = main(list(argv))
    return code, capsys.readouterr()


def test_steady_transfer(capsys):
    code, out = run(capsys, "steady", *BASE, "--mus", "1/4,1/5", "--lambda", "1/2")
    assert code == 0
    data = json.loads(out.out)
    probs = [Fraction(e["exact"]) for e in data["probabilities"]]
    assert len(probs) == 4 and sum(probs) == 1
    header = data["header"]
    assert header["tool"] == "uqzrp" and header["mode"] == "exact" and "version" in header
    assert header["params"]["mus"] == ["1/4", "1/5"]


def test_steady_is_deterministic(capsys):
    argv = ["steady", *BASE, "--mus", "1/4,1/5", "--lambda", "1/2"]
    _, a = run(capsys, *argv)
    _, b = run(capsys, *argv)
    assert a.out == b.out


def test_steady_empty_sector(capsys):
    code, out = run(capsys, "steady", "--L", "3", "--m", "0,0", "--q", "1/3", "--mu", "1/5", "--lambda", "1/2")
    assert code == 0
    assert json.loads(out.out)["probabilities"][0]["exact"] == "1"


def test_steady_generator_float(capsys):
    code, out = run(capsys, "steady", *BASE, "--dynamics", "generator", "--mu", "0.2", "--mode", "float")
    assert code == 0
    entries = json.loads(out.out)["probabilities"]
    assert abs(sum(e["float"] for e in entries) - 1) < 1e-12
    assert "exact" not in entries[0]


def test_steady_regime_violation(capsys):
    code, out = run(capsys, "steady", *BASE, "--mus", "1/4,3/5", "--lambda", "1/2")
    assert code == 2
    assert json.loads(out.out)["error"] == "regime"


def test_steady_cap(capsys):
    code, out = run(capsys, "steady", "--L", "6", "--m", "4,4", "--q", "1/3", "--mu", "1/5", "--lambda", "1/2", "--cap", "100")
    assert code == 3
    assert json.loads(out.out)["error"] == "sector_too_large"


def test_verify_ybe_single_weight(capsys):
    code, out = run(capsys, "verify", "ybe", "--weight", "1,1")
    assert code == 0
    suite = json.loads(out.out)["suites"][0]
    assert suite["suite"] == "ybe" and suite["failed"] == 0 and suite["checks"] > 0


def test_verify_requires_suite(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["verify"])
    assert exc.value.code == 2


def test_mpa_crosscheck(capsys):
    code, out = run(capsys, "mpa", *BASE, "--mus", "1/4,1/5", "--crosscheck")
    assert code == 0
    data = json.loads(out.out)
    assert data["proportional"] is True and Fraction(data["ratio_to_direct"]) > 0
    assert len(data["entries"]) == 4


def test_mpa_tazrp(capsys):
    code, out = run(capsys, "mpa", "--L", "2", "--m", "1,1", "--formula", "tazrp")
    assert code == 0
    values = [e["value"] for e in json.loads(out.out)["entries"]]
    assert values == ["2", "1", "1", "2"]


def test_mpa_missing_mus(capsys):
    code, _ = run(capsys, "mpa", *BASE)
    assert code == 2


def test_mpa_divergent_sector(capsys):
    code, out = run(capsys, "mpa", "--L", "2", "--m", "2,0", "--q", "1/3", "--mus", "1/4,1/5")
    assert code == 2
    assert json.loads(out.out)["error"] == "invalid_input"


def test_simulate_continuous(capsys, tmp_path):
    traj = tmp_path / "t.csv"
    code, out = run(capsys, "simulate", *BASE, "--mu", "1/5", "--events", "20000", "--seed", "3", "--trajectory", str(traj))
    assert code == 0
    data = json.loads(out.out)
    assert data["seed"] == 3 and data["rng"] == "numpy.random.PCG64"
    assert data["tv_distance"] < 0.05
    assert traj.read_text().startswith("event,time,config")


def test_simulate_discrete_and_exact_cap(capsys):
    code, out = run(capsys, "simulate", *BASE, "--mu", "1/5", "--dynamics", "discrete", "--lambda", "1/2", "--events", "5000", "--exact-cap", "1")
    assert code == 0
    assert json.loads(out.out)["tv_distance"] is None
    assert "warning" in out.err


def test_simulate_discrete_needs_lambda(capsys):
    code, _ = run(capsys, "simulate", *BASE, "--mu", "1/5", "--dynamics", "discrete")
    assert code == 2


def test_conjecture_csv(capsys):
    code, out = run(capsys, "conjecture", "--Ls", "3", "--ms", "2,1")
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out.out)))
    assert rows
    for row in rows:
        if row["r"] == "0":
            assert (row["lhs"], row["rhs"], row["equal"]) == ("1", "1", "true")
        if row["r"] == "1":
            assert row["equal"] == "true"


def test_decimal_parameters_are_exact(capsys):
    code, out = run(capsys, "steady", *BASE, "--mus", "0.25,0.2", "--lambda", "0.5")
    _, ref = run(capsys, "steady", *BASE, "--mus", "1/4,1/5", "--lambda", "1/2")
    assert code == 0
    assert json.loads(out.out)["probabilities"] == json.loads(ref.out)["probabilities"]
