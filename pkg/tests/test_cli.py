import json
from pathlib import Path

import pytest

from pureres.cli import Config, main

FIX = Path(__file__).parent / "fixtures"


def run(capsys, *argv):
    code = main(list(argv))
    return code, capsys.readouterr().out


def test_quiver_tits_prints_value(capsys):
    assert run(capsys, "quiver", "tits", "--w", "35", "--a", "1", "--b", "35") == (0, "1\n")
    code, out = run(capsys, "quiver", "schur", "--w", "3", "--a", "1", "--b", "5")
    assert out.strip() == "false"
    code, out = run(capsys, "quiver", "verdict", "--w", "4", "--a", "1", "--b", "4", "--format", "json")
    obj = json.loads(out)
    assert obj["verdict"] == "GenericSimple" and obj["config"]["prime"] == 32003


def test_usage_errors_exit_2(capsys):
    with pytest.raises(SystemExit) as e:
        main(["koszul", "--n", "2"])
    assert e.value.code == 2
    with pytest.raises(SystemExit) as e:
        main(["koszul", "--n", "2", "--d", "1", "--prime", "9"])
    assert e.value.code == 2
    with pytest.raises(SystemExit) as e:
        main(["cohomology", "--in", "/nonexistent.json"])
    assert e.value.code == 2


def test_computation_errors_exit_1(capsys):
    code, out = run(capsys, "quiver", "schur", "--w", "2", "--a", "1", "--b", "1")
    assert code == 1 and json.loads(out)["error"] == "PreconditionViolated"
    code, out = run(capsys, "anyhd", "--n", "4", "--l", "2", "--schedule", "1")
    assert code == 1 and json.loads(out)["error"] == "ScheduleTooTight"


def test_json_output_is_byte_identical(capsys):
    args = ["koszul", "--n", "2", "--d", "1", "--seed", "4", "--format", "json"]
    c1, o1 = run(capsys, *args)
    c2, o2 = run(capsys, *args)
    assert c1 == c2 == 0 and o1 == o2
    obj = json.loads(o1)
    assert obj["betti"] == {"-3": 1, "-2": 3, "-1": 3, "0": 1}
    assert obj["report"]["status"] == "Pass"


def test_environment_overrides(capsys, monkeypatch):
    monkeypatch.setenv("PURERES_PRIME", "65521")
    monkeypatch.setenv("PURERES_SEED", "7")
    code, out = run(capsys, "quiver", "tits", "--w", "3", "--a", "1", "--b", "1", "--format", "json")
    cfg = json.loads(out)["config"]
    assert cfg["prime"] == 65521 and cfg["seed"] == 7
    # flags win over the environment
    code, out = run(capsys, "quiver", "tits", "--w", "3", "--a", "1", "--b", "1", "--seed", "2",
                    "--format", "json")
    assert json.loads(out)["config"]["seed"] == 2
    monkeypatch.setenv("PURERES_SEED", "x")
    with pytest.raises(SystemExit) as e:
        main(["quiver", "tits", "--w", "3", "--a", "1", "--b", "1"])
    assert e.value.code == 2


def test_config_validation():
    assert Config().prime == 32003
    with pytest.raises(ValueError):
        Config(prime=2)
    Config(prime=0)


def test_cohomology_and_hom_on_fixtures(capsys):
    code, out = run(capsys, "cohomology", "--in", str(FIX / "line_p3_O(-1).json"),
                    "--tmin", "0", "--tmax", "2", "--format", "json")
    assert code == 0
    code, out = run(capsys, "hom", "--e", str(FIX / "steiner_p3_1_4.json"),
                    "--f", str(FIX / "steiner_p3_1_4.json"))
    assert code == 0 and out.splitlines() == ["Ext^0 = 1", "Ext^1 = 0", "Ext^2 = 0", "Ext^3 = 0"]
    code, out = run(capsys, "quiver", "homext", "--r1", str(FIX / "rep_w4_1_4.json"),
                    "--r2", str(FIX / "rep_w4_2_5.json"), "--format", "json")
    obj = json.loads(out)
    # Euler form a1 a2 + b1 b2 - w a1 b2
    assert code == 0 and obj["hom"] - obj["ext1"] == 1 * 2 + 4 * 5 - 4 * 1 * 5


def test_fixtures_and_explore(capsys, tmp_path):
    code, out = run(capsys, "fixtures", "--out", str(tmp_path))
    assert code == 0 and "koszul_n2_d1.json" in out.split()
    assert (tmp_path / "rep_w4_2_5.json").exists()
    code, out = run(capsys, "explore", "--degrees", "1,2,4")
    assert code == 0 and "integral" in out
    code, out = run(capsys, "verify", "koszul", "--n", "2", "--d", "1")
    assert code == 0 and "koszul" in out
