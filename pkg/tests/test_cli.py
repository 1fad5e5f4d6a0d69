import json

from delpezzo.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_zariski_json(capsys):
    code, out, _ = run(
        capsys, "zariski", "s1_c_notflex_12", "7/2", "--json"
    )
    assert code == 0
    data = json.loads(out)
    assert data["p"] == ["3/2", "5/2", "0"]
    assert data["n"] == {"L": "1/2"}


def test_zariski_oracle_agrees(capsys):
    code, out, _ = run(
        capsys, "zariski", "s1_c_notflex_12", "7/2", "--oracle", "--json"
    )
    assert code == 0
    assert json.loads(out)["n"] == {"L": "1/2"}


def test_sweep_json(capsys):
    code, out, _ = run(capsys, "sweep", "s2_cab_ord", "--json")
    assert code == 0
    data = json.loads(out)
    assert [p["from"] for p in data["pieces"]] == ["0", "1", "3"]
    assert data["pieces"][-1]["to"] == "5"


def test_svalue_normalized_and_fixed(capsys):
    code, out, _ = run(capsys, "svalue", "s2_cab_ord", "--json")
    assert code == 0
    assert json.loads(out)["s"] == "16/7"
    code, out, _ = run(
        capsys, "svalue", "s2_cab_ord", "--lambda", "1/2", "--json"
    )
    assert code == 0
    data = json.loads(out)
    assert data["s"] == "8/7"
    assert data["tau"] == "5/2"


def test_swq_point_filter(capsys):
    code, out, _ = run(
        capsys, "swq", "s2_flag_b", "--point", "p1", "--json"
    )
    assert code == 0
    data = json.loads(out)
    assert data["swq"]["p1"]["value"] == "23/21"
    assert list(data["swq"]) == ["p1"]


def test_flagbound_json(capsys):
    code, out, _ = run(capsys, "flagbound", "s1_ce_ord", "--json")
    assert code == 0
    data = json.loads(out)
    assert data["flag_bound"] == {"num": ["4/9", "4/9"], "den": ["0", "1"]}
    assert len(data["az"]) == 3


def test_delta_at_lambda(capsys):
    code, out, _ = run(
        capsys, "delta", "thm1_1", "--lambda", "3/4", "--json"
    )
    assert code == 0
    data = json.loads(out)
    assert data["lower"] == "1"
    assert data["upper"] == "1"
    assert data["exact"] is True


def test_rthreshold(capsys):
    code, out, _ = run(capsys, "rthreshold", "thm2_2", "--json")
    assert code == 0
    assert json.loads(out)["r"] == "21/25"


def test_derive_json(capsys):
    code, out, _ = run(capsys, "derive", "s2_cab_ord", "--json")
    assert code == 0
    data = json.loads(out)
    assert data["matches_config"] is True
    assert data["flag_discrepancy"] == {"c_k": "1", "c_c": "1"}


def test_reproduce_config(capsys):
    code, out, _ = run(capsys, "reproduce", "s1_flag_f")
    assert code == 0
    assert "FAIL" not in out


def test_reproduce_all_passes(capsys):
    code, out, _ = run(capsys, "reproduce", "all")
    assert code == 0
    assert "FAIL" not in out
    assert "NOTE" in out


def test_unknown_config_exits_2(capsys):
    code, _, err = run(capsys, "svalue", "nosuch")
    assert code == 2
    assert "unknown" in err


def test_bad_rational_exits_2(capsys):
    code, _, _ = run(capsys, "svalue", "s1_flag_f", "--lambda", "x/y")
    assert code == 2


def test_lambda_out_of_range_exits_2(capsys):
    code, _, _ = run(capsys, "svalue", "s1_flag_f", "--lambda", "3/2")
    assert code == 2


def test_computation_error_exits_3(capsys):
    code, _, err = run(capsys, "zariski", "s1_c_notflex_12", "9")
    assert code == 3
    assert "computation failed" in err


def test_flagless_config_exits_2(capsys):
    code, _, _ = run(capsys, "sweep", "s1_base")
    assert code == 2
