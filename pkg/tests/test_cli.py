import json

from scrollflex import cli, formulas
from scrollflex.chern import GradedClass
from scrollflex.cli import RunConfig, main
from scrollflex.scroll import BASE_PRESETS


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_rank_command(capsys):
    code, out, _ = run(capsys, "rank", "--n", "3", "--m", "2", "--k", "2")
    assert code == 0
    assert "maximal generic jet rank: 9" in out
    assert "order 2: 5 rows" in out


def test_rank_structured(capsys):
    code, out, _ = run(capsys, "rank", "--n", "4", "--m", "3", "--k", "2",
                       "--format", "structured")
    assert code == 0
    payload = json.loads(out)
    assert payload["result"]["rank"] == 14
    # config round-trips through its payload
    config = RunConfig.from_payload(payload["config"])
    assert config == RunConfig(command="rank", n=4, m=3, k=2,
                               format="structured")


def test_class_command(capsys):
    code, out, _ = run(capsys, "class", "--n", "3", "--m", "2", "--k", "2",
                       "--N", "8")
    assert code == 0
    assert "3*L - 5*C1 + 3*V1" in out
    assert "in range" in out


def test_class_out_of_range_warns_but_reports(capsys):
    code, out, _ = run(capsys, "class", "--n", "3", "--m", "2", "--k", "2",
                       "--N", "11")
    assert code == 0
    assert "not asserted" in out


def test_class_structured_round_trips(capsys):
    code, out, _ = run(capsys, "class", "--n", "4", "--m", "3", "--k", "2",
                       "--N", "15", "--format", "structured")
    assert code == 0
    payload = json.loads(out)
    cls = GradedClass.from_payload(payload["result"]["class"])
    assert cls.to_payload() == payload["result"]["class"]
    assert str(cls).startswith("56*L^3")


def test_degree_with_preset(capsys):
    code, out, _ = run(capsys, "degree", "--n", "3", "--m", "2", "--k", "2",
                       "--N", "10", "--base", "abelian-surface")
    assert code == 0
    assert "19*d + 27*g2" in out


def test_degree_with_data_file(tmp_path, capsys):
    data = BASE_PRESETS["p2"].numerical(v=4, y=4)
    path = tmp_path / "veronese.json"
    path.write_text(json.dumps(data.to_payload()), encoding="utf-8")
    code, out, _ = run(capsys, "degree", "--n", "3", "--m", "2", "--k", "2",
                       "--N", "10", "--data", str(path))
    assert code == 0
    assert "degree: 6" in out


def test_degree_base_and_data_conflict(tmp_path, capsys):
    path = tmp_path / "x.json"
    path.write_text("{}", encoding="utf-8")
    code, _, err = run(capsys, "degree", "--n", "3", "--m", "2", "--k", "2",
                       "--N", "10", "--base", "p2", "--data", str(path))
    assert code == 1
    assert "conflict" in err


def test_data_dir_environment_variable(tmp_path, capsys, monkeypatch):
    data = BASE_PRESETS["p2"].numerical(v=4, y=4)
    (tmp_path / "nested.json").write_text(json.dumps(data.to_payload()),
                                          encoding="utf-8")
    monkeypatch.setenv(cli.DATA_DIR_ENV, str(tmp_path))
    code, out, _ = run(capsys, "degree", "--n", "3", "--m", "2", "--k", "2",
                       "--N", "10", "--data", "nested.json")
    assert code == 0
    assert "degree: 6" in out


def test_scan_command_structured(capsys):
    code, out, _ = run(capsys, "scan", "P2_N9", "--format", "structured")
    assert code == 0
    payload = json.loads(out)["result"]
    assert payload["verdict"] == "empty after geometric exclusions"
    assert payload["survivors"][0]["point"] == {"v": 4, "d": 10}


def test_scan_missing_data_message(capsys):
    code, out, _ = run(capsys, "scan", "Q3", "--l", "3")
    assert code == 0
    assert "empty" in out


def test_jet_command(tmp_path, capsys):
    spec_payload = {
        "variables": ["u1", "t"],
        "coordinates": ["1", "u1", "t", "t*u1", "t*u1^2"],
        "order": 2,
        "trials": 4,
        "seed": 11,
    }
    path = tmp_path / "probe.json"
    path.write_text(json.dumps(spec_payload), encoding="utf-8")
    code, out, _ = run(capsys, "jet", str(path), "--minors", "5")
    assert code == 0
    assert "generic jet rank (order 2): 5" in out
    assert "common content" in out and "t" in out


def test_jet_seed_override(tmp_path, capsys):
    spec_payload = {
        "variables": ["u1", "t"],
        "coordinates": ["1", "u1", "t", "t*u1"],
        "order": 2,
    }
    path = tmp_path / "probe.json"
    path.write_text(json.dumps(spec_payload), encoding="utf-8")
    code, out, _ = run(capsys, "jet", str(path), "--seed", "5", "--trials", "3",
                       "--format", "structured")
    assert code == 0
    payload = json.loads(out)["result"]
    assert payload["spec"]["seed"] == 5
    assert len(payload["per_trial"]) == 3


def test_jet_missing_file_errors(capsys):
    code, _, err = run(capsys, "jet", "no-such-file.json")
    assert code == 1
    assert "error" in err


def test_verify_filter_passes(capsys):
    code, out, _ = run(capsys, "verify", "--filter", "numeric-secant")
    assert code == 0
    assert "PASS" in out and "FAIL" not in out


def test_verify_fault_injection(capsys, monkeypatch):
    # corrupt one transcribed coefficient: the matching rows must fail by name
    good = formulas.threefold_surface_class

    def corrupted(part, ring=None):
        cls = good(part, ring)
        return cls + cls.ring.variable("L") ** part

    monkeypatch.setattr(formulas, "threefold_surface_class", corrupted)
    code, out, _ = run(capsys, "verify", "--filter", "class-threefold-surface")
    assert code == 1
    assert "FAIL  class-threefold-surface-l1" in out


def test_run_config_rejects_unknown_round_trip():
    config = RunConfig(command="scan", family="P3", ell=2)
    assert RunConfig.from_payload(config.to_payload()) == config


def test_rank_over_a_curve_base(capsys):
    code, out, _ = run(capsys, "rank", "--n", "3", "--m", "1", "--k", "2")
    assert code == 0
    assert "maximal generic jet rank: 7" in out
