import json

import pytest

from toruslab.cli import (EXIT_ASSERTION, EXIT_BUDGET, EXIT_OK, EXIT_SCHEMA,
                          EXIT_UNKNOWN, EXPERIMENTS, SchemaError, _ns,
                          build_parser, main, resolve_params)


def test_ns_parser():
    assert _ns("4,8,16") == [4, 8, 16]
    assert _ns([4, 8]) == [4, 8]
    assert _ns("4,,8") == [4, 8]


def test_registry_complete():
    assert set(EXPERIMENTS) == {
        "strichartz", "shell-contrast", "wave-mixed", "decouple",
        "trilinear-alpha", "slab-sharpness", "mixed-probe", "dio-sweep",
        "picard-inflation", "zakharov-run"}
    for exp in EXPERIMENTS.values():
        assert exp.summary
        for name, (conv, default, help_) in exp.schema.items():
            assert callable(conv) and help_


def test_list_command(capsys):
    assert main(["list"]) == EXIT_OK
    out = capsys.readouterr().out
    for exp_id in EXPERIMENTS:
        assert exp_id in out


def test_no_command_prints_help(capsys):
    assert main([]) == EXIT_SCHEMA
    assert "usage" in capsys.readouterr().out


def test_unknown_experiment():
    assert main(["frobnicate"]) == EXIT_UNKNOWN


def test_run_writes_csv_and_summary(tmp_path, capsys):
    out = tmp_path / "rows.csv"
    summ = tmp_path / "record.json"
    code = main(["trilinear-alpha", "--d", "3", "--Ns", "4,8,16",
                 "--generator", "plane_triple",
                 "--out", str(out), "--summary", str(summ)])
    assert code == EXIT_OK
    lines = out.read_text().strip().splitlines()
    assert lines[0] == "d,N,trial,ratio,generator,seed"
    assert len(lines) == 4
    record = json.loads(summ.read_text())
    assert record["experiment"] == "trilinear-alpha"
    assert record["config"]["Ns"] == [4, 8, 16]
    assert len(record["config_hash"]) == 16
    assert record["rows"] == 3


def test_run_stdout_default(capsys):
    code = main(["dio-sweep", "--Ns", "8,12,16"])
    assert code == EXIT_OK
    captured = capsys.readouterr()
    assert captured.out.splitlines()[0] == "N,delta,count,method,seconds"
    record = json.loads(captured.err)
    assert record["experiment"] == "dio-sweep"


def test_config_file_overrides_flags(tmp_path, capsys):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"Ns": "4,8,16", "generator": "plane_triple"}))
    out = tmp_path / "rows.csv"
    code = main(["trilinear-alpha", "--Ns", "8,16,32",
                 "--config", str(cfg), "--out", str(out),
                 "--summary", str(tmp_path / "s.json")])
    assert code == EXIT_OK
    assert ",4," in out.read_text().splitlines()[1]


def test_config_unknown_key(tmp_path, capsys):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"bogus_knob": 1}))
    assert main(["dio-sweep", "--config", str(cfg)]) == EXIT_SCHEMA
    assert "unknown config keys" in capsys.readouterr().err


def test_config_invalid_json(tmp_path, capsys):
    cfg = tmp_path / "cfg.json"
    cfg.write_text("{not json")
    assert main(["dio-sweep", "--config", str(cfg)]) == EXIT_SCHEMA


def test_assertion_exit(capsys):
    # duplicate Ns violate the sweep contract
    assert main(["dio-sweep", "--Ns", "8,8,12"]) == EXIT_ASSERTION
    assert "assertion failure" in capsys.readouterr().err


def test_budget_exit(tmp_path, capsys):
    # the shell at radius 40 holds ~4e4 points, so the ordered-pair count
    # blows past the default 4e8 budget while enumeration stays cheap
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"Ns": "40,44,48", "delta": 2}))
    assert main(["dio-sweep", "--config", str(cfg)]) == EXIT_BUDGET
    assert "budget refusal" in capsys.readouterr().err


def test_resolve_params_defaults():
    parser = build_parser()
    args = parser.parse_args(["zakharov-run"])
    params = resolve_params(EXPERIMENTS["zakharov-run"], args, None)
    assert params["grid"] == 64 and params["dt"] == 1e-3
    with pytest.raises(SchemaError):
        resolve_params(EXPERIMENTS["zakharov-run"], args, {"nope": 1})


def test_selftest_only_flag(capsys):
    assert main(["selftest", "--only", "9"]) == EXIT_OK
    out = capsys.readouterr().out
    assert "criterion 9" in out and "PASS" in out
