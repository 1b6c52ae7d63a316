import json

import pytest

from qrcsim.cli import main


def tiny_config_file(tmp_path, **overrides):
    data = {
        "model": {"kind": "markov", "n_qubits": 2, "dt": 10.0, "h": 1.0, "gamma": 0.1},
        "task": {"kind": "stm", "taus": [0, 1]},
        "phases": {"washout": 10, "train": 40, "test": 30},
        "observables": "xyz",
        "realizations": 2,
        "master_seed": 3,
    }
    for key, value in overrides.items():
        if isinstance(value, dict):
            data[key].update(value)
        else:
            data[key] = value
    path = tmp_path / "config.json"
    path.write_text(json.dumps(data))
    return path


def test_run_stm_writes_outputs(tmp_path, capsys):
    config = tiny_config_file(tmp_path)
    out = tmp_path / "run"
    code = main(["run-stm", "--config", str(config), "--out", str(out)])
    assert code == 0
    for name in ("config.resolved", "records.csv", "summary.csv", "log.txt"):
        assert (out / name).exists()


def test_seed_and_realization_overrides(tmp_path):
    config = tiny_config_file(tmp_path)
    out = tmp_path / "run"
    assert main([
        "run-stm", "--config", str(config), "--out", str(out),
        "--seed", "77", "--realizations", "1",
    ]) == 0
    resolved = json.loads((out / "config.resolved").read_text())
    assert resolved["master_seed"] == 77
    assert resolved["realizations"] == 1


def test_invalid_config_exits_with_error_class(tmp_path, capsys):
    config = tiny_config_file(tmp_path, model={"gamma": -1.0})
    code = main(["run-stm", "--config", str(config), "--out", str(tmp_path / "x")])
    assert code == 2
    err = json.loads(capsys.readouterr().err.strip())
    assert err["error"] == "config-error"
    assert "model.gamma" in err["message"]


def test_task_kind_must_match_subcommand(tmp_path, capsys):
    config = tiny_config_file(tmp_path, task={"kind": "monomial"})
    code = main(["run-stm", "--config", str(config), "--out", str(tmp_path / "x")])
    assert code == 2
    assert json.loads(capsys.readouterr().err.strip())["error"] == "config-error"


def test_santafe_missing_dataset_fails_cleanly(tmp_path, capsys):
    config = tiny_config_file(
        tmp_path,
        task={"kind": "santafe", "steps_ahead": [1], "dataset_path": str(tmp_path / "no.txt")},
        observables="xyz",
    )
    code = main(["run-santafe", "--config", str(config), "--out", str(tmp_path / "x")])
    assert code == 3
    assert json.loads(capsys.readouterr().err.strip())["error"] == "data-error"


def test_sweep_requires_config(tmp_path, capsys):
    code = main([
        "sweep", "--param", "gamma", "--values", "0.1",
        "--out", str(tmp_path / "x"),
    ])
    assert code == 2


def test_sweep_writes_long_format(tmp_path):
    config = tiny_config_file(tmp_path)
    out = tmp_path / "sweep"
    code = main([
        "sweep", "--config", str(config), "--param", "gamma",
        "--values", "0.05,0.1", "--out", str(out),
    ])
    assert code == 0
    assert (out / "sweep_records.csv").exists()
    assert (out / "sweep_summary.csv").exists()
    assert (out / "gamma=0.05" / "records.csv").exists()
    assert (out / "gamma=0.1" / "records.csv").exists()


def test_run_blp_writes_csv(tmp_path):
    config = tiny_config_file(
        tmp_path,
        model={"kind": "embedded", "dt": 0.5},
        task={"kind": "blp", "omegas": [0.0, 1.0], "n_steps": 30},
    )
    out = tmp_path / "blp"
    assert main(["run-blp", "--config", str(config), "--out", str(out)]) == 0
    assert (out / "blp.csv").exists()


def test_run_decay_writes_csv(tmp_path):
    config = tiny_config_file(tmp_path, task={"kind": "decay", "input_grid": [0.0, 1.0]})
    out = tmp_path / "decay"
    assert main(["run-decay", "--config", str(config), "--out", str(out)]) == 0
    assert (out / "decay.csv").exists()


def test_help_lists_subcommands(capsys):
    with pytest.raises(SystemExit):
        main(["--help"])
    text = capsys.readouterr().out
    for name in ("run-stm", "run-monomial", "run-mg", "run-santafe", "run-blp", "run-decay", "sweep"):
        assert name in text
