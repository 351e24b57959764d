import json

from click.testing import CliRunner

from rescueaid.cli import main


def write(path, text):
    path.write_text(text, encoding="utf-8")


def test_data_pipeline_commands(tmp_path):
    runner = CliRunner()
    write(tmp_path / "a.csv", "case_id,SpO2\n1,95\n2,88\n")
    write(tmp_path / "b.csv", "case_id,HeartRate,labels\n1,80,respiratory\n3,120,cardiovascular\n")

    merged = tmp_path / "merged.csv"
    result = runner.invoke(
        main,
        ["data", "merge", "--in", str(tmp_path / "a.csv"), "--in", str(tmp_path / "b.csv"),
         "--out", str(merged), "--report", str(tmp_path / "merge.json")],
    )
    assert result.exit_code == 0, result.output
    assert "3 cases" in result.output
    assert json.loads((tmp_path / "merge.json").read_text())["rows_out"] == 3

    dictionary = tmp_path / "dict.json"
    result = runner.invoke(main, ["data", "dict", "--in", str(merged), "--out", str(dictionary)])
    assert result.exit_code == 0, result.output
    assert json.loads(dictionary.read_text())["version"]

    filtered = tmp_path / "filtered.csv"
    result = runner.invoke(
        main,
        ["data", "filter", "--in", str(merged), "--dict", str(dictionary),
         "--out", str(filtered), "--report", str(tmp_path / "filter.json")],
    )
    assert result.exit_code == 0, result.output
    assert filtered.exists()

    features = tmp_path / "features.csv"
    result = runner.invoke(
        main,
        ["data", "encode", "--in", str(filtered), "--dict", str(dictionary),
         "--out", str(features), "--report", str(tmp_path / "encoders.json")],
    )
    assert result.exit_code == 0, result.output
    header = features.read_text().splitlines()[0]
    assert header.endswith("label")


def test_synth_train_eval_gradcheck(tmp_path):
    runner = CliRunner()
    cases = tmp_path / "cases.csv"
    result = runner.invoke(main, ["synth", "generate", "--n", "200", "--seed", "5", "--out", str(cases)])
    assert result.exit_code == 0, result.output

    config = tmp_path / "train.json"
    write(config, json.dumps({"hidden_layout": [16], "epochs": 10, "learning_rate": 0.1, "batch_size": 32, "seed": 1}))
    bundle = tmp_path / "bundle.json"
    result = runner.invoke(
        main, ["model", "train", "--data", str(cases), "--config", str(config), "--out", str(bundle)]
    )
    assert result.exit_code == 0, result.output
    assert "held-out accuracy" in result.output

    result = runner.invoke(main, ["model", "eval", "--model", str(bundle), "--data", str(cases)])
    assert result.exit_code == 0, result.output
    assert "accuracy" in result.output

    result = runner.invoke(main, ["model", "gradcheck", "--seed", "3", "--layouts", "2"])
    assert result.exit_code == 0, result.output
    assert "OK" in result.output


def test_session_demo_runs_headless(tmp_path, desk_bundle):
    runner = CliRunner()
    bundle_path = tmp_path / "bundle.json"
    desk_bundle.save(bundle_path)
    events_path = tmp_path / "events.ndjson"
    result = runner.invoke(
        main, ["session", "demo", "--model", str(bundle_path), "--events-out", str(events_path)]
    )
    assert result.exit_code == 0, result.output
    assert "accepted" in result.output
    kinds = [json.loads(line)["kind"] for line in events_path.read_text().splitlines()]
    assert "SwitchSuggested" in kinds
    assert kinds[-1] == "SessionClosed"
