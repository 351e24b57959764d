"""Command-line interface.

Subcommand groups: ``data`` (merge/filter/dict/encode), ``model``
(train/eval/gradcheck), ``synth generate``, ``sim replay``, ``serve``, and
``session demo``. Run any command with ``--help`` for its flags.
"""

from __future__ import annotations

import csv
import json
import math
import sys
from pathlib import Path

import click
import numpy as np

from rescueaid.case_data import (
    DataDictionary,
    build_dictionary,
    build_encoding_scheme,
    filter_cases,
    merge_case_tables,
)
from rescueaid.case_data.tables import read_csv, write_csv
from rescueaid.groups import ComplicationGroup
from rescueaid.recognition.metrics import evaluate
from rescueaid.recognition.network import init_model
from rescueaid.recognition.pipeline import ModelBundle, features_from_table, fit_pipeline
from rescueaid.recognition.synthetic import DEFAULT_PROFILES, generate_synthetic_cases, load_profiles
from rescueaid.recognition.training import TrainingConfig, gradient_check, split_dataset, train


@click.group()
def main():
    """Desk-scale rescue decision support toolkit."""


# ---------------------------------------------------------------- data


@main.group()
def data():
    """Case-table pipeline: merge, filter, dict, encode."""


@data.command("merge")
@click.option("--in", "inputs", multiple=True, required=True, type=click.Path(exists=True), help="Input CSV (repeatable).")
@click.option("--out", "output", required=True, type=click.Path(), help="Merged CSV path.")
@click.option("--report", type=click.Path(), help="Optional JSON merge report.")
def data_merge(inputs, output, report):
    """Merge case tables on case_id master keys."""
    tables = [read_csv(path) for path in inputs]
    merged, merge_report = merge_case_tables(tables)
    write_csv(merged, output)
    click.echo(f"merged {merge_report.rows_in} rows from {merge_report.tables_in} tables "
               f"into {merge_report.rows_out} cases ({merge_report.conflicts} conflicts)")
    if report:
        Path(report).write_text(json.dumps(merge_report.__dict__, indent=2) + "\n")


@data.command("filter")
@click.option("--in", "input_path", required=True, type=click.Path(exists=True))
@click.option("--dict", "dict_path", required=True, type=click.Path(exists=True))
@click.option("--out", "output", required=True, type=click.Path())
@click.option("--report", type=click.Path())
def data_filter(input_path, dict_path, output, report):
    """Limit columns, null outliers, median-fill against a dictionary."""
    table = read_csv(input_path)
    dictionary = DataDictionary.load(dict_path)
    filtered, filter_report = filter_cases(table, dictionary)
    write_csv(filtered, output)
    click.echo(f"dropped columns: {filter_report.dropped_columns or 'none'}; "
               f"outliers nulled: {filter_report.total_outliers}; cells filled: {filter_report.total_fills}")
    if report:
        payload = {
            "dropped_columns": filter_report.dropped_columns,
            "outlier_counts": filter_report.outlier_counts,
            "fill_counts": filter_report.fill_counts,
        }
        Path(report).write_text(json.dumps(payload, indent=2) + "\n")


@data.command("dict")
@click.option("--in", "input_path", required=True, type=click.Path(exists=True))
@click.option("--out", "output", required=True, type=click.Path())
def data_dict(input_path, output):
    """Profile a table into a data dictionary (descriptions left empty)."""
    dictionary = build_dictionary(read_csv(input_path))
    dictionary.save(output)
    kinds = {}
    for descriptor in dictionary.entries.values():
        kinds[descriptor.semantic_type] = kinds.get(descriptor.semantic_type, 0) + 1
    click.echo(f"profiled {len(dictionary.entries)} attributes: " + ", ".join(f"{v} {k}" for k, v in sorted(kinds.items())))


@data.command("encode")
@click.option("--in", "input_path", required=True, type=click.Path(exists=True))
@click.option("--dict", "dict_path", required=True, type=click.Path(exists=True))
@click.option("--out", "output", required=True, type=click.Path(), help="Feature matrix CSV.")
@click.option("--report", type=click.Path(), help="Fitted encoders (scheme, tfidf, schema) as JSON.")
def data_encode(input_path, dict_path, output, report):
    """Encode a labeled table into a dense feature matrix."""
    table = read_csv(input_path)
    dictionary = DataDictionary.load(dict_path)
    pipeline = fit_pipeline(table, dictionary)
    x, y = features_from_table(table, pipeline)
    with Path(output).open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow([f"x{i}" for i in range(x.shape[1])] + ["label"])
        for row, label in zip(x, y):
            writer.writerow(list(row) + [int(label)])
    click.echo(f"encoded {x.shape[0]} rows x {x.shape[1]} features")
    if report:
        payload = {
            "schema": pipeline.schema.to_dict(),
            "scheme": json.loads(pipeline.scheme.to_json()),
            "tfidf": json.loads(pipeline.tfidf.to_json()) if pipeline.tfidf else None,
        }
        Path(report).write_text(json.dumps(payload, indent=2) + "\n")


# ---------------------------------------------------------------- model


@main.group()
def model():
    """Train, evaluate, and gradient-check the classifier."""


def _training_config(config_path) -> TrainingConfig:
    if not config_path:
        return TrainingConfig()
    raw = json.loads(Path(config_path).read_text())
    return TrainingConfig(**raw)


@model.command("train")
@click.option("--data", "data_path", required=True, type=click.Path(exists=True), help="Labeled case CSV.")
@click.option("--config", "config_path", type=click.Path(exists=True), help="TrainingConfig JSON.")
@click.option("--out", "output", required=True, type=click.Path(), help="Model bundle path.")
def model_train(data_path, config_path, output):
    """Fit encoders and train a model bundle on a labeled case table."""
    table = read_csv(data_path)
    config = _training_config(config_path)
    pipeline = fit_pipeline(table)
    x, y = features_from_table(table, pipeline)
    train_x, train_y, val_x, val_y = split_dataset(x, y, config.validation_split, config.seed)
    network = init_model(x.shape[1], config.hidden_layout, seed=config.seed, schema_id=pipeline.schema.schema_id)
    trained, history = train(network, train_x, train_y, config)
    bundle = ModelBundle(model=trained, schema=pipeline.schema, scheme=pipeline.scheme, tfidf=pipeline.tfidf)
    bundle.save(output)
    report = evaluate(trained, val_x, val_y) if len(val_y) else None
    click.echo(f"trained on {len(train_y)} cases; loss {history[0]:.4f} -> {history[-1]:.4f}")
    if report:
        click.echo(f"held-out accuracy: {report.accuracy:.4f} on {len(val_y)} cases")


@model.command("eval")
@click.option("--model", "model_path", required=True, type=click.Path(exists=True))
@click.option("--data", "data_path", required=True, type=click.Path(exists=True))
def model_eval(model_path, data_path):
    """Evaluate a bundle against a labeled case table."""
    bundle = ModelBundle.load(model_path)
    table = read_csv(data_path)
    pipeline = _pipeline_from_bundle(bundle)
    x, y = features_from_table(table, pipeline)
    report = evaluate(bundle.model, x, y)
    click.echo(report.summary())


def _pipeline_from_bundle(bundle: ModelBundle):
    from rescueaid.recognition.pipeline import FittedPipeline

    return FittedPipeline(dictionary=None, scheme=bundle.scheme, tfidf=bundle.tfidf, schema=bundle.schema)


@model.command("gradcheck")
@click.option("--seed", default=0, show_default=True)
@click.option("--layouts", default=5, show_default=True, help="Number of random layouts to check.")
def model_gradcheck(seed, layouts):
    """Analytic vs central-difference gradients on random model layouts."""
    rng = np.random.default_rng(seed)
    worst = 0.0
    for i in range(layouts):
        input_dim = int(rng.integers(4, 12))
        hidden = [int(rng.integers(4, 16)) for _ in range(int(rng.integers(1, 3)))]
        network = init_model(input_dim, hidden, seed=seed + i)
        x = rng.normal(size=input_dim)
        label = int(rng.integers(0, network.output_dim))
        deviation = gradient_check(network, x, label)
        worst = max(worst, deviation)
        click.echo(f"layout {input_dim}-{'-'.join(map(str, hidden))}-10: max relative deviation {deviation:.3e}")
    click.echo(f"worst deviation: {worst:.3e} ({'OK' if worst < 1e-4 else 'FAIL'} at 1e-4)")
    if worst >= 1e-4:
        sys.exit(1)


# ---------------------------------------------------------------- synth


@main.group()
def synth():
    """Synthetic case generation."""


@synth.command("generate")
@click.option("--profiles", "profiles_path", type=click.Path(exists=True), help="Profiles JSON; defaults to built-ins.")
@click.option("--n", "count", default=1000, show_default=True)
@click.option("--seed", default=0, show_default=True)
@click.option("--out", "output", required=True, type=click.Path())
def synth_generate(profiles_path, count, seed, output):
    """Sample labeled synthetic cases into a CSV case table."""
    profiles = load_profiles(profiles_path) if profiles_path else DEFAULT_PROFILES
    table = generate_synthetic_cases(profiles, count, seed)
    write_csv(table, output)
    click.echo(f"wrote {len(table)} cases across {len(profiles)} groups to {output}")


# ---------------------------------------------------------------- sim


@main.group()
def sim():
    """Device-stream simulation."""


@sim.command("replay")
@click.option("--scenario", "scenario_path", required=True, type=click.Path(exists=True))
@click.option("--speed", default=1.0, show_default=True, help="Speed multiplier; 0 means batch mode.")
@click.option("--connect", "address", required=True, help="host:port of a running service (/ingest relay).")
def sim_replay(scenario_path, speed, address):
    """Replay a scenario file against a running service."""
    import urllib.request

    from rescueaid.vitals.framing import encode_frame
    from rescueaid.vitals.samples import VitalSample
    from rescueaid.vitals.scenario import load_scenario, replay

    scenario = load_scenario(scenario_path)
    host, _, port = address.partition(":")
    base = f"http://{host}:{port or 80}"
    effective_speed = math.inf if speed == 0 else speed
    sent = 0
    for entry in replay(scenario, speed=effective_speed):
        if isinstance(entry.payload, VitalSample):
            request = urllib.request.Request(
                f"{base}/ingest", data=encode_frame(entry.payload), method="POST"
            )
            urllib.request.urlopen(request, timeout=5)
            sent += 1
    click.echo(f"replayed {sent} samples from {scenario.title!r} to {base}/ingest")


# ---------------------------------------------------------------- serve & demo


@main.command("serve")
@click.option("--config", "config_path", required=True, type=click.Path(exists=True))
def serve(config_path):
    """Run the HTTP service (blocking)."""
    import logging

    import uvicorn

    from rescueaid.service.config import load_config
    from rescueaid.service.core import ServiceCore
    from rescueaid.service.http import build_app

    config = load_config(config_path)
    logging.basicConfig(level=getattr(logging, config.log_level.upper(), logging.INFO))
    core = ServiceCore(config=config)
    app = build_app(core)
    try:
        uvicorn.run(app, host=config.listen_host, port=config.listen_port, log_level=config.log_level.lower())
    finally:
        core.shutdown()


@main.group()
def session():
    """Session tooling."""


@session.command("demo")
@click.option("--scenario", "scenario_path", type=click.Path(exists=True), help="Scenario JSON; defaults to the built-in switch demo.")
@click.option("--model", "model_path", type=click.Path(exists=True), help="Model bundle; trained on the fly when omitted.")
@click.option("--speed", default=0.0, show_default=True, help="Pacing speed; 0 = lock-step (fast, deterministic).")
@click.option("--events-out", type=click.Path(), help="Write the session event log (NDJSON) here.")
def session_demo(scenario_path, model_path, speed, events_out):
    """Boot service + simulator + scripted operator in one process."""
    from rescueaid.recognition.pipeline import ModelBundle
    from rescueaid.service.demo import make_switch_scenario, run_demo, train_demo_bundle
    from rescueaid.vitals.scenario import load_scenario

    scenario = load_scenario(scenario_path) if scenario_path else make_switch_scenario()
    if model_path:
        bundle = ModelBundle.load(model_path)
    else:
        click.echo("training desk-scale demo model (seeded, ~seconds)...")
        bundle = train_demo_bundle()
    result = run_demo(
        scenario=scenario,
        bundle=bundle,
        speed=math.inf if speed == 0 else speed,
        printer=click.echo,
    )
    kinds = [record.kind for record in result["records"]]
    click.echo("event kinds: " + " ".join(kinds))
    if events_out:
        Path(events_out).write_text("\n".join(r.to_json() for r in result["records"]) + "\n")
        click.echo(f"event log written to {events_out}")


if __name__ == "__main__":
    main()
