"""Batch entry points: feature extraction, nested evaluation, footprint table.

Exit codes: 0 success, 1 validation error, 2 partial extraction failure.
"""

from __future__ import annotations

import csv
import json
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import click

from .acoustic import FEATURE_NAMES, acoustic_feature_vector
from .audio import ACOUSTIC_RATE, EMBEDDING_RATE, load_wav, resample, trim_silence
from .dataset import Manifest, ManifestError, parse_manifest
from .embeddings import (
    SidecarFormatError,
    aggregate_embeddings,
    embed_windows,
    load_precomputed,
    sidecar_path,
    stub_runner,
)
from .evaluation import (
    ExperimentConfig,
    ProtocolError,
    footprint_report,
    run_experiment,
)
from .store import (
    ACOUSTIC_FILE,
    EMBEDDINGS_FILE,
    FeatureStore,
    embedding_column_names,
    read_feature_csv,
    write_feature_csv,
)

DATA_ROOT_ENV = "RESPIRA_DATA_ROOT"


def _fail(message: str, code: int):
    click.echo(f"error: {message}", err=True)
    sys.exit(code)


def _resolve_audio_path(record_path: str, manifest_path: Path) -> Path:
    path = Path(record_path)
    if path.is_absolute():
        return path
    root = os.environ.get(DATA_ROOT_ENV)
    if root:
        return Path(root) / path
    return manifest_path.parent / path


@click.group()
def main():
    """Respiratory-audio screening pipeline."""


def _extract_one(record, manifest_path, do_acoustic, do_embeddings, runner_spec):
    """Feature rows for one manifest record; returns (sample_id, acoustic, embedding)."""
    acoustic_vec = embedding_vec = None
    if do_acoustic or runner_spec[0] == "stub":
        wav = load_wav(_resolve_audio_path(record.path, manifest_path))
    if do_acoustic:
        clip = resample(wav, ACOUSTIC_RATE)
        trimmed = trim_silence(clip)
        if trimmed.all_silent:
            raise ValueError("clip is entirely silent after trimming")
        acoustic_vec = acoustic_feature_vector(trimmed.clip)
    if do_embeddings:
        mode, arg = runner_spec
        if mode == "stub":
            clip = resample(wav, EMBEDDING_RATE)
            matrix = embed_windows(clip, stub_runner(int(arg)), record.sample_id)
        else:
            matrix = load_precomputed(sidecar_path(arg, record.sample_id))
        embedding_vec = aggregate_embeddings(matrix).values
    return record.sample_id, acoustic_vec, embedding_vec


@main.command("extract")
@click.argument("manifest_path", type=click.Path(exists=True, path_type=Path))
@click.argument("out_dir", type=click.Path(path_type=Path))
@click.option("--acoustic/--no-acoustic", "do_acoustic", default=True,
              help="Compute the hand-crafted descriptor vectors.")
@click.option("--embeddings/--no-embeddings", "do_embeddings", default=True,
              help="Compute aggregated deep-embedding vectors.")
@click.option("--runner", default=None,
              help="Embedding source: stub:<seed> or sidecar:<dir>.")
@click.option("--seed", default=0, type=int, show_default=True,
              help="Master seed (stub runner default).")
@click.option("--jobs", default=1, type=int, show_default=True,
              help="Extraction worker threads.")
@click.option("--force", is_flag=True, help="Recompute existing outputs.")
def cmd_extract(manifest_path, out_dir, do_acoustic, do_embeddings,
                runner, seed, jobs, force):
    """Extract features for every manifest sample into OUT_DIR."""
    try:
        manifest = parse_manifest(manifest_path)
        runner_spec = _parse_runner(runner, seed)
    except (ManifestError, ValueError) as exc:
        _fail(str(exc), 1)
    out_dir.mkdir(parents=True, exist_ok=True)
    acoustic_path = out_dir / ACOUSTIC_FILE
    embeddings_path = out_dir / EMBEDDINGS_FILE
    known_acoustic = (read_feature_csv(acoustic_path, len(FEATURE_NAMES))
                      if acoustic_path.exists() and not force else {})
    known_embeddings = (read_feature_csv(embeddings_path, 1024)
                        if embeddings_path.exists() and not force else {})

    def needs_work(record) -> bool:
        missing_acoustic = do_acoustic and record.sample_id not in known_acoustic
        missing_embedding = do_embeddings and record.sample_id not in known_embeddings
        return missing_acoustic or missing_embedding

    todo = [r for r in manifest.records if needs_work(r)]
    failures = []
    results = {}

    def worker(record):
        return _extract_one(record, manifest_path, do_acoustic, do_embeddings,
                            runner_spec)

    if jobs > 1 and len(todo) > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            outcomes = list(pool.map(_guarded(worker), todo))
    else:
        outcomes = [_guarded(worker)(r) for r in todo]
    for record, outcome in zip(todo, outcomes):
        if isinstance(outcome, Exception):
            failures.append((record.sample_id, outcome))
        else:
            results[record.sample_id] = outcome

    if todo or force:
        if do_acoustic:
            rows = _merge_rows(manifest, known_acoustic, results, index=1)
            write_feature_csv(acoustic_path, FEATURE_NAMES, rows)
        if do_embeddings:
            rows = _merge_rows(manifest, known_embeddings, results, index=2)
            write_feature_csv(embeddings_path, embedding_column_names(), rows)
    click.echo(f"extracted {len(results)} of {len(todo)} pending samples "
               f"({len(manifest) - len(todo)} already present)")
    if failures:
        for sample_id, exc in failures:
            click.echo(f"failed {sample_id}: {exc}", err=True)
        sys.exit(2)


def _guarded(fn):
    def wrapped(record):
        try:
            return fn(record)
        except Exception as exc:  # per-file failures are collected, not fatal
            return exc
    return wrapped


def _merge_rows(manifest, known, results, index):
    rows = []
    for record in manifest.records:
        if record.sample_id in results and results[record.sample_id][index] is not None:
            rows.append((record.sample_id, results[record.sample_id][index]))
        elif record.sample_id in known:
            rows.append((record.sample_id, known[record.sample_id]))
    return rows


def _parse_runner(runner: str | None, seed: int):
    if runner is None or runner == "stub":
        return ("stub", seed)
    if runner.startswith("stub:"):
        return ("stub", int(runner.split(":", 1)[1]))
    if runner.startswith("sidecar:"):
        directory = Path(runner.split(":", 1)[1])
        if not directory.is_dir():
            raise ValueError(f"sidecar directory not found: {directory}")
        return ("sidecar", directory)
    raise ValueError(f"bad --runner {runner!r}; expected stub:<seed> or sidecar:<dir>")


@main.command("evaluate")
@click.argument("config_path", type=click.Path(exists=True, path_type=Path))
@click.argument("store_dir", type=click.Path(exists=True, path_type=Path))
@click.argument("manifest_path", type=click.Path(exists=True, path_type=Path))
@click.option("--out", default="report.json", type=click.Path(path_type=Path),
              show_default=True)
def cmd_evaluate(config_path, store_dir, manifest_path, out):
    """Run the nested subject-independent protocol and write the report."""
    try:
        config = ExperimentConfig.from_dict(json.loads(config_path.read_text()))
        manifest = parse_manifest(manifest_path)
        store = FeatureStore.load(store_dir)
        _check_store_complete(config, manifest, store)
    except (ValueError, ManifestError, FileNotFoundError, KeyError) as exc:
        _fail(str(exc), 1)
    try:
        report = run_experiment(config, manifest, store)
    except (ProtocolError, KeyError) as exc:
        _fail(str(exc), 1)
    document = report.to_dict()
    document["manifest"] = str(manifest_path)
    out.write_text(json.dumps(document, sort_keys=True, indent=2) + "\n")
    csv_path = out.with_suffix(".csv")
    with open(csv_path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["split", "modality", "feature_set", "classifier", "pca",
                         "auc", "precision", "recall"])
        for split in report.splits:
            writer.writerow([
                split.index, split.chosen["modality"], split.chosen["feature_set"],
                split.chosen["classifier"], split.chosen["pca"],
                repr(split.auc), repr(split.precision), repr(split.recall),
            ])
    click.echo(_format_summary(report))
    click.echo(f"report written to {out} and {csv_path}")


def _check_store_complete(config, manifest, store) -> None:
    need_acoustic = any(s != "F1" for s in config.feature_sets)
    wanted_modalities = set()
    for m in config.modalities:
        wanted_modalities |= {"cough", "breath"} if m == "cough+breath" else {m}
    missing = []
    for record in manifest.records:
        if record.modality not in wanted_modalities:
            continue
        if record.sample_id not in store.embeddings:
            missing.append(record.sample_id)
        elif need_acoustic and record.sample_id not in store.acoustic:
            missing.append(record.sample_id)
    if missing:
        raise ValueError(
            f"feature store incomplete: {len(missing)} samples missing "
            f"(first: {missing[:3]})")


def _format_summary(report) -> str:
    best = report.best
    lines = [
        "modality={modality} features={feature_set}".format(**best),
        "metric     mean (std)",
    ]
    for metric in ("auc", "precision", "recall"):
        agg = report.aggregate[metric]
        lines.append(f"{metric:<10} {agg['mean']:.3f} ({agg['std']:.3f})")
    return "\n".join(lines)


@main.command("footprint")
@click.argument("report_path", type=click.Path(exists=True, path_type=Path))
@click.argument("store_dir", type=click.Path(exists=True, path_type=Path))
@click.option("--out", default="footprint.csv", type=click.Path(path_type=Path),
              show_default=True)
def cmd_footprint(report_path, store_dir, out):
    """Size/AUC table for every classifier kind at every PCA coefficient."""
    try:
        document = json.loads(report_path.read_text())
        config = ExperimentConfig.from_dict(document["config"])
        manifest = parse_manifest(document["manifest"])
        store = FeatureStore.load(store_dir)
        rows = footprint_report(config, manifest, store,
                                document["best"]["modality"],
                                document["best"]["feature_set"])
    except (ValueError, ManifestError, FileNotFoundError, KeyError,
            ProtocolError) as exc:
        _fail(str(exc), 1)
    with open(out, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["classifier", "pca", "bytes", "auc"])
        for row in rows:
            writer.writerow([row.classifier, row.pca, row.bytes, repr(row.auc)])
    for row in rows:
        click.echo(f"{row.classifier:<14} pca={row.pca:<5} "
                   f"{row.bytes:>9} B  auc={row.auc:.3f}")
    click.echo(f"footprint table written to {out}")


if __name__ == "__main__":
    main()
