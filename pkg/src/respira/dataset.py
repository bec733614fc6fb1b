"""Manifest ingestion: CSV contract, corpus scanning, and task filters."""

from __future__ import annotations

import csv
import json
from collections import Counter
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

LABELS = ("healthy", "covid")
MODALITIES = ("cough", "breath", "voice")
MANIFEST_COLUMNS = ("sample_id", "subject_id", "session_id",
                    "label", "modality", "path", "dataset")

# COSWARA-style recording stems -> modality
_RECORDING_MODALITY = {
    "cough-heavy": "cough",
    "cough-shallow": "cough",
    "breathing-deep": "breath",
    "breathing-shallow": "breath",
    "counting-normal": "voice",
    "counting-fast": "voice",
    "vowel-a": "voice",
    "vowel-e": "voice",
    "vowel-o": "voice",
}


class ManifestError(ValueError):
    """Manifest violates the schema contract."""


@dataclass(frozen=True)
class SampleRecord:
    sample_id: str
    subject_id: str
    session_id: str
    label: str
    modality: str
    path: str
    dataset: str
    extra: tuple = ()  # extra metadata columns as sorted (key, value) pairs

    def extra_dict(self) -> dict:
        return dict(self.extra)


@dataclass(frozen=True)
class Manifest:
    records: tuple[SampleRecord, ...]

    def __len__(self) -> int:
        return len(self.records)

    @property
    def subjects(self) -> list[str]:
        seen = []
        known = set()
        for r in self.records:
            if r.subject_id not in known:
                known.add(r.subject_id)
                seen.append(r.subject_id)
        return seen

    def summary(self) -> dict[tuple[str, str, str], int]:
        """Counts per (dataset, label, modality)."""
        return dict(Counter((r.dataset, r.label, r.modality) for r in self.records))

    def filter(self, predicate) -> "Manifest":
        return Manifest(records=tuple(r for r in self.records if predicate(r)))


def _validate_records(records) -> Manifest:
    seen = set()
    for r in records:
        if r.label not in LABELS:
            raise ManifestError(
                f"sample {r.sample_id}: unknown label {r.label!r}, allowed: {LABELS}")
        if r.modality not in MODALITIES:
            raise ManifestError(
                f"sample {r.sample_id}: unknown modality {r.modality!r}, "
                f"allowed: {MODALITIES}")
        if r.sample_id in seen:
            raise ManifestError(f"duplicate sample_id: {r.sample_id}")
        seen.add(r.sample_id)
    return Manifest(records=tuple(records))


def parse_manifest(path) -> Manifest:
    """Load and validate the manifest CSV; unknown columns ride along."""
    path = Path(path)
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        header = reader.fieldnames or []
        missing = [c for c in MANIFEST_COLUMNS if c not in header]
        if missing:
            raise ManifestError(f"{path}: missing columns {missing}")
        extra_cols = [c for c in header if c not in MANIFEST_COLUMNS]
        records = []
        for row in reader:
            extras = tuple(sorted((c, row[c]) for c in extra_cols))
            records.append(SampleRecord(
                sample_id=row["sample_id"],
                subject_id=row["subject_id"],
                session_id=row["session_id"],
                label=row["label"],
                modality=row["modality"],
                path=row["path"],
                dataset=row["dataset"],
                extra=extras,
            ))
    return _validate_records(records)


def write_manifest(manifest: Manifest, path) -> None:
    extra_cols = sorted({key for r in manifest.records for key, _ in r.extra})
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(list(MANIFEST_COLUMNS) + extra_cols)
        for r in manifest.records:
            extras = r.extra_dict()
            writer.writerow([r.sample_id, r.subject_id, r.session_id, r.label,
                             r.modality, r.path, r.dataset]
                            + [extras.get(c, "") for c in extra_cols])


def default_status_map() -> dict:
    """Health-status vocabulary -> label mapping shipped with the package."""
    text = resources.files("respira.data").joinpath("coswara_status_map.json").read_text()
    return json.loads(text)


@dataclass(frozen=True)
class ScanResult:
    manifest: Manifest
    skipped: tuple[dict, ...]


def scan_coswara_layout(root, status_map: dict | None = None) -> ScanResult:
    """Walk a COSWARA-shaped tree: <session>/<subject>/<recording>.wav plus a
    per-subject metadata.json carrying the health status.

    Statuses mapping to null (or absent from the map) are skipped and show up
    in the skip report with a reason.
    """
    root = Path(root)
    if status_map is None:
        status_map = default_status_map()
    records = []
    skipped = []
    for session_dir in sorted(p for p in root.iterdir() if p.is_dir()):
        for subject_dir in sorted(p for p in session_dir.iterdir() if p.is_dir()):
            meta_path = subject_dir / "metadata.json"
            try:
                metadata = json.loads(meta_path.read_text())
            except (OSError, json.JSONDecodeError) as exc:
                raise ManifestError(f"unreadable metadata {meta_path}: {exc}") from exc
            status = metadata.get("covid_status", "")
            label = status_map.get(status)
            if label is None:
                reason = "unmapped_status" if status not in status_map else "status_excluded"
                skipped.append({"subject_id": subject_dir.name,
                                "session_id": session_dir.name,
                                "status": status, "reason": reason})
                continue
            for wav in sorted(subject_dir.glob("*.wav")):
                modality = _RECORDING_MODALITY.get(wav.stem)
                if modality is None:
                    skipped.append({"subject_id": subject_dir.name,
                                    "session_id": session_dir.name,
                                    "file": wav.name, "reason": "unknown_recording_type"})
                    continue
                records.append(SampleRecord(
                    sample_id=f"coswara_{session_dir.name}_{subject_dir.name}_{wav.stem}",
                    subject_id=subject_dir.name,
                    session_id=session_dir.name,
                    label=label,
                    modality=modality,
                    path=str(wav),
                    dataset="coswara",
                ))
    return ScanResult(manifest=_validate_records(records), skipped=tuple(skipped))


def write_skip_report(skipped, path) -> None:
    """Skip report as JSON lines."""
    with open(path, "w") as fh:
        for entry in skipped:
            fh.write(json.dumps(entry, sort_keys=True) + "\n")


def manifest_summary(manifest: Manifest) -> dict[tuple[str, str], int]:
    """Sample counts per (dataset, label)."""
    return dict(Counter((r.dataset, r.label) for r in manifest.records))


def apply_task_filter(manifest: Manifest, task_spec: dict) -> Manifest:
    """Select and relabel samples from declarative metadata conditions.

    ``task_spec`` holds ``positive_when`` / ``negative_when`` maps of column
    name to allowed values, evaluated against each record's schema and extra
    columns; matched records get label covid / healthy respectively.
    """
    def matches(record: SampleRecord, conditions: dict) -> bool:
        row = {
            "sample_id": record.sample_id, "subject_id": record.subject_id,
            "session_id": record.session_id, "label": record.label,
            "modality": record.modality, "dataset": record.dataset,
            **record.extra_dict(),
        }
        return all(row.get(col) in set(allowed) for col, allowed in conditions.items())

    records = []
    for r in manifest.records:
        if matches(r, task_spec.get("positive_when", {"__none__": []})):
            records.append(SampleRecord(**{**r.__dict__, "label": "covid"}))
        elif matches(r, task_spec.get("negative_when", {"__none__": []})):
            records.append(SampleRecord(**{**r.__dict__, "label": "healthy"}))
    return _validate_records(records)


def load_task_filter(path) -> dict:
    return json.loads(Path(path).read_text())
