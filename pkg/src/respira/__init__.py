"""respira: respiratory-audio screening pipeline.

Hand-crafted acoustic descriptors plus aggregated deep audio embeddings,
fused per feature set, standardized and PCA-reduced, classified by shallow
models, and evaluated under a subject-independent nested protocol with a
model-footprint report.
"""

__version__ = "0.1.0"

from .audio import AudioClip, load_wav, resample, trim_silence
from .acoustic import acoustic_feature_vector, feature_names
from .embeddings import (
    aggregate_embeddings,
    embed_windows,
    load_precomputed,
    stub_runner,
)
from .fusion import Standardizer, VarianceTargetPCA, assemble_features
from .metrics import auc, precision, recall
from .dataset import Manifest, parse_manifest, scan_coswara_layout
from .evaluation import ExperimentConfig, footprint_report, run_experiment

__all__ = [
    "AudioClip", "load_wav", "resample", "trim_silence",
    "acoustic_feature_vector", "feature_names",
    "aggregate_embeddings", "embed_windows", "load_precomputed", "stub_runner",
    "Standardizer", "VarianceTargetPCA", "assemble_features",
    "auc", "precision", "recall",
    "Manifest", "parse_manifest", "scan_coswara_layout",
    "ExperimentConfig", "footprint_report", "run_experiment",
]
