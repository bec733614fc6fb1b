"""Subject-independent nested evaluation: outer shuffles, balancing, inner
grid search over (modality, feature set, PCA coefficient, classifier), and the
model footprint report.

All randomness derives from the master seed through ``derive_seed``, keyed by
stage names and candidate identity rather than execution order, so reports are
byte-identical under any scheduling.
"""

from __future__ import annotations

import hashlib
import itertools
import json
from dataclasses import dataclass, field, asdict, replace
from typing import Sequence

import numpy as np

from .classifiers import (
    AdaBoostClassifier,
    LogisticRegressionClassifier,
    RandomForestClassifier,
    SvmClassifier,
    model_size,
    serialize_model,
)
from .dataset import Manifest, ManifestError
from .fusion import (
    COMBINED_MODALITY,
    FEATURE_SETS,
    Standardizer,
    assemble_features,
    feature_set_width,
)
from .metrics import auc, precision, precision_is_degenerate, recall
from .store import FeatureStore
from .validation import DegenerateDataError, SingleClassError, check_matrix

CLASSIFIER_KINDS = ("svm", "logreg", "random_forest", "adaboost")
PCA_COEFFICIENTS = (0.7, 0.8, 0.9, 0.95, 0.99)


class ProtocolError(RuntimeError):
    """Evaluation protocol invariant violated or unsatisfiable."""


def default_grids() -> dict:
    """The published hyperparameter search space."""
    c_range = [10.0 ** e for e in range(-3, 4)]
    return {
        "svm": {
            "C": c_range,
            "kernel": ["rbf", "poly", "sigmoid"],
            "gamma": [1e-3, 1e-2, 1e-1, 1.0, 10.0],
            "degree": [2, 3, 4, 5],
        },
        "adaboost": {
            "n_estimators": [10, 20, 50, 100],
            "learning_rate": [1.0, 0.5, 0.1, 0.05, 0.01, 0.001],
        },
        "logreg": {
            "penalty": ["l1", "l2"],
            "C": c_range,
        },
        "random_forest": {
            "n_estimators": [10, 20, 50, 100],
            "min_samples_split": [2, 8, 10, 12],
            "max_depth": [10, 30, 50],
            "criterion": ["entropy", "gini"],
        },
    }


@dataclass(frozen=True)
class ExperimentConfig:
    task: str = "default"
    modalities: tuple[str, ...] = ("cough",)
    feature_sets: tuple[str, ...] = FEATURE_SETS
    pca_coefficients: tuple[float, ...] = PCA_COEFFICIENTS
    classifier_grids: dict = field(default_factory=default_grids)
    outer_shuffles: int = 10
    dev_fraction: float = 0.8
    inner_folds: int = 5
    seed: int = 0

    def validate(self) -> None:
        if not 0.0 < self.dev_fraction < 1.0:
            raise ValueError("dev_fraction must be in (0, 1)")
        if self.inner_folds < 2:
            raise ValueError("inner_folds must be >= 2")
        if self.outer_shuffles < 1:
            raise ValueError("outer_shuffles must be >= 1")
        if not self.modalities:
            raise ValueError("at least one modality required")
        for s in self.feature_sets:
            if s not in FEATURE_SETS:
                raise ValueError(f"unknown feature set {s!r}")
        for p in self.pca_coefficients:
            if not 0.0 < p <= 1.0:
                raise ValueError("pca coefficients must be in (0, 1]")
        if not self.classifier_grids:
            raise ValueError("classifier grid is empty")
        for kind, grid in self.classifier_grids.items():
            if kind not in CLASSIFIER_KINDS:
                raise ValueError(f"unknown classifier kind {kind!r}")
            if not grid or any(len(v) == 0 for v in grid.values()):
                raise ValueError(f"empty grid for classifier {kind!r}")

    def to_dict(self) -> dict:
        return {
            "task": self.task,
            "modalities": list(self.modalities),
            "feature_sets": list(self.feature_sets),
            "pca_coefficients": list(self.pca_coefficients),
            "classifiers": self.classifier_grids,
            "outer_shuffles": self.outer_shuffles,
            "dev_fraction": self.dev_fraction,
            "inner_folds": self.inner_folds,
            "seed": self.seed,
        }

    @classmethod
    def from_dict(cls, raw: dict) -> "ExperimentConfig":
        known = {"task", "modalities", "feature_sets", "pca_coefficients",
                 "classifiers", "outer_shuffles", "dev_fraction",
                 "inner_folds", "seed"}
        unknown = set(raw) - known
        if unknown:
            raise ValueError(f"unknown config keys: {sorted(unknown)}")
        config = cls(
            task=raw.get("task", "default"),
            modalities=tuple(raw.get("modalities", ("cough",))),
            feature_sets=tuple(raw.get("feature_sets", FEATURE_SETS)),
            pca_coefficients=tuple(raw.get("pca_coefficients", PCA_COEFFICIENTS)),
            classifier_grids=raw.get("classifiers", default_grids()),
            outer_shuffles=int(raw.get("outer_shuffles", 10)),
            dev_fraction=float(raw.get("dev_fraction", 0.8)),
            inner_folds=int(raw.get("inner_folds", 5)),
            seed=int(raw.get("seed", 0)),
        )
        config.validate()
        return config


def derive_seed(master: int, *tokens) -> int:
    """Stable per-stage seed: hash of the master seed and stage identity."""
    text = "respira|" + "|".join([str(master)] + [str(t) for t in tokens])
    digest = hashlib.sha256(text.encode()).digest()
    return int.from_bytes(digest[:8], "big") % (2 ** 63)


@dataclass(frozen=True)
class SampleUnit:
    """One classification instance: a single recording, or a cough+breath pair."""

    unit_id: str
    subject_id: str
    y: int  # -1 healthy, +1 covid
    modality: str
    sample_ids: tuple[tuple[str, str], ...]  # (modality, sample_id) pairs


def build_units(manifest: Manifest, modality: str) -> list[SampleUnit]:
    if modality != COMBINED_MODALITY:
        return [
            SampleUnit(
                unit_id=r.sample_id,
                subject_id=r.subject_id,
                y=1 if r.label == "covid" else -1,
                modality=modality,
                sample_ids=((modality, r.sample_id),),
            )
            for r in manifest.records if r.modality == modality
        ]
    by_session: dict[tuple[str, str], dict[str, object]] = {}
    for r in manifest.records:
        if r.modality not in ("cough", "breath"):
            continue
        slot = by_session.setdefault((r.subject_id, r.session_id), {})
        slot.setdefault(r.modality, r)  # first recording per modality wins
    units = []
    for (subject, session), slot in sorted(by_session.items()):
        if "cough" not in slot or "breath" not in slot:
            continue
        cough, breath = slot["cough"], slot["breath"]
        if cough.label != breath.label:
            raise ManifestError(
                f"conflicting labels for subject {subject} session {session}")
        units.append(SampleUnit(
            unit_id=f"{subject}_{session}_pair",
            subject_id=subject,
            y=1 if cough.label == "covid" else -1,
            modality=COMBINED_MODALITY,
            sample_ids=(("cough", cough.sample_id), ("breath", breath.sample_id)),
        ))
    return units


def _unit_label(unit) -> int:
    if hasattr(unit, "y"):
        return unit.y
    return 1 if unit.label == "covid" else -1


def _split_subject_ids(subjects: list[str], seed: int, dev_fraction: float) -> set[str]:
    if len(subjects) < 2:
        raise ProtocolError("need at least 2 subjects to split")
    rng = np.random.default_rng(seed)
    order = list(rng.permutation(sorted(subjects)))
    n_dev = int(np.floor(dev_fraction * len(subjects)))
    n_dev = min(max(n_dev, 1), len(subjects) - 1)
    return set(order[:n_dev])


def subject_split(samples: Sequence, seed: int, dev_fraction: float):
    """Partition whole subjects into dev/test; samples follow their subject."""
    for side in (1, -1):
        owners = {s.subject_id for s in samples if _unit_label(s) == side}
        if len(owners) < 2:
            raise ProtocolError("need at least 2 subjects per class to split")
    dev_subjects = _split_subject_ids(
        sorted({s.subject_id for s in samples}), seed, dev_fraction)
    dev = [s for s in samples if s.subject_id in dev_subjects]
    test = [s for s in samples if s.subject_id not in dev_subjects]
    return dev, test


def undersample_balance(samples: Sequence, seed: int) -> list:
    """Randomly drop majority-class samples until class counts match.

    Kept samples stay in their original order.
    """
    pos_idx = [i for i, s in enumerate(samples) if _unit_label(s) == 1]
    neg_idx = [i for i, s in enumerate(samples) if _unit_label(s) == -1]
    if not pos_idx or not neg_idx:
        raise ProtocolError("balancing needs both classes present")
    if len(pos_idx) == len(neg_idx):
        return list(samples)
    rng = np.random.default_rng(seed)
    majority, target = ((pos_idx, len(neg_idx)) if len(pos_idx) > len(neg_idx)
                        else (neg_idx, len(pos_idx)))
    minority = neg_idx if majority is pos_idx else pos_idx
    chosen = rng.choice(len(majority), size=target, replace=False)
    keep = set(minority) | {majority[i] for i in chosen}
    return [s for i, s in enumerate(samples) if i in keep]


def kfold_by_subject(samples: Sequence, k: int, seed: int):
    """Subjects shuffled and dealt into k near-equal folds; yields
    (train, validation) sample lists per fold."""
    subjects = sorted({s.subject_id for s in samples})
    if len(subjects) < k:
        raise ProtocolError(f"{len(subjects)} subjects cannot fill {k} folds")
    rng = np.random.default_rng(seed)
    order = list(rng.permutation(subjects))
    sizes = [len(subjects) // k + (1 if i < len(subjects) % k else 0) for i in range(k)]
    folds = []
    start = 0
    for size in sizes:
        fold_subjects = set(order[start:start + size])
        start += size
        validation = [s for s in samples if s.subject_id in fold_subjects]
        train = [s for s in samples if s.subject_id not in fold_subjects]
        folds.append((train, validation))
    return folds


@dataclass(frozen=True)
class Candidate:
    index: int
    modality: str
    feature_set: str
    pca: float
    kind: str
    params: tuple[tuple[str, object], ...]

    @property
    def key(self) -> str:
        settings = ",".join(f"{k}={v}" for k, v in self.params)
        return f"{self.modality}/{self.feature_set}/pca={self.pca}/{self.kind}({settings})"

    def params_dict(self) -> dict:
        return dict(self.params)

    def describe(self) -> dict:
        return {
            "modality": self.modality,
            "feature_set": self.feature_set,
            "pca": self.pca,
            "classifier": self.kind,
            "params": self.params_dict(),
        }


def _grid_combos(kind: str, grid: dict) -> list[tuple[tuple[str, object], ...]]:
    if kind == "svm":
        combos = []
        for kernel in grid["kernel"]:
            degrees = grid.get("degree", [3]) if kernel == "poly" else [None]
            for c in grid["C"]:
                for gamma in grid["gamma"]:
                    for degree in degrees:
                        combo = [("C", c), ("kernel", kernel), ("gamma", gamma)]
                        if degree is not None:
                            combo.append(("degree", degree))
                        combos.append(tuple(combo))
        return combos
    key_order = {
        "logreg": ("penalty", "C"),
        "random_forest": ("n_estimators", "min_samples_split", "max_depth", "criterion"),
        "adaboost": ("n_estimators", "learning_rate"),
    }[kind]
    keys = [k for k in key_order if k in grid]
    return [tuple(zip(keys, values))
            for values in itertools.product(*(grid[k] for k in keys))]


def enumerate_candidates(config: ExperimentConfig) -> list[Candidate]:
    """Full deterministic candidate list; order defines the final tie-break."""
    candidates = []
    for modality in config.modalities:
        for feature_set in config.feature_sets:
            for pca in config.pca_coefficients:
                for kind in CLASSIFIER_KINDS:
                    if kind not in config.classifier_grids:
                        continue
                    for params in _grid_combos(kind, config.classifier_grids[kind]):
                        candidates.append(Candidate(
                            index=len(candidates),
                            modality=modality,
                            feature_set=feature_set,
                            pca=pca,
                            kind=kind,
                            params=params,
                        ))
    return candidates


def make_classifier(kind: str, params: dict, seed: int):
    if kind == "svm":
        return SvmClassifier(random_state=seed, **params)
    if kind == "logreg":
        return LogisticRegressionClassifier(random_state=seed, **params)
    if kind == "random_forest":
        return RandomForestClassifier(random_state=seed, **params)
    if kind == "adaboost":
        return AdaBoostClassifier(random_state=seed, **params)
    raise ValueError(f"unknown classifier kind {kind!r}")


def unit_matrix(units: Sequence[SampleUnit], feature_set: str,
                store: FeatureStore) -> tuple[np.ndarray, np.ndarray]:
    """Fused design matrix and -1/+1 label vector for a list of units."""
    need_acoustic = feature_set != "F1"
    rows = []
    for unit in units:
        inputs = {m: store.features_for(sid, need_acoustic)
                  for m, sid in unit.sample_ids}
        rows.append(assemble_features(feature_set, unit.modality, inputs).values)
    X = np.vstack(rows)
    y = np.array([u.y for u in units], dtype=np.int64)
    expected = feature_set_width(feature_set) * (2 if units[0].modality == COMBINED_MODALITY else 1)
    if X.shape[1] != expected:
        raise AssertionError(f"fused width {X.shape[1]} != expected {expected}")
    return X, y


class _PcaBasis:
    """Centered SVD of a standardized training block, shared across the PCA
    coefficients of the grid. Slicing the first k components is identical to
    fitting VarianceTargetPCA at each coefficient separately."""

    def __init__(self, X: np.ndarray):
        X = check_matrix(X)
        if X.shape[0] < 2:
            raise DegenerateDataError("PCA basis needs at least 2 rows")
        self.mean = X.mean(axis=0)
        _, s, vt = np.linalg.svd(X - self.mean, full_matrices=False)
        total = float(np.sum(s ** 2))
        if total <= 0.0:
            raise DegenerateDataError("zero-variance training block")
        self.ratios = s ** 2 / total
        self.cumulative = np.cumsum(self.ratios)
        flip = np.sign(vt[np.arange(len(vt)), np.argmax(np.abs(vt), axis=1)])
        flip[flip == 0] = 1.0
        self.components = vt * flip[:, None]

    def components_for(self, target: float) -> int:
        k = 1 + int(np.searchsorted(self.cumulative, target - 1e-9))
        return min(k, len(self.ratios))

    def transform(self, X: np.ndarray, k: int) -> np.ndarray:
        return (X - self.mean) @ self.components[:k].T


class _FoldBlock:
    """Standardizer + PCA basis fitted on one training side, applied lazily."""

    def __init__(self, X_train: np.ndarray, y_train: np.ndarray,
                 X_eval: np.ndarray, y_eval: np.ndarray):
        self.standardizer = Standardizer().fit(X_train)
        z_train = self.standardizer.transform(X_train)
        self.basis = _PcaBasis(z_train)
        self.z_train = z_train
        self.z_eval = self.standardizer.transform(X_eval)
        self.y_train = y_train
        self.y_eval = y_eval

    def projected(self, target: float):
        k = self.basis.components_for(target)
        return (self.basis.transform(self.z_train, k),
                self.basis.transform(self.z_eval, k), k)


@dataclass(frozen=True)
class BestConfig:
    candidate: Candidate
    mean_auc: float
    mean_components: float


@dataclass
class FittedPipeline:
    standardizer: Standardizer
    basis: _PcaBasis
    n_components: int
    model: object

    def scores(self, X: np.ndarray) -> np.ndarray:
        z = self.basis.transform(self.standardizer.transform(X), self.n_components)
        return self.model.predict_score(z)

    def labels(self, X: np.ndarray) -> np.ndarray:
        z = self.basis.transform(self.standardizer.transform(X), self.n_components)
        return self.model.predict(z)


def _assert_subject_disjoint(left: Sequence, right: Sequence, stage: str) -> None:
    shared = {s.subject_id for s in left} & {s.subject_id for s in right}
    if shared:
        raise ProtocolError(f"subject leakage at {stage}: {sorted(shared)[:5]}")


def grid_search(dev_units_by_modality: dict[str, list[SampleUnit]],
                config: ExperimentConfig, store: FeatureStore,
                outer_index: int = 0) -> BestConfig:
    """Mean inner-fold AUC per candidate; ties prefer fewer PCA components,
    then earlier enumeration order."""
    master = config.seed
    candidates = enumerate_candidates(config)
    fold_blocks: dict[tuple[str, str, int], _FoldBlock] = {}
    folds_by_modality: dict[str, list] = {}
    for modality, dev_units in dev_units_by_modality.items():
        folds = kfold_by_subject(
            dev_units, config.inner_folds,
            derive_seed(master, "outer", outer_index, "folds", modality))
        usable = []
        for train, validation in folds:
            _assert_subject_disjoint(train, validation, f"inner fold ({modality})")
            train_labels = {u.y for u in train}
            val_labels = {u.y for u in validation}
            if len(train_labels) == 2 and len(val_labels) == 2:
                usable.append((train, validation))
        if not usable:
            raise ProtocolError(f"no usable inner folds for modality {modality}")
        folds_by_modality[modality] = usable

    best: BestConfig | None = None
    for candidate in candidates:
        folds = folds_by_modality[candidate.modality]
        fold_aucs = []
        fold_components = []
        failed = False
        for fold_idx, (train, validation) in enumerate(folds):
            block_key = (candidate.modality, candidate.feature_set, fold_idx)
            try:
                block = fold_blocks.get(block_key)
                if block is None:
                    X_tr, y_tr = unit_matrix(train, candidate.feature_set, store)
                    X_va, y_va = unit_matrix(validation, candidate.feature_set, store)
                    block = _FoldBlock(X_tr, y_tr, X_va, y_va)
                    fold_blocks[block_key] = block
                p_tr, p_va, k = block.projected(candidate.pca)
                seed = derive_seed(master, "outer", outer_index, "candidate",
                                   candidate.key, "fold", fold_idx)
                model = make_classifier(candidate.kind, candidate.params_dict(), seed)
                model.fit(p_tr, block.y_train)
                fold_aucs.append(auc(model.predict_score(p_va), block.y_eval))
                fold_components.append(k)
            except (SingleClassError, DegenerateDataError):
                failed = True
                break
        if failed or not fold_aucs:
            continue
        entry = BestConfig(candidate=candidate,
                           mean_auc=float(np.mean(fold_aucs)),
                           mean_components=float(np.mean(fold_components)))
        if best is None or _candidate_beats(entry, best):
            best = entry
    if best is None:
        raise ProtocolError("all grid candidates failed")
    return best


def _candidate_beats(entry: BestConfig, incumbent: BestConfig) -> bool:
    if entry.mean_auc != incumbent.mean_auc:
        return entry.mean_auc > incumbent.mean_auc
    if entry.mean_components != incumbent.mean_components:
        return entry.mean_components < incumbent.mean_components
    return entry.candidate.index < incumbent.candidate.index


def fit_pipeline(X: np.ndarray, y: np.ndarray, pca_target: float,
                 kind: str, params: dict, seed: int) -> FittedPipeline:
    standardizer = Standardizer().fit(X)
    z = standardizer.transform(X)
    basis = _PcaBasis(z)
    k = basis.components_for(pca_target)
    model = make_classifier(kind, params, seed).fit(basis.transform(z, k), y)
    return FittedPipeline(standardizer=standardizer, basis=basis,
                          n_components=k, model=model)


@dataclass
class SplitResult:
    index: int
    chosen: dict
    inner_auc: float
    auc: float
    precision: float
    recall: float
    precision_degenerate: bool
    n_dev: int
    n_test: int


@dataclass
class EvaluationReport:
    config: dict
    splits: list[SplitResult]
    aggregate: dict
    best: dict

    def to_dict(self) -> dict:
        return {
            "config": self.config,
            "splits": [asdict(s) for s in self.splits],
            "aggregate": self.aggregate,
            "best": self.best,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=2) + "\n"


def run_experiment(config: ExperimentConfig, manifest: Manifest,
                   store: FeatureStore) -> EvaluationReport:
    """The full nested protocol over config.outer_shuffles subject splits."""
    config.validate()
    master = config.seed
    units_by_modality = {m: build_units(manifest, m) for m in config.modalities}
    for modality, units in units_by_modality.items():
        if not units:
            raise ProtocolError(f"manifest has no samples for modality {modality}")
    all_subjects = sorted({u.subject_id
                           for units in units_by_modality.values() for u in units})
    splits: list[SplitResult] = []
    for i in range(config.outer_shuffles):
        # one subject partition per shuffle, shared by every modality
        dev_subjects = _split_subject_ids(
            all_subjects, derive_seed(master, "outer", i, "split"), config.dev_fraction)
        dev_by_modality: dict[str, list[SampleUnit]] = {}
        test_by_modality: dict[str, list[SampleUnit]] = {}
        for modality, units in units_by_modality.items():
            dev = [u for u in units if u.subject_id in dev_subjects]
            test = [u for u in units if u.subject_id not in dev_subjects]
            _assert_subject_disjoint(dev, test, f"outer split {i} ({modality})")
            dev = undersample_balance(
                dev, derive_seed(master, "outer", i, "balance", modality, "dev"))
            test = undersample_balance(
                test, derive_seed(master, "outer", i, "balance", modality, "test"))
            dev_by_modality[modality] = dev
            test_by_modality[modality] = test
        best = grid_search(dev_by_modality, config, store, outer_index=i)
        candidate = best.candidate
        dev_units = dev_by_modality[candidate.modality]
        test_units = test_by_modality[candidate.modality]
        X_dev, y_dev = unit_matrix(dev_units, candidate.feature_set, store)
        X_test, y_test = unit_matrix(test_units, candidate.feature_set, store)
        pipeline = fit_pipeline(
            X_dev, y_dev, candidate.pca, candidate.kind, candidate.params_dict(),
            derive_seed(master, "outer", i, "refit", candidate.key))
        scores = pipeline.scores(X_test)
        labels = pipeline.labels(X_test)
        splits.append(SplitResult(
            index=i,
            chosen=candidate.describe(),
            inner_auc=best.mean_auc,
            auc=auc(scores, y_test),
            precision=precision(labels, y_test),
            recall=recall(labels, y_test),
            precision_degenerate=precision_is_degenerate(labels),
            n_dev=len(dev_units),
            n_test=len(test_units),
        ))
    aggregate = {
        metric: {
            "mean": float(np.mean([getattr(s, metric) for s in splits])),
            "std": float(np.std([getattr(s, metric) for s in splits])),
        }
        for metric in ("auc", "precision", "recall")
    }
    return EvaluationReport(
        config=config.to_dict(),
        splits=splits,
        aggregate=aggregate,
        best=_most_chosen(splits),
    )


def _most_chosen(splits: list[SplitResult]) -> dict:
    """Modal (modality, feature set) across splits; first occurrence on ties."""
    counts: dict[tuple[str, str], int] = {}
    order: list[tuple[str, str]] = []
    for s in splits:
        key = (s.chosen["modality"], s.chosen["feature_set"])
        if key not in counts:
            order.append(key)
        counts[key] = counts.get(key, 0) + 1
    winner = max(order, key=lambda key: (counts[key], -order.index(key)))
    return {"modality": winner[0], "feature_set": winner[1]}


@dataclass
class FootprintRow:
    classifier: str
    pca: float
    bytes: int
    auc: float


def footprint_report(config: ExperimentConfig, manifest: Manifest,
                     store: FeatureStore, modality: str,
                     feature_set: str) -> list[FootprintRow]:
    """Size/AUC table: every classifier kind tuned at every PCA coefficient
    on a dedicated subject split of the given modality and feature set."""
    config.validate()
    master = config.seed
    units = build_units(manifest, modality)
    dev, test = subject_split(units, derive_seed(master, "footprint", "split"),
                              config.dev_fraction)
    _assert_subject_disjoint(dev, test, "footprint split")
    dev = undersample_balance(dev, derive_seed(master, "footprint", "balance", "dev"))
    test = undersample_balance(test, derive_seed(master, "footprint", "balance", "test"))
    rows: list[FootprintRow] = []
    for kind in CLASSIFIER_KINDS:
        if kind not in config.classifier_grids:
            continue
        for pca in config.pca_coefficients:
            sub_config = replace(
                config,
                modalities=(modality,),
                feature_sets=(feature_set,),
                pca_coefficients=(pca,),
                classifier_grids={kind: config.classifier_grids[kind]},
            )
            best = grid_search({modality: dev}, sub_config, store,
                               outer_index=0)
            candidate = best.candidate
            X_dev, y_dev = unit_matrix(dev, feature_set, store)
            X_test, y_test = unit_matrix(test, feature_set, store)
            pipeline = fit_pipeline(
                X_dev, y_dev, pca, kind, candidate.params_dict(),
                derive_seed(master, "footprint", "refit", candidate.key))
            rows.append(FootprintRow(
                classifier=kind,
                pca=pca,
                bytes=model_size(pipeline.model),
                auc=auc(pipeline.scores(X_test), y_test),
            ))
    return rows
