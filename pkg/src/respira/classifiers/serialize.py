"""Canonical binary container for fitted models.

Layout (all little-endian): magic "RSPM1", version byte, kind tag byte, a
reserved byte, u32 section count, then a section table of (u8 name length,
ascii name, u64 payload length) followed by the payloads in table order.
Scalar parameters travel in a type-tagged ascii section; numeric payloads are
raw arrays. Byte-exact round-trips make footprint numbers platform-free.
"""

from __future__ import annotations

import struct

import numpy as np

from ._tree import Tree
from .adaboost import AdaBoostClassifier
from .forest import RandomForestClassifier
from .logreg import LogisticRegressionClassifier
from .svm import SvmClassifier

MAGIC = b"RSPM1"
VERSION = 1
KIND_TAGS = {
    SvmClassifier: 1,
    LogisticRegressionClassifier: 2,
    RandomForestClassifier: 3,
    AdaBoostClassifier: 4,
}
KIND_NAMES = {1: "svm", 2: "logreg", 3: "random_forest", 4: "adaboost"}


class ModelFormatError(ValueError):
    """Corrupt or unsupported model container."""


def _encode_params(params: dict) -> bytes:
    lines = []
    for key in sorted(params):
        value = params[key]
        if isinstance(value, bool):
            raise TypeError("bool params unsupported")
        if isinstance(value, (int, np.integer)):
            tagged = f"i:{int(value)}"
        elif isinstance(value, (float, np.floating)):
            tagged = f"f:{float(value)!r}"
        elif isinstance(value, str):
            tagged = f"s:{value}"
        else:
            raise TypeError(f"unsupported param type for {key}: {type(value)}")
        lines.append(f"{key}={tagged}")
    return ("\n".join(lines) + "\n").encode()


def _decode_params(blob: bytes) -> dict:
    params = {}
    for line in blob.decode().splitlines():
        key, tagged = line.split("=", 1)
        tag, raw = tagged.split(":", 1)
        if tag == "i":
            params[key] = int(raw)
        elif tag == "f":
            params[key] = float(raw)
        elif tag == "s":
            params[key] = raw
        else:
            raise ModelFormatError(f"bad param tag {tag!r}")
    return params


def _pack(kind: int, sections: list[tuple[str, bytes]]) -> bytes:
    header = [MAGIC, struct.pack("<BBB", VERSION, kind, 0),
              struct.pack("<I", len(sections))]
    for name, payload in sections:
        encoded = name.encode()
        header.append(struct.pack("<B", len(encoded)))
        header.append(encoded)
        header.append(struct.pack("<Q", len(payload)))
    return b"".join(header) + b"".join(payload for _, payload in sections)


def _unpack(blob: bytes) -> tuple[int, dict[str, bytes]]:
    if blob[:5] != MAGIC:
        raise ModelFormatError("bad magic")
    version, kind, _ = struct.unpack_from("<BBB", blob, 5)
    if version != VERSION:
        raise ModelFormatError(f"unsupported version {version}")
    (n_sections,) = struct.unpack_from("<I", blob, 8)
    offset = 12
    table = []
    for _ in range(n_sections):
        (name_len,) = struct.unpack_from("<B", blob, offset)
        offset += 1
        name = blob[offset:offset + name_len].decode()
        offset += name_len
        (payload_len,) = struct.unpack_from("<Q", blob, offset)
        offset += 8
        table.append((name, payload_len))
    sections = {}
    for name, payload_len in table:
        sections[name] = blob[offset:offset + payload_len]
        if len(sections[name]) != payload_len:
            raise ModelFormatError(f"truncated section {name!r}")
        offset += payload_len
    if offset != len(blob):
        raise ModelFormatError("trailing bytes after sections")
    return kind, sections


def _array_bytes(a: np.ndarray, dtype: str) -> bytes:
    return np.ascontiguousarray(a, dtype=dtype).tobytes()


def _tree_sections(trees: list[Tree]) -> list[tuple[str, bytes]]:
    sizes = np.array([t.n_nodes for t in trees], dtype="<i4")
    return [
        ("tree_sizes", sizes.tobytes()),
        ("node_feature", b"".join(_array_bytes(t.feature, "<i4") for t in trees)),
        ("node_threshold", b"".join(_array_bytes(t.threshold, "<f8") for t in trees)),
        ("node_left", b"".join(_array_bytes(t.left, "<i4") for t in trees)),
        ("node_right", b"".join(_array_bytes(t.right, "<i4") for t in trees)),
        ("node_label", b"".join(_array_bytes(t.leaf_label, "<i1") for t in trees)),
    ]


def _trees_from_sections(sections: dict[str, bytes]) -> list[Tree]:
    sizes = np.frombuffer(sections["tree_sizes"], dtype="<i4")
    feature = np.frombuffer(sections["node_feature"], dtype="<i4")
    threshold = np.frombuffer(sections["node_threshold"], dtype="<f8")
    left = np.frombuffer(sections["node_left"], dtype="<i4")
    right = np.frombuffer(sections["node_right"], dtype="<i4")
    label = np.frombuffer(sections["node_label"], dtype="<i1")
    trees = []
    start = 0
    for size in sizes:
        stop = start + int(size)
        trees.append(Tree(
            feature=feature[start:stop].astype(np.int32),
            threshold=threshold[start:stop].astype(np.float64),
            left=left[start:stop].astype(np.int32),
            right=right[start:stop].astype(np.int32),
            leaf_label=label[start:stop].astype(np.int8),
        ))
        start = stop
    return trees


def serialize_model(model) -> bytes:
    kind = KIND_TAGS.get(type(model))
    if kind is None:
        raise TypeError(f"cannot serialize {type(model).__name__}")
    if kind == 1:
        params = dict(model.get_params(), n_features=model.n_features_,
                      n_support=len(model.dual_coef_))
        sections = [
            ("params", _encode_params(params)),
            ("support_vectors", _array_bytes(model.support_vectors_, "<f8")),
            ("dual_coef", _array_bytes(model.dual_coef_, "<f8")),
            ("intercept", struct.pack("<d", model.intercept_)),
        ]
    elif kind == 2:
        params = dict(model.get_params(), n_features=model.n_features_)
        sections = [
            ("params", _encode_params(params)),
            ("coef", _array_bytes(model.coef_, "<f8")),
            ("intercept", struct.pack("<d", model.intercept_)),
        ]
    elif kind == 3:
        params = dict(model.get_params(), n_features=model.n_features_)
        sections = [("params", _encode_params(params))] + _tree_sections(model.trees_)
    else:
        params = dict(model.get_params(), n_features=model.n_features_)
        sections = [
            ("params", _encode_params(params)),
            ("stump_weights", _array_bytes(np.array(model.stump_weights_), "<f8")),
            ("stump_errors", _array_bytes(np.array(model.stump_errors_), "<f8")),
        ] + _tree_sections(model.stumps_)
    return _pack(kind, sections)


def deserialize_model(blob: bytes):
    kind, sections = _unpack(blob)
    if "params" not in sections:
        raise ModelFormatError("missing params section")
    params = _decode_params(sections["params"])
    n_features = params.pop("n_features")
    if kind == 1:
        n_support = params.pop("n_support")
        model = SvmClassifier(**params)
        sv = np.frombuffer(sections["support_vectors"], dtype="<f8")
        model.support_vectors_ = sv.reshape(n_support, n_features).astype(np.float64)
        model.dual_coef_ = np.frombuffer(sections["dual_coef"], dtype="<f8").astype(np.float64)
        (model.intercept_,) = struct.unpack("<d", sections["intercept"])
    elif kind == 2:
        model = LogisticRegressionClassifier(**params)
        model.coef_ = np.frombuffer(sections["coef"], dtype="<f8").astype(np.float64)
        (model.intercept_,) = struct.unpack("<d", sections["intercept"])
    elif kind == 3:
        model = RandomForestClassifier(**params)
        model.trees_ = _trees_from_sections(sections)
    elif kind == 4:
        model = AdaBoostClassifier(**params)
        model.stumps_ = _trees_from_sections(sections)
        model.stump_weights_ = np.frombuffer(
            sections["stump_weights"], dtype="<f8").tolist()
        model.stump_errors_ = np.frombuffer(
            sections["stump_errors"], dtype="<f8").tolist()
    else:
        raise ModelFormatError(f"unknown kind tag {kind}")
    model.n_features_ = n_features
    return model


def model_size(model) -> int:
    """Serialized footprint in bytes."""
    return len(serialize_model(model))


def model_kind(model) -> str:
    return KIND_NAMES[KIND_TAGS[type(model)]]
