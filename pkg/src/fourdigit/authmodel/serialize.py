"""Versioned JSON model files.

Layout: {version, checksum, feature_manifest_hash, vocab, dims, tensors,
seed, training_config}.  Tensors are stored flat with explicit shapes; the
checksum is a CRC-32 over the canonical serialization of everything else.
Loading refuses files whose manifest hash does not match the active feature
manifest, so a model can never be applied to a differently-ordered feature
vector.
"""

from __future__ import annotations

import json
import zlib
from pathlib import Path

import numpy as np

from ..errors import CorruptRecord, ManifestMismatch, ShapeMismatch, VersionMismatch
from ..stylometry import (
    DEFAULT_LISTS,
    FEATURE_COUNT,
    FeatureLists,
    FeatureScaler,
    build_manifest,
    manifest_hash,
)
from .network import EMBEDDING_DIM, ModelParams
from .training import TrainConfig, TrainedModel
from .vocab import Vocabulary

MODEL_FILE_VERSION = 1


def _tensor_doc(array: np.ndarray) -> dict:
    return {"shape": list(array.shape), "data": array.ravel().tolist()}


def _tensor_from_doc(doc: dict) -> np.ndarray:
    return np.asarray(doc["data"], dtype=np.float64).reshape(doc["shape"])


def _checksum(doc: dict) -> str:
    body = {key: value for key, value in doc.items() if key != "checksum"}
    canonical = json.dumps(body, sort_keys=True, separators=(",", ":"))
    return format(zlib.crc32(canonical.encode("utf-8")), "08x")


def save_model(model: TrainedModel, path: str | Path) -> None:
    tensors = {name: _tensor_doc(arr) for name, arr in model.params.tensors().items()}
    tensors["styl_mean"] = _tensor_doc(model.scaler.mean)
    tensors["styl_std"] = _tensor_doc(model.scaler.std)
    doc = {
        "version": MODEL_FILE_VERSION,
        "feature_manifest_hash": model.feature_manifest_hash,
        "vocab": list(model.vocab.tokens),
        "dims": {
            "embed": EMBEDDING_DIM,
            "hidden": model.params.hidden_size,
            "styl": FEATURE_COUNT,
        },
        "tensors": tensors,
        "seed": model.params.seed,
        "training_config": model.config.as_dict(),
    }
    doc["checksum"] = _checksum(doc)
    Path(path).write_text(json.dumps(doc), encoding="utf-8")


def load_model(path: str | Path, lists: FeatureLists = DEFAULT_LISTS) -> TrainedModel:
    doc = json.loads(Path(path).read_text(encoding="utf-8"))
    if doc.get("version") != MODEL_FILE_VERSION:
        raise VersionMismatch(f"model file version {doc.get('version')!r}, expected {MODEL_FILE_VERSION}")
    if _checksum(doc) != doc.get("checksum"):
        raise CorruptRecord(f"model file {path} failed checksum verification")

    active_hash = manifest_hash(build_manifest(lists.function_words))
    if doc.get("feature_manifest_hash") != active_hash:
        raise ManifestMismatch(
            "model was trained against a different stylometric feature manifest"
        )

    dims = doc["dims"]
    if dims["embed"] != EMBEDDING_DIM or dims["styl"] != FEATURE_COUNT:
        raise ShapeMismatch(f"unsupported dims {dims}")

    hidden = int(dims["hidden"])
    vocab = Vocabulary(tokens=tuple(doc["vocab"]))
    tensors = {name: _tensor_from_doc(t) for name, t in doc["tensors"].items()}

    expected_shapes = {
        "embedding": (vocab.size, EMBEDDING_DIM),
        "w_xi": (hidden, EMBEDDING_DIM), "w_xf": (hidden, EMBEDDING_DIM),
        "w_xo": (hidden, EMBEDDING_DIM), "w_xg": (hidden, EMBEDDING_DIM),
        "w_hi": (hidden, hidden), "w_hf": (hidden, hidden),
        "w_ho": (hidden, hidden), "w_hg": (hidden, hidden),
        "b_i": (hidden,), "b_f": (hidden,), "b_o": (hidden,), "b_g": (hidden,),
        "w_out": (hidden + FEATURE_COUNT, 2), "b_out": (2,),
        "styl_mean": (FEATURE_COUNT,), "styl_std": (FEATURE_COUNT,),
    }
    for name, shape in expected_shapes.items():
        if name not in tensors:
            raise ShapeMismatch(f"missing tensor {name!r}")
        if tensors[name].shape != shape:
            raise ShapeMismatch(
                f"tensor {name!r} has shape {tensors[name].shape}, expected {shape}"
            )
        if not np.all(np.isfinite(tensors[name])):
            raise CorruptRecord(f"tensor {name!r} contains non-finite values")

    params = ModelParams(
        embedding=tensors["embedding"],
        w_xi=tensors["w_xi"], w_xf=tensors["w_xf"],
        w_xo=tensors["w_xo"], w_xg=tensors["w_xg"],
        w_hi=tensors["w_hi"], w_hf=tensors["w_hf"],
        w_ho=tensors["w_ho"], w_hg=tensors["w_hg"],
        b_i=tensors["b_i"], b_f=tensors["b_f"],
        b_o=tensors["b_o"], b_g=tensors["b_g"],
        w_out=tensors["w_out"], b_out=tensors["b_out"],
        hidden_size=hidden,
        seed=int(doc["seed"]),
    )
    scaler = FeatureScaler(mean=tensors["styl_mean"], std=tensors["styl_std"])
    config = TrainConfig(**doc["training_config"])
    return TrainedModel(
        params=params,
        vocab=vocab,
        scaler=scaler,
        config=config,
        feature_manifest_hash=doc["feature_manifest_hash"],
        lists=lists,
    )
