"""Hybrid authorship verifier: token LSTM + stylometric features, plus the
three-signal fusion verdict used by the send gate."""

from .fusion import (
    DECISION_ALLOW,
    DECISION_DANGEROUS,
    REASON_CODE,
    REASON_EMAIL_ID,
    REASON_STYLOMETRY,
    Verdict,
    fuse,
)
from .network import (
    EMBEDDING_DIM,
    LABELS,
    LstmState,
    ModelParams,
    Prediction,
    forward,
    init_params,
    lstm_step,
    softmax,
)
from .serialize import load_model, save_model
from .training import EpochMetrics, TrainConfig, TrainedModel, evaluate, train
from .vocab import EncodedSequence, Vocabulary, build_vocabulary, encode

__all__ = [
    "DECISION_ALLOW",
    "DECISION_DANGEROUS",
    "EMBEDDING_DIM",
    "EncodedSequence",
    "EpochMetrics",
    "LABELS",
    "LstmState",
    "ModelParams",
    "Prediction",
    "REASON_CODE",
    "REASON_EMAIL_ID",
    "REASON_STYLOMETRY",
    "TrainConfig",
    "TrainedModel",
    "Verdict",
    "Vocabulary",
    "build_vocabulary",
    "encode",
    "evaluate",
    "forward",
    "fuse",
    "init_params",
    "load_model",
    "lstm_step",
    "save_model",
    "softmax",
    "train",
]
