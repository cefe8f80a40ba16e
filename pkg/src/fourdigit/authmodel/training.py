"""Cross-entropy training of the hybrid verifier by full backpropagation
through time, with plain gradient descent and global-norm clipping.

Embedding gradients are kept sparse (row index -> vector): only rows touched
by a sequence contribute, but they still count toward the clipping norm.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..errors import EmptyCorpus, SingleClassCorpus
from ..message import Message, segment
from ..stylometry import (
    DEFAULT_LISTS,
    FeatureLists,
    FeatureScaler,
    build_manifest,
    extract_features,
    manifest_hash,
    normalize_words,
    standardize,
)
from .network import LABELS, ModelParams, Prediction, forward, init_params, sigmoid, softmax
from .vocab import EncodedSequence, Vocabulary, build_vocabulary, encode


@dataclass(frozen=True)
class TrainConfig:
    epochs: int = 15
    learning_rate: float = 0.05
    hidden_size: int = 64
    max_len: int = 200
    seed: int = 0
    min_token_freq: int = 2
    vocab_cap: int = 20_000
    clip_norm: float = 5.0

    def as_dict(self) -> dict:
        return {
            "epochs": self.epochs,
            "learning_rate": self.learning_rate,
            "hidden_size": self.hidden_size,
            "max_len": self.max_len,
            "seed": self.seed,
            "min_token_freq": self.min_token_freq,
            "vocab_cap": self.vocab_cap,
            "clip_norm": self.clip_norm,
        }


@dataclass(frozen=True)
class EpochMetrics:
    epoch: int
    loss: float
    accuracy: float


@dataclass
class Gradients:
    dense: dict[str, np.ndarray]
    embedding: dict[int, np.ndarray] = field(default_factory=dict)

    def global_norm(self) -> float:
        total = sum(float(np.sum(g * g)) for g in self.dense.values())
        total += sum(float(np.sum(g * g)) for g in self.embedding.values())
        return float(np.sqrt(total))

    def scale(self, factor: float) -> None:
        for g in self.dense.values():
            g *= factor
        for g in self.embedding.values():
            g *= factor


@dataclass
class _StepCache:
    index: int
    x: np.ndarray
    h_prev: np.ndarray
    c_prev: np.ndarray
    i: np.ndarray
    f: np.ndarray
    o: np.ndarray
    g: np.ndarray
    tanh_c: np.ndarray


def example_loss_and_grads(
    p: ModelParams,
    seq: EncodedSequence,
    styl: np.ndarray,
    label_index: int,
) -> tuple[float, Gradients]:
    """Loss and exact gradients for one example."""
    hidden = p.hidden_size
    h_prev = np.zeros(hidden)
    c_prev = np.zeros(hidden)
    steps: list[_StepCache] = []

    for index in seq.indices:
        x = p.embedding[index]
        i = sigmoid(p.w_xi @ x + p.w_hi @ h_prev + p.b_i)
        f = sigmoid(p.w_xf @ x + p.w_hf @ h_prev + p.b_f)
        o = sigmoid(p.w_xo @ x + p.w_ho @ h_prev + p.b_o)
        g = np.tanh(p.w_xg @ x + p.w_hg @ h_prev + p.b_g)
        c = f * c_prev + i * g
        tanh_c = np.tanh(c)
        steps.append(_StepCache(index, x, h_prev, c_prev, i, f, o, g, tanh_c))
        h_prev = o * tanh_c
        c_prev = c

    combined = np.concatenate([h_prev, styl])
    logits = p.w_out.T @ combined + p.b_out
    probs = softmax(logits)
    loss = -float(np.log(max(probs[label_index], 1e-300)))

    dlogits = probs.copy()
    dlogits[label_index] -= 1.0

    grads = Gradients(dense={
        name: np.zeros_like(getattr(p, name))
        for name in ModelParams.TENSOR_FIELDS
        if name != "embedding"
    })
    grads.dense["w_out"] += np.outer(combined, dlogits)
    grads.dense["b_out"] += dlogits

    dcombined = p.w_out @ dlogits
    dh = dcombined[:hidden]
    dc = np.zeros(hidden)

    for step in reversed(steps):
        do = dh * step.tanh_c
        dc = dc + dh * step.o * (1.0 - step.tanh_c ** 2)
        da_o = do * step.o * (1.0 - step.o)
        da_f = (dc * step.c_prev) * step.f * (1.0 - step.f)
        da_i = (dc * step.g) * step.i * (1.0 - step.i)
        da_g = (dc * step.i) * (1.0 - step.g ** 2)

        grads.dense["w_xi"] += np.outer(da_i, step.x)
        grads.dense["w_xf"] += np.outer(da_f, step.x)
        grads.dense["w_xo"] += np.outer(da_o, step.x)
        grads.dense["w_xg"] += np.outer(da_g, step.x)
        grads.dense["w_hi"] += np.outer(da_i, step.h_prev)
        grads.dense["w_hf"] += np.outer(da_f, step.h_prev)
        grads.dense["w_ho"] += np.outer(da_o, step.h_prev)
        grads.dense["w_hg"] += np.outer(da_g, step.h_prev)
        grads.dense["b_i"] += da_i
        grads.dense["b_f"] += da_f
        grads.dense["b_o"] += da_o
        grads.dense["b_g"] += da_g

        dx = p.w_xi.T @ da_i + p.w_xf.T @ da_f + p.w_xo.T @ da_o + p.w_xg.T @ da_g
        if step.index in grads.embedding:
            grads.embedding[step.index] += dx
        else:
            grads.embedding[step.index] = dx

        dh = p.w_hi.T @ da_i + p.w_hf.T @ da_f + p.w_ho.T @ da_o + p.w_hg.T @ da_g
        dc = dc * step.f

    return loss, grads


def _apply_update(p: ModelParams, grads: Gradients, learning_rate: float, clip_norm: float) -> None:
    norm = grads.global_norm()
    if clip_norm > 0 and norm > clip_norm:
        grads.scale(clip_norm / norm)
    for name, grad in grads.dense.items():
        tensor = getattr(p, name)
        tensor -= learning_rate * grad
    for index, grad in grads.embedding.items():
        p.embedding[index] -= learning_rate * grad


def message_words(msg: Message) -> list[str]:
    return normalize_words(segment(msg.body).tokens)


@dataclass
class TrainedModel:
    """Parameters plus everything needed to score a raw message."""

    params: ModelParams
    vocab: Vocabulary
    scaler: FeatureScaler
    config: TrainConfig
    feature_manifest_hash: str
    lists: FeatureLists = DEFAULT_LISTS

    def encode_message(self, msg: Message) -> tuple[EncodedSequence, np.ndarray]:
        seg = segment(msg.body)
        seq = encode(normalize_words(seg.tokens), self.vocab, self.config.max_len)
        styl = self.scaler.apply(extract_features(seg, msg.body, self.lists))
        return seq, styl

    def predict(self, msg: Message) -> Prediction:
        seq, styl = self.encode_message(msg)
        return forward(seq, styl, self.params)


def _label_index(label: str) -> int:
    try:
        return LABELS.index(label)
    except ValueError:
        raise ValueError(f"unknown label {label!r}, expected one of {LABELS}") from None


def train(
    corpus: list[tuple[Message, str]],
    config: TrainConfig = TrainConfig(),
    lists: FeatureLists = DEFAULT_LISTS,
) -> tuple[TrainedModel, list[EpochMetrics]]:
    """Fit the verifier on labeled messages; deterministic given config.seed."""
    if not corpus:
        raise EmptyCorpus("training corpus is empty")
    labels = [_label_index(label) for _, label in corpus]
    if len(set(labels)) < 2:
        raise SingleClassCorpus("training corpus needs both classes")

    word_lists = [message_words(msg) for msg, _ in corpus]
    vocab = build_vocabulary(word_lists, config.min_token_freq, config.vocab_cap)
    sequences = [encode(words, vocab, config.max_len) for words in word_lists]

    vectors = [
        extract_features(segment(msg.body), msg.body, lists) for msg, _ in corpus
    ]
    styl_arrays, scaler = standardize(vectors)

    params = init_params(vocab.size, config.hidden_size, config.seed)
    shuffle_rng = np.random.default_rng([config.seed, 1])

    history: list[EpochMetrics] = []
    n = len(corpus)
    for epoch in range(1, config.epochs + 1):
        for k in shuffle_rng.permutation(n):
            loss, grads = example_loss_and_grads(
                params, sequences[k], styl_arrays[k], labels[k]
            )
            _apply_update(params, grads, config.learning_rate, config.clip_norm)

        epoch_loss = 0.0
        correct = 0
        for k in range(n):
            pred = forward(sequences[k], styl_arrays[k], params)
            epoch_loss -= float(np.log(max(pred.probabilities[labels[k]], 1e-300)))
            if pred.label == LABELS[labels[k]]:
                correct += 1
        history.append(EpochMetrics(epoch=epoch, loss=epoch_loss / n, accuracy=correct / n))

    model = TrainedModel(
        params=params,
        vocab=vocab,
        scaler=scaler,
        config=config,
        feature_manifest_hash=manifest_hash(build_manifest(lists.function_words)),
        lists=lists,
    )
    return model, history


def evaluate(model: TrainedModel, corpus: list[tuple[Message, str]]) -> tuple[float, float]:
    """Mean cross-entropy and accuracy of a trained model on labeled messages."""
    if not corpus:
        raise EmptyCorpus("evaluation corpus is empty")
    total_loss = 0.0
    correct = 0
    for msg, label in corpus:
        idx = _label_index(label)
        pred = model.predict(msg)
        total_loss -= float(np.log(max(pred.probabilities[idx], 1e-300)))
        if pred.label == label:
            correct += 1
    return total_loss / len(corpus), correct / len(corpus)
