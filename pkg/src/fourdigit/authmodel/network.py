"""LSTM forward pass over token embeddings, read out together with the
standardized stylometric vector through a two-class softmax.

Gate equations are the standard formulation:
    i = sigmoid(Wxi x + Whi h + bi)      f = sigmoid(Wxf x + Whf h + bf)
    o = sigmoid(Wxo x + Who h + bo)      g = tanh(Wxg x + Whg h + bg)
    c' = f*c + i*g                       h' = o * tanh(c')

Only the final hidden state feeds the classifier: one label per message.
All math is float64.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import ShapeMismatch
from ..stylometry import FEATURE_COUNT
from .vocab import EncodedSequence

EMBEDDING_DIM = 100
NUM_CLASSES = 2
LABELS = ("legitimate", "impersonated")

GATES = ("i", "f", "o", "g")


@dataclass
class ModelParams:
    """All learned tensors plus the dimensions they imply."""

    embedding: np.ndarray          # (vocab_size, EMBEDDING_DIM)
    w_xi: np.ndarray               # (hidden, EMBEDDING_DIM) input->gate
    w_xf: np.ndarray
    w_xo: np.ndarray
    w_xg: np.ndarray
    w_hi: np.ndarray               # (hidden, hidden) hidden->gate
    w_hf: np.ndarray
    w_ho: np.ndarray
    w_hg: np.ndarray
    b_i: np.ndarray                # (hidden,)
    b_f: np.ndarray
    b_o: np.ndarray
    b_g: np.ndarray
    w_out: np.ndarray              # (hidden + FEATURE_COUNT, NUM_CLASSES)
    b_out: np.ndarray              # (NUM_CLASSES,)
    hidden_size: int
    seed: int

    TENSOR_FIELDS = (
        "embedding",
        "w_xi", "w_xf", "w_xo", "w_xg",
        "w_hi", "w_hf", "w_ho", "w_hg",
        "b_i", "b_f", "b_o", "b_g",
        "w_out", "b_out",
    )

    @property
    def vocab_size(self) -> int:
        return self.embedding.shape[0]

    def tensors(self) -> dict[str, np.ndarray]:
        return {name: getattr(self, name) for name in self.TENSOR_FIELDS}


@dataclass
class LstmState:
    h: np.ndarray
    c: np.ndarray


@dataclass(frozen=True)
class Prediction:
    probabilities: tuple[float, float]
    label: str

    @property
    def p_legitimate(self) -> float:
        return self.probabilities[0]


def zero_state(hidden_size: int) -> LstmState:
    return LstmState(h=np.zeros(hidden_size), c=np.zeros(hidden_size))


def init_params(vocab_size: int, hidden_size: int, seed: int) -> ModelParams:
    """Uniform(-0.08, 0.08) weights, zero biases except forget-gate bias +1."""
    rng = np.random.default_rng(seed)

    def uniform(*shape):
        return rng.uniform(-0.08, 0.08, size=shape)

    params = ModelParams(
        embedding=uniform(vocab_size, EMBEDDING_DIM),
        w_xi=uniform(hidden_size, EMBEDDING_DIM),
        w_xf=uniform(hidden_size, EMBEDDING_DIM),
        w_xo=uniform(hidden_size, EMBEDDING_DIM),
        w_xg=uniform(hidden_size, EMBEDDING_DIM),
        w_hi=uniform(hidden_size, hidden_size),
        w_hf=uniform(hidden_size, hidden_size),
        w_ho=uniform(hidden_size, hidden_size),
        w_hg=uniform(hidden_size, hidden_size),
        b_i=np.zeros(hidden_size),
        b_f=np.ones(hidden_size),
        b_o=np.zeros(hidden_size),
        b_g=np.zeros(hidden_size),
        w_out=uniform(hidden_size + FEATURE_COUNT, NUM_CLASSES),
        b_out=np.zeros(NUM_CLASSES),
        hidden_size=hidden_size,
        seed=seed,
    )
    return params


def sigmoid(x: np.ndarray) -> np.ndarray:
    out = np.empty_like(x, dtype=np.float64)
    positive = x >= 0
    out[positive] = 1.0 / (1.0 + np.exp(-x[positive]))
    exp_x = np.exp(x[~positive])
    out[~positive] = exp_x / (1.0 + exp_x)
    return out


def softmax(logits: np.ndarray) -> np.ndarray:
    shifted = logits - logits.max()
    # floor keeps every probability strictly positive for finite logits
    exp = np.exp(np.maximum(shifted, -700.0))
    return exp / exp.sum()


def lstm_step(x_emb: np.ndarray, state: LstmState, p: ModelParams) -> LstmState:
    """One recurrence step; returns the next hidden/cell state."""
    if x_emb.shape != (p.w_xi.shape[1],):
        raise ShapeMismatch(f"input shape {x_emb.shape}, expected ({p.w_xi.shape[1]},)")
    if state.h.shape != (p.hidden_size,) or state.c.shape != (p.hidden_size,):
        raise ShapeMismatch("state does not match hidden_size")

    i = sigmoid(p.w_xi @ x_emb + p.w_hi @ state.h + p.b_i)
    f = sigmoid(p.w_xf @ x_emb + p.w_hf @ state.h + p.b_f)
    o = sigmoid(p.w_xo @ x_emb + p.w_ho @ state.h + p.b_o)
    g = np.tanh(p.w_xg @ x_emb + p.w_hg @ state.h + p.b_g)
    c = f * state.c + i * g
    h = o * np.tanh(c)
    return LstmState(h=h, c=c)


def final_hidden_state(seq: EncodedSequence, p: ModelParams) -> np.ndarray:
    """Run the recurrence over the embedded sequence; empty input stays at zero."""
    state = zero_state(p.hidden_size)
    for index in seq.indices:
        state = lstm_step(p.embedding[index], state, p)
    return state.h


def forward(seq: EncodedSequence, styl: np.ndarray, p: ModelParams) -> Prediction:
    """Classify one message from its token sequence and standardized features."""
    styl = np.asarray(styl, dtype=np.float64)
    if styl.shape != (FEATURE_COUNT,):
        raise ShapeMismatch(f"stylometric vector shape {styl.shape}, expected ({FEATURE_COUNT},)")
    if p.w_out.shape != (p.hidden_size + FEATURE_COUNT, NUM_CLASSES):
        raise ShapeMismatch("output layer shape inconsistent with hidden_size")

    h_final = final_hidden_state(seq, p)
    combined = np.concatenate([h_final, styl])
    logits = p.w_out.T @ combined + p.b_out
    probs = softmax(logits)
    label = LABELS[int(np.argmax(probs))]
    return Prediction(probabilities=(float(probs[0]), float(probs[1])), label=label)
