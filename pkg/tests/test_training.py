import numpy as np
import pytest

from fourdigit.authmodel import (
    TrainConfig,
    evaluate,
    init_params,
    load_model,
    save_model,
    train,
)
from fourdigit.authmodel.training import example_loss_and_grads
from fourdigit.authmodel.vocab import EncodedSequence
from fourdigit.errors import (
    CorruptRecord,
    EmptyCorpus,
    ManifestMismatch,
    ShapeMismatch,
    SingleClassCorpus,
    VersionMismatch,
)
from fourdigit.message import Message
from fourdigit.stylometry import FeatureLists
from fourdigit.testkit import make_two_style_corpus

GRADCHECK_EPS = 1e-5
GRADCHECK_TOL = 1e-4
# guards the relative metric where finite differences bottom out in noise
GRADCHECK_FLOOR = 1e-6


def tiny_corpus(n=8):
    train_set, _ = make_two_style_corpus(n_train=n, n_test=0, seed=3)
    return train_set


def relative_error(analytic: float, numeric: float) -> float:
    return abs(analytic - numeric) / max(abs(analytic), abs(numeric), GRADCHECK_FLOOR)


def dense_embedding_grad(params, grads):
    dense = np.zeros_like(params.embedding)
    for index, vec in grads.embedding.items():
        dense[index] += vec
    return dense


def _refresh_checksum(doc):
    # recomputed here so tampering tests hit the intended validation layer
    import json as json_mod
    import zlib
    body = {key: value for key, value in doc.items() if key != "checksum"}
    canonical = json_mod.dumps(body, sort_keys=True, separators=(",", ":"))
    return format(zlib.crc32(canonical.encode("utf-8")), "08x")


class TestGradients:
    def test_bptt_matches_central_differences(self):
        rng = np.random.default_rng(42)
        params = init_params(vocab_size=8, hidden_size=4, seed=1)
        seq = EncodedSequence(indices=(2, 5, 1, 3, 7))
        styl = rng.normal(size=97)
        label = 1

        _, grads = example_loss_and_grads(params, seq, styl, label)

        def loss_at():
            value, _ = example_loss_and_grads(params, seq, styl, label)
            return value

        worst = 0.0
        for name in params.TENSOR_FIELDS:
            tensor = getattr(params, name)
            analytic = (
                dense_embedding_grad(params, grads)
                if name == "embedding"
                else grads.dense[name]
            )
            it = np.nditer(tensor, flags=["multi_index"])
            while not it.finished:
                idx = it.multi_index
                original = tensor[idx]
                tensor[idx] = original + GRADCHECK_EPS
                loss_plus = loss_at()
                tensor[idx] = original - GRADCHECK_EPS
                loss_minus = loss_at()
                tensor[idx] = original
                numeric = (loss_plus - loss_minus) / (2 * GRADCHECK_EPS)
                worst = max(worst, relative_error(analytic[idx], numeric))
                it.iternext()
        assert worst < GRADCHECK_TOL

    def test_empty_sequence_still_differentiable(self):
        params = init_params(vocab_size=4, hidden_size=3, seed=2)
        styl = np.linspace(-1, 1, 97)
        loss, grads = example_loss_and_grads(params, EncodedSequence(indices=()), styl, 0)
        assert np.isfinite(loss)
        assert not grads.embedding
        assert np.any(grads.dense["w_out"] != 0)


class TestTrain:
    def test_zero_learning_rate_is_a_no_op(self):
        corpus = tiny_corpus()
        config = TrainConfig(epochs=1, learning_rate=0.0, hidden_size=4, seed=5)
        model, history = train(corpus, config)
        fresh = init_params(model.vocab.size, 4, seed=5)
        for name in fresh.TENSOR_FIELDS:
            assert np.array_equal(getattr(model.params, name), getattr(fresh, name)), name
        assert len(history) == 1

    def test_seed_reproducibility(self):
        corpus = tiny_corpus()
        config = TrainConfig(epochs=2, hidden_size=4, seed=9)
        model_a, history_a = train(corpus, config)
        model_b, history_b = train(corpus, config)
        for name in model_a.params.TENSOR_FIELDS:
            assert np.array_equal(getattr(model_a.params, name), getattr(model_b.params, name))
        assert history_a == history_b

    def test_epoch_indices_monotonic(self):
        _, history = train(tiny_corpus(), TrainConfig(epochs=3, hidden_size=4, seed=1))
        assert [m.epoch for m in history] == [1, 2, 3]

    def test_empty_corpus_rejected(self):
        with pytest.raises(EmptyCorpus):
            train([], TrainConfig())

    def test_single_class_rejected(self):
        msg = Message(sender="a@b.c", recipients=("d@e.f",), subject="", body="hi there.")
        with pytest.raises(SingleClassCorpus):
            train([(msg, "legitimate")] * 4, TrainConfig())

    def test_unknown_label_rejected(self):
        msg = Message(sender="a@b.c", recipients=("d@e.f",), subject="", body="hi.")
        with pytest.raises(ValueError):
            train([(msg, "legitimate"), (msg, "spam")], TrainConfig())

    def test_small_run_learns_the_two_styles(self):
        train_set, test_set = make_two_style_corpus(n_train=60, n_test=20, seed=11)
        config = TrainConfig(epochs=4, hidden_size=8, seed=0)
        model, history = train(train_set, config)
        _, accuracy = evaluate(model, test_set)
        assert accuracy >= 0.9
        assert history[-1].loss < history[0].loss


class TestSerialization:
    def _small_model(self):
        config = TrainConfig(epochs=1, hidden_size=4, seed=13)
        model, _ = train(tiny_corpus(), config)
        return model

    def test_round_trip_identical(self, tmp_path):
        model = self._small_model()
        path = tmp_path / "model.json"
        save_model(model, path)
        loaded = load_model(path)
        for name in model.params.TENSOR_FIELDS:
            assert np.array_equal(getattr(loaded.params, name), getattr(model.params, name))
        assert loaded.vocab.tokens == model.vocab.tokens
        assert np.array_equal(loaded.scaler.mean, model.scaler.mean)
        assert np.array_equal(loaded.scaler.std, model.scaler.std)
        assert loaded.config == model.config
        # a second save is byte-identical
        path2 = tmp_path / "model2.json"
        save_model(loaded, path2)
        assert path.read_bytes() == path2.read_bytes()

    def test_prediction_survives_round_trip(self, tmp_path):
        model = self._small_model()
        path = tmp_path / "model.json"
        save_model(model, path)
        loaded = load_model(path)
        msg = tiny_corpus()[0][0]
        assert loaded.predict(msg).probabilities == model.predict(msg).probabilities

    def test_version_mismatch(self, tmp_path):
        import json
        model = self._small_model()
        path = tmp_path / "model.json"
        save_model(model, path)
        doc = json.loads(path.read_text())
        doc["version"] = 99
        path.write_text(json.dumps(doc))
        with pytest.raises(VersionMismatch):
            load_model(path)

    def test_manifest_mismatch_refused(self, tmp_path):
        model = self._small_model()
        path = tmp_path / "model.json"
        save_model(model, path)
        other_lists = FeatureLists(function_words=tuple(
            w.upper() if w == "the" else w for w in FeatureLists().function_words
        ))
        with pytest.raises(ManifestMismatch):
            load_model(path, lists=other_lists)

    def test_tensor_shape_validated(self, tmp_path):
        import json
        model = self._small_model()
        path = tmp_path / "model.json"
        save_model(model, path)
        doc = json.loads(path.read_text())
        doc["tensors"]["b_i"]["data"] = [0.0]
        doc["tensors"]["b_i"]["shape"] = [1]
        doc["checksum"] = _refresh_checksum(doc)
        path.write_text(json.dumps(doc))
        with pytest.raises(ShapeMismatch):
            load_model(path)

    def test_bit_flip_detected(self, tmp_path):
        model = self._small_model()
        path = tmp_path / "model.json"
        save_model(model, path)
        data = bytearray(path.read_bytes())
        target = data.index(b'"vocab"') + 12
        data[target] ^= 0x02
        path.write_bytes(bytes(data))
        with pytest.raises((CorruptRecord, ValueError)):
            load_model(path)

    def test_non_finite_tensor_rejected(self, tmp_path):
        import json
        model = self._small_model()
        path = tmp_path / "model.json"
        save_model(model, path)
        doc = json.loads(path.read_text())
        doc["tensors"]["b_i"]["data"][0] = None  # json NaN stand-in
        doc["checksum"] = _refresh_checksum(doc)
        path.write_text(json.dumps(doc))
        with pytest.raises(CorruptRecord):
            load_model(path)
