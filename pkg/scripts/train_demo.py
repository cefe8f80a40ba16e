#!/usr/bin/env python3
"""End-to-end training demo: generate the two-style corpus, train with the
default configuration, report the learning curve and held-out accuracy, and
save the model file."""

import argparse
import time

from fourdigit.authmodel import TrainConfig, evaluate, save_model, train
from fourdigit.testkit import make_two_style_corpus


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--train", type=int, default=400)
    parser.add_argument("--test", type=int, default=100)
    parser.add_argument("--corpus-seed", type=int, default=7)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--epochs", type=int, default=15)
    parser.add_argument("--hidden-size", type=int, default=64)
    parser.add_argument("--out", default="model.json")
    args = parser.parse_args()

    train_set, test_set = make_two_style_corpus(args.train, args.test, args.corpus_seed)
    config = TrainConfig(epochs=args.epochs, hidden_size=args.hidden_size, seed=args.seed)

    started = time.time()
    model, history = train(train_set, config)
    for metric in history:
        print(f"epoch {metric.epoch:3d}  loss {metric.loss:.4f}  accuracy {metric.accuracy:.3f}")
    loss, accuracy = evaluate(model, test_set)
    print(f"held-out: loss {loss:.4f}  accuracy {accuracy:.3f}  ({time.time() - started:.1f}s)")

    save_model(model, args.out)
    print(f"model saved to {args.out}")


if __name__ == "__main__":
    main()
