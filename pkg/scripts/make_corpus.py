#!/usr/bin/env python3
"""Materialize the synthetic two-style corpus as .eml trees.

Writes <out>/train/{legitimate,impersonated}/*.eml and the same under
<out>/test, ready for `fourdigit train --corpus <out>/train`.
"""

import argparse

from fourdigit.gateway.corpus import write_corpus
from fourdigit.testkit import make_two_style_corpus


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out", default="corpus")
    parser.add_argument("--train", type=int, default=400)
    parser.add_argument("--test", type=int, default=100)
    parser.add_argument("--seed", type=int, default=7)
    args = parser.parse_args()

    train_set, test_set = make_two_style_corpus(args.train, args.test, args.seed)
    n_train = write_corpus(f"{args.out}/train", train_set)
    n_test = write_corpus(f"{args.out}/test", test_set)
    print(f"wrote {n_train} training and {n_test} test messages under {args.out}/")


if __name__ == "__main__":
    main()
