"""Command-line interface.

Exit codes: 0 success, 1 domain error (or a dangerous verdict from
``verify`` / a failed drill from ``simulate-attack``), 2 usage error.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import __version__
from .errors import FourDigitError
from .gateway.config import GatewayConfig, load_config
from .gateway.corpus import ingest_corpus
from .identity import analyze_address, load_contacts
from .message import parse_message, segment
from .store import Store
from .stylometry import FEATURE_MANIFEST, extract_features


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fourdigit",
        description="Send-gated mail submission: stylometry + address analysis + four-digit code.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("serve", help="run the HTTP gateway")
    p.add_argument("--config", help="TOML-style key/value config file")
    p.add_argument("--port", type=int)
    p.add_argument("--store")

    p = sub.add_parser("parse", help="parse an .eml-style file and print it as JSON")
    p.add_argument("file")

    p = sub.add_parser("features", help="print the 97 stylometric features of a file's body")
    p.add_argument("file")
    p.add_argument("--format", choices=("json", "csv"), default=None)

    p = sub.add_parser("check-address", help="analyze an address against a contacts file")
    p.add_argument("address")
    p.add_argument("--contacts", required=True)

    p = sub.add_parser("train", help="train an authorship model from a corpus directory")
    p.add_argument("--corpus", required=True)
    p.add_argument("--out", default="model.json")
    p.add_argument("--epochs", type=int, default=15)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--hidden-size", type=int, default=64)
    p.add_argument("--learning-rate", type=float, default=0.05)
    p.add_argument("--max-len", type=int, default=200)

    p = sub.add_parser("eval", help="evaluate a trained model on a corpus directory")
    p.add_argument("--corpus", required=True)
    p.add_argument("--model", required=True)

    p = sub.add_parser("verify", help="run the full offline fusion pipeline on a message")
    p.add_argument("eml")
    p.add_argument("--user", required=True)
    p.add_argument("--store", required=True)
    p.add_argument("--code", default=None)
    p.add_argument("--config", default=None)

    p = sub.add_parser("register-code", help="set a user's send code (local strong-auth stub)")
    p.add_argument("--user", required=True)
    p.add_argument("--code", required=True)
    p.add_argument("--store", required=True)
    p.add_argument("--address", help="create the profile with this address if it does not exist")
    p.add_argument("--contacts", help="contacts file to attach when creating the profile")
    p.add_argument("--iterations", type=int, default=100_000)

    p = sub.add_parser("simulate-attack", help="run a scripted attack drill")
    p.add_argument("--scenario", required=True)
    p.add_argument("--store", default=None)

    return parser


def _cmd_parse(args) -> int:
    msg = parse_message(Path(args.file).read_bytes())
    print(json.dumps({
        "version": 1,
        "message": {
            "sender": msg.sender,
            "recipients": list(msg.recipients),
            "subject": msg.subject,
            "body": msg.body,
            "raw_size": msg.raw_size,
        },
    }, indent=2))
    return 0


def _cmd_features(args) -> int:
    msg = parse_message(Path(args.file).read_bytes())
    vector = extract_features(segment(msg.body), msg.body)
    if args.format == "json":
        doc = {
            "version": 1,
            "features": [
                {"name": s.name, "index": s.index, "category": s.category,
                 "value": vector.values[s.index]}
                for s in FEATURE_MANIFEST
            ],
        }
        print(json.dumps(doc, indent=2))
    elif args.format == "csv":
        for spec in FEATURE_MANIFEST:
            print(f"{spec.name},{vector.values[spec.index]:.12g}")
    else:
        for spec in FEATURE_MANIFEST:
            print(f"{spec.name}: {vector.values[spec.index]:.12g}")
    return 0


def _cmd_check_address(args) -> int:
    contacts = load_contacts(Path(args.contacts).read_text(encoding="utf-8"))
    report = analyze_address(args.address, contacts)
    print(json.dumps(report.as_dict(), indent=2))
    return 0


def _cmd_train(args) -> int:
    from .authmodel import TrainConfig, save_model, train

    load = ingest_corpus(args.corpus)
    for path, reason in load.skipped:
        print(f"skipped {path}: {reason}", file=sys.stderr)
    config = TrainConfig(
        epochs=args.epochs,
        learning_rate=args.learning_rate,
        hidden_size=args.hidden_size,
        max_len=args.max_len,
        seed=args.seed,
    )
    model, history = train(load.samples, config)
    for metric in history:
        print(f"epoch {metric.epoch:3d}  loss {metric.loss:.4f}  accuracy {metric.accuracy:.3f}")
    save_model(model, args.out)
    print(f"model written to {args.out} ({len(load.samples)} training messages)")
    return 0


def _cmd_eval(args) -> int:
    from .authmodel import evaluate, load_model

    load = ingest_corpus(args.corpus)
    model = load_model(args.model)
    loss, accuracy = evaluate(model, load.samples)
    print(json.dumps({"messages": len(load.samples), "loss": loss, "accuracy": accuracy}))
    return 0


def _cmd_verify(args) -> int:
    from .gateway.service import offline_verify

    config = load_config(args.config) if args.config else GatewayConfig()
    msg = parse_message(Path(args.eml).read_bytes())
    with Store(args.store, writable=False) as store:
        verdict = offline_verify(store, args.user, msg, args.code, config)
    print(json.dumps(verdict.as_dict(), indent=2))
    return 0 if verdict.allowed else 1


def _cmd_register_code(args) -> int:
    from .gateway.service import GatewayService

    with Store(args.store, writable=True) as store:
        config = GatewayConfig(store_root=args.store, code_iterations=args.iterations)
        service = GatewayService(store, config)
        try:
            service.load_profile(args.user)
        except FourDigitError:
            if not args.address:
                print(f"user {args.user!r} not found; pass --address to create", file=sys.stderr)
                return 1
            contacts = (
                load_contacts(Path(args.contacts).read_text(encoding="utf-8"))
                if args.contacts else set()
            )
            service.create_profile(args.user, args.address, contacts)
        # being on the box with store write access is the strong-auth stub
        evidence = service.authenticator.issue()
        service.register_code(args.user, args.code, evidence)
    print(f"code registered for {args.user}")
    return 0


def _cmd_simulate_attack(args) -> int:
    from .gateway.scenarios import run_scenario

    report = run_scenario(args.scenario, args.store)
    print(json.dumps(report, indent=2))
    return 0 if report["defenses_held"] else 1


def _cmd_serve(args) -> int:
    from .gateway.app import serve

    config = load_config(args.config) if args.config else load_config()
    if args.port is not None:
        config.port = args.port
    if args.store is not None:
        config.store_root = args.store
    serve(config)
    return 0


_COMMANDS = {
    "serve": _cmd_serve,
    "parse": _cmd_parse,
    "features": _cmd_features,
    "check-address": _cmd_check_address,
    "train": _cmd_train,
    "eval": _cmd_eval,
    "verify": _cmd_verify,
    "register-code": _cmd_register_code,
    "simulate-attack": _cmd_simulate_attack,
}


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except FourDigitError as exc:
        print(f"error [{exc.code}]: {exc}", file=sys.stderr)
        return 1
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
