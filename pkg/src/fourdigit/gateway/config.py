"""Service configuration: flat TOML-style key/value file with env overrides.

Recognized keys:

    port = 8425
    store_root = "/var/lib/sendgate"
    styl_threshold = 0.5
    lookalike_threshold = 1
    code_iterations = 100000
    function_words_path = "/etc/sendgate/function_words.txt"
    stopwords_path = "/etc/sendgate/stopwords.txt"
    token.<user_id> = "<bearer token>"

Environment variables override scalars with a SENDGATE_ prefix
(SENDGATE_PORT, SENDGATE_STORE_ROOT, ...).
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from pathlib import Path

from ..stylometry import DEFAULT_LISTS, FeatureLists

ENV_PREFIX = "SENDGATE_"


@dataclass
class GatewayConfig:
    port: int = 8425
    store_root: str = "./sendgate-store"
    styl_threshold: float = 0.5
    lookalike_threshold: int = 1
    code_iterations: int = 100_000
    function_words_path: str | None = None
    stopwords_path: str | None = None
    tokens: dict[str, str] = field(default_factory=dict)


_SCALAR_CASTS = {
    "port": int,
    "store_root": str,
    "styl_threshold": float,
    "lookalike_threshold": int,
    "code_iterations": int,
    "function_words_path": str,
    "stopwords_path": str,
}


def _parse_value(raw: str):
    raw = raw.strip()
    if raw.startswith('"') and raw.endswith('"') and len(raw) >= 2:
        return raw[1:-1]
    if raw.lower() in ("true", "false"):
        return raw.lower() == "true"
    try:
        return int(raw)
    except ValueError:
        pass
    try:
        return float(raw)
    except ValueError:
        pass
    return raw


def load_config(path: str | Path | None = None, env: dict[str, str] | None = None) -> GatewayConfig:
    config = GatewayConfig()
    if path is not None:
        for lineno, line in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
            stripped = line.strip()
            if not stripped or stripped.startswith("#"):
                continue
            key, eq, raw = stripped.partition("=")
            if not eq:
                raise ValueError(f"{path}:{lineno}: expected 'key = value'")
            key = key.strip()
            value = _parse_value(raw)
            if key.startswith("token."):
                config.tokens[key[len("token."):]] = str(value)
            elif key in _SCALAR_CASTS:
                setattr(config, key, _SCALAR_CASTS[key](value))
            else:
                raise ValueError(f"{path}:{lineno}: unknown key {key!r}")

    env = os.environ if env is None else env
    for key, cast in _SCALAR_CASTS.items():
        raw = env.get(ENV_PREFIX + key.upper())
        if raw is not None:
            setattr(config, key, cast(_parse_value(raw)))
    return config


def _read_wordlist(path: str) -> tuple[str, ...]:
    lines = Path(path).read_text(encoding="utf-8").splitlines()
    return tuple(w.strip() for w in lines if w.strip() and not w.startswith("#"))


def feature_lists_for(config: GatewayConfig) -> FeatureLists:
    function_words = (
        _read_wordlist(config.function_words_path)
        if config.function_words_path
        else DEFAULT_LISTS.function_words
    )
    stopwords = (
        _read_wordlist(config.stopwords_path)
        if config.stopwords_path
        else DEFAULT_LISTS.stopwords
    )
    return FeatureLists(function_words=function_words, stopwords=stopwords)
