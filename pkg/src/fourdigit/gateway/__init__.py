"""HTTP/JSON service and CLI frontends wiring the whole pipeline together."""

from .config import GatewayConfig, load_config
from .corpus import CorpusLoad, ingest_corpus, write_corpus
from .service import GatewayService, offline_verify

__all__ = [
    "CorpusLoad",
    "GatewayConfig",
    "GatewayService",
    "ingest_corpus",
    "load_config",
    "offline_verify",
    "write_corpus",
]
