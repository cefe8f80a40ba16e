"""FastAPI adapter over GatewayService.

Endpoint table (the wire contract consumed by the webmail UI):

    POST /v1/session                 {user_id}              -> {session_id}
    PUT  /v1/session/{id}/draft      {to[],subject,body}    -> {status:"draft_saved"}
    POST /v1/session/{id}/send                              -> {status:"code_required",remaining}
    POST /v1/session/{id}/code       {code}                 -> {status:"sent"|"retry"|"locked"|"dangerous",...}
    GET  /v1/users/{id}/settings                            -> {forwarding_address,signature}
    PUT  /v1/users/{id}/settings     (X-Send-Code header)   -> {forwarding_address,signature}
    POST /v1/users/{id}/code         {new_code,auth_evidence}-> {status:"registered"}
    GET  /v1/health                                         -> {status:"ok",version}

Statuses: 200; 400 format errors; 401 code mismatch / bad auth; 404; 409
invalid state; 423 locked.  Every error body has the ApiError shape
{status, code, message, remaining_attempts?}.
"""

from __future__ import annotations

import socket
from typing import Optional

from fastapi import FastAPI, Header, Request
from fastapi.responses import JSONResponse
from pydantic import BaseModel
from starlette.exceptions import HTTPException as StarletteHTTPException

from .. import __version__
from ..errors import (
    AuthRejected,
    CodeMismatch,
    CorruptRecord,
    EmptyCorpus,
    FourDigitError,
    InvalidCodeFormat,
    InvalidForwardingAddress,
    InvalidState,
    IoFailure,
    MalformedAddress,
    ManifestMismatch,
    MissingHeader,
    NotFound,
    PortInUse,
    ShapeMismatch,
    SingleClassCorpus,
    StoreLocked,
    UserLocked,
    VersionMismatch,
)
from ..sendgate import AuthEvidence
from .config import GatewayConfig
from .service import GatewayService

ERROR_STATUS: dict[type, int] = {
    MissingHeader: 400,
    MalformedAddress: 400,
    InvalidCodeFormat: 400,
    InvalidForwardingAddress: 400,
    ShapeMismatch: 400,
    EmptyCorpus: 400,
    SingleClassCorpus: 400,
    AuthRejected: 401,
    CodeMismatch: 401,
    NotFound: 404,
    InvalidState: 409,
    UserLocked: 423,
    StoreLocked: 503,
    IoFailure: 500,
    CorruptRecord: 500,
    VersionMismatch: 500,
    ManifestMismatch: 500,
}


def api_error_body(status: int, code: str, message: str, remaining: int | None = None) -> dict:
    body = {"status": status, "code": code, "message": message}
    if remaining is not None:
        body["remaining_attempts"] = remaining
    return body


class CreateSessionBody(BaseModel):
    user_id: str


class DraftBody(BaseModel):
    to: list[str]
    subject: str = ""
    body: str = ""


class CodeBody(BaseModel):
    code: str


class SettingsBody(BaseModel):
    forwarding_address: Optional[str] = None
    signature: Optional[str] = None


class EvidenceBody(BaseModel):
    method: str
    token: str
    issued_at: float = 0.0


class RegisterCodeBody(BaseModel):
    new_code: str
    auth_evidence: EvidenceBody


def create_app(service: GatewayService) -> FastAPI:
    app = FastAPI(title="fourdigit gateway", version=__version__)
    app.state.service = service

    @app.exception_handler(FourDigitError)
    async def domain_error_handler(request: Request, exc: FourDigitError):
        status = ERROR_STATUS.get(type(exc), 500)
        remaining = getattr(exc, "remaining", None)
        return JSONResponse(
            status_code=status,
            content=api_error_body(status, exc.code, str(exc), remaining),
        )

    @app.exception_handler(StarletteHTTPException)
    async def http_error_handler(request: Request, exc: StarletteHTTPException):
        return JSONResponse(
            status_code=exc.status_code,
            content=api_error_body(exc.status_code, "http_error", str(exc.detail)),
        )

    def check_bearer(user_id: str, authorization: str | None) -> None:
        expected = service.config.tokens.get(user_id)
        if expected is None:
            return
        if authorization != f"Bearer {expected}":
            raise AuthRejected(f"missing or invalid bearer token for user {user_id!r}")

    @app.get("/v1/health")
    async def health():
        return {"status": "ok", "version": __version__}

    @app.post("/v1/session")
    async def create_session(body: CreateSessionBody, authorization: str | None = Header(default=None)):
        check_bearer(body.user_id, authorization)
        session = service.create_session(body.user_id)
        return {"session_id": session.session_id}

    @app.put("/v1/session/{session_id}/draft")
    async def put_draft(session_id: str, body: DraftBody, authorization: str | None = Header(default=None)):
        session = service.get_session(session_id)
        check_bearer(session.user_id, authorization)
        service.put_draft(session_id, body.to, body.subject, body.body)
        return {"status": "draft_saved"}

    @app.post("/v1/session/{session_id}/send")
    async def request_send(session_id: str, authorization: str | None = Header(default=None)):
        session = service.get_session(session_id)
        check_bearer(session.user_id, authorization)
        challenge = service.request_send(session_id)
        return {"status": challenge.status, "remaining": challenge.remaining}

    @app.post("/v1/session/{session_id}/code")
    async def submit_code(session_id: str, body: CodeBody, authorization: str | None = Header(default=None)):
        session = service.get_session(session_id)
        check_bearer(session.user_id, authorization)
        outcome = service.submit_code(session_id, body.code)
        payload: dict = {"status": outcome.status}
        if outcome.remaining is not None:
            payload["remaining"] = outcome.remaining
        if outcome.verdict is not None and outcome.status == "dangerous":
            payload["reasons"] = list(outcome.verdict.reasons)
        status_code = {"sent": 200, "dangerous": 200, "retry": 401, "locked": 423}[outcome.status]
        return JSONResponse(status_code=status_code, content=payload)

    @app.get("/v1/users/{user_id}/settings")
    async def get_settings(user_id: str, authorization: str | None = Header(default=None)):
        check_bearer(user_id, authorization)
        return service.get_settings(user_id)

    @app.put("/v1/users/{user_id}/settings")
    async def put_settings(
        user_id: str,
        body: SettingsBody,
        authorization: str | None = Header(default=None),
        x_send_code: str | None = Header(default=None),
    ):
        check_bearer(user_id, authorization)
        if x_send_code is None:
            raise AuthRejected("X-Send-Code header is required")
        changes = {key: getattr(body, key) for key in body.model_fields_set}
        return service.put_settings(user_id, changes, x_send_code)

    @app.post("/v1/users/{user_id}/code")
    async def register_code(user_id: str, body: RegisterCodeBody, authorization: str | None = Header(default=None)):
        check_bearer(user_id, authorization)
        evidence = AuthEvidence(
            method=body.auth_evidence.method,
            token=body.auth_evidence.token,
            issued_at=body.auth_evidence.issued_at,
        )
        service.register_code(user_id, body.new_code, evidence)
        return {"status": "registered"}

    return app


def check_port_free(port: int, host: str = "0.0.0.0") -> None:
    sock = socket.socket(socket.AF_INET, socket.SOCK_STREAM)
    try:
        sock.setsockopt(socket.SOL_SOCKET, socket.SO_REUSEADDR, 1)
        sock.bind((host, port))
    except OSError as exc:
        sock.close()
        raise PortInUse(f"port {port} is not bindable: {exc}") from exc
    else:
        sock.close()


def serve(config: GatewayConfig) -> None:
    """Open the store, bind the port, and run until interrupted."""
    import uvicorn

    from ..store import Store

    check_port_free(config.port)
    with Store(config.store_root, writable=True) as store:
        service = GatewayService(store, config)
        app = create_app(service)
        uvicorn.run(app, host="0.0.0.0", port=config.port, log_level="info")
