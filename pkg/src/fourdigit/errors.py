"""Exception hierarchy shared across the package.

Every domain error carries a stable machine ``code`` so the gateway can map
exceptions to API error payloads without string-matching messages.
"""

from __future__ import annotations


class FourDigitError(Exception):
    """Base class for all domain errors."""

    code = "error"


class MissingHeader(FourDigitError):
    code = "missing_header"

    def __init__(self, field: str):
        self.field = field
        super().__init__(f"missing required header: {field}")


class MalformedAddress(FourDigitError):
    code = "malformed_address"

    def __init__(self, address: str, reason: str = "expected local@domain"):
        self.address = address
        super().__init__(f"malformed address {address!r}: {reason}")


class ShapeMismatch(FourDigitError):
    code = "shape_mismatch"


class EmptyCorpus(FourDigitError):
    code = "empty_corpus"


class SingleClassCorpus(FourDigitError):
    code = "single_class_corpus"


class InvalidCodeFormat(FourDigitError):
    code = "invalid_code_format"


class AuthRejected(FourDigitError):
    code = "auth_rejected"


class InvalidState(FourDigitError):
    code = "invalid_state"


class UserLocked(FourDigitError):
    code = "user_locked"


class CodeMismatch(FourDigitError):
    """Wrong settings code; carries how many attempts remain before lockout."""

    code = "code_mismatch"

    def __init__(self, remaining: int):
        self.remaining = remaining
        super().__init__(f"code mismatch, {remaining} attempt(s) remaining")


class InvalidForwardingAddress(FourDigitError):
    code = "invalid_forwarding_address"


class IoFailure(FourDigitError):
    code = "io_failure"


class StoreLocked(FourDigitError):
    code = "store_locked"


class NotFound(FourDigitError):
    code = "not_found"


class CorruptRecord(FourDigitError):
    code = "corrupt_record"


class VersionMismatch(FourDigitError):
    code = "version_mismatch"


class ManifestMismatch(FourDigitError):
    """Model file was trained against a different feature manifest."""

    code = "manifest_mismatch"


class PortInUse(FourDigitError):
    code = "port_in_use"
