"""fourdigit: a send-gated mail submission framework.

Three checks gate every outgoing message: the sender's four-digit code, a
lookalike analysis of every address on the draft, and a stylometric
authorship verifier.  Any failing check flags the message as dangerous.
"""

__version__ = "0.1.0"
