"""netlingua: natural-language network control.

Turns NL requests into validated change sets over a YANG-subset IR,
driven by a retrieve-generate-verify-repair agent loop with user
confirmation, plus an evaluation harness and an HTTP/WebSocket service.
"""

__version__ = "0.1.0"
