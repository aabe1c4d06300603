"""Generate-parse-repair loop for Nile intents.

The grammar verifier's located error is the whole feedback signal: on a
syntax error the repair prompt carries the error text and the loop
regenerates, up to max_iter repair rounds.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Optional

from netlingua.errors import NileSyntaxError
from netlingua.nile.grammar import Grammar, default_grammar, grammar_text
from netlingua.nile.model import NileIntent
from netlingua.nile.parser import parse_nile

NILE_SYSTEM_PROMPT = (
    "You translate a network operator's natural-language request into a Nile "
    "intent. The intent must conform exactly to this BNF grammar:\n\n{grammar}\n"
    "Reply with the intent text only."
)

NILE_REPAIR_PROMPT = (
    "Your previous Nile intent did not parse. Verifier error:\n{error}\n\n"
    "Previous output:\n{previous}\n\n"
    "Emit a corrected intent that conforms to the grammar. Reply with the "
    "intent text only."
)

_FENCE_RE = re.compile(r"```[A-Za-z]*\s*\n(.*?)(?:```|''')", re.DOTALL)


def _strip_fences(output: str) -> str:
    m = _FENCE_RE.search(output or "")
    return (m.group(1) if m else output or "").strip()


@dataclass
class NileRepairResult:
    intent: Optional[NileIntent]
    iterations_used: int  # repair rounds consumed (0 when the first output parsed)
    error: Optional[str] = None
    raw_outputs: list[str] = None  # type: ignore[assignment]

    @property
    def succeeded(self) -> bool:
        return self.intent is not None


def iterative_repair_nile(utterance: str, backend, max_iter: int = 8,
                          grammar: Optional[Grammar] = None) -> NileRepairResult:
    """Generate, parse, and repair until the intent parses or the budget ends."""
    grammar = grammar or default_grammar()
    system = NILE_SYSTEM_PROMPT.format(grammar=grammar_text())
    outputs: list[str] = []
    output = backend.complete(system, utterance)
    outputs.append(output)
    last_error: Optional[NileSyntaxError] = None
    for iteration in range(max_iter + 1):
        try:
            intent = parse_nile(_strip_fences(output), grammar)
            return NileRepairResult(intent=intent, iterations_used=iteration,
                                    raw_outputs=outputs)
        except NileSyntaxError as exc:
            last_error = exc
            if iteration == max_iter:
                break
            repair_user = NILE_REPAIR_PROMPT.format(error=str(exc), previous=output)
            output = backend.complete(system, repair_user)
            outputs.append(output)
    return NileRepairResult(intent=None, iterations_used=max_iter,
                            error=str(last_error), raw_outputs=outputs)
