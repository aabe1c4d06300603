"""Change-set extraction from raw model output.

The output contract demands exactly one fenced block labeled `python`;
its body is the change-set wire format, tolerating Python-literal syntax
(single quotes, trailing commas, True/False/None) as emitted by models.
"""

from __future__ import annotations

import ast
import json
import re

from netlingua.errors import ChangeSetParseError, MultipleBlocksError, NoFencedBlockError
from netlingua.state.changeset import ChangeSet

# Models close fences with ``` but the prompt exemplar shows '''; accept both.
_BLOCK_RE = re.compile(r"```python\s*\n(.*?)(?:```|''')", re.DOTALL)


def extract_change_set(model_output: str) -> ChangeSet:
    blocks = _BLOCK_RE.findall(model_output or "")
    if not blocks:
        raise NoFencedBlockError()
    if len(blocks) > 1:
        raise MultipleBlocksError(len(blocks))
    body = blocks[0].strip()
    if not body:
        raise ChangeSetParseError("fenced block is empty")
    try:
        doc = ast.literal_eval(body)
    except (ValueError, SyntaxError):
        try:
            doc = json.loads(body)
        except json.JSONDecodeError as exc:
            raise ChangeSetParseError(f"fenced block is neither a Python literal "
                                      f"nor JSON: {exc}")
    return ChangeSet.from_wire(doc)
