"""Exception hierarchy shared across the package.

Every error that callers are expected to catch derives from NetLinguaError.
Parsing errors carry source locations; resolution and application errors
carry enough context (paths, names) to be echoed back into repair prompts.
"""

from __future__ import annotations


class NetLinguaError(Exception):
    """Base class for all package errors."""


# --- schema parsing / resolution ---


class SchemaSyntaxError(NetLinguaError):
    """Malformed schema source. Carries 1-based line and column."""

    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"{message} (line {line}, column {column})")
        self.line = line
        self.column = column


class UnsupportedStatementError(SchemaSyntaxError):
    """A statement outside the supported subset was encountered."""

    def __init__(self, statement: str, line: int, column: int):
        super().__init__(f"unsupported statement '{statement}'", line, column)
        self.statement = statement


class UnresolvedTypedefError(NetLinguaError):
    def __init__(self, name: str, module: str):
        super().__init__(f"typedef '{name}' referenced in module '{module}' cannot be resolved")
        self.name = name
        self.module = module


class UnresolvedLeafrefError(NetLinguaError):
    def __init__(self, path: str, module: str):
        super().__init__(f"leafref path '{path}' in module '{module}' does not resolve to a leaf")
        self.path = path
        self.module = module


class ImportCycleError(NetLinguaError):
    def __init__(self, modules: list[str]):
        super().__init__("import cycle: " + " -> ".join(modules))
        self.modules = modules


class UnresolvedImportError(NetLinguaError):
    def __init__(self, name: str, importer: str):
        super().__init__(f"module '{importer}' imports '{name}' which is not in the loaded set")
        self.name = name
        self.importer = importer


class PathNotFoundError(NetLinguaError):
    """A schema path does not address any node.

    ``resolved_prefix`` is the deepest prefix of the path that did resolve,
    as a list of segment names (may be empty).
    """

    def __init__(self, path: str, resolved_prefix: list[str]):
        prefix = "/".join(resolved_prefix) if resolved_prefix else "(root)"
        super().__init__(f"path not found: '{path}' (deepest resolved prefix: {prefix})")
        self.path = path
        self.resolved_prefix = resolved_prefix


class AmbiguousPathError(NetLinguaError):
    def __init__(self, segment: str, candidates: list[str]):
        super().__init__(
            f"unprefixed segment '{segment}' is ambiguous between: " + ", ".join(sorted(candidates))
        )
        self.segment = segment
        self.candidates = candidates


# --- instance state / change sets ---


class MalformedDocumentError(NetLinguaError):
    """A config-DB or wire document does not have the expected shape."""


class DuplicateKeyError(NetLinguaError):
    def __init__(self, table: str, key: str):
        super().__init__(f"duplicate key '{key}' in table '{table}'")
        self.table = table
        self.key = key


class UnknownDeviceError(NetLinguaError):
    def __init__(self, device: str):
        super().__init__(f"unknown device '{device}'")
        self.device = device


class ChangeSetError(NetLinguaError):
    """Base for change-set application failures (transactional: state untouched)."""


class AppendDuplicateKeyError(ChangeSetError):
    def __init__(self, path: str, key: str):
        super().__init__(f"append would duplicate key '{key}' at {path}")
        self.path = path
        self.key = key


class RemoveNotFoundError(ChangeSetError):
    def __init__(self, path: str, value: dict):
        super().__init__(f"no entry matching {value!r} at {path}")
        self.path = path
        self.value = value


class KeyLeafMissingError(ChangeSetError):
    def __init__(self, path: str, key_leaf: str):
        super().__init__(f"value at {path} is missing key leaf '{key_leaf}'")
        self.path = path
        self.key_leaf = key_leaf


class SchemaMismatchError(NetLinguaError):
    """Two states do not share a schema / device set, so they cannot be diffed."""


# --- memory ---


class EmptyStoreError(NetLinguaError):
    def __init__(self, store: str):
        super().__init__(f"store '{store}' has no ingested documents")
        self.store = store


class BackendUnavailableError(NetLinguaError):
    """A live backend (embedding or LLM) could not be reached."""


# --- agent / extraction ---


class NoFencedBlockError(NetLinguaError):
    def __init__(self) -> None:
        super().__init__("model output contains no ```python fenced block")


class MultipleBlocksError(NetLinguaError):
    def __init__(self, count: int):
        super().__init__(f"model output contains {count} fenced blocks; expected exactly one")
        self.count = count


class ChangeSetParseError(NetLinguaError):
    """The fenced block did not parse as the change-set wire format."""


class MissingPlaceholderContentError(NetLinguaError):
    def __init__(self, placeholder: str):
        super().__init__(f"no content available for prompt placeholder '{placeholder}'")
        self.placeholder = placeholder


class WrongPhaseError(NetLinguaError):
    def __init__(self, phase: str, expected: str):
        super().__init__(f"session is in phase '{phase}'; expected {expected}")
        self.phase = phase


# --- nile ---


class NileSyntaxError(NetLinguaError):
    """Located Nile syntax error with the expected-token set at the failure point."""

    def __init__(self, message: str, line: int, column: int, expected: set[str]):
        shown = ", ".join(sorted(expected)) if expected else "(none)"
        super().__init__(f"{message} at line {line}, column {column}; expected one of: {shown}")
        self.line = line
        self.column = column
        self.expected = expected
