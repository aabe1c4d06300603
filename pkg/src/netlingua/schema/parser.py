"""Parser for the YANG-subset schema language.

Supported statements: module, import, prefix, typedef, container, list,
key, leaf, leaf-list, type, must, mandatory, description. Inside a type
block the argument carriers pattern, range, path, and enum are accepted.
Any other statement raises UnsupportedStatementError naming it; malformed
syntax raises SchemaSyntaxError with line and column.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Optional, Union

from netlingua.errors import SchemaSyntaxError, UnsupportedStatementError
from netlingua.schema.ast import (
    INTEGER_BOUNDS,
    SchemaModule,
    SchemaNode,
    SchemaPath,
    TypeRef,
    TypeSpec,
)
from netlingua.schema.mustexpr import parse_must


@dataclass
class _Token:
    text: str
    line: int
    column: int
    quoted: bool = False


@dataclass
class Statement:
    keyword: str
    argument: Optional[str]
    substatements: list["Statement"] = field(default_factory=list)
    line: int = 0
    column: int = 0

    def find(self, keyword: str) -> Optional["Statement"]:
        for sub in self.substatements:
            if sub.keyword == keyword:
                return sub
        return None

    def find_all(self, keyword: str) -> list["Statement"]:
        return [sub for sub in self.substatements if sub.keyword == keyword]


_UNQUOTED_RE = re.compile(r"[^\s;{}\"']+")


def _tokenize(source: str) -> list[_Token]:
    tokens: list[_Token] = []
    line, col = 1, 1
    i = 0
    n = len(source)

    def advance(text: str) -> None:
        nonlocal line, col
        for ch in text:
            if ch == "\n":
                line += 1
                col = 1
            else:
                col += 1

    while i < n:
        ch = source[i]
        if ch in " \t\r\n":
            advance(ch)
            i += 1
            continue
        if source.startswith("//", i):
            end = source.find("\n", i)
            end = n if end == -1 else end
            advance(source[i:end])
            i = end
            continue
        if source.startswith("/*", i):
            end = source.find("*/", i + 2)
            if end == -1:
                raise SchemaSyntaxError("unterminated block comment", line, col)
            advance(source[i : end + 2])
            i = end + 2
            continue
        if ch in ";{}":
            tokens.append(_Token(ch, line, col))
            advance(ch)
            i += 1
            continue
        if ch in "\"'":
            start_line, start_col = line, col
            quote = ch
            j = i + 1
            parts: list[str] = []
            while j < n and source[j] != quote:
                if source[j] == "\\" and quote == '"' and j + 1 < n:
                    escape = source[j + 1]
                    parts.append({"n": "\n", "t": "\t", '"': '"', "\\": "\\"}.get(escape, escape))
                    j += 2
                else:
                    parts.append(source[j])
                    j += 1
            if j >= n:
                raise SchemaSyntaxError("unterminated string", start_line, start_col)
            advance(source[i : j + 1])
            i = j + 1
            text = "".join(parts)
            # String concatenation: "a" + "b"
            while True:
                k = i
                while k < n and source[k] in " \t\r\n":
                    k += 1
                if k < n and source[k] == "+":
                    k += 1
                    while k < n and source[k] in " \t\r\n":
                        k += 1
                    if k < n and source[k] in "\"'":
                        advance(source[i:k])
                        i = k
                        quote = source[i]
                        j = i + 1
                        while j < n and source[j] != quote:
                            parts.append(source[j])
                            j += 1
                        if j >= n:
                            raise SchemaSyntaxError("unterminated string", line, col)
                        advance(source[i : j + 1])
                        i = j + 1
                        text = "".join(parts)
                        continue
                break
            tokens.append(_Token(text, start_line, start_col, quoted=True))
            continue
        m = _UNQUOTED_RE.match(source, i)
        if m is None:
            raise SchemaSyntaxError(f"unexpected character {ch!r}", line, col)
        tokens.append(_Token(m.group(0), line, col))
        advance(m.group(0))
        i = m.end()
    return tokens


def _parse_statements(tokens: list[_Token], index: int, depth: int) -> tuple[list[Statement], int]:
    statements: list[Statement] = []
    while index < len(tokens):
        token = tokens[index]
        if token.text == "}" and not token.quoted:
            if depth == 0:
                raise SchemaSyntaxError("unmatched '}'", token.line, token.column)
            return statements, index + 1
        keyword = token
        if keyword.text in (";", "{") and not keyword.quoted:
            raise SchemaSyntaxError(f"expected statement keyword, got {keyword.text!r}",
                                    keyword.line, keyword.column)
        index += 1
        argument: Optional[str] = None
        if index < len(tokens) and (tokens[index].quoted or tokens[index].text not in ";{}"):
            argument = tokens[index].text
            index += 1
        if index >= len(tokens):
            raise SchemaSyntaxError("unexpected end of input", keyword.line, keyword.column)
        terminator = tokens[index]
        stmt = Statement(keyword.text, argument, line=keyword.line, column=keyword.column)
        if terminator.text == ";" and not terminator.quoted:
            index += 1
        elif terminator.text == "{" and not terminator.quoted:
            stmt.substatements, index = _parse_statements(tokens, index + 1, depth + 1)
        else:
            raise SchemaSyntaxError(
                f"expected ';' or '{{' after '{keyword.text}', got {terminator.text!r}",
                terminator.line, terminator.column,
            )
        statements.append(stmt)
    if depth != 0:
        raise SchemaSyntaxError("unexpected end of input: unclosed block", 1, 1)
    return statements, index


# keyword -> statements allowed inside it
_ALLOWED = {
    "module": {"import", "prefix", "typedef", "container", "list", "leaf", "leaf-list",
               "description"},
    "import": {"prefix"},
    "typedef": {"type", "description"},
    "container": {"container", "list", "leaf", "leaf-list", "must", "description"},
    "list": {"key", "container", "list", "leaf", "leaf-list", "must", "description"},
    "leaf": {"type", "must", "mandatory", "description"},
    "leaf-list": {"type", "must", "description"},
    "type": {"pattern", "range", "path", "enum"},
    "enum": {"description"},
    "must": set(),
    "key": set(),
    "prefix": set(),
    "description": set(),
    "mandatory": set(),
    "pattern": set(),
    "range": set(),
    "path": set(),
}


def _check_allowed(stmt: Statement, context: str) -> None:
    allowed = _ALLOWED.get(context, set())
    for sub in stmt.substatements:
        if sub.keyword not in allowed:
            raise UnsupportedStatementError(sub.keyword, sub.line, sub.column)
        _check_allowed(sub, sub.keyword)


def _require_arg(stmt: Statement) -> str:
    if stmt.argument is None:
        raise SchemaSyntaxError(f"'{stmt.keyword}' requires an argument", stmt.line, stmt.column)
    return stmt.argument


def _build_type(stmt: Statement) -> Union[TypeSpec, TypeRef]:
    name = _require_arg(stmt)
    pattern_stmt = stmt.find("pattern")
    range_stmt = stmt.find("range")
    path_stmt = stmt.find("path")
    enum_stmts = stmt.find_all("enum")

    if name == "string":
        if pattern_stmt is not None:
            return TypeSpec(base="pattern-string", pattern=_require_arg(pattern_stmt))
        return TypeSpec(base="string")
    if name in INTEGER_BOUNDS:
        lo, hi = INTEGER_BOUNDS[name]
        if range_stmt is not None:
            lo, hi = _parse_range(_require_arg(range_stmt), stmt)
        return TypeSpec(base="integer-range", range=(lo, hi))
    if name == "enumeration":
        if not enum_stmts:
            raise SchemaSyntaxError("enumeration without enum values", stmt.line, stmt.column)
        return TypeSpec(base="enumeration",
                        enum_values=tuple(_require_arg(e) for e in enum_stmts))
    if name == "leafref":
        if path_stmt is None:
            raise SchemaSyntaxError("leafref without path", stmt.line, stmt.column)
        return TypeSpec(base="leafref",
                        leafref_path=SchemaPath.from_string(_require_arg(path_stmt)))
    if name == "ip4-prefix":
        return TypeSpec(base="ip4-prefix")
    # A typedef reference, possibly prefix-qualified; resolved later.
    if ":" in name:
        prefix, bare = name.split(":", 1)
        return TypeRef(name=bare, prefix=prefix)
    return TypeRef(name=name)


def _parse_range(text: str, stmt: Statement) -> tuple[int, int]:
    parts = text.split("..")
    if len(parts) != 2:
        raise SchemaSyntaxError(f"bad range {text!r} (expected lo..hi)", stmt.line, stmt.column)
    try:
        return int(parts[0].strip()), int(parts[1].strip())
    except ValueError:
        raise SchemaSyntaxError(f"non-integer range bound in {text!r}", stmt.line, stmt.column)


def _build_node(stmt: Statement) -> SchemaNode:
    name = _require_arg(stmt)
    node = SchemaNode(kind=stmt.keyword, name=name)
    desc = stmt.find("description")
    if desc is not None:
        node.description = desc.argument or ""
    for must_stmt in stmt.find_all("must"):
        node.must_exprs.append(parse_must(_require_arg(must_stmt)))
    if stmt.keyword in ("leaf", "leaf-list"):
        type_stmt = stmt.find("type")
        if type_stmt is None:
            raise SchemaSyntaxError(f"{stmt.keyword} '{name}' has no type",
                                    stmt.line, stmt.column)
        node.type_spec = _build_type(type_stmt)
        mandatory_stmt = stmt.find("mandatory")
        if mandatory_stmt is not None:
            node.mandatory = (mandatory_stmt.argument == "true")
        return node
    if stmt.keyword == "list":
        key_stmt = stmt.find("key")
        if key_stmt is None:
            raise SchemaSyntaxError(f"list '{name}' has no key", stmt.line, stmt.column)
        node.key_leaves = tuple(_require_arg(key_stmt).split())
    for sub in stmt.substatements:
        if sub.keyword in ("container", "list", "leaf", "leaf-list"):
            node.children.append(_build_node(sub))
    return node


def parse_module(source_text: str) -> SchemaModule:
    """Parse one schema module from source text.

    Raises SchemaSyntaxError (with line/column) on malformed syntax and
    UnsupportedStatementError on statements outside the subset.
    """
    tokens = _tokenize(source_text)
    statements, _ = _parse_statements(tokens, 0, 0)
    if len(statements) != 1 or statements[0].keyword != "module":
        if not statements:
            raise SchemaSyntaxError("empty input: expected a module statement", 1, 1)
        bad = statements[0] if statements[0].keyword != "module" else statements[1]
        raise SchemaSyntaxError(
            f"expected a single module statement, got '{bad.keyword}'", bad.line, bad.column
        )
    module_stmt = statements[0]
    _check_allowed(module_stmt, "module")

    module = SchemaModule(name=_require_arg(module_stmt), prefix="")
    prefix_stmt = module_stmt.find("prefix")
    module.prefix = prefix_stmt.argument if prefix_stmt and prefix_stmt.argument else module.name
    desc = module_stmt.find("description")
    if desc is not None:
        module.description = desc.argument or ""

    for import_stmt in module_stmt.find_all("import"):
        imported = _require_arg(import_stmt)
        module.imports.append(imported)
        sub_prefix = import_stmt.find("prefix")
        if sub_prefix is None or not sub_prefix.argument:
            raise SchemaSyntaxError(f"import '{imported}' has no prefix",
                                    import_stmt.line, import_stmt.column)
        module.import_prefixes[sub_prefix.argument] = imported

    for typedef_stmt in module_stmt.find_all("typedef"):
        typedef_name = _require_arg(typedef_stmt)
        if typedef_name in module.typedefs:
            raise SchemaSyntaxError(f"duplicate typedef '{typedef_name}'",
                                    typedef_stmt.line, typedef_stmt.column)
        type_stmt = typedef_stmt.find("type")
        if type_stmt is None:
            raise SchemaSyntaxError(f"typedef '{typedef_name}' has no type",
                                    typedef_stmt.line, typedef_stmt.column)
        module.typedefs[typedef_name] = _build_type(type_stmt)

    for sub in module_stmt.substatements:
        if sub.keyword in ("container", "list", "leaf", "leaf-list"):
            module.root_nodes.append(_build_node(sub))

    for node in module.root_nodes:
        node.validate_structure()
    return module
