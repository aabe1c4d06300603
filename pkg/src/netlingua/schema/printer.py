"""Pretty-printer: schema AST back to source text (for documentation chunks)."""

from __future__ import annotations

from netlingua.schema.ast import SchemaNode, TypeSpec


def render_node(node: SchemaNode, indent: int = 0) -> str:
    pad = "  " * indent
    lines = [f"{pad}{node.kind} {node.name} {{"]
    if node.kind == "list" and node.key_leaves:
        lines.append(f'{pad}  key "{" ".join(node.key_leaves)}";')
    if node.description:
        lines.append(f'{pad}  description "{node.description}";')
    if node.type_spec is not None:
        lines.append(_render_type(node.type_spec, indent + 1))
    for must in node.must_exprs:
        lines.append(f'{pad}  must "{must.text}";')
    if node.mandatory:
        lines.append(f"{pad}  mandatory true;")
    for child in node.children:
        lines.append(render_node(child, indent + 1))
    lines.append(f"{pad}}}")
    return "\n".join(lines)


def _render_type(spec, indent: int) -> str:
    pad = "  " * indent
    if not isinstance(spec, TypeSpec):
        return f"{pad}type {getattr(spec, 'name', '?')};"
    if spec.base == "string":
        return f"{pad}type string;"
    if spec.base == "pattern-string":
        return f'{pad}type string {{\n{pad}  pattern "{spec.pattern}";\n{pad}}}'
    if spec.base == "integer-range":
        lo, hi = spec.range
        return f'{pad}type integer {{\n{pad}  range "{lo}..{hi}";\n{pad}}}'
    if spec.base == "enumeration":
        enums = "\n".join(f"{pad}  enum {value};" for value in spec.enum_values)
        return f"{pad}type enumeration {{\n{enums}\n{pad}}}"
    if spec.base == "leafref":
        return f'{pad}type leafref {{\n{pad}  path "{spec.leafref_path}";\n{pad}}}'
    return f"{pad}type {spec.base};"
