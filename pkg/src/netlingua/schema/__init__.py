"""Vendor-agnostic IR schema: parsing and resolution of the YANG subset."""

from netlingua.schema.ast import (
    INTEGER_BOUNDS,
    SchemaModule,
    SchemaNode,
    SchemaPath,
    TypeSpec,
    is_ip4_prefix,
)
from netlingua.schema.mustexpr import MustExpr, parse_must
from netlingua.schema.parser import parse_module
from netlingua.schema.resolver import ResolvedSchema, resolve

__all__ = [
    "INTEGER_BOUNDS",
    "MustExpr",
    "ResolvedSchema",
    "SchemaModule",
    "SchemaNode",
    "SchemaPath",
    "TypeSpec",
    "is_ip4_prefix",
    "parse_module",
    "parse_must",
    "resolve",
]
