"""Schema resolution: typedef flattening, leafref checking, path lookup.

resolve() takes a set of parsed modules and returns a ResolvedSchema whose
nodes carry only concrete TypeSpecs. The result is immutable in practice
(nothing mutates it after resolve) and safe for concurrent readers.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Optional, Union

from netlingua.errors import (
    AmbiguousPathError,
    ImportCycleError,
    PathNotFoundError,
    UnresolvedImportError,
    UnresolvedLeafrefError,
    UnresolvedTypedefError,
)
from netlingua.schema.ast import SchemaModule, SchemaNode, SchemaPath, TypeRef, TypeSpec


@dataclass
class ResolvedSchema:
    """A closed set of modules with all references resolved."""

    modules: dict[str, SchemaModule] = field(default_factory=dict)
    # module name -> {prefix -> module name}; includes the module's own prefix
    _prefix_maps: dict[str, dict[str, str]] = field(default_factory=dict)

    def module_for_prefix(self, context_module: str, prefix: str) -> Optional[str]:
        mapping = self._prefix_maps.get(context_module, {})
        if prefix in mapping:
            return mapping[prefix]
        # Instance paths commonly qualify by module name rather than prefix.
        if prefix in self.modules:
            return prefix
        for module in self.modules.values():
            if module.prefix == prefix:
                return module.name
        return None

    def find_node(self, path: SchemaPath, context_module: str = "") -> SchemaNode:
        """Find the schema node addressed by an absolute path.

        Prefixed segments match within the named module; unprefixed segments
        must match uniquely across candidates (ambiguity is an error). On a
        miss, PathNotFoundError carries the deepest resolved prefix.
        """
        if path.relative_ups:
            raise PathNotFoundError(str(path), [])
        resolved: list[str] = []
        current: Optional[SchemaNode] = None
        for index, (prefix, name) in enumerate(path.segments):
            if index == 0:
                candidates = self._root_candidates(prefix, name, context_module)
            else:
                assert current is not None
                candidates = [
                    child for child in current.children
                    if child.name == name and self._prefix_ok(prefix, child.module, current.module)
                ]
            if len(candidates) > 1:
                raise AmbiguousPathError(name, [c.module + ":" + c.name for c in candidates])
            if not candidates:
                raise PathNotFoundError(str(path), resolved)
            current = candidates[0]
            resolved.append(name)
        assert current is not None
        return current

    def _prefix_ok(self, prefix: Optional[str], node_module: str, context_module: str) -> bool:
        if prefix is None:
            return True
        target = self.module_for_prefix(context_module, prefix)
        return target == node_module

    def _root_candidates(self, prefix: Optional[str], name: str,
                         context_module: str) -> list[SchemaNode]:
        if prefix is not None:
            target = self.module_for_prefix(context_module or prefix, prefix)
            if target is None or target not in self.modules:
                return []
            return [n for n in self.modules[target].root_nodes if n.name == name]
        return [
            node
            for module in self.modules.values()
            for node in module.root_nodes
            if node.name == name
        ]

    def find_table(self, table: str) -> Optional[SchemaNode]:
        """Find a top-level table container by bare name (config-DB ingestion)."""
        matches = [
            child
            for module in self.modules.values()
            for root in module.root_nodes
            for child in root.children
            if child.name == table
        ]
        if len(matches) > 1:
            raise AmbiguousPathError(table, [m.module + ":" + m.name for m in matches])
        return matches[0] if matches else None

    def table_path(self, table: str) -> Optional[SchemaPath]:
        node = self.find_table(table)
        if node is None:
            return None
        module = self.modules[node.module]
        for root in module.root_nodes:
            if root.child(table) is node:
                return SchemaPath(((None, root.name), (None, table)))
        return None

    def iter_nodes(self) -> Iterable[tuple[str, tuple[str, ...], SchemaNode]]:
        """Yield (module, path names, node) over every node, depth-first."""
        for module in self.modules.values():
            stack = [((node.name,), node) for node in module.root_nodes]
            while stack:
                names, node = stack.pop(0)
                yield module.name, names, node
                for child in node.children:
                    stack.append((names + (child.name,), child))


def resolve(modules: Iterable[SchemaModule]) -> ResolvedSchema:
    """Resolve a module set: imports, typedefs, and leafrefs.

    Raises UnresolvedImportError / ImportCycleError / UnresolvedTypedefError /
    UnresolvedLeafrefError. Resolving an already-resolved set is a no-op
    (idempotent: same inputs produce an equal schema).
    """
    by_name = {module.name: module for module in modules}
    _check_imports(by_name)

    schema = ResolvedSchema(modules=by_name)
    for module in by_name.values():
        mapping = {module.prefix: module.name, module.name: module.name}
        for prefix, imported in module.import_prefixes.items():
            mapping[prefix] = imported
        schema._prefix_maps[module.name] = mapping

    for module in by_name.values():
        for name, spec in list(module.typedefs.items()):
            module.typedefs[name] = _resolve_type(spec, module, by_name, seen=[name])
        _stamp_and_resolve_nodes(module.root_nodes, module, by_name)

    # Leafref targets must exist and be leaves.
    for module in by_name.values():
        for _, _, node in _walk(module.root_nodes):
            spec = node.type_spec
            if isinstance(spec, TypeSpec) and spec.base == "leafref":
                assert spec.leafref_path is not None
                try:
                    target = schema.find_node(spec.leafref_path, context_module=module.name)
                except (PathNotFoundError, AmbiguousPathError):
                    raise UnresolvedLeafrefError(str(spec.leafref_path), module.name)
                if target.kind != "leaf":
                    raise UnresolvedLeafrefError(str(spec.leafref_path), module.name)
    return schema


def _check_imports(by_name: dict[str, SchemaModule]) -> None:
    for module in by_name.values():
        for imported in module.imports:
            if imported not in by_name:
                raise UnresolvedImportError(imported, module.name)
    # Cycle detection over the import graph.
    WHITE, GRAY, BLACK = 0, 1, 2
    color = {name: WHITE for name in by_name}

    def visit(name: str, trail: list[str]) -> None:
        color[name] = GRAY
        trail.append(name)
        for imported in by_name[name].imports:
            if color[imported] == GRAY:
                cycle = trail[trail.index(imported):] + [imported]
                raise ImportCycleError(cycle)
            if color[imported] == WHITE:
                visit(imported, trail)
        trail.pop()
        color[name] = BLACK

    for name in by_name:
        if color[name] == WHITE:
            visit(name, [])


def _resolve_type(spec: Union[TypeSpec, TypeRef], module: SchemaModule,
                  by_name: dict[str, SchemaModule], seen: list[str]) -> TypeSpec:
    if isinstance(spec, TypeSpec):
        return spec
    target_module = module
    if spec.prefix is not None and spec.prefix not in (module.prefix, module.name):
        imported = module.import_prefixes.get(spec.prefix)
        if imported is None or imported not in by_name:
            raise UnresolvedTypedefError(f"{spec.prefix}:{spec.name}", module.name)
        target_module = by_name[imported]
    found = target_module.typedefs.get(spec.name)
    if found is None:
        raise UnresolvedTypedefError(spec.name, module.name)
    if isinstance(found, TypeRef):
        if found.name in seen:
            raise UnresolvedTypedefError(spec.name, module.name)
        resolved = _resolve_type(found, target_module, by_name, seen + [found.name])
        target_module.typedefs[spec.name] = resolved
        return resolved
    return found


def _stamp_and_resolve_nodes(nodes: list[SchemaNode], module: SchemaModule,
                             by_name: dict[str, SchemaModule]) -> None:
    for node in nodes:
        node.module = module.name
        if isinstance(node.type_spec, TypeRef):
            node.type_spec = _resolve_type(node.type_spec, module, by_name,
                                           seen=[node.type_spec.name])
        _stamp_and_resolve_nodes(node.children, module, by_name)


def _walk(nodes: list[SchemaNode], prefix: tuple[str, ...] = ()):
    for node in nodes:
        path = prefix + (node.name,)
        yield node.module, path, node
        yield from _walk(node.children, path)
