import pytest

from netlingua.errors import (
    AmbiguousPathError,
    ImportCycleError,
    PathNotFoundError,
    SchemaSyntaxError,
    UnresolvedLeafrefError,
    UnsupportedStatementError,
)
from netlingua.fixtures import SCHEMAS_DIR
from netlingua.schema import SchemaPath, parse_module, parse_must, resolve

INTERFACE_SNIPPET = """
module mini-interface {
    prefix mi;
    container root {
        container INTERFACE {
            list INTERFACE_IPPREFIX_LIST {
                key "name ip-prefix";
                leaf name { type string; }
                leaf ip-prefix { type ip4-prefix; }
            }
        }
    }
}
"""


def test_parse_keyed_list():
    module = parse_module(INTERFACE_SNIPPET)
    table = module.root_nodes[0].child("INTERFACE")
    node = table.child("INTERFACE_IPPREFIX_LIST")
    assert node.kind == "list"
    assert node.key_leaves == ("name", "ip-prefix")


def test_parse_empty_module():
    module = parse_module("module empty { prefix e; }")
    assert module.root_nodes == []
    assert module.name == "empty"


def test_unsupported_statement_named():
    source = "module bad { prefix b; deviation /x { deviate add; } }"
    with pytest.raises(UnsupportedStatementError) as exc:
        parse_module(source)
    assert exc.value.statement == "deviation"


def test_syntax_error_carries_location():
    with pytest.raises(SchemaSyntaxError) as exc:
        parse_module("module broken {\n  container x {\n")
    assert exc.value.line >= 1 and exc.value.column >= 1


def test_list_key_must_name_child_leaf():
    source = """
    module bad-key {
        prefix bk;
        container c {
            list L { key "missing"; leaf present { type string; } }
        }
    }
    """
    with pytest.raises(Exception):
        parse_module(source)


def test_fixture_corpus_parses_totally():
    paths = sorted(SCHEMAS_DIR.glob("*.yang"))
    assert paths, "fixture corpus must not be empty"
    for path in paths:
        module = parse_module(path.read_text())
        assert module.name == path.stem


# --- resolution ---


def _fixture_modules():
    return [parse_module(p.read_text()) for p in sorted(SCHEMAS_DIR.glob("*.yang"))]


def test_resolve_leafref_to_port_module():
    schema = resolve(_fixture_modules())
    node = schema.find_node(SchemaPath.from_string(
        "/port:sonic-port/port:PORT/port:PORT_LIST/port:name"))
    assert node.kind == "leaf"


def test_resolve_single_module_trivially():
    module = parse_module(INTERFACE_SNIPPET)
    schema = resolve([module])
    assert "mini-interface" in schema.modules


def test_resolve_idempotent():
    first = resolve(_fixture_modules())
    second = resolve(list(first.modules.values()))
    assert set(first.modules) == set(second.modules)
    for name in first.modules:
        a, b = first.modules[name], second.modules[name]
        assert a.typedefs == b.typedefs
        assert [n.name for n in a.root_nodes] == [n.name for n in b.root_nodes]


def test_unresolved_leafref_names_path():
    modules = _fixture_modules()
    port = next(m for m in modules if m.name == "sonic-port")
    table = port.root_nodes[0].child("PORT")
    # Remove the leaf the interface module's leafref targets.
    port_list = table.child("PORT_LIST")
    port_list.children = [c for c in port_list.children if c.name != "name"]
    port_list.key_leaves = ("speed",)
    with pytest.raises(UnresolvedLeafrefError) as exc:
        resolve(modules)
    assert "PORT_LIST" in exc.value.path


def test_import_cycle_detected():
    a = parse_module("module a { prefix a; import b { prefix b; } }")
    b = parse_module("module b { prefix b; import a { prefix a; } }")
    with pytest.raises(ImportCycleError):
        resolve([a, b])


def test_find_node_appendix_b_path(schema):
    node = schema.find_node(SchemaPath.from_wire(
        ["sonic-interface:sonic-interface", "sonic-interface:INTERFACE",
         "INTERFACE_IPPREFIX_LIST"]))
    assert node.kind == "list"
    assert node.key_leaves == ("name", "ip-prefix")


def test_find_node_module_root(schema):
    node = schema.find_node(SchemaPath.from_wire(["sonic-port:sonic-port"]))
    assert node.kind == "container"
    assert node.name == "sonic-port"


def test_find_node_misspelled_segment_reports_deepest_prefix(schema):
    with pytest.raises(PathNotFoundError) as exc:
        schema.find_node(SchemaPath.from_wire(
            ["sonic-interface:sonic-interface", "sonic-interface:INTERFACE",
             "INTERFACE_IPPREFIX_LISTX"]))
    assert exc.value.resolved_prefix == ["sonic-interface", "INTERFACE"]


def test_unprefixed_ambiguity_is_error():
    a = parse_module("module ma { prefix ma; container shared { leaf x { type string; } } }")
    b = parse_module("module mb { prefix mb; container shared { leaf x { type string; } } }")
    schema = resolve([a, b])
    with pytest.raises(AmbiguousPathError):
        schema.find_node(SchemaPath.from_wire(["shared"]))
    # Prefixed lookup disambiguates.
    node = schema.find_node(SchemaPath.from_wire(["ma:shared"]))
    assert node.module == "ma"


def test_every_list_key_exists_among_children(schema):
    for _, _, node in schema.iter_nodes():
        if node.kind == "list":
            for key in node.key_leaves:
                child = node.child(key)
                assert child is not None and child.kind == "leaf"


# --- must expressions ---

MUST_SAMPLES = [
    "current() = ../../INTERFACE_LIST[name=current()]/name",
    "current() = 'up'",
    "../speed = current()",
    "../../PORT_LIST[name='Ethernet4']/mtu = '9100'",
]


@pytest.mark.parametrize("text", MUST_SAMPLES)
def test_must_parse_print_parse_fixpoint(text):
    first = parse_must(text)
    second = parse_must(first.render())
    assert first.left == second.left and first.right == second.right
    assert first.render() == second.render()


def test_must_normalizes_whitespace():
    spaced = parse_must("current()  =  ../../INTERFACE_LIST[ name = current() ]/name")
    assert spaced.render() == "current() = ../../INTERFACE_LIST[name=current()]/name"


def test_must_rejects_unsupported_syntax():
    with pytest.raises(SchemaSyntaxError):
        parse_must("count(../x) = 1")
    with pytest.raises(SchemaSyntaxError):
        parse_must("current() != ../x")
