"""Bundled fixtures: schema modules, the 4-device Clos snapshot, datasets.

The Clos request dataset is a reconstruction in the style of the original
survey-collected requests, which were never published; it is labeled as
such in the dataset file itself.
"""

from __future__ import annotations

from pathlib import Path

from netlingua.schema import ResolvedSchema, parse_module, resolve
from netlingua.state import NetworkState, load_device_state, load_topology

FIXTURES_DIR = Path(__file__).parent
SCHEMAS_DIR = FIXTURES_DIR / "schemas"
CLOS_DIR = FIXTURES_DIR / "clos"
DATASETS_DIR = FIXTURES_DIR / "datasets"
NILE_DIR = FIXTURES_DIR / "nile"
TRANSCRIPTS_DIR = FIXTURES_DIR / "transcripts"

CLOS_DEVICES = ("S0", "S1", "L0", "L1")


def load_schema(schema_dir: Path | None = None) -> ResolvedSchema:
    directory = schema_dir or SCHEMAS_DIR
    modules = [parse_module(path.read_text(encoding="utf-8"))
               for path in sorted(directory.glob("*.yang"))]
    return resolve(modules)


def load_clos_state(schema: ResolvedSchema | None = None,
                    state_dir: Path | None = None) -> NetworkState:
    schema = schema or load_schema()
    directory = state_dir or CLOS_DIR
    devices = {}
    for path in sorted(directory.glob("*.json")):
        if path.name == "topology.json":
            continue
        name = path.stem
        devices[name] = load_device_state(schema, path.read_text(encoding="utf-8"), name)
    topology_path = directory / "topology.json"
    topology = (load_topology(topology_path.read_text(encoding="utf-8"))
                if topology_path.exists() else [])
    return NetworkState(devices=devices, topology=topology, revision=1)
