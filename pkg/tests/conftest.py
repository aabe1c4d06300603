import json

import pytest

from netlingua.fixtures import TRANSCRIPTS_DIR, load_clos_state, load_schema
from netlingua.memory.store import MemoryStore


@pytest.fixture(scope="session")
def schema():
    return load_schema()


@pytest.fixture(scope="session")
def clos_state(schema):
    return load_clos_state(schema)


@pytest.fixture(scope="session")
def memory(schema, clos_state):
    store = MemoryStore()
    store.chunk_and_ingest(clos_state, schema)
    return store


@pytest.fixture(scope="session")
def golden_script():
    return json.loads((TRANSCRIPTS_DIR / "golden_ip_workflow.json").read_text())


APPENDIX_B_WIRE = [
    {
        "device": "S0",
        "config": [
            {
                "action": "remove",
                "path": ["sonic-interface:sonic-interface",
                         "sonic-interface:INTERFACE", "INTERFACE_IPPREFIX_LIST"],
                "value": {"name": "Ethernet8", "ip-prefix": "10.0.2.1/24"},
            },
            {
                "action": "append",
                "path": ["sonic-interface:sonic-interface",
                         "sonic-interface:INTERFACE", "INTERFACE_IPPREFIX_LIST"],
                "value": {"name": "Ethernet8", "ip-prefix": "10.0.5.1/24"},
            },
        ],
    }
]


@pytest.fixture()
def appendix_b_wire():
    return json.loads(json.dumps(APPENDIX_B_WIRE))
