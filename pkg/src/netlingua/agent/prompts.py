"""Prompt templates for the configuration generator and the repair loop.

The templates carry their placeholder markers inline; instantiation is a
literal substitution of the three insert points. build_* raise
MissingPlaceholderContentError when a placeholder has no content.
"""

from __future__ import annotations

from dataclasses import dataclass

from netlingua.errors import MissingPlaceholderContentError


@dataclass(frozen=True)
class Prompt:
    system: str
    user: str

    def __str__(self) -> str:
        return self.system + "\n\n" + self.user


GENERATION_SYSTEM_PROMPT = """You are an AI assistant for network configuration. There are four devices in a 3-stage clos network, named `S0', `S1', `L0', `L1'. Please use these names exactly. A network operator wants to configure a network using natural language. You will be provided the operator's request in natural language. For context, you will be given several YANG modules that describe a schema for you to express the device configurations. Your job is generate ABNF changes in JSON format needed to perform the specific configuration given by the operator. Notice in the example that you are limited only to the operations "append" and "remove", and that the changes are given as paths based on the schema structure.

You should list out the configurations for each device in the network. Your list should be expressed in Python syntax and clearly delineated so that it can be automatically extracted. Ensure that different devices are separate items in the list, although the entire configuration should be a single Python snippet for extraction. At the end, provide a brief explanation of your translation.

**********************************************

Example natural language query: "Hey, can you assign IP address 10.0.5.1/24 to the interface Ethernet8 of device S0? Replace the old IP address if there is one already at Ethernet8."

Configuration:
```python
[
    {
        "device": "S0",
        "config": [
            {
                "action": "remove",
                "path": ["sonic-interface:sonic-interface", "sonic-interface:INTERFACE",
                         "INTERFACE_IPPREFIX_LIST"],
                "value": {"name": "Ethernet8", "ip-prefix": "10.0.2.1/24"}
            },
            {
                "action": "append",
                "path": ["sonic-interface:sonic-interface", "sonic-interface:INTERFACE",
                         "INTERFACE_IPPREFIX_LIST"],
                "value": {"name": "Ethernet8", "ip-prefix": "10.0.5.1/24"}
            }
        ]
    }
]
'''

Explanation:
<Explain your answer here, and also list any assumptions about the network state here. In this example, you might assume that Ethernet8 already has an active IP address 10.0.2.1/24.>"""

GENERATION_USER_TEMPLATE = """Here is information about the current network state: {insert network state from retrieval here}

Here are the YANG modules that are relevant for this configuration:
{insert yang models from retrieval here}

Natural language query: {insert user request here}

Configuration: """

REPAIR_SYSTEM_PROMPT = """You are an assistant to a network operator trying to configure an SONIC clos network. The configuration code is given to you in a YANG ABNF data format, but it does not pass the YANG validator tests. Feedback error logs are given to you, as well as relevant YANG modules retrieved from a vector store containing all of the YANG modules, which specify the grammar to which the YANG configuration must adhere. Please correct the faulty YANG configuration and return the correct version clearly delineated as a standalone list within a single, complete Python snippet (see below). For automatic extraction purposes, the solution should be the only Python block in your output, as follows:

```python
[   <configuration>   ]
'''"""

REPAIR_USER_TEMPLATE = """Faulty YANG configuration: {insert output from configuration generator here}

Error logs: {insert verifier feedback here}

Retrieved YANG models: {insert YANG retrieval results here}

Revised YANG Configuration: """

PLAN_SYSTEM_PROMPT = """You are an AI assistant for network configuration, planning changes to a 3-stage clos network with devices `S0', `S1', `L0', `L1'. Before generating any configuration, describe the concrete steps you propose (interfaces, addresses, policies) in plain language so the operator can confirm or adjust them. Do not emit configuration code yet."""

PLAN_USER_TEMPLATE = """Here is information about the current network state: {insert network state from retrieval here}

The operator asked: {insert user request here}

Proposed steps: """


def _fill(template: str, replacements: dict[str, str]) -> str:
    out = template
    for marker, content in replacements.items():
        if not content or not content.strip():
            raise MissingPlaceholderContentError(marker)
        out = out.replace("{" + marker + "}", content)
    return out


def build_generation_prompt(network_state: str, yang_modules: str,
                            user_request: str) -> Prompt:
    """Instantiate the generation template with retrieval results and the request."""
    user = _fill(GENERATION_USER_TEMPLATE, {
        "insert network state from retrieval here": network_state,
        "insert yang models from retrieval here": yang_modules,
        "insert user request here": user_request,
    })
    return Prompt(system=GENERATION_SYSTEM_PROMPT, user=user)


def build_repair_prompt(faulty_config: str, error_logs: str,
                        yang_modules: str) -> Prompt:
    """Instantiate the repair template with the faulty output and verifier feedback."""
    user = _fill(REPAIR_USER_TEMPLATE, {
        "insert output from configuration generator here": faulty_config,
        "insert verifier feedback here": error_logs,
        "insert YANG retrieval results here": yang_modules,
    })
    return Prompt(system=REPAIR_SYSTEM_PROMPT, user=user)


def build_plan_prompt(network_state: str, user_request: str) -> Prompt:
    user = _fill(PLAN_USER_TEMPLATE, {
        "insert network state from retrieval here": network_state,
        "insert user request here": user_request,
    })
    return Prompt(system=PLAN_SYSTEM_PROMPT, user=user)
