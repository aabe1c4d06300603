"""netlingua command line: serve, eval, validate, apply, retrieve, replay.

Exit codes: 0 success, 1 validation/application failure, 2 usage error
(click's own convention).
"""

from __future__ import annotations

import json
import sys
from pathlib import Path

import click

from netlingua.errors import NetLinguaError
from netlingua.fixtures import load_schema
from netlingua.memory.store import MemoryStore
from netlingua.schema.resolver import ResolvedSchema
from netlingua.service.config import load_config
from netlingua.state.changeset import ChangeSet
from netlingua.state.ops import apply_change_set
from netlingua.state.tree import NetworkState, load_device_state, load_topology, serialize_device_state
from netlingua.validation.checks import validate_after_apply


def _load_state_arg(schema: ResolvedSchema, state_path: Path) -> NetworkState:
    """A state argument is either a directory of config_db files or one file."""
    devices = {}
    topology = []
    if state_path.is_dir():
        for path in sorted(state_path.glob("*.json")):
            if path.name == "topology.json":
                topology = load_topology(path.read_text(encoding="utf-8"))
                continue
            devices[path.stem] = load_device_state(
                schema, path.read_text(encoding="utf-8"), path.stem)
    else:
        devices[state_path.stem] = load_device_state(
            schema, state_path.read_text(encoding="utf-8"), state_path.stem)
    return NetworkState(devices=devices, topology=topology, revision=1)


@click.group()
@click.option("--config", "config_path", type=click.Path(path_type=Path), default=None,
              help="TOML configuration file.")
@click.option("--state-dir", type=click.Path(path_type=Path), default=None)
@click.option("--schema-dir", type=click.Path(path_type=Path), default=None)
@click.option("--backend", type=click.Choice(["mock", "replay", "live"]), default=None)
@click.option("--port", type=int, default=None)
@click.pass_context
def main(ctx, config_path, state_dir, schema_dir, backend, port):
    """Natural-language network control service and tools."""
    ctx.ensure_object(dict)
    ctx.obj["config"] = load_config(
        config_path,
        state_dir=state_dir,
        schema_dir=schema_dir,
        backend_kind=backend,
        port=port,
    )


@main.command()
@click.pass_context
def serve(ctx):
    """Run the HTTP + WebSocket service."""
    import uvicorn

    from netlingua.service.app import create_app
    from netlingua.service.runtime import ServiceRuntime

    config = ctx.obj["config"]
    app = create_app(ServiceRuntime(config))
    uvicorn.run(app, host="0.0.0.0", port=config.port)


@main.command("eval")
@click.option("--spec", "spec_path", type=click.Path(path_type=Path, exists=True),
              required=True, help="Run-spec file (TOML or JSON).")
def eval_cmd(spec_path):
    """Run the batch evaluation harness."""
    from netlingua.harness import emit_report, load_run_spec, run

    spec = load_run_spec(spec_path)
    report = run(spec)
    files = emit_report(report, output_dir=spec.output_dir)
    for path in files:
        click.echo(f"wrote {path}")
    aggregates = report.aggregates()
    for variant, agg in aggregates.items():
        click.echo(f"{variant}: syntax={agg['syntax_pass_rate']:.2%} "
                   f"deployable={agg['deployable_rate']:.2%} "
                   f"needing-repair={agg['fraction_needing_repair']:.2%}")


@main.command()
@click.argument("changeset", type=click.Path(path_type=Path, exists=True))
@click.argument("state", type=click.Path(path_type=Path, exists=True))
@click.pass_context
def validate(ctx, changeset, state):
    """Validate a change-set file against a state file or directory."""
    config = ctx.obj["config"]
    schema = load_schema(config.schema_dir)
    try:
        cs = ChangeSet.from_json(changeset.read_text(encoding="utf-8"))
        network = _load_state_arg(schema, state)
    except NetLinguaError as exc:
        raise click.ClickException(str(exc))
    report = validate_after_apply(network, cs, schema)
    click.echo(report.to_error_log())
    click.echo(f"status: {report.status}")
    sys.exit(0 if report.passed else 1)


@main.command("apply")
@click.argument("changeset", type=click.Path(path_type=Path, exists=True))
@click.argument("state", type=click.Path(path_type=Path, exists=True))
@click.option("--out", type=click.Path(path_type=Path), default=None,
              help="Directory for the resulting per-device config files.")
@click.pass_context
def apply_cmd(ctx, changeset, state, out):
    """Apply a change-set file to a state file or directory."""
    config = ctx.obj["config"]
    schema = load_schema(config.schema_dir)
    try:
        cs = ChangeSet.from_json(changeset.read_text(encoding="utf-8"))
        network = _load_state_arg(schema, state)
        new_state = apply_change_set(network, cs, schema)
    except NetLinguaError as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(1)
    if out is not None:
        out.mkdir(parents=True, exist_ok=True)
        for name in sorted(new_state.devices):
            target = out / f"{name}.json"
            target.write_text(
                serialize_device_state(new_state.devices[name], schema) + "\n",
                encoding="utf-8")
            click.echo(f"wrote {target}")
    else:
        combined = {
            name: json.loads(serialize_device_state(new_state.devices[name], schema))
            for name in sorted(new_state.devices)
        }
        click.echo(json.dumps(combined, indent=2, sort_keys=True))
    click.echo(f"revision: {new_state.revision}", err=True)


@main.command()
@click.argument("query")
@click.option("--store", type=click.Choice(["state", "ir-doc"]), default="state")
@click.option("--mode", type=click.Choice(["nl", "raw"]), default="nl")
@click.option("-k", type=int, default=8)
@click.pass_context
def retrieve(ctx, query, store, mode, k):
    """Query the memory base built from the configured fixtures."""
    from netlingua.fixtures import load_clos_state

    config = ctx.obj["config"]
    schema = load_schema(config.schema_dir)
    state = load_clos_state(schema, state_dir=config.state_dir)
    memory = MemoryStore()
    memory.chunk_and_ingest(state, schema)
    for hit in memory.query_top_k(query, store, k=k, mode=mode):
        click.echo(f"#{hit.rank} score={hit.score:.4f} {hit.document.doc_id}")
        click.echo("  " + hit.document.text.replace("\n", "\n  "))


@main.command()
@click.argument("transcript", type=click.Path(path_type=Path, exists=True))
@click.pass_context
def replay(ctx, transcript):
    """Re-run a recorded session transcript against the fixtures."""
    from netlingua.agent.loop import load_transcript, replay_session
    from netlingua.agent.session import AgentConfig
    from netlingua.fixtures import load_clos_state

    config = ctx.obj["config"]
    schema = load_schema(config.schema_dir)
    state = load_clos_state(schema, state_dir=config.state_dir)
    memory = MemoryStore()
    memory.chunk_and_ingest(state, schema)
    turns = load_transcript(transcript)
    agent_config = AgentConfig(
        llm_backend=None, schema=schema, memory=memory,
        max_repair_iterations=config.max_repair_iterations,
        max_clarify_rounds=config.max_clarify_rounds,
        retrieval_k=config.retrieval_k, retrieval_mode=config.retrieval_mode,
    )
    session = replay_session(turns, state, agent_config)
    for turn in session.turns:
        payload = turn.payload if isinstance(turn.payload, str) else "(structured)"
        click.echo(f"{turn.actor:>9} {turn.action:<15} {payload[:60]!r}")
    click.echo(f"phase: {session.phase}")
    sys.exit(0 if session.phase == "done" else 1)


if __name__ == "__main__":
    main()
