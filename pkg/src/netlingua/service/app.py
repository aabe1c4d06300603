"""HTTP + WebSocket API over the agent runtime.

POST /sessions            create a session, advance to the next input point
GET  /sessions/{id}       pure view of the session (identical bodies between events)
POST /sessions/{id}/reply user text / confirm / reject
WS   /sessions/{id}/events ordered TurnRecord stream with ack-based resume
"""

from __future__ import annotations

import asyncio
from typing import Optional

from fastapi import FastAPI, HTTPException, WebSocket, WebSocketDisconnect
from pydantic import BaseModel

from netlingua.errors import BackendUnavailableError, NetLinguaError, WrongPhaseError
from netlingua.service.runtime import ServiceRuntime, parse_reply_payload


class CreateSessionBody(BaseModel):
    query: str = ""


class ReplyBody(BaseModel):
    text: str = ""
    confirm: bool = False
    reject: bool = False


def create_app(runtime: ServiceRuntime) -> FastAPI:
    app = FastAPI(title="netlingua", version="0.1.0")
    app.state.runtime = runtime
    # Highest acked event index per session (drives reconnect resume).
    acked: dict[str, int] = {}

    @app.post("/sessions", status_code=201)
    def create_session(body: CreateSessionBody):
        if not body.query or not body.query.strip():
            raise HTTPException(status_code=400, detail="query must be non-empty")
        try:
            session = runtime.create_session(body.query)
        except BackendUnavailableError as exc:
            raise HTTPException(status_code=503, detail=f"backend unavailable: {exc}")
        view = runtime.session_view(session)
        return {"session_id": session.session_id, "phase": session.phase, "view": view}

    @app.get("/sessions/{session_id}")
    def get_session(session_id: str):
        session = runtime.get_session(session_id)
        if session is not None:
            return runtime.session_view(session)
        persisted = runtime.load_persisted_view(session_id)
        if persisted is not None:
            return persisted
        raise HTTPException(status_code=404, detail="unknown session")

    @app.post("/sessions/{session_id}/reply")
    def reply(session_id: str, body: ReplyBody):
        session = runtime.get_session(session_id)
        if session is None:
            raise HTTPException(status_code=404, detail="unknown session")
        try:
            payload = parse_reply_payload(body.model_dump())
        except ValueError as exc:
            raise HTTPException(status_code=400, detail=str(exc))
        try:
            runtime.reply(session_id, payload)
        except WrongPhaseError as exc:
            raise HTTPException(status_code=409, detail=str(exc))
        except BackendUnavailableError as exc:
            raise HTTPException(status_code=503, detail=f"backend unavailable: {exc}")
        except NetLinguaError as exc:
            raise HTTPException(status_code=400, detail=str(exc))
        return runtime.session_view(runtime.get_session(session_id))

    @app.get("/state")
    def get_state():
        from netlingua.state.render import render_state_nl

        return {"revision": runtime.state.revision,
                "rendered": render_state_nl(runtime.state, runtime.schema)}

    @app.websocket("/sessions/{session_id}/events")
    async def events(websocket: WebSocket, session_id: str,
                     from_index: Optional[int] = None):
        session = runtime.get_session(session_id)
        if session is None:
            await websocket.close(code=4404)
            return
        await websocket.accept()
        index = from_index if from_index is not None else acked.get(session_id, -1) + 1
        try:
            while True:
                turns = session.turns
                while index < len(turns):
                    await websocket.send_json(
                        {"index": index, "turn": turns[index].to_wire(),
                         "phase": session.phase}
                    )
                    index += 1
                # Give the client a beat to ack before deciding to finish.
                try:
                    message = await asyncio.wait_for(websocket.receive_json(),
                                                     timeout=0.05)
                    if isinstance(message, dict) and "ack" in message:
                        acked[session_id] = max(acked.get(session_id, -1),
                                                int(message["ack"]))
                except asyncio.TimeoutError:
                    pass
                if session.terminal and index >= len(session.turns):
                    await websocket.send_json({"type": "end", "phase": session.phase})
                    break
        except WebSocketDisconnect:
            return
        await websocket.close()

    return app


def build_default_app() -> FastAPI:
    from netlingua.service.config import load_config

    return create_app(ServiceRuntime(load_config()))
