"""HTTP gateway: scene snapshots, metrics, command submission, event stream.

One pipeline runs at a time (a second POST /command while busy gets 409);
read-only endpoints stay available throughout. GET /events is a server-push
(SSE) stream; `replay` resends buffered history and `follow=false` closes
after the replay, which the tests and reconnecting clients use.
"""

from __future__ import annotations

import json
import logging
import queue
import threading
from dataclasses import dataclass, field
from typing import Any, Iterator

from fastapi import FastAPI, HTTPException, Request
from fastapi.responses import StreamingResponse

from .grammar import ParseError, ValidationError
from .metrics import TrialRecord, aggregate, report_to_dict
from .pipeline import Adapters, TurnOutcome, run_turn
from .scene import Scene

log = logging.getLogger(__name__)

EVENT_HISTORY_LIMIT = 5000
SUBSCRIBER_HIGH_WATER = 1000


class EventBus:
    """Fan-out of pipeline events to SSE subscribers plus a replay buffer."""

    def __init__(self):
        self._lock = threading.Lock()
        self._subscribers: list[queue.Queue] = []
        self._history: list[dict] = []

    def publish(self, event: dict) -> None:
        with self._lock:
            self._history.append(event)
            if len(self._history) > EVENT_HISTORY_LIMIT:
                del self._history[: len(self._history) - EVENT_HISTORY_LIMIT]
            subscribers = list(self._subscribers)
        for q in subscribers:
            if q.qsize() >= SUBSCRIBER_HIGH_WATER:
                try:
                    q.get_nowait()  # drop oldest rather than block the pipeline
                except queue.Empty:
                    pass
            q.put(event)

    def subscribe(self) -> queue.Queue:
        q: queue.Queue = queue.Queue()
        with self._lock:
            self._subscribers.append(q)
        return q

    def unsubscribe(self, q: queue.Queue) -> None:
        with self._lock:
            if q in self._subscribers:
                self._subscribers.remove(q)

    def history(self) -> list[dict]:
        with self._lock:
            return list(self._history)


class Session:
    """One scene plus adapters plus the records accumulated so far."""

    def __init__(self, scene: Scene, adapters: Adapters, bus: EventBus | None = None):
        self.scene = scene
        self.bus = bus or EventBus()
        adapters.events = self.bus.publish
        self.adapters = adapters
        self.records: list[TrialRecord] = []
        self._turn = 0
        self._busy = threading.Lock()

    def handle_command(self, text: str) -> TurnOutcome:
        """Run one pipeline turn for a typed utterance or raw action text."""
        if not self._busy.acquire(blocking=False):
            raise BusyError("a pipeline turn is already in flight")
        try:
            self._turn += 1
            entry = {
                "id": f"turn-{self._turn:03d}",
                "utterance": text,
                "seed": self.scene.seed + self._turn,
            }
            outcome = run_turn(entry, self.adapters, self.scene)
            self.records.append(outcome.record)
            return outcome
        finally:
            self._busy.release()


class BusyError(RuntimeError):
    pass


def _sse_format(event: dict) -> str:
    return f"data: {json.dumps(event)}\n\n"


def create_app(session: Session) -> FastAPI:
    app = FastAPI(title="fuzzyarm gateway")
    bus = session.bus

    @app.get("/scene")
    def get_scene() -> dict:
        return session.scene.snapshot()

    @app.get("/metrics")
    def get_metrics() -> dict:
        if not session.records:
            return {"n_trials": 0}
        return report_to_dict(aggregate(session.records))

    @app.post("/command")
    def post_command(payload: dict) -> dict:
        text = payload.get("text")
        if text is None and payload.get("actions") is not None:
            text = json.dumps(payload["actions"])
        if not text or not str(text).strip():
            raise HTTPException(status_code=422, detail={"error": "empty command"})
        text = str(text).strip()
        if text.startswith("["):
            # Pre-formed action text: reject malformed input before the
            # pipeline runs, carrying the parser position for the UI.
            from .grammar import parse_actions, validate

            try:
                validate(parse_actions(text), session.adapters.registry)
            except ParseError as exc:
                raise HTTPException(
                    status_code=422, detail={"error": str(exc), "offset": exc.offset}
                ) from exc
            except ValidationError as exc:
                raise HTTPException(
                    status_code=422, detail={"error": str(exc), "violations": exc.violations}
                ) from exc
        try:
            outcome = session.handle_command(text)
        except BusyError as exc:
            raise HTTPException(status_code=409, detail={"error": str(exc)}) from exc
        response: dict[str, Any] = {
            "record": outcome.record.to_dict(),
            "transcript": outcome.transcript,
            "actions": [{"method": c.method_name, "args": list(c.args)} for c in outcome.actions],
            "scene": session.scene.snapshot(),
        }
        if outcome.action_error is not None:
            response["action_error"] = outcome.action_error
        failures = [
            {"method": call.method_name, "reason": result.reason}
            for call, result in outcome.execution
            if not result.success
        ]
        if failures:
            response["failures"] = failures
        return response

    @app.get("/events")
    def get_events(request: Request, replay: bool = False, follow: bool = True) -> StreamingResponse:
        def stream() -> Iterator[str]:
            q = bus.subscribe() if follow else None
            try:
                # Emitted after subscription, so a client that has received
                # any bytes knows it will see all subsequent events.
                yield ": connected\n\n"
                if replay:
                    for event in bus.history():
                        yield _sse_format(event)
                while q is not None:
                    try:
                        event = q.get(timeout=15.0)
                        yield _sse_format(event)
                    except queue.Empty:
                        yield ": keep-alive\n\n"
            finally:
                if q is not None:
                    bus.unsubscribe(q)

        return StreamingResponse(stream(), media_type="text/event-stream")

    return app


def serve(session: Session, port: int = 8700, host: str = "127.0.0.1",
          static_dir: str | None = None) -> None:
    """Run the gateway under uvicorn, optionally serving the operator UI."""
    import uvicorn

    app = create_app(session)
    if static_dir is not None:
        from fastapi.staticfiles import StaticFiles

        app.mount("/", StaticFiles(directory=static_dir, html=True), name="ui")
    uvicorn.run(app, host=host, port=port, log_level="warning")
