"""HTTP surface over one session engine.

Handlers never reach into session state directly: every command goes through
the shared dispatcher under a single lock, and observers receive immutable
snapshots over a server-sent event stream. A background task paces
full-automation ticks at the configured tick rate.
"""

import asyncio
import contextlib
import json

from fastapi import FastAPI, HTTPException, Request
from fastapi.responses import StreamingResponse

from ..commands import apply_command
from ..errors import SessionClosed, UnknownCommand, UnknownPage
from ..session import FULL_AUTO, SessionEngine
from .schemas import CommandAck, CommandRequest, PageModel, SnapshotModel


def create_app(engine: SessionEngine, ui_dir: str | None = None) -> FastAPI:
    lock = asyncio.Lock()
    subscribers: list[asyncio.Queue] = []

    def on_snapshot(snap: dict | None):
        for queue in list(subscribers):
            queue.put_nowait(snap)

    engine.add_listener(on_snapshot)

    async def ticker():
        while True:
            rate = engine.tick_rate
            if engine.mode == FULL_AUTO and not engine.completed \
                    and not engine.closed and rate > 0:
                async with lock:
                    if engine.mode == FULL_AUTO and not engine.completed:
                        engine.automation_tick()
                await asyncio.sleep(1.0 / rate)
            else:
                await asyncio.sleep(0.02)

    @contextlib.asynccontextmanager
    async def lifespan(app: FastAPI):
        task = asyncio.create_task(ticker())
        try:
            yield
        finally:
            task.cancel()
            with contextlib.suppress(asyncio.CancelledError):
                await task

    app = FastAPI(title="rowbot session service", lifespan=lifespan)

    @app.post("/session/input", response_model=CommandAck)
    async def upload_input(rows: list[dict]):
        async with lock:
            return apply_command(engine, {"command": "upload-input", "rows": rows})

    @app.post("/session/command", response_model=CommandAck)
    async def handle_command(request: CommandRequest):
        try:
            async with lock:
                return apply_command(engine, request.model_dump())
        except UnknownCommand as exc:
            raise HTTPException(status_code=400, detail=str(exc))

    @app.get("/session/snapshot", response_model=SnapshotModel)
    async def current_snapshot():
        if engine.closed:
            raise HTTPException(status_code=409, detail="SessionClosed")
        async with lock:
            return engine.snapshot()

    @app.get("/session/stream")
    async def stream_snapshots(request: Request):
        if engine.closed:
            raise HTTPException(status_code=409, detail="SessionClosed")
        queue: asyncio.Queue = asyncio.Queue()
        async with lock:
            queue.put_nowait(engine.snapshot())
            subscribers.append(queue)

        async def gen():
            try:
                while True:
                    snap = await queue.get()
                    if snap is None:
                        yield "event: closed\ndata: {}\n\n"
                        return
                    yield f"data: {json.dumps(snap)}\n\n"
                    if await request.is_disconnected():
                        return
            finally:
                subscribers.remove(queue)

        return StreamingResponse(gen(), media_type="text/event-stream")

    @app.get("/corpus/page/{page_id:path}", response_model=PageModel)
    async def corpus_page(page_id: str):
        try:
            doc = engine.corpus.page(page_id)
        except UnknownPage as exc:
            raise HTTPException(status_code=404, detail=str(exc))
        return engine.serialize_page(doc)

    @app.post("/session/close", response_model=CommandAck)
    async def close_session():
        async with lock:
            engine.close()
        return {"ok": True, "seq": engine.snapshot_seq, "mode": engine.mode}

    if ui_dir:
        from fastapi.staticfiles import StaticFiles
        app.mount("/ui", StaticFiles(directory=ui_dir, html=True), name="ui")

    return app
