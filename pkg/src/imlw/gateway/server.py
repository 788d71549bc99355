"""WebSocket front end for GatewaySession.

Two modes:
  * live     — the world ticks on a 20 Hz timer, state broadcast at 10 Hz.
  * lockstep — exactly one tick per control message, state after every tick.
               Replaying a message log in lockstep reproduces the episode
               bit for bit.
"""

from __future__ import annotations

import asyncio
import json
import logging
from pathlib import Path

from ..sim.types import DT, TaskSpec
from .session import STATE_EVERY_TICKS, GatewaySession
from .wire import error_message

log = logging.getLogger(__name__)

DEFAULT_PORT = 8787


class GatewayServer:
    def __init__(self, tasks: list[TaskSpec], out_root: str | Path, seed: int = 0,
                 lockstep: bool = False):
        self.tasks = tasks
        self.out_root = Path(out_root)
        self.seed = seed
        self.lockstep = lockstep
        self.session: GatewaySession | None = None
        self._client = None

    async def handle(self, ws) -> None:
        if self._client is not None:
            await ws.send(json.dumps(error_message(0, "session busy: one client only")))
            await ws.close()
            return
        self._client = ws
        self.session = GatewaySession(self.tasks, self.out_root, seed=self.seed)
        ticker = None if self.lockstep else asyncio.ensure_future(self._tick_loop(ws))
        try:
            async for frame in ws:
                try:
                    msg = json.loads(frame)
                except json.JSONDecodeError:
                    await ws.send(json.dumps(error_message(-1, "invalid JSON")))
                    continue
                for reply in self.session.handle_message(msg):
                    await ws.send(json.dumps(reply))
                if self.lockstep and isinstance(msg, dict) and msg.get("type") == "control":
                    self.session.tick()
                    await ws.send(json.dumps(self.session.state_message()))
        finally:
            if ticker is not None:
                ticker.cancel()
            self._client = None
            self.session = None

    async def _tick_loop(self, ws) -> None:
        tick = 0
        while True:
            await asyncio.sleep(DT)
            self.session.tick()
            tick += 1
            if tick % STATE_EVERY_TICKS == 0:
                await ws.send(json.dumps(self.session.state_message()))


async def serve(tasks: list[TaskSpec], out_root: str | Path, port: int = DEFAULT_PORT,
                host: str = "127.0.0.1", seed: int = 0, lockstep: bool = False):
    """Starts the server; returns the websockets server handle."""
    import websockets

    gw = GatewayServer(tasks, out_root, seed=seed, lockstep=lockstep)
    server = await websockets.serve(gw.handle, host, port)
    log.info("gateway listening on ws://%s:%d (lockstep=%s)", host, port, lockstep)
    return server
