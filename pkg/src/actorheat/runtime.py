"""Shared-memory actor runtime with owned messages.

A message here is a variable, not a value: it has one owner actor and an
in-flight flag. ``Engine.send`` hands the variable to another actor by
queueing it; a pool of worker threads pops queued messages and runs the
owner's receive handler under that actor's lock. ``access`` tells a running
handler whether it currently holds a message.

The engine stops by itself once every worker finds the ready queue empty
(quiescence), using the active-worker counter and a chain of single-waiter
wakeups.
"""

from __future__ import annotations

import threading
from collections import deque
from dataclasses import dataclass
from typing import Any, Callable, Generic, Iterable, Optional, TypeVar

__all__ = ["Message", "Actor", "Engine", "EngineStats", "access"]

P = TypeVar("P")

Handler = Callable[["Message", "Actor"], None]


class Message(Generic[P]):
    """An owned variable passed between actors.

    ``owner`` is ``None`` until the first send. ``payload`` is never copied
    by the runtime; whoever passes ``access`` may read or mutate it.
    """

    __slots__ = ("owner", "in_flight", "payload")

    def __init__(self, payload: P = None, owner: Optional[Actor] = None):
        self.payload = payload
        self.owner = owner
        self.in_flight = False

    def __repr__(self):
        return f"Message(owner={self.owner!r}, in_flight={self.in_flight})"


class Actor:
    """A receive handler plus user state, executed one message at a time."""

    __slots__ = ("recv", "state", "name", "_guard")

    def __init__(self, recv: Optional[Handler] = None, state: Any = None, name: str = ""):
        self.recv = recv if recv is not None else _ignore
        self.state = state
        self.name = name
        self._guard = threading.Lock()

    def __repr__(self):
        return f"Actor({self.name or hex(id(self))})"


def _ignore(m, a):
    pass


def access(m: Message, a: Actor) -> bool:
    """True when ``a`` owns ``m`` and ``m`` is not being delivered."""
    return m.owner is a and not m.in_flight


@dataclass
class EngineStats:
    handler_invocations: int = 0
    resend_events: int = 0
    max_queue_length: int = 0


class Engine:
    """FIFO delivery queue served by a fixed pool of worker threads.

    Parameters
    ----------
    workers : int
        Number of worker threads started by :meth:`run`. Must be >= 1.
    """

    def __init__(self, workers: int = 1):
        if isinstance(workers, bool) or not isinstance(workers, int) or workers < 1:
            raise ValueError(f"workers must be a positive integer, got {workers!r}")
        self.workers = workers
        self.ready: deque[Message] = deque()
        self.active = workers
        self.stats = EngineStats()
        self._mtx = threading.Lock()
        self._cv = threading.Condition(self._mtx)
        self._running = False
        self._errors: list[BaseException] = []

    def send(self, m: Message, target: Actor) -> None:
        """Transfer ``m`` to ``target`` by queueing it for delivery.

        Sending a message that is already in flight is a no-op; such events
        are counted in ``stats.resend_events``.
        """
        with self._mtx:
            if m.in_flight:
                self.stats.resend_events += 1
                return
            m.in_flight = True
            m.owner = target
            self.ready.append(m)
            if len(self.ready) > self.stats.max_queue_length:
                self.stats.max_queue_length = len(self.ready)
            self._cv.notify()

    def run(self, bootstrap: Iterable[tuple[Message, Actor]] = ()) -> EngineStats:
        """Send the bootstrap messages, run workers until quiescence.

        Returns the per-run diagnostics. If any handler raised, the first
        exception is re-raised after the pool has drained.
        """
        with self._mtx:
            if self._running:
                raise RuntimeError("engine is already running")
            self._running = True
            self.active = self.workers
            self.stats = EngineStats()
            self._errors = []
        try:
            for m, target in bootstrap:
                self.send(m, target)
            threads = [
                threading.Thread(target=self._worker, name=f"engine-worker-{k}", daemon=True)
                for k in range(self.workers)
            ]
            for t in threads:
                t.start()
            for t in threads:
                t.join()
        finally:
            with self._mtx:
                self._running = False
        if self._errors:
            raise self._errors[0]
        return self.stats

    def _worker(self) -> None:
        cv = self._cv
        ready = self.ready
        while True:
            with cv:
                while not ready:
                    self.active -= 1
                    if not self.active:
                        # pass the shutdown on to the next sleeper
                        cv.notify()
                        return
                    cv.wait()
                    self.active += 1
                m = ready.popleft()
                self.stats.handler_invocations += 1
            a = m.owner
            with a._guard:
                m.in_flight = False
                try:
                    a.recv(m, a)
                except BaseException as exc:  # keep the pool alive so run() can return
                    with cv:
                        self._errors.append(exc)
