"""Heat-equation wavefront kernels.

The field is a 2-D ``float64`` array of shape ``(H, W)``. Every solver updates
interior rows in place with the Gauss-Seidel stencil and leaves the boundary
rows and columns alone. The parallel solvers must produce the same bits as
:func:`seq_solve` because they run the same floating-point operations in
dependency order.
"""

from __future__ import annotations

import threading
from typing import Callable, Collection

import numba
import numpy as np

from .runtime import Actor, Engine, EngineStats, Message, access

__all__ = [
    "stencil_op",
    "seq_solve",
    "dep_ready",
    "Wavefront",
    "wavefront_solve",
    "diagonal_schedule",
    "dataparallel_solve",
    "fields_equal",
    "first_difference",
]

RowOp = Callable[[np.ndarray, int], None]


@numba.njit(nogil=True, cache=True)
def _relax_row(cells, i):
    up = cells[i - 1]
    row = cells[i]
    down = cells[i + 1]
    # ascending j: row[j - 1] is already the new value
    for j in range(1, cells.shape[1] - 1):
        row[j] = (row[j - 1] + row[j + 1] + up[j] + down[j]) * 0.25


def stencil_op(field: np.ndarray, i: int) -> None:
    """Relax interior row ``i`` of ``field`` in place, left to right."""
    assert 1 <= i <= field.shape[0] - 2, f"row {i} outside interior of {field.shape}"
    _relax_row(field, i)


def _check_field(field):
    if field.ndim != 2 or field.dtype != np.float64:
        raise TypeError("field must be a 2-D float64 array")
    if field.shape[0] < 3 or field.shape[1] < 3:
        raise ValueError(f"field must be at least 3x3, got {field.shape}")


def seq_solve(field: np.ndarray, t_max: int, op: RowOp = stencil_op) -> None:
    """Reference solver: ``t_max`` sweeps over rows 1..H-2 in order."""
    _check_field(field)
    h = field.shape[0]
    for _ in range(t_max):
        for i in range(1, h - 1):
            op(field, i)


def dep_ready(t: int, i: int, done: Collection[tuple[int, int]], t_max: int, h: int) -> bool:
    """Whether iteration ``(t, i)`` may start given the completed set ``done``.

    Needs ``(t - 1, i + 1)`` (skipped for ``t == 1``) and ``(t, i - 1)``;
    a neighbour outside rows ``1..h-2`` counts as completed.
    """
    if not (1 <= t <= t_max and 1 <= i <= h - 2):
        raise ValueError(f"iteration {(t, i)} outside 1..{t_max} x 1..{h - 2}")
    left_ok = i == 1 or (t, i - 1) in done
    upper_ok = t == 1 or i == h - 2 or (t - 1, i + 1) in done
    return left_ok and upper_ok


class Wavefront:
    """One actor per interior row, neighbours linked by boundary tokens.

    Actor ``k`` owns row ``k + 1``. Token ``ms[k]`` is shared by actors ``k``
    and ``k + 1``; holding both adjacent tokens means both neighbours have
    finished what this row's next step reads. Rows are written only by their
    actor, and a neighbour row is read only after its token came back, so
    the shared field needs no further locking.
    """

    def __init__(self, field: np.ndarray, t_max: int, workers: int = 1, op: RowOp = stencil_op):
        _check_field(field)
        self.field = field
        self.t_max = t_max
        self.op = op
        self.n = n = field.shape[0] - 2
        self.engine = Engine(workers)
        self.actors = [Actor(self.recv, state=k, name=f"row{k + 1}") for k in range(n)]
        # counters start at 1 so that the guard ``ts <= t_max`` admits t_max ops
        self.ts = [1] * n
        self.ms = [Message(owner=self.actors[k]) for k in range(n - 1)]
        self.start = Message(owner=self.actors[0])

    def recv(self, m: Message, a: Actor) -> None:
        k = a.state
        n = self.n
        ms = self.ms
        if ((k == 0 or access(ms[k - 1], a))
                and (k == n - 1 or access(ms[k], a))
                and self.ts[k] <= self.t_max):
            self.op(self.field, k + 1)
            self.ts[k] += 1
            if k != 0:
                self.engine.send(ms[k - 1], self.actors[k - 1])
            if k != n - 1:
                self.engine.send(ms[k], self.actors[k + 1])
            if n == 1 and self.ts[k] <= self.t_max:
                # lone actor has no neighbour to hand it a token back
                self.engine.send(m, a)

    def run(self) -> EngineStats:
        return self.engine.run([(self.start, self.actors[0])])


def wavefront_solve(field: np.ndarray, t_max: int, workers: int = 1,
                    op: RowOp = stencil_op) -> Wavefront:
    """Solve on the actor runtime; returns the finished :class:`Wavefront`."""
    wf = Wavefront(field, t_max, workers, op)
    wf.run()
    return wf


def diagonal_schedule(h: int, t_max: int) -> list[list[int]]:
    """Rows to relax at each diagonal step of the even/odd schedule.

    Step ``s`` (1-based) covers odd rows when ``s`` is odd and even rows
    otherwise, limited to rows with ``i <= s`` and ``i > s - 2 * t_max``.
    """
    steps = []
    for s in range(1, (2 * t_max - 1) + (h - 3) + 1):
        first = 1 if s % 2 == 1 else 2
        steps.append([i for i in range(first, h - 1, 2) if s - 2 * t_max < i <= s])
    return steps


def dataparallel_solve(field: np.ndarray, t_max: int, workers: int = 1,
                       op: RowOp = stencil_op) -> None:
    """Even/odd diagonal schedule on a fork-join team of ``workers`` threads.

    Within a step rows are handed out one at a time from a shared cursor;
    a barrier separates consecutive steps.
    """
    _check_field(field)
    if workers < 1:
        raise ValueError(f"workers must be >= 1, got {workers}")
    steps = [iter(rows) for rows in diagonal_schedule(field.shape[0], t_max)]
    cursor = threading.Lock()
    barrier = threading.Barrier(workers)
    errors = []

    def team_member():
        try:
            for rows in steps:
                while True:
                    with cursor:
                        i = next(rows, None)
                    if i is None:
                        break
                    op(field, i)
                barrier.wait()
        except threading.BrokenBarrierError:
            pass
        except BaseException as exc:
            errors.append(exc)
            barrier.abort()

    team = [threading.Thread(target=team_member, daemon=True) for _ in range(workers)]
    for t in team:
        t.start()
    for t in team:
        t.join()
    if errors:
        raise errors[0]


def fields_equal(a: np.ndarray, b: np.ndarray) -> bool:
    """Bitwise equality of two fields of the same shape."""
    if a.shape != b.shape:
        raise ValueError(f"shape mismatch: {a.shape} vs {b.shape}")
    return bool(np.array_equal(a.view(np.uint64), b.view(np.uint64)))


def first_difference(a: np.ndarray, b: np.ndarray):
    """``(row, col)`` of the first bitwise-differing cell, or ``None``."""
    if a.shape != b.shape:
        raise ValueError(f"shape mismatch: {a.shape} vs {b.shape}")
    diff = np.argwhere(a.view(np.uint64) != b.view(np.uint64))
    if len(diff) == 0:
        return None
    return tuple(int(x) for x in diff[0])
