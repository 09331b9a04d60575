"""Benchmark series, summary statistics and cross-variant verification."""

from __future__ import annotations

import itertools
import math
import threading
import time
from dataclasses import dataclass, field
from typing import Callable, Mapping, Optional

import numpy as np

from . import heat

VARIANTS = ("seq", "wavefront", "dataparallel")
PARALLEL_VARIANTS = ("wavefront", "dataparallel")

# Pinned generator: numpy PCG64 seeded with the integer seed, float64 draws
# from Generator.random (uniform on [0, 1)).
PRNG_NAME = "numpy.random.PCG64"


@dataclass
class BenchConfig:
    h: int
    w: Optional[int] = None
    t_max: Optional[int] = None
    workers: int = 1
    runs: int = 19
    seed: int = 0
    variants: tuple[str, ...] = VARIANTS
    verify: bool = False
    warmup: bool = True

    def __post_init__(self):
        if self.w is None:
            self.w = 2 * self.h
        if self.t_max is None:
            self.t_max = 2 * self.h
        self.variants = tuple(self.variants)
        if self.h < 3 or self.w < 3:
            raise ValueError(f"grid must be at least 3x3, got {self.h}x{self.w}")
        if self.t_max < 1:
            raise ValueError(f"t_max must be >= 1, got {self.t_max}")
        if self.runs < 1:
            raise ValueError(f"runs must be >= 1, got {self.runs}")
        if self.workers < 1:
            raise ValueError(f"workers must be >= 1, got {self.workers}")
        unknown = set(self.variants) - set(VARIANTS)
        if unknown or not self.variants:
            raise ValueError(f"unknown variants {sorted(unknown)}; choose from {VARIANTS}")


@dataclass
class RunStats:
    variant: str
    h: int
    times_s: list[float]
    t_min: float = field(init=False)
    t_max_s: float = field(init=False)
    reported: float = field(init=False)
    digits: int = field(init=False)

    def __post_init__(self):
        self.t_min = min(self.times_s)
        self.t_max_s = max(self.times_s)
        self.reported, self.digits = summarize(self.times_s)

    @property
    def runs(self) -> int:
        return len(self.times_s)


def init_field(h: int, w: int, seed: int) -> np.ndarray:
    """Seeded field with every cell uniform on [0, 1)."""
    if h < 3 or w < 3:
        raise ValueError(f"grid must be at least 3x3, got {h}x{w}")
    return np.random.Generator(np.random.PCG64(seed)).random((h, w))


def solver(variant: str, workers: int = 1, op: heat.RowOp = heat.stencil_op) -> Callable:
    """Return ``solve(field, t_max)`` for a variant name."""
    if variant == "seq":
        return lambda f, t: heat.seq_solve(f, t, op=op)
    if variant == "wavefront":
        return lambda f, t: heat.wavefront_solve(f, t, workers, op=op)
    if variant == "dataparallel":
        return lambda f, t: heat.dataparallel_solve(f, t, workers, op=op)
    raise ValueError(f"unknown variant {variant!r}")


def time_variant(cfg: BenchConfig, variant: str) -> RunStats:
    """Time ``cfg.runs`` solves of one variant, each on a fresh seeded field.

    Only the solve call is inside the timed region. With ``cfg.warmup`` an
    extra untimed solve runs first.
    """
    if variant not in cfg.variants:
        raise ValueError(f"variant {variant!r} not configured")
    solve = solver(variant, cfg.workers)
    if cfg.warmup:
        solve(init_field(cfg.h, cfg.w, cfg.seed), cfg.t_max)
    times = []
    for _ in range(cfg.runs):
        f = init_field(cfg.h, cfg.w, cfg.seed)
        t0 = time.perf_counter()
        solve(f, cfg.t_max)
        times.append(time.perf_counter() - t0)
    return RunStats(variant, cfg.h, times)


def summarize(times_s) -> tuple[float, int]:
    """Mean of the series kept to its significant digits.

    Returns ``(value, digits)``: the mean rounded to the coarsest number of
    decimal places ``digits`` whose rounded value lies strictly between the
    series minimum and maximum. ``digits`` may be negative. A zero-spread
    series keeps the full-precision mean.

    The spread is the yardstick because a further run lands inside
    ``[min, max]`` of ``n`` runs with probability ``(n - 1) / (n + 1)``,
    i.e. 90% for 19 runs.
    """
    xs = [float(x) for x in times_s]
    if not xs:
        raise ValueError("empty series")
    lo, hi = min(xs), max(xs)
    mean = min(max(math.fsum(xs) / len(xs), lo), hi)
    if lo == hi:
        return lo, _digits_of(lo)
    # start above the magnitude of the largest time so no coarser place is skipped
    first = -math.floor(math.log10(hi)) - 1 if hi > 0 else 0
    # 17 significant digits reproduce any double
    for d in range(first, first + 18):
        r = round(mean, d)
        if lo < r < hi:
            return r, d
    return mean, _digits_of(mean)


def _digits_of(x: float) -> int:
    """Decimal places in the shortest repr of ``x``."""
    if not math.isfinite(x):
        return 0
    mantissa, _, exp = repr(x).partition("e")
    places = len(mantissa.partition(".")[2].rstrip("0"))
    return max(places - int(exp or 0), 0)


def relative_efficiency(t_other: float, t_templet: float) -> float:
    """``100 * t_other / t_templet`` to 2 significant figures."""
    if not t_templet > 0:
        raise ValueError(f"reference time must be positive, got {t_templet}")
    return float(f"{100.0 * t_other / t_templet:.2g}")


class OpCounter:
    """Thread-safe stencil wrapper that counts calls."""

    def __init__(self, op: heat.RowOp = heat.stencil_op):
        self.op = op
        self.count = 0
        self._lock = threading.Lock()

    def __call__(self, field, i):
        self.op(field, i)
        with self._lock:
            self.count += 1


@dataclass
class PairCheck:
    a: str
    b: str
    equal: bool
    first_diff: Optional[tuple[int, int]] = None


@dataclass
class VerifyReport:
    h: int
    w: int
    t_max: int
    workers: int
    seed: int
    pairs: list[PairCheck]
    op_counts: dict[str, int]
    expected_ops: int
    resend_events: dict[str, int]

    @property
    def ok(self) -> bool:
        return (all(p.equal for p in self.pairs)
                and all(c == self.expected_ops for c in self.op_counts.values())
                and not any(self.resend_events.values()))

    def lines(self) -> list[str]:
        out = []
        for p in self.pairs:
            status = "PASS" if p.equal else f"FAIL first differing cell {p.first_diff}"
            out.append(f"fields {p.a} == {p.b}: {status}")
        for v, c in self.op_counts.items():
            status = "PASS" if c == self.expected_ops else "FAIL"
            out.append(f"ops {v}: {c} (expected {self.expected_ops}) {status}")
        for v, r in self.resend_events.items():
            out.append(f"resends {v}: {r} {'PASS' if r == 0 else 'FAIL'}")
        return out


def verify_all(cfg: BenchConfig, solvers: Optional[Mapping[str, Callable]] = None) -> VerifyReport:
    """Run every configured variant once and compare the fields bitwise.

    ``solvers`` maps variant names to ``solve(field, t_max, op)`` callables
    and overrides the built-in ones (used to plant faulty variants).
    """
    if len(cfg.variants) < 2:
        raise ValueError("verification needs at least two variants")
    solvers = dict(solvers or {})
    results, counts, resends = {}, {}, {}
    for v in cfg.variants:
        f = init_field(cfg.h, cfg.w, cfg.seed)
        counter = OpCounter()
        if v in solvers:
            out = solvers[v](f, cfg.t_max, counter)
        else:
            out = solver(v, cfg.workers, counter)(f, cfg.t_max)
        results[v] = f
        counts[v] = counter.count
        if isinstance(out, heat.Wavefront):
            resends[v] = out.engine.stats.resend_events
    pairs = []
    for a, b in itertools.combinations(cfg.variants, 2):
        diff = heat.first_difference(results[a], results[b])
        pairs.append(PairCheck(a, b, diff is None, diff))
    return VerifyReport(cfg.h, cfg.w, cfg.t_max, cfg.workers, cfg.seed, pairs,
                        counts, (cfg.h - 2) * cfg.t_max, resends)
