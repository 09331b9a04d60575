"""Owned-message actor runtime and heat-equation wavefront benchmarks."""

from .runtime import Actor, Engine, EngineStats, Message, access
from .heat import (dataparallel_solve, dep_ready, fields_equal, seq_solve, stencil_op,
                   wavefront_solve)
from .bench import BenchConfig, RunStats, init_field, relative_efficiency, summarize, verify_all
from .report import emit_report, parse_report

__version__ = "0.1.0"
