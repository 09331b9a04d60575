"""Render benchmark statistics as JSON, CSV or Markdown tables.

JSON document::

    {
      "metadata": {...},                      # config, warmup, hardware_threads, prng
      "rows": [{"h", "variant", "reported", "digits", "min", "max", "runs", "times_s"}],
      "efficiency": [{"h", "reference", "subject", "percent"}]
    }

CSV carries the same metadata as one ``# {json}`` comment line, then the
rows table, then (if any) a blank line and the efficiency table.
"""

from __future__ import annotations

import csv
import io
import json
from collections import OrderedDict

from .bench import PARALLEL_VARIANTS, RunStats, relative_efficiency

FORMATS = ("json", "csv", "markdown")
ROW_FIELDS = ("h", "variant", "reported", "digits", "min", "max", "runs")
EFF_FIELDS = ("h", "reference", "subject", "percent")

_LABELS = {"seq": "T_1 seq, s", "wavefront": "T_p wavefront, s", "dataparallel": "T_p dataparallel, s"}


def _row(s: RunStats) -> dict:
    return {"h": s.h, "variant": s.variant, "reported": s.reported, "digits": s.digits,
            "min": s.t_min, "max": s.t_max_s, "runs": s.runs}


def efficiency_rows(stats: list[RunStats]) -> list[dict]:
    """Data-parallel time over wavefront time, in percent, per grid height."""
    by_h: dict[int, dict[str, RunStats]] = OrderedDict()
    for s in stats:
        by_h.setdefault(s.h, {})[s.variant] = s
    out = []
    for h, vs in by_h.items():
        if all(v in vs for v in PARALLEL_VARIANTS):
            out.append({"h": h, "reference": "dataparallel", "subject": "wavefront",
                        "percent": relative_efficiency(vs["dataparallel"].reported,
                                                       vs["wavefront"].reported)})
    return out


def emit_report(stats: list[RunStats], fmt: str = "json", metadata: dict | None = None) -> str:
    if fmt not in FORMATS:
        raise ValueError(f"unknown format {fmt!r}; choose from {FORMATS}")
    metadata = metadata or {}
    rows = [_row(s) for s in stats]
    eff = efficiency_rows(stats)
    if fmt == "json":
        for r, s in zip(rows, stats):
            r["times_s"] = list(s.times_s)
        return json.dumps({"metadata": metadata, "rows": rows, "efficiency": eff}, indent=2) + "\n"
    if fmt == "csv":
        buf = io.StringIO()
        buf.write("# " + json.dumps(metadata, sort_keys=True) + "\n")
        w = csv.DictWriter(buf, fieldnames=ROW_FIELDS, lineterminator="\n")
        w.writeheader()
        w.writerows({k: repr(v) if isinstance(v, float) else v for k, v in r.items()} for r in rows)
        if eff:
            buf.write("\n")
            w = csv.DictWriter(buf, fieldnames=EFF_FIELDS, lineterminator="\n")
            w.writeheader()
            w.writerows(eff)
        return buf.getvalue()
    return _markdown(stats, eff, metadata)


def _fmt_time(s: RunStats) -> str:
    return f"{s.reported:.{max(s.digits, 0)}f}"


def _markdown(stats, eff, metadata) -> str:
    lines = []
    if metadata:
        lines.append("<!-- " + json.dumps(metadata, sort_keys=True) + " -->")
        lines.append("")
    variants = [v for v in _LABELS if any(s.variant == v for s in stats)]
    lines.append("| H | " + " | ".join(_LABELS[v] for v in variants) + " |")
    lines.append("|---|" + "---|" * len(variants))
    by_h: dict[int, dict[str, RunStats]] = OrderedDict()
    for s in stats:
        by_h.setdefault(s.h, {})[s.variant] = s
    for h, vs in by_h.items():
        cells = [_fmt_time(vs[v]) if v in vs else "" for v in variants]
        lines.append(f"| {h} | " + " | ".join(cells) + " |")
    if eff:
        lines += ["", "| H | E_dataparallel, % |", "|---|---|"]
        lines += [f"| {e['h']} | {e['percent']:g} |" for e in eff]
    return "\n".join(lines) + "\n"


def parse_report(text: str, fmt: str) -> dict:
    """Inverse of :func:`emit_report` for the machine formats."""
    if fmt == "json":
        return json.loads(text)
    if fmt != "csv":
        raise ValueError(f"cannot parse format {fmt!r}")
    first, _, rest = text.partition("\n")
    if not first.startswith("# "):
        raise ValueError("missing metadata line")
    metadata = json.loads(first[2:])
    rows_part, _, eff_part = rest.partition("\n\n")
    rows = [
        {"h": int(r["h"]), "variant": r["variant"], "reported": float(r["reported"]),
         "digits": int(r["digits"]), "min": float(r["min"]), "max": float(r["max"]),
         "runs": int(r["runs"])}
        for r in csv.DictReader(io.StringIO(rows_part))
    ]
    eff = [
        {"h": int(r["h"]), "reference": r["reference"], "subject": r["subject"],
         "percent": float(r["percent"])}
        for r in csv.DictReader(io.StringIO(eff_part))
    ] if eff_part.strip() else []
    return {"metadata": metadata, "rows": rows, "efficiency": eff}
