import json

import pytest

from actorheat.bench import RunStats
from actorheat.cli import main
from actorheat.report import emit_report, parse_report


@pytest.fixture
def stats():
    return [
        RunStats("seq", 40, [1.3, 1.36, 1.4]),
        RunStats("wavefront", 40, [0.41, 0.42, 0.44]),
        RunStats("dataparallel", 40, [0.39, 0.40, 0.41]),
    ]


def test_empty_json():
    doc = json.loads(emit_report([], "json"))
    assert doc["rows"] == [] and doc["efficiency"] == []


def test_one_row(stats):
    doc = json.loads(emit_report(stats[:1], "json"))
    (row,) = doc["rows"]
    assert set(row) >= {"h", "variant", "reported", "min", "max", "runs"}
    assert doc["efficiency"] == []


def test_efficiency_row(stats):
    doc = json.loads(emit_report(stats, "json"))
    (eff,) = doc["efficiency"]
    # recompute from the reported values: 100 * 0.40 / 0.42 = 95.2
    assert stats[1].reported == 0.42 and stats[2].reported == 0.4
    assert eff == {"h": 40, "reference": "dataparallel", "subject": "wavefront", "percent": 95.0}


@pytest.mark.parametrize("fmt", ["json", "csv"])
def test_round_trip(stats, fmt):
    meta = {"config": {"h": 40}, "warmup": True, "hardware_threads": 4}
    doc = parse_report(emit_report(stats, fmt, meta), fmt)
    assert doc["metadata"] == meta
    for row, s in zip(doc["rows"], stats):
        assert (row["h"], row["variant"], row["reported"], row["min"], row["max"], row["runs"]) == \
            (s.h, s.variant, s.reported, s.t_min, s.t_max_s, s.runs)
    assert doc["efficiency"][0]["percent"] == 95.0


def test_csv_without_efficiency(stats):
    doc = parse_report(emit_report(stats[:1], "csv"), "csv")
    assert len(doc["rows"]) == 1 and doc["efficiency"] == []


def test_markdown_layout(stats):
    md = emit_report(stats, "markdown")
    assert "| H | T_1 seq, s | T_p wavefront, s | T_p dataparallel, s |" in md
    assert "| 40 | 1.35 | 0.42 | 0.4 |" in md
    assert "| 40 | 95 |" in md


def test_emit_is_deterministic(stats):
    assert emit_report(stats, "csv") == emit_report(stats, "csv")


def test_unknown_format(stats):
    with pytest.raises(ValueError):
        emit_report(stats, "xml")


def test_cli_json(capsys):
    assert main(["--h", "6", "--runs", "2", "--workers", "2", "--format", "json", "--verify"]) == 0
    out = capsys.readouterr()
    doc = json.loads(out.out)
    assert doc["metadata"]["config"]["w"] == 12 and doc["metadata"]["config"]["t_max"] == 12
    assert doc["metadata"]["warmup"] is True and "hardware_threads" in doc["metadata"]
    assert [r["variant"] for r in doc["rows"]] == ["seq", "wavefront", "dataparallel"]
    assert "PASS" in out.err


def test_cli_single_variant_csv(capsys):
    assert main(["--h", "5", "--t", "3", "--variant", "seq", "--runs", "1", "--format", "csv"]) == 0
    doc = parse_report(capsys.readouterr().out, "csv")
    assert [r["variant"] for r in doc["rows"]] == ["seq"]
    assert doc["metadata"]["config"]["t_max"] == 3


def test_cli_usage_errors(capsys):
    assert main(["--h", "2"]) == 2
    with pytest.raises(SystemExit) as exc:
        main(["--h", "5", "--format", "xml"])
    assert exc.value.code == 2


def test_cli_verification_failure(monkeypatch, capsys):
    import actorheat.heat as heat

    real = heat.dataparallel_solve

    def broken(field, t_max, workers=1, op=heat.stencil_op):
        real(field, t_max, workers, op)
        field[1, 1] += 1.0

    monkeypatch.setattr(heat, "dataparallel_solve", broken)
    assert main(["--h", "5", "--runs", "1", "--verify"]) == 1
    assert "FAIL first differing cell (1, 1)" in capsys.readouterr().err
