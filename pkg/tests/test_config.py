"""Tests for config parsing and report emission."""

import json

import pytest

from rieszlab import parse_config
from rieszlab.config import config_to_dict, default_checks
from rieszlab.errors import ParseError
from rieszlab.reporting import make_report
from rieszlab.suite import emit_report


def parse(payload) -> object:
    return parse_config(json.dumps(payload))


def test_parse_minimal_diagonal_config():
    cfg = parse(
        {
            "dimension": 8,
            "operator": {"kind": "diagonal", "values": [1, 2, 3, 4, 5, 6, 7, 8]},
            "checks": ["biorthogonality"],
        }
    )
    assert cfg.dimension == 8
    assert cfg.operator.kind == "diagonal"
    assert cfg.operator.values == tuple(complex(v) for v in range(1, 9))
    assert cfg.tolerance == 1e-8
    assert cfg.interior_margin == 4
    assert cfg.seed == 0
    assert cfg.checks == ("biorthogonality",)
    assert cfg.alpha.kind == "sqrt_n"


def path_of(payload) -> str:
    with pytest.raises(ParseError) as excinfo:
        parse(payload)
    return excinfo.value.path


def test_parse_rejects_small_dimension():
    payload = {"dimension": 1, "operator": {"kind": "hermite-x"}}
    assert path_of(payload) == "/dimension"


def test_parse_rejects_unknown_check():
    payload = {
        "dimension": 4,
        "operator": {"kind": "hermite-x"},
        "checks": ["no_such_check"],
    }
    assert path_of(payload) == "/checks/0"


def test_parse_rejects_hermite_check_for_diagonal():
    payload = {
        "dimension": 2,
        "operator": {"kind": "diagonal", "values": [1, 2]},
        "checks": ["biorthogonality", "tail_dichotomy"],
    }
    assert path_of(payload) == "/checks/1"


def test_parse_rejects_ccr_for_linear_alpha():
    payload = {
        "dimension": 2,
        "operator": {"kind": "diagonal", "values": [1, 2]},
        "alpha": {"kind": "linear"},
        "checks": ["ccr"],
    }
    assert path_of(payload) == "/checks/0"


def test_parse_rejects_wrong_value_count():
    payload = {"dimension": 3, "operator": {"kind": "diagonal", "values": [1, 2]}}
    assert path_of(payload) == "/operator/values"


def test_parse_dense_with_complex_pairs():
    cfg = parse(
        {
            "dimension": 2,
            "operator": {"kind": "dense", "entries": [1, [0, 1], 0, 1]},
        }
    )
    assert cfg.operator.values == (1 + 0j, 1j, 0j, 1 + 0j)


def test_parse_dense_rejects_bad_entry():
    payload = {"dimension": 2, "operator": {"kind": "dense", "entries": [1, "x", 0, 1]}}
    assert path_of(payload) == "/operator/entries/1"


def test_parse_rejects_unknown_top_level_key():
    payload = {"dimension": 2, "operator": {"kind": "hermite-x"}, "mystery": 1}
    assert path_of(payload) == "/mystery"


def test_parse_rejects_bad_margin_and_tolerance():
    base = {"dimension": 4, "operator": {"kind": "hermite-x"}}
    assert path_of({**base, "interior_margin": 4}) == "/interior_margin"
    assert path_of({**base, "tolerance": 0}) == "/tolerance"
    assert path_of({**base, "seed": -1}) == "/seed"


def test_parse_rejects_short_custom_alpha():
    payload = {
        "dimension": 4,
        "operator": {"kind": "hermite-x"},
        "alpha": {"kind": "custom", "values": [0, 1]},
    }
    assert path_of(payload) == "/alpha/values"


def test_parse_rejects_invalid_json():
    with pytest.raises(ParseError) as excinfo:
        parse_config("{not json")
    assert excinfo.value.path == "/"


def test_default_checks_cover_operator_kinds():
    diag_checks = default_checks("diagonal", "sqrt_n")
    assert "ccr" in diag_checks
    assert "tail_dichotomy" not in diag_checks
    assert "ccr" not in default_checks("diagonal", "linear")
    hermite_checks = default_checks("hermite-x", "sqrt_n")
    for name in ("hermite_oracle", "frame_bound_growth", "tail_dichotomy"):
        assert name in hermite_checks


def test_config_round_trip():
    cfg = parse(
        {
            "dimension": 4,
            "operator": {"kind": "upper-unipotent", "off_diagonal": 0.5},
            "alpha": {"kind": "custom", "values": [0, 1, 2, 3], "r": 1.5},
            "tolerance": 1e-7,
            "seed": 11,
        }
    )
    again = parse_config(json.dumps(config_to_dict(cfg)))
    assert again == cfg


def test_emit_report_empty():
    text = emit_report([], fmt="json", config={"dimension": 2})
    doc = json.loads(text)
    assert doc["reports"] == []
    assert doc["config"] == {"dimension": 2}
    assert doc["schema"] == "rieszlab/1"


def test_emit_report_json_fields():
    report = make_report("biorthogonality", 2.75e-11, 1e-8, details={"worst_row": 3})
    doc = json.loads(emit_report([report], fmt="json"))
    entry = doc["reports"][0]
    assert entry["pass"] is True
    assert entry["residual"] == "2.7499999999999999e-11"  # 17 significant digits
    assert entry["details"]["worst_row"] == 3


def test_emit_report_csv_single_row():
    report = make_report("ladder", 0.0, 1e-9)
    text = emit_report([report], fmt="csv")
    lines = text.strip().splitlines()
    assert lines[0] == "name,residual,tolerance,pass"
    assert lines[1].startswith("ladder,0,")
    assert lines[1].endswith(",true")


def test_emit_report_deterministic():
    reports = [
        make_report("b_check", 1e-12, 1e-9, details={"x": 1.0}),
        make_report("a_check", 2e-12, 1e-9),
    ]
    first = emit_report(reports, fmt="json", config={"seed": 0})
    second = emit_report(list(reports), fmt="json", config={"seed": 0})
    assert first == second
    names = [r["name"] for r in json.loads(first)["reports"]]
    assert names == sorted(names)


def test_emit_report_rejects_unknown_format():
    with pytest.raises(ValueError):
        emit_report([], fmt="yaml")
