import json
import math

import pytest

from quakebend.cli import defaults, dumps, load_schema, main, validate_config, ConfigError

COMMANDS = [
    ["holonomy"],
    ["bend"],
    ["cbend"],
    ["framing"],
    ["qgeodesic", "certify"],
    ["experiment", "pinch"],
    ["experiment", "trace-identity"],
]


def run(tmp_path, args, cfg=None, name="out"):
    argv = list(args) + ["--out", str(tmp_path / name)]
    if cfg is not None:
        path = tmp_path / f"{name}.json"
        path.write_text(json.dumps(cfg))
        argv += ["--config", str(path)]
    return main(argv)


def report(tmp_path, name="out"):
    return json.loads((tmp_path / name / "report.json").read_text())


@pytest.mark.parametrize("args", COMMANDS, ids=" ".join)
def test_runs_are_byte_identical(tmp_path, args):
    assert run(tmp_path, args, name="a") == 0
    assert run(tmp_path, args, name="b") == 0
    a = sorted(p.name for p in (tmp_path / "a").iterdir())
    assert a == sorted(p.name for p in (tmp_path / "b").iterdir())
    for f in a:
        assert (tmp_path / "a" / f).read_bytes() == (tmp_path / "b" / f).read_bytes()


def test_defaults_are_valid():
    for cmd in ["holonomy", "qgeodesic certify"] + [f"experiment {k}" for k in ("pinch", "holomorphy")]:
        validate_config(defaults(cmd))


def test_bad_curve_reports_pointer(tmp_path, capsys):
    cfg = {"schema": "qb-config/1", "multiloop": [{"curve": 7, "weight": 1.0}]}
    assert run(tmp_path, ["bend"], cfg) == 1
    assert "/multiloop/0/curve" in capsys.readouterr().err


def test_schema_violation_reports_pointer(tmp_path, capsys):
    cfg = {"fn": {"lengths": [1, 1, "x"], "twists": [0, 0, 0]}}
    assert run(tmp_path, ["holonomy"], cfg) == 1
    assert "/fn/lengths/2" in capsys.readouterr().err


def test_wrong_fn_length(tmp_path, capsys):
    cfg = {"fn": {"lengths": [1, 1], "twists": [0, 0]}}
    assert run(tmp_path, ["holonomy"], cfg) == 1
    assert "/fn/lengths" in capsys.readouterr().err


def test_nonpositive_length(tmp_path, capsys):
    cfg = {"fn": {"lengths": [1, -1, 1], "twists": [0, 0, 0]}}
    assert run(tmp_path, ["holonomy"], cfg) == 1
    assert "/fn/lengths/1" in capsys.readouterr().err


def test_unreadable_config(tmp_path, capsys):
    (tmp_path / "c.json").write_text("{not json")
    assert main(["holonomy", "--config", str(tmp_path / "c.json"), "--out", str(tmp_path)]) == 1
    assert "invalid JSON" in capsys.readouterr().err


def test_unknown_command_exits_one():
    with pytest.raises(SystemExit) as e:
        main(["nope"])
    assert e.value.code == 1


def test_expect_mismatch_exits_two(tmp_path):
    assert run(tmp_path, ["holonomy", "--expect", "ok"]) == 0
    assert run(tmp_path, ["holonomy", "--expect", "relation_defect"]) == 2
    assert run(tmp_path, ["holonomy"], {"expect": "relation_defect"}) == 2


def test_weight_zero_bend_reproduces_holonomy(tmp_path):
    cfg = {"multiloop": [{"curve": 1, "weight": 0.0}]}
    assert run(tmp_path, ["bend"], cfg, name="bend") == 0
    assert run(tmp_path, ["holonomy"], name="hol") == 0
    bent = (tmp_path / "bend" / "character.csv").read_text().splitlines()[1:]
    hol = (tmp_path / "hol" / "character.csv").read_text().splitlines()[1:]
    assert bent == hol


def test_cbend_writes_both_factors(tmp_path):
    assert run(tmp_path, ["cbend"]) == 0
    first = (tmp_path / "out" / "first.csv").read_text().splitlines()
    second = (tmp_path / "out" / "second.csv").read_text().splitlines()
    assert first[1] == "step,word,re,im" and len(first) == len(second) == 27
    r = report(tmp_path)
    assert r["verdict"] == "anti_diagonal"


def test_framing_override(tmp_path):
    cfg = {"framing": [{"curve": 0, "u": 0, "v": "inf"}]}
    assert run(tmp_path, ["framing"], cfg) == 0
    assert report(tmp_path)["verdict"] == "invalid"


def test_framing_must_belong_to_multiloop(tmp_path, capsys):
    cfg = {"framing": [{"curve": 2, "u": 0, "v": "inf"}]}
    assert run(tmp_path, ["framing"], cfg) == 1
    assert "/framing/0/curve" in capsys.readouterr().err


def test_experiment_kind_must_match(tmp_path, capsys):
    assert run(tmp_path, ["experiment", "pinch"], {"experiment": {"kind": "properness"}}) == 1
    assert "/experiment/kind" in capsys.readouterr().err


def test_pinch_report(tmp_path):
    assert run(tmp_path, ["experiment", "pinch"], {"multiloop": [{"curve": 0, "weight": math.pi / 2}]}) == 0
    r = report(tmp_path)
    assert r["verdict"] == "diverged"
    assert len(r["result"]["sup_norms"]) == 50
    rows = (tmp_path / "out" / "sweep.csv").read_text().splitlines()
    assert len(rows) == 2 + 50 * 25


def test_qgeodesic_vertices(tmp_path):
    cfg = {"qgeodesic": {"curve": {"vertices": [[0, 0, 1], [0, 0, 1e30]]}, "samples": 100}}
    assert run(tmp_path, ["qgeodesic", "certify"], cfg) == 0
    assert report(tmp_path)["verdict"] == "certified"


def test_output_format_and_prefix(tmp_path):
    assert run(tmp_path, ["holonomy"], {"output": {"format": "csv", "prefix": "x-"}}) == 0
    assert sorted(p.name for p in (tmp_path / "out").iterdir()) == ["x-character.csv"]


def test_dumps_is_canonical():
    text = dumps({"b": [1.5, complex(1, -2)], "a": float("inf"), "c": 0.1})
    assert text.index('"a"') < text.index('"b"') < text.index('"c"')
    assert '"inf"' in text and "0.10000000000000001" in text
    assert json.loads(text)["b"][1] == {"im": -2.0, "re": 1.0}


def test_schema_loads():
    assert load_schema()["$id"] == "qb-config/1"
    with pytest.raises(ConfigError):
        validate_config({"surface": {"genus": 1}})
