import io
import json
import subprocess
import sys
from importlib import resources
from pathlib import Path

import jsonschema
import pytest

from hypext import extension, graph_from_dict, graph_to_dict, is_isomorphic, loads, dumps
from hypext.cli import run

DATA = Path(__file__).parent / "data"
SCHEMAS = resources.files("hypext") / "schemas"


def schema(name):
    return json.loads((SCHEMAS / f"{name}.json").read_text())


def call(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run([str(a) for a in argv], stdout=out, stderr=err)
    text = out.getvalue()
    return code, json.loads(text) if text.strip() else None, err.getvalue()


def data(name):
    return str(DATA / name)


def test_schemas_are_valid_documents():
    names = sorted(p.name for p in SCHEMAS.iterdir() if p.name.endswith(".json"))
    assert len(names) >= 12
    for name in names:
        jsonschema.Draft202012Validator.check_schema(json.loads((SCHEMAS / name).read_text()))


@pytest.mark.parametrize("path", sorted(DATA.glob("*.json")))
def test_corpus_round_trip(path):
    obj = json.loads(path.read_text())
    if "members" in obj:
        jsonschema.validate(obj, schema("family"))
        return
    jsonschema.validate(obj, schema("graph"))
    g = graph_from_dict(obj)
    assert loads(dumps(g)) == g
    assert graph_from_dict(graph_to_dict(g)) == g


# -- construct -----------------------------------------------------------------------


def test_construct_ext_labels_fresh_vertices():
    code, out, err = call("construct", "ext", "--in", data("path_expansion.json"))
    assert code == 0
    jsonschema.validate(out, schema("construct"))
    assert out["labels"] == ["a", "b", "c", "x", "y"]
    assert [0, 2, 4] in out["edges"]
    assert "Ext" in err


@pytest.mark.parametrize(
    "argv,edges,n",
    [
        (["construct", "complete", "--t", 4, "--r", 3], 4, 4),
        (["construct", "edgeless", "--t", 5, "--r", 3], 0, 5),
        (["construct", "blowup", "--t", 4, "--r", 3, "--n", 8], 32, 8),
        (["construct", "blowup", "--parts", "2,1,1", "--r", 2], 5, 4),
        (["construct", "pad", "--in", data("k4_3.json"), "--t", 6], 4, 6),
        (["construct", "expand", "--in", data("k3.json"), "--r", 4], 3, 5),
    ],
)
def test_construct_builders(argv, edges, n):
    code, out, _ = call(*argv)
    assert code == 0
    jsonschema.validate(out, schema("construct"))
    assert (len(out["edges"]), out["n"]) == (edges, n)


def test_construct_wext_both_modes():
    for extra in ([], ["--no-share"]):
        code, out, _ = call("construct", "wext", "--in", data("path_expansion.json"), *extra)
        assert code == 0
        jsonschema.validate(out, schema("construct"))
        assert len(out["members"]) == 2


def test_construct_missing_flag_is_usage_error():
    code, out, err = call("construct", "complete", "--t", 4)
    assert code == 2 and out is None and "--r" in err


# -- check ----------------------------------------------------------------------------


def test_check_spike_with_labels():
    code, out, _ = call("check", "spike", "--in", data("path_expansion_ext.json"), "--edge", "a,c,y", "--vertex", "a", "--t", 3)
    assert code == 0
    jsonschema.validate(out, schema("check"))
    jsonschema.validate(out, schema("spike"))
    assert out["verdict"] is True and out["free_vertices"] == [4]


def test_check_spike_false_exits_one():
    code, out, _ = call("check", "spike", "--graph", data("k4_3.json"), "--edge", "0,1,2", "--vertex", "0", "--t", 3)
    assert code == 1 and out["verdict"] is False
    jsonschema.validate(out, schema("check"))


@pytest.mark.parametrize(
    "argv,code",
    [
        (["check", "colorable", "--graph", data("k3.json"), "--t", 2], 1),
        (["check", "colorable", "--graph", data("k3.json"), "--t", 3], 0),
        (["check", "critical", "--graph", data("k3.json"), "--t", 2], 0),
        (["check", "freely-critical", "--graph", data("path_expansion_ext.json"), "--edge", "0,2,4", "--t", 3], 0),
        (["check", "sharply-critical", "--graph", data("edgeless_5_3_ext.json"), "--t", 4], 0),
        (["check", "sharply-critical", "--graph", data("k4_3.json"), "--t", 4], 1),
        (["check", "free", "--graph", data("turan_6_3.json"), "--family", data("k4_family.json")], 0),
        (["check", "free", "--graph", data("path_expansion_ext.json"), "--family", data("ext_path_family.json")], 1),
    ],
)
def test_check_commands(argv, code):
    got, out, _ = call(*argv)
    assert got == code
    jsonschema.validate(out, schema("check"))


def test_check_unknown_label():
    code, _, err = call("check", "spike", "--graph", data("path_expansion_ext.json"), "--edge", "a,c,q", "--vertex", "a", "--t", 3)
    assert code == 2 and "q" in err


# -- lagrangian, fcurve ----------------------------------------------------------------------


def test_lagrangian_command():
    code, out, _ = call("lagrangian", "--graph", data("k4_3.json"), "--certify", "--seed", 4)
    assert code == 0
    jsonschema.validate(out, schema("lagrangian"))
    assert out["value"] == pytest.approx(4 / 64, abs=1e-9)
    assert out["certified"] and out["seed"] == 4


def test_fcurve_command():
    code, out, _ = call("fcurve", "--r", 3, "--t", 10, "--range", "4:100")
    assert code == 0
    jsonschema.validate(out, schema("fcurve"))
    assert out["threshold"] is not None and len(out["grid"]) == 97
    assert call("fcurve", "--r", 3, "--t", 10, "--range", "4")[0] == 2


# -- turan ------------------------------------------------------------------------------------


def test_turan_command():
    code, out, _ = call("turan", "--n", 6, "--forbid", data("k4_family.json"))
    assert code == 0
    jsonschema.validate(out, schema("turan"))
    jsonschema.validate(out, schema("search_report"))
    assert out["ex_value"] == 12 and out["unique"] and out["seed"] == 0


def test_turan_bruteforce_oracle():
    code, out, _ = call("turan", "--n", 5, "--forbid", data("k3.json"), "--oracle-bruteforce")
    assert code == 0
    jsonschema.validate(out, schema("turan"))
    assert out["ex_value"] == 6 and out["method"] == "brute-force"


def test_turan_budget_exit_and_checkpoint(tmp_path):
    ck = tmp_path / "ck.json"
    code, out, err = call("turan", "--n", 7, "--forbid", data("k4_family.json"), "--max-nodes", 5, "--checkpoint", ck)
    assert code == 3
    jsonschema.validate(out, schema("turan"))
    assert out["lower_bound_only"] and "budget" in err
    jsonschema.validate(json.loads(ck.read_text()), schema("checkpoint"))
    code, out, _ = call("turan", "--n", 7, "--forbid", data("k4_family.json"), "--checkpoint", ck)
    assert code == 0 and out["ex_value"] == 16 and out["exact"]


def test_turan_candidate():
    code, out, _ = call("turan", "--n", 6, "--forbid", data("k4_family.json"), "--candidate", data("turan_6_3.json"))
    assert code == 0
    jsonschema.validate(out, schema("turan"))
    assert out["matches"] and out["unique"]


def test_turan_guard_is_usage_error():
    assert call("turan", "--n", 12, "--forbid", data("k3.json"))[0] == 2


# -- distance, probes, suite -----------------------------------------------------------------


def test_distance_command():
    for flag, mode in (("--exact", "exact"), ("--heuristic", "heuristic")):
        code, out, _ = call("distance", "--graph", data("blowup_4_3_8.json"), "--t", 4, flag)
        assert code == 0
        jsonschema.validate(out, schema("distance"))
        assert out["value"] == 0 and out["mode"] == mode
        assert out["certified"] == (mode == "exact")


@pytest.mark.parametrize(
    "argv,code",
    [
        (["probe", "blowup-edges", "--t", 4, "--r", 3, "--n", 8], 0),
        (["probe", "stability", "--graph", data("turan_6_3.json"), "--t", 3], 0),
        (["probe", "sidolem", "--graph", data("k3.json"), "--mu", "0.34,0.33,0.33", "--u", 0, "--eps", 0.3], 0),
        (["probe", "sidorenko", "--graph", data("k4_3.json"), "--mu", "0.25,0.25,0.25,0.25", "--t", 4], 0),
    ],
)
def test_probe_commands(argv, code):
    got, out, _ = call(*argv)
    assert got == code
    jsonschema.validate(out, schema("probe"))
    assert "seed" in out or "value" in out


def test_suite_subset():
    code, out, err = call("suite", "acceptance", "--only", "4,7")
    assert code == 0
    jsonschema.validate(out, schema("suite"))
    assert [c["number"] for c in out["criteria"]] == [4, 7]
    assert err.count("[PASS]") == 2


# -- errors and config --------------------------------------------------------------------------


def test_parse_error_is_position_precise(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text('{"r": 2, "n": 3, "edges": [[0, 1], [0, 5]]}')
    code, out, err = call("lagrangian", "--graph", bad)
    assert code == 2 and out is None
    assert "$.edges[1][1]" in err and "bad.json" in err
    bad.write_text('{"r": 2,\n "n": 3,')
    code, _, err = call("lagrangian", "--graph", bad)
    assert code == 2 and "line 2" in err


def test_usage_errors():
    code, _, err = call("frobnicate")
    assert code == 2 and "invalid choice" in err
    assert call()[0] == 2
    assert call("lagrangian", "--graph", "/nonexistent.json")[0] == 2


def test_config_precedence(tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"seed": 7, "max_nodes": 5}))
    jsonschema.validate(json.loads(cfg.read_text()), schema("config"))
    code, out, _ = call("--config", cfg, "turan", "--n", 7, "--forbid", data("k4_family.json"))
    assert code == 3 and out["seed"] == 7
    code, out, _ = call("--config", cfg, "turan", "--n", 7, "--forbid", data("k4_family.json"), "--max-nodes", 10**6, "--seed", 2)
    assert code == 0 and out["seed"] == 2
    cfg.write_text(json.dumps({"bogus": 1}))
    assert call("--config", cfg, "fcurve", "--r", 3, "--t", 5, "--range", "4:6")[0] == 2


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "hypext", "construct", "ext", "--in", data("path_expansion.json")],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0
    g = graph_from_dict(json.loads(proc.stdout))
    assert is_isomorphic(g, extension(graph_from_dict(json.loads((DATA / "path_expansion.json").read_text()))))
