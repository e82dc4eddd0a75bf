import io
import json
import subprocess
import sys
from pathlib import Path

import jsonschema
import pytest

from almostcomplex.cli import load_config, run, ConfigError
from almostcomplex.report import load_schema

CONFIGS = Path(__file__).resolve().parent.parent / "demos" / "configs"
REPORT_SCHEMA = load_schema("report.schema.json")


def invoke(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run(list(argv), stdout=out, stderr=err)
    return code, out.getvalue(), err.getvalue()


def write(tmp_path, data, name="cfg.json"):
    p = tmp_path / name
    p.write_text(data if isinstance(data, str) else json.dumps(data))
    return str(p)


@pytest.fixture(scope="module")
def torus_report():
    return invoke("verify-torus", "--json")


# -- verify-torus ------------------------------------------------------------------------

def test_verify_torus_passes(torus_report):
    code, out, err = torus_report
    assert code == 0 and err == ""
    rep = json.loads(out)
    jsonschema.validate(rep, REPORT_SCHEMA)
    names = [c["name"] for c in rep["checks"]]
    for want in ("identity", "criterio", "nijenhuis", "pullback", "certificate"):
        assert any(n.startswith(want) for n in names), want
    identity = next(c for c in rep["checks"] if c["name"].startswith("identity"))
    assert identity["verdict"] == "pass"
    assert identity["summary"]["max_rel_error"] <= 1e-10


def test_verify_torus_is_byte_identical(torus_report):
    assert invoke("verify-torus", "--json")[1] == torus_report[1]


def test_timestamp_is_opt_in(torus_report):
    assert json.loads(torus_report[1])["metadata"]["timestamp"] is None


def test_human_summary_and_out_file(tmp_path):
    target = tmp_path / "report.txt"
    code, out, _ = invoke("nijenhuis", "--config", str(CONFIGS / "nijenhuis_torus.json"), "--points", "5",
                          "--out", str(target))
    assert code == 0 and out == ""
    text = target.read_text()
    assert "[PASS]" in text and "nijenhuis" in text


# -- criterio ------------------------------------------------------------------------

def test_plane_config_fails():
    code, out, err = invoke("criterio", "--config", str(CONFIGS / "plane.json"), "--json")
    assert code == 1
    rep = json.loads(out)
    jsonschema.validate(rep, REPORT_SCHEMA)
    assert rep["checks"][0]["verdict"] == "fail"
    assert "fail" in err


def test_torus_criterio_config_passes():
    assert invoke("criterio", "--config", str(CONFIGS / "torus_criterio.json"))[0] == 0


def test_criterio_without_zero_set_is_inconclusive(tmp_path):
    cfg = {"ambient_dim": 4, "coframe": "standard", "f": {"re": "abs2(z1) + 1", "im": "0"}, "grid": 4}
    code, _, err = invoke("criterio", "--config", write(tmp_path, cfg))
    assert code == 2 and "inconclusive" in err


# -- other subcommands ---------------------------------------------------------------

@pytest.mark.parametrize("name", ["jlambda_periodic.json", "jlambda_n2.json"])
def test_jlambda_configs_pass(name):
    code, out, _ = invoke("jlambda", "--config", str(CONFIGS / name), "--json")
    assert code == 0
    jsonschema.validate(json.loads(out), REPORT_SCHEMA)


def test_tame_configs():
    code, out, _ = invoke("tame", "--config", str(CONFIGS / "tame_torus.json"), "--json")
    assert code == 0
    cert = json.loads(out)["certificates"]
    assert cert and cert[0]["status"] == "emitted"
    code, out, _ = invoke("tame", "--config", str(CONFIGS / "tame_standard.json"), "--json")
    assert code == 2
    assert json.loads(out)["checks"][0]["verdict"] == "refused"


def test_octonion_command():
    code, out, _ = invoke("octonion", "--json", "--grid", "100")
    assert code == 0
    rep = json.loads(out)
    jsonschema.validate(rep, REPORT_SCHEMA)
    assert {c["verdict"] for c in rep["checks"]} == {"pass"}


# -- exit-code contract ---------------------------------------------------------------

def test_malformed_json_exit_3(tmp_path):
    code, out, err = invoke("criterio", "--config", write(tmp_path, "{ not json"))
    assert code == 3 and out == "" and "malformed JSON" in err


def test_unknown_key_names_path(tmp_path):
    cfg = {"ambient_dim": 4, "coframe": "standard", "f": {"re": "x1", "im": "x2"}, "colour": 1}
    code, out, err = invoke("criterio", "--config", write(tmp_path, cfg))
    assert code == 3 and out == ""
    assert "colour" in err


def test_nested_schema_error_path(tmp_path):
    cfg = {"ambient_dim": 4, "coframe": [{"dz": ["1", "0"], "dzbar": ["0", "0"], "extra": 1},
                                         {"dz": ["0", "1"], "dzbar": ["0", "0"]}],
           "f": {"re": "x1", "im": "x2"}}
    with pytest.raises(ConfigError) as info:
        load_config(write(tmp_path, cfg))
    assert "/coframe/0" in str(info.value)


def test_parse_error_exit_3(tmp_path):
    cfg = {"ambient_dim": 4, "coframe": "standard", "f": {"re": "x1 +", "im": "x2"}}
    assert invoke("criterio", "--config", write(tmp_path, cfg))[0] == 3


def test_missing_file_and_usage_errors(tmp_path):
    assert invoke("criterio", "--config", str(tmp_path / "absent.json"))[0] == 3
    assert invoke("criterio")[0] == 3
    assert invoke("no-such-command")[0] == 3


def test_degenerate_coframe_exit_4(tmp_path):
    cfg = {"ambient_dim": 4, "coframe": [{"dz": ["1", "0"], "dzbar": ["0", "0"]},
                                         {"dz": ["1", "0"], "dzbar": ["0", "0"]}]}
    code, out, err = invoke("nijenhuis", "--config", write(tmp_path, cfg), "--points", "3")
    assert code == 4 and out == "" and "DegenerateCoframeError" in err


def test_config_hash_tracks_effective_options():
    a = json.loads(invoke("octonion", "--json", "--grid", "50")[1])["metadata"]["config_hash"]
    b = json.loads(invoke("octonion", "--json", "--grid", "60")[1])["metadata"]["config_hash"]
    assert a != b


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "almostcomplex", "nijenhuis", "--config",
                           str(CONFIGS / "nijenhuis_torus.json"), "--points", "3", "--json"],
                          capture_output=True, text=True, timeout=120)
    assert proc.returncode == 0, proc.stderr
    assert json.loads(proc.stdout)["metadata"]["command"] == "nijenhuis"
