import io
import json
import subprocess
import sys

import pytest
from hypothesis import given
from hypothesis import strategies as st

from anyonqc.cli import run_command
from anyonqc.cli.parser import (Cyclic, DirectProduct, Family, Named, SemidirectPQ, SpecSyntaxError, build_group,
                                parse_group_spec, print_group_spec)
from anyonqc.group_core import FIXTURES, SemidirectSpec, GroupError


def run(*argv):
    out = io.StringIO()
    code, report = run_command(list(argv), out)
    return code, report, out.getvalue()


# ------------------------------------------------------------------ group-spec grammar

@pytest.mark.parametrize("text,order", [("Z3⋊(t=2)Z2", 6), ("Z3xsd(t=2)Z2", 6), ("Z7⋊(t=2)Z3", 21),
                                        ("A4", 12), ("a4", 12), ("Q8", 8), ("S3xZ2", 12), ("D4", 8),
                                        ("(Z2xZ2)xZ3", 12), ("z3z3_q8", 72)])
def test_parse_examples(text, order):
    assert build_group(parse_group_spec(text)).order == order


@pytest.mark.parametrize("text,pos", [("Z3⋊Z2", 2), ("Z3⋊(t=1)Z2", 2), ("", 0), ("Z3x", 3), ("(Z3", 3),
                                      ("Z3)", 2), ("S3⋊(t=2)Z2", 2), ("foo_bar", 0), ("Z0", 0), ("Z3 ? Z2", 3)])
def test_parse_errors_have_positions(text, pos):
    with pytest.raises(SpecSyntaxError) as e:
        parse_group_spec(text)
    assert e.value.pos == pos


def _valid_specs():
    out = []
    for p in (3, 5, 7, 11, 13):
        for q in (2, 3, 5):
            for t in range(2, p):
                try:
                    SemidirectSpec(p, q, t)
                except GroupError:
                    continue
                out.append(SemidirectPQ(p, q, t))
    return out


leaf = st.one_of(st.builds(Cyclic, st.integers(1, 30)),
                 st.builds(Family, st.sampled_from("SAD"), st.integers(1, 9)),
                 st.just(Family("Q", 8)),
                 st.builds(Named, st.sampled_from(sorted(FIXTURES))),
                 st.sampled_from(_valid_specs()))
nodes = st.recursive(leaf, lambda inner: st.lists(inner, min_size=2, max_size=3).map(
    lambda fs: DirectProduct(tuple(f for x in fs for f in (x.factors if isinstance(x, DirectProduct) else (x,))))),
    max_leaves=4)


@given(nodes)
def test_print_parse_round_trip(node):
    text = print_group_spec(node)
    assert parse_group_spec(text) == node
    assert print_group_spec(parse_group_spec(text)) == text


# ------------------------------------------------------------------ commands and exit codes

def test_classify():
    code, rep, out = run("classify", "Z3⋊(t=2)Z2")
    assert code == 0
    assert rep["results"]["power"] == "CX" and rep["results"]["order"] == 6
    assert "power=CX" in out


def test_decompose():
    code, rep, _ = run("decompose", "a4")
    assert code == 0 and rep["results"]["group"] == "a4"


def test_fusion_table_s3_csv():
    code, rep, out = run("fusion-table", "Z3⋊(t=2)Z2")
    assert code == 0 and rep["results"]["route"] == "closed-form"
    lines = out.strip().splitlines()
    assert lines[0] == "i,j,re,im,magnitude2"
    rows = {(r["i"], r["j"]): complex(r["re"], r["im"]) for r in rep["results"]["rows"]}
    assert abs(rows[(1, 1)] - (-0.8660254037844386j)) < 1e-12
    assert abs(rows[(1, 0)] + 0.5) < 1e-12


def test_fusion_table_general_route():
    code, rep, out = run("fusion-table", "a4", "--format", "json")
    assert code == 0 and rep["results"]["route"] == "invariant-vector"
    assert json.loads(out)["rows"]


def test_simulate():
    code, rep, _ = run("simulate", "pp_zero", "--input", "0")
    assert code == 0
    assert rep["results"]["success_probability"] == pytest.approx(1 / 3)
    assert rep["results"]["probability_sum"] == pytest.approx(1)
    code, rep, _ = run("simulate", "toffoli", "--input", "1,1,0")
    assert code == 0 and rep["results"]["max_deficit"] < 1e-9


def test_simulate_sample_mode_seeded():
    a = run("--seed", "3", "simulate", "measure_z", "--mode", "sample", "--input", "uniform")[1]["results"]
    b = run("simulate", "measure_z", "--mode", "sample", "--input", "uniform", "--seed", "3")[1]["results"]
    assert a == b


@pytest.mark.parametrize("argv", [("classify", "Z3⋊Z2"), ("simulate", "nope"), ("verify", "13"),
                                  ("verify", "x"), ("simulate", "magic_p2"), ("simulate", "pp_zero", "--input", "7"),
                                  ("frobnicate",), ()])
def test_usage_errors_exit_2(argv):
    code, rep, _ = run(*argv)
    assert code == 2 and rep["exit_code"] == 2 and "error" in rep


def test_error_report_position():
    code, rep, _ = run("classify", "Z3⋊Z2")
    assert rep["error"]["type"] == "SpecSyntaxError" and rep["error"]["position"] == 2


def test_verify_failure_exits_1():
    code, rep, out = run("verify", "3")
    assert code == 1 and rep["results"]["failed"] == 1
    assert out.startswith("[FAIL]")
    code, rep, out = run("verify", "1,4")
    assert code == 0 and out.count("[PASS]") == 2


def test_json_report_schema(tmp_path):
    path = tmp_path / "r.json"
    code, _, _ = run("classify", "S3", "--json", str(path))
    rep = json.loads(path.read_text())
    assert set(rep) == {"schema", "command", "inputs", "seed", "tolerance", "exit_code", "results", "versions",
                        "timing"}
    assert rep["schema"] == "anyonqc.report/1" and rep["exit_code"] == code == 0


def test_reports_identical_apart_from_timing():
    a = run("simulate", "leakage_correct", "--seed", "5", "--json", "-")[2]
    b = run("simulate", "leakage_correct", "--seed", "5", "--json", "-")[2]
    ja, jb = json.loads(a), json.loads(b)
    ja.pop("timing"), jb.pop("timing")
    assert json.dumps(ja, sort_keys=True) == json.dumps(jb, sort_keys=True)


def test_report_is_rerunnable():
    _, rep, _ = run("simulate", "pp_tilde0", "--input", "random", "--seed", "2")
    inp = rep["inputs"]
    _, rep2, _ = run("simulate", inp["protocol"], "--group", inp["group"], "--input", inp["input"],
                     "--seed", str(inp["seed"]), "--mode", inp["mode"])
    assert rep2["results"] == rep["results"]


def test_console_script_module():
    r = subprocess.run([sys.executable, "-m", "anyonqc", "classify", "A5"], capture_output=True, text=True)
    assert r.returncode == 0 and "power=Toffoli" in r.stdout
