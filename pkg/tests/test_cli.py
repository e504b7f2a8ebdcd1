import json

import pytest
from hypothesis import given, strategies as st

from vrx.cli import build_instance, main, parse_instance, run_suite
from vrx.errors import BuildError, ParseError


@pytest.mark.parametrize("s", [
    "comm:zmod:30", "virasoro:z:1", "virasoro:zmod:6:1:lift=1", "virasoro:zmod:6:1:native",
    "virasoro:z:-3:N=5", "commhs:poly:z:x:deg=12", "comm:poly:zmod:5:x:deg=3",
    "dsum(comm:zmod:3,virasoro:zmod:3:1)", "tensor(virasoro:z:1,virasoro:z:1):cap=5",
    "dsum(tensor(comm:z,comm:z),comm:z)",
])
def test_round_trip(s):
    assert str(parse_instance(s)) == s


def test_bare_lift_is_normalized():
    assert str(parse_instance("virasoro:zmod:6:1:7")) == "virasoro:zmod:6:1:lift=7"


@pytest.mark.parametrize("s,pos", [("virasoro:q:1", 9), ("comm:zmod:30x", 12), ("dsum(comm:z comm:z)", 11),
                                   ("commhs:z:deg=3", 7), ("virasoro:z:", 11), ("virasoro:z:1:foo", 13),
                                   ("nothing", 0)])
def test_parse_error_positions(s, pos):
    with pytest.raises(ParseError) as exc:
        parse_instance(s)
    assert exc.value.position == pos


@given(st.sampled_from(["z", "zmod:7", "zmod:12"]), st.integers(-9, 9), st.integers(2, 9))
def test_virasoro_specs_build_with_matching_names(ring, c, N):
    s = f"virasoro:{ring}:{c}:N={N}"
    V = build_instance(s)
    assert V.hi == N
    assert str(parse_instance(V.spec)).startswith("virasoro:")


def test_build_errors_are_wrapped():
    with pytest.raises(BuildError):
        build_instance("virasoro:zmod:6:1:lift=2")
    with pytest.raises(BuildError):
        build_instance("dsum(comm:zmod:3,comm:zmod:5)")


def test_run_suite_order_is_declaration_order():
    _, reps = run_suite("virasoro:z:1", ("skew", "vacuum", "hs"), max_weight=3, bound=2, cutoff=4)
    assert [r.check for r in reps] == ["skew", "vacuum", "canonical_hs"]
    assert all(r.ok for r in reps)


def run(capsys, *argv):
    code = main(list(argv))
    return code, capsys.readouterr().out


def test_binom_value(capsys):
    assert run(capsys, "binom", "-2", "3") == (0, "-4\n")


def test_binom_identities_json(capsys):
    code, out = run(capsys, "binom", "--check-identities", "--range", "5", "--json")
    data = json.loads(out)
    assert code == 0 and data["schemaVersion"] == 1
    assert [d["identity"] for d in data["identities"]] == ["bi1", "bi2", "bi3", "bi4"]


def test_verify_json_and_exit_code(capsys, tmp_path):
    out_file = tmp_path / "r.json"
    code, out = run(capsys, "verify", "--instance", "virasoro:z:1", "--suite", "vacuum,skew",
                    "--max-weight", "3", "--cutoff", "4", "--json", "--out", str(out_file))
    data = json.loads(out)
    assert code == 0
    assert [r["check"] for r in data["reports"]] == ["vacuum", "skew"]
    assert set(data["reports"][0]) >= {"check", "instance", "gridSize", "passed", "skipped", "failed"}
    assert json.loads(out_file.read_text()) == data


def test_parse_failure_exit_code(capsys):
    assert main(["verify", "--instance", "virasoro:q:1"]) == 2


def test_unknown_suite_is_a_usage_error():
    assert main(["verify", "--instance", "comm:zmod:30", "--suite", "nope"]) == 2


def test_failing_check_exits_one(capsys, monkeypatch):
    from vrx import vertexcore
    from vrx.report import CheckReport

    def bad(V, mw, bound=None):
        rep = CheckReport("vacuum", V.spec)
        rep.record(False, {"n": -1})
        return rep

    monkeypatch.setitem(vertexcore.SUITES, "vacuum", bad)
    code, out = run(capsys, "verify", "--instance", "comm:zmod:30", "--suite", "vacuum", "--json")
    assert code == 1
    assert json.loads(out)["reports"][0]["firstFailure"] == {"n": -1}


def test_hs_demo(capsys):
    code, out = run(capsys, "hs", "demo", "--degree", "6", "--cutoff", "4", "--json")
    data = json.loads(out)
    assert code == 0 and data["instance"] == "commhs:poly:z:x:deg=6"
    assert all(r["failed"] == 0 for r in data["reports"])


def test_hs_demo_cutoff_defaults_to_degree(capsys):
    code, out = run(capsys, "hs", "demo", "--degree", "5", "--json")
    assert code == 0
    recovered = [r for r in json.loads(out)["reports"] if r["check"] == "recovered_hs"][0]
    assert recovered["gridSize"] == 6 * 6


def test_hs_demo_cutoff_above_degree_is_usage_error(capsys):
    assert run(capsys, "hs", "demo", "--degree", "4", "--cutoff", "9")[0] == 2


def test_virasoro_build(capsys, tmp_path):
    out_file = tmp_path / "M.json"
    code, _ = run(capsys, "virasoro", "build", "--base", "z", "--cprime", "1", "--max-weight", "5",
                  "--out", str(out_file))
    data = json.loads(out_file.read_text())
    assert code == 0
    assert data["dimensions"] == [1, 0, 1, 1, 2, 2]
    assert ["L(-2)1", 3, "L(-2)1", [["1", "1"]]] in data["structureConstants"]


def test_reconstruct(capsys):
    code, out = run(capsys, "reconstruct", "--instance", "virasoro:z:1", "--max-weight", "4",
                    "--cutoff", "4", "--json")
    assert code == 0 and json.loads(out)["report"]["failed"] == 0


@pytest.mark.parametrize("op,key,value", [("idempotents", "count", 8), ("characteristic", "characteristic", 30)])
def test_structure_ops(capsys, op, key, value):
    code, out = run(capsys, "structure", "--instance", "comm:zmod:30", "--op", op, "--json")
    assert code == 0 and json.loads(out)[key] == value


def test_structure_two_instances(capsys):
    code, out = run(capsys, "structure", "--instance", "virasoro:zmod:3:1", "--instance", "comm:zmod:3",
                    "--op", "dsum", "--cutoff", "4", "--json")
    data = json.loads(out)
    assert code == 0 and len(data["idempotents"]) == 4


def test_structure_tensor(capsys):
    code, out = run(capsys, "structure", "--instance", "tensor(virasoro:z:1,virasoro:z:1)", "--op", "tensor",
                    "--cutoff", "6", "--max-weight", "4", "--json")
    data = json.loads(out)
    assert code == 0 and [r["check"] for r in data["reports"]] == ["tensor_hs", "virasoro_vector"]


def test_pierce_command(capsys):
    code, out = run(capsys, "pierce", "--instance", "comm:zmod:60", "--json")
    data = json.loads(out)
    assert code == 0
    assert data["idempotentCount"] == 8 and data["stonePoints"] == 3
    assert data["vnr"] is False and data["vnrWitness"] == [["1", "2"]]
    assert data["globalSectionsIso"] == "pass"


def test_output_is_deterministic(capsys):
    argv = ["verify", "--instance", "commhs:poly:z:x:deg=4", "--max-weight", "0", "--bound", "2", "--json"]
    _, a = run(capsys, *argv)
    _, b = run(capsys, *argv)
    assert a == b
