import json

import pytest

from injquiver import __version__
from injquiver.adjoint import e_star
from injquiver.cli import EXIT_BUDGET, EXIT_ERROR, EXIT_OK, EXIT_UNKNOWN, main
from injquiver.quiver import a_n, loop_quiver, quiver_to_json
from injquiver.rep import constant_chain, make_representation, rep_to_json
from injquiver.rep.serialize import morphism_to_json
from injquiver.ring import BaseRing, FinModule, ModuleMap

F2 = BaseRing.gf(2)
Z4 = BaseRing.zmod(2, 2)
A2 = a_n(2)
KK = e_star(A2, 2, FinModule.cyclic(F2, 1))
TWICE = make_representation(A2, Z4, {1: [2], 2: [2]}, {"a1": [[2]]})


def write(tmp_path, obj, name="in.json"):
    p = tmp_path / name
    p.write_text(json.dumps(obj))
    return str(p)


def run(capsys, *argv):
    code = main([*argv, "--json"])
    return code, json.loads(capsys.readouterr().out)


def no_floats(obj):
    if isinstance(obj, float):
        return False
    if isinstance(obj, dict):
        return all(no_floats(v) for v in obj.values())
    if isinstance(obj, list):
        return all(no_floats(v) for v in obj)
    return True


def test_classify_a2(tmp_path, capsys):
    code, rep = run(capsys, "classify", write(tmp_path, quiver_to_json(A2)))
    assert code == EXIT_OK
    assert rep["result"]["classification"] == {"verdict": "yes", "reason": "right-rooted", "note": None}
    assert rep["schema_version"] == 1 and rep["version"] == __version__ and rep["exit_code"] == 0
    assert len(rep["input_sha256"]) == 64


def test_classify_loop_is_unknown_with_note(tmp_path, capsys):
    code, rep = run(capsys, "classify", write(tmp_path, quiver_to_json(loop_quiver())))
    assert code == EXIT_UNKNOWN
    assert "not divisible" in rep["result"]["classification"]["note"]


def test_dangling_arrow(tmp_path, capsys):
    bad = {"vertices": [1], "arrows": [{"id": "a", "src": 1, "tgt": 2}]}
    code, rep = run(capsys, "classify", write(tmp_path, bad))
    assert code == EXIT_ERROR
    assert "unknown vertex" in rep["error"]["message"]


def test_parse_error_names_the_position(tmp_path, capsys):
    p = tmp_path / "broken.json"
    p.write_text('{"vertices": [1,\n ]}')
    code, rep = run(capsys, "classify", str(p))
    assert code == EXIT_ERROR
    assert "line 2" in rep["error"]["message"]


def test_inject_test_injective(tmp_path, capsys):
    code, rep = run(capsys, "inject-test", write(tmp_path, rep_to_json(KK)), "--baer")
    assert code == EXIT_OK
    assert rep["result"]["verdict"]["overall"] == "injective"
    assert rep["result"]["baer_oracle"]["kind"] == "baer"


def test_inject_test_on_a_ray_descriptor(tmp_path, capsys):
    obj = rep_to_json(constant_chain(FinModule.free(Z4, 1)))
    assert obj["descriptor"]["kind"] == "a_inf_plus"
    code, rep = run(capsys, "inject-test", write(tmp_path, obj))
    assert code == EXIT_OK
    assert rep["result"]["ray_criterion"]["injective"] is True


def test_inject_test_loop_is_unknown(tmp_path, capsys):
    L = make_representation(loop_quiver(), F2, {"v": 1}, {"x": [[1]]})
    code, _ = run(capsys, "inject-test", write(tmp_path, rep_to_json(L)))
    assert code == EXIT_UNKNOWN


def test_dims_and_gorenstein(tmp_path, capsys):
    path = write(tmp_path, rep_to_json(TWICE))
    code, rep = run(capsys, "dims", path)
    assert code == EXIT_OK
    assert rep["result"]["injdim"]["exact"] == 1 and rep["result"]["ginjdim"]["exact"] == 1
    assert no_floats(rep)
    code, rep = run(capsys, "gorenstein", path)
    assert code == EXIT_OK
    assert {k: v["holds"] for k, v in rep["result"].items()} == {
        "injective": False, "projective": False, "flat": False}


def test_infinite_dimension_is_exact_text(tmp_path, capsys):
    X = make_representation(A2, Z4, {1: [1]})
    code, rep = run(capsys, "dims", write(tmp_path, rep_to_json(X)))
    assert code == EXIT_OK
    assert rep["result"]["injdim"]["exact"] == "infinity"
    assert no_floats(rep)


@pytest.mark.parametrize("command", ["dual", "flat-test", "decompose"])
def test_other_report_commands(tmp_path, capsys, command):
    code, rep = run(capsys, command, write(tmp_path, rep_to_json(KK)))
    assert code == EXIT_OK and "result" in rep


def test_adjunction_check(tmp_path, capsys):
    code, rep = run(capsys, "adjunction-check", write(tmp_path, rep_to_json(KK)), "--vertex", "2", "--module", "[1]")
    assert code == EXIT_OK
    assert rep["result"]["check"]["payload"]["size"] == 2


def test_budget_exceeded_exit_code(tmp_path, capsys):
    code, rep = run(capsys, "adjunction-check", write(tmp_path, rep_to_json(KK)),
                    "--vertex", "2", "--module", "[1]", "--budget", "1")
    assert code == EXIT_BUDGET and rep["error"]["type"] == "BudgetExceeded"


def test_extend(tmp_path, capsys):
    X = make_representation(A2, Z4, {1: [2], 2: [2]}, {"a1": [[1]]})
    S = make_representation(A2, Z4, {1: [1], 2: [1]}, {"a1": [[1]]})
    from injquiver.rep import RepMorphism

    g = RepMorphism(S, X, {v: ModuleMap(S[v], X[v], [[2]]) for v in (1, 2)})
    problem = {"source": rep_to_json(S), "middle": rep_to_json(X), "target": rep_to_json(X),
               "g": morphism_to_json(g), "h": morphism_to_json(g)}
    code, rep = run(capsys, "extend", write(tmp_path, problem))
    assert code == EXIT_OK
    assert rep["result"]["t"]["components"] == {"1": [[1]], "2": [[1]]}


def test_ring_override(tmp_path, capsys):
    obj = rep_to_json(make_representation(A2, F2, {1: 1, 2: 1}, {"a1": [[1]]}))
    code, rep = run(capsys, "inject-test", write(tmp_path, obj), "--ring", "zmod:2^2")
    # the same exponents over Z/4 describe Z/2 -> Z/2, which is not injective
    assert code == EXIT_OK
    assert rep["result"]["verdict"]["overall"] == "not_injective"


def test_reports_are_deterministic_and_written(tmp_path, capsys):
    path = write(tmp_path, rep_to_json(TWICE))
    out = tmp_path / "report.json"
    _, first = run(capsys, "dims", path, "--out", str(out))
    _, second = run(capsys, "dims", path)
    assert first == second
    assert json.loads(out.read_text()) == first


def test_summary_line(tmp_path, capsys):
    code = main(["classify", write(tmp_path, quiver_to_json(A2))])
    assert code == EXIT_OK
    assert capsys.readouterr().out.strip() == "classify: ok: yes (right-rooted)"


def test_selftest_subset(capsys):
    code = main(["selftest", "--only", "11", "--json"])
    captured = capsys.readouterr()
    assert code == EXIT_OK
    assert json.loads(captured.out)["result"]["criteria"][0]["passed"] is True
    assert "PASS" in captured.err
