import json

import pytest

from ganea import cli
from ganea import constructions as cx
from ganea import corpus as C
from ganea.cli import EXIT_BUDGET, EXIT_INVARIANT, EXIT_OK, EXIT_PARSE, EXIT_VALIDATION, JobSpec, main, run
from ganea.secat import SecatReport
from ganea.serialize import (ParseError, ValidationError, dump_map, dump_sset, dumps, load_map, load_sset, loads,
                             report_text)


# -- serialization -------------------------------------------------------------------

def test_dumps_is_canonical():
    a = dumps({"b": 1, "a": [1, 2], "c": float("inf")})
    b = dumps({"c": float("inf"), "a": (1, 2), "b": 1})
    assert a == b and a.endswith("\n")
    assert loads(a)["c"] == "inf"


def test_compact_form_is_one_line():
    text = dump_sset(C.torus())
    assert text.count("\n") == 1


@pytest.mark.parametrize("name", sorted(C.CORPUS))
def test_corpus_roundtrip(name):
    X = C.CORPUS[name]()
    Y = load_sset(dump_sset(X))
    assert Y.faces == X.faces and Y.basepoint == X.basepoint


def test_map_roundtrip():
    f = cx.vertex_inclusion(C.torus().pointed())
    g = load_map(dump_map(f))
    assert g.images == f.images and dump_map(g) == dump_map(f)


@pytest.mark.parametrize("text", [
    "not json",
    '{"kind": "map"}',
    '{"kind": "sset", "levels": 3}',
    '{"kind": "sset", "levels": [], "colour": 1}',
    '{"kind": "sset", "levels": [[[]], [[[7, 7, 7], 0]]]}',
])
def test_parse_errors(text):
    with pytest.raises(ParseError):
        load_sset(text)


def test_validation_error_lists_problems():
    obj = json.loads(dump_sset(C.boundary(2)))
    # point an edge's face at a vertex that does not exist
    obj["levels"][1][0][0] = [[], 9]
    with pytest.raises(ValidationError) as e:
        load_sset(json.dumps(obj))
    assert e.value.problems


def test_report_text_renders_nested():
    text = report_text({"a": {"b": [1, 2]}, "c": "x"})
    assert text.splitlines() == ["a:", "  b: [1, 2]", 'c: "x"']


# -- command line ----------------------------------------------------------------------

def _json(job):
    status, text = run(job)
    return status, loads(text)


def test_validate_corpus_space():
    status, doc = _json(JobSpec("validate", space="corpus:T2", format="json-like"))
    assert status == EXIT_OK
    assert doc["report"]["euler_characteristic"] == 0
    assert doc["inputs"]["space"]["name"] == "corpus:T2"


def test_validate_map_file(tmp_path):
    p = tmp_path / "f.json"
    p.write_text(dump_map(cx.vertex_inclusion(C.minimal_circle().pointed())))
    status, doc = _json(JobSpec("validate", map=str(p), format="json-like"))
    assert status == EXIT_OK and doc["report"]["injective"]


def test_homology_command():
    status, doc = _json(JobSpec("homology", space="corpus:RP2", format="json-like"))
    assert status == EXIT_OK
    assert doc["report"]["homology"][1] == {"degree": 1, "betti": 0, "torsion": [2]}


def test_cup_command():
    status, doc = _json(JobSpec("cup", space="corpus:T2", format="json-like"))
    assert status == EXIT_OK
    assert doc["report"]["rings"][0]["cup_length"]["value"] == 2


def test_cat_command_circle():
    status, doc = _json(JobSpec("cat", space="corpus:S1", format="json-like"))
    assert status == EXIT_OK
    r = doc["report"]
    assert (r["lower"], r["upper"], r["exact"]) == (1, 1, True)
    assert r["consistency"]["pass"]


def test_tc_command_interval():
    status, doc = _json(JobSpec("tc", space="corpus:Delta1", format="json-like"))
    assert status == EXIT_OK and doc["report"]["upper"] == 0


def test_secat_command_on_map_file(tmp_path):
    p = tmp_path / "f.json"
    p.write_text(dump_map(cx.vertex_inclusion(C.minimal_circle().pointed())))
    status, doc = _json(JobSpec("secat", map=str(p), format="json-like", engine="oracle"))
    assert status == EXIT_OK
    assert (doc["report"]["lower"], doc["report"]["upper"]) == (1, 1)


def test_oracle_and_consistency_commands():
    status, doc = _json(JobSpec("oracle", space="corpus:wedge2S1", invariant="cat", format="json-like"))
    assert status == EXIT_OK and doc["report"]["upper"] == 1 and "tower" not in doc["report"]
    status, text = run(JobSpec("consistency", space="corpus:S1", invariant="cat"))
    assert status == EXIT_OK and "consistency cat: pass" in text


def test_ganea_command_reports_stages(tmp_path):
    p = tmp_path / "t.json"
    p.write_text(dump_map(cx.terminal_map(C.sphere0())))
    status, doc = _json(JobSpec("ganea", map=str(p), max_stage=2, format="json-like"))
    assert status == EXIT_OK
    # over a point the stages are iterated joins of two points: S0, S1, S2
    assert [st["homology"] for st in doc["report"]["stages"]] == [
        [[2, []]], [[1, []], [1, []]], [[1, []], [0, []], [1, []]]]


def test_text_format_header():
    status, text = run(JobSpec("validate", space="corpus:S1"))
    assert status == EXIT_OK
    assert text.startswith("# ganea validate\n# budgets: ")


def test_exit_parse_on_missing_file(tmp_path):
    status, _ = run(JobSpec("validate", space=str(tmp_path / "missing.json")))
    assert status == EXIT_PARSE


def test_exit_parse_on_bad_arguments():
    assert run(JobSpec("cat"))[0] == EXIT_PARSE
    assert run(JobSpec("cat", space="corpus:S1", nodes=0))[0] == EXIT_PARSE
    assert run(JobSpec("cat", space="corpus:nowhere"))[0] == EXIT_PARSE
    assert main(["frobnicate"]) == EXIT_PARSE


def test_exit_validation_on_bad_complex(tmp_path):
    obj = json.loads(dump_sset(C.boundary(2)))
    obj["levels"][1][0][0] = [[], 9]
    p = tmp_path / "bad.json"
    p.write_text(json.dumps(obj))
    status, doc = _json(JobSpec("validate", space=str(p), format="json-like"))
    assert status == EXIT_VALIDATION and doc["report"]["problems"]


def test_exit_validation_on_disconnected_cat():
    assert run(JobSpec("cat", space="corpus:S0"))[0] == EXIT_VALIDATION


def test_exit_budget_on_tiny_budgets():
    job = JobSpec("cat", space="corpus:S1", nodes=1, cover_nodes=1, piece_checks=1, format="json-like")
    status, doc = _json(job)
    assert status == EXIT_BUDGET
    # a partial report is still produced
    assert doc["report"]["lower"] == 1 and doc["report"]["upper"] == "inf"


def test_exit_invariant_on_contradictory_engines(monkeypatch):
    monkeypatch.setattr(cli, "_tower", lambda job, inv, obj: SecatReport(inv, 3, 3))
    status, doc = _json(JobSpec("cat", space="corpus:S1", format="json-like"))
    assert status == EXIT_INVARIANT and doc["report"]["error"] == "invariant"


def test_consistency_failure_exits_invariant(monkeypatch):
    monkeypatch.setattr(cli, "_tower", lambda job, inv, obj: SecatReport(inv, 0, 0))
    monkeypatch.setattr(cli, "combine", lambda inv, reps: {
        "invariant": inv, "lower": 0, "upper": 1, "exact": False,
        "consistency": {"pass": False, "tower": [0, 0], "oracle": [1, 1]}})
    assert run(JobSpec("consistency", space="corpus:S1", invariant="cat"))[0] == EXIT_INVARIANT


def test_threads_do_not_change_output():
    one = run(JobSpec("cat", space="corpus:T2", format="json-like", max_stage=0))[1]
    two = run(JobSpec("cat", space="corpus:T2", format="json-like", max_stage=0, threads=2))[1]
    assert one == two


def test_main_writes_output_file(tmp_path, capsys):
    out = tmp_path / "r.json"
    assert main(["homology", "--space", "corpus:S1", "--format", "json-like", "--output", str(out)]) == EXIT_OK
    assert out.read_text() == capsys.readouterr().out


def test_consistency_cat_on_disconnected_space_is_validation_error():
    assert run(JobSpec("consistency", space="corpus:S0", invariant="cat"))[0] == EXIT_VALIDATION
