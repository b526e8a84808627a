"""Schema drift, job parsing, payload shapes, rendering, and the CLI.

Payloads are frozen as dicts (every number a decimal string); the
worked values are the same ones verified by hand in the core-module
tests.  CLI tests drive main() directly and read capsys.
"""

import csv
import io
import json
from pathlib import Path

import pytest

from mukai_lattice.cli import main
from mukai_lattice.errors import (
    InputError,
    InternalInvariantError,
    PreconditionError,
)
from mukai_lattice.jobs import (
    JobError,
    error_payload,
    job_from_obj,
    parse_job,
    pretty_vector,
    run_job,
    serialize_fraction,
)
from mukai_lattice.render import color_mode, render_report
from mukai_lattice.schemas import COMMANDS, schema_texts
from mukai_lattice.vectors import MukaiVector

REPO = Path(__file__).resolve().parents[1]
SCHEMAS_DIR = REPO / "schemas"
EXAMPLE_JOB = REPO / "examples_jobs" / "classify-rank2-vector.json"

MINUS = "−"
OMEGA = "ω"

S2 = {"kind": "abelian", "ns_gram": [[2]]}
SK3_2 = {"kind": "K3", "ns_gram": [[2]]}
V212 = {"r": 2, "c1": [1], "a": -2}


def job(command, surface, **inputs):
    return {"command": command, "surface": surface, "inputs": inputs}


# ---------------------------------------------------------------------------
# published schema files


def test_schema_files_match_generated():
    texts = schema_texts()
    on_disk = sorted(p.name for p in SCHEMAS_DIR.glob("*.schema.json"))
    assert on_disk == sorted(texts)
    for name, text in texts.items():
        assert (SCHEMAS_DIR / name).read_text(encoding="utf-8") == text


def test_schema_texts_deterministic():
    assert schema_texts() == schema_texts()
    assert len(schema_texts()) == 3 + len(COMMANDS)


# ---------------------------------------------------------------------------
# job parsing and validation paths


def test_parse_job_malformed_json():
    with pytest.raises(JobError, match="malformed JSON"):
        parse_job("{nope")
    with pytest.raises(JobError, match="must be a JSON object"):
        parse_job("[1, 2]")


def test_unknown_command_path():
    with pytest.raises(JobError) as err:
        job_from_obj(job("frobnicate", S2, v=V212))
    assert err.value.path == "/command"


def test_extra_top_level_key_path():
    obj = job("pair", S2, v=V212)
    obj["extra"] = 1
    with pytest.raises(JobError) as err:
        job_from_obj(obj)
    assert err.value.path == "/"
    assert "extra" in str(err.value)


def test_unknown_inputs_field_path():
    with pytest.raises(JobError) as err:
        job_from_obj(job("pair", S2, v=V212, bogus=1))
    assert err.value.path == "/inputs"
    assert "bogus" in str(err.value)


def test_vector_field_type_path():
    bad = {"r": "2", "c1": [1], "a": -2}
    with pytest.raises(JobError) as err:
        job_from_obj(job("pair", S2, v=bad))
    assert err.value.path == "/inputs/v/r"


def test_odd_diagonal_path_and_message():
    with pytest.raises(JobError) as err:
        job_from_obj(job("pair", {"kind": "abelian", "ns_gram": [[3]]}, v=V212))
    assert err.value.path == "/surface/ns_gram/0/0"
    assert "(0, 0) = 3 must be even" in str(err.value)


def test_ragged_gram_path():
    surface = {"kind": "abelian", "ns_gram": [[2, 0], [0]]}
    with pytest.raises(JobError) as err:
        job_from_obj(job("pair", surface, v=V212))
    assert err.value.path == "/surface/ns_gram/1"
    assert "row 1 has 1 entries" in str(err.value)


def test_surface_model_error_path():
    # positive definite rank 2: wrong signature for a surface lattice
    surface = {"kind": "K3", "ns_gram": [[2, 1], [1, 2]]}
    with pytest.raises(JobError) as err:
        job_from_obj(job("pair", surface, v=V212))
    assert err.value.path == "/surface"
    assert "signature" in str(err.value)


def test_c1_length_error_payload():
    spec = job_from_obj(job("pair", S2, v={"r": 1, "c1": [1, 2], "a": 0}))
    payload, code = run_job(spec)
    assert code == 1
    assert payload["error"]["code"] == "input-error"
    assert payload["error"]["path"] == "/inputs/v/c1"


def test_deform_needs_exactly_one_of_v_vectors():
    for inputs in ({}, {"v": V212, "vectors": [V212]}):
        spec = job_from_obj({"command": "deform", "surface": S2, "inputs": inputs})
        payload, code = run_job(spec)
        assert code == 1
        assert payload["error"]["path"] == "/inputs"
        assert "exactly one" in payload["error"]["message"]


def test_fujiki_rational_handling():
    ok = job_from_obj(job("fujiki", S2, n=3, l2="4", lx=0, x2="-4"))
    payload, code = run_job(ok)
    assert code == 0 and payload["holds"] is True

    zero_den = job_from_obj(job("fujiki", S2, n=3, l2="4/0", lx=0, x2=1))
    payload, code = run_job(zero_den)
    assert code == 1
    assert "malformed rational" in payload["error"]["message"]

    with pytest.raises(JobError) as err:
        job_from_obj(job("fujiki", S2, n=3, l2="1.5", lx=0, x2=1))
    assert err.value.path == "/inputs/l2"


def test_error_payload_codes():
    assert error_payload(InputError("x"))[1] == 1
    assert error_payload(PreconditionError("x"))[1] == 2
    payload, code = error_payload(InternalInvariantError("x"))
    assert code == 3
    assert payload["error"]["code"] == "internal-invariant"
    with pytest.raises(ValueError):
        error_payload(ValueError("not ours"))


# ---------------------------------------------------------------------------
# frozen payloads


def test_pair_square_payload():
    payload, code = run_job(job_from_obj(job("pair", S2, v=V212)))
    assert code == 0
    assert payload == {
        "kind": "pair",
        "v": {"r": "2", "c1": ["1"], "a": "-2"},
        "w": {"r": "2", "c1": ["1"], "a": "-2"},
        "pair": "10",
        "square_mode": True,
        "moduli_dim": {"total": "12", "fiber": "8"},
        "primitive": True,
        "divisibility": "1",
        "positive": True,
    }


def test_pair_two_vector_payload():
    obj = job("pair", S2, v={"r": 1, "c1": [0], "a": 0}, w={"r": 0, "c1": [1], "a": 0})
    payload, code = run_job(job_from_obj(obj))
    assert code == 0
    assert payload["square_mode"] is False
    assert payload["pair"] == "0"
    assert "moduli_dim" not in payload


def test_pair_k3_positive_is_null():
    payload, _ = run_job(job_from_obj(job("pair", SK3_2, v=V212)))
    assert payload["positive"] is None


def test_perp_payload():
    payload, code = run_job(job_from_obj(job("perp", S2, v=V212)))
    assert code == 0
    assert payload == {
        "kind": "perp",
        "v": {"r": "2", "c1": ["1"], "a": "-2"},
        "rank": "2",
        "gram": [["-2", "-1"], ["-1", "2"]],
        "basis": [["1", "0", "1"], ["0", "1", "1"]],
        "det": "-5",
        "indecomposable": True,
    }


def test_kummer_reduction_payload():
    obj = job("kummer", S2, v={"r": 1, "c1": [1], "a": -1})
    payload, code = run_job(job_from_obj(obj))
    assert code == 0
    assert payload["mode"] == "reduction"
    assert payload["case_tag"] == "l1_odd_rank"
    assert payload["w_omega"] == "1/2"
    assert payload["isotropy_ok"] is True


def test_kummer_on_k3_square4_is_precondition():
    spec = job_from_obj(job("kummer", SK3_2, v={"r": 1, "c1": [1], "a": -1}))
    payload, code = run_job(spec)
    assert code == 2
    assert payload["error"]["code"] == "precondition"
    assert "abelian" in payload["error"]["message"]


def test_serialize_fraction():
    from fractions import Fraction

    assert serialize_fraction(Fraction(3, 1)) == "3"
    assert serialize_fraction(Fraction(-1, 2)) == "-1/2"


# ---------------------------------------------------------------------------
# pretty printing and color resolution


def test_pretty_vector_cases():
    assert pretty_vector(MukaiVector(1, (1,), 4)) == "1 + H + 4" + OMEGA
    assert pretty_vector(MukaiVector(0, (0,), 0)) == "0"
    assert pretty_vector(MukaiVector(2, (-1,), 0)) == "2 " + MINUS + " H"
    assert pretty_vector(MukaiVector(-1, (0,), 2)) == MINUS + "(1 " + MINUS + " 2" + OMEGA + ")"
    assert pretty_vector(MukaiVector(0, (0,), -1)) == MINUS + "(" + OMEGA + ")"
    assert pretty_vector(MukaiVector(0, (1, 3), 3)) == "e1 + 3e2 + 3" + OMEGA


def test_color_mode():
    assert color_mode("always", False) is True
    assert color_mode("never", True) is False
    assert color_mode("auto", True) is True
    assert color_mode("auto", False) is False
    assert color_mode("", False) is False


# ---------------------------------------------------------------------------
# report rendering


def pair_result(r, c1, a, surface=S2):
    payload, code = run_job(job_from_obj(job("pair", surface, v={"r": r, "c1": c1, "a": a})))
    assert code == 0
    return payload


def test_report_csv_round_trip():
    results = [pair_result(2, [1], -2), pair_result(1, [0], 0)]
    text = render_report(results, fmt="csv")
    rows = list(csv.reader(io.StringIO(text)))
    header = ["v", "w", "pair", "primitive", "divisibility", "dim", "fiber dim", "positive"]
    assert rows[0] == header
    assert rows[1] == ["(2, [1], -2)", "(2, [1], -2)", "10", "yes", "1", "12", "8", "yes"]
    assert rows[2] == ["(1, [0], 0)", "(1, [0], 0)", "0", "yes", "1", "2", "-2", "yes"]
    # serializing the parsed rows gives back exactly the same text
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerows(rows)
    assert buf.getvalue() == text


def test_report_table_shape_and_color():
    results = [pair_result(2, [1], -2)]
    plain = render_report(results, fmt="table")
    lines = plain.splitlines()
    assert lines[0].startswith("v")
    assert set(lines[1]) <= {"-", " "}
    assert "\x1b" not in plain
    colored = render_report(results, fmt="table", color=True)
    assert "\x1b[32m" in colored
    assert render_report(results, fmt="csv", color=True) == render_report(results, fmt="csv")


def test_report_rejections():
    pair = pair_result(2, [1], -2)
    perp, _ = run_job(job_from_obj(job("perp", S2, v=V212)))
    with pytest.raises(InputError, match="mixed result kinds"):
        render_report([pair, perp])
    with pytest.raises(InputError, match="report on report"):
        render_report([{"kind": "report", "format": "table", "text": ""}])
    with pytest.raises(InputError, match="nothing to report"):
        render_report([])
    with pytest.raises(InputError, match="unknown report format"):
        render_report([pair], fmt="html")
    with pytest.raises(InputError, match="no kind"):
        render_report([{"rows": 3}])


def test_report_error_and_generic_kinds():
    err, _ = error_payload(JobError("boom", "/inputs"))
    text = render_report([err], fmt="csv")
    rows = list(csv.reader(io.StringIO(text)))
    assert rows == [["code", "message", "path"], ["input-error", "boom (at /inputs)", "/inputs"]]

    oracle = {
        "kind": "walls-oracle",
        "agree": True,
        "optimized_count": "10",
        "brute_count": "10",
        "only_optimized": [],
        "only_brute": [],
    }
    rows = list(csv.reader(io.StringIO(render_report([oracle], fmt="csv"))))
    assert rows[0] == ["agree", "brute_count", "only_brute", "only_optimized", "optimized_count"]
    assert rows[1][0] == "yes"


# ---------------------------------------------------------------------------
# command line


def run_cli(capsys, argv):
    code = main(argv)
    out = capsys.readouterr().out
    return code, out


def test_cli_pair_inline_and_determinism(capsys):
    argv = ["pair", "--v", "2,1,-2"]
    code, out = run_cli(capsys, argv)
    assert code == 0
    payload = json.loads(out)
    assert payload["pair"] == "10"
    assert payload["moduli_dim"] == {"fiber": "8", "total": "12"}
    # canonical formatting: sorted keys, two-space indent, one trailing newline
    assert out == json.dumps(payload, indent=2, sort_keys=True) + "\n"
    code2, out2 = run_cli(capsys, argv)
    assert (code2, out2) == (code, out)


def test_cli_fm_isotropic_pretty(capsys):
    argv = [
        "fm", "--kind", "K3", "--gram", "12", "--map", "isotropic",
        "--v", "1,1,4", "--r0", "2", "--d0", "-1", "--k", "3",
        "--d1", "-1", "--l", "1",
    ]
    code, out = run_cli(capsys, argv)
    assert code == 0
    payload = json.loads(out)
    assert payload["image"] == {"r": "-1", "c1": ["0"], "a": "2"}
    assert payload["pretty"] == MINUS + "(1 " + MINUS + " 2" + OMEGA + ")"


def test_cli_walls_rank1_empty(capsys):
    code, out = run_cli(capsys, ["walls", "--c1", "1", "--chi", "1"])
    assert code == 0
    payload = json.loads(out)
    assert payload == {"kind": "walls", "count": "0", "walls": []}


def test_cli_walls_oracle(capsys):
    argv = [
        "walls", "--kind", "K3", "--gram", "2,1;1,-2",
        "--c1", "1,0", "--chi", "2", "--oracle",
    ]
    code, out = run_cli(capsys, argv)
    assert code == 0
    payload = json.loads(out)
    assert payload["kind"] == "walls-oracle"
    assert payload["agree"] is True
    assert payload["optimized_count"] == payload["brute_count"] == "10"
    assert payload["only_optimized"] == payload["only_brute"] == []


def test_cli_walls_segment(capsys):
    argv = [
        "walls", "--kind", "K3", "--gram", "2,1;1,-2",
        "--c1", "1,0", "--chi", "2", "--p0", "1,0", "--p1", "5,-2",
    ]
    code, out = run_cli(capsys, argv)
    assert code == 0
    payload = json.loads(out)
    assert payload["count"] == "10"
    assert payload["segment"] == {
        "crossings": ["1/2"],
        "intervals": [
            {"lo": "0", "hi": "1/2", "representative": ["2", "-1/2"]},
            {"lo": "1/2", "hi": "1", "representative": ["4", "-3/2"]},
        ],
        "p0_on_wall": True,
        "p1_on_wall": False,
    }


def test_cli_example_job_file(capsys):
    code, out = run_cli(capsys, ["classify", "--job", str(EXAMPLE_JOB)])
    assert code == 0
    payload = json.loads(out)
    assert payload["kind"] == "classify"
    assert payload["square"] == "10"
    assert any(v["applicable"] for v in payload["verdicts"])


def test_cli_batch_order_and_worst_exit(tmp_path, capsys):
    jobs = [
        job("pair", S2, v=V212),
        job("kummer", SK3_2, v={"r": 1, "c1": [1], "a": -1}),
    ]
    path = tmp_path / "batch.json"
    path.write_text(json.dumps(jobs), encoding="utf-8")
    code, out = run_cli(capsys, ["pair", "--job", str(path)])
    assert code == 2
    payloads = json.loads(out)
    assert [p.get("kind") for p in payloads] == ["pair", None]
    assert payloads[1]["error"]["code"] == "precondition"


def test_cli_exit_code_2_precondition(capsys):
    argv = ["fm", "--kind", "K3", "--map", "poincare-f", "--v", "1,0,0"]
    code, out = run_cli(capsys, argv)
    assert code == 2
    assert json.loads(out)["error"]["code"] == "precondition"


def test_cli_inline_parse_errors(capsys):
    for argv in (
        ["pair", "--v", "1,2"],
        ["pair", "--v", "a,b,c"],
        ["pair", "--gram", "1,2", "--v", "1,0,0"],
    ):
        code, out = run_cli(capsys, argv)
        assert code == 1
        assert json.loads(out)["error"]["code"] == "input-error"


def test_cli_usage_errors_exit_1():
    with pytest.raises(SystemExit) as err:
        main(["pair", "--no-such-flag"])
    assert err.value.code == 1
    with pytest.raises(SystemExit) as err:
        main(["frobnicate"])
    assert err.value.code == 1


def test_cli_job_file_errors(tmp_path, capsys):
    scalar = tmp_path / "scalar.json"
    scalar.write_text("3", encoding="utf-8")
    code, out = run_cli(capsys, ["pair", "--job", str(scalar)])
    assert code == 1
    assert "job file holds" in json.loads(out)["error"]["message"]

    broken = tmp_path / "broken.json"
    broken.write_text("{oops", encoding="utf-8")
    code, out = run_cli(capsys, ["pair", "--job", str(broken)])
    assert code == 1
    assert "malformed JSON" in json.loads(out)["error"]["message"]

    code, out = run_cli(capsys, ["pair", "--job", str(tmp_path / "missing.json")])
    assert code == 1
    assert json.loads(out)["error"]["code"] == "input-error"


def write_results(tmp_path, results, wrap=False):
    path = tmp_path / "results.json"
    body = {"results": results} if wrap else results
    path.write_text(json.dumps(body), encoding="utf-8")
    return path


def test_cli_report_csv_and_dict_wrapper(tmp_path, capsys):
    results = [pair_result(2, [1], -2), pair_result(1, [0], 0)]
    for wrap in (False, True):
        path = write_results(tmp_path, results, wrap=wrap)
        code, out = run_cli(capsys, ["report", "--input", str(path), "--format", "csv"])
        assert code == 0
        rows = list(csv.reader(io.StringIO(out)))
        assert rows[0][0] == "v"
        assert len(rows) == 3


def test_cli_report_color_env(tmp_path, capsys, monkeypatch):
    path = write_results(tmp_path, [pair_result(2, [1], -2)])
    monkeypatch.setenv("MUKAI_COLOR", "always")
    code, out = run_cli(capsys, ["report", "--input", str(path)])
    assert code == 0
    assert "\x1b[32m" in out
    monkeypatch.setenv("MUKAI_COLOR", "never")
    code, out = run_cli(capsys, ["report", "--input", str(path)])
    assert code == 0
    assert "\x1b" not in out
    # color never leaks into CSV
    monkeypatch.setenv("MUKAI_COLOR", "always")
    code, out = run_cli(capsys, ["report", "--input", str(path), "--format", "csv"])
    assert "\x1b" not in out


def test_cli_report_rejections(tmp_path, capsys):
    pair = pair_result(2, [1], -2)
    perp, _ = run_job(job_from_obj(job("perp", S2, v=V212)))
    path = write_results(tmp_path, [pair, perp])
    code, out = run_cli(capsys, ["report", "--input", str(path)])
    assert code == 1
    assert "mixed result kinds" in json.loads(out)["error"]["message"]

    path = write_results(tmp_path, [{"kind": "report", "format": "table", "text": ""}])
    code, out = run_cli(capsys, ["report", "--input", str(path)])
    assert code == 1
    assert "report on report" in json.loads(out)["error"]["message"]

    code, out = run_cli(capsys, ["report"])
    assert code == 1
    assert "needs --input" in json.loads(out)["error"]["message"]


def test_cli_albanese_inline(capsys):
    code, out = run_cli(capsys, ["albanese-check", "--r", "2", "--a", "-2", "--chi", "1"])
    assert code == 0
    payload = json.loads(out)
    assert payload == {
        "kind": "albanese-check",
        "r": "2",
        "a": "-2",
        "chi": "1",
        "ok": True,
        "n": "5",
    }


def test_cli_fujiki_inline(capsys):
    argv = ["fujiki", "--n", "3", "--l2", "4", "--lx", "0", "--x2", "-4"]
    code, out = run_cli(capsys, argv)
    assert code == 0
    payload = json.loads(out)
    assert payload["holds"] is True
    assert set(payload["integrals"]) == {"L_2n2", "L_2n3_X", "L_2n4_XX", "L_2n4_EE"}


def test_cli_deform_single_and_grouped(capsys):
    code, out = run_cli(capsys, ["deform", "--v", "1,0,-1"])
    assert code == 0
    payload = json.loads(out)
    assert len(payload["classes"]) == 1
    assert payload["groups"][0]["members"] == ["0"]

    code, out = run_cli(capsys, ["deform", "--v", "1,0,-1", "--v", "0,1,-1"])
    assert code == 0
    payload = json.loads(out)
    assert len(payload["classes"]) == 2
    assert [g["members"] for g in payload["groups"]] == [["0"], ["1"]]
