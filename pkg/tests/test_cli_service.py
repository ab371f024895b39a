import json
import subprocess
import sys
from pathlib import Path

import pytest
from fastapi.testclient import TestClient

from gcalg.errors import SchemaError
from gcalg.iofmt import validate_file
from gcalg.jobs import JobSpec, render_machine, run
from gcalg.service import app

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"


def _fixture(name: str) -> dict:
    return json.loads((FIXTURES / name).read_text())


def _cli(*args: str):
    return subprocess.run(
        [sys.executable, "-m", "gcalg.cli", *args],
        capture_output=True,
        text=True,
    )


# ------------------------------------------------------------- file validation


def test_validate_file_wellformed():
    doc = validate_file(FIXTURES / "twisted_z2.json")
    assert doc.group.order == 2
    assert doc.algebra is not None and doc.algebra.dim == 2


def test_validate_file_reports_table_error():
    with pytest.raises(Exception) as err:
        validate_file(FIXTURES / "bad_table.json")
    assert "repeats" in str(err.value)


def test_validate_document_cites_phi_triple():
    raw = {
        "group": {"elements": ["e", "u"], "table": [[0, 1], [1, 0]]},
        "sigma": {"u": "-1"},
        "phi": {"u,u": "1"},
    }
    from gcalg.iofmt import parse_document

    with pytest.raises(SchemaError) as err:
        parse_document(raw)
    assert "cocycle condition" in str(err.value)
    assert err.value.location == "phi"


# ------------------------------------------------------------------ job runner


def test_job_check_axioms_pass():
    report = run(JobSpec("check-axioms", _fixture("cur_m2_trivial.json"), {}))
    assert report.verdict == "pass" and report.exit_code == 0


def test_job_check_axioms_planted_c2():
    report = run(JobSpec("check-axioms", _fixture("planted_c2_violation.json"), {}))
    assert report.verdict == "fail" and report.exit_code == 1
    [rec] = [r for r in report.records if r.name == "axioms"]
    assert rec.detail["first_violation"]["kind"] == "grading"
    assert rec.detail["first_violation"]["indices"] == [0, 0, 1]


def test_job_trivialize_emits_tau():
    report = run(JobSpec("trivialize", _fixture("z2_coboundary.json"), {}))
    assert report.exit_code == 0
    [rec] = report.records
    assert rec.detail["tau"] == {"u": "1"}
    assert rec.detail["verified_round_trip"] is True


def test_job_input_error_exit_2():
    report = run(JobSpec("check-axioms", {"group": {"elements": ["e"], "table": [[0]]}}, {}))
    assert report.exit_code == 2 and report.verdict == "error"


def test_job_unknown_command():
    report = run(JobSpec("no-such-thing", {}, {}))
    assert report.exit_code == 2


def test_job_decompose_two_blocks():
    report = run(JobSpec("decompose", _fixture("sum_m2_q.json"), {}))
    assert report.exit_code == 0
    dims = sorted(
        r.detail["dimension"] for r in report.records if r.name.startswith("block-")
    )
    assert dims == [1, 4]
    assert all(
        r.detail["graded_simple"] for r in report.records if r.name.startswith("block-")
    )


def test_job_recover():
    report = run(JobSpec("recover", _fixture("recover_z2.json"), {}))
    assert report.exit_code == 0
    [rec] = report.records
    assert rec.detail["gamma1"] == ["e", "u"]
    assert rec.detail["chi_nontrivial"] == {"u,u": "-1"}


def test_job_simplicity_certificate():
    report = run(JobSpec("simplicity", _fixture("sum_m2_q.json"), {}))
    assert report.exit_code == 1
    assert report.certificate is not None


def test_job_cend_assoc_and_mutation():
    report = run(JobSpec("cend-assoc", _fixture("cend_z2.json"), {"degree_bound": 1}))
    assert report.exit_code == 0
    mutated = run(
        JobSpec(
            "cend-assoc",
            _fixture("cend_z2.json"),
            {"degree_bound": 2, "mutation": "g-T-lambda-sign"},
        )
    )
    assert mutated.exit_code == 1


def test_report_determinism():
    a = run(JobSpec("check-axioms", _fixture("twisted_z2.json"), {"seed": 3}))
    b = run(JobSpec("check-axioms", _fixture("twisted_z2.json"), {"seed": 3}))
    assert render_machine(a) == render_machine(b)
    assert a.elapsed_ms is None  # timing only on request


# ------------------------------------------------------------------------ CLI


def test_cli_pass_exit_0():
    result = _cli("--input", str(FIXTURES / "cur_m2_trivial.json"), "--command", "check-axioms")
    assert result.returncode == 0
    assert "verdict      : pass" in result.stdout


def test_cli_math_failure_exit_1():
    result = _cli(
        "--input", str(FIXTURES / "planted_c2_violation.json"),
        "--command", "check-axioms", "--format", "machine",
    )
    assert result.returncode == 1
    lines = [json.loads(line) for line in result.stdout.splitlines()]
    assert lines[-1]["verdict"] == "fail"


def test_cli_input_error_exit_2():
    result = _cli("--input", str(FIXTURES / "bad_table.json"), "--command", "validate")
    assert result.returncode == 2


def test_cli_missing_file_exit_2():
    result = _cli("--input", "does-not-exist.json", "--command", "validate")
    assert result.returncode == 2


def test_cli_machine_output_byte_identical():
    args = (
        "--input", str(FIXTURES / "twisted_z2.json"),
        "--command", "simplicity", "--format", "machine", "--seed", "7",
    )
    first = _cli(*args)
    second = _cli(*args)
    assert first.stdout == second.stdout
    assert first.returncode == 0


def test_cli_embeds_conventions():
    result = _cli(
        "--input", str(FIXTURES / "cur_m2_trivial.json"),
        "--command", "check-axioms", "--format", "machine",
    )
    header = json.loads(result.stdout.splitlines()[0])
    assert header["conventions"] == "additive-affine-line/v1"


# -------------------------------------------------------------------- service


@pytest.fixture()
def client():
    return TestClient(app)


def test_health(client):
    response = client.get("/health")
    assert response.status_code == 200
    assert response.json()["status"] == "ok"


def test_conventions_endpoint(client):
    response = client.get("/conventions")
    assert response.status_code == 200
    body = response.json()
    assert body["version"] == "additive-affine-line/v1"
    assert any("coboundary" in row[0] for row in body["table"])


def test_jobs_endpoint_pass(client):
    response = client.post(
        "/jobs",
        json={"command": "check-axioms", "document": _fixture("twisted_z2.json")},
    )
    assert response.status_code == 200
    body = response.json()
    assert body["verdict"] == "pass" and body["exit_code"] == 0
    assert body["conventions"] == "additive-affine-line/v1"


def test_jobs_endpoint_math_failure(client):
    response = client.post(
        "/jobs",
        json={"command": "check-axioms", "document": _fixture("planted_c2_violation.json")},
    )
    assert response.status_code == 200
    assert response.json()["exit_code"] == 1


def test_jobs_endpoint_rejects_unknown_command(client):
    response = client.post("/jobs", json={"command": "bogus", "document": {}})
    assert response.status_code == 422


def test_jobs_endpoint_trivialize(client):
    response = client.post(
        "/jobs",
        json={"command": "trivialize", "document": _fixture("z2_coboundary.json")},
    )
    body = response.json()
    assert body["exit_code"] == 0
    assert body["records"][0]["detail"]["tau"] == {"u": "1"}


def test_cli_against_live_service(client, monkeypatch):
    # drive the thin-client code path through the in-process test transport
    import httpx

    from gcalg import cli

    def fake_post(url, json=None, timeout=None):
        assert url.endswith("/jobs")
        return client.post("/jobs", json=json)

    monkeypatch.setattr(httpx, "post", fake_post)
    code = cli.main(
        [
            "--input", str(FIXTURES / "cur_m2_trivial.json"),
            "--command", "check-axioms",
            "--server", "http://service",
            "--format", "machine",
        ]
    )
    assert code == 0


def test_job_construct_cur_emits_structure():
    report = run(JobSpec("construct-cur", _fixture("twisted_z2.json"), {}))
    assert report.exit_code == 0
    [struct] = [r for r in report.records if r.name == "structure-constants"]
    assert struct.detail["structure"]["2,2"] == ["-1", "0"]


def test_job_construct_cur_rejects_nonassociative():
    doc = {
        "algebra": {
            "basis": ["a", "b"],
            "degrees": ["e", "e"],
            "products": {"1,1": {"2": "1"}, "1,2": {"1": "1"}},
        }
    }
    report = run(JobSpec("construct-cur", doc, {}))
    assert report.exit_code == 1
    assert any("not associative" in str(r.detail) for r in report.records)


def test_job_validate_flags_nonassociative_algebra():
    doc = {
        "algebra": {
            "basis": ["a", "b"],
            "degrees": ["e", "e"],
            "products": {"1,1": {"2": "1"}, "1,2": {"1": "1"}},
        }
    }
    report = run(JobSpec("validate", doc, {}))
    assert report.exit_code == 1


def test_job_cend_assoc_checks_supplied_matrices():
    doc = {
        "group": {"elements": ["e", "u"], "table": [[0, 1], [1, 0]]},
        "sigma": {"u": "-1"},
        "cend": {
            "degrees": ["e", "u"],
            "matrices": [
                {"entries": [["T + x", "0"], ["0", "x^2"]]},
                {"entries": [["0", "T*x"], ["0", "0"]]},
                {"entries": [["0", "0"], ["1", "0"]]},
            ],
        },
    }
    report = run(JobSpec("cend-assoc", doc, {"degree_bound": 1}))
    assert report.exit_code == 0
    [rec] = [r for r in report.records if r.name == "cend-associativity-supplied"]
    assert rec.detail == {"triples": 27, "failures": 0}


def test_document_rejects_mixed_degree_cend_matrix():
    from gcalg.iofmt import parse_document

    doc = {
        "group": {"elements": ["e", "u"], "table": [[0, 1], [1, 0]]},
        "cend": {"degrees": ["e", "u"], "matrices": [[["1", "1"], ["0", "0"]]]},
    }
    with pytest.raises(SchemaError):
        parse_document(doc)


def test_document_chi_section_validates():
    from fractions import Fraction

    from gcalg.cohomology import chi_from_theta
    from gcalg.groups import coset_decomposition, make_cyclic
    from gcalg.iofmt import parse_document

    z4 = make_cyclic(4)
    fine = coset_decomposition(z4, ["0", "2"], [])
    z = chi_from_theta({(2, 2): Fraction(-1)}, fine)
    entries = {
        f"{a},{b}": str(z.value(a, b))
        for a in range(4)
        for b in range(4)
        if z.value(a, b) not in (0, 1)
    }
    doc = {
        "group": {
            "elements": ["0", "1", "2", "3"],
            "table": [[(i + j) % 4 for j in range(4)] for i in range(4)],
        },
        "gamma1": ["0", "2"],
        "chi": entries,
    }
    parsed = parse_document(doc)
    assert parsed.chi is not None and parsed.chi.value(2, 2) == -1
    bad = dict(doc)
    bad["chi"] = {**entries, "1,2": "5"}
    with pytest.raises(SchemaError):
        parse_document(bad)
