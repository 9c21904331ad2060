import io
import json
from pathlib import Path

import pytest

from peiffer.cli import EXIT_MALFORMED, EXIT_OK, EXIT_VIOLATION, run

DATA = Path(__file__).resolve().parent.parent / "data"


def call(*argv):
    out = io.StringIO()
    code = run(list(argv), stdout=out)
    return code, out.getvalue()


@pytest.mark.parametrize("name", sorted(p.name for p in DATA.glob("*.json")))
def test_shipped_data_validates(name):
    code, text = call("validate", str(DATA / name))
    assert code == EXIT_OK, text


def test_truncated_file_is_malformed(tmp_path):
    src = (DATA / "cm_s3.json").read_text()
    bad = tmp_path / "cut.json"
    bad.write_text(src[: len(src) // 2])
    code, text = call("validate", str(bad))
    assert code == EXIT_MALFORMED
    assert "cut.json:1:" in text


def test_broken_face_identity_is_a_violation(tmp_path):
    data = json.loads((DATA / "kc_z2_deg12.json").read_text())
    row = data["maps"]["d"][2][0][0]
    row[0] = 1 - row[0]
    bad = tmp_path / "broken.json"
    bad.write_text(json.dumps(data))
    code, text = call("validate", str(bad))
    assert code == EXIT_VIOLATION, text


def test_reports_are_deterministic():
    args = ("check", "theorem2", str(DATA / "cm_s3.json"), "--format", "json", "--seed", "3")
    first = call(*args)
    second = call(*args)
    assert first == second
    assert json.loads(first[1])["seed"] == 3


def test_theorem2_reports_hypothesis_failure():
    code, text = call("check", "theorem2", str(DATA / "sg_kc_z2_deg12.json"), "--level", "2")
    assert code == EXIT_OK
    assert "lhs⊋rhs" in text and "hypothesis fails" in text


def test_theorem1_on_shipped_algebra():
    code, text = call("check", "theorem1", str(DATA / "sym_z2_deg1_cap3.json"), "--format", "json")
    assert code == EXIT_OK
    verdicts = [c["verdict"] for c in json.loads(text)["checks"]]
    assert verdicts and all(v.startswith("equal") for v in verdicts)


def test_dold_kan_random_check():
    code, text = call("check", "dold-kan", "--seed", "42", "--ring", "Z")
    assert code == EXIT_OK
    assert "iso verified" in text


def test_express_degeneracies_output():
    code, text = call("express-degeneracies", "--subset", "1", "--level", "2")
    assert code == EXIT_OK
    assert "-s_1 + s_0" in text


def test_generate_refuses_oversized_request():
    code, text = call("generate", "symmetric-algebra", "--ranks", "0,4", "--matrices", "[[[],[],[],[]]]", "--cap", "3", "--rank-cap", "10")
    assert code == EXIT_MALFORMED
    assert "refused" in text


def test_generate_then_validate(tmp_path):
    out = tmp_path / "cm.json"
    code, _ = call("generate", "crossed-module", "--preset", "z4z2", "--as-group", "--out", str(out))
    assert code == EXIT_OK
    assert call("validate", str(out))[0] == EXIT_OK
    assert call("phi-check", str(out))[0] == EXIT_OK


def test_decompose_and_certificate():
    code, text = call("decompose", str(DATA / "sg_cm_z2.json"), "--element", "3", "--level", "2")
    assert code == EXIT_OK and "recomposes exactly" in text
    code, _ = call("peiffer-cert", str(DATA / "cm_s3.json"), "--element", "999", "--level", "2")
    assert code == EXIT_MALFORMED


def test_parallel_jobs_match_serial():
    path = str(DATA / "sym_z3_deg01_cap2.json")
    serial = call("check", "theorem1", path, "--format", "json")
    parallel = call("check", "theorem1", path, "--format", "json", "--jobs", "2")
    assert json.loads(serial[1])["checks"] == json.loads(parallel[1])["checks"]
