import json

import pytest

from qhforge.cli import main, quiver_data
from qhforge.algebra import direct_sum, field_algebra


def run(tmp_path, *argv, name="out.json"):
    out = tmp_path / name
    code = main([*argv, "--out", str(out)])
    return code, json.loads(out.read_text())


def test_build_schur(tmp_path):
    code, doc = run(tmp_path, "build-schur", "--p", "3", "--r", "2")
    assert code == 0 and doc["dim"] == 10 and doc["format"] == "qhforge-algebra"
    code, doc = run(tmp_path, "build-schur", "--p", "2", "--r", "0")
    assert code == 0 and doc["dim"] == 1


def test_build_schur_resource_error(tmp_path):
    code, doc = run(tmp_path, "build-schur", "--p", "3", "--r", "100")
    assert code != 0 and doc["status"] == "error" and "resource" in doc["reason"]


def test_bad_prime(tmp_path):
    code, doc = run(tmp_path, "build-schur", "--p", "4", "--r", "2")
    assert code == 1 and "reason" in doc


@pytest.mark.parametrize("p,r,code", [(3, 4, 0), (5, 3, 2), (3, 5, 2)])
def test_verify_exit_codes(tmp_path, p, r, code):
    got, doc = run(tmp_path, "verify", "--p", str(p), "--r", str(r))
    assert got == code == doc["exit_code"]
    assert "transcript" in doc
    if code:
        assert doc["reason"]


def test_verify_timings_flag(tmp_path):
    _, doc = run(tmp_path, "verify", "--p", "3", "--r", "4", "--timings")
    assert set(doc["transcript"]["seconds"]) >= {"build", "filtration", "search"}
    _, doc = run(tmp_path, "verify", "--p", "3", "--r", "4")
    assert "seconds" not in doc["transcript"]


def test_cn_outputs(tmp_path):
    code, doc = run(tmp_path, "cn", "--p", "3", "--n", "2", "--depth", "1")
    assert code == 0 and doc["algebra"]["dim"] == 5
    code, doc = run(tmp_path, "cn", "--p", "3", "--n", "1", "--depth", "5")
    assert code == 0 and doc["dims"] == [1] * 6 and doc["algebra"]["dim"] == 1
    code, doc = run(tmp_path, "cn", "--p", "3", "--n", "2", "--depth", "2")
    assert code == 0 and doc["algebra"]["dim"] == 23
    assert all(e["surjective"] and e["multiplicative"] for e in doc["epimorphisms"])
    assert doc["composite"]["surjective"]


def test_cn_from_file_and_bad_witness(tmp_path):
    code, first = run(tmp_path, "cn", "--p", "3", "--n", "2", name="first.json")
    code, again = run(tmp_path, "cn", "--input", str(tmp_path / "first.json"), "--n", "2")
    assert code == 0 and again["algebra"]["dim"] == 23
    first["bimodule"]["witness"] = [[int(i == j) for j in range(4)] for i in range(4)]
    (tmp_path / "bad.json").write_text(json.dumps(first))
    code, doc = run(tmp_path, "cn", "--input", str(tmp_path / "bad.json"), "--n", "2")
    assert code == 1 and "witness" in doc["reason"]


def test_export_quiver(tmp_path):
    code, doc = run(tmp_path, "export-quiver", "--input", "F", "--p", "5")
    assert code == 0 and len(doc["vertices"]) == 1 and doc["arrows"] == []
    run(tmp_path, "cn", "--p", "3", "--n", "2", name="c2.json")
    code, doc = run(tmp_path, "export-quiver", "--input", str(tmp_path / "c2.json"))
    assert len(doc["vertices"]) == 2
    arrows = {(tuple(a["from"]), tuple(a["to"])): a["count"] for a in doc["arrows"]}
    # one arrow each way between the two vertices, no loops: s lies in the square of the radical
    assert arrows == {((1, 1), (2, 1)): 1, ((2, 1), (1, 1)): 1}
    assert doc["radical_layers"] == [5, 3, 1, 0]
    assert doc["graded_dims"] == [2, 2, 1]


def test_quiver_of_semisimple():
    q = quiver_data(direct_sum(field_algebra(2, "a"), field_algebra(2, "b")))
    assert q["cartan"] == [[1, 0], [0, 1]] and q["arrows"] == []


def test_threads_variable(tmp_path, monkeypatch):
    monkeypatch.setenv("QHFORGE_THREADS", "0")
    code, doc = run(tmp_path, "verify", "--p", "3", "--r", "4")
    assert code == 1 and "QHFORGE_THREADS" in doc["reason"]
    monkeypatch.setenv("QHFORGE_THREADS", "1")
    code, _ = run(tmp_path, "verify", "--p", "3", "--r", "4")
    assert code == 0


def test_text_format_and_determinism(tmp_path):
    a = tmp_path / "a.txt"
    b = tmp_path / "b.txt"
    assert main(["verify", "--p", "3", "--r", "7", "--format", "text", "--out", str(a)]) == 0
    assert main(["verify", "--p", "3", "--r", "7", "--format", "text", "--out", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()
    assert "transcript.search.verdict: \"isomorphic\"" in a.read_text()


def test_stdout_when_no_out(capsys):
    assert main(["build-schur", "--p", "2", "--r", "1"]) == 0
    assert json.loads(capsys.readouterr().out)["dim"] == 4


def test_acceptance_subcommand(tmp_path):
    code, doc = run(tmp_path, "acceptance", "--only", "6", "7")
    assert code == 0 and set(doc["criteria"]) == {"6", "7"}
    code, doc = run(tmp_path, "acceptance", "--only", "2")
    assert code == 5 and doc["reason"]


def test_non_split_input_is_an_input_error(tmp_path):
    import numpy as np
    from qhforge.algebra import BasedAlgebra
    from qhforge.io import algebra_to_dict

    # GF(9) = GF(3)[x]/(x^2 + 1) as a 2-dim GF(3)-algebra
    m = np.zeros((2, 2, 2), dtype=np.int64)
    m[0, 0, 0] = m[0, 1, 1] = m[1, 0, 1] = 1
    m[1, 1, 0] = 2
    src = tmp_path / "gf9.json"
    src.write_text(json.dumps(algebra_to_dict(BasedAlgebra(3, m, np.array([1, 0])))))
    code, doc = run(tmp_path, "export-quiver", "--input", str(src))
    assert code == 1 and "split" in doc["reason"]
