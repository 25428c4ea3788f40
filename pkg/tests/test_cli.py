import csv
import io
import json
import subprocess
import sys

import numpy as np
import pytest

from permpos.cli import main
from permpos.dmap import build_pair_d, build_weighted_d, d_to_json, hermitian_to_json
from permpos.permutations import Permutation

from conftest import FIVE_POINT_PAIR

FAST = ["--starts", "8", "--trials", "500"]


def run(*argv):
    buf = io.StringIO()
    code = main(list(argv), out=buf)
    return code, buf.getvalue()


def write_json(path, obj):
    path.write_text(json.dumps(obj))
    return str(path)


def test_propc_five_point_pair():
    code, text = run("propc", "--perm1", "2,3,4,5,1", "--perm2", "1,5,3,2,4")
    assert code == 0
    assert "property (C): holds" in text
    assert "PositiveByCriterion" in text


def test_propc_boundary_pair_json():
    code, text = run("propc", "--perm1", "2,3,4,1", "--perm2", "4,1,2,3", "--format", "json", *FAST)
    rep = json.loads(text)
    assert code == 0
    assert rep["schema"] == 1
    assert rep["property_c"]["holds"] is False
    assert rep["verdict"]["kind"] == "Unknown"
    assert rep["numeric"]["max_found"] == pytest.approx(1.0, abs=1e-4)


def test_propc_identity_pair():
    code, text = run("propc", "--perm1", "1,2,3", "--perm2", "1,2,3", "--format", "json")
    rep = json.loads(text)
    assert code == 0 and rep["property_c"]["holds"] is True
    assert rep["verdict"]["kind"] == "PositiveByCriterion"


def test_propc_two_points_has_no_nan():
    code, text = run("propc", "--perm1", "1,2", "--perm2", "2,1", "--format", "json")
    assert code == 0 and "NaN" not in text
    assert json.loads(text)["property_c"]["holds"] is True


@pytest.mark.parametrize("p1,p2", [("1,2,2", "1,2,3"), ("1,2", "1,2,3"), ("a,b", "1,2")])
def test_propc_bad_input(p1, p2, capsys):
    code, _ = run("propc", "--perm1", p1, "--perm2", p2)
    assert code == 2
    assert "error" in capsys.readouterr().err


def test_cyclic_single_and_table():
    code, text = run("cyclic", "--n", "16", "--p", "8", "--q", "16")
    assert code == 0 and "rule=QEqualsN" in text and "PositiveByCriterion" in text
    code, text = run("cyclic", "--n", "8", "--all")
    assert "q-p=2   property (C) for p in {2,4,6}; fails for p in {1,3,5}" in text
    code, text = run("cyclic", "--n", "8", "--all", "--format", "csv")
    lines = text.strip().splitlines()
    assert lines[0] == "n,p,q,q_minus_p,has_property_c,rule,positivity"
    assert len(lines) == 1 + 28
    assert '8,2,4,2,true,"DivisibleAndPAligned{k=1,m=4,d=3}",PositiveByCriterion' in lines


def test_cyclic_usage_errors():
    assert run("cyclic", "--n", "16", "--p", "6", "--q", "16", "--strict-lemma")[0] == 2
    assert run("cyclic", "--n", "16", "--p", "6", "--q", "17")[0] == 2
    assert run("cyclic", "--n", "2", "--all")[0] == 2
    assert run("cyclic", "--p", "1", "--q", "2")[0] == 2
    assert run("cyclic", "--n", "5")[0] == 2


def test_check_not_positive_and_expect_flag(tmp_path):
    f = write_json(tmp_path / "d.json", d_to_json(build_weighted_d(4, 1.5, Permutation.shift(4))))
    code, text = run("check", "--d-file", f, "--format", "json", *FAST)
    rep = json.loads(text)
    assert code == 0
    assert rep["verdict"]["kind"] == "NotPositive"
    assert rep["numeric"]["witness"] == rep["verdict"]["witness"]
    assert run("check", "--d-file", f, "--expect-positive", *FAST)[0] == 1


def test_check_scalar_d(tmp_path):
    f = write_json(tmp_path / "d.json", d_to_json(4 * np.eye(4)))
    code, text = run("check", "--d-file", f, "--format", "json", "--expect-positive", *FAST)
    rep = json.loads(text)
    assert code == 0
    assert rep["verdict"]["kind"] == "Unknown"
    assert rep["verdict"]["max_found"] == pytest.approx(1.0)


def test_check_bad_files(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert run("check", "--d-file", str(bad))[0] == 2
    neg = write_json(tmp_path / "neg.json", {"n": 2, "d": [[1, -1], [1, 1]]})
    assert run("check", "--d-file", neg)[0] == 2
    assert run("check", "--d-file", str(tmp_path / "missing.json"))[0] == 2
    assert run("check", "--d-file", neg, "--starts", "0")[0] == 2


def test_apply(tmp_path):
    d = write_json(tmp_path / "d.json", d_to_json(build_pair_d(5, *FIVE_POINT_PAIR)))
    a = write_json(tmp_path / "a.json", hermitian_to_json(np.eye(5)))
    code, text = run("apply", "--d-file", d, "--matrix-file", a)
    rep = json.loads(text)
    assert code == 0
    assert np.allclose(rep["re"], 4 * np.eye(5))
    assert rep["min_eigenvalue"] == pytest.approx(4.0)
    e = np.zeros((5, 5))
    e[0, 0] = e[4, 4] = 1
    a = write_json(tmp_path / "e.json", hermitian_to_json(e))
    rep = json.loads(run("apply", "--d-file", d, "--matrix-file", a)[1])
    assert np.allclose(np.diag(rep["re"]), [3, 1, 0, 1, 3])
    nh = write_json(tmp_path / "nh.json", {"n": 5, "re": np.triu(np.ones((5, 5))).tolist()})
    assert run("apply", "--d-file", d, "--matrix-file", nh)[0] == 2
    small = write_json(tmp_path / "s.json", hermitian_to_json(np.eye(3)))
    assert run("apply", "--d-file", d, "--matrix-file", small)[0] == 2


def test_sweep(capsys):
    code, text = run("sweep", "--n-max", "8")
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(text)))
    assert list(rows[0]) == ["n", "p", "q", "closed_form", "brute_force", "agree",
                             "literal_lemma", "literal_agrees"]
    assert len(rows) == sum(n * (n - 1) // 2 for n in range(3, 9))
    assert all(r["agree"] == "true" for r in rows)
    assert "0 disagreements" in capsys.readouterr().err
    assert run("sweep", "--n-max", "3")[0] == 0
    assert run("sweep", "--n-max", "13")[0] == 2


def test_sweep_disagreement_exit_code(monkeypatch):
    import permpos.cli as cli
    real = cli.cyclic_has_property_c

    def broken(spec):
        v = real(spec)
        if (spec.n, spec.p, spec.q) == (4, 1, 3):
            return type(v)(spec, not v.has_property_c, v.rule)
        return v

    monkeypatch.setattr(cli, "cyclic_has_property_c", broken)
    assert run("sweep", "--n-max", "5")[0] == 3


def test_reports_are_byte_stable(tmp_path):
    f = write_json(tmp_path / "d.json", d_to_json(build_weighted_d(4, 1.2, Permutation.shift(4))))
    args = ["check", "--d-file", f, "--format", "json", *FAST]
    assert run(*args)[1] == run(*args)[1]
    args = ["propc", "--perm1", "2,3,4,1", "--perm2", "4,1,2,3", "--format", "json", *FAST]
    assert run(*args)[1] == run(*args)[1]


def test_argparse_errors_exit_2():
    with pytest.raises(SystemExit) as exc:
        main(["propc", "--perm1", "1,2"])
    assert exc.value.code == 2


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "permpos", "cyclic", "--n", "5", "--p", "1", "--q", "3",
                          "--timing"], capture_output=True, text=True)
    assert res.returncode == 0
    assert "property (C) holds" in res.stdout
    assert "wall time" in res.stderr and "wall time" not in res.stdout
