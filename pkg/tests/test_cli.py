import csv
import io
import json

import pytest

from qzeta.cli import RunConfig, main, parse_complex, parse_index


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


@pytest.mark.parametrize(
    "text,expected",
    [
        ("[3,1,1]", ((3, 1, 1), False)),
        ("zeta[2,1]", ((2, 1), False)),
        ("zeta*[1,1]", ((1, 1), True)),
        ("[3,1*2]", ((3, 1, 1), False)),
        ("[3,{1}^2]", ((3, 1, 1), False)),
        ("[ 4 , 2 ]", ((4, 2), False)),
    ],
)
def test_parse_index(text, expected):
    assert parse_index(text) == expected


@pytest.mark.parametrize("bad", ["foo", "[]", "[0,2]", "[2,x]", "[2,1"])
def test_parse_index_rejects(bad):
    with pytest.raises(ValueError):
        parse_index(bad)


def test_parse_complex():
    assert parse_complex("0.5+0.5i") == 0.5 + 0.5j
    assert parse_complex("-3i") == -3j
    assert parse_complex("2") == 2


def test_run_config_validation():
    with pytest.raises(ValueError):
        RunConfig(command="eval", q_list=(1.0,))
    with pytest.raises(ValueError):
        RunConfig(command="eval", q_list=(0.5,), tol=0.0)


def test_eval_json(capsys):
    code, out, _ = run(capsys, "eval", "[2,1]", "--q", "0.5", "--format", "json")
    assert code == 0
    (rec,) = json.loads(out)
    assert rec["index"] == [2, 1]
    assert rec["value"] == pytest.approx(0.2722032056332137, abs=1e-12)


def test_eval_star_matches_plain(capsys):
    _, a, _ = run(capsys, "eval", "zeta*[1,1]", "--format", "json")
    _, b, _ = run(capsys, "eval", "[2,1]", "--format", "json")
    assert json.loads(a)[0]["value"] == json.loads(b)[0]["value"]


def test_eval_exit_codes(capsys):
    code, _, err = run(capsys, "eval", "[1,2]", "--q", "0.5")
    assert code == 3 and "divergent: leading exponent must exceed 1" in err
    code, _, err = run(capsys, "eval", "foo")
    assert code == 2 and "cannot parse" in err
    assert run(capsys, "eval", "[3]", "--q", "1.5")[0] == 2


def test_verify_sum(capsys):
    code, out, _ = run(capsys, "verify", "sum", "--q", "0.5", "--max-weight", "8")
    assert code == 0
    assert out.startswith("TAP version 13\n1..36\n")
    assert out.rstrip().endswith("# identities=36 pass=36 fail=0")


def test_verify_euler_two_q(capsys):
    code, out, _ = run(capsys, "verify", "euler", "--q", "0.2,0.95")
    assert code == 0 and "# identities=14 pass=14 fail=0" in out


def test_verify_pole_is_infrastructure_error(capsys):
    code, _, err = run(capsys, "verify", "gf", "--q", "0.5", "--z", "2")
    assert code == 4 and "PoleProximity" in err


def test_verify_json_fields(capsys):
    code, out, err = run(capsys, "verify", "diagonal", "--q", "0.5", "--cap", "5", "--format", "json")
    assert code == 0
    reports = json.loads(out)
    assert all(r["pass"] and r["residual"] <= r["budget"] for r in reports)
    assert err.startswith("# identities=")


def test_table_kinds(capsys):
    code, out, _ = run(capsys, "table", "zeta", "--q", "0.5", "--max-weight", "4", "--format", "csv")
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    assert list(rows[0]) == ["index", "q", "value", "tail_bound", "terms_used"]
    assert len(rows) == 1 + 2 + 4  # admissible indices of weight 2, 3, 4
    code, out, _ = run(capsys, "table", "G0", "--q", "0.5", "--weight", "5", "--format", "json")
    rows = json.loads(out)
    assert code == 0 and {(r["r"], r["s"]) for r in rows} == {(1, 1), (2, 1), (2, 2), (3, 1), (3, 2), (4, 1)}
    code, out, _ = run(capsys, "table", "drin-coeffs", "--q", "0.5", "--cap", "4", "--format", "json")
    rows = json.loads(out)
    assert code == 0 and rows[0]["m"] == 0 and rows[0]["n"] == 0


def test_out_files_byte_identical(tmp_path, capsys, monkeypatch):
    paths = []
    for threads in ("1", "6"):
        monkeypatch.setenv("QMZV_THREADS", threads)
        p = tmp_path / f"run{threads}.json"
        assert main(["verify", "abreps", "--q", "0.5", "--format", "json", "--out", str(p)]) == 0
        paths.append(p)
    capsys.readouterr()
    assert paths[0].read_bytes() == paths[1].read_bytes()
