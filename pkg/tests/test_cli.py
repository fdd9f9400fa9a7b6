import json

import pytest

from artin_randlab.cli import main, parse_range, UsageError
from artin_randlab.graph import decode

HEADER = "n,m,predicate,exact,p_hat,ci_low,ci_high,samples,seed,asymptote"


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_exact_formula_golden(capsys):
    code, out, _ = run(capsys, "exact", "--formula", "22free", "--n", "3", "--m", "3")
    assert code == 0
    assert out == f"{HEADER}\n3,3,22free,0.740740740741,,,,,,\n"


def test_exact_predicate_json(capsys):
    code, out, _ = run(capsys, "exact", "--predicate", "free_of_infinity", "--n", "3", "--m", "3",
                       "--format", "json")
    assert code == 0
    (row,) = json.loads(out)
    assert row["exact"] == "0.296296296296" and row["predicate"] == "free_of_infinity"


def test_sweep_asymptote_column(capsys):
    code, out, _ = run(capsys, "sweep", "--growth", "1*N^2", "--predicate", "large",
                       "--n", "20:60:20", "--samples", "2000", "--seed", "1")
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0] == HEADER and len(lines) == 4
    assert all(line.split(",")[-1] == "0.606530659713" for line in lines[1:])
    assert [line.split(",")[1] for line in lines[1:]] == ["400", "1600", "3600"]


def test_estimate_is_reproducible(capsys):
    args = ("estimate", "--predicate", "cone", "--n", "6", "--m", "4", "--samples", "3000", "--seed", "9")
    first = run(capsys, *args)[1]
    assert run(capsys, *args, "--threads", "2")[1] == first


def test_sample(capsys):
    code, out, _ = run(capsys, "sample", "--n", "5", "--m", "10", "--seed", "7")
    assert code == 0 and decode(out.strip()).n == 5
    code, out, _ = run(capsys, "sample", "--n", "5", "--growth", "1*N^3/2", "--seed", "7", "--count", "200")
    graphs = [decode(line) for line in out.strip().splitlines()]
    assert len(graphs) == 200 and max(int(g.codes.max()) for g in graphs) == 11


@pytest.mark.parametrize(
    "argv",
    [
        ["sample", "--n", "5", "--m", "1"],
        ["estimate", "--predicate", "cone", "--n", "30", "--m", "5", "--samples", "0"],
        ["estimate", "--predicate", "nope", "--n", "3", "--m", "5", "--samples", "5"],
        ["sample", "--n", "3", "--m", "3", "--growth", "N"],
        ["sample", "--n", "3"],
        ["sample", "--n", "3", "--m", "3", "--require-seed"],
        ["sweep", "--predicate", "large", "--n", "3:5", "--m", "4", "--samples", "5"],
        ["sweep", "--predicate", "large", "--n", "5:3", "--growth", "N", "--samples", "5"],
        ["exact", "--n", "3", "--m", "3"],
        ["exact", "--predicate", "cone", "--n", "7", "--m", "5"],
        ["bogus"],
    ],
)
def test_usage_errors(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == 1
    assert err


def test_bad_samples_message(capsys):
    _, _, err = run(capsys, "estimate", "--predicate", "cone", "--n", "30", "--m", "5", "--samples", "0")
    assert "BadSamples" in err


def test_classify(capsys, tmp_path):
    path = tmp_path / "g.json"
    path.write_text('{"n":3,"edges":[[0,1,5],[0,2,5],[1,2,5]]}')
    code, out, _ = run(capsys, "classify", str(path))
    report = json.loads(out)
    assert code == 0 and report["xxl"] and "CAT(0)" in report["properties"]
    path.write_text('{"n":3,"edges":[]}')
    assert json.loads(run(capsys, "classify", str(path))[1])["connected"] is False
    path.write_text('{"n":3,"edges":[[0,1,5]')
    code, _, err = run(capsys, "classify", str(path))
    assert code == 1 and "ParseError" in err


def test_io_errors(capsys, tmp_path):
    assert run(capsys, "classify", str(tmp_path / "missing.json"))[0] == 3
    out = tmp_path / "no_dir" / "x.csv"
    assert run(capsys, "exact", "--formula", "ex", "--n", "4", "--m", "2", "--output", str(out))[0] == 3


def test_output_file(capsys, tmp_path):
    out = tmp_path / "x.csv"
    assert run(capsys, "exact", "--formula", "ex", "--n", "4", "--m", "2", "--output", str(out))[0] == 0
    assert out.read_text().splitlines()[1].startswith("4,2,ex,6,")


def test_verify(capsys):
    code, out, _ = run(capsys, "verify")
    assert code == 0
    assert "22free n=3 m=3: 20/27 == 20/27 PASS" in out
    assert "FAIL" not in out


def test_verify_all_skipped(capsys):
    code, out, err = run(capsys, "verify", "--budget", "10")
    assert code == 0
    assert "warning" in err
    assert "PASS" not in out
    assert all(line.endswith("SKIPPED") for line in out.strip().splitlines()[:-1])


def test_conjecture_first_row(capsys):
    code, out, _ = run(capsys, "conjecture", "--n", "3:4")
    lines = out.strip().splitlines()
    assert code == 0
    assert lines[0] == "n,m,value,dist_one_minus_inv_e,dist_inv_sqrt_e"
    assert lines[1].startswith("3,5,0.896,")


def test_parse_range():
    assert parse_range("20:200:20") == list(range(20, 201, 20))
    assert parse_range("3:5") == [3, 4, 5]
    assert parse_range("4,9") == [4, 9]
    assert parse_range("7") == [7]
    for bad in ("5:3", "a", "3,3", "1:5:0"):
        with pytest.raises(UsageError):
            parse_range(bad)
