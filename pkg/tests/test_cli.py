import json

import pytest

from quadgraph.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_field_info(capsys):
    code, out, _ = run(capsys, "field-info", "--p", "7")
    assert code == 0
    info = json.loads(out)
    assert info["lambda"] == 3 and info["squares"] == 4


def test_field_info_rejects_composite(capsys):
    code, _, err = run(capsys, "field-info", "--p", "9")
    assert code == 2 and "prime" in err


def test_leaves(capsys):
    code, out, _ = run(capsys, "leaves", "--p", "7", "--shifts", "0,1,2", "--verify")
    assert code == 0
    assert json.loads(out)["leaf_count"] == 0


def test_leaves_duplicate_shift(capsys):
    assert run(capsys, "leaves", "--p", "7", "--shifts", "0,0")[0] == 2


def test_census_csv_and_summary(capsys):
    code, out, err = run(capsys, "census", "--p", "71", "--n", "3")
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "p,n,k,count,total,method,bucket"
    assert len(lines) == 6
    assert "4.35%" in err and "min=6" in err


def test_census_both_methods_agree(capsys):
    code, out, _ = run(capsys, "census", "--pmax", "17", "--n", "3", "--method", "both")
    assert code == 0


def test_census_budget_and_sampling(capsys, monkeypatch):
    monkeypatch.setenv("QUADGRAPH_BUDGET", "1000")
    assert run(capsys, "census", "--p", "101", "--n", "3")[0] == 2
    code, out, _ = run(capsys, "census", "--p", "101", "--n", "3", "--sample", "2000",
                       "--seed", "4")
    assert code == 0 and "sampled" in out


def test_census_json(capsys):
    code, out, _ = run(capsys, "census", "--p", "7", "--n", "2", "--format", "json")
    assert code == 0
    assert json.loads(out)[0]["count"] == 21


def test_cover_range(capsys):
    code, out, _ = run(capsys, "cover", "--pmax", "50", "--check-thresholds")
    assert code == 0
    assert out.splitlines()[0].endswith("thm_leaves,thm_leaves2,max_guaranteed_n")
    assert "7,3,0;1;2,true,3" in out


def test_cover_bad_prime(capsys):
    assert run(capsys, "cover", "--p", "4")[0] == 2


@pytest.mark.parametrize("kind", ["stacked", "lognum", "minmax"])
def test_census_figures(tmp_path, capsys, kind):
    csv_path = tmp_path / "census.csv"
    fig = tmp_path / f"{kind}.svg"
    code, _, _ = run(capsys, "census", "--pmin", "11", "--pmax", "41", "--n", "3",
                     "--out", str(csv_path), "--figure", str(fig), "--figure-kind", kind)
    assert code == 0
    assert csv_path.read_text().startswith("p,n,k")
    assert fig.read_text().lstrip().startswith("<?xml")


def test_dist_and_plot(tmp_path, capsys):
    csv_path = tmp_path / "dist.csv"
    code, _, err = run(capsys, "dist", "--p", "61", "--out", str(csv_path))
    assert code == 0 and "sup_cdf_deviation" in err
    png = tmp_path / "hist.png"
    assert run(capsys, "plot", str(csv_path), "--kind", "hist", "--out", str(png))[0] == 0
    assert png.read_bytes()[:4] == b"\x89PNG"


def test_plot_schema_mismatch(tmp_path, capsys):
    csv_path = tmp_path / "dist.csv"
    run(capsys, "dist", "--p", "31", "--out", str(csv_path))
    code, _, err = run(capsys, "plot", str(csv_path), "--kind", "stacked",
                       "--out", str(tmp_path / "x.svg"))
    assert code == 2 and "census" in err


def test_plot_missing_file(tmp_path, capsys):
    code = run(capsys, "plot", str(tmp_path / "nope.csv"), "--kind", "hist",
               "--out", str(tmp_path / "x.svg"))[0]
    assert code == 2


def test_dist_p3_conjectural(capsys):
    code, _, err = run(capsys, "dist", "--p", "3")
    assert code == 0 and "conjectural" in err


def test_dist_sampled(capsys):
    code, out, _ = run(capsys, "dist", "--p", "101", "--sample", "5000", "--seed", "2")
    assert code == 0
    assert ",sampled,2,5000" in out.splitlines()[1]


@pytest.mark.parametrize("suite", ["closed-forms", "bounds", "orbit", "covers"])
def test_verify_suites(capsys, suite):
    code, out, _ = run(capsys, "verify", "--suite", suite, "--pmax", "19")
    assert code == 0
    assert json.loads(out)["status"] == "pass"


def test_usage_error_exit_code(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["census", "--n", "3"])
    assert exc.value.code == 2
