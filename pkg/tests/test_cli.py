import csv
import io

import pytest

from randtls.cli import SOLVE_COLUMNS, main


def parse(text):
    lines = text.splitlines()
    assert lines[0].startswith("# randtls-csv v")
    return list(csv.DictReader(io.StringIO("\n".join(lines[1:]))))


def test_solve_shaw(capsys):
    assert main(["solve", "--problem", "shaw", "--n", "256"]) == 0
    out = capsys.readouterr()
    rows = parse(out.out)
    assert list(rows[0]) == SOLVE_COLUMNS
    assert 8 <= int(rows[0]["rank"]) <= 20
    assert float(rows[0]["err_classical"]) < 4e-2
    assert "x_true" in out.err


def test_gravity2d_smoke(capsys):
    assert main(["solve", "--problem", "gravity2d", "--grid", "8"]) == 0
    assert len(parse(capsys.readouterr().out)) == 1


def test_trials_deterministic(capsys):
    argv = ["solve", "--problem", "gravity", "--n", "128", "--trials", "10", "--seed", "5"]
    main(argv)
    first = capsys.readouterr().out
    main(argv)
    second = capsys.readouterr().out
    rows = parse(first)
    assert len(rows) == 10 and [r["seed"] for r in rows] == [str(5 + i) for i in range(10)]
    strip = lambda rs: [{k: v for k, v in r.items() if k != "time_s"} for r in rs]
    assert strip(rows) == strip(parse(second))


def test_classical_baseline_when_generic(capsys):
    assert main(["solve", "--problem", "phillips", "--n", "64"]) == 0
    out = capsys.readouterr()
    row = parse(out.out)[0]
    assert out.err == ""
    assert row["err_classical"] != row["err_true"]


@pytest.mark.parametrize("baseline", ["truncated", "none"])
def test_other_baselines(capsys, baseline):
    assert main(["solve", "--problem", "phillips", "--n", "64", "--baseline", baseline]) == 0
    row = parse(capsys.readouterr().out)[0]
    assert (row["err_classical"] == "") == (baseline == "none")


def test_human_format(capsys):
    assert main(["solve", "--problem", "shaw", "--n", "64", "--format", "human"]) == 0
    assert capsys.readouterr().out.split()[:3] == ["problem", "n", "epsilon"]


def test_out_file(tmp_path, capsys):
    path = tmp_path / "r.csv"
    assert main(["solve", "--problem", "foxgood", "--n", "64", "--out", str(path)]) == 0
    assert capsys.readouterr().out == ""
    assert len(parse(path.read_text())) == 1


@pytest.mark.parametrize("argv,code", [
    (["solve", "--problem", "heat"], 2),
    (["solve", "--problem", "shaw", "--n", "8192"], 2),
    (["solve", "--problem", "blur", "--n", "50"], 2),
    (["solve", "--problem", "shaw", "--n", "64", "--trials", "0"], 2),
    (["solve", "--problem", "shaw", "--n", "64", "--eps", "-1"], 2),
    (["solve", "--problem", "shaw", "--n", "31"], 1),
    (["solve", "--problem", "phillips", "--n", "64", "--eps", "1e-14", "--power", "0"], 0),
])
def test_exit_codes(capsys, argv, code):
    assert main(argv) == code
    err = capsys.readouterr().err
    if code:
        assert err.startswith("randtls: error[")


def test_solver_error_code(capsys, monkeypatch):
    from randtls import cli
    from randtls.errors import RankOverflowError

    def boom(*args, **kwargs):
        raise RankOverflowError("too many", None)

    monkeypatch.setattr(cli, "run_once", boom)
    assert main(["solve", "--problem", "shaw", "--n", "64"]) == 1
    assert "error[rank_overflow]" in capsys.readouterr().err


def test_unknown_suite(capsys):
    with pytest.raises(SystemExit) as info:
        main(["bench", "table9"])
    assert info.value.code == 2


def test_bench_table2_structure(capsys):
    assert main(["bench", "table2", "--sizes", "64"]) == 0
    rows = parse(capsys.readouterr().out)
    assert [r["problem"] for r in rows] == ["shaw", "gravity", "foxgood", "phillips", "deriv2"]
    assert list(rows[0]) == ["problem", "n", "err", "time_s", "rank", "err_p", "time_p_s"]


def test_bench_table4_and_5(capsys):
    assert main(["bench", "table4", "--sizes", "8"]) == 0
    assert parse(capsys.readouterr().out)[0]["n"] == "64"
    assert main(["bench", "table5", "--sizes", "16"]) == 0
    assert parse(capsys.readouterr().out)[0]["grid"] == "16"


def test_bench_bounds(capsys):
    assert main(["bench", "bounds", "--trials", "5", "--sizes", "32"]) == 0
    rows = parse(capsys.readouterr().out)
    assert len(rows) == 18 + 3
    assert all(float(r["rate"]) <= 0.01 + 0.05 for r in rows)


def test_bench_unwritable(capsys):
    assert main(["bench", "table4", "--sizes", "8", "--out", "/nonexistent/dir/x.csv"]) == 1
    assert "error[io]" in capsys.readouterr().err


def test_export_round_trip(tmp_path, capsys):
    path = tmp_path / "g.txt"
    assert main(["export", "--problem", "gravity2d", "--grid", "4", "--d", "0.25", "--out", str(path)]) == 0
    assert "# d=0.25" in path.read_text().splitlines()
    assert main(["solve", "--from-file", str(path), "--baseline", "none"]) == 0
    assert parse(capsys.readouterr().out)[0]["problem"] == "gravity2d"


def test_export_needs_out(capsys):
    assert main(["export", "--problem", "shaw", "--n", "16", "--out", "-"]) == 2
