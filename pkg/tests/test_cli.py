import csv
import io
import json

import pytest

from specbounds import cli
from specbounds.errors import ConvergenceError
from specbounds.power_law import table1_csv


def run(capsys, *argv):
    code = cli.main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def rows_of(text):
    return list(csv.DictReader(io.StringIO(text)))


def test_pnumbers_closed_form(capsys):
    code, out, _ = run(capsys, "pnumbers", "-q", "-1", "-n", "1", "-l", "0", "-N", "3")
    assert code == 0
    row = rows_of(out)[0]
    assert row["P"] == "1.000000" and row["provenance"] == "closed-form"


def test_pnumbers_reduced_dimension(capsys):
    code, out, _ = run(capsys, "pnumbers", "-q", "1", "-n", "1", "-l", "2", "-N", "3", "--precision", "4")
    assert code == 0 and rows_of(out)[0]["P"] == "3.3702"


def test_table1_is_bit_exact(capsys):
    code, out, _ = run(capsys, "pnumbers", "--table1")
    assert code == 0
    assert out == table1_csv()
    assert rows_of(out)[1]["n1"] == "1.3761"


def test_pnumbers_needs_q(capsys):
    code, _, err = run(capsys, "pnumbers")
    assert code == 2 and "error" in err


def test_bound_all_rows(capsys):
    code, out, _ = run(capsys, "bound", "-a", "1", "-b", "1", "--method", "all", "-N", "3")
    assert code == 0
    values = {row["label"]: float(row["value"]) for row in rows_of(out)}
    assert set(values) == {"ELHY", "EUL", "EUHO", "ELS", "ELC", "EUC", "ELCW", "EUCW", "EX"}
    for lo, hi in [("ELHY", "ELC"), ("ELC", "ELCW"), ("ELS", "EX"), ("ELCW", "EX"), ("EX", "EUCW"),
                   ("EUCW", "EUC"), ("EUC", "EUL"), ("EUL", "EUHO")]:
        assert values[lo] <= values[hi] + 1e-6


def test_bound_restriction(capsys):
    code, out, err = run(capsys, "bound", "-a", "1", "-b", "1", "--method", "sum", "-n", "2")
    assert code == 4 and out == "" and "n = 1" in err
    code, _, _ = run(capsys, "bound", "--method", "chord-upper-psi", "-n", "3")
    assert code == 4


def test_unsafe_estimate_is_tagged(capsys):
    code, out, _ = run(capsys, "bound", "--method", "sum", "-n", "2", "--unsafe-estimate")
    assert code == 0 and rows_of(out)[0]["direction"] == "estimate"


def test_bound_all_for_excited_level_keeps_envelopes(capsys):
    code, out, _ = run(capsys, "bound", "-n", "2")
    assert code == 0
    assert {row["label"] for row in rows_of(out)} == {"ELHY", "EUL", "EUHO", "EX"}


def test_bound_scaling(capsys):
    code, out, _ = run(capsys, "bound", "-a", "2", "-b", "8", "--omega", "1", "--method", "envelope-lower")
    assert code == 0 and float(rows_of(out)[0]["value"]) == pytest.approx(4.0, abs=1e-6)
    _, exact, _ = run(capsys, "bound", "-a", "2", "-b", "8", "--method", "exact", "--precision", "10")
    _, direct, _ = run(capsys, "solve", "-V", "2*r^-1,8*r^1", "--precision", "10")
    assert float(rows_of(exact)[0]["value"]) == pytest.approx(float(rows_of(direct)[0]["E"]), rel=1e-7)


@pytest.mark.parametrize("potential, expected", [("1*r^-1,1*r^1", "1.397876"), ("1*r^-1", "-0.250000"),
                                                 ("1*r^2", "3.000000")])
def test_solve_examples(capsys, potential, expected):
    code, out, _ = run(capsys, "solve", "-V", potential, "-n", "1", "-l", "0", "-N", "3")
    assert code == 0 and rows_of(out)[0]["E"] == expected


def test_solve_dump(capsys, tmp_path):
    path = tmp_path / "u.csv"
    code, _, _ = run(capsys, "solve", "-V", "1*r^1", "--dump", str(path))
    assert code == 0 and path.read_text().startswith("r,u\n")


def test_solve_parse_error(capsys):
    code, _, err = run(capsys, "solve", "-V", "r squared")
    assert code == 2 and "parse" in err


def test_flag_errors_exit_2(capsys):
    with pytest.raises(SystemExit) as exc:
        cli.main(["bound", "--method", "nonsense"])
    assert exc.value.code == 2
    with pytest.raises(SystemExit) as exc:
        cli.main(["solve", "-V", "1*r^1", "--precision", "20"])
    assert exc.value.code == 2
    code, _, _ = run(capsys, "bound", "-a", "-1")
    assert code == 2


def test_numeric_failure_exit_3(capsys, monkeypatch):
    def fail(*args, **kwargs):
        raise ConvergenceError("did not converge")
    monkeypatch.setattr(cli, "solve_eigenvalue", fail)
    code, _, err = run(capsys, "solve", "-V", "1*r^1")
    assert code == 3 and "numerical failure" in err


def test_figure_row_failure_is_annotated(capsys, monkeypatch):
    def fail(*args, **kwargs):
        raise ConvergenceError("did not converge")
    monkeypatch.setattr(cli, "chord_upper", fail)
    code, out, err = run(capsys, "figure", "5", "--points", "2", "--lambda-min", "0.5", "--lambda-max", "2")
    rows = rows_of(out)
    assert code == 3 and len(rows) == 10
    assert all(row["EUC"] == "" and row["status"].startswith("error EUC") for row in rows)
    assert all(row["ELS"] != "" for row in rows)


def test_config_precedence(monkeypatch):
    parser = cli.build_parser()
    monkeypatch.setenv("SPECBOUNDS_MESH", "5000")
    monkeypatch.setenv("SPECBOUNDS_TOL", "1e-9")
    args = parser.parse_args(["solve", "-V", "1*r^1"])
    cfg = cli.solver_config(args)
    assert cfg.mesh_points == 5000 and cfg.energy_tol == 1e-9
    args = parser.parse_args(["solve", "-V", "1*r^1", "--mesh", "3000"])
    assert cli.solver_config(args).mesh_points == 3000
    monkeypatch.setenv("SPECBOUNDS_RMAX", "abc")
    with pytest.raises(cli.UsageError):
        cli.solver_config(args)


def test_json_keeps_full_precision(capsys):
    code, out, _ = run(capsys, "bound", "--method", "exact", "--format", "json", "--precision", "2")
    data = json.loads(out)
    assert code == 0 and data[0]["label"] == "EX"
    assert data[0]["value"] == pytest.approx(1.3978756, abs=1e-7)


def test_figure_is_deterministic_and_parallel_safe(capsys, tmp_path):
    args = ["figure", "4", "--points", "2", "--lambda-min", "0.5", "--lambda-max", "2"]
    code1, out1, _ = run(capsys, *args)
    code2, out2, _ = run(capsys, *args, "--jobs", "2")
    assert code1 == code2 == 0 and out1 == out2
    rows = rows_of(out1)
    assert list(rows[0]) == ["lambda", "EUHO", "EUL", "EUC", "EUCW", "ELHY", "ELC", "ELCW", "ELS", "EX", "status"]
    assert all(row["status"] == "ok" for row in rows)


def test_figure_grid_validation(capsys):
    code, _, _ = run(capsys, "figure", "1", "--lambda-min", "2", "--lambda-max", "1")
    assert code == 2


def test_cache_files(capsys, tmp_path):
    path = tmp_path / "cache.csv"
    code, _, _ = run(capsys, "pnumbers", "-q", "1.5", "--cache-out", str(path))
    assert code == 0
    assert path.read_text().splitlines()[0] == "q,n,M,P"
    code, _, _ = run(capsys, "pnumbers", "-q", "1.5", "--cache-in", str(path))
    assert code == 0
