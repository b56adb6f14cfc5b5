import subprocess
import sys
import xml.etree.ElementTree as ET

import numpy as np
import pytest

from tomodeco import cli, tables, verification
from tomodeco.classicality import figure1a_data, make_grid
from tomodeco.lindblad import LindbladParams, evolve_closed_form


def run(argv, capsys):
    code = cli.main(argv)
    out, err = capsys.readouterr()
    return code, out, err


def test_fig1a_csv(capsys):
    code, out, _ = run(["fig1a", "--dims", "2,3,4,5", "--sigma-min", "-1.5", "--sigma-max", "3",
                        "--sigma-step", "0.05"], capsys)
    assert code == 0
    table = tables.from_csv(out)
    assert table.columns == ["sigma", "N", "w_min"]
    assert table.metadata["command"] == "fig1a"
    assert table.metadata["seed"] == 0
    rows = {(r[0], r[1]): r[2] for r in table.rows}
    for N in (2, 3, 4, 5):
        assert rows[(-1.0, N)] == 0.0
    assert rows[(0.0, 2)] == pytest.approx(-0.3660254, abs=1e-7)


def test_timescale_summary(capsys):
    code, out, _ = run(["timescale", "--dim", "2", "--sigma", "0", "--gamma", "1"], capsys)
    assert code == 0
    lines = dict(line.split("=", 1) for line in out.splitlines())
    assert lines["k_star"] == "1"
    assert float(lines["t_star"]) == pytest.approx(0.1373265, abs=1e-7)


def test_timescale_table(tmp_path, capsys):
    path = tmp_path / "ts.json"
    assert run(["timescale", "--dim", "4", "--sigma", "1", "--out", str(path), "--format", "json"],
               capsys)[0] == 0
    t = tables.from_json(path.read_text())
    row = dict(zip(t.columns, t.rows[0]))
    assert row["k_star"] == 1 and row["t_star"] == pytest.approx(row["t_k_upper"])


@pytest.mark.parametrize("fmt, load", [("csv", tables.from_csv), ("json", tables.from_json)])
def test_figure_round_trip(fmt, load, tmp_path, capsys):
    path = tmp_path / f"fig.{fmt}"
    assert run(["fig1b", "--t-steps", "40", "--format", fmt, "--out", str(path)], capsys)[0] == 0
    fig = tables.table_to_figure(load(path.read_text()))
    direct = cli.render(["fig1b", "--t-steps", "40", "--format", fmt])
    assert path.read_text() == direct
    assert fig.values.shape == (91, 41)
    assert fig.metadata == {"N": 4, "gamma": 1.0}
    again = tables.to_csv(tables.figure_to_table(fig))
    assert tables.table_to_figure(tables.from_csv(again)).values.tolist() == fig.values.tolist()


def test_figure_table_round_trip_exact():
    fig = figure1a_data([2, 7], make_grid(-1.3, 2.9, 0.1))
    back = tables.table_to_figure(tables.from_csv(tables.to_csv(tables.figure_to_table(fig))))
    np.testing.assert_array_equal(back.values, fig.values)
    np.testing.assert_array_equal(back.axes["sigma"], fig.axes["sigma"])
    np.testing.assert_array_equal(back.axes["N"], fig.axes["N"])


@pytest.mark.parametrize("method", ["rk4", "closed"])
def test_lindblad_trajectory_round_trip(method, tmp_path, capsys):
    path = tmp_path / "traj.csv"
    argv = ["lindblad", "--dim", "3", "--t-max", "0.5", "--steps", "10", "--method", method,
            "--initial", "random", "--seed", "11", "--out", str(path)]
    assert run(argv, capsys)[0] == 0
    table = tables.from_csv(path.read_text())
    traj = tables.table_to_trajectory(table)
    assert traj.states.shape == (11, 3, 3)
    p = LindbladParams(1.0, 3)
    exact = [evolve_closed_form(traj.states[0], t, p) for t in traj.times]
    assert np.max(np.abs(traj.states - np.array(exact))) <= 1e-10
    assert max(table.column("closed_form_error")) <= 1e-10
    assert table.column("min_w")[-1] > table.column("min_w")[0]


def test_lindblad_full_rhs(capsys):
    code, out, _ = run(["lindblad", "--dim", "3", "--t-max", "0.2", "--steps", "2", "--rhs", "full"], capsys)
    assert code == 0
    assert max(tables.from_csv(out).column("closed_form_error")) <= 1e-10


def test_channel_command(capsys):
    code, out, _ = run(["channel", "--dim", "2", "--steps", "3", "--sigma", "1", "--samples", "20000"], capsys)
    assert code == 0
    t = tables.from_csv(out)
    assert t.column("k").tolist() == [0, 1, 2, 3]
    np.testing.assert_allclose(t.column("bloch_norm"), 3.0 ** -np.arange(4), rtol=1e-14)
    assert t.column("min_w")[0] < 0 <= t.column("min_w")[1] + 1e-12
    assert t.metadata["mc_step_max_zscore"] <= 4


def test_wmin_command(capsys):
    code, out, _ = run(["wmin", "--dim", "3", "--sigma", "0", "--samples", "5000", "--seed", "3"], capsys)
    assert code == 0
    row = dict(zip(*[tables.from_csv(out).columns, tables.from_csv(out).rows[0]]))
    assert row["min_w_pure"] == pytest.approx(row["w_min_formula"], abs=1e-12)
    assert row["mc_min"] >= row["w_min_formula"]


@pytest.mark.parametrize("cmd", ["fig1a", "fig1b"])
def test_svg_output(cmd, capsys):
    code, out, _ = run([cmd, "--format", "svg"], capsys)
    assert code == 0
    root = ET.fromstring(out)
    assert root.tag.endswith("svg")


def test_svg_rejected_for_tables(capsys):
    code, _, err = run(["channel", "--format", "svg"], capsys)
    assert code == 2 and "--format" in err


def test_unknown_command(capsys):
    with pytest.raises(SystemExit) as exc:
        cli.main(["frobnicate"])
    assert exc.value.code == 2
    assert "usage" in capsys.readouterr().err


@pytest.mark.parametrize("argv, flag", [
    (["timescale", "--dim", "1"], "--dim"),
    (["timescale", "--gamma", "-1"], "--gamma"),
    (["fig1a", "--sigma-step", "0"], "--sigma-step"),
    (["fig1a", "--dims", "2,1"], "--dims"),
    (["verify", "--samples", "0"], "--samples"),
    (["lindblad", "--dt", "1.0"], "--dt"),
    (["channel", "--seed", str(2**64)], "--seed"),
    (["fig1b", "--t-max", "0"], "--t-max"),
])
def test_invalid_ranges(argv, flag, capsys):
    code, _, err = run(argv, capsys)
    assert code == 2
    assert flag in err


def test_unwritable_output(tmp_path, capsys):
    code, _, err = run(["fig1a", "--out", str(tmp_path / "missing" / "x.csv")], capsys)
    assert code == 1
    assert "cannot write" in err


def test_config_file_and_precedence(tmp_path, capsys):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# comment\ndim=5\nsigma = 3\ngamma=2\n")
    code, out, _ = run(["timescale", "--config", str(cfg), "--gamma", "1"], capsys)
    assert code == 0
    lines = dict(line.split("=", 1) for line in out.splitlines())
    assert lines["k_star"] == "2"
    assert float(lines["t_star"]) == pytest.approx(4 * np.log(6) / 20)
    cfg.write_text("bogus=1\n")
    assert run(["timescale", "--config", str(cfg)], capsys)[0] == 2


def test_seed_from_environment(monkeypatch):
    monkeypatch.setenv("TOMO_SEED", "99")
    a = cli.render(["wmin", "--samples", "100"])
    assert tables.from_csv(a).metadata["seed"] == 99
    assert a != cli.render(["wmin", "--samples", "100", "--seed", "98"])
    assert a == cli.render(["wmin", "--samples", "100", "--seed", "99"])


@pytest.mark.parametrize("argv", [
    ["channel", "--dim", "3", "--samples", "5000", "--seed", "5"],
    ["lindblad", "--dim", "2", "--initial", "random", "--seed", "5", "--steps", "5"],
    ["wmin", "--dim", "4", "--samples", "5000", "--seed", "5"],
    ["timescale", "--dim", "3", "--sigma", "2"],
    ["fig1a"],
    ["fig1b", "--format", "json"],
])
def test_reruns_are_byte_identical(argv, tmp_path, capsys):
    paths = [tmp_path / "a", tmp_path / "b"]
    for p in paths:
        assert run([*argv, "--out", str(p)], capsys)[0] == 0
    assert paths[0].read_bytes() == paths[1].read_bytes()


def test_verify_reports_and_fails(monkeypatch, capsys):
    code, out, _ = run(["verify", "--dim", "2", "--samples", "20000", "--seed", "1"], capsys)
    assert code == 0
    assert out.count("PASS") == 19 and "19/19 checks passed" in out

    def broken(N, samples, rng):
        return [verification.CheckResult("broken", False, 1.0, 0.0, 0.0)]

    monkeypatch.setattr(verification, "CHECKS", [broken])
    code, out, _ = run(["verify", "--dim", "2"], capsys)
    assert code == 1 and "FAIL broken" in out


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "tomodeco", "timescale", "--dim", "2"],
                         capture_output=True, text=True, check=False)
    assert res.returncode == 0
    assert res.stdout.startswith("k_star=1")
