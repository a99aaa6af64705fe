import json

from bbo.cli import main


def test_list(capsys):
    assert main(["list"]) == 0
    out = capsys.readouterr().out
    for name in ("sphere", "hartmann6", "gp-ei", "bamsoo"):
        assert name in out


def test_refine_prints_plan(capsys):
    assert main(["refine", "--problem", "sphere", "--budget", "50", "--seed", "0"]) == 0
    out = dict(line.split(": ", 1) for line in capsys.readouterr().out.splitlines())
    assert out["K"] == "5" and out["cost"] == "21" and out["evaluations_used"] == "21"
    assert out["lower"] == "[-2, -2, -2, -2, -2]" and out["upper"] == "[1, 1, 1, 1, 1]"


def test_run_then_summarize(tmp_path, capsys):
    out = tmp_path / "run"
    code = main(["run", "--method", "ref-gp-ei,soo", "--problem", "branin", "--budget", "10d",
                 "--trials", "2", "--seed", "3", "--out", str(out)])
    assert code == 0
    assert "4/4 trials completed" in capsys.readouterr().out
    names = {p.name for p in out.iterdir()}
    assert {"results_branin.csv", "summary.csv", "metadata.json", "curves_branin.dat",
            "curves_branin.svg", "trace_branin.dat", "trace_branin.svg"} <= names
    meta = json.loads((out / "metadata.json").read_text())
    assert meta["config"]["base_seed"] == 3 and meta["seeds"] == [3, 4]

    again = tmp_path / "again"
    assert main(["summarize", "--in", str(out), "--out", str(again)]) == 0
    assert (again / "summary.csv").read_bytes() == (out / "summary.csv").read_bytes()


def test_errors_exit_nonzero(tmp_path, capsys):
    assert main(["run", "--method", "tpe", "--problem", "branin", "--trials", "1", "--out", str(tmp_path)]) == 1
    assert capsys.readouterr().err.startswith("bbo run: error:")
    assert main(["refine", "--problem", "nope"]) == 1
    assert main(["summarize", "--in", str(tmp_path / "missing"), "--out", str(tmp_path)]) == 1
