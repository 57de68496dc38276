import json
from pathlib import Path

import pytest

from cpcredible.cli import main
from cpcredible.regions import read_regions
from cpcredible.samples import SampleSet, read_samples, write_samples

DATA = Path(__file__).parent / "data"


def run(*argv):
    return main([str(a) for a in argv])


def test_golden_svg(tmp_path, capsys):
    out = tmp_path / "r.csv"
    svg = tmp_path / "r.svg"
    code = run("regions", "--samples", DATA / "small_samples.txt", "--alpha-grid", 4, "--method", "exact",
               "-o", out, "--svg", svg, "--series", DATA / "small_series.csv",
               "--manifest", tmp_path / "golden.manifest.json")
    assert code == 0
    assert svg.read_bytes() == (DATA / "golden.svg").read_bytes()


def test_manifest_contents(tmp_path):
    out = tmp_path / "r.csv"
    assert run("regions", "--samples", DATA / "small_samples.txt", "--alpha", 0.5, "-o", out) == 0
    assert out.read_text().splitlines()[0] == "# manifest=r.csv.manifest.json"
    manifest = json.loads((tmp_path / "r.csv.manifest.json").read_text())
    assert manifest["command"] == "regions"
    assert manifest["config"]["alpha"] == 0.5
    assert str(DATA / "small_samples.txt") in manifest["inputs"]
    assert "solve" in manifest["timing_seconds"]


def test_alpha_one_gives_empty_region(capsys):
    assert run("regions", "--samples", DATA / "small_samples.txt", "--alpha", 1, "--method", "exact") == 0
    lines = capsys.readouterr().out.strip().splitlines()
    assert lines[-1] == "1,0.166666666667,0,"


def test_pipeline(tmp_path):
    y, s = tmp_path / "y.csv", tmp_path / "s.txt"
    assert run("simulate", "--preset", "replica", "--seed", 3, "-o", y, "--spec-out", tmp_path / "spec.cfg") == 0
    assert run("sample", "--series", y, "--m", 2000, "--seed", 1, "-o", s) == 0
    samples = read_samples(s)
    assert samples.n == 550 and samples.m == 2000
    r = tmp_path / "r.csv"
    assert run("regions", "--samples", s, "-o", r, "--svg", tmp_path / "r.svg", "--series", y) == 0
    assert len(read_regions(r)) == 29
    imp = tmp_path / "imp.csv"
    assert run("importance", "--regions", r, "--samples", s, "--window", "cp200=151..225",
               "--window", "first=1..130", "-o", imp) == 0
    assert imp.read_text().splitlines()[1] == "label,importance,sensitivity"
    for cmd in ("marginal", "bonferroni"):
        assert run(cmd, "--samples", s, "-o", tmp_path / f"{cmd}.csv") == 0
    assert run("hdr", "--samples", s, "--series", y, "--alpha", 0.1, "-o", tmp_path / "h.csv") == 0
    assert "weights=model-posterior" in (tmp_path / "h.csv").read_text()
    assert run("plot", "--regions", r, "--series", y, "-o", tmp_path / "p.svg") == 0


def test_pipeline_is_deterministic(tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    outputs = []
    for name in ("a", "b"):
        d = tmp_path / name
        d.mkdir()
        run("simulate", "--seed", 8, "-o", d / "y.csv", "--manifest", d / "m1.json")
        run("sample", "--series", d / "y.csv", "--m", 3000, "--seed", 8, "-o", d / "s.txt", "--threads", 2)
        run("regions", "--samples", d / "s.txt", "-o", d / "r.csv", "--svg", d / "r.svg", "--series",
            d / "y.csv", "--manifest", "run.json")
        outputs.append([(d / f).read_bytes() for f in ("y.csv", "s.txt", "r.csv", "r.svg")])
    assert outputs[0] == outputs[1]


def test_export_ilp(tmp_path):
    s = tmp_path / "s.txt"
    write_samples(SampleSet(3, [(1,), (2,), (1, 2), (3,)]), s)
    lp = tmp_path / "c.lp"
    assert run("export-ilp", "--samples", s, "--alpha", 0.25, "-o", lp) == 0
    highspy = pytest.importorskip("highspy")
    h = highspy.Highs()
    h.setOptionValue("output_flag", False)
    h.readModel(str(lp))
    h.run()
    assert round(h.getInfo().objective_function_value) == 2


def test_budget_exit_code(tmp_path, capsys):
    s = tmp_path / "s.txt"
    configs = [tuple(range(i, i + 3)) for i in range(1, 40)] + [(i, i + 7) for i in range(1, 40)]
    write_samples(SampleSet(50, configs), s)
    out = tmp_path / "r.csv"
    code = run("regions", "--samples", s, "--alpha", 0.4, "--method", "exact", "--max-nodes", 1, "-o", out)
    assert code == 3
    assert out.exists() and len(read_regions(out)) == 1
    assert capsys.readouterr().err.startswith("error: BudgetExhausted")


@pytest.mark.parametrize("argv", [
    ["regions", "--samples", DATA / "small_samples.txt", "--alpha", 1.5],
    ["sample", "--series", DATA / "small_series.csv", "--prior", "fixed-k", "--k", 12],
    ["sample", "--series", DATA / "small_series.csv", "--p", 0],
    ["regions", "--samples", DATA / "small_series.csv"],
    ["regions", "--samples", DATA / "missing.txt"],
    ["importance", "--regions", DATA / "small_series.csv", "--window", "w=1..2"],
])
def test_invalid_input_exit_code(argv, capsys):
    assert run(*argv) == 1
    err = capsys.readouterr().err.strip().splitlines()
    assert len(err) == 1 and err[0].startswith("error: ")


def test_usage_error_exit_code():
    with pytest.raises(SystemExit) as exc:
        run("regions")
    assert exc.value.code == 2


def test_thread_env_default(monkeypatch, tmp_path):
    monkeypatch.setenv("CPCREDIBLE_THREADS", "2")
    out = tmp_path / "s.txt"
    assert run("sample", "--series", DATA / "small_series.csv", "--m", 50, "-o", out) == 0
    manifest = json.loads((tmp_path / "s.txt.manifest.json").read_text())
    assert manifest["config"]["threads"] == 2


def test_compare_models(tmp_path):
    y = tmp_path / "y.csv"
    run("simulate", "--preset", "returns", "--seed", 1, "-o", y)
    out = tmp_path / "c.csv"
    assert run("compare", "--mode", "models", "--series", y, "--model", "variance", "--m", 500, "-o", out) == 0
    assert [l.split(",")[0] for l in out.read_text().splitlines()[2:]] == ["k=3", "k=5"]
