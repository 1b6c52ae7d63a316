import csv
import json
from pathlib import Path

import pytest

from qrcfigs import FigureSpec, MissingColumnError, RenderError, render
from qrcfigs.cli import main

DATA = Path(__file__).parent / "data"

CASES = {
    "2a": DATA / "stm_sweep",
    "2b": DATA / "monomial_sweep",
    "3": DATA / "forecast_sweep",
    "s2": DATA / "backflow_run",
    "s3": DATA / "embedded_stm_sweep",
    "s4": DATA / "santa_fe_sweep",
}


def summary_values(path):
    with open(path, newline="") as fh:
        return {
            (row["value"], row["metric"]): (float(row["mean"]), float(row["std"]))
            for row in csv.DictReader(fh)
        }


@pytest.mark.parametrize("figure", sorted(CASES))
def test_render_all_sample_figures(figure, tmp_path):
    out = tmp_path / f"fig_{figure}.png"
    stats = render(FigureSpec(figure=figure, input_dir=CASES[figure], output_path=out))
    assert out.exists() and out.stat().st_size > 0
    sidecar = out.with_suffix(".stats.json")
    assert json.loads(sidecar.read_text()) == json.loads(json.dumps(stats))


@pytest.mark.parametrize("figure", ["2a", "s3", "s4"])
def test_plotted_means_equal_summary_exactly(figure, tmp_path):
    out = tmp_path / "fig.png"
    stats = render(FigureSpec(figure=figure, input_dir=CASES[figure], output_path=out))
    raw = summary_values(CASES[figure] / "sweep_summary.csv")
    for label, data in stats["series"].items():
        value = label.split("=", 1)[1]
        metric_kind = "tau" if figure in ("2a", "s3") else "eta"
        for x, mean, std in zip(data["x"], data["mean"], data["std"]):
            csv_mean, csv_std = raw[(value, f"capacity[{metric_kind}={x}]")]
            assert mean == csv_mean
            assert std == csv_std


def test_monomial_means_equal_summary_exactly(tmp_path):
    out = tmp_path / "fig.png"
    stats = render(FigureSpec(figure="2b", input_dir=CASES["2b"], output_path=out))
    raw = summary_values(CASES["2b"] / "sweep_summary.csv")
    data = stats["series"]["lambda"]
    for x, mean in zip(data["x"], data["mean"]):
        assert mean == raw[(f"{x:g}", "capacity")][0]


def test_forecast_panel_values_equal_trajectory_csv(tmp_path):
    out = tmp_path / "fig.png"
    stats = render(FigureSpec(figure="3", input_dir=CASES["3"], output_path=out))
    assert set(stats["series"]) == {"omega=0", "omega=0.5", "omega=1"}
    with open(CASES["3"] / "omega=0.5" / "trajectory.csv", newline="") as fh:
        rows = list(csv.DictReader(fh))
    panel = stats["series"]["omega=0.5"]
    assert panel["truth"] == [float(r["truth"]) for r in rows]
    assert panel["mean"] == [float(r["mean"]) for r in rows]
    assert panel["std"] == [float(r["std"]) for r in rows]


def test_backflow_drops_only_nonpositive(tmp_path):
    out = tmp_path / "fig.png"
    stats = render(FigureSpec(figure="s2", input_dir=CASES["s2"], output_path=out))
    assert stats["dropped_nonpositive"] == 20  # the omega=1 zeros
    assert all(v > 0 for v in stats["series"]["points"]["sum"])


def test_deterministic_output_bytes(tmp_path):
    out1 = tmp_path / "a.png"
    out2 = tmp_path / "b.png"
    render(FigureSpec(figure="2a", input_dir=CASES["2a"], output_path=out1))
    render(FigureSpec(figure="2a", input_dir=CASES["2a"], output_path=out2))
    assert out1.read_bytes() == out2.read_bytes()


def test_empty_csv_is_an_error(tmp_path):
    empty_dir = tmp_path / "run"
    empty_dir.mkdir()
    (empty_dir / "sweep_summary.csv").write_text("param,value,metric,mean,std,n\n")
    with pytest.raises(RenderError, match="no data rows"):
        render(FigureSpec(figure="2a", input_dir=empty_dir, output_path=tmp_path / "f.png"))
    assert not (tmp_path / "f.png").exists()


def test_missing_columns_reported_by_name(tmp_path):
    bad_dir = tmp_path / "run"
    bad_dir.mkdir()
    (bad_dir / "sweep_summary.csv").write_text("param,value,metric\nlambda,1,capacity\n")
    with pytest.raises(MissingColumnError) as err:
        render(FigureSpec(figure="2a", input_dir=bad_dir, output_path=tmp_path / "f.png"))
    assert set(err.value.columns) == {"mean", "std", "n"}


def test_unknown_figure_rejected(tmp_path):
    with pytest.raises(RenderError, match="unknown figure"):
        render(FigureSpec(figure="9z", input_dir=DATA, output_path=tmp_path / "f.png"))


def test_cli_renders(tmp_path):
    out = tmp_path / "fig2a.png"
    code = main(["--figure", "2a", "--in", str(CASES["2a"]), "--out", str(out)])
    assert code == 0
    assert out.exists()


def test_cli_reports_errors(tmp_path, capsys):
    code = main(["--figure", "2a", "--in", str(tmp_path), "--out", str(tmp_path / "f.png")])
    assert code == 2
    payload = json.loads(capsys.readouterr().err.strip())
    assert payload["error"] in ("render-error", "missing-columns")
