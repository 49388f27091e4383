import os

import pytest

from ssgplots import (
    FigureSpec,
    SchemaError,
    render_eop_figure,
    render_runtime_table,
    runtime_pivot,
    series_means,
)
from ssgplots.cli import main

HEADER = "seed,n,m,lambda,rho,policy,phi,eop,wall_time_ms"


def sweep_csv(tmp_path):
    rows = [HEADER]
    eops = {"sse": [0.5, 0.7, 1.0], "optimal": [0.8, 0.9, 1.0],
            "qr": [0.7, 0.8, 1.0]}
    for gi, rho in enumerate((0.0, 0.5, 1.0)):
        for run in range(3):
            for policy, vals in eops.items():
                phi = "100" if policy == "qr" else ""
                jitter = 0.01 * run if vals[gi] < 1 else 0.0
                rows.append(f"{run},50,10,100,{rho},{policy},{phi},"
                            f"{vals[gi] + jitter},{5.0 + run}")
    path = tmp_path / "sweep.csv"
    path.write_text("\n".join(rows) + "\n")
    return str(path)


def test_eop_figure_series_and_ordering(tmp_path):
    csv = sweep_csv(tmp_path)
    out = str(tmp_path / "fig.png")
    render_eop_figure(FigureSpec(csv, "rho", out))
    assert os.path.exists(out)
    import pandas as pd
    groups = series_means(pd.read_csv(csv), "rho")
    assert set(groups) == {"SSE", "Optimal", "QR (φ=100)"}
    for rho in (0.0, 0.5, 1.0):
        assert groups["Optimal"]["mean"][rho] >= groups["SSE"]["mean"][rho]


def test_single_policy_single_series(tmp_path):
    path = tmp_path / "one.csv"
    path.write_text(HEADER + "\n0,10,2,5,0.5,sse,,0.9,1.0\n")
    out = str(tmp_path / "one.png")
    render_eop_figure(FigureSpec(str(path), "rho", out))
    assert os.path.exists(out)


def test_empty_body_errors_without_output(tmp_path):
    path = tmp_path / "empty.csv"
    path.write_text(HEADER + "\n")
    out = str(tmp_path / "never.png")
    with pytest.raises(SchemaError):
        render_eop_figure(FigureSpec(str(path), "rho", out))
    assert not os.path.exists(out)


def test_schema_mismatch_names_columns(tmp_path):
    path = tmp_path / "bad.csv"
    path.write_text("a,b\n1,2\n")
    with pytest.raises(SchemaError, match="missing columns"):
        render_eop_figure(FigureSpec(str(path), "rho", str(tmp_path / "x.png")))


def test_error_marker_rows_are_dropped(tmp_path):
    path = tmp_path / "err.csv"
    path.write_text(HEADER + "\n"
                    "0,10,2,5,0.5,sse,,0.9,1.0\n"
                    "0,10,2,5,0.5,optimal!error,,,1.0\n")
    import pandas as pd
    groups = series_means(pd.read_csv(path), "rho")
    assert set(groups) == {"SSE"}


def test_runtime_pivot_2x2(tmp_path):
    path = tmp_path / "rt.csv"
    path.write_text(HEADER + "\n"
                    "0,50,10,100,0.5,optimal,,0.9,10.0\n"
                    "0,100,20,100,0.5,optimal,,0.9,20.0\n"
                    "0,50,10,1000,0.5,optimal,,0.9,30.0\n"
                    "0,100,20,1000,0.5,optimal,,0.9,40.0\n")
    tables = runtime_pivot(str(path))
    t = tables["optimal"]
    assert list(t.index) == [100, 1000]
    assert list(t.columns) == [50, 100]
    assert t.loc[1000, 100] == 40.0


def test_runtime_table_single_cell_and_text(tmp_path):
    path = tmp_path / "cell.csv"
    path.write_text(HEADER + "\n0,50,10,100,0.5,sse,,0.9,12.5\n")
    text = render_runtime_table(str(path))
    assert "12.5" in text
    assert "sse" in text


def test_runtime_missing_column_errors(tmp_path):
    path = tmp_path / "nocol.csv"
    path.write_text("seed,n,m,lambda,rho,policy,phi,eop\n0,5,1,2,0.5,sse,,0.9\n")
    with pytest.raises(SchemaError):
        render_runtime_table(str(path))


def test_cli_end_to_end(tmp_path):
    csv = sweep_csv(tmp_path)
    out = str(tmp_path / "cli.png")
    assert main(["eop", "--csv", csv, "--x", "rho", "--out", out]) == 0
    assert os.path.exists(out)
    assert main(["runtime", "--csv", csv]) == 0
    assert main(["eop", "--csv", str(tmp_path / "nope.csv"), "--x", "rho",
                 "--out", out]) == 2
