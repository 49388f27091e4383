"""Render experiment CSVs into line charts and runtime tables.

Consumes the fixed result schema
    seed,n,m,lambda,rho,policy,phi,eop,wall_time_ms
produced by the experiment harness. Rendering is read-only.
"""

from __future__ import annotations

from dataclasses import dataclass

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import pandas as pd

SCHEMA = ["seed", "n", "m", "lambda", "rho", "policy", "phi", "eop", "wall_time_ms"]

_LABELS = {"sse": "SSE", "optimal": "Optimal"}


class SchemaError(ValueError):
    """The CSV does not match the experiment result schema."""


@dataclass(frozen=True)
class FigureSpec:
    csv_path: str
    x: str                      # "rho" or "n"
    out_path: str
    title: str = None
    with_stderr: bool = False


def _load(csv_path, required=SCHEMA):
    try:
        df = pd.read_csv(csv_path)
    except pd.errors.EmptyDataError as exc:
        raise SchemaError(f"{csv_path}: empty file") from exc
    missing = [c for c in required if c not in df.columns]
    if missing:
        raise SchemaError(
            f"{csv_path}: missing columns {missing}; found {list(df.columns)}")
    if df.empty:
        raise SchemaError(f"{csv_path}: no data rows")
    return df


def _series_label(policy, phi):
    if policy in _LABELS:
        return _LABELS[policy]
    if policy == "qr":
        return f"QR (φ={phi:g})"
    return policy if pd.isna(phi) else f"{policy} ({phi:g})"


def series_means(df, x):
    """Mean eop per x value for each (policy, phi) series; error rows dropped."""
    if x not in df.columns:
        raise SchemaError(f"x-axis column {x!r} not in CSV")
    ok = df[~df["policy"].str.endswith("!error") & df["eop"].notna()].copy()
    if ok.empty:
        raise SchemaError("no successful rows to plot")
    ok["phi"] = pd.to_numeric(ok["phi"], errors="coerce")
    grouped = {}
    for (policy, phi), sub in ok.groupby(["policy", "phi"], dropna=False):
        agg = sub.groupby(x)["eop"].agg(["mean", "sem"])
        grouped[_series_label(policy, phi)] = agg
    return grouped


def render_eop_figure(spec: FigureSpec):
    """One mean-eop line per (policy, phi) series; writes spec.out_path."""
    df = _load(spec.csv_path)
    groups = series_means(df, spec.x)
    fig, ax = plt.subplots(figsize=(5, 3.5))
    for label in sorted(groups):
        agg = groups[label]
        ax.plot(agg.index, agg["mean"], marker="o", markersize=3, label=label)
        if spec.with_stderr:
            ax.fill_between(agg.index, agg["mean"] - agg["sem"],
                            agg["mean"] + agg["sem"], alpha=0.2)
    ax.set_xlabel("ρ" if spec.x == "rho" else spec.x)
    ax.set_ylabel("EoP")
    ax.set_ylim(0.4, 1.0)
    if spec.title:
        ax.set_title(spec.title)
    ax.legend()
    fig.tight_layout()
    fig.savefig(spec.out_path, dpi=150)
    plt.close(fig)
    return spec.out_path


def runtime_pivot(csv_path):
    """Mean wall_time_ms by (lambda, n) per policy, lambda rows ascending."""
    df = _load(csv_path)
    ok = df[~df["policy"].str.endswith("!error")]
    if ok.empty:
        raise SchemaError("no successful rows to pivot")
    tables = {}
    for policy, sub in ok.groupby("policy"):
        tables[policy] = sub.pivot_table(index="lambda", columns="n",
                                         values="wall_time_ms",
                                         aggfunc="mean").sort_index()
    return tables


def render_runtime_table(csv_path, out_path=None):
    """Text rendering of the runtime grid; optionally written to out_path."""
    tables = runtime_pivot(csv_path)
    chunks = []
    for policy in sorted(tables):
        chunks.append(f"{policy} (mean wall time, ms)")
        chunks.append(tables[policy].to_string(float_format=lambda v: f"{v:.1f}"))
        chunks.append("")
    text = "\n".join(chunks)
    if out_path:
        with open(out_path, "w") as f:
            f.write(text + "\n")
    return text
