"""Serialization of result tables to CSV, JSON and a bare-bones SVG.

CSV layout: ``# key=<json>`` metadata lines, one header row, then data rows.
Floats are written with 17 significant digits so they read back exactly.
JSON carries the same three parts as an object.
"""
from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field

import numpy as np

from .classicality import FigureTable
from .lindblad import Trajectory


@dataclass
class Table:
    columns: list[str]
    rows: list[list]
    metadata: dict = field(default_factory=dict)

    def column(self, name: str) -> np.ndarray:
        i = self.columns.index(name)
        return np.array([r[i] for r in self.rows])


def _fmt(x) -> str:
    if isinstance(x, (bool, np.bool_)):
        return str(bool(x)).lower()
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, (float, np.floating)):
        return format(float(x) + 0.0, ".17g")
    return str(x)


def _parse(s: str):
    for cast in (int, float):
        try:
            return cast(s)
        except ValueError:
            pass
    return s


def _jsonable(x):
    if isinstance(x, dict):
        return {k: _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple, np.ndarray)):
        return [_jsonable(v) for v in x]
    if isinstance(x, np.integer):
        return int(x)
    if isinstance(x, np.floating):
        return float(x)
    return x


def to_csv(table: Table) -> str:
    buf = io.StringIO()
    for k, v in table.metadata.items():
        buf.write(f"# {k}={json.dumps(_jsonable(v), sort_keys=True)}\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(table.columns)
    for row in table.rows:
        w.writerow([_fmt(x) for x in row])
    return buf.getvalue()


def from_csv(text: str) -> Table:
    meta = {}
    lines = text.splitlines()
    body = []
    for line in lines:
        if line.startswith("#"):
            key, _, val = line[1:].strip().partition("=")
            meta[key] = json.loads(val)
        else:
            body.append(line)
    reader = csv.reader(body)
    columns = next(reader)
    rows = [[_parse(x) for x in r] for r in reader if r]
    return Table(columns, rows, meta)


def to_json(table: Table) -> str:
    doc = {
        "metadata": _jsonable(table.metadata),
        "columns": table.columns,
        "rows": [[_jsonable(x) for x in r] for r in table.rows],
    }
    return json.dumps(doc, indent=1, sort_keys=True) + "\n"


def from_json(text: str) -> Table:
    doc = json.loads(text)
    return Table(doc["columns"], doc["rows"], doc["metadata"])


def figure_to_table(fig: FigureTable, metadata: dict | None = None) -> Table:
    meta = {**(metadata or {}), "table": {"kind": "figure", "axes": list(fig.axes),
                                          "value": fig.value_name, **fig.metadata}}
    return Table(fig.columns, [list(r) for r in fig.rows()], meta)


def table_to_figure(table: Table) -> FigureTable:
    info = dict(table.metadata["table"])
    names = info.pop("axes")
    value_name = info.pop("value")
    info.pop("kind")
    axes = {}
    for n in names:
        seen = dict.fromkeys(table.column(n).tolist())
        axes[n] = np.array(list(seen))
    shape = tuple(len(a) for a in axes.values())
    values = table.column(value_name).astype(float).reshape(shape)
    return FigureTable(axes, values, value_name, info)


def trajectory_to_table(traj: Trajectory, metadata: dict | None = None, extra: dict | None = None) -> Table:
    """One row per time: t, optional derived columns, then Re/Im of every entry."""
    N = traj.states.shape[1]
    extra = extra or {}
    idx = [(i, j) for i in range(N) for j in range(N)]
    columns = ["t", *extra, *[f"re_{i}_{j}" for i, j in idx], *[f"im_{i}_{j}" for i, j in idx]]
    rows = []
    for n, (t, rho) in enumerate(zip(traj.times, traj.states)):
        flat = rho.reshape(-1)
        rows.append([t, *[v[n] for v in extra.values()], *flat.real, *flat.imag])
    meta = {**(metadata or {}), "table": {"kind": "trajectory", "dim": N}}
    return Table(columns, rows, meta)


def table_to_trajectory(table: Table) -> Trajectory:
    N = table.metadata["table"]["dim"]
    idx = [(i, j) for i in range(N) for j in range(N)]
    re = np.stack([table.column(f"re_{i}_{j}") for i, j in idx], axis=1).astype(float)
    im = np.stack([table.column(f"im_{i}_{j}") for i, j in idx], axis=1).astype(float)
    states = (re + 1j * im).reshape(-1, N, N)
    return Trajectory(table.column("t").astype(float), states)


# --- SVG ------------------------------------------------------------------

_PALETTE = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"]


def _svg_frame(width, height, title, xlabel, ylabel, body):
    return (
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}" font-family="sans-serif" font-size="12">\n'
        f'<rect width="{width}" height="{height}" fill="white"/>\n'
        f'<text x="{width / 2}" y="18" text-anchor="middle">{title}</text>\n'
        f'<text x="{width / 2}" y="{height - 6}" text-anchor="middle">{xlabel}</text>\n'
        f'<text x="14" y="{height / 2}" text-anchor="middle" '
        f'transform="rotate(-90 14 {height / 2})">{ylabel}</text>\n'
        f"{body}</svg>\n"
    )


def figure1a_svg(fig: FigureTable, width=480, height=360) -> str:
    sig = fig.axes["sigma"]
    vals = fig.values
    x0, x1 = float(sig.min()), float(sig.max())
    y0, y1 = float(vals.min()), float(max(vals.max(), 0.0))
    left, right, top, bottom = 50, width - 80, 30, height - 40

    def px(x):
        return left + (x - x0) / (x1 - x0 or 1) * (right - left)

    def py(y):
        return bottom - (y - y0) / (y1 - y0 or 1) * (bottom - top)

    parts = [
        f'<line x1="{left}" y1="{py(0):.2f}" x2="{right}" y2="{py(0):.2f}" '
        'stroke="black" stroke-dasharray="4 3"/>\n',
        f'<rect x="{left}" y="{top}" width="{right - left}" height="{bottom - top}" '
        'fill="none" stroke="black"/>\n',
    ]
    for n, N in enumerate(fig.axes["N"]):
        pts = " ".join(f"{px(x):.2f},{py(y):.2f}" for x, y in zip(sig, vals[:, n]))
        colour = _PALETTE[n % len(_PALETTE)]
        parts.append(f'<polyline points="{pts}" fill="none" stroke="{colour}" stroke-width="1.5"/>\n')
        parts.append(f'<text x="{right + 8}" y="{top + 16 * (n + 1)}" fill="{colour}">N={int(N)}</text>\n')
    return _svg_frame(width, height, "minimum of W vs sigma", "sigma", "W_min", "".join(parts))


def figure1b_svg(fig: FigureTable, width=480, height=360) -> str:
    sig, ts, vals = fig.axes["sigma"], fig.axes["t"], fig.values
    left, right, top, bottom = 50, width - 20, 30, height - 40
    cw = (right - left) / len(sig)
    ch = (bottom - top) / len(ts)
    scale = float(np.max(np.abs(vals))) or 1.0
    parts = []
    for i in range(len(sig)):
        for j in range(len(ts)):
            v = vals[i, j] / scale
            # blue for negative, white at zero, red for positive
            if v < 0:
                c = (int(255 * (1 + v)), int(255 * (1 + v)), 255)
            else:
                c = (255, int(255 * (1 - v)), int(255 * (1 - v)))
            parts.append(
                f'<rect x="{left + i * cw:.2f}" y="{bottom - (j + 1) * ch:.2f}" '
                f'width="{cw + 0.05:.2f}" height="{ch + 0.05:.2f}" fill="rgb{c}"/>\n'
            )
    N, gamma = fig.metadata["N"], fig.metadata["gamma"]
    s0, s1 = float(sig[0]), float(sig[-1])
    t1 = float(ts[-1]) or 1.0

    def line_pt(s):
        t = (s + 1) * math.log(N + 1) / (4 * gamma * N)
        return left + (s - s0) / (s1 - s0 or 1) * (right - left), bottom - t / t1 * (bottom - top)

    (ax, ay), (bx, by) = line_pt(max(s0, -1.0)), line_pt(s1)
    parts.append(f'<line x1="{ax:.2f}" y1="{ay:.2f}" x2="{bx:.2f}" y2="{by:.2f}" stroke="red" stroke-width="2"/>\n')
    return _svg_frame(width, height, f"min W_t (N={N}, gamma={gamma})", "sigma", "t", "".join(parts))
