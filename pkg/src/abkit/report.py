"""Result rows and their CSV / JSON / SVG renderings."""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field

BASE_COLUMNS = ("quantity", "value", "units", "error_estimate")


@dataclass
class Row:
    quantity: str
    value: float
    units: str = ""
    error_estimate: float = 0.0
    extra: dict = field(default_factory=dict)

    def as_dict(self):
        d = {"quantity": self.quantity, "value": self.value, "units": self.units, "error_estimate": self.error_estimate}
        d.update(self.extra)
        return d


def format_float(x):
    """Shortest round-trip text for a float; nan/inf spelled as Python does."""
    if isinstance(x, bool):
        return str(x).lower()
    if isinstance(x, int):
        return str(x)
    if isinstance(x, float):
        return repr(x)
    return str(x)


def columns(rows):
    extra = []
    for r in rows:
        for k in r.extra:
            if k not in extra:
                extra.append(k)
    return list(BASE_COLUMNS) + extra


def to_csv(rows):
    buf = io.StringIO()
    cols = columns(rows)
    writer = csv.writer(buf, lineterminator="\r\n")
    writer.writerow(cols)
    for r in rows:
        d = r.as_dict()
        writer.writerow([format_float(d.get(c, "")) for c in cols])
    return buf.getvalue()


def _json_value(x):
    if isinstance(x, float) and not math.isfinite(x):
        return repr(x)
    return x


def to_json(rows):
    cols = columns(rows)
    payload = {
        "columns": cols,
        "rows": [{c: _json_value(r.as_dict().get(c)) for c in cols} for r in rows],
    }
    return json.dumps(payload, indent=2, ensure_ascii=False, allow_nan=False) + "\n"


def _from_json_value(x):
    if isinstance(x, str) and x in ("nan", "inf", "-inf"):
        return float(x)
    return x


def rows_from_json(text):
    payload = json.loads(text)
    out = []
    for d in payload["rows"]:
        d = {k: _from_json_value(v) for k, v in d.items()}
        extra = {k: v for k, v in d.items() if k not in BASE_COLUMNS and v is not None}
        out.append(Row(d["quantity"], d["value"], d["units"], d["error_estimate"], extra))
    return out


def rows_from_csv(text):
    reader = csv.DictReader(io.StringIO(text))
    out = []
    for d in reader:
        extra = {}
        for k, v in d.items():
            if k in BASE_COLUMNS or v == "":
                continue
            try:
                extra[k] = float(v)
            except ValueError:
                extra[k] = v
        value = d["value"]
        try:
            value = float(value)
        except ValueError:
            pass
        out.append(Row(d["quantity"], value, d["units"], float(d["error_estimate"]), extra))
    return out


def render(rows, fmt):
    if not rows:
        raise ValueError("nothing to emit")
    if fmt == "csv":
        return to_csv(rows)
    if fmt == "json":
        return to_json(rows)
    raise ValueError(f"unknown format {fmt!r}")


def emit(rows, fmt, path=None):
    """Write rows to ``path`` (or return the text when path is None).  OSError propagates."""
    text = render(rows, fmt)
    if path is None:
        return text
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)
    return text


def line_chart(path, xs, ys, xlabel, ylabel, logx=False, title=None):
    """Single-series SVG line chart with no timestamps or random ids."""
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    with matplotlib.rc_context({"svg.hashsalt": "abkit", "svg.fonttype": "path", "font.size": 9}):
        fig, ax = plt.subplots(figsize=(5.0, 3.4))
        ax.plot(xs, ys, marker="o", markersize=3, linewidth=1.2, color="black")
        if logx:
            ax.set_xscale("log")
        ax.set_xlabel(xlabel)
        ax.set_ylabel(ylabel)
        if title:
            ax.set_title(title)
        ax.grid(True, linewidth=0.4, alpha=0.5)
        fig.tight_layout()
        fig.savefig(path, format="svg", metadata={"Date": None})
        plt.close(fig)
