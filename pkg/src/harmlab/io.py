"""Artifact writers: JSON reports, CSV tables, field tables and SVG figures.

Every artifact carries the resolved run configuration.  JSON uses sorted keys
and rationals as ``"num/den"`` strings; SVG numbers use 6 significant digits.
"""

from __future__ import annotations

import csv
import io
import json
import os
import tempfile
from fractions import Fraction
from pathlib import Path
from typing import Any, Iterable, Sequence

from .graph import FiniteGraph
from .harmonic import ScalarField
from .rational import format_rational, parse_rational


def _default(o: Any):
    if isinstance(o, Fraction):
        return format_rational(o)
    if isinstance(o, (set, frozenset)):
        return sorted(o)
    if hasattr(o, "as_dict"):
        return o.as_dict()
    if hasattr(o, "item"):  # numpy scalars
        return o.item()
    raise TypeError(f"cannot serialise {type(o).__name__}")


def dumps(obj: Any) -> str:
    return json.dumps(obj, sort_keys=True, indent=2, default=_default, allow_nan=True) + "\n"


def atomic_write(path: str | os.PathLike, data: str) -> Path:
    """Write via a temporary file in the same directory, then rename."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(prefix=f".{path.name}.", dir=path.parent)
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(data)
        os.replace(tmp, path)
    except BaseException:
        try:
            os.unlink(tmp)
        except FileNotFoundError:
            pass
        raise
    return path


def write_json(path, obj: Any, config: dict | None = None) -> Path:
    doc = dict(obj) if isinstance(obj, dict) else {"result": obj}
    if config is not None:
        doc["config"] = config
    return atomic_write(path, dumps(doc))


def csv_text(rows: Sequence[dict], columns: Sequence[str], config: dict | None = None) -> str:
    buf = io.StringIO()
    if config is not None:
        buf.write("# config: " + json.dumps(config, sort_keys=True, default=_default) + "\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for r in rows:
        w.writerow([_cell(r.get(c)) for c in columns])
    return buf.getvalue()


def _cell(x) -> str:
    if x is None:
        return ""
    if isinstance(x, Fraction):
        return format_rational(x)
    if isinstance(x, float):
        return repr(x)
    if isinstance(x, bool):
        return "true" if x else "false"
    return str(x)


def write_csv(path, rows: Sequence[dict], columns: Sequence[str], config: dict | None = None) -> Path:
    return atomic_write(path, csv_text(rows, columns, config))


def read_csv_rows(text: str) -> list[dict]:
    lines = [ln for ln in text.splitlines() if not ln.startswith("#")]
    return list(csv.DictReader(lines))


# ---------------------------------------------------------------------------
# field tables

FIELD_COLUMNS = ("vertex", "cell_1", "cell_2", "site", "x", "y", "value")


def field_rows(f: ScalarField) -> list[dict]:
    fg = f.graph
    rows = []
    for v in sorted(f.domain):
        c = fg.cells[v]
        p = fg.positions[v]
        rows.append(
            {
                "vertex": v,
                "cell_1": c[0],
                "cell_2": c[1] if len(c) > 1 else "",
                "site": fg.site_ids[fg.lids[v]] if fg.site_ids else fg.lids[v],
                "x": p[0],
                "y": p[1],
                "value": f[v],
            }
        )
    return rows


def field_to_dict(f: ScalarField) -> dict:
    fg = f.graph
    return {
        "exact": f.exact,
        "values": [
            {
                "cell": list(fg.cells[v]),
                "site": fg.site_ids[fg.lids[v]] if fg.site_ids else fg.lids[v],
                "value": format_rational(f[v]) if f.exact else float(f[v]),
            }
            for v in sorted(f.domain)
        ],
    }


def field_from_dict(fg: FiniteGraph, doc: dict) -> ScalarField:
    """Inverse of :func:`field_to_dict` on ``fg``; entries outside ``fg`` are ignored."""
    exact = bool(doc.get("exact", True))
    lid_of = {sid: i for i, sid in enumerate(fg.site_ids)} if fg.site_ids else {}
    vals = {}
    for e in doc["values"]:
        lid = lid_of.get(e["site"], e["site"]) if lid_of else e["site"]
        v = fg.index.get((tuple(e["cell"]), lid))
        if v is None:
            continue
        vals[v] = parse_rational(e["value"]) if exact else float(e["value"])
    return ScalarField(fg, vals, exact)


# ---------------------------------------------------------------------------
# SVG


def _g(x) -> str:
    return f"{float(x):.6g}"


class _Canvas:
    def __init__(self, points: Iterable, size: float = 480.0, pad: float = 16.0):
        pts = [(float(x), float(y)) for x, y in points]
        xs = [p[0] for p in pts] or [0.0]
        ys = [p[1] for p in pts] or [0.0]
        self.x0, self.y1 = min(xs), max(ys)
        span = max(max(xs) - self.x0, self.y1 - min(ys), 1e-9)
        self.s = (size - 2 * pad) / span
        self.pad = pad
        self.w = _g(2 * pad + (max(xs) - self.x0) * self.s)
        self.h = _g(2 * pad + (self.y1 - min(ys)) * self.s)
        self.items: list[str] = []

    def xy(self, p) -> tuple[str, str]:
        return _g(self.pad + (float(p[0]) - self.x0) * self.s), _g(self.pad + (self.y1 - float(p[1])) * self.s)

    def line(self, a, b, style: str) -> None:
        (x1, y1), (x2, y2) = self.xy(a), self.xy(b)
        self.items.append(f'<line x1="{x1}" y1="{y1}" x2="{x2}" y2="{y2}" {style}/>')

    def polygon(self, pts, style: str) -> None:
        coords = " ".join(",".join(self.xy(p)) for p in pts)
        self.items.append(f'<polygon points="{coords}" {style}/>')

    def circle(self, p, r: float, style: str) -> None:
        x, y = self.xy(p)
        self.items.append(f'<circle cx="{x}" cy="{y}" r="{_g(r)}" {style}/>')

    def cross(self, p, r: float, style: str) -> None:
        x, y = (float(t) for t in self.xy(p))
        self.items.append(f'<line x1="{_g(x - r)}" y1="{_g(y - r)}" x2="{_g(x + r)}" y2="{_g(y + r)}" {style}/>')
        self.items.append(f'<line x1="{_g(x - r)}" y1="{_g(y + r)}" x2="{_g(x + r)}" y2="{_g(y - r)}" {style}/>')

    def render(self, title: str, config: dict | None) -> str:
        head = f'<svg xmlns="http://www.w3.org/2000/svg" width="{self.w}" height="{self.h}">'
        desc = ""
        if config is not None:
            desc = "<desc>" + _xml_escape(json.dumps(config, sort_keys=True, default=_default)) + "</desc>"
        return "\n".join([head, f"<title>{_xml_escape(title)}</title>", desc, *self.items, "</svg>"]) + "\n"


def _xml_escape(s: str) -> str:
    return s.replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;")


def lemma_svg(inst, config: dict | None = None, title: str = "level-set instance") -> str:
    """Contour in black, zeros as crosses, P filled and M hollow."""
    fg = inst.graph
    walk = inst.contour.walk
    keep = set(walk) | set(inst.contour.enclosed)
    cv = _Canvas([fg.positions[v] for v in keep])
    for u, v, _c in fg.edges:
        if u in keep and v in keep:
            cv.line(fg.positions[u], fg.positions[v], 'stroke="#bbbbbb" stroke-width="1"')
    cv.polygon([fg.positions[v] for v in walk], 'fill="none" stroke="black" stroke-width="2.5"')
    for z, w in sorted(inst.witnesses.items()):
        for a, b in zip(w.beta, w.beta[1:]):
            cv.line(fg.positions[a], fg.positions[b], 'stroke="#2a7" stroke-width="1.5" stroke-dasharray="3,2"')
    r = 4.0
    for v in sorted(inst.P):
        cv.circle(fg.positions[v], r, 'fill="#c22" stroke="#c22"')
    for v in sorted(inst.M):
        cv.circle(fg.positions[v], r, 'fill="white" stroke="#22c" stroke-width="1.5"')
    for v in sorted(inst.Z):
        cv.cross(fg.positions[v], r, 'stroke="black" stroke-width="1.5"')
    return cv.render(title, config)


def contour_svg(fg: FiniteGraph, contour, config: dict | None = None, title: str = "contour") -> str:
    cv = _Canvas(fg.positions)
    for u, v, _c in fg.edges:
        cv.line(fg.positions[u], fg.positions[v], 'stroke="#cccccc" stroke-width="1"')
    cv.polygon([fg.positions[v] for v in contour.walk], 'fill="none" stroke="black" stroke-width="2.5"')
    for v in sorted(contour.enclosed):
        cv.circle(fg.positions[v], 2.5, 'fill="#555"')
    return cv.render(title, config)


def field_svg(f: ScalarField, config: dict | None = None, title: str = "field signs", threshold=0) -> str:
    """Vertices coloured by sign class of ``f`` (positive, negative, small)."""
    fg = f.graph
    cv = _Canvas([fg.positions[v] for v in f.domain])
    for v in sorted(f.domain):
        x = f[v]
        if x > threshold:
            cv.circle(fg.positions[v], 2.5, 'fill="#c22"')
        elif x < -threshold:
            cv.circle(fg.positions[v], 2.5, 'fill="#22c"')
        else:
            cv.cross(fg.positions[v], 2.5, 'stroke="black"')
    return cv.render(title, config)
