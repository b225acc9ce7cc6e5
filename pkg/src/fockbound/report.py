"""Serialization of command reports: JSON, fixed-column CSV and bare SVG plots."""

import csv
import io
import json
import math

from .audit import _jsonable


def to_json(report: dict) -> str:
    return json.dumps(report, indent=2, default=_jsonable) + "\n"


def to_csv(columns, rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([_fmt(row.get(c)) for c in columns])
    return buf.getvalue()


def _fmt(v):
    if isinstance(v, float):
        return repr(v)
    if v is None:
        return ""
    return v


_PALETTE = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd"]


def svg_plot(xs, series: dict, hline=None, title="", xlabel="", ylabel="",
             width=640, height=400) -> str:
    """Polylines for each series, optional dashed horizontal line, labelled axes."""
    margin = 60
    ys_all = [y for ys in series.values() for y in ys if math.isfinite(y)]
    if hline is not None:
        ys_all.append(hline)
    ymin, ymax = min(ys_all + [0.0]), max(ys_all + [0.0])
    if ymax == ymin:
        ymax = ymin + 1.0
    xmin, xmax = min(xs), max(xs)
    if xmax == xmin:
        xmax = xmin + 1.0

    def px(x):
        return margin + (x - xmin) / (xmax - xmin) * (width - 2 * margin)

    def py(y):
        return height - margin - (y - ymin) / (ymax - ymin) * (height - 2 * margin)

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">',
        f'<rect width="{width}" height="{height}" fill="white"/>',
        f'<line x1="{margin}" y1="{height - margin}" x2="{width - margin}" y2="{height - margin}" stroke="black"/>',
        f'<line x1="{margin}" y1="{margin}" x2="{margin}" y2="{height - margin}" stroke="black"/>',
        f'<text x="{width / 2}" y="{margin / 2}" text-anchor="middle" font-size="14">{title}</text>',
        f'<text x="{width / 2}" y="{height - 15}" text-anchor="middle" font-size="12">{xlabel}</text>',
        f'<text x="15" y="{height / 2}" text-anchor="middle" font-size="12" '
        f'transform="rotate(-90 15 {height / 2})">{ylabel}</text>',
        f'<text x="{margin - 5}" y="{py(ymax) + 4:.1f}" text-anchor="end" font-size="10">{ymax:.4g}</text>',
        f'<text x="{margin - 5}" y="{py(ymin) + 4:.1f}" text-anchor="end" font-size="10">{ymin:.4g}</text>',
        f'<text x="{px(xmin):.1f}" y="{height - margin + 15}" text-anchor="middle" font-size="10">{xmin:g}</text>',
        f'<text x="{px(xmax):.1f}" y="{height - margin + 15}" text-anchor="middle" font-size="10">{xmax:g}</text>',
    ]
    if hline is not None:
        out.append(
            f'<line x1="{margin}" y1="{py(hline):.2f}" x2="{width - margin}" y2="{py(hline):.2f}" '
            f'stroke="gray" stroke-dasharray="6,4"><title>bound {hline:.10g}</title></line>'
        )
    for i, (name, ys) in enumerate(series.items()):
        pts = " ".join(f"{px(x):.2f},{py(y):.2f}" for x, y in zip(xs, ys) if math.isfinite(y))
        color = _PALETTE[i % len(_PALETTE)]
        out.append(f'<polyline fill="none" stroke="{color}" stroke-width="1.5" points="{pts}">'
                   f'<title>{name}</title></polyline>')
        out.append(f'<text x="{width - margin}" y="{margin + 14 * (i + 1)}" text-anchor="end" '
                   f'font-size="11" fill="{color}">{name}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
