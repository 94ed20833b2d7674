"""CSV, SVG and manifest writers. All output is byte-deterministic."""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

# fixed vertical ranges; observables not listed are auto-scaled
FIXED_RANGES = {"W": (-1.0, 1.0)}

LABELS = {
    "W": "W(t)",
    "Fx": "F_x(t)",
    "Fy": "F_y(t)",
    "dp": "Delta p(t)",
    "G2": "G2(t)",
    "S1": "S_1(t)",
    "S2": "S_2(t)",
}


def fmt(x: float) -> str:
    """17 significant digits, so the text round-trips to the same double."""
    return f"{float(x):.16e}"


def csv_text(scaled_t, value, oracle=None) -> str:
    cols = ["scaled_t", "value"]
    rows = [scaled_t, value]
    if oracle is not None:
        cols += ["value_oracle", "abs_diff"]
        rows += [oracle, np.abs(np.asarray(value) - np.asarray(oracle))]
    lines = [",".join(cols)]
    for vals in zip(*rows):
        lines.append(",".join(fmt(v) for v in vals))
    return "\n".join(lines) + "\n"


def write_text(path: Path, text: str):
    # newline="" keeps LF endings on every platform
    with open(path, "w", encoding="ascii", newline="") as fh:
        fh.write(text)


def write_csv(path: Path, scaled_t, value, oracle=None):
    write_text(path, csv_text(scaled_t, value, oracle))


def _nice_range(name, y):
    if name in FIXED_RANGES:
        return FIXED_RANGES[name]
    lo, hi = float(np.min(y)), float(np.max(y))
    span = hi - lo
    if span <= 1e-12 * max(1.0, abs(hi)):
        pad = max(1e-3, 0.05 * abs(hi))
        return lo - pad, hi + pad
    return lo - 0.05 * span, hi + 0.05 * span


def svg_text(name: str, x, y, title: str = "") -> str:
    """Line plot of ``y`` against ``x`` as a self-contained SVG document."""
    width, height = 640, 360
    left, right, top, bottom = 70, 20, 30, 45
    pw, ph = width - left - right, height - top - bottom
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    x0, x1 = float(x[0]), float(x[-1]) if len(x) > 1 else float(x[0]) + 1.0
    y0, y1 = _nice_range(name, y)
    px = left + (x - x0) / (x1 - x0) * pw
    py = top + (y1 - np.clip(y, y0, y1)) / (y1 - y0) * ph
    points = " ".join(f"{a:.2f},{b:.2f}" for a, b in zip(px, py))
    label = LABELS.get(name, name)
    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">',
        f'<rect x="0" y="0" width="{width}" height="{height}" fill="white"/>',
        f'<rect x="{left}" y="{top}" width="{pw}" height="{ph}" fill="none" stroke="black"/>',
    ]
    for k in range(5):
        frac = k / 4
        yv = y0 + frac * (y1 - y0)
        yy = top + (1 - frac) * ph
        xv = x0 + frac * (x1 - x0)
        xx = left + frac * pw
        out.append(f'<line x1="{left - 4}" y1="{yy:.2f}" x2="{left}" y2="{yy:.2f}" stroke="black"/>')
        out.append(
            f'<text x="{left - 6}" y="{yy + 4:.2f}" font-size="11" text-anchor="end">{yv:.4g}</text>'
        )
        out.append(f'<line x1="{xx:.2f}" y1="{top + ph}" x2="{xx:.2f}" y2="{top + ph + 4}" stroke="black"/>')
        out.append(
            f'<text x="{xx:.2f}" y="{top + ph + 17}" font-size="11" text-anchor="middle">{xv:.4g}</text>'
        )
    if y0 < 0 < y1:
        yz = top + y1 / (y1 - y0) * ph
        out.append(
            f'<line x1="{left}" y1="{yz:.2f}" x2="{left + pw}" y2="{yz:.2f}" '
            'stroke="gray" stroke-dasharray="4,3"/>'
        )
    out.append(f'<polyline fill="none" stroke="#1f4e9c" stroke-width="1" points="{points}"/>')
    out.append(
        f'<text x="{left + pw / 2}" y="{height - 8}" font-size="12" text-anchor="middle">lambda t</text>'
    )
    out.append(
        f'<text x="16" y="{top + ph / 2}" font-size="12" text-anchor="middle" '
        f'transform="rotate(-90 16 {top + ph / 2})">{label}</text>'
    )
    if title:
        out.append(f'<text x="{left + pw / 2}" y="18" font-size="13" text-anchor="middle">{title}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def write_svg(path: Path, name: str, x, y, title: str = ""):
    write_text(path, svg_text(name, x, y, title))


def write_json(path: Path, data: dict):
    write_text(path, json.dumps(data, indent=2, sort_keys=True) + "\n")
