"""Minimal self-contained SVG emitters: line charts and raster heatmaps.

Plots are presentation-only; nothing downstream parses them.  The
heatmap raster is a hand-rolled PNG (zlib, no ancillary chunks) embedded
as a data URI, so the files have no external references and identical
inputs yield identical bytes.
"""

from __future__ import annotations

import base64
import math
import struct
import zlib

__all__ = ["line_chart_svg", "heatmap_svg"]

_W, _H = 640, 440
_ML, _MR, _MT, _MB = 70, 64, 36, 52
_COLORS = ("#c23b22", "#2a6f97", "#3a7d44", "#8e5fa2")

# Compact viridis-like ramp, dark blue to yellow.
_RAMP = (
    (68, 1, 84), (71, 44, 122), (59, 81, 139), (44, 113, 142),
    (33, 144, 141), (39, 173, 129), (92, 200, 99), (170, 220, 50), (253, 231, 37),
)


def _color(v: float) -> tuple[int, int, int]:
    v = min(max(v, 0.0), 1.0)
    x = v * (len(_RAMP) - 1)
    i = min(int(x), len(_RAMP) - 2)
    f = x - i
    a, b = _RAMP[i], _RAMP[i + 1]
    return tuple(round(a[k] + f * (b[k] - a[k])) for k in range(3))


def _png_rgb(rows: list[list[tuple[int, int, int]]]) -> bytes:
    height = len(rows)
    width = len(rows[0])
    raw = bytearray()
    for row in rows:
        raw.append(0)  # no per-row filter
        for r, g, b in row:
            raw += bytes((r, g, b))

    def chunk(tag: bytes, payload: bytes) -> bytes:
        return (struct.pack(">I", len(payload)) + tag + payload
                + struct.pack(">I", zlib.crc32(tag + payload) & 0xFFFFFFFF))

    ihdr = struct.pack(">IIBBBBB", width, height, 8, 2, 0, 0, 0)
    return (b"\x89PNG\r\n\x1a\n" + chunk(b"IHDR", ihdr)
            + chunk(b"IDAT", zlib.compress(bytes(raw), 9)) + chunk(b"IEND", b""))


def _fmt(v: float) -> str:
    if v == 0:
        return "0"
    if abs(v) >= 1e4 or abs(v) < 1e-3:
        return f"{v:.1e}"
    return f"{v:.4g}"


def _lin_ticks(lo: float, hi: float, n: int = 5) -> list[float]:
    if hi == lo:
        return [lo]
    return [lo + (hi - lo) * i / (n - 1) for i in range(n)]


def _log_ticks(lo: float, hi: float) -> list[float]:
    ticks = []
    d = math.ceil(math.log10(lo) - 1e-9)
    while 10.0 ** d <= hi * (1 + 1e-9):
        if 10.0 ** d >= lo * (1 - 1e-9):
            ticks.append(10.0 ** d)
        d += 1
    return ticks or [lo, hi]


class _Frame:
    """Maps data coordinates onto the plot rectangle."""

    def __init__(self, x_lo, x_hi, y_lo, y_hi, log_x=False):
        self.log_x = log_x
        self.x_lo = math.log10(x_lo) if log_x else x_lo
        self.x_hi = math.log10(x_hi) if log_x else x_hi
        if self.x_hi == self.x_lo:
            self.x_hi += 1.0
        pad = (y_hi - y_lo) * 0.05 or max(abs(y_hi), 1.0) * 0.05
        self.y_lo, self.y_hi = y_lo - pad, y_hi + pad

    def x(self, v: float) -> float:
        v = math.log10(v) if self.log_x else v
        return _ML + (v - self.x_lo) / (self.x_hi - self.x_lo) * (_W - _ML - _MR)

    def y(self, v: float) -> float:
        return _H - _MB - (v - self.y_lo) / (self.y_hi - self.y_lo) * (_H - _MT - _MB)


def _axes(frame: _Frame, x_ticks, y_ticks, title, x_label, y_label) -> list[str]:
    left, right = _ML, _W - _MR
    top, bottom = _MT, _H - _MB
    parts = [
        f'<rect x="{left}" y="{top}" width="{right - left}" height="{bottom - top}" '
        'fill="none" stroke="#333" stroke-width="1"/>',
        f'<text x="{(left + right) / 2:.1f}" y="{_MT - 14}" text-anchor="middle" '
        f'font-family="sans-serif" font-size="15">{title}</text>',
        f'<text x="{(left + right) / 2:.1f}" y="{_H - 12}" text-anchor="middle" '
        f'font-family="sans-serif" font-size="13">{x_label}</text>',
        f'<text x="16" y="{(top + bottom) / 2:.1f}" text-anchor="middle" '
        f'font-family="sans-serif" font-size="13" '
        f'transform="rotate(-90 16 {(top + bottom) / 2:.1f})">{y_label}</text>',
    ]
    for t in x_ticks:
        px = frame.x(t)
        parts.append(f'<line x1="{px:.1f}" y1="{bottom}" x2="{px:.1f}" y2="{bottom + 5}" '
                     'stroke="#333" stroke-width="1"/>')
        parts.append(f'<text x="{px:.1f}" y="{bottom + 18}" text-anchor="middle" '
                     f'font-family="sans-serif" font-size="11">{_fmt(t)}</text>')
    for t in y_ticks:
        py = frame.y(t)
        parts.append(f'<line x1="{left - 5}" y1="{py:.1f}" x2="{left}" y2="{py:.1f}" '
                     'stroke="#333" stroke-width="1"/>')
        parts.append(f'<text x="{left - 8}" y="{py + 4:.1f}" text-anchor="end" '
                     f'font-family="sans-serif" font-size="11">{_fmt(t)}</text>')
    return parts


def _document(parts: list[str]) -> str:
    return (f'<svg xmlns="http://www.w3.org/2000/svg" width="{_W}" height="{_H}" '
            f'viewBox="0 0 {_W} {_H}">\n<rect width="{_W}" height="{_H}" fill="white"/>\n'
            + "\n".join(parts) + "\n</svg>\n")


def line_chart_svg(path, x, series, labels, title, x_label, y_label, log_x=False) -> None:
    """Polyline chart of one or more series over a shared x axis."""
    x = list(x)
    lo = min(v for s in series for v in s)
    hi = max(v for s in series for v in s)
    frame = _Frame(min(x), max(x), min(lo, 0.0), max(hi, 1.0), log_x=log_x)
    x_ticks = _log_ticks(min(x), max(x)) if log_x else _lin_ticks(min(x), max(x))
    parts = _axes(frame, x_ticks, _lin_ticks(frame.y_lo, frame.y_hi), title, x_label, y_label)
    dashes = ("none", "6 4", "2 3", "8 3")
    for i, (s, lab) in enumerate(zip(series, labels)):
        pts = " ".join(f"{frame.x(xv):.2f},{frame.y(yv):.2f}" for xv, yv in zip(x, s))
        parts.append(f'<polyline points="{pts}" fill="none" stroke="{_COLORS[i % 4]}" '
                     f'stroke-width="1.6" stroke-dasharray="{dashes[i % 4]}"/>')
        ly = _MT + 16 + 16 * i
        parts.append(f'<line x1="{_W - _MR - 120}" y1="{ly}" x2="{_W - _MR - 95}" y2="{ly}" '
                     f'stroke="{_COLORS[i % 4]}" stroke-width="1.6" '
                     f'stroke-dasharray="{dashes[i % 4]}"/>')
        parts.append(f'<text x="{_W - _MR - 90}" y="{ly + 4}" font-family="sans-serif" '
                     f'font-size="11">{lab}</text>')
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(_document(parts))


def heatmap_svg(path, x, y, grid, title, x_label, y_label, log_y=False) -> None:
    """Heatmap of grid[i][j] over (y[i], x[j]), rasterized into an embedded
    PNG; values are colored over the observed range."""
    flat = [v for row in grid for v in row]
    lo, hi = min(flat), max(flat)
    span = (hi - lo) or 1.0
    rows = [[_color((v - lo) / span) for v in row] for row in reversed(list(grid))]
    png = base64.b64encode(_png_rgb(rows)).decode("ascii")

    frame = _Frame(min(x), max(x), min(y), max(y), log_x=False)
    if log_y:
        # y axis drawn with decade ticks mapped by index position
        y_ticks = _log_ticks(min(y), max(y))
    else:
        y_ticks = _lin_ticks(min(y), max(y))
    left, right = _ML, _W - _MR
    top, bottom = _MT, _H - _MB
    parts = [
        f'<image x="{left}" y="{top}" width="{right - left}" height="{bottom - top}" '
        'preserveAspectRatio="none" image-rendering="pixelated" '
        f'href="data:image/png;base64,{png}"/>',
    ]
    if log_y:
        lo10, hi10 = math.log10(min(y)), math.log10(max(y))
        def ypix(v):
            return bottom - (math.log10(v) - lo10) / (hi10 - lo10 or 1.0) * (bottom - top)
    else:
        def ypix(v):
            return bottom - (v - min(y)) / ((max(y) - min(y)) or 1.0) * (bottom - top)
    parts += _axes(frame, _lin_ticks(min(x), max(x)), [], title, x_label, y_label)
    for t in y_ticks:
        py = ypix(t)
        parts.append(f'<line x1="{left - 5}" y1="{py:.1f}" x2="{left}" y2="{py:.1f}" '
                     'stroke="#333" stroke-width="1"/>')
        parts.append(f'<text x="{left - 8}" y="{py + 4:.1f}" text-anchor="end" '
                     f'font-family="sans-serif" font-size="11">{_fmt(t)}</text>')
    # color scale legend
    ramp = [[_color(1.0 - i / 99.0)] for i in range(100)]
    legend = base64.b64encode(_png_rgb(ramp)).decode("ascii")
    parts.append(f'<image x="{right + 4}" y="{top}" width="10" height="{bottom - top}" '
                 f'preserveAspectRatio="none" href="data:image/png;base64,{legend}"/>')
    parts.append(f'<text x="{right + 16}" y="{top + 8}" font-family="sans-serif" '
                 f'font-size="10">{_fmt(hi)}</text>')
    parts.append(f'<text x="{right + 16}" y="{bottom}" font-family="sans-serif" '
                 f'font-size="10">{_fmt(lo)}</text>')
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(_document(parts))
