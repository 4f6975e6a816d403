"""Minimal deterministic SVG writer for phase portraits and wave profiles.

No plotting dependency: a fixed-viewBox canvas with polylines, circles,
markers, dashed lines, and text.  All coordinates are emitted with a fixed
format so identical inputs produce byte-identical files.
"""

from __future__ import annotations

import math

# glyph per equilibrium kind (stroke-only shapes read better over curves)
_GLYPHS = {
    "Saddle": "cross",
    "Center": "circle",
    "Node": "dot",
    "Cusp": "diamond",
    "Degenerate": "diamond",
}

_FMT = "{:.3f}"


def _n(v: float) -> str:
    out = _FMT.format(float(v))
    return "0.000" if out == "-0.000" else out


class SvgFigure:
    """World-coordinate drawing surface mapped onto a fixed 720x540 viewBox."""

    def __init__(self, xlim, ylim, *, size=(720, 540), margin=48.0, title=""):
        self.xlim = (float(xlim[0]), float(xlim[1]))
        self.ylim = (float(ylim[0]), float(ylim[1]))
        if not (self.xlim[1] > self.xlim[0] and self.ylim[1] > self.ylim[0]):
            raise ValueError("degenerate axis limits")
        self.size = size
        self.margin = margin
        self.elements: list[str] = []
        self._frame(title)

    # --- world -> view ----------------------------------------------------
    def _tx(self, x: float) -> float:
        w = self.size[0] - 2 * self.margin
        return self.margin + (x - self.xlim[0]) / (self.xlim[1] - self.xlim[0]) * w

    def _ty(self, y: float) -> float:
        h = self.size[1] - 2 * self.margin
        return self.size[1] - self.margin - (y - self.ylim[0]) / (self.ylim[1] - self.ylim[0]) * h

    # --- primitives -------------------------------------------------------
    def _frame(self, title: str):
        W, H, m = self.size[0], self.size[1], self.margin
        self.elements.append(
            f'<rect x="{_n(m)}" y="{_n(m)}" width="{_n(W - 2 * m)}" '
            f'height="{_n(H - 2 * m)}" fill="none" stroke="#444444" stroke-width="1"/>')
        if title:
            self.elements.append(
                f'<text x="{_n(W / 2)}" y="{_n(m - 14)}" font-size="13" '
                f'text-anchor="middle" fill="#222222">{_escape(title)}</text>')
        if self.xlim[0] < 0.0 < self.xlim[1]:
            x0 = self._tx(0.0)
            self.elements.append(
                f'<line x1="{_n(x0)}" y1="{_n(m)}" x2="{_n(x0)}" y2="{_n(H - m)}" '
                f'stroke="#cccccc" stroke-width="0.8"/>')
        if self.ylim[0] < 0.0 < self.ylim[1]:
            y0 = self._ty(0.0)
            self.elements.append(
                f'<line x1="{_n(m)}" y1="{_n(y0)}" x2="{_n(W - m)}" y2="{_n(y0)}" '
                f'stroke="#cccccc" stroke-width="0.8"/>')
        self._corner_labels()

    def _corner_labels(self):
        W, H, m = self.size[0], self.size[1], self.margin
        labels = [
            (m, H - m + 16, f"{self.xlim[0]:.6g}", "middle"),
            (W - m, H - m + 16, f"{self.xlim[1]:.6g}", "middle"),
            (m - 6, H - m, f"{self.ylim[0]:.6g}", "end"),
            (m - 6, m + 4, f"{self.ylim[1]:.6g}", "end"),
        ]
        for x, y, s, anchor in labels:
            self.elements.append(
                f'<text x="{_n(x)}" y="{_n(y)}" font-size="10" '
                f'text-anchor="{anchor}" fill="#555555">{s}</text>')

    def polyline(self, xs, ys, *, color="#2a6fb0", width=1.2, dash=None):
        pts = " ".join(f"{_n(self._tx(x))},{_n(self._ty(y))}" for x, y in zip(xs, ys))
        dash_attr = f' stroke-dasharray="{dash}"' if dash else ""
        self.elements.append(
            f'<polyline points="{pts}" fill="none" stroke="{color}" '
            f'stroke-width="{_n(width)}"{dash_attr}/>')

    def vline(self, x, *, color="#b03030", dash="6,4", width=1.4):
        """Vertical line clipped to the frame (used for the singular line)."""
        if not (self.xlim[0] <= x <= self.xlim[1]):
            return
        xv = self._tx(float(x))
        self.elements.append(
            f'<line x1="{_n(xv)}" y1="{_n(self.margin)}" x2="{_n(xv)}" '
            f'y2="{_n(self.size[1] - self.margin)}" stroke="{color}" '
            f'stroke-width="{_n(width)}" stroke-dasharray="{dash}"/>')

    def marker(self, x, y, kind, *, size=5.0, color="#111111"):
        """Equilibrium glyph: Saddle = diagonal cross, Center = open circle,
        Node = filled dot, Cusp/Degenerate = open diamond."""
        cx, cy, r = self._tx(float(x)), self._ty(float(y)), float(size)
        shape = _GLYPHS.get(kind, "diamond")
        if shape == "cross":
            self.elements.append(
                f'<path d="M {_n(cx - r)} {_n(cy - r)} L {_n(cx + r)} {_n(cy + r)} '
                f'M {_n(cx - r)} {_n(cy + r)} L {_n(cx + r)} {_n(cy - r)}" '
                f'stroke="{color}" stroke-width="1.6" fill="none"/>')
        elif shape == "circle":
            self.elements.append(
                f'<circle cx="{_n(cx)}" cy="{_n(cy)}" r="{_n(r)}" fill="none" '
                f'stroke="{color}" stroke-width="1.6"/>')
        elif shape == "dot":
            self.elements.append(
                f'<circle cx="{_n(cx)}" cy="{_n(cy)}" r="{_n(0.8 * r)}" '
                f'fill="{color}" stroke="none"/>')
        else:
            self.elements.append(
                f'<path d="M {_n(cx)} {_n(cy - r)} L {_n(cx + r)} {_n(cy)} '
                f'L {_n(cx)} {_n(cy + r)} L {_n(cx - r)} {_n(cy)} Z" '
                f'stroke="{color}" stroke-width="1.6" fill="none"/>')

    def text(self, x, y, s, *, size=11, color="#333333", anchor="start"):
        self.elements.append(
            f'<text x="{_n(self._tx(float(x)))}" y="{_n(self._ty(float(y)))}" '
            f'font-size="{size}" text-anchor="{anchor}" fill="{color}">{_escape(s)}</text>')

    # --- output -----------------------------------------------------------
    def render(self) -> str:
        W, H = self.size
        head = (f'<svg xmlns="http://www.w3.org/2000/svg" '
                f'viewBox="0 0 {W} {H}" width="{W}" height="{H}" '
                f'font-family="Helvetica, Arial, sans-serif">')
        return "\n".join([head, *self.elements, "</svg>"]) + "\n"

    def write(self, path):
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(self.render())


def _escape(s: str) -> str:
    return (str(s).replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;"))


def resample(xs, ys, n=400):
    """Arc-length resampling of a polyline to n points (keeps files small
    and byte-stable regardless of solver step placement)."""
    import numpy as np

    xs = np.asarray(xs, dtype=float)
    ys = np.asarray(ys, dtype=float)
    if len(xs) <= 2 or n >= len(xs):
        return xs, ys
    d = np.hypot(np.diff(xs), np.diff(ys))
    t = np.concatenate([[0.0], np.cumsum(d)])
    if t[-1] <= 0.0:
        return xs[:1], ys[:1]
    u = np.linspace(0.0, t[-1], n)
    return np.interp(u, t, xs), np.interp(u, t, ys)
