"""Minimal deterministic SVG figures of complex-plane sets."""

from __future__ import annotations

import math
from typing import List, Tuple

import numpy as np

SIZE = 480
COLORS = {"In": "#2a9d3f", "Out": "#d62828", "Borderline": "#f4a261"}


def _f(x: float) -> str:
    return f"{x:.3f}"


class Figure:
    """Collects complex-plane layers and renders them into one equal-aspect SVG."""

    def __init__(self, title: str = ""):
        self.title = title
        self.layers: List[Tuple[str, np.ndarray, dict]] = []

    def polygon(self, z, stroke="#1d3557", fill="#a8dadc", opacity=0.5, closed=True):
        self.layers.append(("poly", np.asarray(z, dtype=complex).ravel(),
                            {"stroke": stroke, "fill": fill, "opacity": opacity, "closed": closed}))

    def points(self, z, color="#000000", r=3.5, opacity=1.0):
        self.layers.append(("pts", np.asarray(z, dtype=complex).ravel(),
                            {"color": color, "r": r, "opacity": opacity}))

    def _frame(self):
        allz = np.concatenate([z for _, z, _ in self.layers] + [np.zeros(1, dtype=complex)])
        cx = 0.5 * (allz.real.min() + allz.real.max())
        cy = 0.5 * (allz.imag.min() + allz.imag.max())
        half = 0.5 * max(np.ptp(allz.real), np.ptp(allz.imag), 1e-9) * 1.1
        return cx, cy, half

    def render(self) -> str:
        cx, cy, half = self._frame()
        s = SIZE / (2 * half)

        def xy(z):
            return (z.real - cx) * s + SIZE / 2, SIZE / 2 - (z.imag - cy) * s

        out = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{SIZE}" '
               f'viewBox="0 0 {SIZE} {SIZE}">',
               f'<rect width="{SIZE}" height="{SIZE}" fill="#ffffff"/>']
        if self.title:
            out.append(f"<title>{_escape(self.title)}</title>")
        # integer grid lines, thinned when the view is wide
        step = max(1, int(10 ** math.floor(math.log10(max(2 * half, 1)))))
        for k in range(math.ceil((cx - half) / step) * step, math.floor((cx + half) / step) * step + 1, step):
            x, _ = xy(complex(k, cy))
            out.append(f'<line x1="{_f(x)}" y1="0" x2="{_f(x)}" y2="{SIZE}" stroke="#e5e5e5"/>')
        for k in range(math.ceil((cy - half) / step) * step, math.floor((cy + half) / step) * step + 1, step):
            _, y = xy(complex(cx, k))
            out.append(f'<line x1="0" y1="{_f(y)}" x2="{SIZE}" y2="{_f(y)}" stroke="#e5e5e5"/>')
        x0, y0 = xy(0j)
        out.append(f'<line x1="{_f(x0)}" y1="0" x2="{_f(x0)}" y2="{SIZE}" stroke="#888888"/>')
        out.append(f'<line x1="0" y1="{_f(y0)}" x2="{SIZE}" y2="{_f(y0)}" stroke="#888888"/>')
        for kind, z, opt in self.layers:
            if kind == "poly":
                pts = " ".join(f"{_f(a)},{_f(b)}" for a, b in (xy(v) for v in z))
                tag = "polygon" if opt["closed"] and z.size > 2 else "polyline"
                fill = opt["fill"] if tag == "polygon" else "none"
                out.append(f'<{tag} points="{pts}" stroke="{opt["stroke"]}" fill="{fill}" '
                           f'fill-opacity="{opt["opacity"]}" stroke-width="1.5"/>')
            else:
                for v in z:
                    a, b = xy(v)
                    out.append(f'<circle cx="{_f(a)}" cy="{_f(b)}" r="{opt["r"]}" fill="{opt["color"]}" '
                               f'fill-opacity="{opt["opacity"]}"/>')
        out.append("</svg>")
        return "\n".join(out) + "\n"


def _escape(text: str) -> str:
    return text.replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;")


def range_figure(R, eigenvalues, title="") -> str:
    fig = Figure(title)
    fig.polygon(R.outer_polygon, stroke="#bbbbbb", fill="none", opacity=0.0)
    fig.polygon(R.inner_polygon)
    fig.points(eigenvalues, color="#e63946")
    return fig.render()


def product_figure(cloud, verdicts, title="") -> str:
    """``verdicts`` is a list of ``(lambda, verdict string)``."""
    fig = Figure(title)
    fig.points(cloud, color="#457b9d", r=1.2, opacity=0.25)
    for lam, v in verdicts:
        fig.points([lam], color=COLORS.get(v, "#000000"), r=4.0)
    return fig.render()
