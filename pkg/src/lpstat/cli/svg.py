"""A small SVG writer: axes, polylines, step curves and heatmaps."""

from __future__ import annotations

from xml.sax.saxutils import escape

import numpy as np

W, H = 480, 360
LEFT, RIGHT, TOP, BOTTOM = 60, 20, 30, 45
PALETTE = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"]


def _fmt(v):
    return f"{v:.2f}"


def _ticks(lo, hi, k=5):
    if hi <= lo:
        return [lo]
    return list(np.linspace(lo, hi, k))


class _Frame:
    def __init__(self, xlim, ylim):
        self.x0, self.x1 = xlim
        self.y0, self.y1 = ylim
        if self.x1 <= self.x0:
            self.x1 = self.x0 + 1.0
        if self.y1 <= self.y0:
            self.y0, self.y1 = self.y0 - 0.5, self.y1 + 0.5

    def px(self, x):
        return LEFT + (np.asarray(x) - self.x0) / (self.x1 - self.x0) * (W - LEFT - RIGHT)

    def py(self, y):
        return H - BOTTOM - (np.asarray(y) - self.y0) / (self.y1 - self.y0) * (H - TOP - BOTTOM)


def _axes(fr, title, xlabel, ylabel):
    out = [
        f'<rect x="{LEFT}" y="{TOP}" width="{W - LEFT - RIGHT}" height="{H - TOP - BOTTOM}" '
        'fill="none" stroke="#000"/>',
        f'<text x="{W / 2}" y="18" text-anchor="middle" font-size="13">{escape(title)}</text>',
        f'<text x="{W / 2}" y="{H - 8}" text-anchor="middle" font-size="11">{escape(xlabel)}</text>',
        f'<text x="14" y="{H / 2}" text-anchor="middle" font-size="11" '
        f'transform="rotate(-90 14 {H / 2})">{escape(ylabel)}</text>',
    ]
    for t in _ticks(fr.x0, fr.x1):
        x = _fmt(fr.px(t))
        out.append(f'<line x1="{x}" y1="{H - BOTTOM}" x2="{x}" y2="{H - BOTTOM + 4}" stroke="#000"/>')
        out.append(f'<text x="{x}" y="{H - BOTTOM + 16}" text-anchor="middle" font-size="10">{t:.3g}</text>')
    for t in _ticks(fr.y0, fr.y1):
        y = _fmt(fr.py(t))
        out.append(f'<line x1="{LEFT - 4}" y1="{y}" x2="{LEFT}" y2="{y}" stroke="#000"/>')
        out.append(f'<text x="{LEFT - 6}" y="{y}" text-anchor="end" font-size="10" dy="3">{t:.3g}</text>')
    return out


def _doc(body):
    return (
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" viewBox="0 0 {W} {H}">\n'
        '<rect width="100%" height="100%" fill="#fff"/>\n' + "\n".join(body) + "\n</svg>\n"
    )


def line_plot(series, title="", xlabel="", ylabel="", step=False):
    """``series``: list of (label, x, y). Step curves hold y[i] on [x[i], x[i+1])."""
    xs = np.concatenate([np.asarray(s[1], float) for s in series])
    ys = np.concatenate([np.asarray(s[2], float) for s in series])
    fin = np.isfinite(ys)
    fr = _Frame((xs.min(), xs.max()), (ys[fin].min(), ys[fin].max()) if fin.any() else (0, 1))
    body = _axes(fr, title, xlabel, ylabel)
    for i, (label, x, y) in enumerate(series):
        x = np.asarray(x, float)
        y = np.asarray(y, float)
        if step:
            x = np.repeat(x, 2)[1:]
            y = np.repeat(y, 2)[:-1]
        pts = " ".join(f"{_fmt(a)},{_fmt(b)}" for a, b in zip(fr.px(x), fr.py(y)) if np.isfinite(b))
        color = PALETTE[i % len(PALETTE)]
        body.append(f'<polyline fill="none" stroke="{color}" stroke-width="1.5" points="{pts}"/>')
        body.append(
            f'<text x="{W - RIGHT - 4}" y="{TOP + 14 + 13 * i}" text-anchor="end" font-size="10" '
            f'fill="{color}">{escape(str(label))}</text>'
        )
    return _doc(body)


def heatmap(u, v, z, title="", xlabel="u", ylabel="v"):
    """``z[i, j]`` is the value at (u[i], v[j]); cells are centred on the grid."""
    u = np.asarray(u, float)
    v = np.asarray(v, float)
    z = np.asarray(z, float)
    fr = _Frame((0.0, 1.0), (0.0, 1.0))
    body = _axes(fr, title, xlabel, ylabel)
    lo, hi = float(np.min(z)), float(np.max(z))
    span = hi - lo if hi > lo else 1.0
    du = 1.0 / u.size
    dv = 1.0 / v.size
    cw = (W - LEFT - RIGHT) * du
    ch = (H - TOP - BOTTOM) * dv
    for i in range(u.size):
        for j in range(v.size):
            t = (z[i, j] - lo) / span
            r, g, b = int(255 * t), int(80 + 100 * (1 - abs(2 * t - 1))), int(255 * (1 - t))
            x = fr.px(u[i] - du / 2)
            y = fr.py(v[j] + dv / 2)
            body.append(
                f'<rect x="{_fmt(x)}" y="{_fmt(y)}" width="{_fmt(cw + 0.3)}" height="{_fmt(ch + 0.3)}" '
                f'fill="rgb({r},{g},{b})"/>'
            )
    body.append(f'<text x="{W - RIGHT}" y="{TOP - 6}" text-anchor="end" font-size="10">'
                f'range [{lo:.3g}, {hi:.3g}]</text>')
    return _doc(body)
