"""Static SVG charts: the (u, w)-plane picture and the stacked time series."""
from __future__ import annotations

import xml.etree.ElementTree as ET
from pathlib import Path

import numpy as np

from .propagator import Trajectory

SVG_NS = "http://www.w3.org/2000/svg"
TORQUE_COLOR = "#1f4fbf"
BLOCH_COLOR = "#c62828"
SERIES_COLORS = ("#1f4fbf", "#c62828", "#2e7d32")


def _fmt(x: float) -> str:
    return f"{x:.2f}"


def _points(xs, ys) -> str:
    return " ".join(f"{_fmt(x)},{_fmt(y)}" for x, y in zip(xs, ys))


def _svg(width: int, height: int) -> ET.Element:
    root = ET.Element(
        "svg", xmlns=SVG_NS, width=str(width), height=str(height), viewBox=f"0 0 {width} {height}"
    )
    ET.SubElement(root, "rect", x="0", y="0", width=str(width), height=str(height), fill="white")
    return root


def _text(parent, x, y, s, size=12, anchor="middle", **extra):
    node = ET.SubElement(
        parent, "text", x=_fmt(x), y=_fmt(y), attrib={"font-size": str(size), "text-anchor": anchor,
                                                      "font-family": "sans-serif", **extra}
    )
    node.text = s
    return node


def _write(root: ET.Element, path) -> Path:
    path = Path(path)
    ET.ElementTree(root).write(path, encoding="utf-8", xml_declaration=True)
    return path


def _marker(parent, x, y, color, filled: bool, role: str):
    ET.SubElement(
        parent,
        "circle",
        cx=_fmt(x),
        cy=_fmt(y),
        r="5",
        stroke=color,
        attrib={"fill": color if filled else "none", "stroke-width": "1.5", "class": role},
    )


def emit_bloch_plane(traj: Trajectory, path, title: str | None = None, size: int = 420) -> Path:
    """Bloch vector (u, w) and torque (Omega, Delta)/max|Q| in the v = 0 plane.

    Hollow circles mark the start of each curve, filled circles the end. Torque solid, Bloch dashed.
    """
    if traj.t.size == 0:
        raise ValueError("empty trajectory")
    margin = 50
    span = size - 2 * margin
    root = _svg(size, size + 20)
    ox, oy = margin + span / 2, 20 + margin + span / 2

    def sx(x):
        return ox + np.asarray(x) * span / 2.4

    def sy(y):
        return oy - np.asarray(y) * span / 2.4

    if title:
        _text(root, size / 2, 22, title, size=14)
    ET.SubElement(root, "circle", cx=_fmt(ox), cy=_fmt(oy), r=_fmt(span / 2.4), fill="none",
                  stroke="#bbbbbb", attrib={"stroke-dasharray": "2,3"})
    ET.SubElement(root, "line", x1=_fmt(sx(-1.2)), y1=_fmt(oy), x2=_fmt(sx(1.2)), y2=_fmt(oy), stroke="#888888")
    ET.SubElement(root, "line", x1=_fmt(ox), y1=_fmt(sy(-1.2)), x2=_fmt(ox), y2=_fmt(sy(1.2)), stroke="#888888")
    _text(root, sx(1.2) + 10, oy + 4, "u", anchor="start")
    _text(root, ox, sy(1.2) - 8, "w")
    for tick in (-1.0, 1.0):
        _text(root, sx(tick), oy + 16, f"{tick:g}", size=10)
        _text(root, ox - 6, sy(tick) + 4, f"{tick:g}", size=10, anchor="end")

    rate = np.hypot(traj.omega, traj.delta)
    scale = rate.max()
    q_u = traj.omega / scale if scale > 0 else np.zeros_like(traj.omega)
    q_w = traj.delta / scale if scale > 0 else np.zeros_like(traj.delta)

    curves = (
        ("torque", q_u, q_w, TORQUE_COLOR, {}),
        ("bloch", traj.u, traj.w, BLOCH_COLOR, {"stroke-dasharray": "6,4"}),
    )
    for name, xs, ys, color, style in curves:
        ET.SubElement(root, "polyline", id=name, points=_points(sx(xs), sy(ys)), fill="none", stroke=color,
                      attrib={"stroke-width": "1.8", **style})
    for name, xs, ys, color, _ in curves:
        _marker(root, sx(xs[0]), sy(ys[0]), color, False, f"{name}-start")
        _marker(root, sx(xs[-1]), sy(ys[-1]), color, True, f"{name}-end")

    _text(root, margin, size + 12, "solid: torque / peak |Q|   dashed: Bloch vector", size=10, anchor="start")
    return _write(root, path)


def _panel(root, x0, y0, width, height, t, series, ylabel, show_t_axis):
    finite = [s[np.isfinite(s)] for _, s in series]
    finite = [f for f in finite if f.size]
    lo = min((f.min() for f in finite), default=-1.0)
    hi = max((f.max() for f in finite), default=1.0)
    if hi - lo < 1e-12:
        lo, hi = lo - 1.0, hi + 1.0
    pad = 0.05 * (hi - lo)
    lo, hi = lo - pad, hi + pad

    def sx(x):
        return x0 + (np.asarray(x) - t[0]) / (t[-1] - t[0]) * width

    def sy(y):
        return y0 + height - (np.asarray(y) - lo) / (hi - lo) * height

    ET.SubElement(root, "rect", x=_fmt(x0), y=_fmt(y0), width=_fmt(width), height=_fmt(height), fill="none",
                  stroke="#444444")
    if lo < 0 < hi:
        ET.SubElement(root, "line", x1=_fmt(x0), y1=_fmt(sy(0.0)), x2=_fmt(x0 + width), y2=_fmt(sy(0.0)),
                      stroke="#cccccc")
    for tick in (lo + pad, hi - pad):
        _text(root, x0 - 5, sy(tick) + 4, f"{tick:.3g}", size=9, anchor="end")
    _text(root, x0 - 48, y0 + height / 2, ylabel, size=11,
          transform=f"rotate(-90 {_fmt(x0 - 48)} {_fmt(y0 + height / 2)})")
    if show_t_axis:
        for tick in np.linspace(t[0], t[-1], 5):
            _text(root, sx(tick), y0 + height + 14, f"{tick:g}", size=9)
        _text(root, x0 + width / 2, y0 + height + 30, "t (T)", size=11)
    legend_x = x0 + width - 6
    for k, ((label, s), color) in enumerate(zip(series, SERIES_COLORS)):
        ok = np.isfinite(s)
        if ok.any():
            ET.SubElement(root, "polyline", points=_points(sx(t[ok]), sy(s[ok])), fill="none", stroke=color,
                          attrib={"stroke-width": "1.4", "class": label})
        _text(root, legend_x, y0 + 14 + 12 * k, label, size=10, anchor="end", fill=color)


def emit_timeseries(traj: Trajectory, path, title: str | None = None) -> Path:
    """Four stacked panels: drive, adiabatic energies, mixing angle, Bloch components."""
    width, panel_h, gap, left = 560, 130, 22, 80
    panels = (
        ("rate (1/T)", (("Omega", traj.omega), ("Delta", traj.delta))),
        ("energy (1/T)", (("eps-", traj.eps_minus), ("eps+", traj.eps_plus))),
        ("theta (rad)", (("theta", traj.theta),)),
        ("Bloch", (("u", traj.u), ("v", traj.v), ("w", traj.w))),
    )
    height = 40 + len(panels) * (panel_h + gap) + 30
    root = _svg(width, height)
    if title:
        _text(root, width / 2, 22, title, size=14)
    for k, (ylabel, series) in enumerate(panels):
        _panel(root, left, 36 + k * (panel_h + gap), width - left - 20, panel_h, traj.t, series, ylabel,
               show_t_axis=k == len(panels) - 1)
    return _write(root, path)
