"""JSON envelopes and small SVG figures for polygons."""

import json
from fractions import Fraction

from ultradyn import SCHEMA, __version__
from ultradyn.exactnum import INF, fmt_q


def envelope(command, payload):
    return {"schema": SCHEMA, "version": __version__, "command": command, "result": payload}


def _default(o):
    if o is INF or isinstance(o, Fraction):
        return fmt_q(o)
    if hasattr(o, "to_json"):
        return o.to_json()
    raise TypeError(f"cannot serialize {type(o).__name__}")


def dumps(obj, indent=2):
    return json.dumps(obj, indent=indent, default=_default, ensure_ascii=False) + "\n"


# SVG

_W, _H, _PAD = 480, 320, 40


def _scaler(xs, ys):
    x0, x1 = min(xs), max(xs)
    y0, y1 = min(ys), max(ys)
    dx = (x1 - x0) or 1
    dy = (y1 - y0) or 1

    def f(x, y):
        sx = _PAD + (x - x0) / dx * (_W - 2 * _PAD)
        sy = _H - _PAD - (y - y0) / dy * (_H - 2 * _PAD)
        return round(float(sx), 2), round(float(sy), 2)

    return f


def _svg(body, title):
    return (
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_W}" height="{_H}" '
        f'viewBox="0 0 {_W} {_H}">\n<title>{title}</title>\n'
        f'<rect width="{_W}" height="{_H}" fill="white"/>\n{body}</svg>\n'
    )


def _polyline(pts, color):
    s = " ".join(f"{x},{y}" for x, y in pts)
    return f'<polyline points="{s}" fill="none" stroke="{color}" stroke-width="2"/>\n'


def _dots(pts, color, r=3):
    return "".join(f'<circle cx="{x}" cy="{y}" r="{r}" fill="{color}"/>\n' for x, y in pts)


def newton_svg(points, polygon):
    """Scatter of (i, v(a_i)) with the lower hull drawn over it."""
    xs = [x for x, _ in points]
    ys = [float(y) for _, y in points]
    sc = _scaler(xs, ys)
    body = _dots([sc(x, y) for x, y in points], "#555")
    body += _polyline([sc(i, v) for i, v in polygon.vertices], "#c03")
    return _svg(body, f"Newton polygon, p = {polygon.p}")


def copolygon_svg(pl, p):
    """The piecewise-linear function over a window around its breakpoints."""
    bx = [x for x, _ in pl.breakpoints]
    lo, hi = min(bx) - 1, max(bx) + 1
    pts = [(lo, pl(lo))] + list(pl.breakpoints) + [(hi, pl(hi))]
    sc = _scaler([x for x, _ in pts], [y for _, y in pts])
    body = _polyline([sc(x, y) for x, y in pts], "#03c")
    body += _dots([sc(x, y) for x, y in pl.breakpoints], "#03c")
    return _svg(body, f"valuation polygon, p = {p}")
