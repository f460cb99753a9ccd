"""Static SVG pictures of a curve, its deck translates and its double points."""
from __future__ import annotations

from xml.sax.saxutils import escape

from .curves import CurveOnSurface, double_points, event_sign
from .geometry import EUCLID, Arc
from .groups import Box

WIDTH = 640
_STRAND = "#1f4e99"
_GHOST = "#9db4d8"


class _View:
    def __init__(self, xmin, ymin, xmax, ymax):
        self.xmin, self.ymin, self.xmax, self.ymax = xmin, ymin, xmax, ymax
        self.scale = WIDTH / (xmax - xmin)
        self.height = (ymax - ymin) * self.scale

    def __call__(self, p):
        return ((p[0] - self.xmin) * self.scale, (self.ymax - p[1]) * self.scale)

    def contains(self, p, pad=0.0):
        return self.xmin - pad <= p[0] <= self.xmax + pad and self.ymin - pad <= p[1] <= self.ymax + pad


def _path(view, pts) -> str:
    return "M " + " L ".join(f"{x:.3f} {y:.3f}" for x, y in map(view, pts))


def _arc_points(arc: Arc, samples: int):
    if arc.kernel == EUCLID:
        return [arc.a, arc.b]
    return [arc.point_at(k / samples) for k in range(samples + 1)]


def _window_paths(c: CurveOnSurface, view, T, samples=16):
    tv = [c.model.apply_point(T, p) for p in c.lift_vertices]
    pts = []
    for k in range(c.N):
        seg = _arc_points(Arc(c.kernel, tv[k], tv[k + 1]), samples)
        pts.extend(seg if not pts else seg[1:])
    return _path(view, pts)


def _sanov_domain(view) -> list:
    # ideal quadrilateral: |x| <= 1 outside the circles |z -+ 1/2| = 1/2
    out = []
    for x in (-1.0, 1.0):
        out.append(_path(view, [(x, 1e-3), (x, view.ymax)]))
    for c in (-0.5, 0.5):
        arc = Arc("hyperbolic", (c - 0.5 + 1e-4, 1e-2), (c + 0.5 - 1e-4, 1e-2))
        out.append(_path(view, _arc_points(arc, 48)))
    return out


def render_svg(c: CurveOnSurface, translates: int = 1) -> str:
    model = c.model
    events = double_points(c)
    if c.kernel == EUCLID:
        n = max(0, translates)
        view = _View(-n - 0.1, -n - 0.1, 1 + n + 0.1, 1 + n + 0.1)
        view_box = Box(view.xmin, view.ymin, view.xmax, view.ymax)
        elements = model.enumerate_overlapping(view_box, c.window_region())
    else:
        xs = [p.x for p in c.lift_vertices]
        ys = [p.y for p in c.lift_vertices]
        view = _View(min(-1.5, min(xs) - 0.5), 0.0, max(1.5, max(xs) + 0.5), max(1.6, max(ys) * 1.3))
        elements = model.ball_elements(max(0, translates))
    ident = model.identity()
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{view.height:.0f}" '
        f'viewBox="0 0 {WIDTH} {view.height:.3f}">',
        '<rect width="100%" height="100%" fill="white"/>',
    ]
    if c.kernel == EUCLID:
        for a in range(-n, n + 2):
            parts.append(f'<path d="{_path(view, [(a, -n), (a, n + 1)])}" stroke="#ddd" fill="none"/>')
            parts.append(f'<path d="{_path(view, [(-n, a), (n + 1, a)])}" stroke="#ddd" fill="none"/>')
        parts.append(f'<path d="{_path(view, [(0, 0), (1, 0), (1, 1), (0, 1), (0, 0)])}" '
                     'stroke="black" stroke-width="2" fill="none"/>')
    else:
        parts.append(f'<path d="{_path(view, [(view.xmin, 0), (view.xmax, 0)])}" stroke="black"/>')
        for d in _sanov_domain(view):
            parts.append(f'<path d="{d}" stroke="black" stroke-width="2" fill="none"/>')
    for T in elements:
        colour, width = (_STRAND, 2.5) if T == ident else (_GHOST, 1.2)
        parts.append(f'<path d="{_window_paths(c, view, T)}" stroke="{colour}" '
                     f'stroke-width="{width}" fill="none"><title>{escape(str(T) or "id")}</title></path>')
    for e in events:
        sgn = event_sign(c, e)
        for T in elements:
            p = model.apply_point(T, e.location)
            if not view.contains(p):
                continue
            x, y = view(p)
            if e.j is None:
                parts.append(f'<circle cx="{x:.3f}" cy="{y:.3f}" r="4" fill="white" stroke="#c03"/>')
            else:
                label = "+" if sgn > 0 else "−"
                parts.append(f'<circle cx="{x:.3f}" cy="{y:.3f}" r="4" fill="#c03"/>')
                parts.append(f'<text x="{x + 6:.3f}" y="{y - 6:.3f}" font-size="12">{label}</text>')
    parts.append("</svg>")
    return "\n".join(parts) + "\n"
