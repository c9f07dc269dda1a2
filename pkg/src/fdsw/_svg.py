"""Minimal deterministic SVG writer for line plots and cell maps."""

from xml.sax.saxutils import escape


def fmt(x):
    s = format(float(x), ".9g")
    return "0" if s == "-0" else s


class Figure:
    def __init__(self, width, height, xrange, yrange, xlabel="", ylabel="", margin=50):
        self.w, self.h, self.m = width, height, margin
        self.x0, self.x1 = map(float, xrange)
        self.y0, self.y1 = map(float, yrange)
        if self.x1 == self.x0:
            self.x1 = self.x0 + 1.0
        if self.y1 == self.y0:
            self.y1 = self.y0 + 1.0
        self.xlabel, self.ylabel = xlabel, ylabel
        self.body = []

    def px(self, x):
        return self.m + (x - self.x0) / (self.x1 - self.x0) * (self.w - 2 * self.m)

    def py(self, y):
        return self.h - self.m - (y - self.y0) / (self.y1 - self.y0) * (self.h - 2 * self.m)

    def rect(self, x, y, dx, dy, fill):
        X, Y = self.px(x), self.py(y + dy)
        W = self.px(x + dx) - self.px(x)
        H = self.py(y) - self.py(y + dy)
        self.body.append(f'<rect x="{fmt(X)}" y="{fmt(Y)}" width="{fmt(W)}" height="{fmt(H)}" '
                         f'fill="{fill}" stroke="none"/>')

    def polyline(self, pts, stroke, width=1.5):
        if len(pts) == 0:
            return
        d = "M" + " L".join(f"{fmt(self.px(x))},{fmt(self.py(y))}" for x, y in pts)
        self.body.append(f'<path d="{d}" fill="none" stroke="{stroke}" stroke-width="{fmt(width)}"/>')

    def label(self, pt, text):
        x, y = pt
        self.body.append(f'<text x="{fmt(self.px(x) + 4)}" y="{fmt(self.py(y) - 4)}" '
                         f'font-size="12">{escape(text)}</text>')

    def _axes(self):
        m, w, h = self.m, self.w, self.h
        out = [f'<rect x="{m}" y="{m}" width="{w - 2 * m}" height="{h - 2 * m}" '
               'fill="none" stroke="#000000"/>']
        for j in range(5):
            fx = self.x0 + (self.x1 - self.x0) * j / 4
            fy = self.y0 + (self.y1 - self.y0) * j / 4
            out.append(f'<text x="{fmt(self.px(fx))}" y="{h - m + 16}" font-size="11" '
                       f'text-anchor="middle">{fmt(round(fx, 6))}</text>')
            out.append(f'<text x="{m - 6}" y="{fmt(self.py(fy) + 4)}" font-size="11" '
                       f'text-anchor="end">{fmt(round(fy, 6))}</text>')
        out.append(f'<text x="{w / 2}" y="{h - 10}" font-size="13" text-anchor="middle">'
                   f'{escape(self.xlabel)}</text>')
        out.append(f'<text x="14" y="{h / 2}" font-size="13" text-anchor="middle" '
                   f'transform="rotate(-90 14 {h / 2})">{escape(self.ylabel)}</text>')
        return out

    def render(self):
        head = (f'<svg xmlns="http://www.w3.org/2000/svg" width="{self.w}" height="{self.h}" '
                f'viewBox="0 0 {self.w} {self.h}">')
        return "\n".join([head, *self.body, *self._axes(), "</svg>"]) + "\n"


def emit_svg(curves, cells=(), path=None, xrange=None, yrange=None, xlabel="", ylabel="",
             styles=None):
    """Standalone SVG from {name: [polyline, ...]} and optional cells
    (x, y, dx, dy, fill).  Returns the text; writes it atomically when a
    path is given."""
    pts = [p for lines in curves.values() for ln in lines for p in ln]
    pts += [(c[0], c[1]) for c in cells] + [(c[0] + c[2], c[1] + c[3]) for c in cells]
    if len(pts) == 0:
        raise ValueError("nothing to draw")
    xs, ys = [p[0] for p in pts], [p[1] for p in pts]
    fig = Figure(640, 480, xrange or (min(xs), max(xs)), yrange or (min(ys), max(ys)),
                 xlabel, ylabel)
    for c in cells:
        fig.rect(*c)
    palette = ["#1155cc", "#38761d", "#990000", "#000000", "#b45f06", "#674ea7"]
    for j, name in enumerate(sorted(curves)):
        stroke = (styles or {}).get(name, palette[j % len(palette)])
        for ln in curves[name]:
            fig.polyline(ln, stroke)
        if len(curves[name]) and len(curves[name][0]):
            ln = curves[name][0]
            fig.label(ln[len(ln) // 2], name)
    text = fig.render()
    if path is not None:
        from ._io import atomic_write
        atomic_write(path, text)
    return text
