"""SVG drawings of plats, curve diagrams and plat tracks.

Output is plain text built from fixed-precision numbers so the same input
always gives byte-identical files.
"""

from __future__ import annotations

import math
from xml.sax.saxutils import escape

from .curves import CurveDiagram, lower_cap_pairs, upper_cap_pairs
from .plat import PlatPresentation
from .tracks import PlatTrack

SCALE = 60.0
MARGIN = 40.0


def _f(x: float) -> str:
    s = f"{x:.2f}".rstrip("0").rstrip(".")
    return "0" if s in ("-0", "") else s


class _Canvas:
    def __init__(self, width: float, height: float, title: str):
        self.width, self.height = width, height
        self.parts = [f"<title>{escape(title)}</title>"]

    def line(self, x1, y1, x2, y2, cls="", width=2.0, color="black"):
        self.parts.append(f'<line x1="{_f(x1)}" y1="{_f(y1)}" x2="{_f(x2)}" y2="{_f(y2)}" '
                          f'stroke="{color}" stroke-width="{_f(width)}"{_cls(cls)}/>')

    def path(self, d, cls="", width=2.0, color="black"):
        self.parts.append(f'<path d="{d}" fill="none" stroke="{color}" stroke-width="{_f(width)}"{_cls(cls)}/>')

    def circle(self, x, y, r, fill="black", stroke="none", width=1.0, cls=""):
        self.parts.append(f'<circle cx="{_f(x)}" cy="{_f(y)}" r="{_f(r)}" fill="{fill}" stroke="{stroke}" '
                          f'stroke-width="{_f(width)}"{_cls(cls)}/>')

    def rect(self, x, y, w, h, fill="white", stroke="black"):
        self.parts.append(f'<rect x="{_f(x)}" y="{_f(y)}" width="{_f(w)}" height="{_f(h)}" '
                          f'fill="{fill}" stroke="{stroke}" stroke-width="1.5"/>')

    def text(self, x, y, s, size=14, anchor="middle"):
        self.parts.append(f'<text x="{_f(x)}" y="{_f(y)}" font-family="sans-serif" font-size="{size}" '
                          f'text-anchor="{anchor}">{escape(str(s))}</text>')

    def svg(self) -> str:
        head = (f'<svg xmlns="http://www.w3.org/2000/svg" width="{_f(self.width)}" height="{_f(self.height)}" '
                f'viewBox="0 0 {_f(self.width)} {_f(self.height)}">')
        body = "\n".join("  " + p for p in self.parts)
        return f'<?xml version="1.0" encoding="UTF-8"?>\n{head}\n{body}\n</svg>\n'


def _cls(c):
    return f' class="{c}"' if c else ""


# -- plats ------------------------------------------------------------------------

def render_plat(P: PlatPresentation) -> str:
    """Strands as vertical lines, twist regions as labelled boxes, caps and cups as arcs."""
    M = P.strand_count
    row_h = SCALE
    width = (M + 1) * SCALE + 2 * MARGIN
    height = (P.n + 1) * row_h + 2 * MARGIN
    cv = _Canvas(width, height, f"plat m={P.m} n={P.n}")

    def X(k):
        return MARGIN + k * SCALE

    def Y(level):
        # level 0 is the bottom plane, level n the top one
        return height - MARGIN - (level + 0.5) * row_h

    for k in range(1, M + 1):
        cv.line(X(k), Y(0), X(k), Y(P.n - 1) if P.n > 1 else Y(0), cls="strand")
    for i in range(1, P.n):
        y0, y1 = Y(i - 1), Y(i)
        for j, a in enumerate(P.row(i), start=1):
            p = 2 * j if i % 2 else 2 * j - 1
            cv.rect(X(p) - 0.2 * SCALE, y1 + 0.1 * row_h, X(p + 1) - X(p) + 0.4 * SCALE, (y0 - y1) - 0.2 * row_h)
            cv.text((X(p) + X(p + 1)) / 2, (y0 + y1) / 2 + 5, a)
    for a, b in lower_cap_pairs(M):
        _cap(cv, X(a), X(b), Y(0), +1)
    top = Y(P.n - 1) if P.n > 1 else Y(0)
    for a, b in upper_cap_pairs(M, P.n):
        _cap(cv, X(a), X(b), top, -1)
    return cv.svg()


def _cap(cv, xa, xb, y, down):
    r = abs(xb - xa) / 2
    sweep = 0 if down > 0 else 1
    cv.path(f"M {_f(xa)} {_f(y)} A {_f(r)} {_f(r * 0.6 if r > SCALE else r)} 0 0 {sweep} {_f(xb)} {_f(y)}",
            cls="cap")


# -- curves -----------------------------------------------------------------------

def crossing_positions(gaps: list[int]) -> list[float]:
    """x coordinate of each crossing, spread evenly inside its gap."""
    counts: dict[int, int] = {}
    for g in gaps:
        counts[g] = counts.get(g, 0) + 1
    seen: dict[int, int] = {}
    xs = []
    for g in gaps:
        k = seen.get(g, 0)
        seen[g] = k + 1
        xs.append(g + (k + 1) / (counts[g] + 1))
    return xs


def render_curve(c: CurveDiagram, title: str = "") -> str:
    """Punctures on a horizontal axis; upper and lower arcs as nested semicircles."""
    data = c.to_json()
    M = c.puncture_count
    xs = crossing_positions(data["gaps"])
    span = max([abs(xs[b] - xs[a]) for a, b in data["upper"] + data["lower"]], default=1.0)
    half = max(span / 2, 1.0) * SCALE
    width = (M + 1) * SCALE + 2 * MARGIN
    height = 2 * half + 2 * MARGIN + 20
    cv = _Canvas(width, height, title or str(c))
    y = MARGIN + half

    def X(x):
        return MARGIN + x * SCALE

    cv.line(X(0), y, X(M + 1), y, cls="axis", width=1.0, color="#999999")
    for a, b in data["upper"]:
        _semi(cv, X(xs[a]), X(xs[b]), y, up=True)
    for a, b in data["lower"]:
        _semi(cv, X(xs[a]), X(xs[b]), y, up=False)
    for k in range(1, M + 1):
        cv.circle(X(k), y, 5, cls="puncture")
        cv.text(X(k), y + 22, k, size=12)
    return cv.svg()


def _semi(cv, xa, xb, y, up):
    xa, xb = min(xa, xb), max(xa, xb)
    r = (xb - xa) / 2
    cv.path(f"M {_f(xa)} {_f(y)} A {_f(r)} {_f(r)} 0 0 {1 if up else 0} {_f(xb)} {_f(y)}", cls="arc",
            color="#1f5fbf")


# -- tracks -----------------------------------------------------------------------

def render_track(T: PlatTrack) -> str:
    """Taos as circles with an S-shaped tao arc, connectors between them, eyelets at the ends."""
    M = T.puncture_count
    R = 0.75 * SCALE
    width = (M + 1) * SCALE + 2 * MARGIN
    height = 4 * R + 2 * MARGIN
    cv = _Canvas(width, height, f"plat track row {T.row}")
    y = height / 2

    def X(x):
        return MARGIN + x * SCALE

    cv.line(X(0), y, X(M + 1), y, cls="axis", width=1.0, color="#cccccc")
    centers = {}
    for tao in T.taos:
        a, b = tao.pair
        cx = X((a + b) / 2)
        centers[tao.index] = cx
        cv.circle(cx, y, R, fill="none", stroke="black", width=2.0, cls="tao-loop")
        s = 1 if tao.right_handed else -1
        # the tao arc leaves the top of the loop and lands on the bottom, bending through the centre
        x0, y0 = cx - s * 0.25 * R, y - math.sqrt(R * R - (0.25 * R) ** 2)
        x1, y1 = cx + s * 0.25 * R, y + math.sqrt(R * R - (0.25 * R) ** 2)
        cv.path(f"M {_f(x0)} {_f(y0)} C {_f(cx + s * 0.6 * R)} {_f(y - 0.3 * R)} "
                f"{_f(cx - s * 0.6 * R)} {_f(y + 0.3 * R)} {_f(x1)} {_f(y1)}", cls="tao-arc")
        cv.text(cx, y - R - 8, f"{tao.index}{'R' if tao.right_handed else 'L'}", size=11)
    for a, b in T.connectors:
        xa, xb = centers[a] + R * 0.7, centers[b] - R * 0.7
        cv.path(f"M {_f(xa)} {_f(y + 0.7 * R)} C {_f((xa + xb) / 2)} {_f(y + 0.2 * R)} "
                f"{_f((xa + xb) / 2)} {_f(y - 0.2 * R)} {_f(xb)} {_f(y - 0.7 * R)}", cls="connector")
    for p in T.eyelets:
        ex = X(p)
        er = 0.3 * SCALE
        cv.circle(ex, y, er, fill="none", stroke="#b03030", width=2.0, cls="eyelet")
        tao = T.taos[0] if p == 1 else T.taos[-1]
        tx = centers[tao.index] + (-R if p == 1 else R) * 0.7
        cv.line(ex + (er if p == 1 else -er) * 0.7, y - er * 0.7, tx, y - 0.7 * R, cls="stem", color="#b03030")
    for k in range(1, M + 1):
        cv.circle(X(k), y, 4, cls="puncture")
        cv.text(X(k), y + 18, k, size=11)
    return cv.svg()
