"""Brute-force geometric oracles used to cross-check the curve engine.

Nothing here shares code with :mod:`platdist.curves` beyond the diagram
container.  Half twists are applied to an explicit polygon by a concrete
homeomorphism of the plane and the image is read back by tracing where the
polygon crosses the axis.  Intersection numbers are found by trying every
interleaving of the two curves' crossing points within each gap.
"""

from __future__ import annotations

import cmath
import itertools
import math

from .curves import CurveDiagram

INNER, OUTER = 0.62, 0.92


def _points_on_axis(c: CurveDiagram) -> list[float]:
    """An x coordinate for each crossing in axis order; infinity-gap crossings go right of the last puncture."""
    gaps, _, _ = c.matchings()
    M = c.puncture_count
    xs = []
    k = 0
    while k < len(gaps):
        g = gaps[k]
        run = 1
        while k + run < len(gaps) and gaps[k + run] == g:
            run += 1
        if g == M:
            xs += [M + 0.5 + 0.5 * (t + 1) for t in range(run)]
        else:
            xs += [g + (t + 1) / (run + 1) for t in range(run)]
        k += run
    return xs


def polygon(c: CurveDiagram, steps: int = 24) -> list[complex]:
    """Closed polygon realizing the diagram with semicircular arcs."""
    gaps, upper, lower = c.matchings()
    xs = _points_on_axis(c)
    up = {}
    for a, b in upper:
        up[a], up[b] = b, a
    down = {}
    for a, b in lower:
        down[a], down[b] = b, a
    pts: list[complex] = []
    p, face = 0, 1
    for _ in range(len(gaps)):
        q = up[p] if face > 0 else down[p]
        x0, x1 = xs[p], xs[q]
        mid, rad = (x0 + x1) / 2, abs(x1 - x0) / 2
        a0 = 0.0 if x0 > x1 else math.pi
        sweep = math.pi if x0 > x1 else -math.pi
        if face < 0:
            sweep = -sweep
        for s in range(steps):
            ang = a0 + sweep * s / steps
            pts.append(complex(mid + rad * math.cos(ang), rad * math.sin(ang)))
        p, face = q, -face
    return pts


def _twist_map(z: complex, k: int, sign: int) -> complex:
    centre = k + 0.5
    w = z - centre
    r = abs(w)
    if r >= OUTER:
        return z
    if r <= INNER:
        turn = math.pi
    else:
        turn = math.pi * (OUTER - r) / (OUTER - INNER)
    return centre + w * cmath.exp(1j * sign * turn)


def _refine(pts: list[complex], step: float) -> list[complex]:
    out = []
    n = len(pts)
    for t in range(n):
        a, b = pts[t], pts[(t + 1) % n]
        pieces = max(1, int(abs(b - a) / step) + 1)
        out += [a + (b - a) * s / pieces for s in range(pieces)]
    return out


def trace_word(pts: list[complex], M: int) -> list[int]:
    """Cyclic gap sequence of a polygon, rotated so position 0 is an upward crossing."""
    crossings = []
    n = len(pts)
    for t in range(n):
        a, b = pts[t], pts[(t + 1) % n]
        if (a.imag < 0) != (b.imag < 0):
            x = a.real + (b.real - a.real) * (-a.imag) / (b.imag - a.imag)
            g = math.floor(x)
            if g < 1 or g >= M:
                g = M
            crossings.append((g, b.imag > a.imag))
    if not crossings:
        return []
    start = next(t for t, (_, upward) in enumerate(crossings) if upward)
    crossings = crossings[start:] + crossings[:start]
    return [g for g, _ in crossings]


def _cancel(word: list[int]) -> list[int]:
    w = list(word)
    changed = True
    while changed and w:
        changed = False
        for t in range(len(w)):
            u = (t + 1) % len(w)
            if len(w) >= 2 and w[t] == w[u]:
                if u == 0:
                    w = w[1:-1]
                    w = w[1:] + w[:1]
                else:
                    del w[t:t + 2]
                changed = True
                break
    return w


def twist_by_polygon(c: CurveDiagram, k: int, sign: int) -> CurveDiagram:
    """Half twist applied geometrically, then read back off the axis."""
    pts = _refine(polygon(c), 0.01)
    # keep the polygon off the axis at exact sample points
    pts = [p if abs(p.imag) > 1e-12 else complex(p.real, 1e-9) for p in pts]
    image = [_twist_map(p, k, sign) for p in pts]
    return CurveDiagram.from_word(c.puncture_count, _cancel(trace_word(image, c.puncture_count)))


# -- intersection by exhaustive interleaving ---------------------------------

def _chords(n: int, pairs) -> list[tuple[int, int]]:
    return [tuple(sorted(p)) for p in pairs]


def intersection_by_interleaving(c1: CurveDiagram, c2: CurveDiagram, limit: int = 200000) -> int:
    """Minimum over all per-gap interleavings of the number of chord crossings."""
    g1, u1, l1 = c1.matchings()
    g2, u2, l2 = c2.matchings()
    M = c1.puncture_count
    buckets = []
    for g in range(1, M + 1):
        a = [t for t, x in enumerate(g1) if x == g]
        b = [t for t, x in enumerate(g2) if x == g]
        buckets.append((a, b))
    choices = []
    total = 1
    for a, b in buckets:
        opts = list(itertools.combinations(range(len(a) + len(b)), len(a)))
        total *= len(opts)
        choices.append(opts)
    if total > limit:
        raise ValueError(f"too many interleavings ({total})")
    best = None
    for pick in itertools.product(*choices):
        pos1, pos2 = {}, {}
        base = 0
        for (a, b), slots in zip(buckets, pick):
            size = len(a) + len(b)
            chosen = set(slots)
            ia, ib = iter(a), iter(b)
            for s in range(size):
                if s in chosen:
                    pos1[next(ia)] = base + s
                else:
                    pos2[next(ib)] = base + s
            base += size
        count = 0
        for ch1, ch2 in ((u1, u2), (l1, l2)):
            for p, q in ch1:
                x, y = sorted((pos1[p], pos1[q]))
                for r, s in ch2:
                    u, v = sorted((pos2[r], pos2[s]))
                    if (x < u < y) != (x < v < y):
                        count += 1
        if best is None or count < best:
            best = count
            if best == 0:
                break
    return best or 0
