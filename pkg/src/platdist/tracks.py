"""Plat train tracks and the carried / almost carried decision procedures.

A track diagram is stored as an embedded graph in the row plane.  Every
edge records the gaps of the axis it crosses (in the same gap alphabet as
:mod:`platdist.curves`), every switch splits its three half-edges into a
large side and a small side, and every vertex has a counter-clockwise
rotation of half-edges so that the complementary regions can be traced.

Tao loops are drawn as round circles around their puncture pair.  Switch
positions are given as angles on the loop measured counter-clockwise from
its right-most point; the loop meets the axis at angle 0 (gap ``p+1``) and
angle pi (gap ``p-1``).  A left handed tao is the mirror image of a right
handed one in the axis.

A curve is carried when its reduced axis word is the word of a closed
smooth path in the diagram.  It is almost carried when the path may also
leave the track at a cusp and re-enter at another cusp of the same
complementary region, provided the excursion is not parallel into a
singular fiber or into a run of fiber endpoints.  Excursions are given the
axis word of the region boundary between the two cusps, so both relations
reduce to matching words.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .curves import CurveDiagram, reduce_word
from .plat import PlatPresentation, row_width

UP, DOWN = 0, 1
EPS = 0.15


@dataclass(frozen=True)
class Tao:
    index: int
    pair: tuple[int, int]
    right_handed: bool


@dataclass
class Vertex:
    id: int
    face: int
    kind: str           # 'tao_end', 'junction', 'eyelet_switch'
    owner: tuple        # ('tao', j) or ('eyelet', puncture)
    large: tuple = ()
    small: tuple = ()
    rotation: tuple = ()   # counter-clockwise half-edges


@dataclass
class Edge:
    id: int
    tail: int
    head: int
    word: tuple[int, ...]
    kind: str           # 'loop', 'tao_arc', 'connector', 'stem', 'eyelet', 'excursion'
    owner: tuple


@dataclass
class PlatTrack:
    """Combinatorial plat track for one row plane."""

    row: int
    m: int
    taos: list[Tao]
    connectors: list[tuple[int, int]]
    eyelets: list[int]
    vertices: list[Vertex] = field(default_factory=list)
    edges: list[Edge] = field(default_factory=list)

    @property
    def puncture_count(self) -> int:
        return 2 * self.m

    def to_json(self) -> dict:
        return {
            "row": self.row, "m": self.m,
            "taos": [{"index": t.index, "pair": list(t.pair),
                      "handedness": "right" if t.right_handed else "left"} for t in self.taos],
            "connectors": [list(c) for c in self.connectors],
            "eyelets": list(self.eyelets),
            "edges": [{"id": e.id, "kind": e.kind, "owner": list(e.owner), "tail": e.tail,
                       "head": e.head, "gaps": list(e.word)} for e in self.edges],
            "switches": [{"id": v.id, "face": "upper" if v.face == UP else "lower",
                          "large": [list(h) for h in v.large], "small": [list(h) for h in v.small]}
                         for v in self.vertices],
        }

    # -- graph helpers --

    def half_vertex(self, h: tuple[int, int]) -> int:
        e = self.edges[h[0]]
        return e.tail if h[1] == 0 else e.head

    def tao_edges(self, j: int) -> set[int]:
        return {e.id for e in self.edges if e.owner == ("tao", j)}

    def tao_arc(self, j: int) -> int:
        return next(e.id for e in self.edges if e.owner == ("tao", j) and e.kind == "tao_arc")

    def loop_edges(self, j: int) -> set[int]:
        return {e.id for e in self.edges if e.owner == ("tao", j) and e.kind == "loop"}

    def eyelet_edges(self, p: int) -> set[int]:
        return {e.id for e in self.edges if e.owner == ("eyelet", p)}

    def without_eyelet(self, p: int) -> "PlatTrack":
        if p not in self.eyelets:
            raise ValueError(f"no eyelet at puncture {p}")
        return _assemble(self.row, self.m, self.taos, [q for q in self.eyelets if q != p])


# -- construction -------------------------------------------------------------

def _gap(g: int, M: int) -> int:
    return M if g % M == 0 else g


def _face(theta: float) -> int:
    return UP if math.sin(theta) > 0 else DOWN


def _between_ccw(x: float, a: float, b: float) -> bool:
    """x strictly inside the ccw arc from a to b."""
    two = 2 * math.pi
    return 0 < (x - a) % two < (b - a) % two or (a == b and x != a)


def _assemble(row: int, m: int, taos: list[Tao], eyelets: list[int]) -> PlatTrack:
    M = 2 * m
    T = PlatTrack(row, m, list(taos), [(t.index, t.index + 1) for t in taos[:-1]], list(eyelets))
    verts, edges = T.vertices, T.edges

    def add_vertex(face, kind, owner):
        v = Vertex(len(verts), face, kind, owner)
        verts.append(v)
        return v.id

    def add_edge(u, v, word, kind, owner):
        e = Edge(len(edges), u, v, tuple(word), kind, owner)
        edges.append(e)
        return e.id

    junction_at: dict[tuple, int] = {}
    side_spec: dict[int, tuple] = {}
    rotation_spec: dict[int, tuple] = {}

    for idx, tao in enumerate(taos):
        p = tao.pair[0]
        o = 1 if tao.right_handed else -1
        marks = [("T", math.pi / 2 + EPS), ("B", 3 * math.pi / 2 + EPS)]
        if idx > 0:
            marks.append(("JL", math.pi / 2 - EPS))
        if idx < len(taos) - 1:
            marks.append(("JR", 3 * math.pi / 2 - EPS))
        if idx == 0 and 1 in eyelets:
            marks.append(("E1", 3 * math.pi / 4))
        if idx == len(taos) - 1 and M in eyelets:
            marks.append(("EM", 7 * math.pi / 4))
        marks = [(name, (o * a) % (2 * math.pi)) for name, a in marks]
        marks.sort(key=lambda t: t[1])
        ids = {}
        for name, a in marks:
            kind = "tao_end" if name in ("T", "B") else "junction"
            ids[name] = add_vertex(_face(a), kind, ("tao", tao.index))
        k = len(marks)
        loop_in, loop_out = {}, {}
        for s in range(k):
            (n0, a0), (n1, a1) = marks[s], marks[(s + 1) % k]
            word = []
            for cross, g in ((0.0, p + 1), (math.pi, p - 1)):
                if _between_ccw(cross, a0, a1):
                    word.append((((cross - a0) % (2 * math.pi)), _gap(g, M)))
            word = [g for _, g in sorted(word)]
            e = add_edge(ids[n0], ids[n1], word, "loop", ("tao", tao.index))
            loop_out[n0] = (e, 0)
            loop_in[n1] = (e, 1)
        arc = add_edge(ids["T"], ids["B"], [p], "tao_arc", ("tao", tao.index))
        for name, a in marks:
            v = ids[name]
            ccw_half, cw_half = loop_out[name], loop_in[name]
            behind, ahead = (cw_half, ccw_half) if o > 0 else (ccw_half, cw_half)
            if name in ("T", "B"):
                branch = (arc, 0 if name == "T" else 1)
                side_spec[v] = ((ahead,), (behind, branch))
                rotation_spec[v] = (ccw_half, branch, cw_half)
            else:
                junction_at[(tao.index, name)] = v
                side_spec[v] = ((behind,), (ahead, None))
                rotation_spec[v] = (ccw_half, cw_half, None)

    def attach(v, h):
        large, small = side_spec[v]
        side_spec[v] = (large, tuple(h if x is None else x for x in small))
        rotation_spec[v] = tuple(h if x is None else x for x in rotation_spec[v])

    for a, b in T.connectors:
        u = junction_at[(a, "JR")]
        v = junction_at[(b, "JL")]
        g = taos[a - 1].pair[1]
        word = [g] if verts[u].face != verts[v].face else []
        e = add_edge(u, v, word, "connector", ("connector", a))
        attach(u, (e, 0))
        attach(v, (e, 1))

    for puncture in eyelets:
        tao = taos[0] if puncture == 1 else taos[-1]
        j_vertex = junction_at[(tao.index, "E1" if puncture == 1 else "EM")]
        face = verts[j_vertex].face
        s = add_vertex(face, "eyelet_switch", ("eyelet", puncture))
        stem = add_edge(j_vertex, s, [], "stem", ("eyelet", puncture))
        attach(j_vertex, (stem, 0))
        near = 1 if puncture == 1 else M - 1
        loop = add_edge(s, s, [M, near], "eyelet", ("eyelet", puncture))
        side_spec[s] = (((stem, 1),), ((loop, 0), (loop, 1)))
        # mirror images reverse the rotation; the half-turn taking puncture 1 to 2m preserves it
        flipped = (face == DOWN) if puncture == 1 else (face == UP)
        rotation_spec[s] = ((stem, 1), (loop, 1), (loop, 0)) if flipped else ((stem, 1), (loop, 0), (loop, 1))

    for v in verts:
        v.large, v.small = side_spec[v.id]
        v.rotation = rotation_spec[v.id]
    return T


def build_plat_track(P: PlatPresentation, i: int) -> PlatTrack:
    if not 1 <= i <= P.n - 1:
        raise IndexError(f"track row {i} out of range 1..{P.n - 1}")
    return track_for_row(P.m, i, P.row(i))


def track_for_row(m: int, i: int, coefficients) -> PlatTrack:
    coefficients = tuple(coefficients)
    if len(coefficients) != row_width(m, i):
        raise ValueError(f"row {i} needs {row_width(m, i)} coefficients")
    taos = []
    for j, a in enumerate(coefficients, start=1):
        p = 2 * j if i % 2 == 1 else 2 * j - 1
        taos.append(Tao(j, (p, p + 1), a >= 0))
    eyelets = [1, 2 * m] if i % 2 == 1 else []
    return _assemble(i, m, taos, eyelets)


# -- complementary regions ------------------------------------------------------

@dataclass
class Region:
    """A complementary region traced with the region on the left."""

    corners: list[tuple]        # (vertex, half-edge in, half-edge out)
    steps: list[tuple]          # directed edges (edge id, forward?) between consecutive corners
    punctures: int = 0

    def cusp_positions(self, T: PlatTrack) -> list[int]:
        out = []
        for k, (v, hin, hout) in enumerate(self.corners):
            small = set(T.vertices[v].small)
            if hin in small and hout in small:
                out.append(k)
        return out


def trace_regions(T: PlatTrack) -> list[Region]:
    rot = {v.id: list(v.rotation) for v in T.vertices}
    seen = set()
    regions = []
    for e in T.edges:
        for forward in (True, False):
            if (e.id, forward) in seen:
                continue
            corners, steps = [], []
            cur = (e.id, forward)
            while cur not in seen:
                seen.add(cur)
                steps.append(cur)
                eid, fwd = cur
                hin = (eid, 1 if fwd else 0)
                v = T.half_vertex(hin)
                r = rot[v]
                hout = r[(r.index(hin) - 1) % len(r)]
                corners.append((v, hin, hout))
                cur = (hout[0], hout[1] == 0)
            regions.append(Region(corners, steps))
    # each tao and each eyelet bounds once-punctured monogons; the rest sit in the big region
    small_regions = [r for r in regions if len(r.cusp_positions(T)) == 1
                     and T.vertices[r.corners[r.cusp_positions(T)[0]][0]].kind != "junction"]
    for r in small_regions:
        r.punctures = 1
    big = [r for r in regions if r not in small_regions]
    leftover = T.puncture_count - len(small_regions)
    if len(big) != 1:
        raise AssertionError(f"expected one outer region, found {len(big)}")
    big[0].punctures = leftover
    return regions


def _step_word(T: PlatTrack, step) -> list[int]:
    eid, fwd = step
    w = list(T.edges[eid].word)
    return w if fwd else w[::-1]


def _arc_word(words: list[int]) -> tuple[int, ...]:
    out: list[int] = []
    for g in words:
        if out and out[-1] == g:
            out.pop()
        else:
            out.append(g)
    return tuple(out)


@dataclass(frozen=True)
class Excursion:
    tail: int
    head: int
    tail_half: tuple
    head_half: tuple
    word: tuple[int, ...]
    wraps: tuple[int, ...] = ()     # eyelets whose outer side the arc runs along


def excursions(T: PlatTrack) -> list[Excursion]:
    """Arcs outside the track from cusp to cusp that almost carried curves may use."""
    out = []
    for reg in trace_regions(T):
        cusps = reg.cusp_positions(T)
        if len(cusps) < 2 and reg.punctures == 0:
            continue
        n = len(reg.corners)
        for a in cusps:
            for b in cusps:
                # walk forward from corner a to corner b
                if a == b:
                    if reg.punctures == 0 or len(cusps) == 1:
                        continue
                    span = list(range(a + 1, a + 1 + n))
                else:
                    span = list(range(a + 1, a + 1 + (b - a) % n))
                inner = [k % n for k in span[:-1]]
                if not any(k in cusps for k in inner):
                    continue   # parallel to a run of fiber endpoints
                if reg.punctures == 0:
                    back = [k % n for k in range(b + 1, b + (a - b) % n)]
                    if not any(k in cusps for k in back):
                        continue
                    if a > b:
                        continue   # same class as the forward walk from b's side
                word = []
                for k in span:
                    word += _step_word(T, reg.steps[k % n])
                va, hin_a, hout_a = reg.corners[a]
                vb, hin_b, hout_b = reg.corners[b]
                w = _arc_word(word)
                wraps = tuple(sorted({T.edges[reg.steps[k % n][0]].owner[1] for k in span
                                      if T.edges[reg.steps[k % n][0]].kind == "eyelet"}))
                out.append(Excursion(va, vb, hout_a, hin_b, w, wraps))
    return out


# -- smooth path matching -------------------------------------------------------

CARRIED, ALMOST_CARRIED, TRANSVERSE_ONLY, INCOMPATIBLE, UNDECIDED = (
    "carried", "almost_carried", "transverse_only", "incompatible", "undecided")


@dataclass
class CarryingReport:
    status: str
    carried_arcs: int = 0
    taos_covered: int = 0
    taos_bisected: int = 0
    loops_covered: int = 0
    eyelets_covered: int = 0
    covered_edges: frozenset = frozenset()
    eyelet_removed: int | None = None
    path: tuple = ()
    eyelets_wrapped: int = 0    # eyelets passed around by an excursion instead of covered

    @property
    def eyelet_credit(self) -> bool:
        return bool(self.eyelets_covered or self.eyelets_wrapped)

    @property
    def bisects(self) -> bool:
        return self.taos_bisected > 0 or self.loops_covered > 0

    def ladder_score(self) -> int:
        """Bisected taos, counting a lone covered loop as one, plus one for a covered eyelet."""
        t = self.taos_bisected if self.taos_bisected else min(self.loops_covered, 1)
        return t + (1 if self.eyelet_credit else 0)

    def to_json(self) -> dict:
        return {"status": self.status, "carried_arcs": self.carried_arcs,
                "taos_covered": self.taos_covered, "taos_bisected": self.taos_bisected,
                "loops_covered": self.loops_covered, "eyelets_covered": self.eyelets_covered,
                "covered_edges": sorted(self.covered_edges), "eyelet_removed": self.eyelet_removed,
                "eyelets_wrapped": self.eyelets_wrapped}


class _Automaton:
    """Directed edges of a track (plus excursions) with the smooth transitions between them."""

    def __init__(self, T: PlatTrack, with_excursions: bool):
        self.T = T
        self.moves = []     # (word, tail half, head half, edge id or None)
        self.wraps = {}     # excursion move -> eyelets it runs around
        side = {}
        for v in T.vertices:
            for h in v.large:
                side[h] = (v.id, 0)
            for h in v.small:
                side[h] = (v.id, 1)
        for e in T.edges:
            self.moves.append((e.word, (e.id, 0), (e.id, 1), e.id))
            self.moves.append((e.word[::-1], (e.id, 1), (e.id, 0), e.id))
        if with_excursions:
            for k, x in enumerate(excursions(T)):
                a, b = ("x", k, 0), ("x", k, 1)
                side[a] = (x.tail, 1)
                side[b] = (x.head, 1)
                if x.wraps:
                    self.wraps[len(self.moves)] = self.wraps[len(self.moves) + 1] = x.wraps
                self.moves.append((x.word, a, b, None))
                self.moves.append((x.word[::-1], b, a, None))
        self.side = side
        by_tail = {}
        for idx, mv in enumerate(self.moves):
            by_tail.setdefault(mv[1], []).append(idx)
        # after arriving through half-edge h, leave through a half-edge on the other side
        self.next = []
        for word, tail, head, _ in self.moves:
            v, s = side[head]
            out = []
            for h, (w, t) in side.items():
                if w == v and t != s:
                    out += by_tail.get(h, [])
            self.next.append(out)
        self.start_face = []
        for word, tail, head, eid in self.moves:
            v = side[tail][0]
            self.start_face.append(T.vertices[v].face)

    def closed_paths(self, word: tuple[int, ...], limit: int = 64, max_steps: int = 200000):
        """Closed smooth paths whose cyclic word is ``word`` with its face convention."""
        N = len(word)
        if N == 0:
            return [], True
        found = []
        seen = set()
        steps = 0
        doubled = word + word
        # every closed reading has a move that starts within the first ``longest`` letters
        longest = max((len(m[0]) for m in self.moves), default=1)
        for r in range(min(N, longest)):
            # crossing at even positions goes from the lower disk up
            want_face = DOWN if r % 2 == 0 else UP
            for d, (w, tail, head, eid) in enumerate(self.moves):
                if not w or self.start_face[d] != want_face or doubled[r:r + len(w)] != w or len(w) > N:
                    continue
                stack = [(d, len(w), (d,), 0)]
                while stack:
                    steps += 1
                    if steps > max_steps:
                        return found, False
                    cur, pos, path, idle = stack.pop()
                    for nxt in self.next[cur]:
                        w2 = self.moves[nxt][0]
                        if pos == N:
                            if nxt == d:
                                key = _cycle_key(path)
                                if key not in seen:
                                    seen.add(key)
                                    found.append(path)
                                    if len(found) >= limit:
                                        return found, True
                                continue
                            if w2 or idle > 4:
                                continue
                            stack.append((nxt, pos, path + (nxt,), idle + 1))
                            continue
                        if not w2:
                            if idle > 4:
                                continue
                            stack.append((nxt, pos, path + (nxt,), idle + 1))
                        elif pos + len(w2) <= N and doubled[r + pos:r + pos + len(w2)] == w2:
                            stack.append((nxt, pos + len(w2), path + (nxt,), 0))
        return found, True


def _cycle_key(path):
    k = min(range(len(path)), key=lambda s: path[s:] + path[:s])
    return path[k:] + path[:k]


_AUTOMATA: dict = {}


def _automaton(T: PlatTrack, with_excursions: bool) -> _Automaton:
    key = (T.m, T.row, tuple(t.right_handed for t in T.taos), tuple(T.eyelets), with_excursions)
    if key not in _AUTOMATA:
        _AUTOMATA[key] = _Automaton(T, with_excursions)
    return _AUTOMATA[key]


def _report(T: PlatTrack, auto: _Automaton, path, status, removed=None) -> CarryingReport:
    edges = set()
    arcs = 0
    prev_excursion = auto.moves[path[-1]][3] is None
    for d in path:
        eid = auto.moves[d][3]
        if eid is None:
            prev_excursion = True
            continue
        if prev_excursion:
            arcs += 1
        prev_excursion = False
        edges.add(eid)
    if arcs == 0:
        arcs = 1
    covered = frozenset(edges)
    taos = sum(1 for t in T.taos if T.tao_edges(t.index) <= covered)
    bisected = sum(1 for t in T.taos if T.tao_arc(t.index) in covered)
    loops = sum(1 for t in T.taos if T.loop_edges(t.index) <= covered)
    eyes = sum(1 for p in T.eyelets if T.eyelet_edges(p) <= covered)
    wrapped = {p for d in path for p in auto.wraps.get(d, ()) if not T.eyelet_edges(p) <= covered}
    return CarryingReport(status, arcs, taos, bisected, loops, eyes, covered, removed, tuple(path),
                          len(wrapped))


def _best(reports: list[CarryingReport]) -> CarryingReport:
    return max(reports, key=lambda r: (r.taos_bisected, r.eyelets_covered, r.taos_covered,
                                       r.eyelets_wrapped, len(r.covered_edges)))


def _check_curve(c: CurveDiagram, T: PlatTrack):
    if c.puncture_count != T.puncture_count:
        raise ValueError("puncture count mismatch between curve and track")


def is_carried(c: CurveDiagram, T: PlatTrack, budget: int = 200000) -> CarryingReport:
    _check_curve(c, T)
    c = c.reduce()
    auto = _automaton(T, False)
    paths, complete = auto.closed_paths(c.word, max_steps=budget)
    if paths:
        return _best([_report(T, auto, p, CARRIED) for p in paths])
    return CarryingReport(INCOMPATIBLE if complete else UNDECIDED)


def is_almost_carried(c: CurveDiagram, T: PlatTrack, budget: int = 200000) -> CarryingReport:
    """Carried arcs joined by admissible excursions; odd rows may drop one eyelet."""
    _check_curve(c, T)
    c = c.reduce()
    carried = is_carried(c, T, budget)
    if carried.status == CARRIED:
        return carried
    complete = carried.status != UNDECIDED
    options = [(T, None)] + [(T.without_eyelet(p), p) for p in T.eyelets]
    for track, removed in options:
        auto = _automaton(track, True)
        paths, done = auto.closed_paths(c.word, max_steps=budget)
        complete = complete and done
        if paths:
            reps = [_report(track, auto, p, ALMOST_CARRIED, removed) for p in paths]
            return _best(reps)
    return CarryingReport(INCOMPATIBLE if complete else UNDECIDED)


def count_covered(c: CurveDiagram, T: PlatTrack) -> tuple[int, int, int]:
    rep = is_almost_carried(c, T)
    if rep.status not in (CARRIED, ALMOST_CARRIED):
        raise ValueError(f"curve is not almost carried ({rep.status})")
    return rep.taos_covered, rep.taos_bisected, rep.eyelets_covered


def covers(c: CurveDiagram, T: PlatTrack, G) -> bool:
    rep = is_almost_carried(c, T)
    if rep.status not in (CARRIED, ALMOST_CARRIED):
        raise ValueError(f"curve is not almost carried ({rep.status})")
    return set(G) <= rep.covered_edges


# -- arcs in a tao disk ---------------------------------------------------------

@dataclass(frozen=True)
class TaoDiskArc:
    """One arc of a curve inside the round disk of a tao."""

    entry_gap: int
    exit_gap: int
    word: tuple[int, ...]       # gaps crossed inside the disk
    tao_crossings: int
    pattern: str                # sides of the tao arc met along the arc, e.g. "LR"


def _blocks(gaps: list[int], M: int) -> dict[int, tuple[int, int]]:
    out, k = {}, 0
    for g in range(1, M + 1):
        s = k
        while k < len(gaps) and gaps[k] == g:
            k += 1
        out[g] = (s, k)
    return out


def _inside(x: float, L: float, R: float) -> bool:
    return L < x < R if L < R else (x > L or x < R)


def classify_tao_arcs(c: CurveDiagram, T: PlatTrack, j: int) -> list[TaoDiskArc]:
    """Arcs of ``c`` inside the disk bounded by the loop of tao ``j``.

    The loop is put in minimal position with ``c`` by choosing where its two
    axis crossings sit among those of ``c``.  The tao arc is drawn as an S
    from just above the loop's left axis crossing to just below its right one
    (mirrored for a left handed tao), crossing the axis between the two
    punctures.  It cuts the disk into an upper piece ``U`` and a lower piece
    ``D``: curve arcs leaving through the upper half of the loop end in ``U``,
    axis points right of the tao arc lie in ``U`` for a right handed tao.
    Where the tao arc meets the axis is chosen to minimise crossings.
    """
    c = c.reduce()
    M = c.puncture_count
    tao = next(t for t in T.taos if t.index == j)
    p = tao.pair[0]
    loop = CurveDiagram.from_word(M, (_gap(p - 1, M), p + 1))
    if c.word == loop.word or not c.word:
        return []
    gaps, _, _ = c.matchings()
    pos = {t: k for k, t in enumerate(c.axis_order())}
    n = len(c.word)
    blocks = _blocks(gaps, M)

    def slots(g):
        # empty blocks share a position; break ties in gap order
        s, e = blocks[g]
        return [s + k - 0.5 + g * 1e-3 for k in range(e - s + 1)]

    chords = [(pos[t], pos[(t + 1) % n]) for t in range(n)]   # chord t leaves crossing t

    def cut(L, R):
        return sum(1 for a, b in chords if _inside(a, L, R) != _inside(b, L, R))

    options = [(cut(L, R), L, R) for L in slots(_gap(p - 1, M)) for R in slots(p + 1)]
    least = min(o[0] for o in options)
    if least == 0:
        return []
    best = None
    for _, L, R in (o for o in options if o[0] == least):
        for tau in slots(p):
            arcs = _arcs_for(c, chords, L, R, tau, tao.right_handed)
            score = sum(a.tao_crossings for a in arcs)
            if best is None or score < best[0]:
                best = (score, arcs)
    return best[1]


def _arcs_for(c, chords, L, R, tau, right_handed):
    n = len(chords)
    inside = [_inside(chords[t][0], L, R) for t in range(n)]
    left, right = ("D", "U") if right_handed else ("U", "D")

    def side(x):
        return left if _inside(x, L, tau) else right

    def exit_side(t):
        return "U" if t % 2 == 0 else "D"    # chords leaving even positions are upper

    start = next(t for t in range(n) if not inside[t])
    arcs = []
    t = (start + 1) % n
    for _ in range(n):
        if inside[t] and not inside[(t - 1) % n]:
            run = []
            u = t
            while inside[u]:
                run.append(u)
                u = (u + 1) % n
            sides = [exit_side((t - 1) % n)] + [side(chords[k][0]) for k in run] + [exit_side(run[-1])]
            changes = sum(1 for k in range(1, len(sides)) if sides[k] != sides[k - 1])
            arcs.append(TaoDiskArc(c.word[(t - 1) % n], c.word[u], tuple(c.word[k] for k in run),
                                   changes, "".join(sides)))
        t = (t + 1) % n
    return arcs


# -- transverse position ---------------------------------------------------------

@dataclass
class TransversePosition:
    """Carried arcs of a curve, each a smooth track path entering and leaving at cusps.

    The rest of the curve runs through the complement or across the track
    along interval fibers.  ``segments`` holds ``(start, length, moves)``
    with ``start`` an index into the curve word.
    """

    curve: CurveDiagram
    segments: list[tuple[int, int, tuple]]
    covered_edges: frozenset
    taos_covered: int
    taos_bisected: int
    eyelets_covered: int
    almost_carried: bool
    cusp_ends: bool = True

    def to_json(self) -> dict:
        return {"word": list(self.curve.word), "almost_carried": self.almost_carried,
                "cusp_ends": self.cusp_ends,
                "segments": [[s, k] for s, k, _ in self.segments],
                "covered_edges": sorted(self.covered_edges), "taos_covered": self.taos_covered,
                "taos_bisected": self.taos_bisected, "eyelets_covered": self.eyelets_covered}


def carried_segments(c: CurveDiagram, T: PlatTrack, max_steps: int = 200000,
                     cusp_ends: bool = True) -> list[tuple[int, int, tuple]]:
    """Maximal subwords of ``c`` read by smooth track paths that start and end at cusps.

    With ``cusp_ends`` off a path may begin or end on either side of a switch,
    so it may also start or finish with crossing-free branches.
    """
    word = c.reduce().word
    N = len(word)
    if N == 0:
        return []
    auto = _automaton(T, False)
    side = auto.side
    doubled = word + word
    found = {}
    steps = 0
    for r in range(N):
        want_face = DOWN if r % 2 == 0 else UP
        for d, (w, tail, head, _) in enumerate(auto.moves):
            if auto.start_face[d] != want_face:
                continue
            if cusp_ends and (side[tail][1] != 0 or not w):
                continue
            if doubled[r:r + len(w)] != w:
                continue
            stack = [(d, len(w), (d,))]
            seen = set()
            while stack:
                steps += 1
                if steps > max_steps:
                    return _maximal(found)
                cur, pos, path = stack.pop()
                if (cur, pos) in seen:
                    continue
                seen.add((cur, pos))
                if pos and (not cusp_ends or side[auto.moves[cur][2]][1] == 0):
                    key = (r, pos)
                    if key not in found or len(path) > len(found[key]):
                        found[key] = path
                for nxt in auto.next[cur]:
                    w2 = auto.moves[nxt][0]
                    if pos + len(w2) > N or len(path) > 2 * N + 8:
                        continue
                    if doubled[r + pos:r + pos + len(w2)] == w2:
                        stack.append((nxt, pos + len(w2), path + (nxt,)))
    return _maximal(found)


def _maximal(found: dict) -> list[tuple[int, int, tuple]]:
    return sorted((r, k, path) for (r, k), path in found.items())


def _coverage(T: PlatTrack, auto: _Automaton, paths) -> tuple[frozenset, int, int, int]:
    edges = set()
    for path in paths:
        edges.update(auto.moves[d][3] for d in path if auto.moves[d][3] is not None)
    covered = frozenset(edges)
    taos = sum(1 for t in T.taos if T.tao_edges(t.index) <= covered)
    bisected = sum(1 for t in T.taos if T.tao_arc(t.index) in covered)
    eyes = sum(1 for p in T.eyelets if T.eyelet_edges(p) <= covered)
    return covered, taos, bisected, eyes


def make_transverse(c: CurveDiagram, T: PlatTrack, cusp_ends: bool = True) -> TransversePosition:
    """A transverse position of ``c`` whose carried arcs cover as much of the track as possible.

    Carried arcs are chosen greedily, longest first, among pairwise disjoint
    maximal carried subwords.  An almost carried position is kept whenever it
    covers at least as much.  ``cusp_ends=False`` lets arcs end beside a switch
    instead of exactly at its cusp.
    """
    _check_curve(c, T)
    c = c.reduce()
    rep = is_almost_carried(c, T)
    auto = _automaton(T, False)
    N = len(c.word)
    chosen = []
    used = bytearray(2 * N)       # two copies so wrapped spans are one slice
    segments = carried_segments(c, T, cusp_ends=cusp_ends)
    for r, k, path in sorted(segments, key=lambda s: (-s[1], -len(s[2]), s[0])):
        if k >= N or used.find(1, r, r + k) >= 0:
            continue
        for x in range(r, r + k):
            used[x % N] = used[x % N + N] = 1
        chosen.append((r, k, path))
    covered, taos, bisected, eyes = _coverage(T, auto, [p for _, _, p in chosen])
    pos = TransversePosition(c, sorted(chosen), covered, taos, bisected, eyes, False, cusp_ends)
    if rep.status in (CARRIED, ALMOST_CARRIED) and rep.eyelet_removed is None:
        kept = TransversePosition(c, [], rep.covered_edges, rep.taos_covered, rep.taos_bisected,
                                  rep.eyelets_covered, True)
        if (kept.taos_covered, kept.taos_bisected) >= (pos.taos_covered, pos.taos_bisected):
            return kept
    return pos


def is_transverse(position: TransversePosition, T: PlatTrack) -> bool:
    """Check that the carried arcs of a position read the curve word and do not overlap."""
    if position.almost_carried:
        return is_almost_carried(position.curve, T).status in (CARRIED, ALMOST_CARRIED)
    word = position.curve.word
    N = len(word)
    auto = _automaton(T, False)
    used = set()
    for r, k, path in position.segments:
        letters = [g for d in path for g in auto.moves[d][0]]
        if tuple(letters) != tuple(word[(r + x) % N] for x in range(k)):
            return False
        ends = (auto.side[auto.moves[path[0]][1]][1], auto.side[auto.moves[path[-1]][2]][1])
        if position.cusp_ends and ends != (0, 0):
            return False
        if any(b not in auto.next[a] for a, b in zip(path, path[1:])):
            return False
        span = {(r + x) % N for x in range(k)}
        if span & used:
            return False
        used |= span
    return True


# -- sampling carried curves -----------------------------------------------------

def random_carried_curve(T: PlatTrack, rng, max_moves: int = 40, tries: int = 200) -> CurveDiagram | None:
    """A random essential simple curve carried by ``T``, from a random closed smooth path."""
    auto = _automaton(T, False)
    for _ in range(tries):
        d0 = rng.randrange(len(auto.moves))
        path = [d0]
        cur = d0
        for _ in range(max_moves):
            nxt = auto.next[cur]
            if not nxt:
                break
            cur = rng.choice(nxt)
            if cur == d0 and len(path) > 1:
                break
            path.append(cur)
        if cur != d0 or d0 not in auto.next[path[-1]]:
            continue
        letters = [g for d in path for g in auto.moves[d][0]]
        if not letters or len(letters) % 2:
            continue
        if auto.start_face[d0] == UP:
            letters = letters[1:] + letters[:1]
        try:
            c = CurveDiagram.from_word(T.puncture_count, letters)
            if c.crossings and c.is_essential() and c.is_simple():
                return c
        except ValueError:
            continue
    return None
