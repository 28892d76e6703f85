"""Brute-force curve inventories and breadth-first distance between disk sets.

Inventories list every essential simple closed curve whose reduced axis
diagram has at most ``C`` crossings.  They are built from pairs of
non-crossing arc systems in the upper and lower disks with matching gap
counts, which is an independent route from the word-based machinery used
elsewhere.

Distances are measured in a multi-frame inventory: a curve is admitted if it
has at most ``C`` crossings when drawn in some row plane ``P_k``.  Every
vertex of the upper-bound path is a round loop in its own plane, so small
bounds already contain the whole certificate.
"""

from __future__ import annotations

import functools
import hashlib
import json
import os
from collections import deque
from dataclasses import dataclass, field
from pathlib import Path

from .curves import (CurveDiagram, apply_braid, bounds_disk, canonical_word, intersection_words,
                     lower_cap_pairs, upper_cap_pairs)
from .plat import PlatPresentation, projection_word

FORMAT_VERSION = 1


class BudgetExceeded(RuntimeError):
    def __init__(self, message, partial=None):
        super().__init__(message)
        self.partial = partial


@dataclass
class CurveInventory:
    puncture_count: int
    bound: int
    curves: list[CurveDiagram]
    below: list[bool] = field(default_factory=list)

    def to_json(self) -> dict:
        return {"format": FORMAT_VERSION, "punctures": self.puncture_count, "bound": self.bound,
                "words": [list(c.word) for c in self.curves]}

    @classmethod
    def from_json(cls, data: dict) -> "CurveInventory":
        if data.get("format") != FORMAT_VERSION:
            raise ValueError("inventory cache format mismatch")
        M = int(data["punctures"])
        curves = [CurveDiagram(M, tuple(w), True) for w in data["words"]]
        return cls(M, int(data["bound"]), curves, [bounds_disk(c, lower_cap_pairs(M)) for c in curves])

    def digest(self) -> str:
        return hashlib.sha256(json.dumps(self.to_json(), sort_keys=True).encode()).hexdigest()


# -- enumeration ----------------------------------------------------------------

def _compositions(total: int, parts: int):
    if parts == 1:
        yield (total,)
        return
    for k in range(total + 1):
        for rest in _compositions(total - k, parts - 1):
            yield (k,) + rest


def _matchings(labels: tuple[int, ...]) -> list[tuple[int, ...]]:
    """Non-crossing perfect matchings with no chord inside one gap, as partner arrays."""
    n = len(labels)

    @functools.lru_cache(maxsize=None)
    def solve(i, j):
        if i > j:
            return [()]
        if (j - i + 1) % 2:
            return []
        out = []
        for k in range(i + 1, j + 1, 2):
            if labels[k] == labels[i]:
                continue
            for inner in solve(i + 1, k - 1):
                for outer in solve(k + 1, j):
                    out.append(((i, k),) + inner + outer)
        return out

    result = []
    for pairs in solve(0, n - 1):
        partner = [0] * n
        for a, b in pairs:
            partner[a], partner[b] = b, a
        result.append(tuple(partner))
    return result


def _trace(labels, up, down):
    n = len(labels)
    word = []
    p = 0
    for _ in range(n // 2):
        q = up[p]
        word += (labels[p], labels[q])
        p = down[q]
        if p == 0:
            break
    return word if len(word) == n else None


def enumerate_curves(puncture_count: int, bound: int, budget: int | None = None) -> CurveInventory:
    """Every essential curve with at most ``bound`` axis crossings, in deterministic order."""
    M = puncture_count
    if bound < 0 or bound % 2:
        raise ValueError("bound must be a non-negative even integer")
    found = set()
    work = 0
    for N in range(2, bound + 1, 2):
        for comp in _compositions(N, M):
            labels = tuple(g for g, k in enumerate(comp, start=1) for _ in range(k))
            systems = _matchings(labels)
            for up in systems:
                for down in systems:
                    work += 1
                    if budget is not None and work > budget:
                        partial = _inventory(M, bound, found)
                        raise BudgetExceeded(f"enumeration budget {budget} exceeded at N={N}", partial)
                    word = _trace(labels, up, down)
                    if word is None:
                        continue
                    c = CurveDiagram(M, canonical_word(word), True)
                    if c.is_essential():
                        found.add(c.word)
    return _inventory(M, bound, found)


def _inventory(M, bound, words) -> CurveInventory:
    ordered = sorted(words, key=lambda w: (len(w), w))
    curves = [CurveDiagram(M, w, True) for w in ordered]
    return CurveInventory(M, bound, curves, [bounds_disk(c, lower_cap_pairs(M)) for c in curves])


def cache_dir(explicit: str | os.PathLike | None = None) -> Path:
    if explicit:
        return Path(explicit)
    env = os.environ.get("PLATDIST_CACHE")
    if env:
        return Path(env)
    return Path.home() / ".cache" / "platdist"


def load_or_enumerate(puncture_count: int, bound: int, directory=None, budget=None) -> CurveInventory:
    path = cache_dir(directory) / f"inventory-{puncture_count}-{bound}-v{FORMAT_VERSION}.json"
    if path.exists():
        return CurveInventory.from_json(json.loads(path.read_text()))
    inv = enumerate_curves(puncture_count, bound, budget)
    path.parent.mkdir(parents=True, exist_ok=True)
    tmp = path.with_suffix(".tmp")
    tmp.write_text(json.dumps(inv.to_json(), separators=(",", ":")))
    tmp.replace(path)
    return inv


# -- distance -----------------------------------------------------------------

def _compatible(a: frozenset, b: frozenset, M: int) -> bool:
    """Disjoint curves split the punctures into nested or complementary blocks."""
    everything = frozenset(range(1, M + 1))
    ac, bc = everything - a, everything - b
    return not (a & b and a & bc and ac & b and ac & bc)


@dataclass
class _Vertex:
    frame: int
    curve: CurveDiagram      # in the coordinates of its own frame
    below: bool
    above: bool


@dataclass
class BFSResult:
    distance: float
    path: list[tuple[int, CurveDiagram]]
    vertices: int
    edge_tests: int
    within_bound: bool

    def to_json(self) -> dict:
        d = self.distance
        return {"distance": None if d == float("inf") else int(d), "vertices": self.vertices,
                "edge_tests": self.edge_tests, "within_bound": self.within_bound,
                "path": [{"frame": f, "gaps": c.to_json()["gaps"], "word": list(c.word)} for f, c in self.path]}


class DisjointnessGraph:
    """Multi-frame inventory graph with memoized edge tests."""

    def __init__(self, P: PlatPresentation, inventory: CurveInventory, frames=None):
        self.P = P
        M = P.strand_count
        if inventory.puncture_count != M:
            raise ValueError("inventory puncture count does not match the plat")
        self.frames = list(frames) if frames is not None else list(range(1, P.n + 1))
        up_pairs = upper_cap_pairs(M, P.n)
        self.vertices: list[_Vertex] = []
        for f in self.frames:
            down = projection_word(P, f, 1)
            up = projection_word(P, P.n, f).inverse()
            for c in inventory.curves:
                below = bounds_disk(apply_braid(c, down), lower_cap_pairs(M))
                above = bounds_disk(apply_braid(c, up), up_pairs)
                self.vertices.append(_Vertex(f, c, below, above))
        self._moved: dict = {}
        self._edges: dict = {}
        self.tests = 0

    def _in_frame(self, k: int, frame: int) -> CurveDiagram:
        v = self.vertices[k]
        if v.frame == frame:
            return v.curve
        key = (k, frame)
        if key not in self._moved:
            self._moved[key] = apply_braid(v.curve, projection_word(self.P, v.frame, frame))
        return self._moved[key]

    def disjoint(self, a: int, b: int) -> bool:
        key = (a, b) if a < b else (b, a)
        if key in self._edges:
            return self._edges[key]
        frame = min(self.vertices[a].frame, self.vertices[b].frame)
        ca, cb = self._in_frame(a, frame), self._in_frame(b, frame)
        M = self.P.strand_count
        if ca.word == cb.word:
            result = True
        elif not _compatible(ca.inside(), cb.inside(), M):
            result = False
        else:
            self.tests += 1
            result = intersection_words(ca.word, cb.word, M) == 0
        self._edges[key] = result
        return result

    def distance(self) -> BFSResult:
        V = self.vertices
        start = [k for k, v in enumerate(V) if v.below]
        parent = {k: None for k in start}
        queue = deque((k, 0) for k in start)
        while queue:
            k, d = queue.popleft()
            if V[k].above:
                path = []
                while k is not None:
                    path.append((V[k].frame, V[k].curve))
                    k = parent[k]
                return BFSResult(d, path, len(V), self.tests, True)
            for j in range(len(V)):
                if j not in parent and self.disjoint(k, j):
                    parent[j] = k
                    queue.append((j, d + 1))
        return BFSResult(float("inf"), [], len(V), self.tests, False)


def bfs_distance(P: PlatPresentation, bound: int, inventory: CurveInventory | None = None,
                 frames=None, cache=None) -> BFSResult:
    """Breadth-first distance between the disk sets inside the bounded inventory."""
    inv = inventory or load_or_enumerate(P.strand_count, bound, cache)
    if inv.bound < bound:
        raise ValueError("inventory bound is smaller than requested")
    if inv.bound > bound:
        inv = CurveInventory(inv.puncture_count, bound, [c for c in inv.curves if len(c) <= bound])
    graph = DisjointnessGraph(P, inv, frames)
    if not any(v.below for v in graph.vertices) or not any(v.above for v in graph.vertices):
        return BFSResult(float("inf"), [], len(graph.vertices), 0, False)
    return graph.distance()
