"""Bridge distance of highly twisted plats: upper-bound path, verification, lower-bound audit.

Path vertices are canonical loops living in their own row plane.  Words in
the bottom plane grow exponentially with the row, so vertices are kept as
framed curves and every check moves the two curves involved to a common
plane between their rows.  Intersection numbers and disk membership do not
depend on the plane used.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field

from .curves import (CurveDiagram, apply_braid, bounds_disk, canonical_loop, geometric_intersection,
                     lower_cap_pairs, round_curve, upper_cap_pairs)
from .plat import (PlatError, PlatPresentation, bridge_distance_formula, formula_value, is_highly_twisted,
                   is_row_highly_twisted, projection_word, uniqueness_threshold)
from .tracks import (ALMOST_CARRIED, CARRIED, build_plat_track, classify_tao_arcs, is_almost_carried,
                     is_carried, make_transverse, random_carried_curve)

BOTTOM_WORD_LIMIT = 4000


class VerificationError(RuntimeError):
    """An internal consistency check failed."""


class AuditFailure(RuntimeError):
    def __init__(self, message, instance=None):
        super().__init__(message)
        self.instance = instance


@dataclass(frozen=True)
class CapSystem:
    side: str                   # 'below' or 'above'
    pairs: tuple[tuple[int, int], ...]

    @classmethod
    def below(cls, M: int) -> "CapSystem":
        return cls("below", tuple(lower_cap_pairs(M)))

    @classmethod
    def above(cls, M: int, n: int) -> "CapSystem":
        return cls("above", tuple(upper_cap_pairs(M, n)))

    def bounds(self, c: CurveDiagram) -> bool:
        return bounds_disk(c, self.pairs)


@dataclass(frozen=True)
class FramedCurve:
    """A curve drawn in row plane ``frame``; frame 1 is the bottom plane."""

    frame: int
    curve: CurveDiagram
    label: str = ""

    def to_json(self) -> dict:
        return {"frame": self.frame, "label": self.label, "word": list(self.curve.word)}

    @classmethod
    def from_json(cls, M: int, data: dict) -> "FramedCurve":
        return cls(int(data.get("frame", 1)), CurveDiagram.from_word(M, data["word"]), data.get("label", ""))


def move(P: PlatPresentation, c: CurveDiagram, source: int, target: int) -> CurveDiagram:
    """Carry a curve from plane ``source`` to plane ``target`` through the braid."""
    if source == target:
        return c
    if target < source:
        return apply_braid(c, projection_word(P, source, target))
    return apply_braid(c, projection_word(P, target, source).inverse())


def framed_intersection(P: PlatPresentation, a: FramedCurve, b: FramedCurve) -> int:
    mid = (a.frame + b.frame) // 2
    return geometric_intersection(move(P, a.curve, a.frame, mid), move(P, b.curve, b.frame, mid))


def _framed(c) -> FramedCurve:
    return c if isinstance(c, FramedCurve) else FramedCurve(1, c)


def loop_vertex(P: PlatPresentation, row: int, j: int) -> FramedCurve:
    """Canonical loop ``(row, j)``; row 0 loops are the lower caps and live in plane 1."""
    return FramedCurve(max(row, 1), canonical_loop(P, row, j), f"loop({row},{j})")


# -- certificate ----------------------------------------------------------------

@dataclass
class PathReport:
    ok: bool
    length: int
    failures: list[str] = field(default_factory=list)
    checks: list[dict] = field(default_factory=list)
    first_below: bool = False
    last_above: bool = False


@dataclass
class DistanceCertificate:
    plat: PlatPresentation
    formula_value: int | None
    r: int
    path: list[FramedCurve]
    disjointness_checks: list[dict]
    endpoint_memberships: dict
    audit: dict | None = None
    uniqueness_flag: bool = False
    highly_twisted: bool = True

    @property
    def length(self) -> int:
        return len(self.path) - 1

    def bottom_words(self, limit: int = BOTTOM_WORD_LIMIT) -> list[list[int] | None]:
        """Vertices in bottom-plane coordinates, or None where the word would exceed ``limit``."""
        out = []
        for v in self.path:
            c = v.curve
            ok = True
            for f in range(v.frame, 1, -1):
                c = move(self.plat, c, f, f - 1)
                if len(c.word) > limit:
                    ok = False
                    break
            out.append(list(c.word) if ok else None)
        return out

    def to_json(self) -> dict:
        return {
            "format": 1,
            "plat": self.plat.to_json(),
            "formula_value": self.formula_value,
            "highly_twisted": self.highly_twisted,
            "r": self.r,
            "length": self.length,
            "path": [v.to_json() for v in self.path],
            "path_bottom_words": self.bottom_words(),
            "disjointness_checks": self.disjointness_checks,
            "endpoint_memberships": self.endpoint_memberships,
            "uniqueness_flag": self.uniqueness_flag,
            "audit": self.audit,
        }

    @classmethod
    def from_json(cls, data: dict) -> "DistanceCertificate":
        P = PlatPresentation.from_json(data["plat"])
        path = [FramedCurve.from_json(P.strand_count, v) for v in data["path"]]
        return cls(P, data.get("formula_value"), int(data.get("r", 0)), path,
                   list(data.get("disjointness_checks", [])), dict(data.get("endpoint_memberships", {})),
                   data.get("audit"), bool(data.get("uniqueness_flag", False)),
                   bool(data.get("highly_twisted", True)))


def step_count(m: int, n: int) -> int:
    """Largest ``r`` with ``2r(m-2) <= n``."""
    return n // (2 * (m - 2))


def path_vertices(P: PlatPresentation) -> tuple[int, list[FramedCurve]]:
    m, n = P.m, P.n
    if m < 3:
        raise PlatError(f"the path construction needs m >= 3 (got m={m})")
    r = step_count(m, n)
    verts = [loop_vertex(P, 0, 1)]
    for k in range(1, r + 1):
        # rows 2k(m-2) are even; alternate right-most and left-most loops
        verts.append(loop_vertex(P, 2 * k * (m - 2), m if k % 2 else 1))
    last_row = 2 * r * (m - 2)
    if last_row < n:
        if r % 2:
            verts.append(loop_vertex(P, n, 1))
        else:
            verts.append(loop_vertex(P, n, m if n % 2 == 0 else m - 1))
    return r, verts


def verify_path(P: PlatPresentation, path) -> PathReport:
    """Check essential vertices, disjoint neighbours and endpoint disk memberships."""
    vs = [_framed(c) for c in path]
    rep = PathReport(True, len(vs) - 1)
    if not vs:
        rep.ok = False
        rep.failures.append("empty path")
        return rep
    M = P.strand_count
    for k, v in enumerate(vs):
        if v.curve.puncture_count != M or not 1 <= v.frame <= P.n:
            rep.failures.append(f"vertex {k}: not a curve in a row plane of this plat")
        elif not v.curve.is_essential():
            rep.failures.append(f"vertex {k}: not essential")
    if rep.failures:
        rep.ok = False
        return rep
    for k in range(len(vs) - 1):
        i = framed_intersection(P, vs[k], vs[k + 1])
        rep.checks.append({"pair": [k, k + 1], "intersection": i})
        if i != 0:
            rep.failures.append(f"vertices {k} and {k + 1} intersect (i = {i})")
    first, last = vs[0], vs[-1]
    rep.first_below = bounds_disk(move(P, first.curve, first.frame, 1), lower_cap_pairs(M))
    rep.last_above = bounds_disk(move(P, last.curve, last.frame, P.n), upper_cap_pairs(M, P.n))
    if not rep.first_below:
        rep.failures.append("vertex 0 does not bound a disk below")
    if not rep.last_above:
        rep.failures.append(f"vertex {len(vs) - 1} does not bound a disk above")
    rep.ok = not rep.failures
    return rep


def upper_bound_path(P: PlatPresentation) -> DistanceCertificate:
    r, verts = path_vertices(P)
    rep = verify_path(P, verts)
    if not rep.ok:
        raise VerificationError("upper-bound path failed verification: " + "; ".join(rep.failures))
    twisted = is_highly_twisted(P)
    value = bridge_distance_formula(P) if twisted else None
    if value is not None and rep.length != value:
        raise VerificationError(f"path length {rep.length} differs from the formula value {value}")
    return DistanceCertificate(P, value, r, verts, rep.checks,
                               {"first_below": rep.first_below, "last_above": rep.last_above},
                               None, uniqueness_threshold(P) if twisted else False, twisted)


def verify_certificate(data: dict) -> PathReport:
    """Re-check a serialized certificate without rebuilding its path."""
    cert = DistanceCertificate.from_json(data)
    rep = verify_path(cert.plat, cert.path)
    if cert.highly_twisted and cert.plat.m >= 3:
        value = formula_value(cert.plat.m, cert.plat.n)
        if cert.formula_value != value:
            rep.failures.append(f"recorded formula value {cert.formula_value} differs from {value}")
        if rep.length != value:
            rep.failures.append(f"path length {rep.length} differs from the formula value {value}")
    recorded = {tuple(c["pair"]): c["intersection"] for c in cert.disjointness_checks}
    for c in rep.checks:
        if tuple(c["pair"]) in recorded and recorded[tuple(c["pair"])] != c["intersection"]:
            rep.failures.append(f"recorded intersection for pair {c['pair']} is wrong")
    rep.ok = not rep.failures
    return rep


def distance(P: PlatPresentation, audit: bool = False, budget: int = 20, seed: int = 0,
             disk_bound: int | None = None) -> DistanceCertificate:
    bridge_distance_formula(P)      # raises outside the theorem's range
    cert = upper_bound_path(P)
    if audit:
        cert.audit = audit_lower_bound(P, budget, seed, disk_bound).to_json()
    return cert


def load_certificate(path) -> dict:
    with open(path) as fh:
        return json.load(fh)


# -- lower-bound audit ------------------------------------------------------------

@dataclass
class AuditTranscript:
    seed: int
    budget: int
    entries: list[dict] = field(default_factory=list)

    def record(self, lemma: str, instance: str, verdict: bool, gating: bool = True, **detail):
        """Log one instance; a failed gating instance aborts the audit."""
        if verdict:
            status = "pass"
        else:
            status = "fail" if gating else "observed"
        self.entries.append({"lemma": lemma, "instance": instance, "verdict": status, **detail})
        if not verdict and gating:
            raise AuditFailure(f"check {lemma} failed on {instance}: {detail}",
                               {"lemma": lemma, "instance": instance, **detail})

    def counts(self) -> dict:
        out: dict = {}
        for e in self.entries:
            out[e["lemma"]] = out.get(e["lemma"], 0) + 1
        return out

    def observations(self) -> list[dict]:
        """Non-gating instances whose statement did not hold."""
        return [e for e in self.entries if e["verdict"] == "observed"]

    def to_json(self) -> dict:
        return {"seed": self.seed, "budget": self.budget, "counts": self.counts(),
                "observed": len(self.observations()), "entries": self.entries}


DEFAULT_DISK_BOUND = {6: 12, 8: 8, 10: 6}


def _disk_curves(M: int, bound: int, pairs):
    from .oracle import enumerate_curves
    inv = enumerate_curves(M, bound)
    return [c for c in inv.curves if bounds_disk(c, pairs)]


def check_next_row_loop(P: PlatPresentation, i: int, j: int) -> dict:
    """The loop of row ``i+1`` seen in plane ``i`` is carried and covers two taos or a tao and an eyelet."""
    T = build_plat_track(P, i)
    c = move(P, canonical_loop(P, i + 1, j), i + 1, i)
    rep = is_carried(c, T)
    ok = rep.status == CARRIED and ((rep.taos_covered == 2 and rep.eyelets_covered == 0)
                                    or (rep.taos_covered == 1 and rep.eyelets_covered == 1))
    return {"ok": ok, "status": rep.status, "taos": rep.taos_covered, "eyelets": rep.eyelets_covered}


def check_loops_fill_track(P: PlatPresentation, i: int) -> dict:
    """The loops of row ``i+1`` carried into plane ``i`` cover every edge of the track together."""
    T = build_plat_track(P, i)
    covered = set()
    width = P.m - 1 if (i + 1) % 2 else P.m
    for j in range(1, width + 1):
        rep = is_almost_carried(move(P, canonical_loop(P, i + 1, j), i + 1, i), T)
        covered |= rep.covered_edges
    missing = sorted({e.id for e in T.edges} - covered)
    return {"ok": not missing, "missing_edges": missing}


def check_ladder_step(P: PlatPresentation, i: int, c: CurveDiagram) -> dict:
    """Bisection count grows by one tao or gains an eyelet when a curve carried in plane ``i+1`` moves to ``i``."""
    upper = build_plat_track(P, i + 1)
    lower = build_plat_track(P, i)
    before = is_almost_carried(c, upper)
    if before.status not in (CARRIED, ALMOST_CARRIED):
        return {"ok": None, "status": before.status}
    after = is_almost_carried(move(P, c, i + 1, i), lower)
    t = before.taos_bisected
    carried = after.status in (CARRIED, ALMOST_CARRIED)
    limit = len(lower.taos)
    grew = after.taos_bisected >= min(t + 1, limit) or (after.taos_bisected >= t and after.eyelet_credit)
    if t >= limit:
        # every tao of the lower track is already bisected; nothing is left to gain
        grew = after.taos_bisected >= limit
    return {"ok": carried and grew and before.bisects, "t": t, "after_bisected": after.taos_bisected,
            "after_eyelets": after.eyelets_covered, "after_eyelets_wrapped": after.eyelets_wrapped,
            "after_status": after.status,
            "saturated": t + 1 > limit}


def audit_lower_bound(P: PlatPresentation, budget: int = 20, seed: int = 0,
                      disk_bound: int | None = None) -> AuditTranscript:
    """Run every lemma of the lower-bound chain on concrete instances of ``P``."""
    if not is_highly_twisted(P):
        raise PlatError("the lower-bound audit needs a highly twisted plat")
    if P.m < 3:
        raise PlatError("the lower-bound audit needs m >= 3")
    rng = random.Random(seed)
    tr = AuditTranscript(seed, budget)
    m, n, M = P.m, P.n, P.strand_count
    bound = disk_bound or DEFAULT_DISK_BOUND.get(M, 6)

    for i in range(1, n):
        width = m - 1 if (i + 1) % 2 else m
        for j in range(1, width + 1):
            res = check_next_row_loop(P, i, j)
            tr.record("next-row-loop", f"row {i}, loop ({i + 1},{j})", res.pop("ok"), **res)
        res = check_loops_fill_track(P, i)
        tr.record("loops-fill-track", f"row {i}", res.pop("ok"), **res)

    for i in range(1, n):
        T = build_plat_track(P, i)
        for s in range(budget):
            c = random_carried_curve(T, rng)
            if c is None:
                continue
            rep = is_almost_carried(c, T)
            tr.record("carried-bisects", f"row {i}, sample {s}, word {list(c.word)}", rep.bisects,
                      bisected=rep.taos_bisected, loops=rep.loops_covered)
            if i >= 2 and len(c.word) <= 60:
                res = check_ladder_step(P, i - 1, c)
                if res["ok"] is not None:
                    tr.record("ladder-step", f"row {i} to {i - 1}, word {list(c.word)}", res.pop("ok"), **res)

    if n >= 2:
        disks = _disk_curves(M, bound, upper_cap_pairs(M, n))
        T = build_plat_track(P, n - 1)
        for c in disks:
            worst = max((a.tao_crossings for k in range(1, len(T.taos) + 1)
                         for a in classify_tao_arcs(c, T, k)), default=0)
            pos = _transverse(move(P, c, n, n - 1), T)
            tr.record("top-disk-covers", f"disk {list(c.word)}", worst <= 2 and pos.taos_covered >= 1,
                      tao_arc_crossings=worst, taos_covered=pos.taos_covered, cusp_ends=pos.cusp_ends)
        if n >= 2 * (m - 2):
            for c in disks:
                for k in range(2, 2 * (m - 2) + 1):
                    if n - k < 1:
                        break
                    img = move(P, c, n, n - k)
                    if len(img.word) > BOTTOM_WORD_LIMIT:
                        break
                    pos = _transverse(img, build_plat_track(P, n - k))
                    weak = pos.taos_covered >= k / 2 or (pos.taos_covered >= k / 2 - 1 and pos.eyelets_covered)
                    strong = pos.taos_covered >= (k + 1) / 2
                    tr.record("disk-ladder", f"disk {list(c.word)}, k={k}", bool(weak), taos_covered=pos.taos_covered,
                              eyelets=pos.eyelets_covered, stated_bound_met=strong, cusp_ends=pos.cusp_ends)
        _audit_disk_chain(P, tr, disks)

        lower_disks = _disk_curves(M, bound, lower_cap_pairs(M))
        T1 = build_plat_track(P, 1)
        for c in lower_disks:
            rep = is_almost_carried(c, T1)
            tr.record("bottom-disk-uncarried", f"lower disk {list(c.word)}", rep.status not in (CARRIED, ALMOST_CARRIED),
                      status=rep.status)
    return tr


def _transverse(c: CurveDiagram, T):
    """Transverse position with arcs ending at cusps, falling back to looser ends when that covers more."""
    strict = make_transverse(c, T)
    loose = make_transverse(c, T, cusp_ends=False)
    if (loose.taos_covered, loose.eyelets_covered) > (strict.taos_covered, strict.eyelets_covered):
        return loose
    return strict


def _chain_row(m: int, n: int, r: int) -> int:
    return n - 2 * r * (m - 2) + (1 if n % 2 == 0 else 0)


def _audit_disk_chain(P: PlatPresentation, tr: AuditTranscript, disks):
    m, n = P.m, P.n
    t = _chain_row(m, n, 1)
    if t < 1:
        return
    T = build_plat_track(P, t)
    for c in disks:
        img = move(P, c, n, t)
        if len(img.word) > BOTTOM_WORD_LIMIT:
            continue
        rep = is_almost_carried(img, T)
        # every enumerated disk is logged, but only the path candidates below gate the audit
        tr.record("disk-chain", f"r=1, disk {list(c.word)}, t={t}", rep.status in (CARRIED, ALMOST_CARRIED),
                  gating=False, t=t, status=rep.status)
    # the inductive chain along the certificate path, read from the top
    _, verts = path_vertices(P)
    verts = verts[::-1]
    r = 1
    while _chain_row(m, n, r) >= 1:
        t = _chain_row(m, n, r)
        T = build_plat_track(P, t)
        for s, v in enumerate(verts[:r]):
            img = move(P, v.curve, v.frame, t)
            if len(img.word) > BOTTOM_WORD_LIMIT:
                continue
            rep = is_almost_carried(img, T)
            tr.record("disk-chain", f"r={r}, path vertex {v.label} (distance {s} from the top), t={t}",
                      rep.status in (CARRIED, ALMOST_CARRIED), t=t, status=rep.status)
        r += 1
