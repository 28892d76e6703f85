"""Simple closed curves on the 2m-punctured sphere, encoded against the axis.

The punctures sit at ``x = 1..2m`` on a horizontal axis.  The axis together
with the point at infinity is a circle through the punctures; it cuts the
sphere into an upper and a lower disk and is itself cut into ``2m`` edges.
Gap ``g`` (``1 <= g < 2m``) is the edge between punctures ``g`` and ``g+1``;
gap ``2m`` is the edge through infinity (the input value ``0`` is accepted as
an alias).

A curve in minimal position with the axis is recorded by its cyclic
sequence of gaps in traversal order, with the convention that the arc
leaving position ``t`` runs through the upper disk when ``t`` is even and
through the lower disk when ``t`` is odd.  Cancelling adjacent equal letters
removes bigons with the axis; the cancelled word is unique up to even
rotation and reversal, and the lexicographically least representative is
the canonical form stored in :class:`CurveDiagram`.

The axis-ordered view asked for by the JSON format (crossings sorted along
the axis plus upper/lower non-crossing matchings) is derived on demand.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .plat import BraidWord, PlatPresentation, projection_word

UP, DOWN = 0, 1


# -- cyclic gap words --------------------------------------------------------

def reduce_word(word: Sequence[int]) -> tuple[int, ...]:
    """Cancel bigons (adjacent equal gaps, cyclically) preserving face parity."""
    out: list[int] = []
    for g in word:
        if out and out[-1] == g:
            out.pop()
        else:
            out.append(g)
    lo, hi = 0, len(out)
    while hi - lo >= 2 and out[lo] == out[hi - 1]:
        lo += 1
        hi -= 1
    core = out[lo:hi]
    if lo % 2 == 1 and core:
        # stripping an odd number of wrap-around pairs swaps the face labels
        core = core[1:] + core[:1]
    return tuple(core)


def canonical_word(word: Sequence[int]) -> tuple[int, ...]:
    w = tuple(word)
    n = len(w)
    if n == 0:
        return w
    best = None
    for cand in (w, tuple(reversed(w))):
        for s in range(0, n, 2):
            r = cand[s:] + cand[:s]
            if best is None or r < best:
                best = r
    return best


def _partner(i: int, face: int, n: int) -> int:
    if (i % 2 == 0) == (face == UP):
        return (i + 1) % n
    return (i - 1) % n


def _rank(x: int, e: int, M: int) -> int:
    return (x - e) % M


def _left_of(w: Sequence[int], M: int, i: int, j: int) -> bool:
    """Whether occurrence ``i`` lies left of occurrence ``j`` on their shared gap."""
    n = len(w)
    face = UP
    for _ in range(n + 1):
        pi, pj = _partner(i, face, n), _partner(j, face, n)
        gi, gj = w[pi], w[pj]
        e = w[i]
        if gi != gj:
            return _rank(gi, e, M) > _rank(gj, e, M)
        # parallel arcs reverse their order at the far gap
        i, j = pj, pi
        face ^= 1
    raise ValueError("word is periodic; not a single simple curve")


# -- free group helpers ------------------------------------------------------

def free_reduce(word: Iterable[int]) -> tuple[int, ...]:
    out: list[int] = []
    for x in word:
        if out and out[-1] == -x:
            out.pop()
        else:
            out.append(x)
    return tuple(out)


def cyclic_reduce(word: Iterable[int]) -> tuple[int, ...]:
    w = list(free_reduce(word))
    lo, hi = 0, len(w)
    while hi - lo >= 2 and w[lo] == -w[hi - 1]:
        lo += 1
        hi -= 1
    return tuple(w[lo:hi])


def _cyclic_class(word: tuple[int, ...]) -> tuple[int, ...]:
    """Least rotation of the word or of its inverse: a conjugacy-and-inversion invariant."""
    if not word:
        return word
    inv = tuple(-x for x in reversed(word))
    return min(c[s:] + c[:s] for c in (word, inv) for s in range(len(word)))


@dataclass(frozen=True)
class PunctureWord:
    """Cyclic word in the puncture loops ``x_1..x_2m`` (letter ``k`` or ``-k``).

    ``x_k`` is a loop crossing up through gap ``k-1`` and down through gap
    ``k`` (clockwise around puncture ``k`` seen from above), based in the lower
    disk.  Equality as classes uses the free basis ``z_1..z_{2m-1}`` obtained by
    collapsing the infinity gap, where ``x_k = z_{k-1} z_k^{-1}``.
    """

    puncture_count: int
    letters: tuple[int, ...]

    def free_basis(self) -> tuple[int, ...]:
        M = self.puncture_count
        out: list[int] = []
        for x in self.letters:
            k = abs(x)
            pair = []
            if k - 1 >= 1:
                pair.append(k - 1)
            if k % M != 0:
                pair.append(-k)
            if x < 0:
                pair = [-y for y in reversed(pair)]
            out += pair
        return cyclic_reduce(out)

    def class_key(self) -> tuple[int, ...]:
        return _cyclic_class(self.free_basis())

    def same_class(self, other: "PunctureWord") -> bool:
        return self.puncture_count == other.puncture_count and self.class_key() == other.class_key()

    def exponent_sums(self) -> tuple[int, ...]:
        sums = [0] * self.puncture_count
        for x in self.letters:
            sums[abs(x) - 1] += 1 if x > 0 else -1
        return tuple(sums)

    def substitute(self, images: dict[int, int]) -> tuple[int, ...]:
        """Image under ``x_k -> g^{+-1}``; ``images[k]`` is a signed generator."""
        out = []
        for x in self.letters:
            y = images[abs(x)]
            out.append(y if x > 0 else -y)
        return cyclic_reduce(out)

    def __str__(self):
        if not self.letters:
            return "1"
        return " ".join(f"x{x}" if x > 0 else f"x{-x}^-1" for x in self.letters)


# -- curve diagrams ----------------------------------------------------------

@dataclass(frozen=True)
class CurveDiagram:
    """Isotopy class of a simple closed curve on the ``puncture_count``-punctured sphere.

    Construct with :meth:`from_word` or :meth:`from_matchings`; both
    canonicalize unless ``reduce=False`` is requested.
    """

    puncture_count: int
    word: tuple[int, ...]
    reduced: bool = True
    _cache: dict = field(default_factory=dict, compare=False, hash=False, repr=False)

    @classmethod
    def from_word(cls, puncture_count: int, word: Iterable[int], reduce: bool = True) -> "CurveDiagram":
        M = puncture_count
        w = []
        for g in word:
            g = int(g)
            if g == 0:
                g = M
            if not 1 <= g <= M:
                raise ValueError(f"gap {g} out of range 0..{M}")
            w.append(g)
        if len(w) % 2:
            raise ValueError("a closed curve crosses the axis an even number of times")
        if reduce:
            return cls(M, canonical_word(reduce_word(w)), True)
        rw = reduce_word(w)
        return cls(M, tuple(w), len(rw) == len(w))

    @classmethod
    def from_matchings(cls, puncture_count: int, gaps: Sequence[int], upper: Iterable[Sequence[int]],
                       lower: Iterable[Sequence[int]], reduce: bool = True) -> "CurveDiagram":
        n = len(gaps)
        up = _matching(n, upper, "upper")
        down = _matching(n, lower, "lower")
        for name, mt in (("upper", up), ("lower", down)):
            _check_noncrossing(mt, name)
        if n == 0:
            return cls(puncture_count, (), True)
        word = []
        p = 0
        for _ in range(n // 2):
            q = up[p]
            word += [gaps[p] or puncture_count, gaps[q] or puncture_count]
            p = down[q]
            if p == 0:
                break
        if len(word) != n:
            raise ValueError("matchings close up into more than one curve")
        return cls.from_word(puncture_count, word, reduce=reduce)

    # -- basic data --

    @property
    def m(self) -> int:
        return self.puncture_count // 2

    @property
    def crossings(self) -> int:
        return len(self.word)

    def __len__(self):
        return len(self.word)

    def reduce(self) -> "CurveDiagram":
        if self.reduced and canonical_word(self.word) == self.word:
            return self
        return CurveDiagram.from_word(self.puncture_count, self.word)

    def bigons(self) -> list[int]:
        """Positions ``t`` with ``word[t] == word[t+1]`` (cyclically)."""
        n = len(self.word)
        return [t for t in range(n) if n >= 2 and self.word[t] == self.word[(t + 1) % n]]

    def remove_bigon(self, t: int) -> "CurveDiagram":
        w = list(self.word)
        n = len(w)
        if n < 2 or w[t] != w[(t + 1) % n]:
            raise ValueError(f"no bigon at position {t}")
        if t + 1 < n:
            nw = w[:t] + w[t + 2:]
        else:
            # wrap-around pair: drop both ends, realign faces
            core = w[1:n - 1]
            nw = core[1:] + core[:1] if core else []
        return CurveDiagram(self.puncture_count, tuple(nw), len(reduce_word(nw)) == len(nw))

    # -- axis-ordered view --

    def axis_order(self) -> list[int]:
        """Occurrence indices of ``word`` sorted by position along the axis."""
        if "order" not in self._cache:
            w, M = self.word, self.puncture_count
            if not self.reduced:
                raise ValueError("axis order is defined for reduced diagrams")

            def cmp(i, j):
                if i == j:
                    return 0
                return -1 if _left_of(w, M, i, j) else 1

            by_gap: dict[int, list[int]] = {}
            for t, g in enumerate(w):
                by_gap.setdefault(g, []).append(t)
            order: list[int] = []
            for g in sorted(by_gap):
                order += sorted(by_gap[g], key=functools.cmp_to_key(cmp))
            self._cache["order"] = order
        return self._cache["order"]

    def matchings(self) -> tuple[list[int], list[tuple[int, int]], list[tuple[int, int]]]:
        """``(gaps, upper, lower)`` in axis order; pairs are index pairs into ``gaps``."""
        order = self.axis_order()
        pos = {t: k for k, t in enumerate(order)}
        n = len(self.word)
        gaps = [self.word[t] for t in order]
        upper, lower = set(), set()
        for t in range(n):
            a, b = pos[t], pos[_partner(t, UP, n)]
            upper.add((min(a, b), max(a, b)))
            a, b = pos[t], pos[_partner(t, DOWN, n)]
            lower.add((min(a, b), max(a, b)))
        return gaps, sorted(upper), sorted(lower)

    def is_simple(self) -> bool:
        """Whether the word is realized by an embedded curve."""
        try:
            gaps, upper, lower = self.matchings()
        except ValueError:
            return False
        for mt in (upper, lower):
            try:
                _check_noncrossing(_matching(len(gaps), mt, ""), "")
            except ValueError:
                return False
        return True

    # -- topology --

    def inside(self) -> frozenset[int]:
        """Punctures on the side of the curve away from the point at infinity."""
        M = self.puncture_count
        counts = [0] * (M + 1)
        for g in self.word:
            counts[g] += 1
        out, tail = [], 0
        for k in range(M, 0, -1):
            tail += counts[k]
            if tail % 2:
                out.append(k)
        return frozenset(out)

    def is_essential(self) -> bool:
        k = len(self.inside())
        return self.crossings > 0 and 2 <= k <= self.puncture_count - 2

    def to_json(self) -> dict:
        """Axis diagram with crossings beyond the ends split between gap 0 and gap ``M``.

        The point at infinity is placed on the side of the curve holding more
        punctures; on a tie it stays right of every crossing.
        """
        gaps, upper, lower = self.matchings()
        n, M = len(gaps), self.puncture_count
        block = sum(1 for g in gaps if g == M)
        shift = self._left_ray_count(gaps, block)
        if shift:
            gaps = [0] * shift + gaps[:n - shift]

            def moved(pairs):
                out = [tuple(sorted(((a + shift) % n, (b + shift) % n))) for a, b in pairs]
                return sorted(out)
            upper, lower = moved(upper), moved(lower)
        return {"punctures": M, "gaps": gaps,
                "upper": [list(p) for p in upper], "lower": [list(p) for p in lower]}

    def _left_ray_count(self, gaps, block):
        M = self.puncture_count
        counts = [0] * (M + 1)
        for g in gaps:
            counts[g] += 1
        best = None
        for shift in range(block + 1):
            # crossings met walking right from puncture p until infinity
            right, with_inf = block - shift, 0
            for p in range(M, 0, -1):
                right += counts[p] if p < M else 0
                if right % 2 == 0:
                    with_inf += 1
            if best is None or with_inf > best[0]:
                best = (with_inf, shift)
        return best[1]

    @classmethod
    def from_json(cls, data: dict) -> "CurveDiagram":
        if "word" in data:
            return cls.from_word(int(data["punctures"]), data["word"])
        return cls.from_matchings(int(data["punctures"]), data["gaps"], data["upper"], data["lower"])

    def __str__(self):
        return f"Curve[{self.puncture_count}]({' '.join(map(str, self.word))})"


def _matching(n: int, pairs: Iterable[Sequence[int]], name: str) -> list[int]:
    mt = [-1] * n
    for a, b in pairs:
        a, b = int(a), int(b)
        if a == b or not (0 <= a < n and 0 <= b < n) or mt[a] != -1 or mt[b] != -1:
            raise ValueError(f"{name} matching is not a perfect matching")
        mt[a], mt[b] = b, a
    if -1 in mt:
        raise ValueError(f"{name} matching is not a perfect matching")
    return mt


def _check_noncrossing(mt: list[int], name: str):
    stack: list[int] = []
    for p, q in enumerate(mt):
        if q > p:
            stack.append(p)
        else:
            if not stack or stack[-1] != q:
                raise ValueError(f"{name} matching has crossing arcs")
            stack.pop()


# -- constructors ----------------------------------------------------------

def round_curve(puncture_count: int, lo: int, hi: int) -> CurveDiagram:
    """Round circle enclosing the consecutive punctures ``lo..hi``."""
    M = puncture_count
    if not 1 <= lo <= hi <= M:
        raise ValueError(f"bad puncture range {lo}..{hi}")
    return CurveDiagram.from_word(M, (lo - 1 if lo > 1 else M, hi))


def loop_pair(P: PlatPresentation, i: int, j: int) -> tuple[int, int]:
    """The two punctures enclosed by the canonical loop in plane ``i``, column ``j``."""
    m, n = P.m, P.n
    if i % 2 == 1:
        if not (1 <= i <= n and 1 <= j <= m - 1):
            raise IndexError(f"no canonical loop ({i}, {j})")
        return 2 * j, 2 * j + 1
    if not (0 <= i <= n and 1 <= j <= m):
        raise IndexError(f"no canonical loop ({i}, {j})")
    return 2 * j - 1, 2 * j


def canonical_loop(P: PlatPresentation, i: int, j: int) -> CurveDiagram:
    """The round loop at row plane ``i``, column ``j``, in that plane's own coordinates."""
    a, b = loop_pair(P, i, j)
    return round_curve(P.strand_count, a, b)


# -- braid action ----------------------------------------------------------

def _twist_raw(w: list[int], M: int, k: int, sign: int) -> list[int]:
    lo = k - 1 if k > 1 else M
    hi = k + 1
    fwd, bwd = (lo, k, hi), (hi, k, lo)
    if sign < 0:
        fwd, bwd = bwd, fwd
    out: list[int] = []
    for t, g in enumerate(w):
        if g != k:
            out.append(g)
        elif t % 2:
            out += fwd   # crossing from the upper disk down
        else:
            out += bwd
    return out


def apply_generator(c: CurveDiagram, k: int, sign: int = 1) -> CurveDiagram:
    """Image under the half twist exchanging punctures ``k`` and ``k+1``.

    ``sign=+1`` rotates the two punctures counter-clockwise (axis drawn
    horizontally, upper disk above).
    """
    M = c.puncture_count
    if not 1 <= k <= M - 1:
        raise ValueError(f"generator {k} out of range 1..{M - 1}")
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    return CurveDiagram.from_word(M, _twist_raw(list(c.word), M, k, sign))


def apply_braid(c: CurveDiagram, w: BraidWord | Sequence[int]) -> CurveDiagram:
    M = c.puncture_count
    letters = w.letters if isinstance(w, BraidWord) else tuple(w)
    if isinstance(w, BraidWord) and w.strand_count != M:
        raise ValueError(f"braid on {w.strand_count} strands applied to a {M}-punctured curve")
    word = list(c.word)
    for x in letters:
        if x == 0 or abs(x) >= M:
            raise ValueError(f"generator {x} out of range")
        word = list(reduce_word(_twist_raw(word, M, abs(x), 1 if x > 0 else -1)))
    return CurveDiagram.from_word(M, word)


# -- intersection numbers ---------------------------------------------------

def _between(x: int, a: int, b: int, M: int) -> bool:
    return x != a and (x - a) % M < (b - a) % M


def intersection_words(A: Sequence[int], B: Sequence[int], M: int) -> int:
    """Minimal intersection of two reduced curves given by gap words.

    Counts pairs of lifts to the universal cover that cross.  Two lifts
    crossing must share a maximal run of faces; the run starting face (in the
    direction of ``A``) identifies the pair uniquely.  The run is crossed iff
    the side-by-side order of the strands at its two ends disagrees.
    """
    na, nb = len(A), len(B)
    if na == 0 or nb == 0:
        return 0
    limit = na + nb
    total = 0
    for orient, Bw in ((1, tuple(B)), (-1, tuple(reversed(B)))):
        for ta in range(na):
            ea = A[ta]
            for tb in range(ta % 2, nb, 2):
                eb = Bw[tb]
                if ea == eb:
                    continue
                K = 0
                while K < limit and A[(ta + K + 1) % na] == Bw[(tb + K + 1) % nb]:
                    K += 1
                if K >= limit:
                    continue
                xa, xb = A[(ta + K + 1) % na], Bw[(tb + K + 1) % nb]
                if K == 0:
                    if orient < 0 or ea == xb or eb == xa:
                        continue
                    if _between(eb, ea, xa, M) != _between(xb, ea, xa, M):
                        total += 1
                    continue
                c1 = A[(ta + 1) % na]
                cK = A[(ta + K) % na]
                left_start = _rank(ea, c1, M) > _rank(eb, c1, M)
                left_end = _rank(xa, cK, M) > _rank(xb, cK, M)
                if (K - 1) % 2:
                    left_start = not left_start
                if left_start != left_end:
                    total += 1
    return total


def geometric_intersection(c1: CurveDiagram, c2: CurveDiagram) -> int:
    if c1.puncture_count != c2.puncture_count:
        raise ValueError("puncture count mismatch")
    if c1.word == c2.word:
        return 0
    return intersection_words(c1.reduce().word, c2.reduce().word, c1.puncture_count)


# -- puncture words and disk sets ---------------------------------------------

def puncture_word(c: CurveDiagram) -> PunctureWord:
    M = c.puncture_count
    w = c.reduce().word
    letters: list[int] = []
    for t in range(0, len(w), 2):
        a, b = w[t] % M, w[t + 1] % M
        if a < b:
            letters += range(a + 1, b + 1)
        else:
            letters += [-k for k in range(a, b, -1)]
    return PunctureWord(M, cyclic_reduce(letters))


def cap_images(M: int, pairs: Iterable[tuple[int, int]]) -> dict[int, int]:
    images = {}
    for j, (a, b) in enumerate(pairs, start=1):
        images[a], images[b] = j, -j
    if sorted(images) != list(range(1, M + 1)):
        raise ValueError("cap pairs must partition the punctures")
    return images


def lower_cap_pairs(M: int) -> list[tuple[int, int]]:
    return [(2 * j - 1, 2 * j) for j in range(1, M // 2 + 1)]


def upper_cap_pairs(M: int, n: int) -> list[tuple[int, int]]:
    """Cap arcs above the top plane: adjacent pairs for even ``n``, shifted pairs plus the big arc for odd ``n``."""
    if n % 2 == 0:
        return lower_cap_pairs(M)
    return [(1, M)] + [(2 * j - 2, 2 * j - 1) for j in range(2, M // 2 + 1)]


def bounds_disk(c: CurveDiagram, pairs: Iterable[tuple[int, int]]) -> bool:
    """Whether the curve is null-homotopic, hence bounds a disk, in the trivial tangle capped by ``pairs``."""
    if not c.is_essential():
        raise ValueError("disk-set membership is only defined for essential curves")
    return puncture_word(c).substitute(cap_images(c.puncture_count, pairs)) == ()


def bounds_below(c: CurveDiagram) -> bool:
    return bounds_disk(c, lower_cap_pairs(c.puncture_count))


def to_top_plane(c: CurveDiagram, P: PlatPresentation) -> CurveDiagram:
    return apply_braid(c, projection_word(P, P.n, 1).inverse())


def bounds_above(c: CurveDiagram, P: PlatPresentation) -> bool:
    if c.puncture_count != P.strand_count:
        raise ValueError("puncture count mismatch")
    if not c.is_essential():
        raise ValueError("disk-set membership is only defined for essential curves")
    return bounds_disk(to_top_plane(c, P), upper_cap_pairs(P.strand_count, P.n))


def transport(P: PlatPresentation, c: CurveDiagram, from_row: int, to_row: int = 1) -> CurveDiagram:
    """Push a curve in plane ``from_row`` down to plane ``to_row`` through the braid."""
    return apply_braid(c, projection_word(P, from_row, to_row))
