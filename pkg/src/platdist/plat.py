"""Plat presentations: parsing, validation, braid words and the distance formula.

A ``2m``-plat of height ``n`` has ``n - 1`` rows of twist boxes.  Odd rows
hold ``m - 1`` boxes twisting the strand pairs ``(2j, 2j+1)``; even rows hold
``m`` boxes twisting ``(2j-1, 2j)``.  A positive coefficient is a run of
positive Artin generators (right-handed half twists).
"""

from __future__ import annotations

import json
import math
import re
from dataclasses import dataclass
from typing import Iterable


class PlatError(ValueError):
    """Malformed plat file or invalid presentation."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


def row_width(m: int, i: int) -> int:
    """Number of twist boxes in row ``i`` of a ``2m``-plat."""
    return m - 1 if i % 2 == 1 else m


def generator_index(i: int, j: int) -> int:
    """Artin generator twisted by box ``(i, j)``: ``2j`` on odd rows, ``2j-1`` on even rows."""
    return 2 * j if i % 2 == 1 else 2 * j - 1


@dataclass(frozen=True)
class BraidWord:
    strand_count: int
    letters: tuple[int, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "letters", tuple(int(x) for x in self.letters))
        for x in self.letters:
            if x == 0 or abs(x) >= self.strand_count:
                raise ValueError(f"generator {x} out of range for {self.strand_count} strands")

    def __len__(self):
        return len(self.letters)

    def __iter__(self):
        return iter(self.letters)

    def __add__(self, other: "BraidWord") -> "BraidWord":
        if other.strand_count != self.strand_count:
            raise ValueError("strand count mismatch")
        return BraidWord(self.strand_count, self.letters + other.letters)

    def inverse(self) -> "BraidWord":
        return BraidWord(self.strand_count, tuple(-x for x in reversed(self.letters)))

    def free_reduce(self) -> "BraidWord":
        out: list[int] = []
        for x in self.letters:
            if out and out[-1] == -x:
                out.pop()
            else:
                out.append(x)
        return BraidWord(self.strand_count, tuple(out))

    def __str__(self):
        if not self.letters:
            return "1"
        parts = []
        run, count = self.letters[0], 0
        for x in self.letters + (0,):
            if x == run:
                count += 1
                continue
            k = abs(run)
            power = count if run > 0 else -count
            parts.append(f"s{k}" if power == 1 else f"s{k}^{power}")
            run, count = x, 1
        return " ".join(parts)


@dataclass(frozen=True)
class PlatPresentation:
    m: int
    n: int
    rows: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        object.__setattr__(self, "rows", tuple(tuple(int(a) for a in r) for r in self.rows))
        if self.m < 2:
            raise PlatError(f"width m={self.m} must be at least 2")
        if self.n < 1:
            raise PlatError(f"height n={self.n} must be at least 1")
        if len(self.rows) != self.n - 1:
            raise PlatError(f"expected {self.n - 1} rows, got {len(self.rows)}")
        for i, row in enumerate(self.rows, start=1):
            want = row_width(self.m, i)
            if len(row) != want:
                raise PlatError(f"row {i} needs {want} entries, got {len(row)}")

    @property
    def strand_count(self) -> int:
        return 2 * self.m

    def row(self, i: int) -> tuple[int, ...]:
        if not 1 <= i <= self.n - 1:
            raise IndexError(f"row {i} out of range 1..{self.n - 1}")
        return self.rows[i - 1]

    def coefficient(self, i: int, j: int) -> int:
        return self.row(i)[j - 1]

    def to_json(self) -> dict:
        return {"m": self.m, "n": self.n, "rows": [list(r) for r in self.rows]}

    @classmethod
    def from_json(cls, data: dict) -> "PlatPresentation":
        return cls(int(data["m"]), int(data["n"]), tuple(tuple(r) for r in data["rows"]))


_HEADER = re.compile(r"^plat\s+m\s*=\s*(-?\d+)\s+n\s*=\s*(-?\d+)$")
_ROW = re.compile(r"^row\s+(\d+)\s*:(.*)$")


def parse_plat(text: str) -> PlatPresentation:
    lines = [(k, ln.strip()) for k, ln in enumerate(text.splitlines(), start=1)]
    lines = [(k, ln) for k, ln in lines if ln and not ln.startswith("#")]
    if not lines:
        raise PlatError("empty plat file", 1)
    k0, header = lines[0]
    mt = _HEADER.match(header)
    if not mt:
        raise PlatError(f"malformed header {header!r}", k0)
    m, n = int(mt.group(1)), int(mt.group(2))
    if m < 2:
        raise PlatError(f"width m={m} must be at least 2", k0)
    if n < 1:
        raise PlatError(f"height n={n} must be at least 1", k0)
    rows: dict[int, tuple[int, ...]] = {}
    for k, ln in lines[1:]:
        mr = _ROW.match(ln)
        if not mr:
            raise PlatError(f"malformed row line {ln!r}", k)
        i = int(mr.group(1))
        if not 1 <= i <= n - 1:
            raise PlatError(f"row index {i} out of range 1..{n - 1}", k)
        if i in rows:
            raise PlatError(f"duplicate row {i}", k)
        try:
            coeffs = tuple(int(tok) for tok in mr.group(2).split())
        except ValueError:
            raise PlatError(f"non-integer coefficient in row {i}", k) from None
        want = row_width(m, i)
        if len(coeffs) != want:
            raise PlatError(f"row {i} needs {'m-1' if i % 2 else 'm'}={want} entries, got {len(coeffs)}", k)
        rows[i] = coeffs
    missing = [i for i in range(1, n) if i not in rows]
    if missing:
        raise PlatError(f"missing row {missing[0]}", lines[-1][0])
    return PlatPresentation(m, n, tuple(rows[i] for i in range(1, n)))


def format_plat(P: PlatPresentation) -> str:
    out = [f"plat m={P.m} n={P.n}"]
    out += [f"row {i}: " + " ".join(str(a) for a in row) for i, row in enumerate(P.rows, start=1)]
    return "\n".join(out) + "\n"


def plat_from_json(text: str) -> PlatPresentation:
    return PlatPresentation.from_json(json.loads(text))


def is_row_highly_twisted(P: PlatPresentation, i: int) -> bool:
    return all(abs(a) >= 3 for a in P.row(i))


def is_highly_twisted(P: PlatPresentation) -> bool:
    return all(abs(a) >= 3 for row in P.rows for a in row)


def _check_theorem_range(P: PlatPresentation):
    if P.m < 3:
        raise PlatError(f"distance formula needs m >= 3 (got m={P.m})")
    if not is_highly_twisted(P):
        raise PlatError("plat is not highly twisted; only the upper bound is certified")


def formula_value(m: int, n: int) -> int:
    return math.ceil(n / (2 * (m - 2)))


def bridge_distance_formula(P: PlatPresentation) -> int:
    _check_theorem_range(P)
    return formula_value(P.m, P.n)


def uniqueness_threshold(P: PlatPresentation) -> bool:
    """True when ``n > 4m(m-2)``, which forces distance above ``2m``."""
    _check_theorem_range(P)
    return P.n > 4 * P.m * (P.m - 2)


def below_interesting_range(P: PlatPresentation) -> bool:
    return P.m >= 3 and P.n < 2 * (P.m - 2)


def row_letters(P: PlatPresentation, i: int) -> tuple[int, ...]:
    out: list[int] = []
    for j, a in enumerate(P.row(i), start=1):
        k = generator_index(i, j)
        out += [k if a > 0 else -k] * abs(a)
    return tuple(out)


def plat_to_braid(P: PlatPresentation) -> BraidWord:
    letters: list[int] = []
    for i in range(1, P.n):
        letters += row_letters(P, i)
    return BraidWord(P.strand_count, tuple(letters))


def projection_word(P: PlatPresentation, from_row: int, to_row: int) -> BraidWord:
    """Word carrying curves in plane ``from_row`` down to plane ``to_row``.

    Letters are applied left to right; the rows crossed are undone top-down.
    """
    if not 1 <= to_row <= from_row <= P.n:
        raise IndexError(f"need 1 <= to_row <= from_row <= n, got {from_row} -> {to_row}")
    letters: list[int] = []
    for i in range(from_row - 1, to_row - 1, -1):
        letters += [-x for x in reversed(row_letters(P, i))]
    return BraidWord(P.strand_count, tuple(letters))


def random_plat(m: int, n: int, rng, magnitudes: Iterable[int] = (3, 4)) -> PlatPresentation:
    mags = list(magnitudes)
    rows = []
    for i in range(1, n):
        rows.append(tuple(rng.choice(mags) * rng.choice((-1, 1)) for _ in range(row_width(m, i))))
    return PlatPresentation(m, n, tuple(rows))


def uniform_plat(m: int, n: int, a: int = 3) -> PlatPresentation:
    return PlatPresentation(m, n, tuple(tuple([a] * row_width(m, i)) for i in range(1, n)))
