"""Strict intervals over finite integer domains and the 12 Allen relations.

Intervals are pairs ``[start, end]`` with ``start < end``; point intervals do
not exist. Points are signed so that domains extended to the left of zero
(``-2, -1, ...``) are representable.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator, Sequence

import numpy as np

__all__ = [
    "Domain",
    "Interval",
    "Relation",
    "RELATIONS",
    "relates",
    "transpose",
    "enumerate_intervals",
    "related_intervals",
    "interval_rank",
    "relation_matrices",
]


@dataclass(frozen=True, order=True)
class Interval:
    start: int
    end: int

    def __post_init__(self) -> None:
        if self.start >= self.end:
            raise ValueError(f"non-strict interval [{self.start},{self.end}]")

    def __iter__(self) -> Iterator[int]:
        yield self.start
        yield self.end

    def __str__(self) -> str:
        return f"[{self.start},{self.end}]"

    def __repr__(self) -> str:
        return f"Interval({self.start}, {self.end})"

    def to_list(self) -> list[int]:
        return [self.start, self.end]

    @classmethod
    def from_list(cls, pair: Sequence[int]) -> "Interval":
        if len(pair) != 2:
            raise ValueError(f"interval needs exactly two endpoints, got {list(pair)!r}")
        start, end = pair
        if not (isinstance(start, int) and isinstance(end, int)) or isinstance(start, bool) or isinstance(end, bool):
            raise ValueError(f"interval endpoints must be integers, got {list(pair)!r}")
        return cls(start, end)


@dataclass(frozen=True)
class Domain:
    """The points ``lo, lo+1, ..., hi`` (both inclusive)."""

    lo: int
    hi: int

    def __post_init__(self) -> None:
        if self.hi < self.lo + 1:
            raise ValueError(f"domain {{{self.lo}..{self.hi}}} has fewer than two points")

    @property
    def size(self) -> int:
        return self.hi - self.lo + 1

    @property
    def n_intervals(self) -> int:
        m = self.size
        return m * (m - 1) // 2

    def contains(self, i: Interval) -> bool:
        return self.lo <= i.start and i.end <= self.hi

    def extended(self, points: int = 2) -> "Domain":
        return Domain(self.lo - points, self.hi + points)

    def __str__(self) -> str:
        return f"{{{self.lo}..{self.hi}}}"


class Relation(enum.Enum):
    """Allen relations, in canonical order (direct six, then their inverses)."""

    A = "A"
    L = "L"
    B = "B"
    E = "E"
    D = "D"
    O = "O"
    Ai = "Ai"
    Li = "Li"
    Bi = "Bi"
    Ei = "Ei"
    Di = "Di"
    Oi = "Oi"

    @property
    def index(self) -> int:
        return _INDEX[self]

    @property
    def is_inverse(self) -> bool:
        return self.value.endswith("i")

    def __str__(self) -> str:
        return self.value

    @classmethod
    def parse(cls, tag: str) -> "Relation":
        try:
            return cls(tag)
        except ValueError:
            raise ValueError(f"unknown relation tag {tag!r}") from None


RELATIONS: tuple[Relation, ...] = tuple(Relation)
_INDEX = {r: k for k, r in enumerate(RELATIONS)}
_TRANSPOSE = {
    **{Relation(t): Relation(t + "i") for t in "ALBEDO"},
    **{Relation(t + "i"): Relation(t) for t in "ALBEDO"},
}


def transpose(r: Relation) -> Relation:
    return _TRANSPOSE[r]


def _direct(x: int, y: int, x2: int, y2: int, tag: str) -> bool:
    if tag == "A":
        return y == x2
    if tag == "L":
        return y < x2
    if tag == "B":
        return x == x2 and y2 < y
    if tag == "E":
        return y == y2 and x < x2
    if tag == "D":
        return x < x2 and y2 < y
    if tag == "O":
        return x < x2 < y < y2
    raise AssertionError(tag)


def relates(i: Interval, j: Interval, r: Relation) -> bool:
    """True iff ``i R_r j``; inverse relations swap the arguments."""
    if r.is_inverse:
        return _direct(j.start, j.end, i.start, i.end, r.value[0])
    return _direct(i.start, i.end, j.start, j.end, r.value)


def enumerate_intervals(d: Domain) -> list[Interval]:
    return list(_intervals(d))


@lru_cache(maxsize=64)
def _intervals(d: Domain) -> tuple[Interval, ...]:
    return tuple(Interval(x, y) for x in range(d.lo, d.hi + 1) for y in range(x + 1, d.hi + 1))


def interval_rank(i: Interval, d: Domain) -> int:
    """Position of ``i`` in ``enumerate_intervals(d)``."""
    if not d.contains(i):
        raise ValueError(f"{i} outside domain {d}")
    m = d.size
    a = i.start - d.lo
    # intervals starting before a: sum_{s<a} (m-1-s)
    return a * (m - 1) - a * (a - 1) // 2 + (i.end - i.start - 1)


def related_intervals(i: Interval, r: Relation, d: Domain) -> list[Interval]:
    return [j for j in _intervals(d) if relates(i, j, r)]


@lru_cache(maxsize=64)
def relation_matrices(d: Domain) -> np.ndarray:
    """Boolean tensor ``R[k, a, b] = relates(I[a], I[b], RELATIONS[k])``.

    Rows and columns follow ``enumerate_intervals(d)``. The array is marked
    read-only since it is shared through the cache.
    """
    ivs = _intervals(d)
    xs = np.array([i.start for i in ivs])
    ys = np.array([i.end for i in ivs])
    x, y = xs[:, None], ys[:, None]
    x2, y2 = xs[None, :], ys[None, :]
    direct = {
        "A": y == x2,
        "L": y < x2,
        "B": (x == x2) & (y2 < y),
        "E": (y == y2) & (x < x2),
        "D": (x < x2) & (y2 < y),
        "O": (x < x2) & (x2 < y) & (y < y2),
    }
    out = np.empty((len(RELATIONS), len(ivs), len(ivs)), dtype=bool)
    for r in RELATIONS:
        m = direct[r.value[0]]
        out[r.index] = m.T if r.is_inverse else m
    out.setflags(write=False)
    return out
