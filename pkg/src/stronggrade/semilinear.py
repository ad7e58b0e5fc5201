"""Eventually periodic subsets of N and grid-periodic families over N^k."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from math import lcm
from typing import Iterable

from .errors import DomainError
from .graph import Graph


@dataclass(frozen=True)
class SemilinearSet:
    """A subset S of N stored by its canonical table.

    ``bits[n]`` records membership for ``n < preperiod + period``; for
    ``n >= preperiod`` membership depends only on ``(n - preperiod) % period``.
    The period is whatever produced the set, not necessarily minimal, so
    equality goes through a common refinement.
    """

    preperiod: int
    period: int
    bits: tuple

    def __post_init__(self):
        if self.period < 1 or self.preperiod < 0:
            raise DomainError("need period >= 1 and preperiod >= 0")
        if len(self.bits) != self.preperiod + self.period:
            raise DomainError("table length must equal preperiod + period")
        object.__setattr__(self, "bits", tuple(bool(b) for b in self.bits))

    @classmethod
    def from_parts(cls, sporadic: Iterable[int] = (), progressions: Iterable[tuple] = ()):
        sporadic = set(sporadic)
        progressions = set(progressions)
        if any(n < 0 for n in sporadic):
            raise DomainError("naturals only")
        for a, p in progressions:
            if a < 0 or p < 1:
                raise DomainError(f"bad progression ({a}, {p})")
        n0 = max([n + 1 for n in sporadic] + [a for a, _ in progressions] + [0])
        per = lcm(*[p for _, p in progressions]) if progressions else 1
        bits = []
        for n in range(n0 + per):
            bits.append(n in sporadic or any(n >= a and (n - a) % p == 0 for a, p in progressions))
        return cls(n0, per, tuple(bits))

    @classmethod
    def naturals(cls):
        return cls(0, 1, (True,))

    @classmethod
    def empty(cls):
        return cls(0, 1, (False,))

    def __contains__(self, n: int) -> bool:
        return self.membership(n)

    def membership(self, n: int) -> bool:
        if n < 0:
            return False
        if n >= self.preperiod:
            n = self.preperiod + (n - self.preperiod) % self.period
        return self.bits[n]

    def refine(self, preperiod: int, period: int) -> "SemilinearSet":
        """Same set, re-tabulated with a larger preperiod and a multiple period."""
        if preperiod < self.preperiod or period % self.period:
            raise DomainError("refinement must enlarge the preperiod and multiply the period")
        return SemilinearSet(preperiod, period,
                             tuple(self.membership(n) for n in range(preperiod + period)))

    def _common(self, other: "SemilinearSet"):
        n0 = max(self.preperiod, other.preperiod)
        per = lcm(self.period, other.period)
        return self.refine(n0, per), other.refine(n0, per)

    def union(self, other: "SemilinearSet") -> "SemilinearSet":
        a, b = self._common(other)
        return SemilinearSet(a.preperiod, a.period, tuple(x or y for x, y in zip(a.bits, b.bits)))

    __or__ = union

    def intersection(self, other: "SemilinearSet") -> "SemilinearSet":
        a, b = self._common(other)
        return SemilinearSet(a.preperiod, a.period, tuple(x and y for x, y in zip(a.bits, b.bits)))

    __and__ = intersection

    def shift_by(self, c: int) -> "SemilinearSet":
        """``{n + c : n in S}``."""
        if c < 0:
            raise DomainError("shift must be nonnegative")
        return SemilinearSet(self.preperiod + c, self.period, (False,) * c + self.bits)

    def misses_infinitely_many(self) -> bool:
        return not all(self.bits[self.preperiod:])

    def minimized(self) -> "SemilinearSet":
        """Smallest period, then smallest preperiod, describing the same set."""
        tail = self.bits[self.preperiod:]
        per = next(q for q in range(1, self.period + 1)
                   if self.period % q == 0 and all(tail[i] == tail[i % q] for i in range(self.period)))
        n0 = self.preperiod
        while n0 > 0 and self.membership(n0 - 1) == self.membership(n0 - 1 + per):
            n0 -= 1
        return SemilinearSet(n0, per, tuple(self.membership(n) for n in range(n0 + per)))

    @property
    def sporadic(self) -> frozenset:
        return frozenset(n for n in range(self.preperiod) if self.bits[n])

    @property
    def progressions(self) -> frozenset:
        return frozenset((n, self.period) for n in range(self.preperiod, self.preperiod + self.period)
                         if self.bits[n])

    def members_upto(self, bound: int) -> list:
        return [n for n in range(bound + 1) if self.membership(n)]

    def __eq__(self, other):
        if not isinstance(other, SemilinearSet):
            return NotImplemented
        a, b = self._common(other)
        return a.bits == b.bits

    def __hash__(self):
        m = self.minimized()
        return hash((m.preperiod, m.period, m.bits))

    def __repr__(self):
        m = self.minimized()
        return (f"SemilinearSet(sporadic={sorted(m.sporadic)}, "
                f"progressions={sorted(m.progressions)})")


def reachability_sequence(g: Graph):
    """Iterate R_0 = V, R_{n+1} = {r(e) : s(e) in R_n} until a repeat.

    ``R_n`` is the set of core vertices receiving a path of length ``n``.
    Returns ``(sets, preperiod, period)`` with ``len(sets) == preperiod + period``.
    """
    current = frozenset(g.vertices)
    seen = {}
    sets = []
    while current not in seen:
        seen[current] = len(sets)
        sets.append(current)
        current = frozenset(e.rng for e in g.edges if e.src in current)
    start = seen[current]
    return sets, start, len(sets) - start


def length_spectra(g: Graph) -> dict:
    """Length spectrum of every core vertex, all sharing one table shape."""
    sets, n0, per = reachability_sequence(g)
    return {v: SemilinearSet(n0, per, tuple(v in s for s in sets)) for v in g.vertices}


def length_spectrum(g: Graph, v) -> SemilinearSet:
    """``{n : some core path of length n has range v}``."""
    if v not in g.vertices:
        raise DomainError(f"{v!r} is not a core vertex")
    return length_spectra(g)[v]


@dataclass(frozen=True)
class GridPeriodicFamily:
    """A map N^k -> subsets of a finite carrier, periodic past a preperiod.

    ``table`` is keyed by points of the box prod [0, N_i + P_i).
    """

    dimension: int
    preperiod: tuple
    period: tuple
    table: dict

    def fold(self, m) -> tuple:
        if len(m) != self.dimension:
            raise DomainError(f"expected a point of N^{self.dimension}")
        out = []
        for x, n0, p in zip(m, self.preperiod, self.period):
            if x < 0:
                raise DomainError("grid points are nonnegative")
            out.append(x if x < n0 else n0 + (x - n0) % p)
        return tuple(out)

    def value(self, m) -> frozenset:
        return self.table[self.fold(m)]

    def box(self):
        return itertools.product(*(range(n0 + p) for n0, p in zip(self.preperiod, self.period)))

    def step(self, folded: tuple, axis: int) -> tuple:
        """Fold of ``m + e_axis`` given the fold of ``m``."""
        x = list(folded)
        n0, p = self.preperiod[axis], self.period[axis]
        x[axis] += 1
        if x[axis] >= n0 + p:
            x[axis] = n0
        return tuple(x)
