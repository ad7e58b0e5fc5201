"""Exact coefficient rings and sparse linear algebra over fields.

Vectors are plain dicts mapping a hashable coordinate label to a nonzero
coefficient. Every arithmetic result goes through ``Ring.normalize`` so that
values stay canonical (``int`` for Z, ``Fraction`` for Q, ``int`` in
``range(p)`` for Z/p).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Hashable, Iterable, Mapping

from .errors import DomainError


@dataclass(frozen=True)
class Ring:
    name: str
    modulus: int = 0          # 0 for Z and Q
    rational: bool = False

    @property
    def is_field(self) -> bool:
        return self.rational or self.modulus > 1

    def normalize(self, x):
        if self.modulus:
            return int(x) % self.modulus
        if self.rational:
            return Fraction(x)
        if isinstance(x, Fraction):
            if x.denominator != 1:
                raise DomainError(f"{x} is not an integer")
            return x.numerator
        return int(x)

    def inverse(self, x):
        if not self.is_field:
            raise DomainError(f"{self.name} is not a field")
        if x == 0:
            raise ZeroDivisionError("inverse of zero")
        if self.modulus:
            return pow(int(x), -1, self.modulus)
        return 1 / Fraction(x)

    def fraction_field(self) -> "Ring":
        return self if self.is_field else QQ

    def __str__(self):
        return self.name


ZZ = Ring("ZZ")
QQ = Ring("QQ", rational=True)


def GF(p: int) -> Ring:
    if p < 2 or any(p % q == 0 for q in range(2, int(p ** 0.5) + 1)):
        raise DomainError(f"{p} is not prime")
    return Ring(f"GF({p})", modulus=p)


def parse_ring(text: str) -> Ring:
    t = text.strip().upper()
    if t in ("Z", "ZZ"):
        return ZZ
    if t in ("Q", "QQ"):
        return QQ
    for prefix in ("GF(", "Z/"):
        if t.startswith(prefix):
            return GF(int(t[len(prefix):].rstrip(")")))
    raise DomainError(f"unknown coefficient ring {text!r}")


def add_into(ring: Ring, acc: dict, vec: Mapping, scale=1) -> dict:
    """``acc += scale * vec`` in place, dropping zeros."""
    for k, x in vec.items():
        y = ring.normalize(acc.get(k, 0) + scale * x)
        if y:
            acc[k] = y
        else:
            acc.pop(k, None)
    return acc


class EchelonBasis:
    """Incrementally maintained reduced row echelon form over a field.

    Rows are kept fully reduced against each other, so any coordinate
    ordering works and reduction of a query vector terminates after one
    pass over its pivot coordinates.
    """

    def __init__(self, ring: Ring):
        if not ring.is_field:
            raise DomainError(f"linear algebra needs a field, got {ring}")
        self.ring = ring
        self.rows: dict[Hashable, dict] = {}

    def __len__(self):
        return len(self.rows)

    @property
    def rank(self) -> int:
        return len(self.rows)

    def reduce(self, vec: Mapping) -> dict:
        ring = self.ring
        out = {k: ring.normalize(x) for k, x in vec.items() if ring.normalize(x)}
        for k in [k for k in out if k in self.rows]:
            c = out.get(k)
            if c:
                add_into(ring, out, self.rows[k], -c)
        return out

    def add(self, vec: Mapping) -> bool:
        """Insert ``vec``; returns True when it enlarged the span."""
        r = self.reduce(vec)
        if not r:
            return False
        ring = self.ring
        pivot = min(r, key=_sort_key)
        inv = ring.inverse(r[pivot])
        r = {k: ring.normalize(x * inv) for k, x in r.items()}
        for row in self.rows.values():
            c = row.get(pivot)
            if c:
                add_into(ring, row, r, -c)
        self.rows[pivot] = r
        return True

    def extend(self, vecs: Iterable[Mapping]) -> "EchelonBasis":
        for v in vecs:
            self.add(v)
        return self

    def contains(self, vec: Mapping) -> bool:
        return not self.reduce(vec)

    def pivots(self) -> set:
        return set(self.rows)


def _sort_key(k):
    return (type(k).__name__, repr(k))


def span_rank(ring: Ring, vecs: Iterable[Mapping]) -> int:
    return EchelonBasis(ring.fraction_field()).extend(vecs).rank


def in_span(ring: Ring, target: Mapping, vecs: Iterable[Mapping]) -> bool:
    return EchelonBasis(ring.fraction_field()).extend(vecs).contains(target)
