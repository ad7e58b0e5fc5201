"""Finitely generated abelian grading groups and their sub/quotient groups.

Elements are tuples of integers, one coordinate per cyclic factor; a
modulus of 0 marks a copy of Z. Single-factor groups also accept plain
integers at the API boundary.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field

from .errors import DomainError, ValidationError


@dataclass(frozen=True)
class AbelianGroup:
    moduli: tuple

    def __post_init__(self):
        object.__setattr__(self, "moduli", tuple(int(m) for m in self.moduli))
        if not self.moduli or any(m < 0 for m in self.moduli):
            raise ValidationError(f"bad group presentation {self.moduli!r}")

    @property
    def identity(self) -> tuple:
        return (0,) * len(self.moduli)

    @property
    def is_finite(self) -> bool:
        return all(m > 0 for m in self.moduli)

    def coerce(self, x) -> tuple:
        if isinstance(x, int):
            x = (x,)
        x = tuple(int(c) for c in x)
        if len(x) != len(self.moduli):
            raise DomainError(f"{x!r} is not an element of {self.name}")
        return tuple(c % m if m else c for c, m in zip(x, self.moduli))

    def op(self, a, b) -> tuple:
        return self.coerce(tuple(x + y for x, y in zip(a, b)))

    def inv(self, a) -> tuple:
        return self.coerce(tuple(-x for x in a))

    def contains(self, x) -> bool:
        try:
            return self.coerce(x) == tuple(x)
        except (DomainError, TypeError, ValueError):
            return False

    def elements(self) -> list:
        if not self.is_finite:
            raise DomainError(f"{self.name} is infinite; supply a degree window")
        return [tuple(t) for t in itertools.product(*(range(m) for m in self.moduli))]

    def window(self, radius: int) -> list:
        """All elements with every Z-coordinate in [-radius, radius]."""
        ranges = [range(m) if m else range(-radius, radius + 1) for m in self.moduli]
        return [tuple(t) for t in itertools.product(*ranges)]

    @property
    def order(self):
        if not self.is_finite:
            return None
        out = 1
        for m in self.moduli:
            out *= m
        return out

    @property
    def name(self) -> str:
        return "x".join(f"Z/{m}" if m else "Z" for m in self.moduli)

    def format(self, x) -> str:
        return str(x[0]) if len(x) == 1 else "(" + ",".join(map(str, x)) + ")"

    def parse_element(self, text) -> tuple:
        if isinstance(text, (int, list, tuple)):
            return self.coerce(text)
        parts = [p for p in re.split(r"[\s,()]+", str(text).strip()) if p]
        try:
            return self.coerce(tuple(int(p) for p in parts))
        except ValueError:
            raise DomainError(f"cannot read group element {text!r}") from None


def parse_group(text: str) -> AbelianGroup:
    """Accepts ``Z``, ``Z^2``, ``Z/4``, ``Z/2xZ/3``, ``Z/2 x Z``."""
    moduli = []
    for part in re.split(r"\s*[x×*]\s*", text.strip()):
        m = re.fullmatch(r"(?i)z(?:/(\d+)|\^(\d+))?", part.strip())
        if not m:
            raise ValidationError(f"cannot read group {text!r}")
        if m.group(1):
            moduli.append(int(m.group(1)))
        else:
            moduli.extend([0] * int(m.group(2) or 1))
    return AbelianGroup(tuple(moduli))


@dataclass(frozen=True)
class Subgroup:
    """A finite subgroup, itself usable as a grading group."""

    parent: AbelianGroup
    members: frozenset = field(default_factory=frozenset)

    def __post_init__(self):
        ms = frozenset(self.parent.coerce(x) for x in self.members)
        object.__setattr__(self, "members", ms)
        p = self.parent
        if p.identity not in ms:
            raise DomainError("subgroup must contain the identity")
        for a in ms:
            if p.inv(a) not in ms or any(p.op(a, b) not in ms for b in ms):
                raise DomainError(f"{sorted(ms)} is not closed under the group law")

    identity = property(lambda self: self.parent.identity)
    is_finite = property(lambda self: True)
    order = property(lambda self: len(self.members))

    def coerce(self, x):
        x = self.parent.coerce(x)
        if x not in self.members:
            raise DomainError(f"{x!r} is not in the subgroup")
        return x

    def op(self, a, b):
        return self.parent.op(a, b)

    def inv(self, a):
        return self.parent.inv(a)

    def contains(self, x):
        return self.parent.contains(x) and self.parent.coerce(x) in self.members

    def elements(self):
        return sorted(self.members)

    def format(self, x):
        return self.parent.format(x)

    def parse_element(self, text):
        return self.coerce(self.parent.parse_element(text))

    @property
    def name(self):
        return "{" + ",".join(self.format(x) for x in self.elements()) + "} < " + self.parent.name


@dataclass(frozen=True)
class QuotientGroup:
    """Gamma / Omega for finite Gamma; a coset is named by its least member."""

    parent: AbelianGroup
    sub: Subgroup

    def __post_init__(self):
        if not self.parent.is_finite:
            raise DomainError("quotients are supported for finite groups only")
        if self.sub.parent != self.parent:
            raise DomainError("subgroup lives in a different group")

    def project(self, x):
        x = self.parent.coerce(x)
        return min(self.parent.op(x, w) for w in self.sub.members)

    coerce = project

    @property
    def identity(self):
        return self.parent.identity

    is_finite = property(lambda self: True)

    @property
    def order(self):
        return self.parent.order // self.sub.order

    def op(self, a, b):
        return self.project(self.parent.op(a, b))

    def inv(self, a):
        return self.project(self.parent.inv(a))

    def contains(self, x):
        return self.parent.contains(x) and self.project(x) == tuple(x)

    def elements(self):
        return sorted({self.project(x) for x in self.parent.elements()})

    def format(self, x):
        return "[" + self.parent.format(x) + "]"

    def parse_element(self, text):
        return self.project(self.parent.parse_element(str(text).strip("[]")))

    @property
    def name(self):
        return f"{self.parent.name} / {self.sub.name.split(' <')[0]}"


def subgroups(group: AbelianGroup) -> list:
    """All subgroups of a finite group (brute force; fine for tiny groups)."""
    elems = group.elements()
    found = set()
    for g in elems:
        # cyclic subgroups, then joins
        cur, gen = {group.identity}, group.identity
        while True:
            gen = group.op(gen, g)
            if gen in cur:
                break
            cur.add(gen)
        found.add(frozenset(cur))
    changed = True
    while changed:
        changed = False
        for a in list(found):
            for b in list(found):
                j = frozenset(group.op(x, y) for x in a for y in b)
                if j not in found:
                    found.add(j)
                    changed = True
    return [Subgroup(group, s) for s in sorted(found, key=lambda s: (len(s), sorted(s)))]
