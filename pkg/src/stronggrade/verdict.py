"""Verdict records with finite, re-checkable witnesses."""

from __future__ import annotations

from dataclasses import asdict, dataclass, field
from typing import Any


@dataclass(frozen=True)
class SinkWitness:
    vertex: Any
    kind: str = field(default="sink", init=False)


@dataclass(frozen=True)
class InfiniteEmitterWitness:
    vertex: Any
    kind: str = field(default="infinite_emitter", init=False)


@dataclass(frozen=True)
class SingularReceivesWitness:
    vertex: Any
    length: int
    kind: str = field(default="singular_receives", init=False)


@dataclass(frozen=True)
class IsolatedWitness:
    vertex: Any
    kind: str = field(default="isolated", init=False)


@dataclass(frozen=True)
class ConditionYWitness:
    """Failure of Condition (Y): excess ``k`` and a blocking core prefix into a ray.

    ``prefix`` is the edge list of the core path (``start`` is its first
    vertex); the infinite path runs along ``prefix`` into ``ray``.
    """

    ray: Any
    k: int
    start: Any
    prefix: tuple
    explanation: str = ""
    kind: str = field(default="condition_y", init=False)


@dataclass(frozen=True)
class SourceWitness:
    vertex: Any
    color: int
    kind: str = field(default="source", init=False)


@dataclass(frozen=True)
class LassoWitness:
    """k-graph Condition (Y) failure: a round-robin staircase walk that stays bad.

    ``stem`` then ``cycle`` list the edges walked; ``m`` is the grid
    representative of the excess degree.
    """

    m: tuple
    start: Any
    stem: tuple
    cycle: tuple
    kind: str = field(default="kgraph_condition_y", init=False)


@dataclass(frozen=True)
class Verdict:
    answer: bool
    witness: Any = None
    criteria_trace: tuple = ()

    def __post_init__(self):
        if self.answer and self.witness is not None:
            raise ValueError("a positive verdict carries no witness")
        if not self.answer and self.witness is None:
            raise ValueError("a negative verdict needs a witness")

    def __bool__(self):
        return self.answer

    def to_dict(self) -> dict:
        return {
            "answer": "yes" if self.answer else "no",
            "witness": None if self.witness is None else _plain(asdict(self.witness)),
            "criteria_trace": [[name, "pass" if ok else "fail"] for name, ok in self.criteria_trace],
        }


def _plain(obj):
    if isinstance(obj, dict):
        return {k: _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if isinstance(obj, (set, frozenset)):
        return sorted(_plain(v) for v in obj)
    return obj
