"""Events in 1+1 dimensional spacetime, light-cone tests, and communication graphs.

Natural-unit mode uses exact rationals with c = 1. Physical mode measures
distance in kilometres and time in seconds with c = 299792.458 km/s, and the
cone test allows a relative slack of ``PHYSICAL_RTOL``.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence, Union

C_KM_PER_S = 299792.458
PHYSICAL_RTOL = 1e-9

Coord = Union[Fraction, float]


def as_coord(v) -> Coord:
    """Parse ints, rational strings like ``"1/1000"`` and Fractions exactly; floats stay floats."""
    if isinstance(v, Fraction):
        return v
    if isinstance(v, bool):
        raise TypeError("booleans are not coordinates")
    if isinstance(v, int):
        return Fraction(v)
    if isinstance(v, str):
        return Fraction(v)
    if isinstance(v, float):
        return v
    raise TypeError(f"cannot use {v!r} as a coordinate")


@dataclass(frozen=True)
class SpacetimeEvent:
    label: int
    x: Coord
    t: Coord
    party: str | None = None
    agent: str | None = None

    def __post_init__(self):
        object.__setattr__(self, "x", as_coord(self.x))
        object.__setattr__(self, "t", as_coord(self.t))

    @property
    def physical(self) -> bool:
        return isinstance(self.x, float) or isinstance(self.t, float)


def _le(lhs, rhs, physical: bool) -> bool:
    if not physical:
        return lhs <= rhs
    lhs, rhs = float(lhs), float(rhs)
    return lhs <= rhs + PHYSICAL_RTOL * max(abs(lhs), abs(rhs), 1e-300)


def reaches(ej: SpacetimeEvent, ek: SpacetimeEvent, c: Coord = 1) -> bool:
    """True iff ek lies in the closed future light cone of ej."""
    physical = ej.physical or ek.physical or isinstance(c, float)
    dt = ek.t - ej.t
    if physical:
        return _le(abs(float(ek.x) - float(ej.x)) / float(c), float(dt), True)
    return abs(ek.x - ej.x) <= c * dt


def coincident(ej: SpacetimeEvent, ek: SpacetimeEvent) -> bool:
    if ej.physical or ek.physical:
        return math.isclose(float(ej.x), float(ek.x), rel_tol=PHYSICAL_RTOL, abs_tol=0.0) and math.isclose(
            float(ej.t), float(ek.t), rel_tol=PHYSICAL_RTOL, abs_tol=0.0)
    return ej.x == ek.x and ej.t == ek.t


@dataclass(frozen=True)
class CommunicationGraph:
    labels: tuple[int, ...]
    edges: frozenset[tuple[int, int]] = field(default_factory=frozenset)

    @property
    def n(self) -> int:
        return len(self.labels)

    def predecessors(self, k: int) -> frozenset[int]:
        return frozenset(j for j, kk in self.edges if kk == k)

    def is_acyclic(self) -> bool:
        indeg = {v: 0 for v in self.labels}
        for _, k in self.edges:
            indeg[k] += 1
        frontier = [v for v, d in indeg.items() if d == 0]
        seen = 0
        while frontier:
            v = frontier.pop()
            seen += 1
            for j, k in self.edges:
                if j == v:
                    indeg[k] -= 1
                    if indeg[k] == 0:
                        frontier.append(k)
        return seen == len(self.labels)

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "labels": list(self.labels),
            "edges": sorted([list(e) for e in self.edges]),
            "visible": {str(j): sorted(s) for j, s in broadcast_reduction(self).items()},
        }


def build_graph(events: Sequence[SpacetimeEvent], c: Coord = 1) -> CommunicationGraph:
    """Edge (j, k) iff k is in the future light cone of j.

    Self-pairs are dropped and coincident events are joined in label order
    only, which keeps the graph acyclic.
    """
    if not events:
        raise ValueError("need at least one event")
    labels = [e.label for e in events]
    if len(set(labels)) != len(labels):
        raise ValueError("event labels must be unique")
    ordered = sorted(events, key=lambda e: (float(e.t), e.label))
    edges = set()
    for ej in ordered:
        for ek in ordered:
            if ej.label == ek.label or not reaches(ej, ek, c):
                continue
            if coincident(ej, ek) and ej.label > ek.label:
                continue
            edges.add((ej.label, ek.label))
    return CommunicationGraph(tuple(e.label for e in ordered), frozenset(edges))


def broadcast_reduction(g: CommunicationGraph) -> dict[int, frozenset[int]]:
    """S_j = {k : (k, j) in E}: the challenges player j may additionally see."""
    return {j: g.predecessors(j) for j in g.labels}


def alternating_layout(rounds: int, epsilon: Coord = Fraction(1, 1000)) -> list[SpacetimeEvent]:
    """Two sites separated by 1 + epsilon; interaction k happens at t = k - 1,
    at the first site for odd k and the second for even k."""
    sep = 1 + as_coord(epsilon)
    return [SpacetimeEvent(k, 0 if k % 2 else sep, k - 1) for k in range(1, rounds + 1)]


def light_time(distance_km: float) -> float:
    """One-way light travel time in seconds."""
    return distance_km / C_KM_PER_S


@dataclass(frozen=True)
class CommitmentWindow:
    natural: Coord | None
    seconds: float | None

    @property
    def milliseconds(self) -> float | None:
        return None if self.seconds is None else self.seconds * 1e3


def max_commitment_time(separation, physical: bool = False) -> CommitmentWindow:
    """Half the light travel time between the two opening sites."""
    if physical:
        s = float(separation)
        if not s > 0:
            raise ValueError(f"separation must be positive, got {separation!r}")
        return CommitmentWindow(None, s / (2 * C_KM_PER_S))
    s = as_coord(separation)
    if not s > 0:
        raise ValueError(f"separation must be positive, got {separation!r}")
    return CommitmentWindow(s / 2, None)


def load_scenario(path: str) -> list[SpacetimeEvent]:
    """Read a JSON array of ``{label, x, t, party, agent}`` objects."""
    with open(path) as fh:
        return events_from_json(json.load(fh))


def events_from_json(items: Iterable[dict]) -> list[SpacetimeEvent]:
    out = []
    for item in items:
        missing = {"label", "x", "t"} - set(item)
        if missing:
            raise ValueError(f"event {item!r} is missing {sorted(missing)}")
        out.append(SpacetimeEvent(int(item["label"]), item["x"], item["t"], item.get("party"), item.get("agent")))
    return out
