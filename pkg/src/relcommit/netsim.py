"""Deterministic event-driven simulation of agents bound by the speed of light.

Each party keeps one stationary agent per location. A scheduled ``Step`` runs
an action for one agent at one spacetime point; the action receives a
``Context`` whose reads are restricted to records in the agent's past light
cone. Every record a party writes is assumed to be broadcast to all of that
party's agents at speed c, and records exchanged between co-located agents of
the two parties are known to both. An optional ``local_latency`` delays the
receiving side of such exchanges.

Events are processed in (time, location, sequence) order, except that a
delivery landing exactly when an action is scheduled at the same location is
handled first (the light cone is closed). All randomness
comes from per-agent SplitMix64 streams, so a transcript is a pure function
of the scenario and its seed.
"""
from __future__ import annotations

import heapq
import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Callable

from relcommit.bits import BitString
from relcommit.gf2n import FieldElement
from relcommit.spacetime import Coord, SpacetimeEvent, as_coord, reaches

MASK64 = (1 << 64) - 1
PARTIES = ("A", "B", "R")  # Alice, Bob, and the referee that issues challenges


class CausalityError(RuntimeError):
    pass


def _mix64(z: int) -> int:
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9 & MASK64
    z = (z ^ (z >> 27)) * 0x94D049BB133111EB & MASK64
    return z ^ (z >> 31)


class SplitMix64:
    """Counter-based 64-bit generator (Steele, Lea and Flood's SplitMix64)."""

    GAMMA = 0x9E3779B97F4A7C15

    def __init__(self, seed: int):
        self.state = seed & MASK64

    @classmethod
    def derive(cls, seed: int, *keys) -> "SplitMix64":
        """Independent stream for a tuple of keys (strings or ints)."""
        state = _mix64(seed & MASK64)
        for k in keys:
            if isinstance(k, str):
                k = int.from_bytes(k.encode(), "big")
            state = _mix64((state ^ k) + cls.GAMMA & MASK64)
        return cls(state)

    def next_u64(self) -> int:
        self.state = (self.state + self.GAMMA) & MASK64
        return _mix64(self.state)

    def bits(self, k: int) -> int:
        out, have = 0, 0
        while have < k:
            out |= self.next_u64() << have
            have += 64
        return out & ((1 << k) - 1)

    def bit(self) -> int:
        return self.next_u64() >> 63

    def below(self, n: int) -> int:
        """Uniform integer in [0, n) by rejection."""
        if n < 1:
            raise ValueError("n must be positive")
        k = max(1, (n - 1).bit_length())
        while True:
            v = self.bits(k)
            if v < n:
                return v

    def random(self) -> float:
        return (self.next_u64() >> 11) * 2.0 ** -53


# -- payloads ---------------------------------------------------------------

def encode(value: Any) -> str:
    if isinstance(value, (BitString, FieldElement)):
        return value.hex()
    if isinstance(value, bool):
        return str(int(value))
    if isinstance(value, int):
        return format(value, "x")
    if isinstance(value, (tuple, list)):
        return ",".join(encode(v) for v in value)
    raise TypeError(f"cannot serialize payload {value!r}")


def _time_str(t: Coord) -> str:
    return str(t) if isinstance(t, Fraction) else repr(float(t))


def _parse_time(s: str) -> Coord:
    return Fraction(s) if "." not in s and "e" not in s and "inf" not in s else float(s)


@dataclass(frozen=True)
class Record:
    seq: int
    t: Coord
    location: int
    x: Coord
    party: str
    direction: str
    label: str
    payload: str
    round: str
    deps: tuple[int, ...] = ()
    origin: tuple[Coord, Coord] | None = None  # (x, t) where the content was produced, for deliveries
    value: Any = field(default=None, compare=False, repr=False)

    @property
    def observers(self) -> frozenset[str]:
        if "->" in self.direction:
            src, dst = self.direction.split("->")
            return frozenset({src, dst})
        return frozenset({self.direction.split("~>")[0]})

    def receiver(self) -> str | None:
        return self.direction.split("->")[1] if "->" in self.direction else None

    def to_json(self) -> dict:
        d = {
            "seq": self.seq, "t": _time_str(self.t), "location": self.location, "x": _time_str(self.x),
            "party": self.party, "direction": self.direction, "label": self.label,
            "payload": self.payload, "round": self.round, "deps": list(self.deps),
        }
        if self.origin is not None:
            d["origin"] = [_time_str(self.origin[0]), _time_str(self.origin[1])]
        return d

    @classmethod
    def from_json(cls, d: dict) -> "Record":
        origin = tuple(_parse_time(v) for v in d["origin"]) if d.get("origin") else None
        return cls(d["seq"], _parse_time(d["t"]), d["location"], _parse_time(d["x"]), d["party"],
                   d["direction"], d["label"], d["payload"], d["round"], tuple(d["deps"]), origin)


@dataclass
class ProtocolTranscript:
    records: list[Record] = field(default_factory=list)

    def __iter__(self):
        return iter(self.records)

    def __len__(self):
        return len(self.records)

    def get(self, label: str) -> Record:
        for r in self.records:
            if r.label == label:
                return r
        raise KeyError(label)

    def labels(self) -> list[str]:
        return [r.label for r in self.records]

    def to_jsonl(self) -> str:
        return "".join(json.dumps(r.to_json(), sort_keys=True, separators=(",", ":")) + "\n" for r in self.records)

    @classmethod
    def from_jsonl(cls, text: str) -> "ProtocolTranscript":
        return cls([Record.from_json(json.loads(line)) for line in text.splitlines() if line.strip()])


# -- scenarios --------------------------------------------------------------

@dataclass
class Step:
    t: Coord
    location: int
    party: str
    round: str
    action: Callable[["Context"], None]


@dataclass
class Scenario:
    locations: dict[int, Coord]
    steps: list[Step]
    seed: int = 0
    c: Coord = 1
    local_latency: Coord = 0
    name: str = ""

    def __post_init__(self):
        self.locations = {k: as_coord(v) for k, v in self.locations.items()}
        for s in self.steps:
            if s.location not in self.locations:
                raise ValueError(f"step {s.round!r} uses unknown location {s.location}")
            if s.party not in PARTIES:
                raise ValueError(f"unknown party {s.party!r}")

    def distance(self, a: int, b: int) -> Coord:
        return abs(self.locations[a] - self.locations[b])


@dataclass
class Agent:
    party: str
    location: int
    rng: SplitMix64


def _visible(r: Record, party: str, x: Coord, t: Coord, c: Coord, latency: Coord) -> bool:
    if party not in r.observers:
        return False
    t0 = r.t + latency if latency and r.receiver() == party else r.t
    return reaches(SpacetimeEvent(0, r.x, t0), SpacetimeEvent(1, x, t), c)


class Context:
    """What an action may see and do at its spacetime point."""

    def __init__(self, sim: "_Run", step: Step, agent: Agent):
        self._sim = sim
        self.t = step.t
        self.location = step.location
        self.x = sim.scenario.locations[step.location]
        self.party = step.party
        self.round = step.round
        self.rng = agent.rng
        self._deps: set[int] = set()

    def _describe(self) -> str:
        return f"{self.party} at location {self.location} (x={self.x}, t={self.t})"

    def visible(self, label: str) -> bool:
        r = self._sim.by_label.get(label)
        return r is not None and self._sim.visible(r, self.party, self.x, self.t)

    def read(self, label: str) -> Any:
        r = self._sim.by_label.get(label)
        if r is None:
            raise CausalityError(f"{self._describe()} reads {label!r}, which has not been produced yet")
        if not self._sim.visible(r, self.party, self.x, self.t):
            raise CausalityError(
                f"record #{r.seq} {label!r} ({r.party} at location {r.location}, t={r.t}) lies outside "
                f"the past light cone of {self._describe()}")
        self._deps.add(r.seq)
        return r.value

    def view(self) -> dict[str, Any]:
        """Every record this agent may read, by label. Reading through the view
        does not register dependencies; use ``read`` for values that are used."""
        return {r.label: r.value for r in self._sim.records if self._sim.visible(r, self.party, self.x, self.t)}

    def emit(self, label: str, value: Any, to: str | None = None) -> Record:
        """Record a value. ``to`` names the co-located party it is handed to;
        ``None`` keeps it private to this party."""
        direction = f"{self.party}->{to}" if to else f"{self.party}~>{self.party}"
        return self._sim.add(self.t, self.location, self.party, direction, label, value, self.round,
                             tuple(sorted(self._deps)), None)

    def send(self, location: int, label: str, value: Any) -> None:
        """Internal message to this party's agent at ``location``, delivered after distance / c."""
        self._sim.schedule_delivery(self, location, label, value, tuple(sorted(self._deps)))


class _Run:
    def __init__(self, scenario: Scenario):
        self.scenario = scenario
        self.records: list[Record] = []
        self.by_label: dict[str, Record] = {}
        self.agents: dict[tuple[str, int], Agent] = {}
        self.queue: list = []
        self.seq = 0

    def next_seq(self) -> int:
        self.seq += 1
        return self.seq

    def agent(self, party: str, location: int) -> Agent:
        key = (party, location)
        if key not in self.agents:
            self.agents[key] = Agent(party, location, SplitMix64.derive(self.scenario.seed, party, location))
        return self.agents[key]

    def visible(self, r: Record, party: str, x: Coord, t: Coord) -> bool:
        return _visible(r, party, x, t, self.scenario.c, self.scenario.local_latency)

    def add(self, t, location, party, direction, label, value, rnd, deps, origin) -> Record:
        if label in self.by_label:
            raise ValueError(f"duplicate record label {label!r}")
        r = Record(len(self.records), t, location, self.scenario.locations[location], party, direction, label,
                   encode(value), rnd, deps, origin, value)
        self.records.append(r)
        self.by_label[label] = r
        return r

    def schedule_delivery(self, ctx: Context, location: int, label: str, value: Any, deps) -> None:
        delay = self.scenario.distance(ctx.location, location) / self.scenario.c
        t = ctx.t + delay
        payload = (ctx.party, location, label, value, ctx.round, deps, (ctx.x, ctx.t))
        heapq.heappush(self.queue, (t, location, 0, self.next_seq(), "deliver", payload))

    def run(self) -> ProtocolTranscript:
        for step in self.scenario.steps:
            heapq.heappush(self.queue, (step.t, step.location, 1, self.next_seq(), "step", step))
        while self.queue:
            t, location, _, _, kind, item = heapq.heappop(self.queue)
            if kind == "step":
                item.action(Context(self, item, self.agent(item.party, item.location)))
            else:
                party, loc, label, value, rnd, deps, origin = item
                self.add(t, loc, party, f"{party}~>{party}", label, value, rnd, deps, origin)
        return ProtocolTranscript(self.records)


def run(scenario: Scenario) -> ProtocolTranscript:
    return _Run(scenario).run()


# -- auditing ---------------------------------------------------------------

def causality_violations(t: ProtocolTranscript, scenario: Scenario | None = None) -> list[str]:
    """Human-readable list of every way the transcript breaks light-cone causality."""
    c = scenario.c if scenario else 1
    latency = scenario.local_latency if scenario else 0
    problems = []
    by_seq = {}
    prev_t = None
    for r in t.records:
        if r.seq in by_seq:
            problems.append(f"record #{r.seq} appears twice")
        by_seq[r.seq] = r
        if prev_t is not None and r.t < prev_t:
            problems.append(f"record #{r.seq} {r.label!r} goes back in time ({r.t} after {prev_t})")
        prev_t = r.t
        if scenario and r.location in scenario.locations and scenario.locations[r.location] != r.x:
            problems.append(f"record #{r.seq} {r.label!r} claims x={r.x} for location {r.location}")
        ox, ot = r.origin if r.origin is not None else (r.x, r.t)
        if r.origin is not None:
            if not reaches(SpacetimeEvent(0, ox, ot), SpacetimeEvent(1, r.x, r.t), c):
                problems.append(f"delivery #{r.seq} {r.label!r} arrives faster than light")
        for d in r.deps:
            dep = by_seq.get(d)
            if dep is None:
                problems.append(f"record #{r.seq} {r.label!r} depends on #{d}, which is not an earlier record")
            elif not _visible(dep, r.party, ox, ot, c, latency):
                problems.append(
                    f"record #{r.seq} {r.label!r} uses #{d} {dep.label!r} from outside its past light cone")
    return problems


def audit_causality(t: ProtocolTranscript, scenario: Scenario | None = None) -> bool:
    return not causality_violations(t, scenario)
