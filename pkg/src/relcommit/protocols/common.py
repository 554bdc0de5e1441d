from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Callable, Mapping

from relcommit.netsim import Context, ProtocolTranscript, Scenario
from relcommit.spacetime import Coord, SpacetimeEvent, reaches

Hook = Callable[[Context], None]


@dataclass(frozen=True)
class Adversary:
    """Replacement actions for Alice, keyed by round label.

    ``global_command`` delivers the harness's challenge to every one of
    Alice's agents right after the commitment point; otherwise only the
    agent performing the opening receives it.
    """

    hooks: Mapping[str, Hook]
    name: str = "scripted"
    global_command: bool = True


@dataclass
class CommitmentOutcome:
    protocol: str
    accepted: bool
    d: int | None
    commit_point: Coord
    opening_point: Coord
    verify_time: Coord
    opening_events: tuple[tuple[Coord, Coord], ...]  # (x, t) of the openings the verifier relies on
    verify_x: Coord
    c: Coord = 1
    flags: tuple[str, ...] = ()
    transcript: ProtocolTranscript | None = field(default=None, repr=False)
    scenario: Scenario | None = field(default=None, repr=False)
    extra: dict[str, Any] = field(default_factory=dict)

    def timing_ok(self) -> bool:
        v = SpacetimeEvent(0, self.verify_x, self.verify_time)
        return all(reaches(SpacetimeEvent(1, x, t), v, self.c) for x, t in self.opening_events)

    @property
    def binding_secure(self) -> bool:
        return not self.flags

    def to_json(self) -> dict:
        def s(v):
            return str(v) if not isinstance(v, float) else repr(v)

        return {
            "protocol": self.protocol,
            "accepted": self.accepted,
            "d": self.d,
            "commit_point": s(self.commit_point),
            "opening_point": s(self.opening_point),
            "verify_time": s(self.verify_time),
            "opening_events": [[s(x), s(t)] for x, t in self.opening_events],
            "timing_ok": self.timing_ok(),
            "flags": list(self.flags),
            **{k: v for k, v in sorted(self.extra.items())},
        }


def issue_challenge(challenge: int) -> Hook:
    def action(ctx: Context) -> None:
        ctx.emit(f"challenge@{ctx.location}", challenge, to="A")
    return action


def read_challenge(ctx: Context) -> int:
    return ctx.read(f"challenge@{ctx.location}")
