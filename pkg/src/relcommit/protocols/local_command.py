"""Two agents announce the same bit; Bob accepts iff the announcements agree.

Binding only holds in the local-command model, where just one agent learns
which value Alice is asked to unveil.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from relcommit.games.bruteforce import classical_value_bruteforce
from relcommit.games.model import GameSpec, Player
from relcommit.protocols.common import CommitmentOutcome


def local_command_bc_run(d: int, x1: int | None = None, x2: int | None = None) -> CommitmentOutcome:
    """Honest agents send x1 = x2 = d; either may be overridden to model cheating."""
    if d not in (0, 1):
        raise ValueError("d must be a bit")
    x1 = d if x1 is None else x1
    x2 = d if x2 is None else x2
    accepted = x1 == x2
    return CommitmentOutcome(
        "local-command", accepted, x1 if accepted else None, Fraction(0), Fraction(1), Fraction(1),
        (), Fraction(0), extra={"x1": x1, "x2": x2, "non_communicating": True},
    )


@dataclass(frozen=True)
class UnveilPredicate:
    def __call__(self, inputs: tuple, outputs: tuple) -> bool:
        (challenge,) = inputs
        return outputs[0] == outputs[1] == challenge


def local_command_binding_game(global_command: bool) -> GameSpec:
    """Challenge bit drawn uniformly; A1 always sees it, A2 only under global command."""
    bits = (0, 1)
    return GameSpec(
        "local-command-binding" + ("/global" if global_command else "/local"),
        (bits,),
        (Player("A1", (0,), bits), Player("A2", (0,) if global_command else (), bits)),
        UnveilPredicate(),
    )


def local_command_binding_audit(global_command: bool) -> dict:
    """Max p0 + p1 (twice the game value), with 1 meaning perfectly binding."""
    res = classical_value_bruteforce(local_command_binding_game(global_command))
    total = 2 * res.value
    return {"model": "global" if global_command else "local", "p0_plus_p1": total,
            "epsilon": total - 1, "secure": total == 1}
