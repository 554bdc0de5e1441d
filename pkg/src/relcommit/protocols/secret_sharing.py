"""XOR secret-sharing commitment.

A1 at x = -1 hands B1 the share d XOR a, A2 at x = +1 hands B2 the share a,
both at t = 0. Each Bob forwards his share to B0 at the midpoint, where the
two arrive at t = 1 and their XOR reveals d. The commitment therefore holds
for t in (0, 1) and opens itself at t = 1.
"""
from __future__ import annotations

from collections import Counter
from fractions import Fraction

from relcommit.netsim import Context, Scenario, Step, run
from relcommit.protocols.common import CommitmentOutcome

LOCATIONS = {0: Fraction(0), 1: Fraction(-1), 2: Fraction(1)}


def shares(d: int, a: int) -> tuple[int, int]:
    return d ^ a, a


def reconstruct(s1: int, s2: int) -> int:
    return s1 ^ s2


def secret_sharing_bc_run(d: int, seed: int = 0, a: int | None = None) -> CommitmentOutcome:
    if d not in (0, 1):
        raise ValueError("d must be a bit")
    if a not in (None, 0, 1):
        raise ValueError("a must be a bit")

    def predistribute(ctx: Context) -> None:
        ctx.emit("a", ctx.rng.bit() if a is None else a)
        ctx.emit("commit_bit", d)

    def alice_share(which):
        def action(ctx: Context) -> None:
            s1, s2 = shares(ctx.read("commit_bit"), ctx.read("a"))
            ctx.emit(f"s{which}", s1 if which == 1 else s2, to="B")
        return action

    def bob_forward(which):
        def action(ctx: Context) -> None:
            ctx.send(0, f"fwd:s{which}", ctx.read(f"s{which}"))
        return action

    def bob_reconstruct(ctx: Context) -> None:
        ctx.emit("revealed", reconstruct(ctx.read("fwd:s1"), ctx.read("fwd:s2")))

    steps = [Step(Fraction(-1), 0, "A", "predistribution", predistribute)]
    for which in (1, 2):
        steps.append(Step(Fraction(0), which, "A", "commit", alice_share(which)))
        steps.append(Step(Fraction(0), which, "B", "commit", bob_forward(which)))
    steps.append(Step(Fraction(1), 0, "B", "open", bob_reconstruct))
    scen = Scenario(LOCATIONS, steps, seed=seed, name="secret-sharing")
    tr = run(scen)
    revealed = tr.get("revealed").value
    return CommitmentOutcome(
        "secret-sharing", revealed == d, revealed, Fraction(0), Fraction(1), Fraction(1),
        ((LOCATIONS[1], Fraction(0)), (LOCATIONS[2], Fraction(0))), LOCATIONS[0], 1, (), tr, scen,
        extra={"seed": seed, "shares": list(shares(d, tr.get("a").value)), "time_unit": "natural (c = 1)"},
    )


def share_distribution(d: int, which: int) -> dict[int, Fraction]:
    """Exact distribution of one Bob's share over the uniform pad."""
    counts = Counter(shares(d, a)[which - 1] for a in (0, 1))
    return {s: Fraction(c, 2) for s, c in sorted(counts.items())}
