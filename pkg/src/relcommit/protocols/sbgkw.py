"""Two-agent commitment: x1 = d·b XOR a at site 1, x2 = a at site 2.

In the relativistic variant the sites sit at x = -1 and x = +1, the commit
happens at (-1, 0) and the opening at (1, t_open). Bob checks x1 XOR x2 = d·b
once b and x1 have reached site 2, i.e. at t = max(2, t_open). The binding
guarantee lapses once b can reach the opening agent, so an opening at
t_open >= 2 is flagged.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from relcommit.bits import BitString, select, xor
from relcommit.netsim import Context, Scenario, Step, run
from relcommit.protocols.common import Adversary, CommitmentOutcome, issue_challenge
from relcommit.spacetime import Coord, SpacetimeEvent, as_coord, reaches

EXPIRY = Fraction(2)
LOCATIONS = {0: Fraction(0), 1: Fraction(-1), 2: Fraction(1)}


@dataclass(frozen=True)
class SbgkwState:
    n: int
    d: int
    a: BitString
    b: BitString

    @property
    def x1(self) -> BitString:
        return xor(select(self.d, self.b), self.a)

    @property
    def x2(self) -> BitString:
        return self.a


def sbgkw_accepts(x1: BitString, x2: BitString, b: BitString, d: int) -> bool:
    return xor(x1, x2) == select(d, b)


def sbgkw_run(
    n: int,
    d: int = 0,
    t_open: Coord = 1,
    seed: int = 0,
    adversary: Adversary | None = None,
    challenge: int | None = None,
    pad: BitString | None = None,
) -> CommitmentOutcome:
    t_open = as_coord(t_open)
    if not t_open > 0:
        raise ValueError(f"opening time must come after the commitment at t = 0, got {t_open}")
    if adversary is None and d not in (0, 1):
        raise ValueError("d must be a bit")
    if adversary is not None and challenge not in (0, 1):
        raise ValueError("an adversarial run needs a challenge bit")
    hooks = dict(adversary.hooks) if adversary else {}
    t_verify = max(EXPIRY, t_open)

    def predistribute(ctx: Context) -> None:
        ctx.emit("a", pad if pad is not None else BitString(ctx.rng.bits(n), n))
        if adversary is None:
            ctx.emit("commit_bit", d)

    def bob_challenge(ctx: Context) -> None:
        ctx.emit("y1", BitString(ctx.rng.bits(n), n), to="A")

    def alice_commit(ctx: Context) -> None:
        b, a = ctx.read("y1"), ctx.read("a")
        ctx.emit("x1", xor(select(ctx.read("commit_bit"), b), a), to="B")

    def bob_forward(ctx: Context) -> None:
        ctx.send(2, "fwd:y1", ctx.read("y1"))
        ctx.send(2, "fwd:x1", ctx.read("x1"))

    def alice_open(ctx: Context) -> None:
        ctx.emit("d", ctx.read("commit_bit"), to="B")
        ctx.emit("x2", ctx.read("a"), to="B")

    def bob_verify(ctx: Context) -> None:
        b, x1 = ctx.read("fwd:y1"), ctx.read("fwd:x1")
        x2, dd = ctx.read("x2"), ctx.read("d")
        ok = dd in (0, 1) and x2.n == n and sbgkw_accepts(x1, x2, b, dd)
        ctx.emit("verdict", int(ok))

    steps = [
        Step(Fraction(-1), 0, "A", "predistribution", predistribute),
        Step(Fraction(0), 1, "B", "commit", bob_challenge),
        Step(Fraction(0), 1, "A", "commit", hooks.get("commit", alice_commit)),
        Step(Fraction(0), 1, "B", "commit", bob_forward),
    ]
    if adversary is not None:
        if adversary.global_command:
            steps.append(Step(Fraction(0), 1, "R", "challenge", issue_challenge(challenge)))
        steps.append(Step(t_open, 2, "R", "challenge", issue_challenge(challenge)))
    steps += [
        Step(t_open, 2, "A", "open", hooks.get("open", alice_open)),
        Step(t_verify, 2, "B", "verify", bob_verify),
    ]
    scen = Scenario(LOCATIONS, steps, seed=seed, name=f"sbgkw(n={n})")
    tr = run(scen)
    flags = ()
    if expired(t_open):
        flags = (f"commitment expires at t = {EXPIRY}: b reaches the opening agent by t_open = {t_open}",)
    return CommitmentOutcome(
        "sbgkw", bool(tr.get("verdict").value), tr.get("d").value, Fraction(0), t_open, t_verify,
        ((LOCATIONS[1], Fraction(0)), (LOCATIONS[2], t_open)), LOCATIONS[2], 1, flags, tr, scen,
        extra={"n": n, "seed": seed, "time_unit": "natural (c = 1)"},
    )


def expired(t_open: Coord) -> bool:
    """Whether Bob's challenge, issued at (-1, 0), can influence the opening at (1, t_open)."""
    return reaches(SpacetimeEvent(0, LOCATIONS[1], 0), SpacetimeEvent(1, LOCATIONS[2], as_coord(t_open)))


def zeros_adversary(n: int) -> Adversary:
    """x1 = x2 = 0^n: unveils 0 always and 1 whenever b = 0^n."""
    zero = BitString.zeros(n)

    def commit(ctx: Context) -> None:
        ctx.emit("x1", zero, to="B")

    def open_(ctx: Context) -> None:
        ctx.emit("d", ctx.read("challenge@2"), to="B")
        ctx.emit("x2", zero, to="B")

    return Adversary({"commit": commit, "open": open_}, "zeros", global_command=False)


def expiry_adversary(n: int) -> Adversary:
    """Waits for b and x1 to arrive, then sets x2 = x1 XOR d·b for the requested d.

    Succeeds with certainty once the commitment has expired and raises a
    causality error if the opening happens earlier.
    """

    def commit(ctx: Context) -> None:
        ctx.emit("x1", BitString(ctx.rng.bits(n), n), to="B")

    def open_(ctx: Context) -> None:
        dd = ctx.read("challenge@2")
        b, x1 = ctx.read("y1"), ctx.read("x1")
        ctx.emit("d", dd, to="B")
        ctx.emit("x2", xor(x1, select(dd, b)), to="B")

    return Adversary({"commit": commit, "open": open_}, "expiry", global_command=False)
