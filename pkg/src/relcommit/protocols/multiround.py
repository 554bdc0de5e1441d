"""Multi-round commitment over GF(2^n) sustained by alternating sites.

Alice commits with x_1 = d·y_1 + a_1, then at each further round k <= m
answers x_k = y_k * a_{k-1} + a_k, and opens at round m + 1 with d and
x_{m+1} = a_m. Bob accepts iff peeling the pads back in order reproduces
x_{m+1} (see ``multiround_verify``).
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from relcommit.bits import BitString, select
from relcommit.gf2n import Field, FieldElement
from relcommit.netsim import Context, Scenario, Step, run
from relcommit.protocols.common import Adversary, CommitmentOutcome, issue_challenge
from relcommit.spacetime import C_KM_PER_S, Coord, as_coord

DEFAULT_EPSILON = Fraction(1, 1000)


def site(k: int) -> int:
    """Location of round k: site 1 for odd rounds, site 2 for even ones."""
    return 1 if k % 2 else 2


def _scaled(d: int, y: FieldElement) -> FieldElement:
    return FieldElement(select(d, BitString(y.value, y.n)).value, y.poly)


@dataclass
class MultiroundState:
    n: int
    m: int
    d: int
    a: list[FieldElement]
    y: dict[int, FieldElement] = field(default_factory=dict)
    x: dict[int, FieldElement] = field(default_factory=dict)

    def __post_init__(self):
        if self.m < 1:
            raise ValueError("need at least one sustain round")
        if len(self.a) != self.m:
            raise ValueError(f"need {self.m} pads, got {len(self.a)}")
        if self.d not in (0, 1):
            raise ValueError("d must be a bit")

    @property
    def field(self) -> Field:
        return Field(poly=self.a[0].poly)

    @property
    def b(self) -> list[FieldElement]:
        return [self.y[k] for k in range(1, self.m + 1)]


def multiround_honest_response(k: int, state: MultiroundState) -> FieldElement:
    if not 1 <= k <= state.m + 1:
        raise ValueError(f"round {k} outside 1..{state.m + 1}")
    if k == state.m + 1:
        x = state.a[-1]
    else:
        y = state.y[k]
        if k == 1:
            x = _scaled(state.d, y) + state.a[0]
        else:
            x = y * state.a[k - 2] + state.a[k - 1]
    state.x[k] = x
    return x


def multiround_verify(x: Sequence[FieldElement], b: Sequence[FieldElement], d: int) -> bool:
    """Accept iff x_{m+1} = x_m + b_m x_{m-1} + ... + b_m...b_2 x_1 + d b_m...b_1.

    Evaluated by recovering a_1 = x_1 + d b_1 and a_k = x_k + b_k a_{k-1},
    which is the same polynomial in Horner form.
    """
    m = len(b)
    if len(x) != m + 1:
        raise ValueError(f"need {m + 1} messages for {m} challenges, got {len(x)}")
    if m == 0:
        raise ValueError("need at least one challenge")
    a = x[0] + _scaled(d, b[0])
    for k in range(1, m):
        a = x[k] + b[k] * a
    return x[m] == a


# -- simulation -------------------------------------------------------------

@dataclass(frozen=True)
class MultiroundLayout:
    m: int
    sep: Coord              # distance between the two sites
    tau: Coord              # time between rounds
    c: Coord
    physical: bool

    def time(self, k: int) -> Coord:
        return (k - 1) * self.tau

    @property
    def locations(self) -> dict[int, Coord]:
        zero = 0.0 if self.physical else Fraction(0)
        return {0: self.sep / 2, 1: zero, 2: self.sep}

    @property
    def verify_time(self) -> Coord:
        # identical arithmetic to the simulator's delivery time for x_m
        return self.time(self.m) + self.sep / self.c


def multiround_layout(m: int, epsilon: Coord = DEFAULT_EPSILON, distance_km: float | None = None) -> MultiroundLayout:
    eps = as_coord(epsilon)
    if not eps > 0:
        raise ValueError("epsilon must be positive")
    if distance_km is None:
        return MultiroundLayout(m, 1 + eps, Fraction(1), Fraction(1), False)
    if not distance_km > 0:
        raise ValueError("distance must be positive")
    s = float(distance_km)
    return MultiroundLayout(m, s, s / (C_KM_PER_S * (1 + float(eps))), C_KM_PER_S, True)


def multiround_run(
    n: int,
    m: int,
    d: int = 0,
    seed: int = 0,
    epsilon: Coord = DEFAULT_EPSILON,
    distance_km: float | None = None,
    adversary: Adversary | None = None,
    challenge: int | None = None,
    local_latency: Coord = 0,
) -> CommitmentOutcome:
    """Simulate one run. Without an adversary Alice is honest and commits to
    ``d``; with one, the harness challenges her to unveil ``challenge``."""
    F = Field(n)
    lay = multiround_layout(m, epsilon, distance_km)
    hooks = dict(adversary.hooks) if adversary else {}
    if adversary is not None and challenge not in (0, 1):
        raise ValueError("an adversarial run needs a challenge bit")
    if adversary is None and d not in (0, 1):
        raise ValueError("d must be a bit")

    def predistribute(ctx: Context) -> None:
        ctx.emit("a", tuple(F(ctx.rng.bits(n)) for _ in range(m)))
        if adversary is None:
            ctx.emit("commit_bit", d)

    def bob_challenge(k):
        def action(ctx: Context) -> None:
            ctx.emit(f"y{k}", F(ctx.rng.bits(n)), to="A")
        return action

    def alice_round(k):
        def action(ctx: Context) -> None:
            if k <= m:
                y = ctx.read(f"y{k}")
                a = ctx.read("a")
                if k == 1:
                    x = _scaled(ctx.read("commit_bit"), y) + a[0]
                else:
                    x = y * a[k - 2] + a[k - 1]
                ctx.emit(f"x{k}", x, to="B")
            else:
                ctx.emit("d", ctx.read("commit_bit"), to="B")
                ctx.emit(f"x{k}", ctx.read("a")[-1], to="B")
        return action

    def bob_forward(k):
        def action(ctx: Context) -> None:
            other = 3 - ctx.location
            ctx.send(other, f"fwd:x{k}", ctx.read(f"x{k}"))
            ctx.send(other, f"fwd:y{k}", ctx.read(f"y{k}"))
        return action

    verify_site = site(m + 1)

    def bob_verify(ctx: Context) -> None:
        def get(label, k):
            return ctx.read(label if site(k) == verify_site else f"fwd:{label}")
        xs = [get(f"x{k}", k) for k in range(1, m + 1)] + [ctx.read(f"x{m + 1}")]
        bs = [get(f"y{k}", k) for k in range(1, m + 1)]
        dd = ctx.read("d")
        ctx.emit("verdict", int(dd in (0, 1) and multiround_verify(xs, bs, dd)))

    steps = [Step(-lay.sep / lay.c, 0, "A", "predistribution", predistribute)]
    for k in range(1, m + 2):
        t = lay.time(k)
        if k <= m:
            steps.append(Step(t, site(k), "B", f"round{k}", bob_challenge(k)))
        steps.append(Step(t, site(k), "A", f"round{k}", hooks.get(f"round{k}", alice_round(k))))
        if k <= m:
            steps.append(Step(t, site(k), "B", f"round{k}", bob_forward(k)))
        if k == 1 and adversary is not None and adversary.global_command:
            steps += [Step(t, loc, "R", "challenge", issue_challenge(challenge)) for loc in (1, 2)]
    if adversary is not None and not adversary.global_command:
        # placed just before the opening action so it is processed first
        steps.insert(-1, Step(lay.time(m + 1), verify_site, "R", "challenge", issue_challenge(challenge)))
    steps.append(Step(lay.verify_time, verify_site, "B", "verify", bob_verify))

    scen = Scenario(lay.locations, steps, seed=seed, c=lay.c, local_latency=local_latency,
                    name=f"multiround(n={n},m={m})")
    tr = run(scen)
    accepted = bool(tr.get("verdict").value)
    unveiled = tr.get("d").value
    xv = lay.locations[verify_site]
    openings = ((lay.locations[site(m)], lay.time(m)), (xv, lay.time(m + 1)))
    return CommitmentOutcome(
        "multiround", accepted, unveiled, lay.time(1), lay.time(m + 1), lay.verify_time, openings, xv, lay.c,
        (), tr, scen,
        extra={"n": n, "m": m, "seed": seed, "physical": lay.physical, "round_interval": _num(lay.tau),
               "duration": _num(lay.time(m + 1) - lay.time(1)),
               "time_unit": "s" if lay.physical else "natural (c = 1)"},
    )


def _num(v):
    return float(v) if isinstance(v, float) else str(v)


def zeros_adversary(n: int, m: int, global_command: bool = True) -> Adversary:
    """Announces x_k = 0 throughout and opens whatever the challenge asks."""
    zero = Field(n).zero

    def send_zero(k):
        def action(ctx: Context) -> None:
            ctx.emit(f"x{k}", zero, to="B")
        return action

    def open_(ctx: Context) -> None:
        ctx.emit("d", ctx.read(f"challenge@{ctx.location}"), to="B")
        ctx.emit(f"x{m + 1}", zero, to="B")

    hooks = {f"round{k}": send_zero(k) for k in range(1, m + 1)}
    hooks[f"round{m + 1}"] = open_
    return Adversary(hooks, "zeros", global_command)
