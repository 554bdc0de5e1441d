"""1-out-of-2 oblivious transfer from two non-communicating Bobs.

The Bobs hold messages m0, m1 and a shared random pad r. Alice picks a
uniform bit alpha and asks B1 with alpha and B2 with alpha XOR c. With
delta = m0 XOR m1 the answers are

    w1 = m0 XOR r XOR alpha·delta,    w2 = r XOR (alpha XOR c)·delta,

so w1 XOR w2 = m_c, while each Bob sees a uniform query bit.
"""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from fractions import Fraction

from relcommit.bits import BitString, select, xor
from relcommit.netsim import Context, ProtocolTranscript, Scenario, Step, run

LOCATIONS = {0: Fraction(0), 1: Fraction(-1), 2: Fraction(1)}


def dot_responses(m0: BitString, m1: BitString, q1: int, q2: int, r: BitString) -> tuple[BitString, BitString]:
    delta = xor(m0, m1)
    return xor(xor(m0, r), select(q1, delta)), xor(r, select(q2, delta))


def dot_retrieve(m0: BitString, m1: BitString, c: int, alpha: int, r: BitString) -> BitString:
    w1, w2 = dot_responses(m0, m1, alpha, alpha ^ c, r)
    return xor(w1, w2)


@dataclass
class DotResult:
    message: BitString
    queries: tuple[int, int]
    transcript: ProtocolTranscript
    scenario: Scenario

    def to_json(self) -> dict:
        return {"protocol": "dot", "message": str(self.message), "queries": list(self.queries)}


def distributed_ot_run(m0: BitString, m1: BitString, c: int, seed: int = 0) -> DotResult:
    if m0.n != m1.n:
        raise ValueError("messages must have equal length")
    if c not in (0, 1):
        raise ValueError("c must be a bit")
    n = m0.n

    def predistribute_bob(ctx: Context) -> None:
        ctx.emit("messages", (m0, m1))
        ctx.emit("r", BitString(ctx.rng.bits(n), n))

    def predistribute_alice(ctx: Context) -> None:
        ctx.emit("alpha", ctx.rng.bit())
        ctx.emit("choice", c)

    def alice_query(which):
        def action(ctx: Context) -> None:
            alpha = ctx.read("alpha")
            ctx.emit(f"q{which}", alpha if which == 1 else alpha ^ ctx.read("choice"), to="B")
        return action

    def bob_answer(which):
        def action(ctx: Context) -> None:
            mm0, mm1 = ctx.read("messages")
            delta = xor(mm0, mm1)
            q, r = ctx.read(f"q{which}"), ctx.read("r")
            w = xor(xor(mm0, r), select(q, delta)) if which == 1 else xor(r, select(q, delta))
            ctx.emit(f"w{which}", w, to="A")
        return action

    def alice_forward(which):
        def action(ctx: Context) -> None:
            ctx.send(0, f"fwd:w{which}", ctx.read(f"w{which}"))
        return action

    def alice_combine(ctx: Context) -> None:
        ctx.emit("output", xor(ctx.read("fwd:w1"), ctx.read("fwd:w2")))

    steps = [
        Step(Fraction(-1), 0, "B", "predistribution", predistribute_bob),
        Step(Fraction(-1), 0, "A", "predistribution", predistribute_alice),
    ]
    for which in (1, 2):
        steps += [
            Step(Fraction(0), which, "A", "query", alice_query(which)),
            Step(Fraction(0), which, "B", "query", bob_answer(which)),
            Step(Fraction(0), which, "A", "query", alice_forward(which)),
        ]
    steps.append(Step(Fraction(1), 0, "A", "output", alice_combine))
    scen = Scenario(LOCATIONS, steps, seed=seed, name="dot")
    tr = run(scen)
    return DotResult(tr.get("output").value, (tr.get("q1").value, tr.get("q2").value), tr, scen)


def query_distribution(c: int, which: int) -> dict[int, Fraction]:
    """Exact distribution of the query bit one Bob receives, over Alice's alpha."""
    counts = Counter(alpha if which == 1 else alpha ^ c for alpha in (0, 1))
    return {q: Fraction(k, 2) for q, k in sorted(counts.items())}
