"""Exhaustive hiding and binding audits for the multi-round commitment."""
from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterator

from relcommit.games.bounds import rational_le_float, recursive_bound
from relcommit.games.bruteforce import DEFAULT_BUDGET, BudgetExceeded, GameValue, classical_value_bruteforce
from relcommit.games.model import DeterministicStrategy, GameSpec, Player
from relcommit.gf2n import Field
from relcommit.protocols.multiround import MultiroundState, multiround_honest_response, multiround_verify
from relcommit.spacetime import alternating_layout, broadcast_reduction, build_graph

HIDING_BUDGET_BITS = 20

# A Bob script maps (round k, the x values it may see) to y_k.
BobScript = Callable[[int, tuple[int, ...]], int]


def visible_prefix(k: int, visibility: str = "causal") -> int:
    """How many of x_1, x_2, ... Bob's round-k agent can have seen."""
    if visibility == "causal":
        return max(0, k - 2)
    if visibility == "full":
        return k - 1
    raise ValueError(f"unknown visibility {visibility!r}")


@dataclass(frozen=True)
class TableScript:
    """Deterministic Bob: one lookup table per round, keyed by visible x values."""

    tables: tuple[dict, ...]
    visibility: str = "causal"

    def __call__(self, k: int, xs: tuple[int, ...]) -> int:
        return self.tables[k - 1][xs]


def all_bob_scripts(n: int, m: int, visibility: str = "causal") -> Iterator[TableScript]:
    q = 1 << n
    domains = [list(itertools.product(range(q), repeat=visible_prefix(k, visibility))) for k in range(1, m + 1)]
    per_round = [list(itertools.product(range(q), repeat=len(dom))) for dom in domains]
    for choice in itertools.product(*per_round):
        yield TableScript(tuple(dict(zip(dom, outs)) for dom, outs in zip(domains, choice)), visibility)


def count_bob_scripts(n: int, m: int, visibility: str = "causal") -> int:
    q = 1 << n
    total = 1
    for k in range(1, m + 1):
        total *= q ** (q ** visible_prefix(k, visibility))
    return total


@dataclass
class HidingAudit:
    n: int
    m: int
    distributions: dict[int, dict[int, dict[tuple, Fraction]]]  # d -> t -> transcript -> probability

    @property
    def uniform(self) -> bool:
        for per_t in self.distributions.values():
            for t, dist in per_t.items():
                expected = Fraction(1, 1 << (self.n * t))
                if len(dist) != 1 << (self.n * t) or any(p != expected for p in dist.values()):
                    return False
        return True


def hiding_audit_multiround(
    n: int, m: int, bob_strategy: BobScript, visibility: str = "causal", budget_bits: int = HIDING_BUDGET_BITS
) -> HidingAudit:
    """Exact distribution of (x_1..x_t), t <= m, over all of Alice's pads, for both d."""
    if n * m > budget_bits:
        raise BudgetExceeded(f"{n * m} bits of Alice randomness exceed the {budget_bits}-bit budget")
    F = Field(n)
    q = F.order
    weight = Fraction(1, q ** m)
    out: dict[int, dict[int, dict[tuple, Fraction]]] = {}
    for d in (0, 1):
        counters = {t: Counter() for t in range(1, m + 1)}
        for pads in itertools.product(range(q), repeat=m):
            st = MultiroundState(n, m, d, [F(v) for v in pads])
            xs: list[int] = []
            for k in range(1, m + 1):
                st.y[k] = F(bob_strategy(k, tuple(xs[:visible_prefix(k, visibility)])))
                xs.append(multiround_honest_response(k, st).value)
                counters[k][tuple(xs)] += 1
        out[d] = {t: {tr: c * weight for tr, c in sorted(cnt.items())} for t, cnt in counters.items()}
    return HidingAudit(n, m, out)


def hiding_audit_all_scripts(n: int, m: int, visibility: str = "causal") -> tuple[int, bool]:
    """Run the hiding audit for every deterministic Bob; returns (scripts checked, all uniform)."""
    count, ok = 0, True
    for script in all_bob_scripts(n, m, visibility):
        count += 1
        ok = ok and hiding_audit_multiround(n, m, script, visibility).uniform
    return count, ok


# -- binding ----------------------------------------------------------------

@dataclass(frozen=True)
class MultiroundBindingPredicate:
    n: int
    m: int

    def __call__(self, inputs: tuple, outputs: tuple) -> bool:
        F = Field(self.n)
        *b, d = inputs
        return multiround_verify([F(v) for v in outputs], [F(v) for v in b], d)


def multiround_binding_game(n: int, m: int) -> GameSpec:
    """Non-communicating game equivalent to cheating in the multi-round commitment.

    Input coordinates are b_1..b_m and the challenge d. Player k answers
    x_k; its own inputs are b_k (rounds 1..m) plus d (rounds 2..m+1), and
    the broadcast reduction of the light-cone graph adds the inputs of every
    earlier round whose challenge could have reached it.
    """
    F = Field(n)
    q = F.order
    own = {1: (0,)}
    for k in range(2, m + 1):
        own[k] = (k - 1, m)
    own[m + 1] = (m,)
    graph = build_graph(alternating_layout(m + 1))
    reduced = broadcast_reduction(graph)
    players = []
    for k in range(1, m + 2):
        coords = set(own[k])
        for j in reduced[k]:
            coords.update(own[j])
        players.append(Player(f"A{k}", tuple(sorted(coords)), tuple(range(q))))
    alphabets = (tuple(range(q)),) * m + ((0, 1),)
    return GameSpec(f"multiround-binding(n={n},m={m})", alphabets, tuple(players), MultiroundBindingPredicate(n, m))


@dataclass
class BindingAudit:
    n: int
    m: int
    value: Fraction
    bound: float
    witness: DeterministicStrategy
    strategy_count: int

    @property
    def p0_plus_p1(self) -> Fraction:
        return 2 * self.value

    @property
    def within_bound(self) -> bool:
        return rational_le_float(self.p0_plus_p1 - 1, self.bound)


def binding_audit_multiround(n: int, m: int, budget: int = DEFAULT_BUDGET, workers: int | None = None) -> BindingAudit:
    """Exact max p0 + p1 over classical cheating strategies, against 1 + c_m."""
    game = multiround_binding_game(n, m)
    res: GameValue = classical_value_bruteforce(game, budget=budget, workers=workers)
    return BindingAudit(n, m, res.value, recursive_bound(1 << n, m).last, res.witness, res.strategy_count)


def honest_p0_plus_p1(n: int, m: int, d0: int = 0) -> Fraction:
    """p0 + p1 for honest Alice committed to d0, exact over all pads and challenges.

    Honest Alice always announces d0, so only p_{d0} can be non-zero.
    """
    F = Field(n)
    q = F.order
    accepted = {0: 0, 1: 0}
    total = 0
    for pads in itertools.product(range(q), repeat=m):
        for bs in itertools.product(range(q), repeat=m):
            st = MultiroundState(n, m, d0, [F(v) for v in pads])
            for k, b in enumerate(bs, start=1):
                st.y[k] = F(b)
            xs = [multiround_honest_response(k, st) for k in range(1, m + 2)]
            total += 1
            if multiround_verify(xs, st.b, d0):
                accepted[d0] += 1
    return Fraction(accepted[0] + accepted[1], total)
