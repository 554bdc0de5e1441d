"""Multiplayer non-communicating games.

Inputs are a tuple of coordinates, each with its own finite alphabet. Player
j sees the coordinates listed in ``visible`` (its own input plus whatever the
broadcast reduction grants it) and answers with a symbol from ``outputs``.
Predicates must be picklable so that games can be shipped to worker processes,
which is why they are small classes rather than closures.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from functools import reduce
from typing import Callable, Mapping, Sequence

from relcommit.gf2n import Field


@dataclass(frozen=True)
class Player:
    name: str
    visible: tuple[int, ...]
    outputs: tuple[int, ...]


Predicate = Callable[[tuple, tuple], bool]


@dataclass(frozen=True)
class GameSpec:
    name: str
    alphabets: tuple[tuple[int, ...], ...]
    players: tuple[Player, ...]
    predicate: Predicate
    distribution: Mapping[tuple, Fraction] | None = None  # None means uniform on the product

    def __post_init__(self):
        ncoords = len(self.alphabets)
        for p in self.players:
            if any(not 0 <= i < ncoords for i in p.visible):
                raise ValueError(f"player {p.name} sees a coordinate outside 0..{ncoords - 1}")
            if not p.outputs:
                raise ValueError(f"player {p.name} has an empty output alphabet")
        if self.distribution is not None:
            total = sum(self.distribution.values(), Fraction(0))
            if total != 1:
                raise ValueError(f"input distribution sums to {total}, not 1")

    @property
    def m(self) -> int:
        return len(self.players)

    def inputs(self) -> list[tuple[tuple, Fraction]]:
        """Support of the input distribution with exact probabilities."""
        if self.distribution is not None:
            return [(k, Fraction(v)) for k, v in sorted(self.distribution.items()) if v]
        size = 1
        for a in self.alphabets:
            size *= len(a)
        p = Fraction(1, size)
        return [(x, p) for x in itertools.product(*self.alphabets)]

    def view(self, j: int, inputs: tuple) -> tuple:
        return tuple(inputs[i] for i in self.players[j].visible)

    def views(self, j: int) -> list[tuple]:
        return sorted({self.view(j, x) for x, _ in self.inputs()})

    def strategy_count(self) -> int:
        total = 1
        for j, p in enumerate(self.players):
            total *= len(p.outputs) ** len(self.views(j))
        return total

    def permute_players(self, perm: Sequence[int]) -> "GameSpec":
        """Game in which new player i is old player perm[i]."""
        if sorted(perm) != list(range(self.m)):
            raise ValueError(f"{perm!r} is not a permutation of the players")
        return GameSpec(
            f"{self.name}|perm{tuple(perm)}",
            self.alphabets,
            tuple(self.players[i] for i in perm),
            PermutedPredicate(self.predicate, tuple(perm)),
            self.distribution,
        )

    def translate_input(self, coord: int, shift: int) -> "GameSpec":
        """Relabel one input coordinate by x -> x XOR shift."""
        alphabet = self.alphabets[coord]
        if sorted(a ^ shift for a in alphabet) != sorted(alphabet):
            raise ValueError("translation must map the alphabet onto itself")
        dist = None
        if self.distribution is not None:
            dist = {_xor_at(x, coord, shift): p for x, p in self.distribution.items()}
        return GameSpec(
            f"{self.name}|xor{coord}:{shift}",
            self.alphabets,
            self.players,
            TranslatedPredicate(self.predicate, coord, shift),
            dist,
        )


def _xor_at(x: tuple, coord: int, shift: int) -> tuple:
    return x[:coord] + (x[coord] ^ shift,) + x[coord + 1:]


@dataclass(frozen=True)
class PermutedPredicate:
    inner: Predicate
    perm: tuple[int, ...]

    def __call__(self, inputs: tuple, outputs: tuple) -> bool:
        original = [None] * len(outputs)
        for new, old in enumerate(self.perm):
            original[old] = outputs[new]
        return self.inner(inputs, tuple(original))


@dataclass(frozen=True)
class TranslatedPredicate:
    inner: Predicate
    coord: int
    shift: int

    def __call__(self, inputs: tuple, outputs: tuple) -> bool:
        return self.inner(_xor_at(inputs, self.coord, self.shift), outputs)


@dataclass(frozen=True)
class DeterministicStrategy:
    """One response table per player, keyed by the player's view."""

    tables: tuple[Mapping[tuple, int], ...]

    def respond(self, game: GameSpec, inputs: tuple) -> tuple:
        return tuple(self.tables[j][game.view(j, inputs)] for j in range(game.m))

    def to_json(self) -> list[dict]:
        return [{",".join(map(str, v)): o for v, o in sorted(t.items())} for t in self.tables]

    @classmethod
    def constant(cls, game: GameSpec, value: int = 0) -> "DeterministicStrategy":
        return cls(tuple({v: value for v in game.views(j)} for j in range(game.m)))


def strategy_value(game: GameSpec, strategy: DeterministicStrategy) -> Fraction:
    return sum((p for x, p in game.inputs() if game.predicate(x, strategy.respond(game, x))), Fraction(0))


# -- concrete games ---------------------------------------------------------

def _log2_exact(q: int) -> int:
    if q < 2 or q & (q - 1):
        raise ValueError(f"field order must be a power of two, got {q}")
    return q.bit_length() - 1


@dataclass(frozen=True)
class ProductPredicate:
    """Win iff the field product of the inputs equals the sum of the outputs."""

    n: int

    def __call__(self, inputs: tuple, outputs: tuple) -> bool:
        F = Field(self.n)
        prod = reduce(lambda a, b: a * b, (F(v) for v in inputs))
        total = reduce(lambda a, b: a ^ b, outputs, 0)
        return prod.value == total


def product_game(q: int, m: int) -> GameSpec:
    """Number-on-the-forehead game over F_q: player k sees every input but its own."""
    n = _log2_exact(q)
    Field(n)  # rejects unsupported degrees
    if m < 1:
        raise ValueError("need at least one player")
    alphabet = tuple(range(q))
    players = tuple(
        Player(f"P{k + 1}", tuple(i for i in range(m) if i != k), alphabet) for k in range(m)
    )
    return GameSpec(f"product(q={q},m={m})", (alphabet,) * m, players, ProductPredicate(n))


@dataclass(frozen=True)
class ChshnPredicate:
    def __call__(self, inputs: tuple, outputs: tuple) -> bool:
        b, d = inputs
        return outputs[0] ^ outputs[1] == (b if d else 0)


def chshn_game(n: int) -> GameSpec:
    """Player 1 gets b in {0,1}^n, player 2 gets a bit d; win iff x1 XOR x2 = d·b."""
    if n < 1:
        raise ValueError("n must be positive")
    strings = tuple(range(1 << n))
    return GameSpec(
        f"chsh_{n}",
        (strings, (0, 1)),
        (Player("P1", (0,), strings), Player("P2", (1,), strings)),
        ChshnPredicate(),
    )
