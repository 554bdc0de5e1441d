"""Exact classical values by exhaustive search over deterministic strategies.

Enumeration order: the player with the most response tables (the last one on
ties) is moved to the end; strategies are then ordered lexicographically by
player, and within a player by its response table read in sorted view order.
Rather than looping over that final player's tables, each assignment of the
others is completed with a per-view best response (smallest output on ties),
which is exactly the lexicographically first optimal completion. The first
strategy reaching the maximum is kept as the witness.

Values are accumulated as integers over a common denominator, so the result
is an exact ``Fraction``.
"""
from __future__ import annotations

import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce

import numpy as np

from relcommit.games.model import DeterministicStrategy, GameSpec

DEFAULT_BUDGET = 2**32
_CELLS_PER_BATCH = 1 << 22


class BudgetExceeded(ValueError):
    pass


@dataclass(frozen=True)
class GameValue:
    value: Fraction
    witness: DeterministicStrategy
    strategy_count: int
    evaluated: int
    order: tuple[int, ...]


@dataclass
class _Compiled:
    order: tuple[int, ...]          # enumeration order of player indices, best responder last
    views: list[list[tuple]]        # per player, sorted views
    nout: list[int]
    vidx: list[np.ndarray]          # per player, view index of each input config
    weights: np.ndarray             # integer weight per config
    denom: int
    win: np.ndarray                 # flat 0/1 table indexed by config and output indices
    strides: list[int]              # stride of each player's output index in ``win``
    cstride: int


def _compile(game: GameSpec) -> _Compiled:
    configs = game.inputs()
    denom = reduce(math.lcm, (p.denominator for _, p in configs), 1)
    weights = np.array([int(p * denom) for _, p in configs], dtype=np.int64)
    views, vidx = [], []
    for j in range(game.m):
        vs = game.views(j)
        pos = {v: i for i, v in enumerate(vs)}
        views.append(vs)
        vidx.append(np.array([pos[game.view(j, x)] for x, _ in configs], dtype=np.int64))
    nout = [len(p.outputs) for p in game.players]
    tables = [len(p.outputs) ** len(views[j]) for j, p in enumerate(game.players)]
    br = max(range(game.m), key=lambda j: (tables[j], j))
    order = tuple([j for j in range(game.m) if j != br] + [br])

    strides = [0] * game.m
    s = 1
    for j in reversed(range(game.m)):
        strides[j] = s
        s *= nout[j]
    cstride = s
    win = np.zeros(len(configs) * cstride, dtype=np.int64)
    outputs = [p.outputs for p in game.players]
    for c, (x, _) in enumerate(configs):
        for combo in np.ndindex(*nout):
            if game.predicate(x, tuple(outputs[j][combo[j]] for j in range(game.m))):
                win[c * cstride + sum(combo[j] * strides[j] for j in range(game.m))] = 1
    return _Compiled(order, views, nout, vidx, weights, denom, win, strides, cstride)


def _digit_layout(cp: _Compiled):
    """Mixed-radix digits for the non-best-responding players, most significant first."""
    digits = []  # (player, view position, base)
    for j in cp.order[:-1]:
        for v in range(len(cp.views[j])):
            digits.append((j, v, cp.nout[j]))
    weights = [1] * len(digits)
    for i in range(len(digits) - 2, -1, -1):
        weights[i] = weights[i + 1] * digits[i + 1][2]
    total = weights[0] * digits[0][2] if digits else 1
    return digits, weights, total


def _scan(cp: _Compiled, lo: int, hi: int):
    """Best (score, index, best-response table) over others-assignments in [lo, hi)."""
    digits, dweights, _ = _digit_layout(cp)
    br = cp.order[-1]
    nconf = len(cp.weights)
    nv = len(cp.views[br])
    ob = cp.nout[br]
    onehot = np.zeros((nconf, nv), dtype=np.int64)
    onehot[np.arange(nconf), cp.vidx[br]] = cp.weights
    offsets = np.arange(ob, dtype=np.int64) * cp.strides[br]
    base_c = np.arange(nconf, dtype=np.int64) * cp.cstride
    batch = max(1, _CELLS_PER_BATCH // max(1, nconf * ob))

    best = (-1, -1, None)
    start = lo
    while start < hi:
        stop = min(hi, start + batch)
        idx = np.arange(start, stop, dtype=np.int64)
        flat = np.broadcast_to(base_c, (len(idx), nconf)).copy()
        for d, (j, v, b) in enumerate(digits):
            out = (idx // dweights[d]) % b
            mask = cp.vidx[j] == v
            flat[:, mask] += (out * cp.strides[j])[:, None]
        gathered = cp.win[flat[:, :, None] + offsets[None, None, :]]  # (K, C, O)
        scores = np.einsum("kco,cv->kvo", gathered, onehot)
        totals = scores.max(axis=2).sum(axis=1)
        k = int(np.argmax(totals))
        if totals[k] > best[0]:
            best = (int(totals[k]), int(idx[k]), scores[k].argmax(axis=1))
        start = stop
    return best


def _threads(requested: int | None) -> int:
    cap = os.environ.get("RBC_THREADS")
    n = requested if requested is not None else 1
    if cap:
        n = min(n, max(1, int(cap)))
    return max(1, n)


def classical_value_bruteforce(
    game: GameSpec, budget: int = DEFAULT_BUDGET, workers: int | None = None, chunks: int | None = None
) -> GameValue:
    """Exact classical value with its lexicographically first witness.

    ``workers`` > 1 farms disjoint index ranges out to processes; ``chunks``
    forces the range split even in-process (used to test the merge rule).
    Ranges are merged by maximum score, ties going to the smallest index, so
    any split returns the serial answer.
    """
    total = game.strategy_count()
    if total > budget:
        raise BudgetExceeded(f"{game.name}: {total} deterministic strategies exceed the budget of {budget}")
    cp = _compile(game)
    _, _, n_others = _digit_layout(cp)
    nworkers = _threads(workers)
    nchunks = max(1, min(n_others, chunks or nworkers))
    bounds = [n_others * i // nchunks for i in range(nchunks + 1)]
    ranges = [(bounds[i], bounds[i + 1]) for i in range(nchunks) if bounds[i] < bounds[i + 1]]
    if nworkers > 1 and len(ranges) > 1:
        with ProcessPoolExecutor(max_workers=nworkers) as pool:
            results = list(pool.map(_scan, [cp] * len(ranges), *zip(*ranges)))
    else:
        results = [_scan(cp, lo, hi) for lo, hi in ranges]
    score, index, br_table = max(results, key=lambda r: (r[0], -r[1]))
    return GameValue(Fraction(score, cp.denom), _witness(game, cp, index, br_table), total, n_others, cp.order)


def _witness(game: GameSpec, cp: _Compiled, index: int, br_table) -> DeterministicStrategy:
    digits, dweights, _ = _digit_layout(cp)
    tables: list[dict] = [dict() for _ in range(game.m)]
    for d, (j, v, b) in enumerate(digits):
        tables[j][cp.views[j][v]] = game.players[j].outputs[(index // dweights[d]) % b]
    br = cp.order[-1]
    for v, o in enumerate(br_table):
        tables[br][cp.views[br][v]] = game.players[br].outputs[int(o)]
    return DeterministicStrategy(tuple(tables))
