"""Honest execution of the BB84-style commitment with imperfect devices.

Bob sends n weak-coherent pulses encoding random (theta_k, x_k). Alice
measures every pulse in basis d and reports the rounds with a click (the
valid set M). Because honest states are products of single-qubit states,
each round is simulated from its sufficient statistics: Poisson photon
detection, Born-rule outcome, and a bit flip with probability err.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from relcommit.qcommit.states import BasisPair, DeviceModel


@dataclass
class QcommitRun:
    n: int
    theta: np.ndarray        # Bob's bases
    x: np.ndarray            # Bob's bits
    y: np.ndarray            # Alice's outcomes, -1 where nothing was detected
    clicks: np.ndarray       # detections Alice keeps and reports
    d: int
    aborted: bool
    accepted: bool
    error_fraction: float | None

    @property
    def valid(self) -> np.ndarray:
        return np.flatnonzero(self.clicks)

    @property
    def m(self) -> int:
        return int(self.clicks.sum())

    def to_json(self) -> dict:
        return {"n": self.n, "d": self.d, "valid_rounds": self.m, "aborted": self.aborted,
                "accepted": self.accepted, "error_fraction": self.error_fraction}


def equalisation_keep_probability(dev: DeviceModel, basis: int) -> float:
    """Chance of keeping a click in ``basis`` so both settings report equally often on average."""
    p = dev.click_probability(basis)
    low = min(dev.click_probability(0), dev.click_probability(1))
    return 1.0 if p == 0 else low / p


def reported_click_probability(dev: DeviceModel, basis: int, equalise: bool = True) -> float:
    keep = equalisation_keep_probability(dev, basis) if equalise else 1.0
    return dev.click_probability(basis) * keep


def honest_run(
    n: int,
    pair: BasisPair | None,
    dev: DeviceModel,
    d: int,
    seed: int,
    equalise: bool = True,
) -> QcommitRun:
    if d not in (0, 1):
        raise ValueError("d must be a bit")
    if n < 1:
        raise ValueError("n must be positive")
    pair = pair or BasisPair.bb84()
    rng = np.random.default_rng(seed)
    theta = rng.integers(0, 2, n)
    x = rng.integers(0, 2, n)

    photons = rng.poisson(dev.mu * dev.efficiency(d), n)
    clicks = photons >= 1
    if equalise and dev.eta0 is not None:
        keep = equalisation_keep_probability(dev, d)
        clicks &= rng.random(n) < keep

    # Born probability of outcome 0 when measuring basis d on |psi_x^theta>
    p0 = np.array([[pair.outcome_probability(t, b, d, 0) for b in (0, 1)] for t in (0, 1)])
    outcome = (rng.random(n) >= p0[theta, x]).astype(np.int64)
    flips = (rng.random(n) < dev.err) & (theta == d)
    outcome ^= flips.astype(np.int64)
    y = np.where(clicks, outcome, -1)

    required = math.ceil(dev.gamma * n - 1e-12)
    if clicks.sum() < required:
        return QcommitRun(n, theta, x, y, clicks, d, True, False, None)

    # both of Alice's agents announce (d, y); honest agents agree by construction
    checked = clicks & (theta == d)
    size = int(checked.sum())
    mismatches = int((y[checked] != x[checked]).sum())
    accepted = mismatches <= dev.delta * size + 1e-12 * size
    frac = mismatches / size if size else 0.0
    return QcommitRun(n, theta, x, y, clicks, d, False, bool(accepted), frac)


def accept_rate(n: int, pair: BasisPair | None, dev: DeviceModel, seeds, d: int = 0) -> float:
    runs = [honest_run(n, pair, dev, d, s) for s in seeds]
    return sum(r.accepted for r in runs) / len(runs)


@dataclass
class DelayedCommitment:
    """Commit to a random r with the quantum protocol, later announce e = d XOR r."""

    run: QcommitRun
    r: int
    announcement: int

    @property
    def unveiled(self) -> int:
        return self.announcement ^ self.run.d

    @property
    def accepted(self) -> bool:
        return self.run.accepted


def delayed_commit_run(n: int, pair: BasisPair | None, dev: DeviceModel, d: int, seed: int) -> DelayedCommitment:
    if d not in (0, 1):
        raise ValueError("d must be a bit")
    r = int(np.random.default_rng([seed, 1]).integers(0, 2))
    run = honest_run(n, pair, dev, r, seed)
    return DelayedCommitment(run, r, d ^ r)
