"""Entangled attack on the two-agent commitment and why no certificate D survives it.

A1 and A2 share a maximally entangled pair of n-qubit registers; A1 holds a
control qubit in |+>. On challenge b, A1 applies a controlled XOR-by-b to her
register and measures it (X1). A2 later measures hers (X2). Conditional on
X1 = x and B = b, X2 is x or x XOR b with equal probability.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from relcommit.certify.classical import CertificationAssignment
from relcommit.certify.statevector import PLUS, SmallStatevector, controlled_shift, maximally_entangled

MAX_STATEVECTOR_N = 3
FLOOR = 0.25


@dataclass(frozen=True)
class AttackJoint:
    n: int
    probs: np.ndarray     # probs[x1, b, x2]

    @property
    def q(self) -> int:
        return 1 << self.n

    def success(self) -> np.ndarray:
        """success[d, x, b] = Pr[X1 XOR X2 = d·b | X1 = x, B = b]."""
        q = self.q
        x = np.arange(q)[:, None]
        b = np.arange(q)[None, :]
        marg = self.probs.sum(axis=2)
        with np.errstate(invalid="ignore", divide="ignore"):
            s0 = np.take_along_axis(self.probs, np.broadcast_to(x, (q, q))[..., None], 2)[..., 0] / marg
            s1 = np.take_along_axis(self.probs, (x ^ b)[..., None], 2)[..., 0] / marg
        return np.nan_to_num(np.stack([s0, s1]))

    def p(self, d: int) -> float:
        return float((self.success()[d] * self.probs.sum(axis=2)).sum())

    @property
    def marginal_x1_b(self) -> np.ndarray:
        return self.probs.sum(axis=2)


def attack_p(n: int) -> Fraction:
    """p0 = p1 = 1/2 + 2^{-(n+1)}."""
    return Fraction(1, 2) + Fraction(1, 1 << (n + 1))


def quantum_attack_joint(n: int) -> AttackJoint:
    if n < 1:
        raise ValueError("n must be positive")
    if n > 10:
        raise ValueError("the dense joint has 2^{3n} entries; n <= 10 supported")
    q = 1 << n
    probs = np.zeros((q, q, q))
    x = np.arange(q)
    w = 1.0 / (q * q)
    for b in range(q):
        probs[x, b, x] += w / 2
        probs[x, b, x ^ b] += w / 2
    return AttackJoint(n, probs)


def attack_state(n: int, b: int) -> SmallStatevector:
    """|psi> on (A1, A2, C) after A1 applies U^b to (A1, C)."""
    if n > MAX_STATEVECTOR_N:
        raise ValueError(f"statevector checks need n <= {MAX_STATEVECTOR_N}")
    psi = maximally_entangled(n).tensor(PLUS)
    a1 = list(range(n))
    c = [2 * n]
    return psi.apply(controlled_shift(n, b), a1 + c)


def statevector_attack_joint(n: int) -> AttackJoint:
    """The same joint, read off a full simulation of the entangled attack."""
    q = 1 << n
    probs = np.zeros((q, q, q))
    for b in range(q):
        pr = attack_state(n, b).probabilities(range(2 * n)).reshape(q, q)
        probs[:, b, :] = pr / q
    return AttackJoint(n, probs)


@dataclass(frozen=True)
class ViolationFloor:
    terms: tuple[float, float]      # Pr[D=d and unveil d]
    pr_d: tuple[float, float]

    @property
    def value(self) -> float:
        return max(self.terms)

    def to_json(self) -> dict:
        return {"floor": self.value, "terms": list(self.terms), "pr_D": list(self.pr_d)}


def violation_floor(joint: AttackJoint, D: CertificationAssignment) -> ViolationFloor:
    w = np.asarray(D.weights, dtype=float)
    if w.shape != (2, joint.q, joint.q):
        raise ValueError("D must assign weights to every (x1, b)")
    if not np.allclose(w.sum(axis=0), joint.marginal_x1_b, atol=1e-12, rtol=0):
        raise ValueError("D is inconsistent with the attack's distribution of (X1, B)")
    s = joint.success()
    terms = (float((w[0] * s[0]).sum()), float((w[1] * s[1]).sum()))
    pr_d = (float(w[0].sum()), float(w[1].sum()))
    res = ViolationFloor(terms, pr_d)
    # each term is at least Pr[D=d]/2 and the two Pr[D=d] sum to one
    if res.value < FLOOR - 1e-12 or any(t < p / 2 - 1e-12 for t, p in zip(terms, pr_d)):
        raise AssertionError(f"violation floor {res.value} fell below 1/4")
    return res


def constant_D(joint: AttackJoint, d: int) -> CertificationAssignment:
    return CertificationAssignment.deterministic(np.full((joint.q, joint.q), d), joint.marginal_x1_b)


def coin_D(joint: AttackJoint, p1: float = 0.5) -> CertificationAssignment:
    m = joint.marginal_x1_b
    return CertificationAssignment(np.stack([(1 - p1) * m, p1 * m]), m)


@dataclass(frozen=True)
class FloorSearch:
    n: int
    family: str
    size: int
    minimum: float               # min over the family of max_d Pr[D=d and unveil d]
    argmin: np.ndarray           # weights of D at the minimum, shape (2, q, q)

    @property
    def holds(self) -> bool:
        return self.minimum >= FLOOR - 1e-12

    def to_json(self) -> dict:
        return {"n": self.n, "family": self.family, "size": self.size, "min_floor": self.minimum,
                "holds": self.holds}


def exhaustive_deterministic_floor(n: int, joint: AttackJoint | None = None, max_states: int = 16) -> FloorSearch:
    """Every deterministic D = h(X1, B); 2^{4^n} of them."""
    joint = joint or quantum_attack_joint(n)
    q = joint.q
    k = q * q
    if k > max_states:
        raise ValueError(f"2^{k} deterministic assignments are too many to enumerate")
    m = joint.marginal_x1_b.reshape(-1)
    s = joint.success().reshape(2, -1)
    h = ((np.arange(1 << k)[:, None] >> np.arange(k)[None, :]) & 1).astype(float)
    t1 = h @ (m * s[1])
    t0 = (1 - h) @ (m * s[0])
    score = np.maximum(t0, t1)
    i = int(score.argmin())
    w = np.stack([(1 - h[i]) * m, h[i] * m]).reshape(2, q, q)
    violation_floor(joint, CertificationAssignment(w, joint.marginal_x1_b))
    return FloorSearch(n, "deterministic h(X1, B)", 1 << k, float(score[i]), w)


def random_stochastic_floor(n: int, samples: int = 10_000, seed: int = 0, joint: AttackJoint | None = None) -> FloorSearch:
    """Random p(D=1 | x1, b) tables."""
    joint = joint or quantum_attack_joint(n)
    q = joint.q
    rng = np.random.default_rng(seed)
    m = joint.marginal_x1_b.reshape(-1)
    s = joint.success().reshape(2, -1)
    u = rng.random((samples, q * q))
    # mix in sharper tables so near-deterministic D are represented too
    u[samples // 2:] = np.round(u[samples // 2:])
    t1 = u @ (m * s[1])
    t0 = (1 - u) @ (m * s[0])
    score = np.maximum(t0, t1)
    i = int(score.argmin())
    w = np.stack([(1 - u[i]) * m, u[i] * m]).reshape(2, q, q)
    violation_floor(joint, CertificationAssignment(w, joint.marginal_x1_b))
    return FloorSearch(n, "random stochastic p(D | X1, B)", samples, float(score[i]), w)
