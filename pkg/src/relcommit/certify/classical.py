"""Strong binding of the two-agent commitment against deterministic classical Alices.

A1 answers the challenge b with f(b); A2 opens d by sending g(d). Opening d
succeeds iff f(b) XOR g(d) = d·b. The certificate D is a function of b: it
is 1 exactly when f(b) has more than 2^{n/2} preimages.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np


@dataclass(frozen=True)
class CertificationAssignment:
    """Joint weights ``weights[d, *state]`` of D with the protocol state.

    ``state_distribution`` is the distribution D must marginalise to.
    """

    weights: np.ndarray
    state_distribution: np.ndarray

    def __post_init__(self):
        w = np.asarray(self.weights, dtype=float)
        if w.shape[0] != 2 or w.shape[1:] != np.shape(self.state_distribution):
            raise ValueError("weights must have shape (2, *state shape)")
        if (w < -1e-15).any():
            raise ValueError("weights must be non-negative")
        if not np.allclose(w.sum(axis=0), self.state_distribution, atol=1e-12, rtol=0):
            raise ValueError("D does not marginalise to the protocol state distribution")

    def pr_d(self, d: int) -> float:
        return float(np.asarray(self.weights)[d].sum())

    @classmethod
    def deterministic(cls, table, state_distribution) -> "CertificationAssignment":
        table = np.asarray(table)
        dist = np.asarray(state_distribution, dtype=float)
        return cls(np.stack([dist * (table == 0), dist * (table == 1)]), dist)


@dataclass(frozen=True)
class ClassicalCertificate:
    n: int
    f: tuple[int, ...]
    preimage_sizes: dict[int, int]
    t0: frozenset[int]
    t1: frozenset[int]
    table: tuple[int, ...]         # D as a function of b

    @property
    def assignment(self) -> CertificationAssignment:
        q = 1 << self.n
        return CertificationAssignment.deterministic(self.table, np.full(q, 1 / q))


def _check_f(f: Sequence[int]) -> tuple[int, int]:
    q = len(f)
    n = q.bit_length() - 1
    if q != 1 << n or n < 1:
        raise ValueError("f must be a table of length 2^n")
    if any(not 0 <= c < q for c in f):
        raise ValueError("f maps n-bit strings to n-bit strings")
    return n, q


def classical_D(f: Sequence[int]) -> ClassicalCertificate:
    n, q = _check_f(f)
    sizes: dict[int, int] = {}
    for c in f:
        sizes[c] = sizes.get(c, 0) + 1
    # |S(c)| <= 2^{n/2}  <=>  |S(c)|^2 <= 2^n, which stays exact for odd n
    t0 = frozenset(c for c in range(q) if sizes.get(c, 0) ** 2 <= q)
    t1 = frozenset(range(q)) - t0
    table = tuple(0 if f[b] in t0 else 1 for b in range(q))
    return ClassicalCertificate(n, tuple(f), dict(sorted(sizes.items())), t0, t1, table)


def strong_binding_terms(f: Sequence[int], table: Sequence[int], g0: int, g1: int) -> tuple[Fraction, Fraction]:
    """(Pr[D=0 and unveil 0], Pr[D=1 and unveil 1]) with b uniform."""
    n, q = _check_f(f)
    hit0 = sum(1 for b in range(q) if table[b] == 0 and f[b] ^ g0 == 0)
    hit1 = sum(1 for b in range(q) if table[b] == 1 and f[b] ^ g1 == b)
    return Fraction(hit0, q), Fraction(hit1, q)


def unveil_probabilities(f: Sequence[int], g0: int, g1: int) -> tuple[Fraction, Fraction]:
    """(p0, p1) for the deterministic strategy (f, g)."""
    n, q = _check_f(f)
    return (Fraction(sum(f[b] == g0 for b in range(q)), q),
            Fraction(sum(f[b] ^ g1 == b for b in range(q)), q))


@dataclass(frozen=True)
class ClassicalGuarantee:
    n: int
    worst: Fraction              # max over g and d of Pr[D=d and unveil d]
    worst_g: tuple[int, int]
    bound: float                 # 2^{-n/2}

    @property
    def holds(self) -> bool:
        # worst <= 2^{-n/2}  <=>  worst^2 <= 2^{-n}
        return self.worst ** 2 <= Fraction(1, 1 << self.n)


def classical_guarantee(f: Sequence[int], cert: ClassicalCertificate | None = None) -> ClassicalGuarantee:
    """Worst case over every opening function g, found without enumerating g pairs.

    The two terms depend on g(0) and g(1) separately, so each is maximised on
    its own; ``exhaustive_guarantee_over_g`` is the literal enumeration.
    """
    n, q = _check_f(f)
    cert = cert or classical_D(f)
    fa = np.asarray(f)
    tab = np.asarray(cert.table)
    b = np.arange(q)
    c0 = np.bincount(fa[tab == 0], minlength=q)             # hits of g(0) = c
    c1 = np.bincount((fa ^ b)[tab == 1], minlength=q)        # hits of g(1) = c
    g0, g1 = int(c0.argmax()), int(c1.argmax())
    worst = Fraction(int(max(c0[g0], c1[g1])), q)
    return ClassicalGuarantee(n, worst, (g0, g1), 2.0 ** (-n / 2))


def exhaustive_guarantee_over_g(f: Sequence[int], cert: ClassicalCertificate | None = None) -> Fraction:
    n, q = _check_f(f)
    cert = cert or classical_D(f)
    return max(max(strong_binding_terms(f, cert.table, g0, g1)) for g0, g1 in itertools.product(range(q), repeat=2))


@dataclass(frozen=True)
class ClassicalSweep:
    n: int
    functions: int
    worst: Fraction
    worst_f: tuple[int, ...]
    bound: float
    binding_worst: Fraction          # max p0 + p1 over the same strategies
    strong_implies_binding: bool     # per f: max_g (p0 + p1) - 1 <= 2 max_{g,d} Pr[D=d and unveil d]

    @property
    def holds(self) -> bool:
        return self.worst ** 2 <= Fraction(1, 1 << self.n)


def _sweep(n: int, functions, count: int) -> ClassicalSweep:
    q = 1 << n
    b = np.arange(q)
    worst, worst_f, bind, implied = Fraction(-1), None, Fraction(0), True
    for f in functions:
        res = classical_guarantee(f)
        if res.worst > worst:
            worst, worst_f = res.worst, f
        fa = np.asarray(f)
        best = Fraction(int(np.bincount(fa, minlength=q).max() + np.bincount(fa ^ b, minlength=q).max()), q)
        bind = max(bind, best)
        implied = implied and best - 1 <= 2 * res.worst
    return ClassicalSweep(n, count, worst, worst_f, 2.0 ** (-n / 2), bind, implied)


def exhaustive_classical(n: int, limit: int = 1 << 20) -> ClassicalSweep:
    q = 1 << n
    total = q ** q
    if total > limit:
        raise ValueError(f"{total} functions f exceed the enumeration limit {limit}")
    return _sweep(n, itertools.product(range(q), repeat=q), total)


def sampled_classical(n: int, samples: int, seed: int = 0) -> ClassicalSweep:
    """Random deterministic f for n too large to enumerate."""
    q = 1 << n
    rng = np.random.default_rng(seed)
    return _sweep(n, (tuple(int(v) for v in rng.integers(0, q, q)) for _ in range(samples)), samples)


def t1_size_bound_holds(cert: ClassicalCertificate) -> bool:
    """|T1| < 2^{n/2}."""
    return len(cert.t1) ** 2 < (1 << cert.n)


__all__ = [
    "CertificationAssignment", "ClassicalCertificate", "ClassicalGuarantee", "ClassicalSweep",
    "classical_D", "classical_guarantee", "exhaustive_classical", "exhaustive_guarantee_over_g",
    "sampled_classical", "strong_binding_terms", "t1_size_bound_holds", "unveil_probabilities",
]
