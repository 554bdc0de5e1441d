"""The entangled attack used inside the BB84-plus-commitment construction.

Alice stores Bob's qubit |phi> (after H^theta) as the control register and
runs the entangled attack on the outcome commitment. Opened rounds look
like honest measurements; unopened rounds can be undone to give |phi> back.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from relcommit.certify.quantum import MAX_STATEVECTOR_N
from relcommit.certify.statevector import HADAMARD, SmallStatevector, controlled_shift, maximally_entangled


@dataclass(frozen=True)
class CanonicalBreakReport:
    n: int
    theta: int
    honest: tuple[float, float]             # honest outcome distribution in basis theta
    attack: tuple[float, float]             # value Bob's check pins down, b != 0
    unveil_success: tuple[float, float]     # Pr[opening d passes Bob's check]
    ambiguous_weight: float                 # Pr[b = 0], where both openings pass
    total_variation: float
    min_recovery_fidelity: float

    @property
    def ok(self) -> bool:
        return self.total_variation < 1e-12 and abs(self.min_recovery_fidelity - 1) < 1e-12

    def to_json(self) -> dict:
        return {
            "n": self.n, "theta": self.theta, "honest_distribution": list(self.honest),
            "attack_distribution": list(self.attack), "unveil_success": list(self.unveil_success),
            "ambiguous_weight": self.ambiguous_weight, "total_variation": self.total_variation,
            "min_recovery_fidelity": self.min_recovery_fidelity, "ok": self.ok,
        }


def _normalise(phi) -> np.ndarray:
    v = np.asarray(phi, dtype=complex).reshape(2)
    norm = np.linalg.norm(v)
    if norm == 0:
        raise ValueError("phi must be non-zero")
    return v / norm


def committed_state(n: int, phi, theta: int, b: int) -> SmallStatevector:
    """State on (A1, A2, C) after A1 applies U^b, before any measurement."""
    stored = HADAMARD @ _normalise(phi) if theta else _normalise(phi)
    psi = maximally_entangled(n).tensor(SmallStatevector(stored))
    return psi.apply(controlled_shift(n, b), list(range(n)) + [2 * n])


def recover(n: int, post: SmallStatevector, b: int, theta: int) -> SmallStatevector:
    """Recombine A2 with C and undo the shift (then H^theta) on the unmeasured registers."""
    st = post.apply(controlled_shift(n, b), list(range(n, 2 * n)) + [2 * n])
    return st.apply(HADAMARD, [2 * n]) if theta else st


def canonical_break_demo(n: int, phi, theta: int = 0) -> CanonicalBreakReport:
    if not 1 <= n <= MAX_STATEVECTOR_N:
        raise ValueError(f"the demonstration runs on statevectors and needs 1 <= n <= {MAX_STATEVECTOR_N}")
    if theta not in (0, 1):
        raise ValueError("theta must be a bit")
    v = _normalise(phi)
    q = 1 << n
    stored = HADAMARD @ v if theta else v
    honest = tuple(float(abs(a) ** 2) for a in stored)

    attack = np.zeros(2)
    success = np.zeros(2)
    fidelity = 1.0
    for b in range(q):
        psi = committed_state(n, v, theta, b)
        joint = psi.probabilities(range(2 * n)).reshape(q, q)    # (X1, X2)
        for x1 in range(q):
            for x2 in range(q):
                p = joint[x1, x2] / q
                if p == 0:
                    continue
                if x1 == x2:
                    success[0] += p
                if x1 ^ x2 == b:
                    success[1] += p
                if b and x1 == x2:
                    attack[0] += p
                elif b and x1 ^ x2 == b:
                    attack[1] += p
            # unopened: measure A1 only, then recombine A2 and C
            px, post = psi.project(list(range(n)), x1)
            if post is None:
                continue
            target = SmallStatevector.basis(x1, n).tensor(SmallStatevector.basis(x1, n)).tensor(SmallStatevector(v))
            fidelity = min(fidelity, recover(n, post, b, theta).fidelity(target))
    opened = q - 1
    attack = attack * q / opened if opened else attack
    tv = 0.5 * float(np.abs(attack - np.array(honest)).sum())
    return CanonicalBreakReport(n, theta, honest, (float(attack[0]), float(attack[1])),
                                (float(success[0]), float(success[1])), 1 / q, tv, fidelity)
