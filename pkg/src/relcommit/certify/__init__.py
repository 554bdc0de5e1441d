"""Strong binding (classical certification) of the two-agent commitment."""
from relcommit.certify.canonical import CanonicalBreakReport, canonical_break_demo
from relcommit.certify.classical import (
    CertificationAssignment,
    ClassicalCertificate,
    ClassicalGuarantee,
    ClassicalSweep,
    classical_D,
    classical_guarantee,
    exhaustive_classical,
    exhaustive_guarantee_over_g,
    sampled_classical,
    strong_binding_terms,
    t1_size_bound_holds,
    unveil_probabilities,
)
from relcommit.certify.quantum import (
    FLOOR,
    AttackJoint,
    FloorSearch,
    ViolationFloor,
    attack_p,
    attack_state,
    coin_D,
    constant_D,
    exhaustive_deterministic_floor,
    quantum_attack_joint,
    random_stochastic_floor,
    statevector_attack_joint,
    violation_floor,
)
from relcommit.certify.statevector import SmallStatevector

__all__ = [
    "AttackJoint", "CanonicalBreakReport", "CertificationAssignment", "ClassicalCertificate",
    "ClassicalGuarantee", "ClassicalSweep", "FLOOR", "FloorSearch", "SmallStatevector", "ViolationFloor",
    "attack_p", "attack_state", "canonical_break_demo", "classical_D", "classical_guarantee", "coin_D",
    "constant_D", "exhaustive_classical", "exhaustive_deterministic_floor", "exhaustive_guarantee_over_g",
    "quantum_attack_joint", "random_stochastic_floor", "sampled_classical", "statevector_attack_joint",
    "strong_binding_terms", "t1_size_bound_holds", "unveil_probabilities", "violation_floor",
]
