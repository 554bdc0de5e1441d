from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class BasisPair:
    """Two orthonormal qubit bases; ``vectors[theta][x]`` is |psi_x^theta>."""

    vectors: tuple[tuple[tuple[complex, complex], tuple[complex, complex]], ...]

    def __post_init__(self):
        v = self.array
        if v.shape != (2, 2, 2):
            raise ValueError("need two bases of two 2-dimensional vectors")
        for theta in (0, 1):
            gram = v[theta].conj() @ v[theta].T
            if not np.allclose(gram, np.eye(2), atol=1e-12):
                raise ValueError(f"basis {theta} is not orthonormal")

    @property
    def array(self) -> np.ndarray:
        return np.array(self.vectors, dtype=complex)

    @classmethod
    def bb84(cls) -> "BasisPair":
        return cls.rotated(math.pi / 4)

    @classmethod
    def rotated(cls, angle: float) -> "BasisPair":
        """Computational basis and its real rotation by ``angle``."""
        c, s = math.cos(angle), math.sin(angle)
        return cls((((1, 0), (0, 1)), ((c, s), (-s, c))))

    @classmethod
    def from_overlap(cls, overlap: float) -> "BasisPair":
        if not 2 ** -0.5 - 1e-12 <= overlap <= 1:
            raise ValueError(f"overlap must lie in [1/sqrt(2), 1], got {overlap}")
        return cls.rotated(math.acos(min(1.0, overlap)))

    def state(self, theta: int, x: int) -> np.ndarray:
        return self.array[theta, x]

    @property
    def overlap(self) -> float:
        v = self.array
        return float(np.max(np.abs(v[0].conj() @ v[1].T)))

    @property
    def lambda0(self) -> float:
        return (1 + self.overlap) / 2

    @property
    def lambda1(self) -> float:
        return (1 - self.overlap) / 2

    def outcome_probability(self, prepared_theta: int, prepared_x: int, measured_theta: int, y: int) -> float:
        amp = self.state(measured_theta, y).conj() @ self.state(prepared_theta, prepared_x)
        return float(abs(amp) ** 2)


@dataclass(frozen=True)
class DeviceModel:
    mu: float              # mean photon number per pulse
    eta: float = 1.0       # detection efficiency
    err: float = 0.0       # bit-flip rate on same-basis rounds
    gamma: float = 0.0     # required fraction of reported detections
    delta: float = 0.0     # tolerated fractional error
    eta0: float | None = None  # optional basis-dependent efficiencies
    eta1: float | None = None

    def __post_init__(self):
        if self.mu < 0:
            raise ValueError("mu must be non-negative")
        for name in ("eta", "eta0", "eta1"):
            v = getattr(self, name)
            if v is not None and not 0 <= v <= 1:
                raise ValueError(f"{name} must lie in [0, 1]")
        if not 0 <= self.err < 0.5:
            raise ValueError("err must lie in [0, 1/2)")
        if not 0 <= self.gamma < 1:
            raise ValueError("gamma must lie in [0, 1)")
        if not 0 <= self.delta < 1:
            raise ValueError("delta must lie in [0, 1)")
        if (self.eta0 is None) != (self.eta1 is None):
            raise ValueError("give both eta0 and eta1 or neither")

    def efficiency(self, basis: int) -> float:
        if self.eta0 is None:
            return self.eta
        return self.eta0 if basis == 0 else self.eta1

    def click_probability(self, basis: int) -> float:
        return -math.expm1(-self.mu * self.efficiency(basis))

    def p_r(self, r: int, basis: int | None = None) -> float:
        """Probability of detecting r photons: Poisson with mean mu·eta."""
        lam = self.mu * (self.eta if basis is None else self.efficiency(basis))
        if lam == 0:
            return 1.0 if r == 0 else 0.0
        return math.exp(-lam + r * math.log(lam) - math.lgamma(r + 1))
