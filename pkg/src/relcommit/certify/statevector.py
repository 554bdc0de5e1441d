"""Dense statevector over a handful of qubits, enough for n <= 3 attack checks."""
from __future__ import annotations

import numpy as np

MAX_QUBITS = 7


class SmallStatevector:
    """Qubit 0 is the most significant position of the computational index."""

    def __init__(self, amplitudes, atol: float = 1e-12):
        amp = np.asarray(amplitudes, dtype=complex).reshape(-1)
        k = amp.size.bit_length() - 1
        if amp.size != 1 << k or k < 1:
            raise ValueError("amplitude count must be a power of two")
        if k > MAX_QUBITS:
            raise ValueError(f"{k} qubits exceed the {MAX_QUBITS}-qubit limit")
        if abs(np.vdot(amp, amp).real - 1) > atol:
            raise ValueError("state is not normalised")
        self.k = k
        self.amp = amp

    @classmethod
    def basis(cls, index: int, k: int) -> "SmallStatevector":
        v = np.zeros(1 << k, dtype=complex)
        v[index] = 1
        return cls(v)

    def tensor(self, other: "SmallStatevector") -> "SmallStatevector":
        return SmallStatevector(np.kron(self.amp, other.amp))

    def _tensor_view(self) -> np.ndarray:
        return self.amp.reshape((2,) * self.k)

    def apply(self, matrix, qubits) -> "SmallStatevector":
        qubits = list(qubits)
        u = np.asarray(matrix, dtype=complex)
        r = len(qubits)
        if u.shape != (1 << r, 1 << r):
            raise ValueError("matrix size does not match the qubit count")
        if not np.allclose(u.conj().T @ u, np.eye(1 << r), atol=1e-12):
            raise ValueError("matrix is not unitary")
        psi = np.moveaxis(self._tensor_view(), qubits, range(r))
        psi = (u @ psi.reshape(1 << r, -1)).reshape(psi.shape)
        return SmallStatevector(np.moveaxis(psi, range(r), qubits).reshape(-1))

    def probabilities(self, qubits) -> np.ndarray:
        """Joint computational-basis distribution of ``qubits``, indexed MSB first."""
        qubits = list(qubits)
        others = tuple(i for i in range(self.k) if i not in qubits)
        p = np.abs(self._tensor_view()) ** 2
        p = p.sum(axis=others) if others else p
        # remaining axes are in ascending qubit order; reorder to the request order
        order = sorted(qubits)
        p = np.transpose(p, [order.index(q) for q in qubits])
        return p.reshape(-1)

    def project(self, qubits, outcome: int) -> tuple[float, "SmallStatevector | None"]:
        """Probability of ``outcome`` on ``qubits`` and the normalised post-measurement state."""
        qubits = list(qubits)
        r = len(qubits)
        psi = np.moveaxis(self._tensor_view(), qubits, range(r)).reshape(1 << r, -1).copy()
        keep = psi[outcome].copy()
        psi[:] = 0
        psi[outcome] = keep
        prob = float(np.vdot(keep, keep).real)
        if prob == 0:
            return 0.0, None
        psi = psi.reshape((2,) * self.k) / np.sqrt(prob)
        return prob, SmallStatevector(np.moveaxis(psi, range(r), qubits).reshape(-1))

    def fidelity(self, other: "SmallStatevector") -> float:
        return float(abs(np.vdot(self.amp, other.amp)) ** 2)


def maximally_entangled(n: int) -> SmallStatevector:
    """2^{-n/2} sum_x |x>|x> on 2n qubits."""
    q = 1 << n
    v = np.zeros(q * q, dtype=complex)
    v[np.arange(q) * q + np.arange(q)] = q ** -0.5
    return SmallStatevector(v)


def controlled_shift(n: int, b: int) -> np.ndarray:
    """U^b on (register, control): |x>|0> -> |x>|0>, |x>|1> -> |x XOR b>|1>."""
    q = 1 << n
    u = np.zeros((2 * q, 2 * q))
    for x in range(q):
        u[2 * x, 2 * x] = 1
        u[2 * (x ^ b) + 1, 2 * x + 1] = 1
    return u


HADAMARD = np.array([[1, 1], [1, -1]]) / np.sqrt(2)
PLUS = SmallStatevector(np.array([1, 1]) / np.sqrt(2))
