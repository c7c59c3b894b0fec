"""Dense 2^n-amplitude statevector with in-place gate kernels.

Convention: little-endian, qubit q is bit q of the basis index; bit 0 is the
Pauli-Z eigenvalue +1, bit 1 is eigenvalue -1.  Bitstrings are written with
qubit 0 as the first character, so character v matches partition bit b_v.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .graphs import Graph

MAX_QUBITS = 24  # 2^24 amplitudes, 256 MiB

_SQRT1_2 = 1.0 / math.sqrt(2.0)


@dataclass(frozen=True)
class SampleCounts:
    """Measurement outcomes: bitstring -> occurrence count."""

    counts: dict[str, int]
    total_shots: int


def bitstring(index: int, n_qubits: int) -> str:
    """Basis index as a bitstring, qubit 0 first."""
    return "".join("1" if (index >> q) & 1 else "0" for q in range(n_qubits))


def bitstring_to_index(bits: str) -> int:
    return sum(1 << q for q, b in enumerate(bits) if b == "1")


class StateVector:
    """Mutable n-qubit pure state; gates are applied in place."""

    __slots__ = ("n_qubits", "amplitudes")

    def __init__(self, n_qubits: int, amplitudes: np.ndarray):
        if not 1 <= n_qubits <= MAX_QUBITS:
            raise ValueError(f"n_qubits must be in [1, {MAX_QUBITS}], got {n_qubits}")
        if amplitudes.shape != (1 << n_qubits,):
            raise ValueError("amplitude array shape does not match qubit count")
        self.n_qubits = n_qubits
        self.amplitudes = np.ascontiguousarray(amplitudes, dtype=np.complex128)

    @classmethod
    def plus_state(cls, n_qubits: int) -> "StateVector":
        """|+>^n: every amplitude 2^(-n/2), phase 0."""
        if not 1 <= n_qubits <= MAX_QUBITS:
            raise ValueError(f"n_qubits must be in [1, {MAX_QUBITS}], got {n_qubits}")
        size = 1 << n_qubits
        amps = np.full(size, 1.0 / math.sqrt(size), dtype=np.complex128)
        return cls(n_qubits, amps)

    @classmethod
    def computational_basis(cls, n_qubits: int, index: int) -> "StateVector":
        if not 0 <= index < (1 << n_qubits):
            raise ValueError(f"basis index {index} out of range for n={n_qubits}")
        amps = np.zeros(1 << n_qubits, dtype=np.complex128)
        amps[index] = 1.0
        return cls(n_qubits, amps)

    def copy(self) -> "StateVector":
        return StateVector(self.n_qubits, self.amplitudes.copy())

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def probabilities(self) -> np.ndarray:
        a = self.amplitudes
        return a.real * a.real + a.imag * a.imag

    def _check_qubit(self, q: int) -> None:
        if not 0 <= q < self.n_qubits:
            raise ValueError(f"qubit {q} out of range for n={self.n_qubits}")

    def apply_hadamard(self, q: int) -> None:
        self._check_qubit(q)
        _kernels.apply_su2(self.amplitudes, q, _SQRT1_2, _SQRT1_2, _SQRT1_2, -_SQRT1_2)

    def apply_rx(self, q: int, theta: float) -> None:
        """exp(-i*theta*X/2) on qubit q."""
        self._check_qubit(q)
        c = math.cos(theta / 2.0)
        s = math.sin(theta / 2.0)
        _kernels.apply_su2(self.amplitudes, q, c, -1j * s, -1j * s, c)

    def apply_rz(self, q: int, theta: float) -> None:
        """diag(e^{-i*theta/2}, e^{+i*theta/2}) on qubit q."""
        self._check_qubit(q)
        half = theta / 2.0
        _kernels.apply_qubit_phase(
            self.amplitudes, q, complex(math.cos(half), -math.sin(half)),
            complex(math.cos(half), math.sin(half)),
        )

    def apply_cnot(self, control: int, target: int) -> None:
        self._check_qubit(control)
        self._check_qubit(target)
        if control == target:
            raise ValueError("control and target must differ")
        _kernels.apply_cnot(self.amplitudes, control, target)

    def apply_zz(self, u: int, v: int, gamma: float) -> None:
        """exp(-i*gamma*Z_u Z_v): phase e^{-i gamma} where bits agree, e^{+i gamma} where they differ.

        Equivalent (up to global phase) to CNOT(u,v); RZ(2*gamma) on v; CNOT(u,v).
        """
        self._check_qubit(u)
        self._check_qubit(v)
        if u == v:
            raise ValueError("qubit indices must differ")
        p = complex(math.cos(gamma), -math.sin(gamma))
        _kernels.apply_zz_phase(self.amplitudes, u, v, p, p.conjugate())

    def sample_bitstrings(self, shots: int, seed: int) -> SampleCounts:
        """Seeded i.i.d. draws from the measurement distribution."""
        if shots < 1:
            raise ValueError(f"shots must be >= 1, got {shots}")
        rng = np.random.Generator(np.random.PCG64(seed))
        cdf = np.cumsum(self.probabilities())
        cdf[-1] = 1.0  # guard rounding at the top end
        draws = np.searchsorted(cdf, rng.random(shots), side="right")
        counts: dict[str, int] = {}
        for idx, cnt in zip(*np.unique(draws, return_counts=True)):
            counts[bitstring(int(idx), self.n_qubits)] = int(cnt)
        return SampleCounts(counts=counts, total_shots=shots)

    def dump_amplitudes(self) -> list[list[float]]:
        """Debug dump as [re, im] pairs."""
        return [[float(a.real), float(a.imag)] for a in self.amplitudes]


def zz_sum_diagonal(g: Graph) -> np.ndarray:
    """Diagonal of sum_{(u,v) in E} Z_u Z_v over basis indices, as int32."""
    size = 1 << g.n
    idx = np.arange(size, dtype=np.int64)
    acc = np.zeros(size, dtype=np.int32)
    for u, v in g.edges:
        acc += 1 - 2 * (((idx >> u) ^ (idx >> v)) & 1).astype(np.int32)
    return acc


def expected_zz_sum(s: StateVector, g: Graph) -> float:
    """<state| sum_E Z_u Z_v |state>, computed exactly from amplitudes."""
    if g.n != s.n_qubits:
        raise ValueError(f"graph has {g.n} vertices but state has {s.n_qubits} qubits")
    return _kernels.expect_diag(s.amplitudes, zz_sum_diagonal(g))


def expected_cut(s: StateVector, g: Graph) -> float:
    """Mean cut over the measurement distribution: (|E| - <sum ZZ>)/2."""
    return (g.n_edges - expected_zz_sum(s, g)) / 2.0
