"""Noiseless statevector simulator with shot sampling.

Basis-index convention is little-endian: bit ``q`` of an amplitude index is
qubit ``q``.  Outcome strings in histograms are written in qubit order, so
character ``q`` of a key is the measured value of qubit ``q``.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass

import numpy as np

from . import kernels
from .circuit import BASE_KINDS, Circuit, CircuitError

DEFAULT_MAX_QUBITS = 20
NORM_TOL = 1e-9


class ResourceError(RuntimeError):
    """Circuit exceeds the configured simulator size."""


@dataclass
class StateVector:
    amplitudes: np.ndarray
    n_qubits: int

    def __post_init__(self):
        if self.amplitudes.shape != (1 << self.n_qubits,):
            raise ValueError(f"expected {1 << self.n_qubits} amplitudes, got shape {self.amplitudes.shape}")

    @classmethod
    def zero(cls, n_qubits: int) -> StateVector:
        amps = np.zeros(1 << n_qubits, dtype=np.complex128)
        amps[0] = 1.0
        return cls(amps, n_qubits)

    @classmethod
    def basis(cls, n_qubits: int, index: int) -> StateVector:
        amps = np.zeros(1 << n_qubits, dtype=np.complex128)
        amps[index] = 1.0
        return cls(amps, n_qubits)

    def probabilities(self) -> np.ndarray:
        p = self.amplitudes.real ** 2 + self.amplitudes.imag ** 2
        return p

    def norm(self) -> float:
        return float(np.sqrt(self.probabilities().sum()))


@dataclass
class Histogram:
    counts: dict[str, int]
    shots: int
    n_qubits: int
    duration_ms: float = 0.0

    def __post_init__(self):
        if sum(self.counts.values()) != self.shots:
            raise ValueError("histogram counts do not sum to the shot count")
        if any(len(k) != self.n_qubits for k in self.counts):
            raise ValueError("histogram keys must all have n_qubits characters")

    def frequencies(self) -> dict[str, float]:
        return {k: v / self.shots for k, v in self.counts.items()}


def bitstring(index: int, n_qubits: int) -> str:
    """Outcome string in qubit order (character q = qubit q)."""
    return format(index, f"0{n_qubits}b")[::-1]


def bit_index(key: str) -> int:
    return int(key[::-1], 2)


def _rot(kind, theta):
    c, s = math.cos(theta / 2), math.sin(theta / 2)
    if kind == "Rx":
        return c, -1j * s, -1j * s, c
    if kind == "Ry":
        return c, -s, s, c
    # Rz
    return complex(c, -s), 0j, 0j, complex(c, s)


_H = 1 / math.sqrt(2)


def apply_gate(state: np.ndarray, gate) -> None:
    """Apply one base gate to a flat amplitude array in place."""
    kind, q = gate.kind, gate.qubits
    if kind == "H":
        kernels.apply_1q(state, q[0], _H, _H, _H, -_H, 0)
    elif kind == "X":
        kernels.apply_x(state, q[0], 0)
    elif kind == "CNOT":
        kernels.apply_x(state, q[1], 1 << q[0])
    elif kind == "Toffoli":
        kernels.apply_x(state, q[2], (1 << q[0]) | (1 << q[1]))
    elif kind in ("Rx", "Ry", "Rz"):
        kernels.apply_1q(state, q[0], *_rot(kind, gate.angle), 0)
    elif kind in ("CRy", "CRz"):
        kernels.apply_1q(state, q[1], *_rot(kind[1:], gate.angle), 1 << q[0])
    else:
        raise CircuitError(f"simulator needs base gates; got {kind} (decompose the circuit first)")


def simulate(circuit: Circuit, initial: StateVector | None = None,
             max_qubits: int = DEFAULT_MAX_QUBITS) -> StateVector:
    """Return U|0...0> (or U|initial>) for the circuit unitary U."""
    if circuit.n_qubits > max_qubits:
        raise ResourceError(f"{circuit.n_qubits} qubits exceeds simulator cap of {max_qubits}")
    bad = {g.kind for g in circuit.gates if g.kind not in BASE_KINDS}
    if bad:
        raise CircuitError(f"simulator needs base gates; found {sorted(bad)}")
    if initial is None:
        amps = np.zeros(1 << circuit.n_qubits, dtype=np.complex128)
        amps[0] = 1.0
    else:
        if initial.n_qubits != circuit.n_qubits:
            raise ValueError("initial state width does not match circuit")
        amps = np.array(initial.amplitudes, dtype=np.complex128, copy=True)
    for g in circuit.gates:
        apply_gate(amps, g)
    return StateVector(amps, circuit.n_qubits)


def sample_counts(state: StateVector, shots: int, seed=None) -> Histogram:
    """Multinomial draw of ``shots`` outcomes from |amplitude|^2.

    ``seed`` may be an int or a ``numpy.random.Generator``.
    """
    if shots < 1:
        raise ValueError("shots must be >= 1")
    rng = np.random.default_rng(seed)
    p = state.probabilities()
    p = p / p.sum()
    draws = rng.multinomial(shots, p)
    nz = np.flatnonzero(draws)
    counts = {bitstring(int(i), state.n_qubits): int(draws[i]) for i in nz}
    return Histogram(counts, shots, state.n_qubits)


def run_job(circuit: Circuit, shots: int, seed=None, max_qubits: int = DEFAULT_MAX_QUBITS) -> Histogram:
    """Simulate and sample one circuit; ``duration_ms`` covers both, state allocation included."""
    t0 = time.perf_counter()
    state = simulate(circuit, max_qubits=max_qubits)
    hist = sample_counts(state, shots, seed)
    hist.duration_ms = (time.perf_counter() - t0) * 1000.0
    return hist


def exact_expectation(state: StateVector, observable) -> float:
    """<psi|H|psi> for a Pauli-sum observable (see :class:`vqabench.problems.Hamiltonian`)."""
    if observable.n_qubits > state.n_qubits:
        raise ValueError("observable acts on more qubits than the state holds")
    psi = state.amplitudes
    idx = np.arange(psi.shape[0])
    total = 0j
    for coeff, flip, zmask, ny in observable.masks():
        src = idx ^ flip
        # P|b> = i^ny (-1)^{popcount(b & zmask)} |b ^ flip> for P built from X/Y/Z letters.
        sign = 1 - 2 * (_popcount(src & zmask) & 1)
        phi = psi[src]
        total += coeff * (1j ** ny) * np.vdot(psi, sign * phi)
    if abs(total.imag) > 1e-9 * max(1.0, abs(total.real)):
        raise ValueError(f"expectation has imaginary part {total.imag:.3g}")
    return float(total.real)


def _popcount(x: np.ndarray) -> np.ndarray:
    x = x.astype(np.int64)
    c = np.zeros_like(x)
    while np.any(x):
        c += x & 1
        x >>= 1
    return c
