"""Parameterised circuits per problem kind and measurement post-processing.

Angle conventions: a cost term ``c * ZZ`` becomes ``Rzz(2 * gamma * c)``, i.e.
``exp(-i gamma c ZZ)``; likewise ``Rz(2 * gamma * c)`` for single-Z terms and
``Rx(2 * beta)`` for the standard transverse mixer.  Constant (global-phase)
terms of the cost Hamiltonians are dropped.

Register layout: logical qubits first, ancillas at the highest indices.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .circuit import Circuit, CircuitBuilder, Gate, decompose, depth
from .problems import (
    ISING_H,
    ISING_J,
    QAOA_KINDS,
    TSP_PENALTY,
    ProblemError,
    ProblemInstance,
    cost_table,
)
from .simulator import Histogram, StateVector, exact_expectation, simulate

QAOA_LAYERS = 1


@dataclass(frozen=True)
class CircuitSet:
    """Circuits for one objective evaluation, tagged with their measurement basis."""

    circuits: tuple[tuple[Circuit, str], ...]

    def __iter__(self):
        return iter(self.circuits)

    def __len__(self):
        return len(self.circuits)

    def decomposed(self) -> CircuitSet:
        return CircuitSet(tuple((decompose(c), b) for c, b in self.circuits))

    def depth(self) -> int:
        """Largest critical path among the (decomposed) circuits."""
        return max(depth(c if c.is_decomposed else decompose(c)) for c, _ in self.circuits)


def param_count(instance: ProblemInstance) -> int:
    if instance.kind in QAOA_KINDS:
        return 2 * QAOA_LAYERS
    if instance.kind == "RH":
        return instance.size
    return 4 * instance.size


def circuits_per_evaluation(instance: ProblemInstance) -> int:
    return 2 if instance.kind == "IC" else 1


def _check_params(instance, params):
    params = [float(p) for p in params]
    if len(params) != param_count(instance):
        raise ProblemError(f"{instance.kind} needs {param_count(instance)} parameters, got {len(params)}")
    return params


# -- QAOA ---------------------------------------------------------------------

def _mcp(inst, gamma, beta):
    n = inst.size
    b = CircuitBuilder(inst.qubits)
    for q in range(n):
        b.add("H", q)
    for u, v in inst.graph.edges:
        b.add("Rzz", u, v, angle=2 * gamma)
    for q in range(n):
        b.add("Rx", q, angle=2 * beta)
    return b.build()


def _dsp(inst, gamma, beta):
    n = inst.size
    cost = n
    work = tuple(range(n + 1, inst.qubits))
    b = CircuitBuilder(inst.qubits)
    for q in range(n + 1):
        b.add("H", q)
    for k in range(n):
        closed = sorted([k] + inst.graph.neighbors(k))
        need = len(closed) - 1 if len(closed) >= 2 else 0
        b.add("ORCtrlRz", *closed, cost, angle=gamma, ancillas=work[:need])
    for k in range(n):
        b.add("X", k).add("CRz", k, cost, angle=gamma).add("X", k)
    for q in range(n):
        b.add("Rx", q, angle=2 * beta)
    return b.build()


def mis_mixer(inst: ProblemInstance, beta: float) -> list[Gate]:
    """NOR-controlled Rx on each node, keyed on its neighbours."""
    n = inst.size
    work = tuple(range(n, inst.qubits))
    gates = []
    for i in range(n):
        nb = inst.graph.neighbors(i)
        need = len(nb) - 1 if len(nb) >= 2 else 0
        gates.append(Gate("NORCtrlRx", tuple(nb) + (i,), 2 * beta, work[:need]))
    return gates


def _mis(inst, gamma, beta):
    n = inst.size
    b = CircuitBuilder(inst.qubits)
    for q in range(n):
        b.add("H", q)
    for q in range(n):
        b.add("Rz", q, angle=2 * gamma)
    b.extend(mis_mixer(inst, beta))
    return b.build()


def tsp_mixer(inst: ProblemInstance, beta: float) -> list[Gate]:
    """XX+YY rotations between neighbouring qubits of each adjacency row."""
    n = inst.size
    gates = []
    for i in range(n):
        for j in range(n - 1):
            a, c = i * n + j, i * n + j + 1
            gates.append(Gate("Rxx", (a, c), beta))
            gates.append(Gate("Ryy", (a, c), beta))
    return gates


def _tsp(inst, gamma, beta):
    n = inst.size
    d = inst.graph.distance_matrix()
    b = CircuitBuilder(inst.qubits)
    for i in range(n):
        b.add("DickeRow", *range(i * n, (i + 1) * n))
    # Phase operator for -1/2 sum D_ij Z_ij - w sum Z_ij Z_ji, i.e. twice the
    # non-constant part of the cost (a uniform rescaling of gamma).
    for i in range(n):
        for j in range(n):
            b.add("Rz", i * n + j, angle=2 * gamma * (-0.5 * d[i, j]))
    for i in range(n):
        for j in range(i + 1, n):
            b.add("Rzz", i * n + j, j * n + i, angle=2 * gamma * (-TSP_PENALTY))
    b.extend(tsp_mixer(inst, beta))
    return b.build()


# -- VQE ----------------------------------------------------------------------

def _rh(inst, theta):
    b = CircuitBuilder(inst.qubits)
    for q in range(inst.size):
        b.add("Rx", q, angle=theta[q])
    return b.build()


def su2_ansatz(n: int, theta) -> Circuit:
    """Ry/Rz layer, all-pairs CNOT entangler, Ry/Rz layer (4n parameters)."""
    b = CircuitBuilder(n)
    for q in range(n):
        b.add("Ry", q, angle=theta[q])
    for q in range(n):
        b.add("Rz", q, angle=theta[n + q])
    for i in range(n):
        for j in range(i + 1, n):
            b.add("CNOT", i, j)
    for q in range(n):
        b.add("Ry", q, angle=theta[2 * n + q])
    for q in range(n):
        b.add("Rz", q, angle=theta[3 * n + q])
    return b.build()


def build_circuits(instance: ProblemInstance, params) -> CircuitSet:
    """Composite-level circuits for one evaluation; call ``.decomposed()`` before simulating."""
    p = _check_params(instance, params)
    kind = instance.kind
    if kind == "MCP":
        return CircuitSet(((_mcp(instance, *p), "Z"),))
    if kind == "DSP":
        return CircuitSet(((_dsp(instance, *p), "Z"),))
    if kind == "MIS":
        return CircuitSet(((_mis(instance, *p), "Z"),))
    if kind == "TSP":
        return CircuitSet(((_tsp(instance, *p), "Z"),))
    if kind == "RH":
        return CircuitSet(((_rh(instance, p), "Z"),))
    z = su2_ansatz(instance.size, p)
    x = z.append(*(Gate("H", (q,)) for q in range(instance.size)))
    return CircuitSet(((z, "Z"), (x, "X")))


# -- post-processing ------------------------------------------------------------

def _logical_index(key: str, n_logical: int) -> int:
    return int(key[:n_logical][::-1], 2)


def expectation_from_counts(instance: ProblemInstance, histograms: dict[str, Histogram]) -> float:
    """Energy estimate from per-basis histograms (ancilla bits are ignored)."""
    n = instance.logical_qubits
    if instance.kind != "IC":
        hist = _get(histograms, "Z", n)
        table = cost_table(instance)
        total = sum(c * table[_logical_index(k, n)] for k, c in hist.counts.items())
        return float(total / hist.shots)
    hz = _get(histograms, "Z", n)
    hx = _get(histograms, "X", n)
    z_sum = 0.0
    for k, c in hz.counts.items():
        z_sum += c * sum(1 - 2 * int(ch) for ch in k[:n])
    xx_sum = 0.0
    for k, c in hx.counts.items():
        xx_sum += c * sum(1 - 2 * (int(k[i]) ^ int(k[i + 1])) for i in range(n - 1))
    return float(-ISING_J * xx_sum / hx.shots - ISING_H * z_sum / hz.shots)


def _get(histograms, basis, n):
    if basis not in histograms:
        raise ProblemError(f"missing {basis}-basis histogram")
    h = histograms[basis]
    if h.n_qubits < n:
        raise ProblemError(f"{basis}-basis histogram has {h.n_qubits} bits, need at least {n}")
    return h


def exact_energy(instance: ProblemInstance, state: StateVector) -> float:
    """Noiseless energy of the ansatz state (the ``Z``-basis circuit's output)."""
    if instance.kind == "IC":
        return exact_expectation(state, instance.hamiltonian)
    n = instance.logical_qubits
    probs = state.probabilities()
    marginal = np.bincount(np.arange(probs.shape[0]) & ((1 << n) - 1), weights=probs, minlength=1 << n)
    return float(marginal @ cost_table(instance))


def exact_value(instance: ProblemInstance, params, max_qubits: int = 20) -> float:
    circuit = build_circuits(instance, params).decomposed().circuits[0][0]
    return exact_energy(instance, simulate(circuit, max_qubits=max_qubits))


def initial_params(instance: ProblemInstance, rng: np.random.Generator) -> np.ndarray:
    """Uniform random start: gamma in [0, 2pi], beta in [0, pi] for QAOA; theta in [0, 2pi] for VQE."""
    if instance.kind in QAOA_KINDS:
        gam = rng.uniform(0, 2 * math.pi, QAOA_LAYERS)
        bet = rng.uniform(0, math.pi, QAOA_LAYERS)
        return np.concatenate([gam, bet])
    return rng.uniform(0, 2 * math.pi, param_count(instance))
