import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from vqabench.circuit import (
    BASE_KINDS,
    Circuit,
    CircuitBuilder,
    CircuitError,
    Gate,
    ancillas_needed,
    decompose,
    depth,
    dicke_gates,
)

from . import oracles as O


def _or(i, qs):
    return any(O.bit(i, q) for q in qs)


def _inputs_with_zero(n, zero_qubits):
    mask = sum(1 << q for q in zero_qubits)
    return [i for i in range(1 << n) if not i & mask]


def _decomposed_columns(gate, n, inputs):
    circ = decompose(Circuit(n, (gate,)))
    assert circ.is_decomposed
    return O.apply_circuit(circ, O.basis_columns(n, inputs))


# -- gate validation ---------------------------------------------------------------

def test_gate_rejects_wrong_arity():
    with pytest.raises(CircuitError):
        Gate("CNOT", (0,))


def test_gate_rejects_repeated_operand():
    with pytest.raises(CircuitError):
        Gate("CNOT", (1, 1))


def test_gate_requires_angle_for_rotations():
    with pytest.raises(CircuitError):
        Gate("Rx", (0,))
    with pytest.raises(CircuitError):
        Gate("H", (0,), 0.3)


def test_gate_rejects_non_finite_angle():
    with pytest.raises(CircuitError):
        Gate("Rz", (0,), float("nan"))


def test_circuit_rejects_out_of_range_qubit():
    with pytest.raises(CircuitError):
        Circuit(2, (Gate("X", (2,)),))


def test_decompose_without_enough_ancillas_fails():
    with pytest.raises(CircuitError, match="ancillas"):
        decompose(Circuit(5, (Gate("MultiQOR", (0, 1, 2, 3)),)))


def test_inverse_circuit_undoes_circuit():
    b = CircuitBuilder(3)
    b.add("H", 0).add("CRy", 0, 1, angle=0.7).add("Toffoli", 0, 1, 2).add("Rz", 2, angle=-1.1)
    c = b.build()
    full = Circuit(3, c.gates + c.inverse().gates)
    out = O.apply_circuit(full, np.eye(8))
    assert np.allclose(out, np.eye(8), atol=1e-12)


# -- decomposition soundness against defining unitaries ----------------------------

def test_qor_truth_table():
    g = Gate("QOR", (0, 1, 2))
    inputs = list(range(8))
    got = _decomposed_columns(g, 3, inputs)
    for j, i in enumerate(inputs):
        expect = i ^ (int(_or(i, (0, 1))) << 2)
        assert abs(got[expect, j] - 1) < 1e-12


@pytest.mark.parametrize("k", [3, 4, 5])
def test_multi_qor_matches_definition(k):
    controls = tuple(range(k))
    target = k
    anc = tuple(range(k + 1, k + 1 + (k - 2)))
    n = k + 1 + len(anc)
    g = Gate("MultiQOR", controls + (target,), ancillas=anc)
    inputs = _inputs_with_zero(n, anc)
    got = _decomposed_columns(g, n, inputs)
    expect = O.basis_columns(n, [i ^ (int(_or(i, controls)) << target) for i in inputs])
    assert np.max(np.abs(got - expect)) < 1e-10


@pytest.mark.parametrize("k", [1, 2, 3, 4, 5])
def test_or_controlled_rz_matches_definition(k):
    theta = 0.8137
    controls = tuple(range(k))
    target = k
    anc = tuple(range(k + 1, k + 1 + ancillas_needed(Gate("ORCtrlRz", controls + (target,), theta, ()))))
    n = k + 1 + len(anc)
    g = Gate("ORCtrlRz", controls + (target,), theta, anc)
    inputs = _inputs_with_zero(n, anc)
    got = _decomposed_columns(g, n, inputs)
    expect = O.conditional_rotation(n, inputs, lambda i: _or(i, controls), target, O.rot("Z", theta))
    assert np.max(np.abs(got - expect)) < 1e-10


@pytest.mark.parametrize("k", [1, 2, 3, 4])
def test_nor_controlled_rx_matches_definition(k):
    theta = -1.234
    controls = tuple(range(k))
    target = k
    anc = tuple(range(k + 1, k + 1 + (k - 1 if k >= 2 else 0)))
    n = k + 1 + len(anc)
    g = Gate("NORCtrlRx", controls + (target,), theta, anc)
    inputs = _inputs_with_zero(n, anc)
    got = _decomposed_columns(g, n, inputs)
    expect = O.conditional_rotation(n, inputs, lambda i: not _or(i, controls), target, O.rot("X", theta))
    assert np.max(np.abs(got - expect)) < 1e-10


@pytest.mark.parametrize("kind,pauli", [("Rxx", "XX"), ("Ryy", "YY"), ("Rzz", "ZZ")])
@pytest.mark.parametrize("theta", [0.0, 0.37, -2.9, math.pi])
def test_double_pauli_rotations(kind, pauli, theta):
    n = 3
    g = Gate(kind, (0, 2), theta)
    inputs = list(range(8))
    got = _decomposed_columns(g, n, inputs)
    gen = np.kron(O.PAULI[pauli[1]], np.kron(O.I2, O.PAULI[pauli[0]]))
    expect = O.expm(-0.5j * theta * gen)
    assert np.max(np.abs(got - expect)) < 1e-10


def test_double_pauli_rotation_on_reversed_operands():
    g = Gate("Ryy", (2, 0), 0.9)
    got = _decomposed_columns(g, 3, list(range(8)))
    gen = np.kron(O.Y, np.kron(O.I2, O.Y))
    assert np.max(np.abs(got - O.expm(-0.45j * gen))) < 1e-10


def _dicke_expected(n, k):
    vec = np.zeros(1 << n, dtype=complex)
    idx = [i for i in range(1 << n) if bin(i).count("1") == k]
    vec[idx] = 1 / math.sqrt(len(idx))
    return vec


@pytest.mark.parametrize("n,k", [(3, 1), (3, 2), (4, 1), (4, 2), (4, 3), (5, 2), (6, 3)])
def test_dicke_preparation(n, k):
    circ = Circuit(n, tuple(dicke_gates(range(n), k)))
    out = O.apply_circuit(circ, O.basis_columns(n, [0]))[:, 0]
    assert np.max(np.abs(out - _dicke_expected(n, k))) < 1e-10


def test_dicke_row_gate_prepares_weight_two():
    circ = decompose(Circuit(4, (Gate("DickeRow", (0, 1, 2, 3)),)))
    out = O.apply_circuit(circ, O.basis_columns(4, [0]))[:, 0]
    assert np.max(np.abs(out - _dicke_expected(4, 2))) < 1e-10


def test_dicke_three_qubit_row_gate_count():
    # two X gates, then one controlled-Ry per split-and-shift block
    gates = dicke_gates(range(3), 2)
    assert sum(g.kind == "X" for g in gates) == 2
    assert sum(g.kind == "CRy" for g in gates) == 2
    assert all(g.kind in BASE_KINDS for g in gates)


def test_dicke_rejects_bad_weight():
    with pytest.raises(CircuitError):
        dicke_gates(range(3), 3)


# -- depth --------------------------------------------------------------------------

def test_depth_empty_circuit_is_zero():
    assert depth(Circuit(2)) == 0


def test_depth_parallel_single_qubit_gates():
    assert depth(Circuit(3, tuple(Gate("H", (q,)) for q in range(3)))) == 1


def test_depth_chain():
    c = Circuit(3, (Gate("H", (0,)), Gate("CNOT", (0, 1)), Gate("CNOT", (1, 2)), Gate("X", (0,))))
    assert depth(c) == 3


def test_depth_rejects_composites():
    with pytest.raises(CircuitError):
        depth(Circuit(2, (Gate("Rzz", (0, 1), 0.1),)))


@st.composite
def _circuits(draw):
    gates = []
    for _ in range(draw(st.integers(0, 12))):
        kind = draw(st.sampled_from(["H", "Rz", "CNOT", "Toffoli"]))
        qs = draw(st.permutations(range(4)))
        if kind == "H":
            gates.append(Gate("H", (qs[0],)))
        elif kind == "Rz":
            gates.append(Gate("Rz", (qs[0],), draw(st.floats(-3, 3))))
        elif kind == "CNOT":
            gates.append(Gate("CNOT", tuple(qs[:2])))
        else:
            gates.append(Gate("Toffoli", tuple(qs[:3])))
    return Circuit(4, tuple(gates))


@given(_circuits(), st.sampled_from(["H", "X"]), st.integers(0, 3))
@settings(max_examples=60, deadline=None)
def test_depth_monotone_under_append(circ, kind, q):
    longer = circ.append(Gate(kind, (q,)))
    assert depth(circ) <= depth(longer) <= depth(circ) + 1


@given(_circuits())
@settings(max_examples=60, deadline=None)
def test_depth_bounded_by_gate_count(circ):
    assert depth(circ) <= len(circ)
    if len(circ):
        assert depth(circ) >= 1
