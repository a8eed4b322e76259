"""Gate-level circuit representation, composite-gate decomposition and depth.

Composite gates (quantum OR family, double-Pauli rotations, Dicke rows) are
expanded by :func:`decompose` into the base set
``{H, X, Rx, Ry, Rz, CNOT, Toffoli, CRy, CRz}``.  Depth is only defined on
decomposed circuits.

Qubit operands are ordered controls first, then target(s).  Composite gates
that need scratch qubits carry them explicitly in ``Gate.ancillas``; nothing
is allocated implicitly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

BASE_KINDS = frozenset({"H", "X", "Rx", "Ry", "Rz", "CNOT", "Toffoli", "CRy", "CRz"})
COMPOSITE_KINDS = frozenset(
    {"QOR", "MultiQOR", "ORCtrlRz", "NORCtrlRx", "Rxx", "Ryy", "Rzz", "DickeRow"}
)
ROTATION_KINDS = frozenset({"Rx", "Ry", "Rz", "CRy", "CRz", "ORCtrlRz", "NORCtrlRx", "Rxx", "Ryy", "Rzz"})

# Fixed operand counts; None marks variable-width composites.
_ARITY = {
    "H": 1, "X": 1, "Rx": 1, "Ry": 1, "Rz": 1,
    "CNOT": 2, "Toffoli": 3, "CRy": 2, "CRz": 2,
    "QOR": 3, "Rxx": 2, "Ryy": 2, "Rzz": 2,
    "MultiQOR": None, "ORCtrlRz": None, "NORCtrlRx": None, "DickeRow": None,
}
_MIN_ARITY = {"MultiQOR": 3, "ORCtrlRz": 2, "NORCtrlRx": 2, "DickeRow": 3}

DICKE_ROW_WEIGHT = 2


class CircuitError(ValueError):
    """Invalid gate or circuit, or a decomposition that cannot be carried out."""


@dataclass(frozen=True)
class Gate:
    kind: str
    qubits: tuple[int, ...]
    angle: float | None = None
    ancillas: tuple[int, ...] = ()

    def __post_init__(self):
        if self.kind not in _ARITY:
            raise CircuitError(f"unknown gate kind {self.kind!r}")
        object.__setattr__(self, "qubits", tuple(int(q) for q in self.qubits))
        object.__setattr__(self, "ancillas", tuple(int(q) for q in self.ancillas))
        arity = _ARITY[self.kind]
        if arity is None:
            if len(self.qubits) < _MIN_ARITY[self.kind]:
                raise CircuitError(f"{self.kind} needs at least {_MIN_ARITY[self.kind]} qubits")
        elif len(self.qubits) != arity:
            raise CircuitError(f"{self.kind} takes {arity} qubits, got {len(self.qubits)}")
        operands = self.qubits + self.ancillas
        if len(set(operands)) != len(operands):
            raise CircuitError(f"{self.kind}: operand indices must be distinct, got {operands}")
        if any(q < 0 for q in operands):
            raise CircuitError(f"{self.kind}: negative qubit index")
        if self.kind in ROTATION_KINDS:
            if self.angle is None or not math.isfinite(self.angle):
                raise CircuitError(f"{self.kind} needs a finite angle")
            object.__setattr__(self, "angle", float(self.angle))
        elif self.angle is not None:
            raise CircuitError(f"{self.kind} takes no angle")

    @property
    def operands(self) -> tuple[int, ...]:
        return self.qubits + self.ancillas

    @property
    def controls(self) -> tuple[int, ...]:
        if self.kind in ("CNOT", "CRy", "CRz", "Toffoli", "QOR", "MultiQOR", "ORCtrlRz", "NORCtrlRx"):
            return self.qubits[:-1]
        return ()

    @property
    def is_composite(self) -> bool:
        return self.kind in COMPOSITE_KINDS

    def inverse(self) -> Gate:
        if self.kind in ("H", "X", "CNOT", "Toffoli", "QOR", "MultiQOR"):
            return self
        if self.kind == "DickeRow":
            raise CircuitError("DickeRow has no inverse gate; decompose first")
        return Gate(self.kind, self.qubits, -self.angle, self.ancillas)

    def __str__(self):
        parts = [self.kind]
        if self.angle is not None:
            parts.append(f"{self.angle:.12g}")
        parts.extend(f"q{q}" for q in self.qubits)
        if self.ancillas:
            parts.append("anc:" + ",".join(f"q{q}" for q in self.ancillas))
        return " ".join(parts)


@dataclass(frozen=True)
class Circuit:
    n_qubits: int
    gates: tuple[Gate, ...] = field(default_factory=tuple)

    def __post_init__(self):
        object.__setattr__(self, "gates", tuple(self.gates))
        if self.n_qubits < 1:
            raise CircuitError("circuit needs at least one qubit")
        for g in self.gates:
            if max(g.operands) >= self.n_qubits:
                raise CircuitError(f"gate {g} addresses a qubit outside a {self.n_qubits}-qubit register")

    def __len__(self):
        return len(self.gates)

    def __iter__(self):
        return iter(self.gates)

    @property
    def is_decomposed(self) -> bool:
        return all(g.kind in BASE_KINDS for g in self.gates)

    def append(self, *gates: Gate) -> Circuit:
        return Circuit(self.n_qubits, self.gates + tuple(gates))

    def inverse(self) -> Circuit:
        return Circuit(self.n_qubits, tuple(g.inverse() for g in reversed(self.gates)))

    def dump(self) -> str:
        """One gate per line, ``KIND angle? q...``; for debugging only."""
        return "\n".join([f"# qubits {self.n_qubits}"] + [str(g) for g in self.gates])


class CircuitBuilder:
    """Mutable helper used by the ansatz constructors."""

    def __init__(self, n_qubits: int):
        self.n_qubits = n_qubits
        self._gates: list[Gate] = []

    def add(self, kind, *qubits, angle=None, ancillas=()):
        self._gates.append(Gate(kind, tuple(qubits), angle, tuple(ancillas)))
        return self

    def extend(self, gates):
        self._gates.extend(gates)
        return self

    def build(self) -> Circuit:
        return Circuit(self.n_qubits, tuple(self._gates))


def depth(circuit: Circuit) -> int:
    """Critical-path length using as-soon-as-possible layering."""
    bad = sorted({g.kind for g in circuit.gates if g.kind not in BASE_KINDS})
    if bad:
        raise CircuitError(f"depth is defined on decomposed circuits; found composite kinds {bad}")
    level = [0] * circuit.n_qubits
    d = 0
    for g in circuit.gates:
        layer = max(level[q] for q in g.qubits) + 1
        for q in g.qubits:
            level[q] = layer
        d = max(d, layer)
    return d


def ancillas_needed(gate: Gate) -> int:
    k = len(gate.controls)
    if gate.kind == "MultiQOR":
        return k - 2
    if gate.kind in ("ORCtrlRz", "NORCtrlRx"):
        return k - 1 if k >= 2 else 0
    return 0


# -- expansions ---------------------------------------------------------------

def _qor(c0, c1, t):
    return [Gate("CNOT", (c0, t)), Gate("CNOT", (c1, t)), Gate("Toffoli", (c0, c1, t))]


def _multi_qor(controls, target, ancillas):
    """target ^= OR(controls), chaining pairwise ORs through the ancillas."""
    controls = list(controls)
    if len(controls) == 1:
        return [Gate("CNOT", (controls[0], target))]
    if len(controls) == 2:
        return _qor(controls[0], controls[1], target)
    compute = []
    prev = controls[0]
    for i, c in enumerate(controls[1:-1]):
        compute += _qor(prev, c, ancillas[i])
        prev = ancillas[i]
    middle = _qor(prev, controls[-1], target)
    return compute + middle + _reverse(compute)


def _reverse(gates):
    # Every gate in an OR chain is self-inverse.
    return list(reversed(gates))


def _crx(theta, control, target):
    return [Gate("H", (target,)), Gate("CRz", (control, target), theta), Gate("H", (target,))]


def _ccry(theta, c0, c1, target):
    return [
        Gate("Ry", (target,), theta / 2),
        Gate("Toffoli", (c0, c1, target)),
        Gate("Ry", (target,), -theta / 2),
        Gate("Toffoli", (c0, c1, target)),
    ]


def dicke_gates(qubits, weight):
    """Preparation of the Dicke state of Hamming weight ``weight`` on ``qubits`` from |0...0>.

    Built from split-and-cyclic-shift blocks; for three qubits and weight 2
    this is the X/CNOT/controlled-Ry row initialiser used for TSP rows.
    Controlled square-root boxes are Ry(2 acos sqrt(l/m)).
    """
    q = list(qubits)
    n = len(q)
    if not 1 <= weight < n:
        raise CircuitError(f"Dicke weight must be in [1, {n - 1}], got {weight}")
    gates = [Gate("X", (q[i],)) for i in range(n - weight, n)]
    blocks = [(m, weight) for m in range(n, weight, -1)] + [(m, m - 1) for m in range(weight, 1, -1)]
    for m, k in blocks:
        a, b = q[m - 2], q[m - 1]
        theta = 2 * math.acos(math.sqrt(1 / m))
        gates += [Gate("CNOT", (a, b)), Gate("CRy", (b, a), theta), Gate("CNOT", (a, b))]
        for l in range(2, k + 1):
            t, c = q[m - 1 - l], q[m - l]
            theta = 2 * math.acos(math.sqrt(l / m))
            gates += [Gate("CNOT", (t, b))] + _ccry(theta, c, b, t) + [Gate("CNOT", (t, b))]
    return gates


def decompose_gate(gate: Gate) -> list[Gate]:
    kind = gate.kind
    if kind in BASE_KINDS:
        return [gate]
    need = ancillas_needed(gate)
    if len(gate.ancillas) < need:
        raise CircuitError(f"{kind} with {len(gate.controls)} controls needs {need} ancillas, got {len(gate.ancillas)}")
    theta = gate.angle
    if kind == "QOR":
        return _qor(*gate.qubits)
    if kind == "MultiQOR":
        return _multi_qor(gate.controls, gate.qubits[-1], gate.ancillas)
    if kind in ("ORCtrlRz", "NORCtrlRx"):
        controls, target = gate.controls, gate.qubits[-1]
        if len(controls) == 1:
            flag, compute = controls[0], []
        else:
            flag = gate.ancillas[0]
            compute = _multi_qor(controls, flag, gate.ancillas[1:])
        if kind == "ORCtrlRz":
            body = [Gate("CRz", (flag, target), theta)]
        else:
            body = [Gate("X", (flag,))] + _crx(theta, flag, target) + [Gate("X", (flag,))]
        return compute + body + _reverse(compute)
    if kind == "DickeRow":
        return dicke_gates(gate.qubits, DICKE_ROW_WEIGHT)
    a, b = gate.qubits
    core = [Gate("CNOT", (a, b)), Gate("Rz", (b,), theta), Gate("CNOT", (a, b))]
    if kind == "Rzz":
        return core
    if kind == "Rxx":
        hs = [Gate("H", (a,)), Gate("H", (b,))]
        return hs + core + hs
    if kind == "Ryy":
        pre = [Gate("Rx", (a,), -math.pi / 2), Gate("Rx", (b,), -math.pi / 2)]
        post = [Gate("Rx", (a,), math.pi / 2), Gate("Rx", (b,), math.pi / 2)]
        return pre + core + post
    raise CircuitError(f"unknown composite kind {kind!r}")


def decompose(circuit: Circuit) -> Circuit:
    out: list[Gate] = []
    for g in circuit.gates:
        out.extend(decompose_gate(g))
    return Circuit(circuit.n_qubits, tuple(out))
