"""Benchmark problem instances, classical costs and exact optima.

Six problem kinds are supported: MaxCut (MCP), dominating set (DSP), maximum
independent set (MIS) and travelling salesperson (TSP), solved with QAOA, plus
a random diagonal Hamiltonian (RH) and the transverse-field Ising chain (IC),
solved with VQE.

Bitstrings follow the simulator's qubit order: character ``i`` is qubit ``i``.
Lower cost is better everywhere.
"""

from __future__ import annotations

import functools
import itertools
import math
from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp
from scipy.sparse.linalg import eigsh

KINDS = ("MCP", "DSP", "MIS", "TSP", "RH", "IC")
QAOA_KINDS = frozenset({"MCP", "DSP", "MIS", "TSP"})
VQE_KINDS = frozenset({"RH", "IC"})

SIZE_RANGES = {
    "MCP": (5, 15),
    "DSP": (5, 15),
    "MIS": (5, 15),
    "TSP": (3, 4),
    "RH": (2, 15),
    "IC": (2, 15),
}

TSP_SELF_WEIGHT = 10
TSP_PENALTY = 5.0
ISING_J = 1.0
ISING_H = 1.0

EXHAUSTIVE_LIMIT = 20
DIAG_LIMIT = 14


class ProblemError(ValueError):
    pass


@dataclass(frozen=True)
class Graph:
    n: int
    edges: tuple[tuple[int, int], ...]
    weights: tuple[tuple[float, ...], ...] | None = None

    def neighbors(self, v: int) -> list[int]:
        out = [b if a == v else a for a, b in self.edges if v in (a, b)]
        return sorted(out)

    def degree(self, v: int) -> int:
        return len(self.neighbors(v))

    def distance_matrix(self) -> np.ndarray:
        if self.weights is None:
            raise ProblemError("graph carries no distance matrix")
        return np.array(self.weights, dtype=float)


@dataclass(frozen=True)
class Hamiltonian:
    """Real-weighted sum of Pauli strings; character ``i`` of a string acts on qubit ``i``."""

    terms: tuple[tuple[float, str], ...]

    def __post_init__(self):
        terms = tuple((c, p) for c, p in self.terms)
        if not terms:
            raise ProblemError("Hamiltonian needs at least one term")
        width = len(terms[0][1])
        for c, p in terms:
            if isinstance(c, complex) or not math.isfinite(c):
                raise ProblemError(f"coefficient {c!r} is not a finite real (observable must be Hermitian)")
            if len(p) != width or set(p) - set("IXYZ"):
                raise ProblemError(f"bad Pauli string {p!r}")
        object.__setattr__(self, "terms", tuple((float(c), p) for c, p in terms))

    @property
    def n_qubits(self) -> int:
        return len(self.terms[0][1])

    def masks(self):
        """Yield ``(coeff, flip_mask, z_mask, n_y)`` per term for bit-level evaluation."""
        for c, p in self.terms:
            flip = zmask = ny = 0
            for q, ch in enumerate(p):
                if ch in "XY":
                    flip |= 1 << q
                if ch in "ZY":
                    zmask |= 1 << q
                ny += ch == "Y"
            yield c, flip, zmask, ny

    def to_sparse(self) -> sp.csr_matrix:
        dim = 1 << self.n_qubits
        idx = np.arange(dim)
        mat = sp.csr_matrix((dim, dim), dtype=complex)
        for c, flip, zmask, ny in self.masks():
            parity = np.array([bin(int(b & zmask)).count("1") & 1 for b in idx])
            vals = c * (1j ** ny) * (1 - 2 * parity)
            # column b maps to row b ^ flip
            mat = mat + sp.csr_matrix((vals, (idx ^ flip, idx)), shape=(dim, dim))
        return mat

    def is_diagonal(self) -> bool:
        return all(set(p) <= set("IZ") for _, p in self.terms)


@dataclass(frozen=True)
class ProblemInstance:
    kind: str
    size: int
    seed: int
    qubits: int
    graph: Graph | None = None
    hamiltonian: Hamiltonian | None = None
    coefficients: tuple[float, ...] = field(default=())

    @property
    def logical_qubits(self) -> int:
        return logical_qubits(self.kind, self.size)

    def to_dict(self) -> dict:
        d = {"kind": self.kind, "size": self.size, "seed": self.seed, "qubits": self.qubits}
        if self.graph is not None:
            d["edges"] = [list(e) for e in self.graph.edges]
            if self.graph.weights is not None:
                d["weights"] = [list(r) for r in self.graph.weights]
        if self.coefficients:
            d["coefficients"] = list(self.coefficients)
        return d

    @classmethod
    def from_dict(cls, d: dict) -> ProblemInstance:
        inst = make_instance(d["kind"], d["size"], d.get("seed", 0))
        if "edges" in d:
            weights = tuple(tuple(r) for r in d["weights"]) if "weights" in d else None
            graph = Graph(inst.size, tuple(tuple(e) for e in d["edges"]), weights)
            inst = ProblemInstance(inst.kind, inst.size, inst.seed, inst.qubits, graph,
                                   inst.hamiltonian, inst.coefficients)
        if "coefficients" in d and inst.kind == "RH":
            r = tuple(float(x) for x in d["coefficients"])
            inst = ProblemInstance(inst.kind, inst.size, inst.seed, inst.qubits, None,
                                   _random_hamiltonian(r), r)
        return inst


def qubits_required(kind: str, size: int) -> int:
    """Register width including ancillas."""
    _check_kind(kind)
    return {
        "MCP": size,
        "DSP": size + 5,
        "MIS": size + 3,
        "TSP": size * size,
        "RH": size,
        "IC": size,
    }[kind]


def logical_qubits(kind: str, size: int) -> int:
    _check_kind(kind)
    return size * size if kind == "TSP" else size


def circulant_graph(n: int) -> Graph:
    """4-regular circulant graph: node i joined to i±1 and i±2 (mod n)."""
    if n < 5:
        raise ProblemError(f"a 4-regular graph needs at least 5 nodes, got {n}")
    edges = set()
    for i in range(n):
        for off in (1, 2):
            j = (i + off) % n
            edges.add((min(i, j), max(i, j)))
    return Graph(n, tuple(sorted(edges)))


def _random_hamiltonian(r) -> Hamiltonian:
    n = len(r)
    terms = []
    for i, ri in enumerate(r):
        p = ["I"] * n
        p[i] = "Z"
        terms.append((ri, "".join(p)))
    return Hamiltonian(tuple(terms))


def ising_hamiltonian(n: int, j: float = ISING_J, h: float = ISING_H) -> Hamiltonian:
    """Open transverse-field Ising chain  -J sum X_i X_{i+1} - h sum Z_i."""
    terms = []
    for i in range(n - 1):
        p = ["I"] * n
        p[i] = p[i + 1] = "X"
        terms.append((-j, "".join(p)))
    for i in range(n):
        p = ["I"] * n
        p[i] = "Z"
        terms.append((-h, "".join(p)))
    return Hamiltonian(tuple(terms))


def make_instance(kind: str, size: int, seed: int = 0) -> ProblemInstance:
    _check_kind(kind)
    lo, hi = SIZE_RANGES[kind]
    if kind in ("MCP", "DSP", "MIS") and size < 5:
        raise ProblemError(f"{kind} uses 4-regular graphs, which need size >= 5 (got {size})")
    if not lo <= size <= hi:
        raise ProblemError(f"{kind} size {size} outside supported range {lo}..{hi}")
    q = qubits_required(kind, size)
    if kind in ("MCP", "DSP", "MIS"):
        return ProblemInstance(kind, size, seed, q, graph=circulant_graph(size))
    rng = np.random.default_rng([seed, KINDS.index(kind), size])
    if kind == "TSP":
        d = np.full((size, size), float(TSP_SELF_WEIGHT))
        for i, j in itertools.combinations(range(size), 2):
            d[i, j] = d[j, i] = float(rng.integers(1, 10))
        edges = tuple(itertools.combinations(range(size), 2))
        return ProblemInstance(kind, size, seed, q, graph=Graph(size, edges, tuple(map(tuple, d))))
    if kind == "RH":
        r = tuple(float(x) for x in rng.uniform(-1.0, 1.0, size))
        return ProblemInstance(kind, size, seed, q, hamiltonian=_random_hamiltonian(r), coefficients=r)
    return ProblemInstance(kind, size, seed, q, hamiltonian=ising_hamiltonian(size))


def _check_kind(kind):
    if kind not in KINDS:
        raise ProblemError(f"unknown problem kind {kind!r}; expected one of {KINDS}")


def _bits_matrix(n: int) -> np.ndarray:
    idx = np.arange(1 << n)
    return ((idx[:, None] >> np.arange(n)) & 1).astype(np.int8)


def _costs_from_bits(inst: ProblemInstance, bits: np.ndarray) -> np.ndarray:
    """Vectorised cost over rows of a 0/1 matrix (one row per bitstring)."""
    kind = inst.kind
    if kind == "MCP":
        e = np.array(inst.graph.edges)
        return -(bits[:, e[:, 0]] != bits[:, e[:, 1]]).sum(axis=1).astype(float)
    if kind == "DSP":
        g = inst.graph
        covered = np.zeros(bits.shape[0], dtype=float)
        for k in range(g.n):
            closed = [k] + g.neighbors(k)
            covered += bits[:, closed].max(axis=1)
        return -covered + bits.sum(axis=1)
    if kind == "MIS":
        return -bits.sum(axis=1).astype(float)
    if kind == "TSP":
        n = inst.size
        d = inst.graph.distance_matrix().reshape(-1)
        soft = 0.5 * bits @ d
        viol = np.zeros(bits.shape[0])
        for i, j in itertools.combinations(range(n), 2):
            viol += bits[:, i * n + j] != bits[:, j * n + i]
        return soft + TSP_PENALTY * viol
    raise ProblemError(f"{kind} has no classical bitstring cost; its energy comes from the ansatz measurement")


def evaluate_cost(instance: ProblemInstance, bitstring: str) -> float:
    if instance.kind in VQE_KINDS:
        raise ProblemError(f"{instance.kind} has no classical bitstring cost")
    if len(bitstring) != instance.logical_qubits or set(bitstring) - set("01"):
        raise ProblemError(f"expected a {instance.logical_qubits}-bit string, got {bitstring!r}")
    bits = np.array([[int(c) for c in bitstring]], dtype=np.int8)
    return float(_costs_from_bits(instance, bits)[0])


@functools.lru_cache(maxsize=64)
def cost_table(instance: ProblemInstance) -> np.ndarray:
    """Cost (QAOA kinds) or diagonal energy (RH) for every logical basis index."""
    n = instance.logical_qubits
    if n > EXHAUSTIVE_LIMIT:
        raise ProblemError(f"{n} logical qubits is too many for a full cost table")
    bits = _bits_matrix(n)
    if instance.kind == "RH":
        return (1 - 2 * bits) @ np.array(instance.coefficients)
    return _costs_from_bits(instance, bits)


def feasible_mask(instance: ProblemInstance) -> np.ndarray | None:
    """Basis states forming the solution domain, or None when every bitstring counts.

    MIS is restricted to independent sets and TSP to the space with Hamming
    weight 2 in every adjacency row (the space its initial state and mixer
    keep).
    """
    if instance.kind == "MIS":
        bits = _bits_matrix(instance.size)
        e = np.array(instance.graph.edges)
        return ~np.any(bits[:, e[:, 0]] & bits[:, e[:, 1]], axis=1)
    if instance.kind == "TSP":
        n = instance.size
        bits = _bits_matrix(n * n)
        return np.all(bits.reshape(-1, n, n).sum(axis=2) == 2, axis=1)
    return None


def brute_force_optimum(instance: ProblemInstance) -> float:
    """Exact optimum: exhaustive search (QAOA kinds, RH) or diagonalisation (IC)."""
    if instance.kind == "IC":
        return ground_energy(instance.hamiltonian)
    table = cost_table(instance)
    mask = feasible_mask(instance)
    if mask is not None:
        table = table[mask]
    return float(table.min())


def ground_energy(h: Hamiltonian) -> float:
    if h.n_qubits > DIAG_LIMIT:
        raise ProblemError(f"{h.n_qubits}-qubit Hamiltonian is too large to diagonalise")
    mat = h.to_sparse()
    if h.n_qubits <= 10:
        return float(np.linalg.eigvalsh(mat.toarray()).min())
    val = eigsh(mat, k=1, which="SA", return_eigenvectors=False)
    return float(val.real.min())
