"""Application-level benchmark for variational quantum algorithms on a statevector simulator."""

from .circuit import Circuit, CircuitError, Gate, decompose, depth
from .harness import ExecutionRecord, RecordSet, SuiteConfig, load_records, run_suite, run_vqa, save_records
from .kernels import BACKEND
from .optimizer import OptimConfig, OptimResult, minimize
from .problems import ProblemInstance, brute_force_optimum, make_instance, qubits_required
from .scoring import score_records
from .simulator import simulate

__version__ = "0.1.0"

__all__ = [
    "BACKEND", "Circuit", "CircuitError", "ExecutionRecord", "Gate", "OptimConfig", "OptimResult",
    "ProblemInstance", "RecordSet", "SuiteConfig", "brute_force_optimum", "decompose", "depth",
    "load_records", "make_instance", "minimize", "qubits_required", "run_suite", "run_vqa",
    "save_records", "score_records", "simulate",
]
