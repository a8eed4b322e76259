"""Synthetic record sets with hand-picked durations and expectation values."""

import numpy as np

from vqabench.harness import ExecutionRecord, RecordSet
from vqabench.problems import qubits_required


def make_record(kind, size, *, jobs_ms, ev, base, depth=10.0, shots=4096, cycle=0):
    return ExecutionRecord(
        depth=float(depth),
        expectation_value=float(ev),
        expectation_value_baseline=None if base is None else float(base),
        expectation_value_optimal=-1.0,
        job_durations_ms=[float(j) for j in jobs_ms],
        optimal_params=[0.0],
        optimizer_durations_ms=[1.0] * len(jobs_ms),
        optimizer_iterations=len(jobs_ms),
        qubits=qubits_required(kind, size),
        total_classic_duration_s=0.0,
        total_quantum_duration_s=sum(jobs_ms) / 1000.0,
        kind=kind,
        size=size,
        seed=0,
        cycle=cycle,
        shots=shots,
        backend="statevector",
    )


def random_problem(rng, kind="MCP", lo=5, hi=12):
    """Random records for one kind plus the oracle's view of the same data."""
    n_s = int(rng.integers(lo, hi - 1))
    n_e = int(rng.integers(n_s, hi + 1))
    cycles = int(rng.integers(1, 4))
    shots = int(rng.choice([1, 100, 1024, 4096]))
    records, groups = [], {}
    for n in range(n_s, n_e + 1):
        depth = float(rng.integers(5, 200))
        g = {"depth": depth, "shots": shots, "qubits": qubits_required(kind, n),
             "jobs_ms": [], "ev": [], "base": []}
        for c in range(cycles):
            jobs = list(rng.uniform(0.1, 5.0, int(rng.integers(1, 6))) * (1 + 0.3 * n))
            base = -float(rng.uniform(1.0, 10.0))
            ev = base * float(rng.uniform(0.5, 1.1))
            g["jobs_ms"].append(jobs)
            g["ev"].append(ev)
            g["base"].append(base)
            records.append(make_record(kind, n, jobs_ms=jobs, ev=ev, base=base, depth=depth,
                                       shots=shots, cycle=c))
        groups[n] = g
    return records, groups


def random_record_set(seed):
    rng = np.random.default_rng(seed)
    rs = RecordSet()
    oracle = {}
    for kind in rng.choice(["MCP", "DSP", "MIS"], size=int(rng.integers(1, 4)), replace=False):
        records, groups = random_problem(rng, str(kind))
        for r in records:
            rs.add(r)
        oracle[str(kind)] = groups
    return rs, oracle
