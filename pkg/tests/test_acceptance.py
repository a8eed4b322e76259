"""Acceptance criteria; each test prints one PASS/FAIL line."""

import filecmp
import json
import math
import time

import numpy as np

from vqabench.ansatz import exact_value, initial_params
from vqabench.circuit import Circuit, Gate, ancillas_needed, decompose, dicke_gates
from vqabench.cli import main
from vqabench.harness import (
    SchemaError,
    SuiteConfig,
    cycle_seed,
    load_records,
    parse_records,
    run_suite,
    save_records,
)
from vqabench.optimizer import OptimConfig, minimize
from vqabench.problems import brute_force_optimum, ground_energy, ising_hamiltonian, make_instance
from vqabench.scoring import SubScores, fit_scaling_exponent, map_accuracy, map_scalability, overall, score_records
from vqabench.simulator import bitstring, simulate

from . import oracles as O
from .synth import random_record_set
from .test_scoring import PLOTTED_N, PLOTTED_Y

RESULTS: list[str] = []


def verdict(number, title, ok, detail=""):
    line = f"[{'PASS' if ok else 'FAIL'}] criterion {number:>2}: {title}" + (f" ({detail})" if detail else "")
    RESULTS.append(line)
    print(line)
    assert ok, line


def test_01_maxcut_optimum():
    t0 = time.perf_counter()
    opt = brute_force_optimum(make_instance("MCP", 5))
    dt = time.perf_counter() - t0
    verdict(1, "MaxCut size-5 optimum is -6.0", opt == -6.0 and dt < 1, f"{opt}, {dt:.3f} s")


def test_02_scalability_fit_recovery():
    t0 = time.perf_counter()
    a = fit_scaling_exponent(PLOTTED_N, PLOTTED_Y)
    dt = time.perf_counter() - t0
    verdict(2, "scaling exponent from plotted data in [2.40, 2.56]", 2.40 <= a <= 2.56 and dt < 1,
            f"a = {a:.6f}, {dt:.3f} s")


def test_03_mapping_fixed_points():
    acc, sca = map_accuracy(0), map_scalability(1)
    ok = abs(acc - 15) < 1e-9 and abs(sca - 15) < 1e-9
    verdict(3, "mapped accuracy(0) and scalability(1) equal 15", ok, f"{acc!r}, {sca!r}")


def test_04_overall_arithmetic():
    ok = overall(SubScores(15, 15, 15, 15)) == 450
    rng = np.random.default_rng(4)
    for _ in range(100):
        r, a, s, c = rng.uniform(0, 30, 4)
        # opposing axes are (runtime, scalability) and (accuracy, capacity)
        ok &= overall(SubScores(0, a, 0, c)) == 0
        ok &= overall(SubScores(r, 0, s, 0)) == 0
    verdict(4, "overall(15,15,15,15) = 450 and zero opposing pair gives 0", ok)


def _or(i, qs):
    return any(O.bit(i, q) for q in qs)


def _composite_cases():
    """(gate, width, inputs, expected columns) for every composite at <= 10 qubits."""
    cases = []
    for theta in (0.0, 0.8137, -2.4, math.pi):
        for kind, pauli in (("Rxx", "XX"), ("Ryy", "YY"), ("Rzz", "ZZ")):
            for a, b in ((0, 1), (1, 0), (0, 2)):
                n = 3
                ops = {a: O.PAULI[pauli[0]], b: O.PAULI[pauli[1]]}
                gen = np.eye(1)
                for q in range(n):
                    gen = np.kron(ops.get(q, O.I2), gen)
                cases.append((Gate(kind, (a, b), theta), n, list(range(1 << n)), O.expm(-0.5j * theta * gen)))
    for k in range(2, 6):
        controls, target = tuple(range(k)), k
        anc = tuple(range(k + 1, k + 1 + max(k - 2, 0)))
        n = k + 1 + len(anc)
        kind = "QOR" if k == 2 else "MultiQOR"
        g = Gate(kind, controls + (target,), ancillas=() if kind == "QOR" else anc)
        inputs = [i for i in range(1 << n) if not any(O.bit(i, q) for q in anc)]
        expect = O.basis_columns(n, [i ^ (int(_or(i, controls)) << target) for i in inputs])
        cases.append((g, n, inputs, expect))
    for kind, axis, pred in (("ORCtrlRz", "Z", True), ("NORCtrlRx", "X", False)):
        for theta in (0.8137, -1.234):
            for k in range(1, 6):
                controls, target = tuple(range(k)), k
                probe = Gate(kind, controls + (target,), theta, tuple(range(k + 1, k + 1 + max(k - 1, 0)))
                                if k >= 2 else ())
                anc = probe.ancillas
                assert len(anc) == ancillas_needed(probe)
                n = k + 1 + len(anc)
                if n > 10:
                    continue
                inputs = [i for i in range(1 << n) if not any(O.bit(i, q) for q in anc)]
                expect = O.conditional_rotation(n, inputs, (lambda i, c=controls, p=pred: _or(i, c) == p),
                                                target, O.rot(axis, theta))
                cases.append((probe, n, inputs, expect))
    for n in range(3, 11):
        vec = np.zeros((1 << n, 1), dtype=complex)
        vec[[i for i in range(1 << n) if bin(i).count("1") == 2], 0] = 1 / math.sqrt(math.comb(n, 2))
        cases.append((Gate("DickeRow", tuple(range(n))), n, [0], vec))
    return cases


def test_05_decomposition_soundness():
    t0 = time.perf_counter()
    worst, kinds = 0.0, set()
    for gate, n, inputs, expect in _composite_cases():
        circ = decompose(Circuit(n, (gate,)))
        assert circ.is_decomposed
        got = O.apply_circuit(circ, O.basis_columns(n, inputs))
        # expected columns have every ancilla at zero, so a match also shows they are restored
        worst = max(worst, float(np.max(np.abs(got - expect))))
        kinds.add(gate.kind)
    dt = time.perf_counter() - t0
    ok = worst < 1e-10 and dt < 30 and kinds == {"QOR", "MultiQOR", "ORCtrlRz", "NORCtrlRx", "Rxx", "Ryy",
                                                   "Rzz", "DickeRow"}
    verdict(5, "composite decompositions match defining unitaries", ok,
            f"max deviation {worst:.1e}, {len(kinds)} kinds, {dt:.1f} s")


def test_06_dicke_state():
    state = simulate(Circuit(3, tuple(dicke_gates(range(3), 2)))).amplitudes
    support = {bitstring(i, 3) for i in np.flatnonzero(np.abs(state) > 1e-10)}
    dev = max(abs(state[i] - 1 / math.sqrt(3)) for i in np.flatnonzero(np.abs(state) > 1e-10))
    verdict(6, "three-qubit weight-2 Dicke amplitudes", support == {"011", "101", "110"} and dev < 1e-10,
            f"support {sorted(support)}, deviation {dev:.1e}")


def test_07_ising_ground_truth():
    t0 = time.perf_counter()
    e2 = ground_energy(ising_hamiltonian(2))
    ok = abs(e2 + math.sqrt(5)) < 1e-9
    errs = {}
    for n in (2, 3, 4):
        inst = make_instance("IC", n)
        truth = float(np.linalg.eigvalsh(O.ising_matrix(n)).min())
        best = math.inf
        for c in range(10):
            x0 = initial_params(inst, np.random.default_rng(cycle_seed(0, "IC", n, c)))
            best = min(best, minimize(lambda p: exact_value(inst, p), x0, OptimConfig()).best_value)
        errs[n] = abs(best - truth) / abs(truth)
        ok &= errs[n] <= 0.05
    dt = time.perf_counter() - t0
    detail = ", ".join(f"N={n}: {e:.2%}" for n, e in errs.items())
    verdict(7, "Ising ground energy and VQE baseline within 5%", ok and dt < 120, f"{detail}, {dt:.1f} s")


def test_08_qaoa_end_to_end():
    inst = make_instance("MCP", 5)
    grid = np.linspace(0, math.pi, 50)
    scan = min(exact_value(inst, [g, b]) for g in grid for b in grid)
    t0 = time.perf_counter()
    rs = run_suite(SuiteConfig(problems=(("MCP", 5, 5),), shots=4096, cycles=10,
                               optimizer=OptimConfig(max_iterations=100)))
    dt = time.perf_counter() - t0
    best = min(r.expectation_value for r in rs.records())
    ok = scan < -4 and best <= -4 and len(rs) == 10 and dt < 120
    verdict(8, "sampled QAOA MaxCut reaches -4", ok, f"grid {scan:.4f}, best {best:.4f}, {dt:.1f} s")


def test_09_schema_fidelity(tmp_path):
    from pathlib import Path

    src_path = Path(__file__).parent / "data" / "reference_record.json"
    src = json.loads(src_path.read_text())
    rs = load_records(src_path, "MCP")
    save_records(rs, tmp_path / "out.json")
    (out,) = json.loads((tmp_path / "out.json").read_text())
    names_ok = list(out)[: len(src)] == list(src) and all(out[k] == src[k] for k in src)
    del src["Qubits"]
    try:
        parse_records(json.dumps(src), "MCP")
        rejected = False
    except SchemaError as exc:
        rejected = exc.field == "Qubits" and "Qubits" in str(exc)
    verdict(9, "record schema round trip and missing field rejection", names_ok and rejected)


def test_10_pipeline_closure(tmp_path, capsys):
    out, rep = tmp_path / "records", tmp_path / "report"
    out.mkdir()
    rep.mkdir()
    cfg = tmp_path / "suite.json"
    cfg.write_text(json.dumps({"device": "sim", "cycles": 2, "output_dir": str(out),
                               "problems": {"MCP": [5, 7], "RH": [2, 4], "IC": [2, 3]}}))
    t0 = time.perf_counter()
    codes = [main(["run", str(cfg)]),
             main(["score", str(out), "--out", str(tmp_path / "a.json")]),
             main(["score", str(out), "--out", str(tmp_path / "b.json")]),
             main(["report", str(tmp_path / "a.json"), str(rep)])]
    dt = time.perf_counter() - t0
    same = filecmp.cmp(tmp_path / "a.json", tmp_path / "b.json", shallow=False)
    made = (rep / "radar.svg").exists() and (rep / "overall.svg").exists()
    ok = codes == [0, 0, 0, 0] and same and made and dt < 600
    capsys.readouterr()
    verdict(10, "run, score and report close with identical scores", ok, f"exit codes {codes}, {dt:.1f} s")


def test_11_scoring_oracle_equivalence():
    worst = {"runtime": 0.0, "accuracy": 0.0, "scalability": 0.0, "capacity": 0.0}
    for seed in range(20):
        rs, oracle = random_record_set(1000 + seed)
        scores = score_records(rs)
        for kind, groups in oracle.items():
            expect = O.straight_line_scores(groups, 0.2)
            pure = scores.per_problem[kind].pure
            # runtime is of order 1e8 gates/s, so its tolerance is relative
            worst["runtime"] = max(worst["runtime"], abs(pure.runtime - expect["runtime"]) / expect["runtime"])
            worst["accuracy"] = max(worst["accuracy"], abs(pure.accuracy - expect["accuracy"]))
            worst["capacity"] = max(worst["capacity"], abs(pure.capacity - expect["capacity"]))
            if (pure.scalability is None) != (expect["scalability"] is None):
                worst["scalability"] = math.inf
            elif pure.scalability is not None:
                worst["scalability"] = max(worst["scalability"], abs(pure.scalability - expect["scalability"]))
    ok = all(v <= 1e-9 for v in worst.values())
    verdict(11, "pure scores match the straight-line oracle on 20 record sets", ok,
            ", ".join(f"{k} {v:.1e}" for k, v in worst.items()))
