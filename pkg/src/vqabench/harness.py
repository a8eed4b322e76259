"""Benchmark loop, execution records and their JSON persistence.

A suite runs every configured problem kind over its size range, and every
size for a number of execution cycles.  One cycle is a full optimiser run
from fresh random parameters and yields one :class:`ExecutionRecord`.
Alongside the sampled run, an exact-expectation run from the same starting
point provides the baseline value.
"""

from __future__ import annotations

import json
import math
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from functools import lru_cache
from pathlib import Path

import numpy as np

from .ansatz import build_circuits, exact_value, expectation_from_counts, initial_params
from .optimizer import OptimConfig, minimize
from .problems import (
    KINDS,
    ProblemInstance,
    brute_force_optimum,
    make_instance,
    qubits_required,
)
from .simulator import DEFAULT_MAX_QUBITS, ResourceError, run_job

BACKEND_ID = "statevector"
WORKERS_ENV = "VQABENCH_WORKERS"

# Record keys in on-disk order.
K_DEPTH = "Depth"
K_EV = "Expectation Value"
K_BASELINE = "Expectation Value Baseline"
K_BASELINE_ALIAS = "Expectation value baseline"  # lower-case spelling, read and canonicalised
K_OPTIMAL = "Expectation Value Optimal"
K_JOBS = "Job durations [ms]"
K_PARAMS = "Optimal params"
K_OPT_DUR = "Optimizer durations [ms]"
K_ITERS = "Optimizer iterations"
K_QUBITS = "Qubits"
K_CLASSIC = "Total Classic duration [s]"
K_QUANTUM = "Total Quantum duration [s]"
RECORD_KEYS = (K_DEPTH, K_EV, K_BASELINE, K_OPTIMAL, K_JOBS, K_PARAMS, K_OPT_DUR,
               K_ITERS, K_QUBITS, K_CLASSIC, K_QUANTUM)
META_KEYS = ("Kind", "Size", "Seed", "Cycle", "Shots", "Backend", "Optimizer")


class SchemaError(ValueError):
    """A record file does not match the record schema."""

    def __init__(self, message, field=None, index=None):
        where = []
        if index is not None:
            where.append(f"record {index}")
        if field is not None:
            where.append(f"field {field!r}")
        super().__init__(f"{', '.join(where)}: {message}" if where else message)
        self.field = field
        self.index = index


class ConfigError(ValueError):
    def __init__(self, field, message):
        super().__init__(f"config field {field!r}: {message}")
        self.field = field


class BenchmarkError(RuntimeError):
    """Failure inside one execution cycle, tagged with where it happened."""

    def __init__(self, kind, size, cycle, cause):
        super().__init__(f"{kind} size {size} cycle {cycle}: {type(cause).__name__}: {cause}")
        self.kind, self.size, self.cycle = kind, size, cycle


@dataclass
class ExecutionRecord:
    depth: float
    expectation_value: float
    expectation_value_baseline: float | None
    expectation_value_optimal: float
    job_durations_ms: list[float]
    optimal_params: list[float]
    optimizer_durations_ms: list[float]
    optimizer_iterations: int
    qubits: int
    total_classic_duration_s: float
    total_quantum_duration_s: float
    kind: str | None = None
    size: int | None = None
    seed: int | None = None
    cycle: int | None = None
    shots: int | None = None
    backend: str | None = None
    optimizer: dict | None = None  # optimiser settings, needed to replay the baseline
    extra: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        out = {
            K_DEPTH: float(self.depth),
            K_EV: float(self.expectation_value),
        }
        if self.expectation_value_baseline is not None:
            out[K_BASELINE] = float(self.expectation_value_baseline)
        out.update({
            K_OPTIMAL: float(self.expectation_value_optimal),
            K_JOBS: [float(x) for x in self.job_durations_ms],
            K_PARAMS: [float(x) for x in self.optimal_params],
            K_OPT_DUR: [float(x) for x in self.optimizer_durations_ms],
            K_ITERS: int(self.optimizer_iterations),
            K_QUBITS: int(self.qubits),
            K_CLASSIC: float(self.total_classic_duration_s),
            K_QUANTUM: float(self.total_quantum_duration_s),
        })
        meta = (self.kind, self.size, self.seed, self.cycle, self.shots, self.backend, self.optimizer)
        for key, val in zip(META_KEYS, meta):
            if val is not None:
                out[key] = val
        out.update(self.extra)
        return out

    @classmethod
    def from_json(cls, obj, index=None) -> ExecutionRecord:
        if not isinstance(obj, dict):
            raise SchemaError("record must be a JSON object", index=index)
        if K_BASELINE_ALIAS in obj and K_BASELINE not in obj:
            obj = {(K_BASELINE if k == K_BASELINE_ALIAS else k): v for k, v in obj.items()}

        def need(key):
            if key not in obj:
                raise SchemaError("missing required field", key, index)
            return obj[key]

        def real(key, optional=False):
            if optional and key not in obj:
                return None
            v = need(key)
            if isinstance(v, bool) or not isinstance(v, (int, float)) or not math.isfinite(v):
                raise SchemaError(f"expected a finite number, got {v!r}", key, index)
            return float(v)

        def count(key, minimum=0):
            v = need(key)
            if isinstance(v, float) and v.is_integer():
                v = int(v)
            if isinstance(v, bool) or not isinstance(v, int) or v < minimum:
                raise SchemaError(f"expected an integer >= {minimum}, got {v!r}", key, index)
            return v

        def reals(key):
            v = need(key)
            if not isinstance(v, list) or any(
                isinstance(x, bool) or not isinstance(x, (int, float)) for x in v
            ):
                raise SchemaError("expected a list of numbers", key, index)
            return [float(x) for x in v]

        meta = {}
        for key in META_KEYS:
            if key in obj:
                meta[key] = obj[key]
        kind = meta.get("Kind")
        if kind is not None and kind not in KINDS:
            raise SchemaError(f"unknown problem kind {kind!r}", "Kind", index)
        for key in ("Size", "Seed", "Cycle", "Shots"):
            if key in meta:
                count(key)
        if "Optimizer" in meta:
            try:
                OptimConfig(**meta["Optimizer"])
            except (TypeError, ValueError) as exc:
                raise SchemaError(f"invalid optimiser settings: {exc}", "Optimizer", index) from None
        known = set(RECORD_KEYS) | set(META_KEYS)
        return cls(
            depth=real(K_DEPTH),
            expectation_value=real(K_EV),
            expectation_value_baseline=real(K_BASELINE, optional=True),
            expectation_value_optimal=real(K_OPTIMAL),
            job_durations_ms=reals(K_JOBS),
            optimal_params=reals(K_PARAMS),
            optimizer_durations_ms=reals(K_OPT_DUR),
            optimizer_iterations=count(K_ITERS),
            qubits=count(K_QUBITS, 1),
            total_classic_duration_s=real(K_CLASSIC),
            total_quantum_duration_s=real(K_QUANTUM),
            kind=kind,
            size=meta.get("Size"),
            seed=meta.get("Seed"),
            cycle=meta.get("Cycle"),
            shots=meta.get("Shots"),
            backend=meta.get("Backend"),
            optimizer=meta.get("Optimizer"),
            extra={k: v for k, v in obj.items() if k not in known},
        )


@dataclass
class Failure:
    kind: str
    size: int
    cycle: int | None
    message: str

    def __str__(self):
        where = f"{self.kind} size {self.size}"
        if self.cycle is not None:
            where += f" cycle {self.cycle}"
        return f"{where}: {self.message}"


@dataclass
class RecordSet:
    """Records grouped by ``(kind, size)``, plus any per-group failures."""

    groups: dict[tuple[str, int], list[ExecutionRecord]] = field(default_factory=dict)
    failures: list[Failure] = field(default_factory=list)
    device: str = ""

    def add(self, record: ExecutionRecord):
        if record.kind is None or record.size is None:
            raise ValueError("records need kind and size metadata to be grouped")
        self.groups.setdefault((record.kind, record.size), []).append(record)

    def records(self) -> list[ExecutionRecord]:
        return [r for key in sorted(self.groups) for r in self.groups[key]]

    def kinds(self) -> list[str]:
        present = {k for k, _ in self.groups}
        return [k for k in KINDS if k in present]

    def sizes(self, kind: str) -> list[int]:
        return sorted(s for k, s in self.groups if k == kind)

    def subset(self, kind: str) -> RecordSet:
        return RecordSet({key: list(v) for key, v in self.groups.items() if key[0] == kind},
                         [f for f in self.failures if f.kind == kind], self.device)

    def __len__(self):
        return sum(len(v) for v in self.groups.values())


# -- execution ------------------------------------------------------------------

@lru_cache(maxsize=None)
def _optimum(instance: ProblemInstance) -> float:
    return brute_force_optimum(instance)


def cycle_seed(seed: int, kind: str, size: int, cycle: int) -> int:
    """Independent per-cycle seed derived from the suite seed."""
    ss = np.random.SeedSequence([seed, KINDS.index(kind), size, cycle])
    return int(ss.generate_state(1, np.uint64)[0])


def run_vqa(instance: ProblemInstance, shots: int, config: OptimConfig = OptimConfig(),
            cycle_seed: int = 0, *, max_qubits: int = DEFAULT_MAX_QUBITS,
            baseline: bool = True, cycle: int | None = None) -> ExecutionRecord:
    """One execution cycle: sampled optimisation plus (optionally) its exact baseline."""
    try:
        return _run_vqa(instance, shots, config, cycle_seed, max_qubits, baseline, cycle)
    except BenchmarkError:
        raise
    except Exception as exc:
        raise BenchmarkError(instance.kind, instance.size, cycle, exc) from exc


def _run_vqa(instance, shots, config, seed, max_qubits, baseline, cycle):
    if shots < 1:
        raise ValueError("shots must be >= 1")
    if instance.qubits > max_qubits:
        raise ResourceError(f"{instance.qubits} qubits exceeds simulator cap of {max_qubits}")
    rng = np.random.default_rng(seed)
    x0 = initial_params(instance, rng)
    depth = build_circuits(instance, x0).depth()
    jobs: list[float] = []

    def sampled(params):
        hists = {}
        for circuit, basis in build_circuits(instance, params).decomposed():
            h = run_job(circuit, shots, rng, max_qubits)
            jobs.append(h.duration_ms)
            hists[basis] = h
        return expectation_from_counts(instance, hists)

    t0 = time.perf_counter()
    res = minimize(sampled, x0, config)
    wall = time.perf_counter() - t0
    quantum = sum(jobs) / 1000.0

    base = None
    if baseline:
        base = minimize(lambda p: exact_value(instance, p, max_qubits), x0, config).best_value

    return ExecutionRecord(
        depth=float(depth),
        expectation_value=res.best_value,
        expectation_value_baseline=base,
        expectation_value_optimal=_optimum(instance),
        job_durations_ms=jobs,
        optimal_params=[float(p) for p in res.best_params],
        optimizer_durations_ms=res.iteration_durations_ms,
        optimizer_iterations=res.iterations,
        qubits=instance.qubits,
        total_classic_duration_s=max(wall - quantum, 0.0),
        total_quantum_duration_s=quantum,
        kind=instance.kind,
        size=instance.size,
        seed=None,
        cycle=cycle,
        shots=shots,
        backend=BACKEND_ID,
        optimizer=asdict(config),
    )


@dataclass(frozen=True)
class SuiteConfig:
    device: str = "statevector"
    problems: tuple[tuple[str, int, int], ...] = ()
    shots: int = 4096
    cycles: int = 10
    seed: int = 0
    output_dir: str | None = None
    a_star: float = 0.2
    optimizer: OptimConfig = OptimConfig()
    max_qubits: int = DEFAULT_MAX_QUBITS

    def __post_init__(self):
        if self.shots < 1:
            raise ConfigError("shots", "must be >= 1")
        if self.cycles < 1:
            raise ConfigError("cycles", "must be >= 1")
        if not 0 < self.a_star < 1:
            raise ConfigError("a_star", "must lie strictly between 0 and 1")
        if self.max_qubits < 1:
            raise ConfigError("max_qubits", "must be >= 1")
        if self.seed < 0:
            raise ConfigError("seed", "must be >= 0")
        if not self.device or "__" in self.device or "/" in self.device:
            raise ConfigError("device", "must be a non-empty label without '__' or '/'")
        for kind, start, end in self.problems:
            if kind not in KINDS:
                raise ConfigError(f"problems.{kind}", f"unknown kind; expected one of {list(KINDS)}")
            if start > end:
                raise ConfigError(f"problems.{kind}", "start size exceeds end size")

    @classmethod
    def from_dict(cls, d) -> SuiteConfig:
        if not isinstance(d, dict):
            raise ConfigError("<root>", "config must be a JSON object")
        allowed = {"device", "problems", "shots", "cycles", "seed", "output_dir", "a_star",
                   "optimizer", "max_qubits"}
        for key in d:
            if key not in allowed:
                raise ConfigError(key, "unknown field")
        kw = {}
        for key in ("shots", "cycles", "seed", "max_qubits"):
            if key in d:
                kw[key] = _int_field(d[key], key)
        if "device" in d:
            if not isinstance(d["device"], str):
                raise ConfigError("device", "must be a string")
            kw["device"] = d["device"]
        if "output_dir" in d:
            if not isinstance(d["output_dir"], str):
                raise ConfigError("output_dir", "must be a string path")
            kw["output_dir"] = d["output_dir"]
        if "a_star" in d:
            kw["a_star"] = _real_field(d["a_star"], "a_star")
        probs = d.get("problems", {})
        if not isinstance(probs, dict):
            raise ConfigError("problems", "must map kind to [start, end]")
        plist = []
        for kind, rng in probs.items():
            name = f"problems.{kind}"
            if not isinstance(rng, list) or len(rng) != 2:
                raise ConfigError(name, "must be [start, end]")
            start, end = (_int_field(v, name) for v in rng)
            if start < 1:
                raise ConfigError(name, "sizes must be positive")
            plist.append((kind, start, end))
        kw["problems"] = tuple(plist)
        if "optimizer" in d:
            opt = d["optimizer"]
            if not isinstance(opt, dict):
                raise ConfigError("optimizer", "must be an object")
            okw = {}
            for key in opt:
                name = f"optimizer.{key}"
                if key == "max_iterations":
                    okw[key] = _int_field(opt[key], name)
                elif key in ("initial_trust_radius", "final_trust_radius"):
                    okw[key] = _real_field(opt[key], name)
                else:
                    raise ConfigError(name, "unknown field")
            try:
                kw["optimizer"] = OptimConfig(**okw)
            except ValueError as exc:
                raise ConfigError("optimizer", str(exc)) from None
        return cls(**kw)


def _int_field(v, name):
    if isinstance(v, bool) or not isinstance(v, int):
        raise ConfigError(name, f"expected an integer, got {v!r}")
    return v


def _real_field(v, name):
    if isinstance(v, bool) or not isinstance(v, (int, float)) or not math.isfinite(v):
        raise ConfigError(name, f"expected a finite number, got {v!r}")
    return float(v)


def _run_group(config: SuiteConfig, kind: str, size: int):
    records, failures = [], []
    need = qubits_required(kind, size)
    if need > config.max_qubits:
        msg = f"needs {need} qubits, simulator cap is {config.max_qubits}"
        return records, [Failure(kind, size, None, msg)]
    try:
        instance = make_instance(kind, size, config.seed)
    except Exception as exc:
        return records, [Failure(kind, size, None, f"{type(exc).__name__}: {exc}")]
    for c in range(config.cycles):
        try:
            rec = run_vqa(instance, config.shots, config.optimizer,
                          cycle_seed(config.seed, kind, size, c),
                          max_qubits=config.max_qubits, cycle=c)
        except BenchmarkError as exc:
            failures.append(Failure(kind, size, c, str(exc.__cause__ or exc)))
            continue
        rec.seed = config.seed
        records.append(rec)
    return records, failures


def _workers() -> int:
    raw = os.environ.get(WORKERS_ENV, "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def run_suite(config: SuiteConfig) -> RecordSet:
    """Problems outer, sizes inner; failures are collected and the loop continues."""
    groups = [(kind, n) for kind, start, end in config.problems for n in range(start, end + 1)]
    out = RecordSet(device=config.device)
    workers = _workers()
    if workers > 1 and len(groups) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_run_group, [config] * len(groups),
                                    [g[0] for g in groups], [g[1] for g in groups]))
    else:
        results = [_run_group(config, kind, n) for kind, n in groups]
    for recs, fails in results:
        for r in recs:
            out.add(r)
        out.failures.extend(fails)
    return out


# -- persistence ----------------------------------------------------------------

def dumps_records(records: list[ExecutionRecord]) -> str:
    return json.dumps([r.to_json() for r in records], indent=2, ensure_ascii=False) + "\n"


def save_records(records: RecordSet | list[ExecutionRecord], path) -> None:
    recs = records.records() if isinstance(records, RecordSet) else list(records)
    Path(path).write_text(dumps_records(recs), encoding="utf-8")


def parse_records(text: str, kind: str | None = None) -> list[ExecutionRecord]:
    """Parse a record file body (array of records, or a single record object)."""
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"not valid JSON: {exc}") from None
    if isinstance(data, dict):
        data = [data]
    if not isinstance(data, list):
        raise SchemaError("top level must be a record object or an array of records")
    out = []
    for i, obj in enumerate(data):
        rec = ExecutionRecord.from_json(obj, i)
        if rec.kind is None:
            rec.kind = kind
        elif kind is not None and rec.kind != kind:
            raise SchemaError(f"kind {rec.kind!r} in a file for {kind!r}", "Kind", i)
        if rec.size is None and rec.kind is not None:
            rec.size = size_from_qubits(rec.kind, rec.qubits)
        out.append(rec)
    return out


def load_records(path, kind: str | None = None) -> RecordSet:
    """Load one record file; ``kind`` fills in records lacking ``Kind`` metadata."""
    path = Path(path)
    if kind is None:
        kind = split_record_filename(path.name)[1]
    recs = parse_records(path.read_text(encoding="utf-8"), kind)
    rs = RecordSet()
    for i, r in enumerate(recs):
        if r.kind is None:
            raise SchemaError("problem kind unknown (no Kind field, no kind in file name)", "Kind", i)
        rs.add(r)
    return rs


def size_from_qubits(kind: str, qubits: int) -> int | None:
    for n in range(1, qubits + 1):
        if qubits_required(kind, n) == qubits:
            return n
    return None


def record_filename(device: str, kind: str) -> str:
    return f"{device}__{kind}.json"


def split_record_filename(name: str) -> tuple[str | None, str | None]:
    if not name.endswith(".json") or "__" not in name:
        return None, None
    device, kind = name[:-5].rsplit("__", 1)
    return device, (kind if kind in KINDS else None)


def save_directory(records: RecordSet, out_dir, device: str | None = None) -> list[Path]:
    device = device or records.device
    paths = []
    for kind in records.kinds():
        p = Path(out_dir) / record_filename(device, kind)
        save_records(records.subset(kind), p)
        paths.append(p)
    return paths


def load_directory(path) -> dict[str, RecordSet]:
    """All ``<device>__<KIND>.json`` files under ``path``, merged per device."""
    out: dict[str, RecordSet] = {}
    for p in sorted(Path(path).glob("*__*.json")):
        device, kind = split_record_filename(p.name)
        if kind is None:
            continue
        rs = load_records(p, kind)
        dst = out.setdefault(device, RecordSet(device=device))
        for r in rs.records():
            dst.add(r)
    return out


def fill_baselines(records: RecordSet, config: OptimConfig = OptimConfig(),
                   max_qubits: int = DEFAULT_MAX_QUBITS) -> int:
    """Recompute missing baseline values from replay metadata; returns how many were filled.

    A record's own optimiser settings take precedence over ``config``.
    """
    filled = 0
    for (kind, size), recs in records.groups.items():
        for r in recs:
            if r.expectation_value_baseline is not None:
                continue
            if r.seed is None or r.cycle is None:
                raise SchemaError(f"{kind} size {size}: baseline missing and no Seed/Cycle to replay it",
                                  K_BASELINE)
            inst = make_instance(kind, size, r.seed)
            x0 = initial_params(inst, np.random.default_rng(cycle_seed(r.seed, kind, size, r.cycle)))
            cfg = OptimConfig(**r.optimizer) if r.optimizer is not None else config
            r.expectation_value_baseline = minimize(
                lambda p: exact_value(inst, p, max_qubits), x0, cfg).best_value
            filled += 1
    return filled
