"""Pure, mapped, combined and overall benchmark scores.

Pure scores per problem kind:

* runtime: gates per second, ``sum_N D_N S_N / T_N`` divided by
  ``N_end - N_start`` (1 when a single size was run), with ``T_N`` the mean
  job time in seconds at size ``N``;
* accuracy: ``sum_N (E_ideal - E_Q) / E_ideal`` over the same divisor, both
  energies being the lowest value reached over the execution cycles;
* scalability: exponent ``a`` of the least-squares fit of ``(N / N_end)^a``
  to min-max normalised mean job times;
* capacity: largest qubit width whose relative error is within ``A*``.

Mapped scores put the four on comparable scales, the combined sub-scores
are means over problems, and the overall score is the area of the
quadrilateral spanned by the four sub-scores on a radar plot.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .harness import ExecutionRecord, RecordSet

DEFAULT_A_STAR = 0.2
DEFAULT_SHOTS = 4096
ACCURACY_SCALE = 30 / math.pi
ACCURACY_SLOPE = 50.0
SCALABILITY_SCALE = 30 / math.pi
SCALABILITY_SLOPE = 0.75
FIT_BRACKET = (0.0, 10.0)
FIT_TOL = 1e-6
MIN_FIT_SIZES = 3

_INVPHI = (math.sqrt(5) - 1) / 2


class ScoringError(ValueError):
    pass


@dataclass(frozen=True)
class SizeStats:
    size: int
    qubits: int
    depth: float
    shots: int
    mean_job_s: float
    e_ideal: float | None
    e_q: float


def size_stats(records: list[ExecutionRecord]) -> list[SizeStats]:
    """Per-size aggregates for the records of one problem kind, sorted by size."""
    by_size: dict[int, list[ExecutionRecord]] = {}
    kinds = {r.kind for r in records}
    if len(kinds) > 1:
        raise ScoringError(f"records mix problem kinds {sorted(map(str, kinds))}")
    for r in records:
        if r.size is None:
            raise ScoringError("record without a problem size")
        by_size.setdefault(r.size, []).append(r)
    out = []
    for n in sorted(by_size):
        group = by_size[n]
        jobs = [d for r in group for d in r.job_durations_ms]
        mean_job = float(np.mean(jobs)) / 1000.0 if jobs else 0.0
        bases = [r.expectation_value_baseline for r in group]
        e_ideal = None if any(b is None for b in bases) else min(bases)
        out.append(SizeStats(
            size=n,
            qubits=group[0].qubits,
            depth=max(r.depth for r in group),
            shots=group[0].shots if group[0].shots is not None else DEFAULT_SHOTS,
            mean_job_s=mean_job,
            e_ideal=e_ideal,
            e_q=min(r.expectation_value for r in group),
        ))
    return out


def _divisor(stats) -> int:
    return max(stats[-1].size - stats[0].size, 1)


def _as_stats(records_or_stats):
    items = list(records_or_stats)
    if items and isinstance(items[0], ExecutionRecord):
        return size_stats(items)
    return items


def runtime_terms(stats: list[SizeStats]) -> list[float]:
    terms = []
    for s in stats:
        if not s.mean_job_s > 0:
            raise ScoringError(f"size {s.size}: mean job time is {s.mean_job_s}; timer is degenerate")
        terms.append(s.depth * s.shots / s.mean_job_s)
    return terms


def pure_runtime(records) -> float:
    """Gates per second averaged over sizes with the ``N_end - N_start`` divisor."""
    stats = _as_stats(records)
    if not stats:
        raise ScoringError("no sizes to score")
    return math.fsum(runtime_terms(stats)) / _divisor(stats)


def pure_runtime_inclusive(records) -> float:
    """Plain mean of gates per second over the evaluated sizes (debug companion)."""
    stats = _as_stats(records)
    if not stats:
        raise ScoringError("no sizes to score")
    return math.fsum(runtime_terms(stats)) / len(stats)


def relative_errors(records, baselines: dict[int, float] | None = None) -> tuple[dict[int, float], list[int]]:
    """Signed relative error per size, and sizes left out for a zero baseline."""
    stats = _as_stats(records)
    errors, excluded = {}, []
    for s in stats:
        ideal = baselines[s.size] if baselines and s.size in baselines else s.e_ideal
        if ideal is None:
            raise ScoringError(f"size {s.size}: no baseline expectation value")
        if ideal == 0:
            excluded.append(s.size)
            continue
        errors[s.size] = (ideal - s.e_q) / ideal
    return errors, excluded


def pure_accuracy(records, baselines: dict[int, float] | None = None) -> float:
    stats = _as_stats(records)
    if not stats:
        raise ScoringError("no sizes to score")
    errors, _ = relative_errors(stats, baselines)
    if not errors:
        raise ScoringError("every size has a zero baseline; accuracy is undefined")
    return math.fsum(errors.values()) / _divisor(stats)


def pure_capacity(records, a_star: float = DEFAULT_A_STAR,
                  baselines: dict[int, float] | None = None) -> int:
    stats = _as_stats(records)
    errors, _ = relative_errors(stats, baselines)
    qubits = {s.size: s.qubits for s in stats}
    ok = [qubits[n] for n, e in errors.items() if e <= a_star]
    return max(ok) if ok else 0


@dataclass(frozen=True)
class ScalingFit:
    exponent: float
    degenerate: bool = False


def _golden_min(f, lo, hi, tol):
    a, b = lo, hi
    c = b - _INVPHI * (b - a)
    d = a + _INVPHI * (b - a)
    fc, fd = f(c), f(d)
    while b - a > tol:
        if fc <= fd:
            b, d, fd = d, c, fc
            c = b - _INVPHI * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + _INVPHI * (b - a)
            fd = f(d)
    x = (a + b) / 2
    # the bracket ends are candidates too (monotone residual)
    return min((lo, x, hi), key=f)


def fit_scaling(sizes, times) -> ScalingFit:
    sizes = np.asarray(sizes, dtype=float)
    times = np.asarray(times, dtype=float)
    if sizes.shape != times.shape or sizes.ndim != 1:
        raise ScoringError("sizes and times must be equal-length 1-d sequences")
    if sizes.size < MIN_FIT_SIZES:
        raise ScoringError(f"need at least {MIN_FIT_SIZES} sizes to fit a scaling exponent, got {sizes.size}")
    if np.any(sizes <= 0) or np.any(times < 0) or not np.all(np.isfinite(times)):
        # zero is allowed so already-normalised data (minimum at 0) can be fitted
        raise ScoringError("sizes must be positive and times finite and non-negative")
    span = times.max() - times.min()
    if span == 0:
        return ScalingFit(0.0, True)
    y = (times - times.min()) / span
    x = sizes / sizes.max()

    def sse(a):
        return float(np.sum((x ** a - y) ** 2))

    def slope(a):
        xa = x ** a
        return float(np.sum(2 * (xa - y) * xa * np.log(x)))

    a = _golden_min(sse, *FIT_BRACKET, FIT_TOL)
    # Function values cannot resolve the minimiser much below sqrt(machine eps);
    # polish by bisecting the sign change of the analytic derivative.
    lo, hi = max(a - 2 * FIT_TOL, FIT_BRACKET[0]), min(a + 2 * FIT_TOL, FIT_BRACKET[1])
    if slope(lo) < 0 < slope(hi):
        for _ in range(100):
            mid = 0.5 * (lo + hi)
            if slope(mid) < 0:
                lo = mid
            else:
                hi = mid
        a = 0.5 * (lo + hi)
    return ScalingFit(float(a))


def fit_scaling_exponent(sizes, times) -> float:
    return fit_scaling(sizes, times).exponent


def pure_scalability(records) -> ScalingFit:
    stats = _as_stats(records)
    return fit_scaling([s.size for s in stats], [s.mean_job_s for s in stats])


# -- mapping and combination ----------------------------------------------------

def map_runtime(x: float) -> float:
    if not x > 0:
        raise ScoringError(f"runtime score must be positive, got {x}")
    return math.log10(x)


def map_accuracy(x: float) -> float:
    return ACCURACY_SCALE * (math.pi / 2 - math.atan(ACCURACY_SLOPE * x))


def map_scalability(a: float) -> float:
    return SCALABILITY_SCALE * (math.pi / 2 - math.atan(SCALABILITY_SLOPE * (a - 1)))


def map_capacity(q: float) -> float:
    return float(q)


@dataclass(frozen=True)
class PureScores:
    runtime: float
    accuracy: float
    scalability: float | None
    capacity: int
    scalability_degenerate: bool = False


@dataclass(frozen=True)
class MappedScores:
    runtime: float
    accuracy: float
    scalability: float | None
    capacity: float


def map_scores(pure: PureScores) -> MappedScores:
    return MappedScores(
        runtime=map_runtime(pure.runtime),
        accuracy=map_accuracy(pure.accuracy),
        scalability=None if pure.scalability is None else map_scalability(pure.scalability),
        capacity=map_capacity(pure.capacity),
    )


@dataclass(frozen=True)
class SubScores:
    runtime: float
    accuracy: float
    scalability: float
    capacity: float


def _mean(values):
    values = [v for v in values if v is not None]
    return math.fsum(values) / len(values) if values else 0.0


def combine(mapped: list[MappedScores]) -> SubScores:
    """Mean over problems; a problem without a given sub-score is left out of that mean."""
    if not mapped:
        raise ScoringError("nothing to combine")
    return SubScores(
        runtime=_mean(m.runtime for m in mapped),
        accuracy=_mean(m.accuracy for m in mapped),
        scalability=_mean(m.scalability for m in mapped),
        capacity=_mean(m.capacity for m in mapped),
    )


def overall(sub: SubScores) -> float:
    return 0.5 * (sub.runtime + sub.scalability) * (sub.accuracy + sub.capacity)


# -- record sets ------------------------------------------------------------------

@dataclass
class ProblemReport:
    kind: str
    pure: PureScores
    mapped: MappedScores
    sizes: list[int]
    runtime_inclusive: float
    excluded_sizes: list[int] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "pure": {
                "runtime": self.pure.runtime,
                "accuracy": self.pure.accuracy,
                "scalability": self.pure.scalability,
                "capacity": self.pure.capacity,
            },
            "mapped": {
                "runtime": self.mapped.runtime,
                "accuracy": self.mapped.accuracy,
                "scalability": self.mapped.scalability,
                "capacity": self.mapped.capacity,
            },
            "sizes": list(self.sizes),
            "runtime_inclusive_mean": self.runtime_inclusive,
            "scalability_degenerate": self.pure.scalability_degenerate,
            "excluded_sizes": list(self.excluded_sizes),
            "notes": list(self.notes),
        }


@dataclass
class ScoreSet:
    sub: SubScores
    overall: float
    per_problem: dict[str, ProblemReport]

    def to_json(self) -> dict:
        return {
            "runtime": self.sub.runtime,
            "accuracy": self.sub.accuracy,
            "scalability": self.sub.scalability,
            "capacity": self.sub.capacity,
            "overall": self.overall,
            "per_problem": {k: v.to_json() for k, v in self.per_problem.items()},
        }


def score_problem(records: list[ExecutionRecord], a_star: float = DEFAULT_A_STAR) -> ProblemReport:
    stats = size_stats(records)
    if not stats:
        raise ScoringError("no records")
    kind = records[0].kind
    notes = []
    _, excluded = relative_errors(stats)
    if excluded:
        notes.append(f"sizes {excluded} left out of accuracy and capacity: baseline is zero")
    if len(stats) >= MIN_FIT_SIZES:
        fit = pure_scalability(stats)
        a, degenerate = fit.exponent, fit.degenerate
        if degenerate:
            notes.append("job times are constant across sizes; scaling exponent set to 0")
    else:
        a, degenerate = None, False
        notes.append(f"only {len(stats)} sizes; left out of the scalability mean")
    pure = PureScores(
        runtime=pure_runtime(stats),
        accuracy=pure_accuracy(stats),
        scalability=a,
        capacity=pure_capacity(stats, a_star),
        scalability_degenerate=degenerate,
    )
    return ProblemReport(kind, pure, map_scores(pure), [s.size for s in stats],
                         pure_runtime_inclusive(stats), excluded, notes)


def score_records(records: RecordSet, a_star: float = DEFAULT_A_STAR) -> ScoreSet:
    if not 0 < a_star < 1:
        raise ScoringError("A* must lie strictly between 0 and 1")
    if len(records) == 0:
        raise ScoringError("no records to score")
    per = {}
    for kind in records.kinds():
        per[kind] = score_problem(records.subset(kind).records(), a_star)
    sub = combine([p.mapped for p in per.values()])
    return ScoreSet(sub, overall(sub), per)


def score_devices(devices: dict[str, RecordSet], a_star: float = DEFAULT_A_STAR) -> dict[str, ScoreSet]:
    return {d: score_records(devices[d], a_star) for d in sorted(devices)}


def load_scores(obj) -> dict[str, dict]:
    """Validate a parsed scores file (device -> score object) and return it."""
    if not isinstance(obj, dict) or not obj:
        raise ScoringError("scores file must map device names to score objects")
    for dev, s in obj.items():
        for key in ("runtime", "accuracy", "scalability", "capacity", "overall"):
            v = s.get(key) if isinstance(s, dict) else None
            if isinstance(v, bool) or not isinstance(v, (int, float)):
                raise ScoringError(f"device {dev!r}: field {key!r} missing or not a number")
    return obj


__all__ = [
    "DEFAULT_A_STAR", "MappedScores", "ProblemReport", "PureScores", "ScalingFit",
    "ScoreSet", "ScoringError", "SizeStats", "SubScores", "combine", "fit_scaling",
    "fit_scaling_exponent", "load_scores", "map_accuracy", "map_capacity", "map_runtime",
    "map_scalability", "map_scores", "overall", "pure_accuracy", "pure_capacity",
    "pure_runtime", "pure_runtime_inclusive", "pure_scalability", "relative_errors",
    "score_devices", "score_problem", "score_records", "size_stats",
]
