"""Derivative-free minimiser in the style of Powell's COBYLA.

Unconstrained variant: the method keeps a simplex of ``n + 1`` evaluated
points, fits the linear interpolant through them, and steps to the boundary of
a trust region of radius ``rho`` along the model's steepest descent.  ``rho``
only ever shrinks, from ``initial_trust_radius`` down to
``final_trust_radius``.  When the simplex degenerates relative to ``rho`` a
geometry-improving point is evaluated instead of a model step.

One iteration is one objective evaluation; per-iteration wall times and values
are recorded in the result.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

# Simplex acceptability: every vertex within PARETA*rho of the best vertex and
# every vertex at least PARSIG*rho from the opposite face.
PARSIG = 0.25
PARETA = 2.1
GEOMETRY_STEP = 0.5
RATIO_SHRINK = 0.1


class OptimizerError(RuntimeError):
    pass


@dataclass(frozen=True)
class OptimConfig:
    max_iterations: int = 100
    initial_trust_radius: float = 0.5
    final_trust_radius: float = 1e-4
    seed: int | None = None

    def __post_init__(self):
        if self.max_iterations < 1:
            raise ValueError("max_iterations must be >= 1")
        if not 0 < self.final_trust_radius < self.initial_trust_radius:
            raise ValueError("need 0 < final_trust_radius < initial_trust_radius")


@dataclass
class OptimResult:
    best_params: np.ndarray
    best_value: float
    iterations: int
    iteration_durations_ms: list[float] = field(default_factory=list)
    value_history: list[float] = field(default_factory=list)
    final_trust_radius: float = math.nan
    message: str = ""


class _Budget(Exception):
    pass


class _Tracker:
    def __init__(self, objective, max_evals):
        self.objective = objective
        self.max_evals = max_evals
        self.values: list[float] = []
        self.durations: list[float] = []
        self.best_x = None
        self.best_f = math.inf
        self._last = time.perf_counter()

    def __call__(self, x: np.ndarray) -> float:
        if len(self.values) >= self.max_evals:
            raise _Budget
        f = self.objective(x.copy())
        try:
            f = float(f)
        except (TypeError, ValueError):
            f = math.nan
        if not math.isfinite(f):
            raise OptimizerError(f"objective returned {f!r} at x = {x.tolist()}")
        now = time.perf_counter()
        self.durations.append((now - self._last) * 1000.0)
        self._last = now
        self.values.append(f)
        if f < self.best_f:
            self.best_f, self.best_x = f, x.copy()
        return f


def minimize(objective: Callable[[np.ndarray], float], x0, config: OptimConfig = OptimConfig()) -> OptimResult:
    x0 = np.atleast_1d(np.asarray(x0, dtype=float)).copy()
    if x0.size < 1:
        raise ValueError("x0 must have at least one component")
    track = _Tracker(objective, config.max_iterations)
    rho = config.initial_trust_radius
    rho_end = config.final_trust_radius
    message = ""
    try:
        rho, message = _run(track, x0, rho, rho_end)
    except _Budget:
        message = "iteration limit reached"
    return OptimResult(
        best_params=track.best_x,
        best_value=track.best_f,
        iterations=len(track.values),
        iteration_durations_ms=track.durations,
        value_history=track.values,
        final_trust_radius=rho,
        message=message,
    )


def _run(f, x0, rho, rho_end):
    n = x0.size
    # Vertex 0 of ``sim`` is always the best point found.
    sim = np.empty((n + 1, n))
    fv = np.empty(n + 1)
    sim[0] = x0
    fv[0] = f(x0)
    for i in range(n):
        sim[i + 1] = x0
        sim[i + 1, i] += rho
        fv[i + 1] = f(sim[i + 1])
    _sort_best(sim, fv)

    while True:
        a = sim[1:] - sim[0]
        inv = _safe_inv(a)
        if inv is None:
            _rebuild(f, sim, fv, rho)
            continue
        grad = inv @ (fv[1:] - fv[0])
        gnorm = float(np.linalg.norm(grad))

        ratio = -1.0
        if gnorm > 0.0 and np.isfinite(gnorm):
            step = -rho * grad / gnorm
            trial = sim[0] + step
            ft = f(trial)
            predicted = rho * gnorm
            ratio = (fv[0] - ft) / predicted
            _insert(sim, fv, inv, trial, ft, rho)
            if ratio >= RATIO_SHRINK:
                continue

        # Poor or impossible model step: repair geometry before shrinking rho.
        a = sim[1:] - sim[0]
        inv = _safe_inv(a)
        if inv is None:
            _rebuild(f, sim, fv, rho)
            continue
        j = _worst_vertex(a, inv, rho)
        if j is not None:
            d = inv[:, j] / np.linalg.norm(inv[:, j])
            grad = inv @ (fv[1:] - fv[0])
            if grad @ d > 0:
                d = -d
            x = sim[0] + GEOMETRY_STEP * rho * d
            sim[j + 1] = x
            fv[j + 1] = f(x)
            _sort_best(sim, fv)
            continue

        if rho <= rho_end:
            return rho, "trust radius reached its final value"
        rho *= 0.5
        if rho <= 1.5 * rho_end:
            rho = rho_end


def _safe_inv(a):
    try:
        inv = np.linalg.inv(a)
    except np.linalg.LinAlgError:
        return None
    if not np.all(np.isfinite(inv)) or np.linalg.cond(a) > 1e12:
        return None
    return inv


def _rebuild(f, sim, fv, rho):
    n = sim.shape[1]
    base = sim[0].copy()
    for i in range(n):
        sim[i + 1] = base
        sim[i + 1, i] += rho
        fv[i + 1] = f(sim[i + 1])
    _sort_best(sim, fv)


def _sort_best(sim, fv):
    k = int(np.argmin(fv))
    if k != 0:
        sim[[0, k]] = sim[[k, 0]]
        fv[[0, k]] = fv[[k, 0]]


def _worst_vertex(a, inv, rho):
    """Index (into ``a``) of a vertex spoiling the simplex shape, or None if acceptable."""
    dist = np.linalg.norm(a, axis=1)
    # distance of vertex j to the face through the others is 1 / |column j of inv|
    height = 1.0 / np.linalg.norm(inv, axis=0)
    if dist.max() > PARETA * rho:
        return int(np.argmax(dist))
    if height.min() < PARSIG * rho:
        return int(np.argmin(height))
    return None


def _insert(sim, fv, inv, x, fx, rho):
    """Swap the trial point into the simplex, keeping the volume as large as possible."""
    rel = x - sim[0]
    # coefficients of rel in the basis of edge vectors: rel = sum_j lam_j a_j
    lam = rel @ inv
    dist = np.linalg.norm(sim[1:] - x, axis=1)
    score = np.abs(lam) * np.maximum(1.0, dist / rho) ** 2
    j = int(np.argmax(score))
    # A new best point always enters; otherwise only if it enlarges the simplex.
    if fx >= fv[0] and score[j] <= 1.0:
        return
    sim[j + 1] = x
    fv[j + 1] = fx
    _sort_best(sim, fv)
