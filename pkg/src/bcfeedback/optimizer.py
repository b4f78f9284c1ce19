"""Derivative-free maximization of the AWGN feedback sum rate.

The search space is (alpha, beta, D, P1) inside the box

    alpha, beta in [d, 1 - d],  D in [d, 1],  P1 in [d P, (1 - d) P],  d = 1e-3.

A coarse grid is evaluated with the vectorized kernel; the best grid points
seed Nelder-Mead runs whose iterates are projected onto the box. Every
result is a deterministic function of (channel, budget).
"""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from typing import Sequence

import numpy as np
from scipy.optimize import minimize

from . import kernels
from .awgn import AwgnChannelSpec, AwgnModelError, AwgnParams, awgn_sum_rate

DELTA = 1e-3
SIMPLEX_EDGE = 0.05
# value handed to the minimizer for points where the rate is undefined
_BAD = 1e6
_NM_OPTIONS = {"xatol": 1e-10, "fatol": 1e-13, "adaptive": False}
SWEEP_AXES = ("snr", "sigmaf2", "rho")


@dataclass(frozen=True)
class OptBudget:
    grid_points_per_dim: int = 16
    refine_starts: int = 8
    refine_iters: int = 400
    seed: int = 0

    def __post_init__(self):
        if int(self.grid_points_per_dim) < 4:
            raise ValueError("grid_points_per_dim must be >= 4")
        if int(self.refine_starts) < 1:
            raise ValueError("refine_starts must be >= 1")
        if int(self.refine_iters) < 1:
            raise ValueError("refine_iters must be >= 1")
        if int(self.seed) < 0:
            raise ValueError("seed must be unsigned")


@dataclass
class OptResult:
    best_params: AwgnParams
    sum_rate: float
    trace: list = field(default_factory=list)  # (AwgnParams, value) per refinement step
    grid_best_params: AwgnParams | None = None
    grid_best: float = -math.inf

    def to_dict(self) -> dict:
        p = self.best_params
        return {
            "sum_rate": self.sum_rate,
            "alpha": p.alpha, "beta": p.beta, "D": p.D, "P1": p.P1,
            "grid_best": self.grid_best,
            "refine_steps": len(self.trace),
        }


def search_box(channel: AwgnChannelSpec, delta: float = DELTA) -> tuple[np.ndarray, np.ndarray]:
    P = channel.P
    lo = np.array([delta, delta, delta, delta * P])
    hi = np.array([1 - delta, 1 - delta, 1.0, (1 - delta) * P])
    return lo, hi


def grid_points(channel: AwgnChannelSpec, n: int) -> np.ndarray:
    """(n^4, 4) grid in lexicographic (alpha, beta, D, P1) order."""
    lo, hi = search_box(channel)
    axes = [np.linspace(l, h, n) for l, h in zip(lo, hi)]
    mesh = np.meshgrid(*axes, indexing="ij")
    return np.stack([m.ravel() for m in mesh], axis=1)


def _eval_batch(channel: AwgnChannelSpec, X: np.ndarray) -> np.ndarray:
    c = channel
    X = np.ascontiguousarray(X)
    v = kernels.sum_rate_batch(c.P, c.sigma2, c.sigmaf2, c.rho, X[:, 0].copy(), X[:, 1].copy(),
                               X[:, 2].copy(), X[:, 3].copy())
    v = np.asarray(v, dtype=float)
    return np.where(np.isfinite(v), v, -np.inf)


def evaluate_grid(channel: AwgnChannelSpec, X: np.ndarray, threads: int = 1) -> np.ndarray:
    if threads <= 1 or len(X) < 2 * threads:
        return _eval_batch(channel, X)
    chunks = np.array_split(X, threads)
    with ThreadPoolExecutor(threads) as ex:
        parts = list(ex.map(lambda ch: _eval_batch(channel, ch), chunks))
    return np.concatenate(parts)


def _params(channel: AwgnChannelSpec, x: np.ndarray) -> AwgnParams:
    return AwgnParams(channel, float(x[0]), float(x[1]), float(x[2]), float(x[3]))


def _refine(channel: AwgnChannelSpec, x0: np.ndarray, iters: int, seed: int):
    """One Nelder-Mead run; returns (best point, best kernel value, trace)."""
    lo, hi = search_box(channel)
    c = channel
    best = {"x": np.clip(x0, lo, hi), "v": -math.inf}

    def value(x):
        x = np.clip(x, lo, hi)
        v = kernels.sum_rate(c.P, c.sigma2, c.sigmaf2, c.rho, *map(float, x))
        v = float(v) if np.isfinite(v) else -math.inf
        # strict improvement keeps the first point reached on ties
        if v > best["v"]:
            best["x"], best["v"] = x.copy(), v
        return v

    def neg(x):
        v = value(x)
        return -v if np.isfinite(v) else _BAD

    rng = np.random.default_rng(seed)
    signs = rng.choice([-1.0, 1.0], size=4)
    x0 = np.clip(x0, lo, hi)
    simplex = [x0]
    for i in range(4):
        step = SIMPLEX_EDGE * (hi[i] - lo[i]) * signs[i]
        if not lo[i] <= x0[i] + step <= hi[i]:
            step = -step
        xi = x0.copy()
        xi[i] += step
        simplex.append(xi)
    trace = []

    def record(xk):
        xk = np.clip(xk, lo, hi)
        trace.append((xk.copy(), value(xk)))

    value(x0)
    minimize(neg, x0, method="Nelder-Mead", callback=record,
             options=dict(_NM_OPTIONS, maxiter=int(iters), initial_simplex=np.array(simplex)))
    return best["x"], best["v"], trace


def optimize_sum_rate(channel: AwgnChannelSpec, budget: OptBudget | None = None,
                      threads: int = 1, warm_start: OptResult | None = None) -> OptResult:
    """Grid search then Nelder-Mead from the best grid points.

    Grid ties go to the lowest lexicographic (alpha, beta, D, P1). With
    ``warm_start`` the previous best point is refined as an extra start.
    """
    budget = budget or OptBudget()
    X = grid_points(channel, budget.grid_points_per_dim)
    vals = evaluate_grid(channel, X, threads)
    order = np.argsort(-vals, kind="stable")
    starts = [X[i] for i in order[: budget.refine_starts] if np.isfinite(vals[i])]
    if not starts:
        starts = [X[0]]
    if warm_start is not None:
        p = warm_start.best_params
        starts.append(np.array([p.alpha, p.beta, p.D, p.P1]))
    seeds = np.random.SeedSequence(budget.seed).generate_state(len(starts))

    def run(k):
        return _refine(channel, starts[k], budget.refine_iters, int(seeds[k]))

    if threads > 1 and len(starts) > 1:
        with ThreadPoolExecutor(threads) as ex:
            runs = list(ex.map(run, range(len(starts))))
    else:
        runs = [run(k) for k in range(len(starts))]

    grid_best_params = _params(channel, X[order[0]])
    grid_best = awgn_sum_rate(grid_best_params) if np.isfinite(vals[order[0]]) else -math.inf
    best_params, best_val = grid_best_params, grid_best
    trace = []
    for x, v, tr in runs:
        trace.extend((_params(channel, xk), vk) for xk, vk in tr)
        if not np.isfinite(v):
            continue
        p = _params(channel, x)
        val = awgn_sum_rate(p)
        if val > best_val:
            best_params, best_val = p, val
    if warm_start is not None and warm_start.sum_rate > best_val:
        best_params, best_val = warm_start.best_params, awgn_sum_rate(warm_start.best_params)
    return OptResult(best_params, float(best_val), trace, grid_best_params, float(grid_best))


@dataclass
class SweepRow:
    value: float
    result: OptResult | None
    error: str | None = None

    @property
    def sum_rate(self) -> float:
        return self.result.sum_rate if self.result is not None else math.nan


def _channel_for(template: AwgnChannelSpec, axis: str, value: float) -> AwgnChannelSpec:
    if axis == "snr":
        return replace(template, P=float(value) * template.sigma2)
    if axis == "sigmaf2":
        return replace(template, sigmaf2=float(value))
    if axis == "rho":
        return replace(template, rho=float(value))
    raise ValueError(f"axis must be one of {SWEEP_AXES}, got {axis!r}")


def sweep(channel_template: AwgnChannelSpec, axis: str, values: Sequence[float],
          budget: OptBudget | None = None, threads: int = 1) -> list[SweepRow]:
    """One optimization per value, rows in input order; bad values become error rows."""
    if axis not in SWEEP_AXES:
        raise ValueError(f"axis must be one of {SWEEP_AXES}, got {axis!r}")
    if len(values) == 0:
        raise ValueError("sweep needs at least one value")
    rows = []
    for v in values:
        try:
            ch = _channel_for(channel_template, axis, v)
        except (AwgnModelError, TypeError, ValueError) as e:
            rows.append(SweepRow(float(v) if _is_number(v) else math.nan, None, str(e)))
            continue
        rows.append(SweepRow(float(v), optimize_sum_rate(ch, budget, threads)))
    return rows


def _is_number(v) -> bool:
    try:
        float(v)
    except (TypeError, ValueError):
        return False
    return True


__all__ = ["DELTA", "OptBudget", "OptResult", "SweepRow", "search_box", "grid_points",
           "evaluate_grid", "optimize_sum_rate", "sweep", "SWEEP_AXES"]
