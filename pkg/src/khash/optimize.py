"""Multi-start projected-gradient maximization over the probability simplex.

The objectives are low-degree polynomials (the selection functionals and the
two-vector form phi), so projected-gradient ascent with backtracking converges
quickly; a handful of structured starts plus seeded Dirichlet starts covers the
symmetry classes of local maxima.  A lattice grid oracle provides an
independent lower bound on every maximum for cross-validation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations
from typing import Callable, Sequence

import numpy as np

from .selections import (
    FunctionalSpec,
    SubsetFamily,
    TopSelection,
    enumerate_selections,
    enumerate_subsets,
)


@dataclass(frozen=True)
class OptimizerConfig:
    num_starts: int = 200
    max_iters: int = 10000
    tolerance: float = 1e-10
    seed: int = 0
    grid_resolution: int = 20

    def __post_init__(self):
        if self.num_starts < 1:
            raise ValueError("num_starts must be >= 1")
        if self.tolerance <= 0:
            raise ValueError("tolerance must be positive")


@dataclass(frozen=True)
class OptimizationResult:
    value: float
    argmax: tuple
    starts_converged: int
    best_start_index: int

    def to_record(self) -> dict:
        return {
            "value": self.value,
            "argmax": [float(f"{x:.12g}") for x in self.argmax],
            "starts_converged": self.starts_converged,
            "best_start_index": self.best_start_index,
        }


def project_simplex(v: np.ndarray, total: float = 1.0) -> np.ndarray:
    """Euclidean projection onto {x >= 0, sum x = total}."""
    n = len(v)
    if total <= 0.0:
        return np.zeros(n)
    a = np.sort(v)[::-1]
    cssv = np.cumsum(a) - total
    rho = np.nonzero(a * np.arange(1, n + 1) > cssv)[0][-1]
    lam = cssv[rho] / (rho + 1.0)
    return np.maximum(v - lam, 0.0)


def project_simplex_lb(v: np.ndarray, lower: float) -> np.ndarray:
    """Projection onto {x >= lower, sum x = 1} via the shifted simplex."""
    k = len(v)
    slack = 1.0 - k * lower
    if slack < -1e-12:
        raise ValueError(f"lower bound {lower} infeasible for dimension {k}")
    return lower + project_simplex(v - lower, total=max(slack, 0.0))


class _FunctionalObjective:
    """Fast evaluation/gradient of one selection functional via index arrays."""

    def __init__(self, k: int, gamma: float, selection: TopSelection,
                 family: SubsetFamily | None = None):
        self.k = k
        self.gamma = float(gamma)
        self.selection = selection
        fam = family if family is not None else enumerate_subsets(k)
        self.family = fam
        self.idx = np.array(fam.subsets, dtype=int) - 1  # (t, k-2)
        coeff = np.full(fam.t, 2.0 * gamma)
        for i in selection.indices:
            coeff[i] = 1.0 - (k - 2) * gamma
        self.coeff = math.factorial(k - 2) * coeff

    def value(self, g: np.ndarray) -> float:
        d = np.prod(g[self.idx], axis=1)
        return float(self.coeff @ d)

    def value_and_grad(self, g: np.ndarray):
        rows = g[self.idx]  # (t, m)
        t, m = rows.shape
        pref = np.ones((t, m + 1))
        suf = np.ones((t, m + 1))
        np.cumprod(rows, axis=1, out=pref[:, 1:])
        np.cumprod(rows[:, ::-1], axis=1, out=suf[:, 1:])
        suf = suf[:, ::-1]
        d = pref[:, -1]
        excl = pref[:, :-1] * suf[:, 1:]  # d_j with coordinate p left out
        grad = np.zeros(self.k)
        weighted = self.coeff[:, None] * excl
        np.add.at(grad, self.idx.ravel(), weighted.ravel())
        return float(self.coeff @ d), grad


class _PhiObjective:
    """phi_k(g, f) over the product of the simplex and the f >= gamma simplex."""

    def __init__(self, k: int):
        self.k = k
        fam = enumerate_subsets(k)
        self.family = fam
        self.idx = np.array(fam.subsets, dtype=int) - 1
        self.scale = math.factorial(k - 2)
        # membership[a, j] = 1 if symbol a+1 in P_j
        self.membership = np.zeros((k, fam.t))
        for j, s in enumerate(fam.subsets):
            for a in s:
                self.membership[a - 1, j] = 1.0

    def value(self, g: np.ndarray, f: np.ndarray) -> float:
        d = np.prod(g[self.idx], axis=1)
        w = 1.0 - self.membership.T @ f
        return self.scale * float(d @ w)

    def value_and_grad(self, g: np.ndarray, f: np.ndarray):
        rows = g[self.idx]
        t, m = rows.shape
        pref = np.ones((t, m + 1))
        suf = np.ones((t, m + 1))
        np.cumprod(rows, axis=1, out=pref[:, 1:])
        np.cumprod(rows[:, ::-1], axis=1, out=suf[:, 1:])
        suf = suf[:, ::-1]
        d = pref[:, -1]
        excl = pref[:, :-1] * suf[:, 1:]
        w = 1.0 - self.membership.T @ f
        val = self.scale * float(d @ w)
        grad_g = np.zeros(self.k)
        np.add.at(grad_g, self.idx.ravel(), (w[:, None] * excl).ravel())
        grad_g *= self.scale
        grad_f = -self.scale * (self.membership @ d)
        return val, grad_g, grad_f


def phi(g: Sequence, f: Sequence) -> float:
    """phi_k(g, f): sum over ordered distinct (k-2)-tuples of prod g * (1 - sum f)."""
    if len(g) != len(f):
        raise ValueError(f"dimension mismatch: {len(g)} vs {len(f)}")
    k = len(g)
    obj = _PhiObjective(k)
    return obj.value(np.asarray(g, dtype=float), np.asarray(f, dtype=float))


def _starts(k: int, config: OptimizerConfig, lower: float) -> list:
    """Structured starts (uniform, vertices, two-level profiles) + Dirichlet."""
    rng = np.random.default_rng(config.seed)
    pts = [np.full(k, 1.0 / k)]
    for a in range(k):
        v = np.zeros(k)
        v[a] = 1.0
        pts.append(v)
    for a in range(k):
        for beta in (1.0 / k, 1.0 / (k - 1), 0.5 / (k - 1) + 0.5 / k):
            v = np.full(k, beta)
            v[a] = 1.0 - (k - 1) * beta
            pts.append(v)
    while len(pts) < config.num_starts:
        pts.append(rng.dirichlet(np.ones(k)))
    pts = pts[: max(config.num_starts, 1)]
    return [project_simplex_lb(p, lower) for p in pts]


def _ascend(value_and_grad: Callable, x0: np.ndarray, lower: float,
            config: OptimizerConfig):
    """Projected-gradient ascent with backtracking; returns (value, x, converged)."""
    x = x0.copy()
    val, grad = value_and_grad(x)
    step = 1.0
    converged = False
    for _ in range(config.max_iters):
        pg = project_simplex_lb(x + grad, lower) - x
        if np.linalg.norm(pg) < config.tolerance:
            converged = True
            break
        improved = False
        t = step
        for _ in range(60):
            cand = project_simplex_lb(x + t * grad, lower)
            cval = value_and_grad(cand)[0]
            if cval > val + 1e-16:
                x = cand
                val, grad = value_and_grad(x)
                step = min(t * 2.0, 1e6)
                improved = True
                break
            t *= 0.5
        if not improved:
            converged = True  # no ascent direction left at float precision
            break
    return val, x, converged


def maximize(objective, config: OptimizerConfig | None = None,
             lower: float = 0.0) -> OptimizationResult:
    """Multi-start maximization of a FunctionalSpec (or raw objective) on the simplex.

    ``objective`` is either a FunctionalSpec or an object with ``k`` and
    ``value_and_grad(x)``.  Deterministic given the config seed; the best start
    wins with ties broken by lowest start index.
    """
    config = config or OptimizerConfig()
    if isinstance(objective, FunctionalSpec):
        obj = _FunctionalObjective(objective.k, float(objective.gamma),
                                   objective.selection, objective.family)
    else:
        obj = objective
    best = None
    converged_count = 0
    for i, x0 in enumerate(_starts(obj.k, config, lower)):
        val, x, conv = _ascend(obj.value_and_grad, x0, lower, config)
        converged_count += conv
        if best is None or val > best[0] + 1e-15:
            best = (val, x, i)
    return OptimizationResult(
        value=best[0],
        argmax=tuple(best[1]),
        starts_converged=converged_count,
        best_start_index=best[2],
    )


def maximize_phi(k: int, gamma: float, config: OptimizerConfig | None = None
                 ) -> tuple[OptimizationResult, tuple]:
    """Maximize phi_k(g, f) over g in the simplex, f with min coord >= min(gamma, 1/k).

    Returns the result (argmax = g) together with the maximizing f.
    """
    config = config or OptimizerConfig()
    obj = _PhiObjective(k)
    lower_f = min(gamma, 1.0 / k)

    best = None
    converged_count = 0
    g_starts = _starts(k, config, 0.0)
    f_starts = _starts(k, config, lower_f)
    for i, (g0, f0) in enumerate(zip(g_starts, f_starts)):
        g, f = g0.copy(), f0.copy()
        val = obj.value(g, f)
        step = 1.0
        conv = False
        for _ in range(config.max_iters):
            val, grad_g, grad_f = obj.value_and_grad(g, f)
            pg = np.concatenate([
                project_simplex_lb(g + grad_g, 0.0) - g,
                project_simplex_lb(f + grad_f, lower_f) - f,
            ])
            if np.linalg.norm(pg) < config.tolerance:
                conv = True
                break
            improved = False
            t = step
            for _ in range(60):
                gc = project_simplex_lb(g + t * grad_g, 0.0)
                fc = project_simplex_lb(f + t * grad_f, lower_f)
                cval = obj.value(gc, fc)
                if cval > val + 1e-16:
                    g, f, val = gc, fc, cval
                    step = min(t * 2.0, 1e6)
                    improved = True
                    break
                t *= 0.5
            if not improved:
                conv = True
                break
        converged_count += conv
        if best is None or val > best[0] + 1e-15:
            best = (val, g, f, i)
    result = OptimizationResult(
        value=best[0], argmax=tuple(best[1]),
        starts_converged=converged_count, best_start_index=best[3],
    )
    return result, tuple(best[2])


def simplex_lattice(k: int, resolution: int, budget: int = 5_000_000):
    """All points of the simplex with denominators = resolution (compositions)."""
    count = math.comb(resolution + k - 1, k - 1)
    if count > budget:
        raise ValueError(
            f"lattice of {count} points exceeds budget {budget} "
            f"(k={k}, resolution={resolution})"
        )
    for bars in combinations(range(resolution + k - 1), k - 1):
        prev = -1
        comp = []
        for b in bars:
            comp.append(b - prev - 1)
            prev = b
        comp.append(resolution + k - 2 - prev)
        yield np.array(comp, dtype=float) / resolution


def grid_oracle(objective, resolution: int, min_coord: float = 0.0,
                budget: int = 5_000_000) -> float:
    """Brute-force max of the objective over the resolution-lattice of the simplex.

    Always a lower bound on the true maximum.  ``objective`` is a
    FunctionalSpec or an object with ``k`` and ``value(x)``.
    """
    if isinstance(objective, FunctionalSpec):
        obj = _FunctionalObjective(objective.k, float(objective.gamma),
                                   objective.selection, objective.family)
    else:
        obj = objective
    best = -math.inf
    for x in simplex_lattice(obj.k, resolution, budget=budget):
        if min_coord > 0.0 and x.min() < min_coord - 1e-12:
            continue
        v = obj.value(x)
        if v > best:
            best = v
    return best


def maximize_all_selections(k: int, gamma: float,
                            config: OptimizerConfig | None = None):
    """Optimize every candidate functional; returns (per-selection results, best index).

    The per-selection list is ordered like enumerate_selections(k); the overall
    max across it upper-bounds the balanced-case constant for this gamma.
    """
    config = config or OptimizerConfig()
    selections = enumerate_selections(k)
    family = enumerate_subsets(k)
    results = []
    for sel in selections:
        spec = FunctionalSpec(k=k, gamma=gamma, selection=sel, family=family)
        results.append((sel, maximize(spec, config)))
    best_i = max(range(len(results)),
                 key=lambda i: (results[i][1].value, -i))
    return results, best_i
