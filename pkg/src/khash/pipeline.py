"""Threshold balancing and assembly of the full bound report.

The improved upper bound beta_k is obtained at the threshold gamma* where the
skewed-regime bound (r_unbal) and the balanced-regime bound (r_bal at the
closed-form theta) cross.  The crossing is bracketed and bisected; at gamma*
the candidate functionals are optimized to check that the conjectured one
attains the overall maximum.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from . import bounds
from .optimize import OptimizerConfig, maximize_all_selections
from .selections import conjectured_selection, enumerate_selections


@dataclass(frozen=True)
class ThresholdSolution:
    k: int
    gamma_star: float
    r_at_gamma_star: float
    bracket: tuple
    residual: float


@dataclass(frozen=True)
class ConjectureVerdict:
    k: int
    gamma: float
    per_selection_max: tuple  # ((canonical selection id, value), ...)
    conjectured_value: float
    margin: float
    holds: bool
    all_converged: bool


@dataclass(frozen=True)
class BoundReport:
    k: int
    alpha: float
    beta: float
    gamma_star: float
    theta_closed_at_gamma_star: float
    theta_constrained_at_gamma_star: float
    conjecture: ConjectureVerdict | None
    references: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        d = {
            "k": self.k,
            "alpha": _sig(self.alpha),
            "beta": _sig(self.beta),
            "gamma_star": _sig(self.gamma_star),
            "theta_closed_at_gamma_star": _sig(self.theta_closed_at_gamma_star),
            "theta_constrained_at_gamma_star": _sig(self.theta_constrained_at_gamma_star),
            "conjecture": None,
            "references": {key: _sig(v) for key, v in self.references.items()},
        }
        if self.conjecture is not None:
            c = self.conjecture
            d["conjecture"] = {
                "gamma": _sig(c.gamma),
                "per_selection_max": [[sid, _sig(v)] for sid, v in c.per_selection_max],
                "conjectured_value": _sig(c.conjectured_value),
                "margin": _sig(c.margin),
                "holds": c.holds,
                "all_converged": c.all_converged,
            }
        return d


def _sig(x, digits: int = 12):
    if isinstance(x, bool) or not isinstance(x, (int, float)):
        return x
    if isinstance(x, int):
        return x
    return float(f"{x:.{digits}g}")


def _balance_gap(k: int, gamma: float, theta_fn) -> float:
    """r_bal - r_unbal; positive below gamma*, negative at gamma = 1/k."""
    return bounds.r_bal(k, theta_fn(gamma)) - bounds.r_unbal(k, gamma)


def solve_threshold(k: int, theta_fn=None, gamma_tol: float = 1e-12,
                    max_iters: int = 200) -> ThresholdSolution:
    """Bisect for the gamma where the two regime bounds agree.

    The initial bracket is (1/(2k-3), 1/k); if the gap does not change sign
    there, the lower endpoint is widened geometrically toward the pole
    1/(k^2-2k) (the k=5 crossing lies below 1/(2k-3)).
    """
    bounds._check_k(k, 4)
    theta_fn = theta_fn or (lambda g: bounds.theta_closed(k, g))
    pole = 1.0 / (k * k - 2 * k)
    hi = 1.0 / k
    lo = 1.0 / (2 * k - 3)
    h_hi = _balance_gap(k, hi, theta_fn)
    h_lo = _balance_gap(k, lo, theta_fn)
    while h_lo * h_hi > 0:
        new_lo = pole + 0.5 * (lo - pole)
        if new_lo <= pole * (1 + 1e-9) or hi - new_lo < gamma_tol:
            raise ArithmeticError(
                f"no sign change found for k={k} down to the pole {pole:.6g}"
            )
        lo = new_lo
        h_lo = _balance_gap(k, lo, theta_fn)
    bracket = (lo, hi)
    for _ in range(max_iters):
        if hi - lo <= gamma_tol:
            break
        mid = 0.5 * (lo + hi)
        h_mid = _balance_gap(k, mid, theta_fn)
        if h_mid == 0.0:
            lo = hi = mid
            break
        if (h_mid > 0) == (h_lo > 0):
            lo, h_lo = mid, h_mid
        else:
            hi = mid
    gamma_star = 0.5 * (lo + hi)
    residual = abs(_balance_gap(k, gamma_star, theta_fn))
    return ThresholdSolution(
        k=k,
        gamma_star=gamma_star,
        r_at_gamma_star=bounds.r_unbal(k, gamma_star),
        bracket=bracket,
        residual=residual,
    )


def verify_conjecture(k: int, gamma: float,
                      config: OptimizerConfig | None = None,
                      tolerance: float = 1e-7) -> ConjectureVerdict:
    """Optimize all candidate functionals at gamma; check the conjectured one wins."""
    config = config or OptimizerConfig()
    results, _ = maximize_all_selections(k, gamma, config)
    conj = conjectured_selection(k)
    conj_value = None
    per_sel = []
    best_other = -math.inf
    all_conv = True
    for sel, res in results:
        per_sel.append((sel.canonical(), res.value))
        all_conv = all_conv and res.starts_converged == config.num_starts
        if sel.indices == conj.indices:
            conj_value = res.value
        else:
            best_other = max(best_other, res.value)
    if conj_value is None:
        raise AssertionError("conjectured selection missing from enumeration")
    margin = conj_value - best_other if best_other > -math.inf else 0.0
    return ConjectureVerdict(
        k=k,
        gamma=gamma,
        per_selection_max=tuple(per_sel),
        conjectured_value=conj_value,
        margin=margin,
        holds=margin >= -tolerance,
        all_converged=all_conv,
    )


def compute_beta(k: int, mode: str = "closed",
                 config: OptimizerConfig | None = None,
                 verify: bool = True) -> BoundReport:
    """Full report for one k: gamma*, beta_k, theta values, conjecture verdict.

    ``mode='closed'`` balances against the closed-form theta (the conjectured
    value); ``mode='verified'`` balances against the max over all candidate
    functionals found by the optimizer, giving a conjecture-free bound at the
    cost of trusting the optimizer.
    """
    if mode not in ("closed", "verified"):
        raise ValueError(f"mode must be 'closed' or 'verified', got {mode!r}")
    config = config or OptimizerConfig()
    if mode == "verified":
        def theta_fn(g):
            results, best_i = maximize_all_selections(k, g, config)
            return results[best_i][1].value
        sol = solve_threshold(k, theta_fn=theta_fn, gamma_tol=1e-9)
    else:
        sol = solve_threshold(k)
    gamma_star = sol.gamma_star
    alpha = bounds.fk_alpha(k)
    if mode == "closed":
        theta_at_star = bounds.theta_closed(k, gamma_star)
    else:
        results, best_i = maximize_all_selections(k, gamma_star, config)
        theta_at_star = results[best_i][1].value
    beta = max(bounds.r_unbal(k, gamma_star), bounds.r_bal(k, theta_at_star))
    if beta >= alpha:
        raise ArithmeticError(f"computed beta {beta} does not beat alpha {alpha}")
    verdict = verify_conjecture(k, gamma_star, config) if verify else None
    refs = {
        "trivial_upper": bounds.trivial_upper(k),
        "prob_lower": bounds.prob_lower(k),
        "km": bounds.km_bound(k, k)[0],
        "arikan": bounds.arikan_bound(k, k),
    }
    return BoundReport(
        k=k,
        alpha=alpha,
        beta=beta,
        gamma_star=gamma_star,
        theta_closed_at_gamma_star=bounds.theta_closed(k, gamma_star),
        theta_constrained_at_gamma_star=bounds.theta_constrained(k, gamma_star),
        conjecture=verdict,
        references=refs,
    )


def continuity_probe(k: int, gammas, config: OptimizerConfig | None = None):
    """Table of (gamma, max-over-selections theta-hat) for an explicit gamma grid."""
    config = config or OptimizerConfig()
    rows = []
    for g in gammas:
        results, best_i = maximize_all_selections(k, float(g), config)
        rows.append((float(g), results[best_i][1].value))
    return rows
