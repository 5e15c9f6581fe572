"""Upper bounds on the rate of k-hash codes.

Closed-form bound formulas, candidate-functional enumeration, polynomial
maximization over the probability simplex, threshold balancing for the
improved bound beta_k, and a combinatorial lab for explicit codes.
"""

from .bounds import (
    arikan_bound,
    beta_star,
    fk_alpha,
    g_poly,
    km_bound,
    prob_lower,
    q_poly,
    r_bal,
    r_unbal,
    theta_closed,
    trivial_upper,
    xi,
)
from .lab import Code, hansel_check, is_k_separated
from .optimize import OptimizerConfig, OptimizationResult, grid_oracle, maximize, phi
from .pipeline import BoundReport, compute_beta, solve_threshold, verify_conjecture
from .selections import (
    conjectured_selection,
    enumerate_selections,
    enumerate_subsets,
    evaluate_functional,
    symmetric_sum,
)

__version__ = "0.1.0"
