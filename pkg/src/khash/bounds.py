"""Closed-form rate bounds for k-hash codes.

Every function here is a pure closed-form expression.  Functions that are
rational in their arguments accept ``exact=True`` and then return a
:class:`fractions.Fraction` (arguments are coerced with ``Fraction``, so pass
Fractions or ints if you want true exactness).  Quantities that involve a
logarithm fall back to floats, except in the special cases where the log term
drops out and the value is rational (e.g. ``r_unbal`` at ``gamma = 1/k``).

All logarithms are base 2.
"""

from __future__ import annotations

import math
from fractions import Fraction


def _check_k(k: int, minimum: int = 2) -> None:
    if not isinstance(k, int) or isinstance(k, bool) or k < minimum:
        raise ValueError(f"k must be an integer >= {minimum}, got {k!r}")


def _check_gamma(k: int, gamma) -> None:
    if not (0 < gamma <= Fraction(1, k) + Fraction(1, 10**12)):
        raise ValueError(f"gamma must lie in (0, 1/k], got {gamma} for k={k}")


def log_separation(k: int) -> float:
    """log2(k / (k-3)); the denominator of the rate-balancing terms."""
    _check_k(k, 4)
    return math.log2(k / (k - 3))


def fk_alpha(k: int, exact: bool = False):
    """Fredman-Komlos upper bound alpha_k = k! / k^(k-1)."""
    _check_k(k)
    a = Fraction(math.factorial(k), k ** (k - 1))
    return a if exact else float(a)


def trivial_upper(k: int) -> float:
    """Double-counting upper bound log2(k / (k-1))."""
    _check_k(k)
    return math.log2(k / (k - 1))


def prob_lower(k: int) -> float:
    """Probabilistic existence lower bound (1/(k-1)) * log2(1 / (1 - k!/k^k))."""
    _check_k(k)
    p = Fraction(math.factorial(k), k**k)
    return math.log2(1 / float(1 - p)) / (k - 1)


def g_poly(k: int, y, exact: bool = False):
    """The single-variable envelope (k-1)! * y^(k-2) * ((k-1) - (k^2-2k)*y).

    Defined on 0 <= y <= 1/(k-1); peaks at y = 1/k with value alpha_k.
    """
    _check_k(k, 4)
    yy = Fraction(y)
    if not (-1e-12 <= yy - 0 and yy - Fraction(1, k - 1) <= 1e-12):
        raise ValueError(f"y must lie in [0, 1/(k-1)], got {y}")
    val = math.factorial(k - 1) * yy ** (k - 2) * ((k - 1) - (k * k - 2 * k) * yy)
    return val if exact else float(val)


def xi(k: int, gamma, exact: bool = False):
    """Skewed-coordinate envelope value: g_poly evaluated at (1-gamma)/(k-1)."""
    _check_k(k, 4)
    _check_gamma(k, gamma)
    g = Fraction(gamma)
    return g_poly(k, (1 - g) / (k - 1), exact=exact)


def eps(k: int, gamma, exact: bool = False):
    """Gap alpha_k - xi_k(gamma); zero iff gamma = 1/k."""
    val = fk_alpha(k, exact=True) - xi(k, Fraction(gamma), exact=True)
    return val if exact else float(val)


def r_unbal(k: int, gamma, exact: bool = False):
    """Rate bound for codes with many skewed coordinates.

    alpha_k / (1 + (alpha_k - xi_k(gamma)) / log2(k/(k-3))).  Equals alpha_k
    exactly at gamma = 1/k (the only case where the value is rational).
    """
    e = eps(k, gamma, exact=True)
    alpha = fk_alpha(k, exact=True)
    if e == 0:
        return alpha if exact else float(alpha)
    return float(alpha) / (1 + float(e) / log_separation(k))


def q_poly(k: int, gamma, beta, unclamped: bool = False, exact: bool = False):
    """Profile polynomial (k-1)! * b^(k-3) * (b*(1 - (k^2-2k)g) + (k-2)g).

    The natural domain is beta in [0, 1/(k-1)] (the profile
    (beta, ..., beta, 1-(k-1)*beta) must stay on the simplex); pass
    ``unclamped=True`` to evaluate outside it, which is needed to reproduce
    the closed-form theta at stationary points beyond 1/(k-1).
    """
    _check_k(k, 4)
    _check_gamma(k, gamma)
    g = Fraction(gamma)
    b = Fraction(beta)
    if not unclamped and not (-1e-12 <= b - 0 and b - Fraction(1, k - 1) <= 1e-12):
        raise ValueError(
            f"beta must lie in [0, 1/(k-1)], got {beta} (use unclamped=True to override)"
        )
    val = math.factorial(k - 1) * b ** (k - 3) * (b * (1 - (k * k - 2 * k) * g) + (k - 2) * g)
    return val if exact else float(val)


def beta_star(k: int, gamma, exact: bool = False):
    """Stationary point (k-3)*gamma / ((k^2-2k)*gamma - 1) of q_poly."""
    _check_k(k, 4)
    _check_gamma(k, gamma)
    g = Fraction(gamma)
    denom = (k * k - 2 * k) * g - 1
    if denom <= 0:
        raise ValueError(f"gamma = {gamma} is at or below the pole 1/(k^2-2k) for k={k}")
    val = (k - 3) * g / denom
    return val if exact else float(val)


def theta_closed(k: int, gamma, exact: bool = False):
    """Closed-form (conjectured) theta: (k-1)!(k-3)^(k-3) g^(k-2) / ((k^2-2k)g - 1)^(k-3)."""
    _check_k(k, 4)
    _check_gamma(k, gamma)
    g = Fraction(gamma)
    denom = (k * k - 2 * k) * g - 1
    if denom <= 0:
        raise ValueError(f"gamma = {gamma} is at or below the pole 1/(k^2-2k) for k={k}")
    val = math.factorial(k - 1) * (k - 3) ** (k - 3) * g ** (k - 2) / denom ** (k - 3)
    return val if exact else float(val)


def theta_constrained(k: int, gamma) -> float:
    """Max of q_poly over the feasible profile interval [1/k, 1/(k-1)].

    q_poly is concave there, so the max sits at the clamped stationary point.
    """
    lo, hi = 1.0 / k, 1.0 / (k - 1)
    b = min(max(beta_star(k, gamma), lo), hi)
    return q_poly(k, gamma, b)


def r_bal(k: int, theta, exact: bool = False):
    """Rate bound for almost-balanced codes: theta / (1 + theta / log2(k/(k-3)))."""
    _check_k(k, 4)
    if theta < 0:
        raise ValueError(f"theta must be nonnegative, got {theta}")
    if theta == 0:
        return Fraction(0) if exact else 0.0
    return float(theta) / (1 + float(theta) / log_separation(k))


def km_bound(b: int, k: int, exact: bool = False):
    """Korner-Marton bound for (b,k)-hashing.

    Returns ``(value, j)``: the minimum over j in 0..k-2 of
    (b falling (j+1) / b^(j+1)) * log2((b-j)/(k-j-1)), and the minimizing j.
    In exact mode the value is a Fraction whenever the log argument at the
    minimizing j is a power of two (it is 2 at b=k, j=k-2, giving alpha_k).
    """
    _check_k(k)
    if not isinstance(b, int) or b < k:
        raise ValueError(f"need integer b >= k, got b={b!r}, k={k}")
    best_val, best_j = None, None
    for j in range(k - 1):
        coeff = Fraction(math.perm(b, j + 1), b ** (j + 1))
        ratio = Fraction(b - j, k - j - 1)
        val = float(coeff) * math.log2(float(ratio))
        if best_val is None or val < best_val:
            best_val, best_j = val, j
    if exact:
        coeff = Fraction(math.perm(b, best_j + 1), b ** (best_j + 1))
        ratio = Fraction(b - best_j, k - best_j - 1)
        lg = _exact_log2(ratio)
        if lg is not None:
            return coeff * lg, best_j
    return best_val, best_j


def _exact_log2(r: Fraction):
    """log2 of a Fraction if it is an integer power of 2, else None."""
    if r.numerator == 1:
        n, sign = r.denominator, -1
    else:
        if r.denominator != 1:
            return None
        n, sign = r.numerator, 1
    if n & (n - 1) == 0:
        return sign * n.bit_length() - sign
    return None


def _arikan_constraint(b: int, k: int, j: int, x: float) -> float:
    coeff = math.perm(b, j) / b**j
    lg = math.log2((b - j) / (k - 1 - j))
    if 2 <= j <= b - k:
        return ((b - j) / (k - 1)) * 2.0**-x * (1 - x / math.log2(b)) * coeff * lg
    return (1 - (j / (b - k + 1)) * (1 - 2.0**-x)) * (1 - x / math.log2(b)) * coeff * lg


def arikan_bound(b: int, k: int, tol: float = 1e-9) -> float:
    """Arikan's bound on R_(b,k): sup of x with x <= alpha_j(x) for j = 2..k-2.

    Found by bisection on the feasibility predicate over [0, log2 b].
    """
    _check_k(k, 4)
    if not isinstance(b, int) or b < k:
        raise ValueError(f"need integer b >= k, got b={b!r}, k={k}")
    js = range(2, k - 1)
    if len(js) == 0:
        raise ValueError(f"empty constraint range for b={b}, k={k}")

    def feasible(x: float) -> bool:
        return all(x <= _arikan_constraint(b, k, j, x) for j in js)

    lo, hi = 0.0, math.log2(b)
    if not feasible(lo):
        raise ValueError(f"Arikan feasibility fails even at x=0 for b={b}, k={k}")
    # every constraint is <= 0 at x = log2(b), so hi is infeasible
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if feasible(mid):
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)
