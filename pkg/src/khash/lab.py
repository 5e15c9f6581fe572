"""Combinatorial lab: explicit codes, separation checking, and Hansel-type checks.

Codes live over an alphabet [b] (written 1..b in files, stored 0-based).  The
separation order k may be smaller than the alphabet size for (b,k)-hash codes.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, product


class BudgetExceeded(Exception):
    """Raised when an enumeration would exceed its configured work budget."""


@dataclass(frozen=True)
class Code:
    """An explicit code: distinct length-n words over the alphabet {0..k-1}."""

    k: int  # alphabet size
    n: int
    words: tuple  # tuple of tuples, 0-based symbols

    def __post_init__(self):
        if self.k < 2:
            raise ValueError(f"alphabet size must be >= 2, got {self.k}")
        seen = set()
        for w in self.words:
            if len(w) != self.n:
                raise ValueError(f"word {w} has length {len(w)}, expected {self.n}")
            if any(not (0 <= s < self.k) for s in w):
                raise ValueError(f"word {w} has symbols outside 0..{self.k - 1}")
            if w in seen:
                raise ValueError(f"duplicate codeword {w}")
            seen.add(w)

    @property
    def size(self) -> int:
        return len(self.words)

    @property
    def rate(self) -> float:
        return math.log2(self.size) / self.n

    @classmethod
    def from_text(cls, text: str) -> "Code":
        """Parse the plain-text format: first line 'k n', then 1-based words."""
        k = n = None
        words = []
        for lineno, raw in enumerate(text.splitlines(), start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            parts = line.split()
            try:
                values = [int(p) for p in parts]
            except ValueError as exc:
                raise ValueError(f"line {lineno}: not integers: {raw!r}") from exc
            if k is None:
                if len(values) != 2:
                    raise ValueError(f"line {lineno}: header must be 'k n'")
                k, n = values
                continue
            if len(values) != n:
                raise ValueError(f"line {lineno}: expected {n} symbols, got {len(values)}")
            if any(not (1 <= v <= k) for v in values):
                raise ValueError(f"line {lineno}: symbols must be in 1..{k}")
            words.append(tuple(v - 1 for v in values))
        if k is None:
            raise ValueError("empty code file")
        return cls(k=k, n=n, words=tuple(words))

    def to_text(self) -> str:
        lines = [f"{self.k} {self.n}"]
        for w in self.words:
            lines.append(" ".join(str(s + 1) for s in w))
        return "\n".join(lines) + "\n"


def _colex_ksubsets(m: int, k: int):
    """Index k-subsets of range(m) in colexicographic order."""
    if k == 0:
        yield ()
        return
    for last in range(k - 1, m):
        for rest in _colex_ksubsets(last, k - 1):
            yield rest + (last,)


def is_k_separated(code: Code, k: int | None = None, budget: int = 10**8):
    """Check that every k-subset of codewords has an all-distinct coordinate.

    Returns ``(True, None)`` or ``(False, witness)`` where the witness is the
    lowest colex-rank violating k-subset of codewords.
    """
    k = code.k if k is None else k
    if code.size < k:
        raise ValueError(f"code has {code.size} words, need at least k={k}")
    probes = 0
    for idx in _colex_ksubsets(code.size, k):
        sub = [code.words[i] for i in idx]
        separated = False
        for i in range(code.n):
            probes += 1
            if len({w[i] for w in sub}) == k:
                separated = True
                break
        if probes > budget:
            raise BudgetExceeded(
                f"separation check exceeded {budget} subset-coordinate probes"
            )
        if not separated:
            return False, tuple(sub)
    return True, None


def frequency_profile(code: Code):
    """Per-coordinate symbol frequencies as exact rationals; each sums to 1."""
    m = code.size
    profile = []
    for i in range(code.n):
        counts = [0] * code.k
        for w in code.words:
            counts[w[i]] += 1
        profile.append(tuple(Fraction(c, m) for c in counts))
    return profile


@dataclass(frozen=True)
class CoordinateClassification:
    gamma: float
    near_uniform: tuple  # coordinates with min frequency >= gamma (0-based)
    skewed: tuple
    ell: int


def classify(code: Code, gamma: float) -> CoordinateClassification:
    """Split coordinates by min frequency vs gamma and compute the budget ell."""
    if code.k < 4:
        raise ValueError(f"classification needs alphabet size >= 4, got {code.k}")
    profile = frequency_profile(code)
    near = tuple(i for i, f in enumerate(profile) if min(f) >= gamma)
    skew = tuple(i for i in range(code.n) if i not in set(near))
    n, r = code.n, code.rate
    raw = (n * r - math.log2(n)) / math.log2(code.k / (code.k - 3))
    ell = max(0, math.floor(raw))
    return CoordinateClassification(gamma=gamma, near_uniform=near, skewed=skew, ell=ell)


def tau(code: Code, i: int, fixed) -> float:
    """Non-isolated fraction of the coordinate-i graph induced by k-2 fixed words.

    (|C| / (|C| - (k-2))) * (1 - sum of f_i over the fixed symbols), zero when
    the fixed symbols collide at coordinate i.
    """
    fixed = tuple(fixed)
    words = set(code.words)
    if any(w not in words for w in fixed) or len(set(fixed)) != len(fixed):
        raise ValueError("fixed words must be distinct members of the code")
    symbols = [w[i] for w in fixed]
    if len(set(symbols)) != len(symbols):
        return 0.0
    profile_i = frequency_profile(code)[i]
    m = code.size
    j = len(fixed)
    return float(Fraction(m, m - j) * (1 - sum(profile_i[s] for s in symbols)))


def tau_graph_oracle(code: Code, i: int, fixed) -> float:
    """tau by explicit graph construction; independent cross-check for tau()."""
    fixed = tuple(fixed)
    rest = [w for w in code.words if w not in set(fixed)]
    fsyms = [w[i] for w in fixed]
    non_isolated = set()
    for y1, y2 in combinations(rest, 2):
        syms = [y1[i], y2[i]] + fsyms
        if len(set(syms)) == len(syms):
            non_isolated.add(y1)
            non_isolated.add(y2)
    return len(non_isolated) / len(rest)


def hansel_check(code: Code, fixed, k: int | None = None,
                 skip_separation_check: bool = False, budget: int = 10**8) -> dict:
    """Numeric Hansel inequality: log2(|C| - k + 2) <= sum_i tau_i.

    Refuses codes that are not k-separated (the edge-cover premise fails).
    """
    k = code.k if k is None else k
    fixed = tuple(fixed)
    if len(fixed) != k - 2:
        raise ValueError(f"need exactly k-2 = {k - 2} fixed words, got {len(fixed)}")
    if not skip_separation_check:
        ok, witness = is_k_separated(code, k=k, budget=budget)
        if not ok:
            raise ValueError(f"code is not {k}-separated (witness: {witness})")
    lhs = math.log2(code.size - k + 2)
    rhs = sum(tau(code, i, fixed) for i in range(code.n))
    return {"lhs": lhs, "rhs": rhs, "satisfied": lhs <= rhs + 1e-12}


def subcode_census(code: Code, T, budget: int = 10**6):
    """Census of subcodes constrained to (k-3)-symbol patterns on coordinates T.

    Returns ``(census, richest)`` where census maps each pattern (a tuple of
    sorted (k-3)-subsets of 0-based symbols, one per coordinate of T) to the
    number of codewords whose T-projection lies inside it.  Satisfies
    sum of counts = |C| * C(k-1, k-4)^|T| exactly.
    """
    if code.k < 4:
        raise ValueError(f"census needs alphabet size >= 4, got {code.k}")
    T = tuple(T)
    k = code.k
    per_coord = list(combinations(range(k), k - 3))
    total = len(per_coord) ** len(T)
    if total > budget:
        raise BudgetExceeded(f"|Omega| = {total} exceeds budget {budget}")
    census = {}
    for omega in product(per_coord, repeat=len(T)):
        count = 0
        for w in code.words:
            if all(w[t] in omega_t for t, omega_t in zip(T, omega)):
                count += 1
        census[omega] = count
    best_count = max(census.values())
    richest = min(o for o, c in census.items() if c == best_count)
    return census, richest


def hypergraph_tau(code: Code, i: int, j: int, k: int, fixed) -> float:
    """Non-isolated fraction in the (k-j)-uniform coordinate-i hypergraph."""
    fixed = tuple(fixed)
    rest = [w for w in code.words if w not in set(fixed)]
    fsyms = [w[i] for w in fixed]
    if len(set(fsyms)) != len(fsyms):
        return 0.0
    d = k - j  # edge size
    non_isolated = 0
    for y in rest:
        if y[i] in fsyms:
            continue
        others = {w[i] for w in rest if w != y}
        others -= set(fsyms) | {y[i]}
        if len(others) >= d - 1:
            non_isolated += 1
    return non_isolated / len(rest)


def hypergraph_hansel_check(code: Code, k: int, j: int, fixed,
                            skip_separation_check: bool = False,
                            budget: int = 10**8) -> dict:
    """Hypergraph Hansel inequality for a (b,k)-hash code with j fixed words.

    log2((|C| - j)/(k-j-1)) <= log2((b-j)/(k-j-1)) * sum_i tau_i, where b is
    the code alphabet size and the hypergraph is (k-j)-uniform; requires
    k - j >= 3 (use hansel_check for the graph case, which this reduces to at
    edge size 2).
    """
    b = code.k
    fixed = tuple(fixed)
    if not (1 <= j <= k - 2):
        raise ValueError(f"need 1 <= j <= k-2, got j={j}")
    if k - j < 3:
        raise ValueError("edge size k-j must be >= 3; use hansel_check for pairs")
    if len(fixed) != j:
        raise ValueError(f"need exactly j = {j} fixed words, got {len(fixed)}")
    if not skip_separation_check:
        ok, witness = is_k_separated(code, k=k, budget=budget)
        if not ok:
            raise ValueError(f"code is not ({b},{k})-separated (witness: {witness})")
    lhs = math.log2((code.size - j) / (k - j - 1))
    taus = sum(hypergraph_tau(code, i, j, k, fixed) for i in range(code.n))
    rhs = math.log2((b - j) / (k - j - 1)) * taus
    return {"lhs": lhs, "rhs": rhs, "satisfied": lhs <= rhs + 1e-12}


def random_code_search(k: int, n: int, trials: int = 1000, seed: int = 0,
                       budget: int = 10**8) -> Code:
    """Greedy random search for a k-separated code of length n over [k].

    Starts from the k constant words (all-distinct at every coordinate), then
    tries random candidate words, keeping each one that preserves separation.
    """
    rng = random.Random(seed)
    words = [tuple([a] * n) for a in range(k)]
    current = set(words)
    for _ in range(trials):
        cand = tuple(rng.randrange(k) for _ in range(n))
        if cand in current:
            continue
        # only new k-subsets (those containing cand) need checking
        ok = True
        pool = list(current)
        for sub in combinations(pool, k - 1):
            group = sub + (cand,)
            if not any(len({w[i] for w in group}) == k for i in range(n)):
                ok = False
                break
        if ok:
            current.add(cand)
            words.append(cand)
    code = Code(k=k, n=n, words=tuple(words))
    ok, witness = is_k_separated(code, budget=budget)
    if not ok:
        raise AssertionError(f"search produced a non-separated code: {witness}")
    return code
