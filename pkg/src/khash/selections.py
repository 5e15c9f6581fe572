"""Enumeration of subset products and candidate top-statistic selections.

For an alphabet of size k, the degree-(k-2) monomials d_j = prod_{a in P_j} g_a
run over all (k-2)-element subsets P_j of [k].  When g is sorted in
nonincreasing order, the possible sets of the (k-1) largest d_j are exactly the
size-(k-1) up-sets (filters) of the dominance order on the complement pairs
[k] \\ P_j: a pair with componentwise larger entries has a smaller product of
two small coordinates, hence a larger d_j.  Enumerating those filters gives the
candidate selections; each selection induces a polynomial functional in g.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Sequence


@dataclass(frozen=True)
class SubsetFamily:
    """All (k-2)-element subsets of [k], in lexicographic order."""

    k: int
    subsets: tuple  # tuples of 1-based symbols, each of size k-2
    complements: tuple  # sorted 2-tuples, complements of the subsets

    @property
    def t(self) -> int:
        return len(self.subsets)


@dataclass(frozen=True)
class TopSelection:
    """A candidate set of k-1 subset indices forming the top ordered statistics."""

    k: int
    indices: frozenset  # indices into SubsetFamily.subsets
    complement_pairs: tuple  # sorted tuple of sorted 2-tuples

    def canonical(self) -> str:
        """Text form, e.g. '15,25,35,45' for the conjectured k=5 selection."""
        return ",".join(f"{a}{b}" for a, b in self.complement_pairs)


def enumerate_subsets(k: int) -> SubsetFamily:
    """Deterministic family of all (k-2)-subsets of {1..k}; t = k(k-1)/2."""
    if k < 4:
        raise ValueError(f"need k >= 4, got {k}")
    subsets = tuple(combinations(range(1, k + 1), k - 2))
    full = set(range(1, k + 1))
    complements = tuple(tuple(sorted(full - set(s))) for s in subsets)
    return SubsetFamily(k=k, subsets=subsets, complements=complements)


def subset_products(family: SubsetFamily, g: Sequence):
    """The products d_j = prod_{a in P_j} g[a-1], one per subset."""
    if len(g) != family.k:
        raise ValueError(f"g has dimension {len(g)}, expected {family.k}")
    out = []
    for s in family.subsets:
        d = g[s[0] - 1]
        for a in s[1:]:
            d = d * g[a - 1]
        out.append(d)
    return out


def _dominates(p, q) -> bool:
    """Pair p is >= pair q in the dominance order (both sorted ascending)."""
    return p[0] >= q[0] and p[1] >= q[1]


def _make_selection(family: SubsetFamily, idx_set) -> TopSelection:
    pairs = tuple(sorted(family.complements[i] for i in idx_set))
    return TopSelection(k=family.k, indices=frozenset(idx_set), complement_pairs=pairs)


def enumerate_selections(k: int) -> list:
    """All dominance-consistent top-(k-1) selections, in deterministic order.

    Enumerated as filters of size k-1 in the dominance order on complement
    pairs, grown one maximal-available element at a time with deduplication.
    """
    family = enumerate_subsets(k)
    pairs = family.complements
    n = len(pairs)
    target = k - 1

    def maximal_available(current: frozenset):
        avail = []
        for i in range(n):
            if i in current:
                continue
            # i is addable iff everything dominating it is already selected
            if all(
                j in current
                for j in range(n)
                if j != i and _dominates(pairs[j], pairs[i])
            ):
                avail.append(i)
        return avail

    frontier = {frozenset()}
    for _ in range(target):
        nxt = set()
        for cur in frontier:
            for i in maximal_available(cur):
                nxt.add(cur | {i})
        frontier = nxt
    selections = [_make_selection(family, s) for s in frontier]
    selections.sort(key=lambda sel: sel.complement_pairs)
    return selections


def conjectured_selection(k: int) -> TopSelection:
    """The selection whose top products ignore g_k: complement pairs {a, k}."""
    family = enumerate_subsets(k)
    wanted = {tuple(sorted((a, k))) for a in range(1, k)}
    idx = {i for i, c in enumerate(family.complements) if c in wanted}
    if len(idx) != k - 1:
        raise AssertionError("conjectured selection construction failed")
    return _make_selection(family, idx)


def sample_selections(k: int, trials: int = 2000, seed: int = 0) -> set:
    """Realized top-(k-1) index sets over random sorted g; independent check.

    Samples g sorted nonincreasing on the simplex, records which subsets carry
    the k-1 largest products, and skips draws with ties at the cut.
    """
    family = enumerate_subsets(k)
    rng = random.Random(seed)
    seen = set()
    for _ in range(trials):
        g = sorted((rng.random() for _ in range(k)), reverse=True)
        total = sum(g)
        g = [x / total for x in g]
        d = subset_products(family, g)
        order = sorted(range(family.t), key=lambda i: -d[i])
        if d[order[k - 2]] - d[order[k - 1]] < 1e-12:
            continue
        seen.add(frozenset(order[: k - 1]))
    return seen


@dataclass(frozen=True)
class FunctionalSpec:
    """One polynomial functional: a selection together with a threshold gamma."""

    k: int
    gamma: float
    selection: TopSelection
    family: SubsetFamily = field(compare=False, default=None)

    def __post_init__(self):
        if self.family is None:
            object.__setattr__(self, "family", enumerate_subsets(self.k))
        if not (0 < self.gamma <= 1 / self.k + 1e-12):
            raise ValueError(f"gamma must lie in (0, 1/k], got {self.gamma}")


def evaluate_functional(spec: FunctionalSpec, g: Sequence, exact: bool = False):
    """Value (k-2)! * [(1-(k-2)g)*sum_sel d + 2g*sum_rest d] at the point g."""
    k = spec.k
    gamma = Fraction(spec.gamma) if exact else spec.gamma
    d = subset_products(spec.family, g)
    sum_sel = sum(d[i] for i in spec.selection.indices)
    sum_rest = sum(d[i] for i in range(spec.family.t) if i not in spec.selection.indices)
    val = math.factorial(k - 2) * (
        (1 - (k - 2) * gamma) * sum_sel + 2 * gamma * sum_rest
    )
    return val


def symmetric_sum(g: Sequence, h: int, t: int):
    """Elementary symmetric sum S_h^t(g) over the first t coordinates.

    Computed with the stable one-pass recurrence (no inclusion-exclusion).
    """
    if not (0 <= h <= t <= len(g)):
        raise IndexError(f"need 0 <= h <= t <= len(g), got h={h}, t={t}, len={len(g)}")
    zero = g[0] * 0 if len(g) else 0  # typed zero so Fractions stay exact
    e = [zero + 1] + [zero] * h
    for i in range(t):
        for j in range(min(i + 1, h), 0, -1):
            e[j] = e[j] + g[i] * e[j - 1]
    return e[h]
