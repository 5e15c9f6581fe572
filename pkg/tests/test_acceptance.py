"""Acceptance gate: the headline results this package must reproduce.

Each test prints one ``[PASS]``/``[FAIL]`` line (visible with ``pytest -s`` or
on failure) so the suite doubles as a checklist.
"""

import math
import random
from fractions import Fraction

import numpy as np
import pytest

from khash import bounds, lab, pipeline
from khash.optimize import (
    OptimizerConfig,
    _FunctionalObjective,
    grid_oracle,
    maximize,
)
from khash.selections import (
    FunctionalSpec,
    conjectured_selection,
    enumerate_selections,
    sample_selections,
)

FAST = OptimizerConfig(num_starts=60, seed=0)


def _report(num, desc, check):
    try:
        check()
    except Exception:
        print(f"[FAIL] criterion {num}: {desc}")
        raise
    print(f"[PASS] criterion {num}: {desc}")


def test_criterion_01_constants():
    def check():
        assert bounds.fk_alpha(4, exact=True) == Fraction(3, 8)
        assert bounds.fk_alpha(5, exact=True) == Fraction(24, 125)
        assert bounds.fk_alpha(6, exact=True) == Fraction(5, 54)
        assert abs(bounds.trivial_upper(3) - 0.585) < 1e-3

    _report(1, "alpha_4,5,6 exact; trivial upper bound for k=3", check)


def test_criterion_02_threshold():
    def check():
        sol = pipeline.solve_threshold(5)
        assert abs(sol.gamma_star - 0.136163) < 1e-4

    _report(2, "gamma*_5 = 0.136163 +- 1e-4", check)


def test_criterion_03_beta():
    def check():
        r5 = pipeline.compute_beta(5, config=FAST)
        assert abs(r5.beta - 0.190825) < 1e-5
        assert r5.beta < bounds.fk_alpha(5)
        r6 = pipeline.compute_beta(6, config=FAST)
        assert abs(r6.beta - 0.0922787) < 1e-6
        assert r6.beta < bounds.fk_alpha(6)

    _report(3, "beta_5 = 0.190825 +- 1e-5 and beta_6 = 0.0922787 +- 1e-6, "
               "both below alpha_k", check)


def test_criterion_04_enumeration():
    def check():
        sels = enumerate_selections(5)
        assert len(sels) == 2
        conj = conjectured_selection(5)
        assert any(s.indices == conj.indices for s in sels)
        for k in (4, 5, 6):
            enumerated = {s.indices for s in enumerate_selections(k)}
            sampled = {frozenset(s)
                       for s in sample_selections(k, trials=4000, seed=1)}
            assert sampled == enumerated

    _report(4, "q_5 = 2 including the conjectured selection; sampling agrees "
               "for k=4,5,6", check)


def test_criterion_05_conjecture():
    def check():
        config = OptimizerConfig()  # default: 200 starts
        for k in (5, 6):
            g = pipeline.solve_threshold(k).gamma_star
            verdict = pipeline.verify_conjecture(k, g, config)
            assert verdict.holds
            assert verdict.margin >= -1e-7

    _report(5, "conjectured functional dominates at gamma*_5 and gamma*_6",
            check)


def test_criterion_06_arikan():
    def check():
        assert abs(bounds.arikan_bound(4, 4) - 0.3512) < 5e-4

    _report(6, "Arikan bound for (4,4)-hashing = 0.3512 +- 5e-4", check)


def test_criterion_07_identities():
    def check():
        for k in range(4, 11):
            u = Fraction(1, k)
            alpha = bounds.fk_alpha(k, exact=True)
            assert bounds.theta_closed(k, u, exact=True) == alpha
            assert bounds.beta_star(k, u, exact=True) == u
            assert bounds.xi(k, u, exact=True) == alpha
            km, _ = bounds.km_bound(k, k, exact=True)
            assert km == alpha

    _report(7, "theta/beta*/xi/Korner-Marton identities exact at gamma = 1/k "
               "for k=4..10", check)


def test_criterion_08_optimizer_oracle():
    def check():
        rng = random.Random(8)
        checked = 0
        while checked < 20:
            k = rng.choice([4, 5])
            pole = 1 / (k * k - 2 * k)
            gamma = pole + (1 / k - pole) * (0.2 + 0.8 * rng.random())
            sel = rng.choice(enumerate_selections(k))
            spec = FunctionalSpec(k=k, gamma=gamma, selection=sel)
            opt = maximize(spec, FAST).value
            grid = grid_oracle(spec, 25)
            assert opt >= grid - 1e-9
            assert opt - grid <= 0.02
            checked += 1

        nprng = np.random.default_rng(88)
        points = 0
        while points < 100:
            k = rng.choice([4, 5])
            obj = _FunctionalObjective(k, 0.9 / k, conjectured_selection(k))
            x = nprng.dirichlet(np.ones(k)) * 0.8 + 0.02
            _, grad = obj.value_and_grad(x)
            num = np.zeros(k)
            for i in range(k):
                xp, xm = x.copy(), x.copy()
                xp[i] += 1e-6
                xm[i] -= 1e-6
                num[i] = (obj.value(xp) - obj.value(xm)) / 2e-6
            assert np.allclose(grad, num, rtol=1e-5, atol=1e-8)
            points += 1

    _report(8, "optimizer beats the grid oracle within tolerance; gradients "
               "match finite differences on 100 points", check)


def test_criterion_09_hansel_sweep():
    def check():
        rng = random.Random(9)
        done = 0
        while done < 1000:
            k = rng.choice([3, 4])
            n = rng.randint(2, 8)
            size = rng.randint(k, 12)
            words = []
            for _ in range(100):
                cand = tuple(rng.randrange(k) for _ in range(n))
                if cand in words:
                    continue
                trial = lab.Code(k=k, n=n, words=tuple(words + [cand]))
                if trial.size >= k and not lab.is_k_separated(trial)[0]:
                    continue
                words.append(cand)
                if len(words) >= size:
                    break
            if len(words) < k:
                continue
            code = lab.Code(k=k, n=n, words=tuple(words))
            fixed = rng.sample(code.words, k - 2)
            res = lab.hansel_check(code, fixed, skip_separation_check=True)
            assert res["satisfied"]
            done += 1

        hyper = 0
        while hyper < 100:
            b = rng.choice([4, 5])
            n = rng.randint(2, 5)
            words = []
            for _ in range(120):
                cand = tuple(rng.randrange(b) for _ in range(n))
                if cand in words:
                    continue
                trial = lab.Code(k=b, n=n, words=tuple(words + [cand]))
                if trial.size >= 4 and not lab.is_k_separated(trial, k=4)[0]:
                    continue
                words.append(cand)
                if len(words) >= 10:
                    break
            if len(words) < 5:
                continue
            code = lab.Code(k=b, n=n, words=tuple(words))
            res = lab.hypergraph_hansel_check(code, 4, 1,
                                              (rng.choice(code.words),),
                                              skip_separation_check=True)
            assert res["satisfied"]
            hyper += 1

    _report(9, "Hansel inequality on 1000 random separated codes; hypergraph "
               "variant on 100 (4,4)/(5,4) cases", check)


def test_criterion_10_census_identity():
    def check():
        rng = random.Random(10)
        for k in (4, 5, 6):
            for tsize in (1, 2, 3):
                n = tsize + rng.randint(0, 2)
                words = tuple(sorted({
                    tuple(rng.randrange(k) for _ in range(n))
                    for _ in range(14)
                }))
                code = lab.Code(k=k, n=n, words=words)
                census, _ = lab.subcode_census(code, list(range(tsize)))
                expected = code.size * math.comb(k - 1, 3) ** tsize
                assert sum(census.values()) == expected

    _report(10, "subcode census counts sum to |C| * C(k-1,3)^|T| exactly "
                "(k=4,5,6; |T|<=3)", check)


def test_criterion_11_documented_exclusion():
    def check():
        # Constructing codes that approach the true rate limit needs block
        # lengths far beyond desk scale, so no test builds them; the
        # asymptotic claims rest on the formula and identity suites above.
        # Sanity-check the window those suites pin down: the probabilistic
        # floor sits below the improved ceiling, which sits below alpha_k.
        for k in (5, 6):
            report = pipeline.compute_beta(k, config=FAST, verify=False)
            assert bounds.prob_lower(k) < report.beta < bounds.fk_alpha(k)

    _report(11, "asymptotically optimal code constructions are out of scope; "
                "bound ordering prob_lower < beta < alpha verified instead",
            check)
