import math
import random
from fractions import Fraction
from itertools import product

import pytest

from khash import lab
from khash.lab import BudgetExceeded, Code


def full_code(k, n=1):
    return Code(k=k, n=n, words=tuple(product(range(k), repeat=n)))


def random_separated_code(k, max_size, n, rng):
    """Greedy random k-separated code for property sweeps."""
    words = []
    for _ in range(200):
        cand = tuple(rng.randrange(k) for _ in range(n))
        if cand in words:
            continue
        trial = words + [cand]
        if len(trial) >= k:
            code = Code(k=k, n=n, words=tuple(trial))
            ok, _ = lab.is_k_separated(code)
            if not ok:
                continue
        words.append(cand)
        if len(words) >= max_size:
            break
    return Code(k=k, n=n, words=tuple(words))


class TestCode:
    def test_validation(self):
        with pytest.raises(ValueError):
            Code(k=3, n=2, words=((0, 1), (0, 1)))
        with pytest.raises(ValueError):
            Code(k=3, n=2, words=((0, 3),))
        with pytest.raises(ValueError):
            Code(k=3, n=2, words=((0,),))
        with pytest.raises(ValueError):
            Code(k=1, n=1, words=((0,),))

    def test_rate(self):
        c = full_code(3)
        assert c.rate == pytest.approx(math.log2(3))

    def test_text_roundtrip(self):
        c = Code(k=4, n=2, words=((0, 0), (0, 1), (1, 2), (1, 3)))
        assert Code.from_text(c.to_text()) == c

    def test_parse_comments_and_errors(self):
        text = "# a code\n3 2\n1 2  # word\n2 3\n"
        c = Code.from_text(text)
        assert c.words == ((0, 1), (1, 2))
        with pytest.raises(ValueError, match="line 2"):
            Code.from_text("3 2\n1 2 3\n")
        with pytest.raises(ValueError, match="line 2"):
            Code.from_text("3 2\n1 9\n")
        with pytest.raises(ValueError, match="line 1"):
            Code.from_text("3\n")
        with pytest.raises(ValueError):
            Code.from_text("# nothing\n")


class TestSeparation:
    def test_diagonal_code(self):
        c = Code(k=3, n=3, words=((0, 0, 0), (1, 1, 1), (2, 2, 2)))
        ok, witness = lab.is_k_separated(c)
        assert ok and witness is None

    def test_violating_code(self):
        c = Code(k=3, n=3, words=((0, 0, 1), (0, 1, 0), (1, 0, 0)))
        ok, witness = lab.is_k_separated(c)
        assert not ok
        assert set(witness) == set(c.words)

    def test_k2_is_distinctness(self):
        c = Code(k=2, n=3, words=((0, 0, 0), (0, 1, 0), (1, 1, 1)))
        ok, _ = lab.is_k_separated(c)
        assert ok

    def test_budget(self):
        c = full_code(4, 2)
        with pytest.raises(BudgetExceeded):
            lab.is_k_separated(c, budget=3)

    def test_too_small(self):
        with pytest.raises(ValueError):
            lab.is_k_separated(Code(k=4, n=1, words=((0,), (1,))))


class TestFrequencies:
    def test_full_code_uniform(self):
        prof = lab.frequency_profile(full_code(4))
        assert prof[0] == tuple([Fraction(1, 4)] * 4)

    def test_hand_count(self):
        c = Code(k=4, n=2, words=((0, 0), (0, 1), (1, 2), (1, 3)))
        prof = lab.frequency_profile(c)
        assert prof[0] == (Fraction(1, 2), Fraction(1, 2), 0, 0)
        assert prof[1] == tuple([Fraction(1, 4)] * 4)
        cls = lab.classify(c, 0.2)
        assert cls.near_uniform == (1,)
        assert cls.skewed == (0,)

    def test_profile_sums_to_one(self):
        rng = random.Random(0)
        for _ in range(20):
            c = random_separated_code(3, 8, 4, rng)
            for f in lab.frequency_profile(c):
                assert sum(f) == 1

    def test_ell_formula(self):
        # floor((nR - log2 n) / log2(k/(k-3))) with clamping at zero
        n, rate = 100, 0.3
        expected = math.floor((n * rate - math.log2(n)) / math.log2(4 / 1))
        assert expected == 11
        # two words over [4], length 4: nR = 2 < log2 n, so ell clamps to 0
        c = Code(k=4, n=4, words=((0, 0, 0, 0), (1, 1, 1, 1)))
        assert lab.classify(c, 0.25).ell == 0
        assert lab.classify(full_code(4), 0.25).ell == 1


class TestTau:
    def test_three_words(self):
        c = full_code(3)
        assert lab.tau(c, 0, [(0,)]) == pytest.approx(1.0)

    def test_colliding_fixed(self):
        c = Code(k=4, n=2, words=((0, 0), (1, 0), (2, 1), (3, 2)))
        assert lab.tau(c, 1, [c.words[0], c.words[1]]) == 0.0

    def test_fixed_must_be_in_code(self):
        c = full_code(3)
        with pytest.raises(ValueError):
            lab.tau(c, 0, [(5,)])

    def test_matches_graph_oracle(self):
        rng = random.Random(42)
        for _ in range(100):
            k = rng.choice([3, 4])
            c = random_separated_code(k, rng.randint(k + 1, 9), rng.randint(2, 5), rng)
            if c.size < k:
                continue
            fixed = rng.sample(c.words, k - 2)
            i = rng.randrange(c.n)
            t = lab.tau(c, i, fixed)
            oracle = lab.tau_graph_oracle(c, i, fixed)
            assert t >= oracle - 1e-12
            # equality whenever >= 2 residual symbol classes exist; with one
            # class the formula counts vertices the graph leaves isolated
            fsyms = {w[i] for w in fixed}
            residual = {w[i] for w in c.words
                        if w not in set(fixed) and w[i] not in fsyms}
            if len(residual) >= 2:
                assert t == pytest.approx(oracle, abs=1e-12)


class TestHansel:
    def test_three_point_equality(self):
        res = lab.hansel_check(full_code(3), [(0,)])
        assert res["lhs"] == res["rhs"] == 1.0
        assert res["satisfied"]

    def test_full_quaternary(self):
        c = full_code(4)
        res = lab.hansel_check(c, c.words[:2])
        assert res["lhs"] == pytest.approx(1.0)
        assert res["rhs"] == pytest.approx(1.0)
        assert res["satisfied"]

    def test_rejects_non_separated(self):
        c = Code(k=3, n=3, words=((0, 0, 1), (0, 1, 0), (1, 0, 0)))
        with pytest.raises(ValueError, match="not 3-separated"):
            lab.hansel_check(c, [c.words[0]])

    def test_wrong_fixed_count(self):
        with pytest.raises(ValueError):
            lab.hansel_check(full_code(3), [(0,), (1,)])

    def test_random_sweep(self):
        rng = random.Random(7)
        for _ in range(200):
            k = rng.choice([3, 4])
            c = random_separated_code(k, rng.randint(k + 1, 12), rng.randint(2, 6), rng)
            if c.size < k:
                continue
            fixed = rng.sample(c.words, k - 2)
            res = lab.hansel_check(c, fixed, skip_separation_check=True)
            assert res["satisfied"]


class TestCensus:
    def test_k4_singletons(self):
        census, richest = lab.subcode_census(full_code(4), [0])
        assert len(census) == 4
        assert all(v == 1 for v in census.values())
        assert sum(census.values()) == 4  # |C| * C(3,0)^1

    def test_k5_pairs(self):
        census, richest = lab.subcode_census(full_code(5), [0])
        assert len(census) == 10
        assert all(v == 2 for v in census.values())
        assert sum(census.values()) == 5 * 4  # |C| * C(4,1)^1

    @pytest.mark.parametrize("k,n,tsize", [(4, 2, 1), (4, 3, 2), (5, 2, 1),
                                           (5, 3, 2), (6, 2, 1), (6, 3, 3)])
    def test_census_identity(self, k, n, tsize):
        rng = random.Random(k * 100 + n)
        words = tuple(
            sorted({tuple(rng.randrange(k) for _ in range(n)) for _ in range(12)})
        )
        c = Code(k=k, n=n, words=words)
        T = list(range(tsize))
        census, _ = lab.subcode_census(c, T)
        assert sum(census.values()) == c.size * math.comb(k - 1, 3) ** tsize

    def test_richest_is_rich_enough(self):
        c = full_code(5, 2)
        census, richest = lab.subcode_census(c, [0])
        assert census[richest] >= c.size * ((5 - 3) / 5)

    def test_subcode_words_collide_on_T(self):
        c = full_code(5, 2)
        census, richest = lab.subcode_census(c, [0])
        members = [w for w in c.words if w[0] in richest[0]]
        assert len(members) == census[richest]
        # any k-2 members share a symbol collision at the census coordinate
        from itertools import combinations

        for group in combinations(members, 3):
            syms = [w[0] for w in group]
            assert len(set(syms)) < len(syms) or len(set(syms)) <= 2

    def test_budget(self):
        with pytest.raises(BudgetExceeded):
            lab.subcode_census(full_code(6), [0], budget=2)


class TestHypergraphHansel:
    def test_full_codes(self):
        res = lab.hypergraph_hansel_check(full_code(4), 4, 1, (full_code(4).words[0],))
        assert res["satisfied"]
        res5 = lab.hypergraph_hansel_check(full_code(5), 4, 1, (full_code(5).words[0],))
        assert res5["satisfied"]

    def test_colliding_tau(self):
        c = Code(k=5, n=2, words=((0, 0), (1, 0), (2, 1), (3, 2), (4, 3)))
        assert lab.hypergraph_tau(c, 1, 2, 5, [c.words[0], c.words[1]]) == 0.0

    def test_rejects_graph_case(self):
        with pytest.raises(ValueError, match="edge size"):
            lab.hypergraph_hansel_check(full_code(4), 4, 2, full_code(4).words[:2])

    def test_random_sweep(self):
        rng = random.Random(13)
        count = 0
        while count < 100:
            b = rng.choice([4, 5])
            c = random_separated_code(b, rng.randint(5, 10), rng.randint(2, 4), rng)
            if c.size < 5:
                continue
            ok, _ = lab.is_k_separated(c, k=4)
            if not ok:
                continue
            fixed = (rng.choice(c.words),)
            res = lab.hypergraph_hansel_check(c, 4, 1, fixed,
                                              skip_separation_check=True)
            assert res["satisfied"]
            count += 1


class TestSearch:
    def test_minimal(self):
        c = lab.random_code_search(3, 1, trials=0)
        assert c.words == ((0,), (1,), (2,))
        assert c.rate == pytest.approx(math.log2(3))

    def test_deterministic_and_separated(self):
        a = lab.random_code_search(4, 4, trials=500, seed=11)
        b = lab.random_code_search(4, 4, trials=500, seed=11)
        assert a == b
        ok, _ = lab.is_k_separated(a)
        assert ok

    def test_growth(self):
        c = lab.random_code_search(3, 6, trials=400, seed=5)
        assert c.size > 3  # should beat the trivial constant-word code
