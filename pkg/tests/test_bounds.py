import math
import random

import pytest
from hypothesis import given, strategies as st

from osa_bandits.bounds import (PLAY_CONST, BoundDomainError, GapTable, bound_dlf,
                                bound_dlf_large_n, bound_dlf_naive, bound_dlp, bound_slk_regret,
                                bound_t1_plays, dlf_large_n_threshold, in_large_n_regime)

from conftest import SCENARIOS

C = 1 + 2 * math.pi ** 2 / 3


# -- independent oracles over plain lists ------------------------------------

def ranked(theta):
    return sorted(theta, reverse=True)


def oracle_dlp(theta, M, n):
    s = ranked(theta)
    total = 0.0
    for m in range(M):
        for x in s:
            if x != s[m]:
                total += (8 * math.log(n) / (s[m] - x) ** 2 + C) * s[m]
        for h in range(M):
            if h != m:
                total += (8 * math.log(n) / (s[h] - s[m]) ** 2 + C) * s[m]
    return total


def oracle_dmin_i(theta, M, x):
    return min((abs(y - x) for y in ranked(theta)[:M] if y != x), default=math.inf)


def oracle_dlf(theta, M, n):
    term = lambda x: 8 * math.log(n) / oracle_dmin_i(theta, M, x) ** 2 + C
    top = ranked(theta)[:M]
    return M * sum(term(x) for x in theta) * max(theta) + M * (M - 1) * sum(term(x) * x for x in top)


def oracle_dlf_large(theta, M, n):
    top = ranked(theta)[:M]
    rest = [x for x in theta if x not in top]
    tmax = max(theta)
    return (M * sum(8 * math.log(n) / oracle_dmin_i(theta, M, x) ** 2 + C for x in rest) * tmax
            + M * M * C * tmax + M * (M - 1) * C * sum(top))


def distinct_means(min_size=2, max_size=8):
    return st.lists(st.integers(1, 99), min_size=min_size, max_size=max_size, unique=True).map(
        lambda xs: tuple(x / 100 for x in xs))


# -- examples ----------------------------------------------------------------

def test_play_constant():
    assert PLAY_CONST == pytest.approx(7.579736267, abs=1e-9)


def test_gap_table():
    g = GapTable.from_means((0.7, 0.9, 0.6, 0.8))
    assert list(g.theta_sorted) == [0.9, 0.8, 0.7, 0.6]
    assert g.rank_arm(1) == 1 and g.rank_arm(2) == 3
    assert g.top_set(2) == [1, 3]
    assert g.gap(2, 0) == pytest.approx(0.1)
    assert g.gap(2, 2) == pytest.approx(0.2)
    assert g.optimal_set(2) == {3}
    assert g.delta_min(2) == pytest.approx(0.1)
    assert g.delta_min_arm(2, 2) == pytest.approx(0.2)
    assert g.delta_min_arm(1, 2) == pytest.approx(0.1)  # excludes the arm's own rank


def test_t1_plays_examples():
    g = GapTable.from_means((1.0, 0.0))
    assert bound_t1_plays(g, 1, 1, 1) == pytest.approx(C, abs=1e-12)
    v = bound_t1_plays((0.9, 0.8, 0.7, 0.6), 2, 0, 1e6)
    assert v == pytest.approx(8 * math.log(1e6) / 0.1 ** 2 + C, rel=1e-12)
    assert v == pytest.approx(11059.8, rel=2e-5)


def test_t1_plays_rejects_target_arm():
    with pytest.raises(BoundDomainError):
        bound_t1_plays((0.9, 0.8, 0.7), 2, 1, 100)


@given(st.floats(0.01, 0.5), st.floats(0.01, 0.5), st.integers(1, 10 ** 9))
def test_t1_plays_decreasing_in_gap(d1, d2, n):
    lo, hi = sorted((d1, d2))
    a = bound_t1_plays((0.5 + lo, 0.5), 1, 1, n)
    b = bound_t1_plays((0.5 + hi, 0.5), 1, 1, n)
    assert b <= a + 1e-9


def test_slk_regret_examples():
    assert bound_slk_regret((0.5,), 1, 1000) == 0.0
    assert bound_slk_regret((0.9, 0.8), 1, math.e) == pytest.approx(8 / 0.1 + C * 0.1, rel=1e-9)
    assert bound_slk_regret((0.9, 0.8), 1, math.e) == pytest.approx(80.758, abs=1e-3)


@given(distinct_means(), st.integers(2, 10 ** 8), st.data())
def test_slk_regret_log_linear(theta, n, data):
    k = data.draw(st.integers(1, len(theta)))
    g = GapTable.from_means(theta)
    slope = sum(8 / g.gap(k, i) for i in range(len(theta)) if i not in g.optimal_set(k))
    assert bound_slk_regret(g, k, n) - bound_slk_regret(g, k, 1) == pytest.approx(
        slope * math.log(n), rel=1e-9)


def test_dlp_single_user_has_no_interuser_term():
    theta = (0.9, 0.6, 0.3)
    expected = sum((8 * math.log(500) / d ** 2 + C) * 0.9 for d in (0.3, 0.6))
    assert bound_dlp(theta, 1, 500).tight == pytest.approx(expected, rel=1e-9)


def test_dlp_fig2a_tight_and_loose():
    pair = bound_dlp((0.9, 0.8, 0.7, 0.6), 2, 1e6)
    assert pair.tight == pytest.approx(oracle_dlp((0.9, 0.8, 0.7, 0.6), 2, 1e6), rel=1e-9)
    loose = 2 * 4 * (8 * math.log(1e6) / 0.01 + C) * 0.9
    assert pair.loose == pytest.approx(loose, rel=1e-9)
    assert pair.loose == pytest.approx(79_620, rel=1e-3)
    assert pair.tight <= pair.loose


def test_dlf_naive_examples():
    theta = (0.9, 0.8, 0.7, 0.6, 0.5)
    assert bound_dlf_naive(theta, 1, 777).tight == pytest.approx(bound_dlp(theta, 1, 777).tight)
    assert bound_dlf_naive(theta, 3, 1e6).tight == pytest.approx(
        3 * oracle_dlp(theta, 3, math.ceil(1e6 / 3)), rel=1e-9)


def test_dlf_examples():
    theta = (0.9, 0.8, 0.7, 0.6, 0.5)
    assert bound_dlf(theta, 3, 1e6).tight == pytest.approx(oracle_dlf(theta, 3, 1e6), rel=1e-9)
    single = (0.9, 0.5, 0.2)
    first = sum(8 * math.log(99) / oracle_dmin_i(single, 1, x) ** 2 + C for x in single) * 0.9
    assert bound_dlf(single, 1, 99).tight == pytest.approx(first, rel=1e-9)


@given(distinct_means(), st.sampled_from([10, 1e3, 1e5, 1e7]), st.data())
def test_tight_below_loose(theta, n, data):
    M = data.draw(st.integers(1, len(theta)))
    for fn in (bound_dlp, bound_dlf_naive, bound_dlf):
        pair = fn(theta, M, n)
        assert pair.tight <= pair.loose * (1 + 1e-12)
    if in_large_n_regime(theta, M, n):
        pair = bound_dlf_large_n(theta, M, n)
        assert pair.tight <= pair.loose * (1 + 1e-12)


@given(distinct_means(), st.data())
def test_bounds_nondecreasing_in_n(theta, data):
    M = data.draw(st.integers(1, len(theta)))
    ns = sorted(data.draw(st.lists(st.integers(2, 10 ** 9), min_size=2, max_size=5)))
    for fn in (bound_dlp, bound_dlf_naive, bound_dlf):
        vals = [fn(theta, M, n).tight for n in ns]
        assert all(b >= a - 1e-9 for a, b in zip(vals, vals[1:]))
        assert all(math.isfinite(v) for v in vals)


def test_duplicate_means_rejected():
    for fn in (bound_dlp, bound_dlf_naive, bound_dlf):
        with pytest.raises(BoundDomainError):
            fn((0.5, 0.5, 0.2), 2, 100)


def test_threshold_example():
    g = GapTable.from_means((0.9, 0.8, 0.7, 0.6, 0.5))
    assert dlf_large_n_threshold(g, 3) == pytest.approx(8 * 8 / 0.01 + C * 5 + 3, rel=1e-9)
    assert dlf_large_n_threshold(g, 3) == pytest.approx(6440.9, abs=0.05)
    assert not in_large_n_regime(g, 3, 2)


def test_threshold_predicate_monotone():
    g = GapTable.from_means((0.9, 0.8, 0.7, 0.6, 0.5))
    flags = [in_large_n_regime(g, 3, n) for n in range(3, 200_000, 97)]
    first = flags.index(True)
    assert all(flags[first:])


def test_large_n_bound_requires_regime():
    with pytest.raises(BoundDomainError):
        bound_dlf_large_n((0.9, 0.8, 0.7, 0.6, 0.5), 3, 1000)


def test_large_n_examples():
    theta = (0.9, 0.8, 0.7, 0.6, 0.5, 0.4, 0.3)
    v = bound_dlf_large_n(theta, 4, 1e6).tight
    assert v == pytest.approx(oracle_dlf_large(theta, 4, 1e6), rel=1e-9)
    assert v < bound_dlf(theta, 4, 1e6).tight
    # M = N: the logarithmic sum is empty
    full = (0.9, 0.7, 0.4)
    assert bound_dlf_large_n(full, 3, 1e6).tight == pytest.approx(
        9 * C * 0.9 + 6 * C * sum(full), rel=1e-12)
    assert bound_dlf_large_n(full, 3, 1e6).tight == bound_dlf_large_n(full, 3, 1e9).tight


def test_large_n_log_linear():
    theta = (0.9, 0.8, 0.7, 0.6, 0.5, 0.4, 0.3)
    M = 4
    slope = M * sum(8 / oracle_dmin_i(theta, M, x) ** 2 for x in (0.5, 0.4, 0.3)) * 0.9
    diff = bound_dlf_large_n(theta, M, 1e6).tight - bound_dlf_large_n(theta, M, 1e3 * 1e3).tight
    assert diff == 0.0
    assert bound_dlf_large_n(theta, M, 1e9).tight - bound_dlf_large_n(theta, M, 1e6).tight == \
        pytest.approx(slope * (math.log(1e9) - math.log(1e6)), rel=1e-9)


@pytest.mark.parametrize("name", sorted(SCENARIOS))
def test_large_n_below_dlf_on_scenarios(name):
    theta, M = SCENARIOS[name]
    for n in (1e6, 1e8, 1e12):
        assert in_large_n_regime(theta, M, n)
        assert bound_dlf_large_n(theta, M, n).tight < bound_dlf(theta, M, n).tight


def test_loose_growth_orders():
    # ln n coefficients: M^2 (N + M - 2) for DLF-Naive, M (N + M (M - 1)) for DLF,
    # M (N - M) for DLF in the large-n regime
    theta = tuple(round(1 - 0.04 * i, 2) for i in range(20))

    def slope(fn, M):
        return (fn(theta, M, 1e12).loose - fn(theta, M, 1e9).loose) / (math.log(1e12) - math.log(1e9))

    ratios = [slope(bound_dlf_naive, M) / slope(bound_dlf, M) for M in (2, 6, 12)]
    assert all(r > 1 for r in ratios)
    assert slope(bound_dlf_large_n, 6) < slope(bound_dlf, 6)


def test_corollary1_identity_random_grid():
    rng = random.Random(0)
    for _ in range(1000):
        n_arms = rng.randint(1, 9)
        theta = tuple(rng.sample(range(1, 100), n_arms))
        theta = tuple(x / 100 for x in theta)
        k = rng.randint(1, n_arms)
        n = 10 ** rng.uniform(0, 9)
        g = GapTable.from_means(theta)
        weighted = sum(g.gap(k, i) * bound_t1_plays(g, k, i, n)
                       for i in range(n_arms) if i not in g.optimal_set(k))
        assert bound_slk_regret(g, k, n) == pytest.approx(weighted, rel=1e-9, abs=1e-12)
