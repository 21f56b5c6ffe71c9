import random
from fractions import Fraction

import pytest

from easyq import partitions as P
from easyq.errors import SizeLimitExceeded
from easyq.moments import (
    bullet_weight,
    character_count,
    cumulants_from_moments,
    dilate,
    finite_group_moment,
    free_convolve,
    free_poisson,
    free_product_weight,
    moments_from_cumulants,
    narayana,
    ncjoin_count,
)

from oracles import bell, catalan, moments_by_nc_sum, nc_partitions


def test_moments_examples():
    assert moments_from_cumulants([1] * 5, 5) == [1, 2, 5, 14, 42]
    assert moments_from_cumulants([1, 0, 0, 0, 0], 5) == [1] * 5
    assert moments_from_cumulants([1, 2, 4], 3)[1] == 3


def test_moments_match_explicit_nc_sum():
    rng = random.Random(1)
    for _ in range(5):
        kappa = [Fraction(rng.randint(-5, 5), rng.randint(1, 4)) for _ in range(7)]
        assert moments_from_cumulants(kappa, 7) == moments_by_nc_sum(kappa, 7)


def test_round_trip_on_random_rational_series():
    rng = random.Random(0)
    for _ in range(20):
        m = [Fraction(rng.randint(-9, 9), rng.randint(1, 9)) for _ in range(10)]
        assert moments_from_cumulants(cumulants_from_moments(m, 10), 10) == m


def test_cumulant_examples():
    cat = [catalan(k) for k in range(1, 9)]
    assert cumulants_from_moments(cat, 8) == [1] * 8
    assert cumulants_from_moments(free_poisson(Fraction(2, 3), 8), 8) == [Fraction(2, 3)] * 8


def test_free_poisson_values():
    assert free_poisson(Fraction(1, 2), 3) == [Fraction(1, 2), Fraction(3, 4), Fraction(11, 8)]
    assert free_poisson(1, 6) == [catalan(k) for k in range(1, 7)]


def test_narayana_counts_blocks():
    for k in range(1, 8):
        by_blocks = [0] * (k + 1)
        for bl in nc_partitions(k):
            by_blocks[len(bl)] += 1
        assert by_blocks[1:] == [narayana(k, j) for j in range(1, k + 1)]


def test_free_poisson_semigroup():
    half = free_poisson(Fraction(1, 2), 8)
    assert free_convolve(half, half, 8) == free_poisson(1, 8)


def test_dilation_scales_cumulants():
    m = free_poisson(Fraction(1, 3), 10)
    k = cumulants_from_moments(dilate(m, 2), 10)
    k1 = cumulants_from_moments(m, 10)
    assert k == [2**j * x for j, x in enumerate(k1, start=1)]


def test_doubling_against_self_convolution():
    rng = random.Random(3)
    m = [Fraction(rng.randint(-4, 4), rng.randint(1, 3)) for _ in range(10)]
    lhs = cumulants_from_moments(dilate(m, 2), 10)
    rhs = cumulants_from_moments(free_convolve(m, m, 10), 10)
    assert lhs == [2 ** (j - 1) * x for j, x in enumerate(rhs, start=1)]


def test_series_guards():
    with pytest.raises(SizeLimitExceeded):
        moments_from_cumulants([1] * 15, 15)
    with pytest.raises(ValueError):
        moments_from_cumulants([1, 2], 3)


def test_character_counts():
    assert [character_count("nc", k) for k in range(1, 5)] == [1, 2, 5, 14]
    assert character_count("nc", 3, bullet_weight) == 11 == P.count("nc-bullet", 3)
    assert character_count("nc", 2, free_product_weight) == 7
    assert character_count("nc", 2, lambda s: 2) == 6
    with pytest.raises(SizeLimitExceeded):
        character_count("nc", 11)


@pytest.mark.parametrize("k", range(1, 5))
def test_finite_group_moments(k):
    assert finite_group_moment("Sq", 4, k) == bell(k)
    assert finite_group_moment("Hq", 4, k) == P.count("p-even", k)


def test_finite_group_examples_and_guard():
    assert finite_group_moment("Sq", 4, 3) == 5
    assert finite_group_moment("Hq", 3, 2) == 1
    assert finite_group_moment("Hq", 3, 3) == 0
    with pytest.raises(SizeLimitExceeded):
        finite_group_moment("Sq", 7, 2)
    with pytest.raises(ValueError):
        finite_group_moment("Oq", 2, 2)


def test_ncjoin():
    assert [ncjoin_count(0, k) for k in range(1, 7)] == [catalan(k) for k in range(1, 7)]
    assert ncjoin_count(1, 1) == P.count("nc", 1, 1)
    with pytest.raises(SizeLimitExceeded):
        ncjoin_count(4, 4)
