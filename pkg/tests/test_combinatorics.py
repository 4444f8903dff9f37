"""Name vectors, Hamming balls, and the exponential counting bound."""

import math
from fractions import Fraction

import pytest

from amenable_entropy import (
    FolnerSequence,
    NameVector,
    Pattern,
    full_shift,
    golden_mean_shift,
    hamming_ball_count,
    hamming_distance,
    name_of,
    normalized_hamming,
    stirling_K,
    verify_Ln_bound,
    zd,
)
from amenable_entropy.combinatorics import enumeration_order


def test_name_of_full_shift_depth_zero():
    # depth-0 names just read the symbols along the enumeration order
    space = full_shift(zd(1), 2)
    x = Pattern({(i,): (1 if i in (0, 2) else 0) for i in range(-3, 4)})
    f = [(0,), (1,), (2,)]
    order = enumeration_order(zd(1), f)
    name = name_of(space, x, f)
    assert len(name) == 3
    assert tuple(name.entries) == tuple(x[g] for g in order)


def test_name_of_golden_mean_indexes_admissible_cells():
    space = golden_mean_shift(zd(1))
    x = Pattern({(i,): (i % 2) for i in range(-2, 6)})  # ...010101...
    f = [(0,), (1,)]
    # depth 1 partitions by pairs on E_2 = {0, -1}; "11" leaves 3 cells,
    # lex-ordered 00, 01, 10 (first coordinate is the -1 cell)
    name = name_of(space, x, f, r=1)
    assert name.num_cells == 3
    assert tuple(name.entries) == (2, 1)


def test_hamming_distances():
    a = NameVector((0, 1, 1, 0), 2)
    b = NameVector((0, 0, 1, 1), 2)
    assert hamming_distance(a, b) == 2
    assert normalized_hamming(a, b) == Fraction(1, 2)
    with pytest.raises(ValueError):
        hamming_distance(a, NameVector((0,), 2))


def test_hamming_ball_count_exact():
    # n = 10, eps1 = 1/4: j <= 2, so 1 + 10 + 45 = 56 binary words
    assert hamming_ball_count(10, 0.25, 2) == 56
    # three cells: 1 + 10*2 + 45*4 = 201
    assert hamming_ball_count(10, 0.25, 3) == 201
    # radius below one symbol: only the center
    assert hamming_ball_count(20, 0.01, 4) == 1
    with pytest.raises(ValueError):
        hamming_ball_count(10, 0.5, 2)
    with pytest.raises(ValueError):
        hamming_ball_count(10, 0.1, 1)


def test_stirling_constant_value():
    # frozen: (1/eps)(eps1 - eps1 log eps1 - (1-eps1) log(1-eps1)) + 2
    assert abs(stirling_K(0.1, 0.01, 2) - 2.660015) < 1e-6
    # more cells can only enlarge the ball, hence the constant
    ks = [stirling_K(0.1, 0.01, c) for c in (2, 3, 4, 5)]
    assert all(b > a for a, b in zip(ks, ks[1:]))
    # shrinking eps inflates the 1/eps factor
    assert stirling_K(0.05, 0.01, 2) > stirling_K(0.1, 0.01, 2)


def test_ln_bound_holds_on_grid():
    for eps in (0.1, 0.05):
        for eps1 in (0.01, 0.02):
            for cells in (2, 3, 4, 5):
                ok, first = verify_Ln_bound(500, eps, eps1, cells)
                assert ok, (eps, eps1, cells, first)
                assert first is None


def test_ln_bound_sharpness_with_halved_constant():
    # with (K-2)/2 the bound first fails as soon as the ball leaves its
    # center: floor(eps1 n) reaches 1 at n = 100 (eps1 = 0.01) or 50 (0.02)
    for eps in (0.1, 0.05):
        k2 = (stirling_K(eps, 0.01, 2) - 2.0) / 2.0
        ok, first = verify_Ln_bound(500, eps, 0.01, 2, k_value=k2)
        assert not ok and first == 100
        k5 = (stirling_K(eps, 0.02, 5) - 2.0) / 2.0
        ok, first = verify_Ln_bound(500, eps, 0.02, 5, k_value=k5)
        assert not ok and first == 50


def test_ln_bound_monotone_tail():
    # once n is large the bound holds with growing slack; spot check n = 500
    l500 = hamming_ball_count(500, 0.01, 2)
    assert math.log(l500) <= stirling_K(0.1, 0.01, 2) * 0.1 * 500
