"""Group arithmetic, enumeration prefixes, and Folner diagnostics."""

from fractions import Fraction

import pytest

from amenable_entropy import (
    FolnerSequence,
    enumerate_prefix,
    folner_defect,
    growth_ratios,
    heisenberg,
    inverse_set,
    product_set,
    shulman_constant,
    shulman_profile,
    zd,
)


def test_zd_arithmetic():
    g = zd(2)
    assert g.identity() == (0, 0)
    assert g.mul((1, 2), (3, -1)) == (4, 1)
    assert g.inv((3, -5)) == (-3, 5)
    assert g.mul((3, -5), g.inv((3, -5))) == g.identity()


def test_heisenberg_law():
    h = heisenberg()
    # (a,b,c)(a',b',c') = (a+a', b+b', c+c'+a b')
    x, y = (1, 0, 0), (0, 1, 0)
    assert h.mul(x, y) == (1, 1, 1)
    assert h.mul(y, x) == (1, 1, 0)  # noncommutative
    for g in ((2, 3, 5), (-1, 4, 0), (0, 0, 7)):
        assert h.mul(g, h.inv(g)) == h.identity()
        assert h.mul(h.inv(g), g) == h.identity()
    # associativity spot check
    a, b, c = (1, 2, 0), (3, 0, 1), (0, 1, 4)
    assert h.mul(h.mul(a, b), c) == h.mul(a, h.mul(b, c))


def test_heisenberg_generators_generate_z_direction():
    h = heisenberg()
    x, y = (1, 0, 0), (0, 1, 0)
    comm = h.mul(h.mul(x, y), h.mul(h.inv(x), h.inv(y)))
    assert comm == (0, 0, 1)


def test_enumeration_prefix_z():
    # word-length layers with lexicographic tie-break
    e = enumerate_prefix(zd(1), 5)
    assert e.order == ((0,), (-1,), (1,), (-2,), (2,))


def test_enumeration_prefix_properties():
    for group in (zd(1), zd(2), heisenberg()):
        e = enumerate_prefix(group, 12)
        assert e.order[0] == group.identity()
        assert len(set(e.order)) == 12
        # prefixes of a longer enumeration agree with shorter ones
        e2 = enumerate_prefix(group, 6)
        assert e.order[:6] == e2.order


def test_box_folner_sets():
    assert FolnerSequence(zd(1), "box").subset(3) == frozenset({(0,), (1,), (2,)})
    assert len(FolnerSequence(zd(2), "box").subset(3)) == 9
    hseq = FolnerSequence(heisenberg(), "box")
    for n in (2, 3, 4):
        assert hseq.size(n) == n**4
    assert (1, 1, 3) in hseq.subset(2)  # c ranges over [0, n^2)


def test_explicit_folner_rule():
    sets = (frozenset({(0,)}), frozenset({(0,), (1,)}), frozenset({(0,), (1,), (2,)}))
    seq = FolnerSequence(zd(1), "explicit", sets)
    assert seq.subset(2) == sets[1]
    assert seq.max_index() == 3
    with pytest.raises(ValueError):
        seq.subset(4)


def test_product_and_inverse_sets():
    g = zd(1)
    a, b = [(0,), (1,)], [(0,), (2,)]
    assert product_set(g, a, b) == frozenset({(0,), (1,), (2,), (3,)})
    assert inverse_set(g, a) == frozenset({(0,), (-1,)})


def test_folner_defect_z_closed_form():
    # |F_n triangle-diff gF_n| / |F_n| = 2/n for the unit shift on boxes
    g = zd(1)
    seq = FolnerSequence(g, "box")
    for n in (2, 5, 40):
        assert folner_defect(g, seq.subset(n), (1,)) == Fraction(2, n)
        assert folner_defect(g, seq.subset(n), (-1,)) == Fraction(2, n)


def test_folner_defect_z2_closed_form():
    g = zd(2)
    seq = FolnerSequence(g, "box")
    for n in (2, 7):
        assert folner_defect(g, seq.subset(n), (1, 0)) == Fraction(2, n)


def test_shulman_profile_z_closed_form():
    # union of F_k^{-1} F_n over k < n is [-(n-2), n), so the ratio is (2n-2)/n
    seq = FolnerSequence(zd(1), "box")
    prof = dict(shulman_profile(seq, 10))
    for n in range(2, 11):
        assert prof[n] == Fraction(2 * n - 2, n)
    assert shulman_constant(seq, 200) == Fraction(398, 200)


def test_shulman_profile_z2_closed_form():
    seq = FolnerSequence(zd(2), "box")
    prof = dict(shulman_profile(seq, 8))
    for n in range(2, 9):
        assert prof[n] == Fraction(2 * n - 2, n) ** 2


def test_growth_ratios():
    seq = FolnerSequence(zd(1), "box")
    rep = growth_ratios(seq, range(3, 21))
    assert rep.sizes_increasing
    ratios = [r for _, _, r in rep.rows]
    assert all(b > a for a, b in zip(ratios, ratios[1:]))
    # n / log n dips below its n=2 value at n=3, so 2 is excluded above
    rep2 = growth_ratios(seq, range(2, 5))
    r2 = [r for _, _, r in rep2.rows]
    assert r2[1] < r2[0]
