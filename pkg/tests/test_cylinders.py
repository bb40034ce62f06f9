import random
from fractions import Fraction

import pytest

from betadyn import (
    Beta,
    InadmissibleWord,
    PreconditionUnverifiable,
    blowup_inequality_check,
    compare_values,
    cylinder,
    digits,
    lex_successor,
    partition_check,
    target_interval,
)
from betadyn.admissibility import enumerate_admissible
from betadyn.cylinders import random_admissible_word
from betadyn.functions import DimensionFn


# -- single cylinders --------------------------------------------------------


def test_cylinder_examples(b2, phi):
    c = cylinder(b2, (1,))
    assert c.left == Fraction(1, 2) and c.length == Fraction(1, 2)
    assert c.is_last

    c = cylinder(phi, (1, 0))
    assert c.left == phi.element(-1, 1)        # 1/phi = phi - 1
    assert c.length == phi.element(2, -1)      # 1/phi**2 = 2 - phi
    assert c.is_last

    c = cylinder(phi, (0, 1))
    assert c.left == phi.element(2, -1)        # 1/phi**2
    assert c.length == phi.element(-3, 2)      # 1/phi**3 = 2 phi - 3
    assert not c.is_last


def test_cylinder_rejects_inadmissible(phi):
    with pytest.raises(InadmissibleWord):
        cylinder(phi, (1, 1))
    with pytest.raises(InadmissibleWord):
        lex_successor(phi, (1, 1))


def test_lex_successor(b2, phi):
    assert lex_successor(b2, (0, 1, 1)) == (1, 0, 0)
    assert lex_successor(b2, (1, 1, 1)) is None
    assert lex_successor(phi, (0, 1)) == (1, 0)
    assert lex_successor(phi, (1, 0)) is None
    assert lex_successor(phi, (0, 0, 1)) == (0, 1, 0)


def test_nesting(phi, b18):
    rng = random.Random(4)
    for beta in (phi, b18):
        for _ in range(25):
            w = random_admissible_word(beta, 6, rng)
            outer = cylinder(beta, w)
            for d in (0, 1):
                try:
                    inner = cylinder(beta, w + (d,))
                except InadmissibleWord:
                    continue
                assert compare_values(inner.left, outer.left) >= 0
                assert compare_values(inner.right(), outer.right()) <= 0


def test_membership(b2, phi, b18):
    rng = random.Random(5)
    for beta in (b2, phi, b18):
        for _ in range(170):
            x = Fraction(rng.getrandbits(40), 1 << 40)
            w = digits(x, beta, 8).digits
            assert cylinder(beta, w).contains(x), (beta.literal, x)


def test_length_bounds(b2, phi, b18):
    for beta in (b2, phi, b18):
        for n in (1, 3, 6):
            cap = beta.pow_value(-n)
            for w in enumerate_admissible(beta, n):
                cyl = cylinder(beta, w)
                assert compare_values(cyl.length, Fraction(0)) > 0
                assert compare_values(cyl.length, cap) <= 0
                assert compare_values(cyl.right(), Fraction(1)) <= 0


# -- the partition -----------------------------------------------------------


def test_partition_examples(b2, phi):
    rep = partition_check(b2, 3)
    assert rep.count == 8
    assert rep.total_defect == 0 and rep.max_gap == 0 and rep.max_overlap == 0
    lengths = {cylinder(b2, w).length for w in enumerate_admissible(b2, 3)}
    assert lengths == {Fraction(1, 8)}

    rep = partition_check(phi, 2)
    assert rep.count == 3
    assert rep.total_defect == 0
    lens = [cylinder(phi, w).length for w in enumerate_admissible(phi, 2)]
    assert lens[0] == phi.element(2, -1)   # 1/phi**2
    assert lens[1] == phi.element(-3, 2)   # 1/phi**3
    assert lens[2] == phi.element(2, -1)
    assert sum(lens, phi.element(0, 0)) == phi.element(1, 0)

    rep = partition_check(phi, 10)
    assert rep.count == 144
    assert rep.total_defect == 0


def test_partition_enclosure_base(bpi):
    rep = partition_check(bpi, 4)
    assert not rep.exact
    assert rep.count == 129
    assert rep.total_defect < 1e-20
    assert rep.max_gap < 1e-20 and rep.max_overlap < 1e-20


def test_partition_json_roundtrip(phi):
    from betadyn.cylinders import PartitionReport
    rep = partition_check(phi, 5)
    assert PartitionReport.from_json(rep.to_json()) == rep


# -- target intervals --------------------------------------------------------


def test_target_interval_examples(b2, phi):
    ti = target_interval(b2, (0,), Fraction(1, 2), Fraction(1, 10))
    assert ti.anchor == Fraction(1, 4)
    assert ti.right_end == Fraction(1, 2)
    assert ti.radius == Fraction(1, 20)  # min(1/4, 1/20)

    # y = 0 collapses the anchor to the left endpoint.
    ti = target_interval(b2, (1, 0), Fraction(0), Fraction(3, 10))
    cyl = cylinder(b2, (1, 0))
    assert ti.anchor == cyl.left
    assert ti.radius == min(cyl.length, Fraction(3, 10) / 4)

    # Short-cylinder emptiness: anchor beyond the right endpoint.
    ti = target_interval(phi, (0, 1), Fraction(7, 10), Fraction(1, 10))
    inv = phi.element(0, 1).inverse()
    assert ti.anchor == inv * inv * Fraction(17, 10)  # (1 + 0.7) / phi**2
    assert ti.anchor_float() == pytest.approx(0.64934, abs=1e-5)
    assert ti.anchor > cylinder(phi, (0, 1)).right()
    assert ti.radius == 0


def test_target_interval_validation(b2):
    with pytest.raises(ValueError):
        target_interval(b2, (0,), Fraction(3, 2), Fraction(1, 10))
    with pytest.raises(ValueError):
        target_interval(b2, (0,), Fraction(1, 2), Fraction(0))


def test_radius_bounds(b2, phi):
    rng = random.Random(6)
    for beta in (b2, phi):
        bound = beta.pow_value(-8)
        for _ in range(50):
            w = random_admissible_word(beta, 8, rng)
            y = Fraction(rng.getrandbits(32), 1 << 32)
            psi_n = Fraction(rng.getrandbits(16) + 1, 1 << 12)  # may exceed 1
            ti = target_interval(beta, w, y, psi_n)
            assert compare_values(ti.radius, Fraction(0)) >= 0
            assert compare_values(ti.radius, bound) <= 0


def test_blown_radius_positive_implies_radius_positive(b2, phi):
    f = DimensionFn.power(Fraction(1, 2))
    rng = random.Random(7)
    for beta in (b2, phi):
        for _ in range(40):
            w = random_admissible_word(beta, 10, rng)
            y = Fraction(rng.getrandbits(32), 1 << 32)
            ti = target_interval(beta, w, y, Fraction(1, 100), f=f)
            if compare_values(ti.f_radius, Fraction(0)) > 0:
                assert compare_values(ti.radius, Fraction(0)) > 0


# -- the blowup inequality ---------------------------------------------------


def test_blowup_check_clean(b2, phi):
    f = DimensionFn.power(Fraction(1, 2))
    for beta in (b2, phi):
        rep = blowup_inequality_check(beta, f, n_min=30, trials=120, seed=17)
        assert rep.ok
        assert rep.trials == 120
        assert rep.structural + rep.numeric == 120


def test_blowup_check_refuses_bounded_ratio(b2):
    with pytest.raises(PreconditionUnverifiable):
        blowup_inequality_check(b2, DimensionFn.power(1), 30, 10, seed=1)


def test_blowup_check_accepts_powerlog(b2):
    f = DimensionFn.power_log(1, Fraction(1, 2))
    rep = blowup_inequality_check(b2, f, n_min=20, trials=40, seed=23)
    assert rep.ok
