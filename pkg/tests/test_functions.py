import math
from fractions import Fraction

import pytest

from betadyn import DimensionFn, TargetFn
from betadyn.errors import PreconditionUnverifiable
from betadyn.functions import corollary_g, corollary_psi1, corollary_psi_eps


def test_dimension_fn_parse_and_describe():
    f = DimensionFn.parse("power:0.5")
    assert f.s == Fraction(1, 2)
    g = DimensionFn.parse("powerlog:1,-2")
    assert g.s == 1 and g.b == -2
    with pytest.raises(ValueError):
        DimensionFn.parse("weird:1")
    assert DimensionFn.power(Fraction(1, 3)).describe() == "power:1/3"


def test_dimension_fn_validation():
    with pytest.raises(ValueError):
        DimensionFn.power(0)
    with pytest.raises(ValueError):
        DimensionFn.power(-1)
    with pytest.raises(ValueError):
        DimensionFn.power_log(0, 1)  # does not vanish at 0
    DimensionFn.power_log(0, -1)     # 1/log(1/r) does vanish


def test_ratio_direction():
    assert DimensionFn.power(Fraction(1, 2)).ratio_direction(1) == "infinity"
    assert DimensionFn.power(2).ratio_direction(1) == "zero"
    assert DimensionFn.power(1).ratio_direction(1) == "bounded"
    assert DimensionFn.power_log(1, 1).ratio_direction(1) == "infinity"
    assert DimensionFn.power_log(1, -1).ratio_direction(1) == "zero"
    assert DimensionFn.power(Fraction(3, 2)).ratio_direction(2) == "infinity"
    with pytest.raises(PreconditionUnverifiable):
        DimensionFn.tabulated([(Fraction(1, 2), Fraction(1, 4))]).ratio_direction(1)


def test_dimension_fn_values():
    f = DimensionFn.power(Fraction(1, 2))
    assert f.value_float(0.25) == pytest.approx(0.5)
    lo, hi = f.value_interval((Fraction(1, 4), Fraction(1, 4)), 96)
    assert lo <= Fraction(1, 2) <= hi
    lo, hi = f.value_interval((Fraction(0), Fraction(1, 4)), 96)
    assert lo == 0 and hi >= Fraction(1, 2)
    g = DimensionFn.power_log(1, 1)
    r = Fraction(1, 8)
    lo, hi = g.value_interval((r, r), 96)
    expect = float(r) * math.log(8)
    assert float(lo) == pytest.approx(expect, rel=1e-12)
    assert float(hi) == pytest.approx(expect, rel=1e-12)


def test_target_fn_parse_and_values(b2):
    psi = TargetFn.parse("exp:1")
    assert psi.tau == 1 and psi.exact(3, b2) == Fraction(1, 8)
    psi = TargetFn.parse("exp:0,poly:2")
    assert psi.exact(10, b2) == Fraction(1, 100)
    psi = TargetFn.parse("exp:0,poly:1,C:0.25")
    assert psi.exact(5, b2) == Fraction(1, 20)
    psi = TargetFn.parse("exp:1,log:2,C:3")
    assert psi.exact(5, b2) is None
    val = psi.value_float(5, b2)
    assert val == pytest.approx(3 * 2 ** -5 * (5 * math.log(2)) ** -2, rel=1e-10)
    with pytest.raises(ValueError):
        TargetFn.parse("poly:1")
    with pytest.raises(ValueError):
        TargetFn.parse("exp:1,what:2")


def test_target_fn_validation():
    with pytest.raises(ValueError):
        TargetFn.family(tau=-1)
    with pytest.raises(ValueError):
        TargetFn.family(tau=1, C=0)
    with pytest.raises(ValueError):
        TargetFn.tabulated([1, 0])


def test_tends_to_zero_flag():
    assert TargetFn.family(tau=1).tends_to_zero is True
    assert TargetFn.family(tau=0, a=2).tends_to_zero is True
    assert TargetFn.family(tau=0, c=1).tends_to_zero is True
    assert TargetFn.family(tau=0).tends_to_zero is False          # constant
    assert TargetFn.family(tau=0, a=-1).tends_to_zero is False    # grows
    assert TargetFn.tabulated([1, Fraction(1, 2)]).tends_to_zero is None


def test_target_interval_vs_float(bpi):
    psi = TargetFn.family(tau=Fraction(1, 2), a=1, c=Fraction(1, 3))
    for n in (1, 4, 9):
        lo, hi = psi.value_interval(n, bpi, 128)
        assert lo <= hi
        assert float(hi - lo) < 1e-25
        assert psi.value_float(n, bpi) == pytest.approx(float(lo), rel=1e-12)


def test_tabulated_target():
    psi = TargetFn.tabulated([Fraction(1, 2), Fraction(1, 4), Fraction(1, 8)])
    assert psi.exact(2, None) == Fraction(1, 4)
    assert psi.exact(9, None) is None
    assert not psi.is_parametric


def test_corollary_builders(b2):
    tau = Fraction(1)
    g = corollary_g(tau)
    assert g.s == Fraction(3, 2) and g.declared_dim == 2
    psi1 = corollary_psi1(tau)
    assert psi1.exact(4, b2) == Fraction(1, 16)
    pe = corollary_psi_eps(tau, Fraction(1, 2))
    assert pe.c == Fraction(3)  # (1 + 1/2) * (1 + 1)
    with pytest.raises(ValueError):
        corollary_psi_eps(1, 0)
