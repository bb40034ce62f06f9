import math
from fractions import Fraction

import pytest

from betadyn.certified import (
    DEFAULT_CFG,
    Enclosure,
    PrecisionCfg,
    certified_floor,
    certified_sign,
    dyadic_ceil,
    dyadic_floor,
    exp_interval,
    interval,
    iv_abs,
    iv_div,
    iv_mul,
    iv_point,
    iv_pow_uint,
    iv_recip,
    iv_round_out,
    iv_width,
    log_interval,
    pi_interval,
    pow_interval,
)
from betadyn.errors import PrecisionExhausted, UncertifiedFloor


def test_interval_basics():
    a = interval(Fraction(1, 3), Fraction(1, 2))
    b = interval(Fraction(-1), Fraction(2))
    assert iv_width(a) == Fraction(1, 6)
    lo, hi = iv_mul(a, b)
    assert lo == Fraction(-1, 2) and hi == 1
    assert iv_abs((Fraction(-3), Fraction(2))) == (0, 3)
    assert iv_recip((Fraction(2), Fraction(4))) == (Fraction(1, 4), Fraction(1, 2))
    with pytest.raises(ValueError):
        interval(1, 0)
    with pytest.raises(ZeroDivisionError):
        iv_recip((Fraction(-1), Fraction(1)))


def test_pow_uint_signs():
    assert iv_pow_uint((Fraction(-2), Fraction(3)), 2) == (-6, 9)
    assert iv_pow_uint((Fraction(2), Fraction(3)), 3) == (8, 27)
    assert iv_pow_uint((Fraction(5), Fraction(5)), 0) == (1, 1)


def test_dyadic_rounding_outward():
    x = Fraction(1, 3)
    lo = dyadic_floor(x, 10)
    hi = dyadic_ceil(x, 10)
    assert lo <= x <= hi
    assert hi - lo == Fraction(1, 1024)
    a = (Fraction(1, 3), Fraction(2, 3))
    out = iv_round_out(a, 20)
    assert out[0] <= a[0] and out[1] >= a[1]


def test_pi_interval_tightens():
    w8 = iv_width(pi_interval(8))
    w64 = iv_width(pi_interval(64))
    lo, hi = pi_interval(64)
    assert lo < Fraction(math.pi) < hi or abs(float(lo) - math.pi) < 1e-15
    assert w64 < w8
    assert float(lo) == pytest.approx(math.pi, abs=1e-15)


@pytest.mark.parametrize("x", [Fraction(1, 3), Fraction(2), Fraction(7, 2)])
def test_log_exp_enclosures(x):
    lg = log_interval(iv_point(x), 96)
    assert lg[0] <= Fraction(math.log(x)) + Fraction(1, 10**12)
    assert lg[1] >= Fraction(math.log(x)) - Fraction(1, 10**12)
    back = exp_interval(lg, 96)
    assert back[0] <= x <= back[1]


def test_pow_interval_fractional():
    out = pow_interval(iv_point(Fraction(2)), Fraction(1, 2), 96)
    assert out[0] <= Fraction(math.sqrt(2)) + Fraction(1, 10**10)
    assert out[1] >= Fraction(math.sqrt(2)) - Fraction(1, 10**10)
    assert iv_width(out) < Fraction(1, 10**20)
    # integer exponents stay exact
    assert pow_interval((Fraction(3), Fraction(3)), Fraction(-2), 32) == \
        (Fraction(1, 9), Fraction(1, 9))


def test_enclosure_monotone_and_cached():
    calls = []

    def refine(bits):
        calls.append(bits)
        return (Fraction(1, 2) - Fraction(1, 1 << bits),
                Fraction(1, 2) + Fraction(1, 1 << bits))

    enc = Enclosure(refine)
    first = enc.eval(16)
    again = enc.eval(8)  # served from cache, not recomputed wider
    assert again == first
    tight = enc.eval(64)
    assert tight[0] >= first[0] and tight[1] <= first[1]
    assert calls == [16, 64]


def test_enclosure_rejects_drift():
    state = {"n": 0}

    def refine(bits):
        state["n"] += 1
        if state["n"] == 1:
            return (Fraction(0), Fraction(1))
        return (Fraction(2), Fraction(3))  # disjoint from the first answer

    enc = Enclosure(refine)
    enc.eval(8)
    with pytest.raises(ValueError):
        enc.eval(16)


def test_precision_cfg_validation_and_ladder():
    with pytest.raises(ValueError):
        PrecisionCfg(working=4)
    with pytest.raises(ValueError):
        PrecisionCfg(working=256, p_max=128)
    with pytest.raises(ValueError):
        PrecisionCfg(escalation=1.0)
    cfg = PrecisionCfg(working=64, p_max=300, escalation=2.0)
    steps = list(cfg.ladder())
    assert steps[0] == 64 and steps[-1] == 300
    assert all(b2 > b1 for b1, b2 in zip(steps, steps[1:]))


def test_certified_floor_escalates():
    # Value 2 - 2**-40 needs more than 16 bits to separate from 2.
    target = Fraction(2) - Fraction(1, 1 << 40)

    def value_at(bits):
        eps = Fraction(1, 1 << bits)
        return (target - eps, target + eps)

    cfg = PrecisionCfg(working=16, p_max=256)
    assert certified_floor(value_at, cfg) == 1
    # Exact integer endpoints are decided directly.
    assert certified_floor(lambda bits: (Fraction(2), Fraction(2)), cfg) == 2


def test_certified_floor_gives_up():
    # An enclosure pinned astride 2 never certifies.
    def value_at(bits):
        eps = Fraction(1, 1 << min(bits, 20))
        return (2 - eps, 2 + eps)

    cfg = PrecisionCfg(working=16, p_max=128)
    with pytest.raises(UncertifiedFloor):
        certified_floor(value_at, cfg)


fractions_st = None
try:
    from hypothesis import given
    from hypothesis import strategies as st
    fractions_st = st.fractions(min_value=-4, max_value=4)
except ImportError:  # pragma: no cover
    pass


if fractions_st is not None:

    @given(fractions_st, fractions_st, fractions_st, fractions_st)
    def test_mul_containment(a, b, c, d):
        x = interval(min(a, b), max(a, b))
        y = interval(min(c, d), max(c, d))
        prod = iv_mul(x, y)
        for p in (x[0] * y[0], x[0] * y[1], x[1] * y[0], x[1] * y[1],
                  ((x[0] + x[1]) / 2) * ((y[0] + y[1]) / 2)):
            assert prod[0] <= p <= prod[1]

    @given(fractions_st, st.integers(min_value=4, max_value=40))
    def test_round_out_containment(v, bits):
        out = iv_round_out(iv_point(v), bits)
        assert out[0] <= v <= out[1]
        assert iv_width(out) <= Fraction(2, 1 << bits)


def test_certified_sign():
    cfg = PrecisionCfg(working=16, p_max=128)
    assert certified_sign(lambda b: (Fraction(1, 1 << 30) - Fraction(1, 1 << b),
                                     Fraction(1, 1 << 30) + Fraction(1, 1 << b)),
                          cfg) == 1
    assert certified_sign(lambda b: (Fraction(0), Fraction(0)), cfg) == 0
    with pytest.raises(PrecisionExhausted):
        certified_sign(lambda b: (-Fraction(1, 1 << min(b, 8)),
                                  Fraction(1, 1 << min(b, 8))), cfg)
