"""Exact rational intervals and refinable real enclosures.

Every certified computation in this package bottoms out here: values are
held as ``Fraction`` intervals ``(lo, hi)`` that are guaranteed to contain
the true real number.  Interval arithmetic is exact; when endpoints must be
kept small they are rounded outward to a dyadic grid, so containment is
never lost.  Transcendental endpoints (pi, exp, log, fractional powers)
come from MPFR via gmpy2 with directed rounding, which makes those
enclosures rigorous as well.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

import gmpy2

from .errors import PrecisionExhausted, UncertifiedFloor

Interval = tuple[Fraction, Fraction]

_ZERO = Fraction(0)
_ONE = Fraction(1)


@dataclass(frozen=True)
class PrecisionCfg:
    """Working precision, its ceiling, and the escalation factor between
    retries of a computation that failed to certify."""

    working: int = 128
    p_max: int = 1 << 14
    escalation: float = 2.0

    def __post_init__(self):
        if self.working < 8:
            raise ValueError("working precision below 8 bits")
        if self.working > self.p_max:
            raise ValueError("working precision exceeds p_max")
        if self.escalation <= 1.0:
            raise ValueError("escalation factor must exceed 1")

    def ladder(self, start: int | None = None):
        """Yield precisions from `start` (default `working`) up to `p_max`,
        multiplying by the escalation factor, always ending at `p_max`."""
        bits = self.working if start is None else max(start, 8)
        bits = min(bits, self.p_max)
        while True:
            yield bits
            if bits >= self.p_max:
                return
            bits = min(self.p_max, max(bits + 1, int(bits * self.escalation)))


DEFAULT_CFG = PrecisionCfg()


def interval(lo, hi) -> Interval:
    lo, hi = Fraction(lo), Fraction(hi)
    if lo > hi:
        raise ValueError(f"empty interval [{lo}, {hi}]")
    return (lo, hi)


def iv_point(v) -> Interval:
    v = Fraction(v)
    return (v, v)


def iv_width(a: Interval) -> Fraction:
    return a[1] - a[0]


def iv_contains(a: Interval, v) -> bool:
    return a[0] <= v <= a[1]


def iv_neg(a: Interval) -> Interval:
    return (-a[1], -a[0])


def iv_add(a: Interval, b: Interval) -> Interval:
    return (a[0] + b[0], a[1] + b[1])


def iv_sub(a: Interval, b: Interval) -> Interval:
    return (a[0] - b[1], a[1] - b[0])


def iv_scale(a: Interval, c) -> Interval:
    c = Fraction(c)
    if c >= 0:
        return (a[0] * c, a[1] * c)
    return (a[1] * c, a[0] * c)


def iv_mul(a: Interval, b: Interval) -> Interval:
    products = (a[0] * b[0], a[0] * b[1], a[1] * b[0], a[1] * b[1])
    return (min(products), max(products))


def iv_recip(a: Interval) -> Interval:
    if a[0] <= 0 <= a[1]:
        raise ZeroDivisionError("interval straddles zero")
    return (1 / a[1], 1 / a[0])


def iv_div(a: Interval, b: Interval) -> Interval:
    return iv_mul(a, iv_recip(b))


def iv_abs(a: Interval) -> Interval:
    if a[0] >= 0:
        return a
    if a[1] <= 0:
        return iv_neg(a)
    return (_ZERO, max(-a[0], a[1]))


def iv_pow_uint(a: Interval, k: int) -> Interval:
    """a**k for integer k >= 0, valid for any sign pattern."""
    if k < 0:
        raise ValueError("use iv_recip for negative powers")
    out = (_ONE, _ONE)
    base = a
    while k:
        if k & 1:
            out = iv_mul(out, base)
        base = iv_mul(base, base)
        k >>= 1
    return out


def iv_intersect(a: Interval, b: Interval) -> Interval:
    lo, hi = max(a[0], b[0]), min(a[1], b[1])
    if lo > hi:
        raise ValueError("refinement produced a disjoint enclosure")
    return (lo, hi)


def iv_to_float(a: Interval) -> float:
    return float((a[0] + a[1]) / 2)


def dyadic_floor(x: Fraction, bits: int) -> Fraction:
    return Fraction((x.numerator << bits) // x.denominator, 1 << bits)


def dyadic_ceil(x: Fraction, bits: int) -> Fraction:
    return Fraction(-((-x.numerator << bits) // x.denominator), 1 << bits)


def iv_round_out(a: Interval, bits: int) -> Interval:
    """Round endpoints outward onto the dyadic grid 2**-bits.  Containment
    is preserved; widths grow by at most 2**(1-bits)."""
    return (dyadic_floor(a[0], bits), dyadic_ceil(a[1], bits))


# ---------------------------------------------------------------------------
# MPFR-backed enclosures for transcendental endpoints.


def _mpfr_to_fraction(m) -> Fraction:
    q = gmpy2.mpq(m)
    return Fraction(int(q.numerator), int(q.denominator))


def _directed(fn: Callable, x: Fraction, bits: int, down: bool) -> Fraction:
    # mpq -> mpfr conversion rounds in the context direction too, and the
    # functions below are increasing, so the composite bound stays valid.
    mode = gmpy2.RoundDown if down else gmpy2.RoundUp
    with gmpy2.context(precision=bits + 8, round=mode):
        val = fn(gmpy2.mpq(x.numerator, x.denominator))
    return _mpfr_to_fraction(val)


def pi_interval(bits: int) -> Interval:
    with gmpy2.context(precision=bits + 8, round=gmpy2.RoundDown):
        lo = gmpy2.const_pi()
    with gmpy2.context(precision=bits + 8, round=gmpy2.RoundUp):
        hi = gmpy2.const_pi()
    return (_mpfr_to_fraction(lo), _mpfr_to_fraction(hi))


def log_interval(a: Interval, bits: int) -> Interval:
    """Enclosure of the natural log of a positive interval."""
    if a[0] <= 0:
        raise ValueError("log requires a strictly positive interval")
    return (_directed(gmpy2.log, a[0], bits, True),
            _directed(gmpy2.log, a[1], bits, False))


def exp_interval(a: Interval, bits: int) -> Interval:
    return (_directed(gmpy2.exp, a[0], bits, True),
            _directed(gmpy2.exp, a[1], bits, False))


def pow_interval(base: Interval, expo: Fraction, bits: int) -> Interval:
    """base**expo for a positive base interval and a rational exponent,
    via exp(expo * log(base)).  Integer exponents stay exact."""
    expo = Fraction(expo)
    if expo.denominator == 1:
        k = expo.numerator
        if k >= 0:
            return iv_pow_uint(base, k)
        return iv_recip(iv_pow_uint(base, -k))
    if base[0] <= 0:
        raise ValueError("fractional power of a non-positive interval")
    return exp_interval(iv_scale(log_interval(base, bits), expo), bits)


# ---------------------------------------------------------------------------
# Refinable enclosures.


class Enclosure:
    """A real number accessed only through shrinking rational enclosures.

    `refine(bits)` must return an interval of width about 2**-bits that
    contains the value.  Results are cached and intersected with previous
    answers, so the reported enclosure never grows; refinement is
    synchronized and monotone.
    """

    __slots__ = ("_refine", "_cached", "_cached_bits", "_lock", "name", "max_bits")

    def __init__(self, refine: Callable[[int], Interval], name: str = "",
                 max_bits: int | None = None):
        self._refine = refine
        self._cached: Interval | None = None
        self._cached_bits = -1
        self._lock = threading.Lock()
        self.name = name
        self.max_bits = max_bits

    def eval(self, bits: int) -> Interval:
        if self.max_bits is not None:
            bits = min(bits, self.max_bits)
        with self._lock:
            if self._cached is not None and self._cached_bits >= bits:
                return self._cached
            fresh = self._refine(bits)
            if self._cached is not None:
                fresh = iv_intersect(fresh, self._cached)
            self._cached = fresh
            self._cached_bits = bits
            return fresh

    def __float__(self) -> float:
        return iv_to_float(self.eval(64))

    def __repr__(self):
        label = self.name or "enclosure"
        return f"<{label} ~ {float(self):.12g}>"


def pi_enclosure() -> Enclosure:
    return Enclosure(pi_interval, name="pi")


# ---------------------------------------------------------------------------
# Certified decisions.


def certified_floor(value_at: Callable[[int], Interval], cfg: PrecisionCfg,
                    what: str = "value", index: int | None = None) -> int:
    """Floor of a real given by enclosures, escalating precision until the
    enclosure no longer straddles an integer.  An exact integer endpoint
    pair (lo == hi) is decided directly: the value is proven, so no margin
    is required."""
    for bits in cfg.ladder():
        lo, hi = value_at(bits)
        if lo == hi:
            return lo.numerator // lo.denominator
        flo = lo.numerator // lo.denominator
        fhi = hi.numerator // hi.denominator
        if flo == fhi and hi < flo + 1:
            # The enclosure sits strictly inside [flo, flo+1).
            return flo
    raise UncertifiedFloor(
        f"floor of {what} undecided at {cfg.p_max} bits", index=index)


def certified_sign(value_at: Callable[[int], Interval], cfg: PrecisionCfg,
                   what: str = "value") -> int:
    """Sign of a real given by enclosures; 0 only when proven exactly."""
    for bits in cfg.ladder():
        lo, hi = value_at(bits)
        if lo > 0:
            return 1
        if hi < 0:
            return -1
        if lo == hi == 0:
            return 0
    raise PrecisionExhausted(f"sign of {what} undecided at {cfg.p_max} bits")
