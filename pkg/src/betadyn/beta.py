"""The expansion base and its certified arithmetic.

A base ``beta > 1`` is represented exactly when possible (an integer, a
rational, or a quadratic irrational given by its minimal polynomial and a
root-selecting interval) and otherwise as a shrinkable rational enclosure.
On top of that sit the beta-transformation ``x -> beta*x mod 1``, greedy
digit extraction, reconstruction, and the digit sequence attached to the
expansion of 1 that governs admissibility.

Digit extraction multiplies error by beta at every step, so the exact
backends do all their arithmetic in Q or in Q(beta); the enclosure backend
reruns the whole orbit at escalating precision and only ever emits a digit
whose floor is certified.
"""

from __future__ import annotations

import math
import re
import threading
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Union

from .certified import (
    DEFAULT_CFG,
    Enclosure,
    Interval,
    PrecisionCfg,
    interval,
    iv_add,
    iv_div,
    iv_mul,
    iv_point,
    iv_pow_uint,
    iv_recip,
    iv_round_out,
    iv_scale,
    iv_to_float,
    iv_width,
    pi_interval,
)
from .errors import PrecisionExhausted, UncertifiedFloor, UndecidedFiniteness

__all__ = [
    "Beta",
    "QuadElem",
    "DigitSeq",
    "OneExpansion",
    "beta_transform",
    "digits",
    "reconstruct",
    "expansion_of_one",
    "word_value",
    "compare_values",
    "value_interval",
]


def _floor_fraction(x: Fraction) -> int:
    return x.numerator // x.denominator


def _sign(x) -> int:
    return (x > 0) - (x < 0)


class QuadField:
    """Q(beta) for beta the unique root of an integer quadratic inside a
    selecting interval.  Elements are pairs (a, b) meaning a + b*beta; the
    relation beta**2 = P*beta + Q closes the field under multiplication.

    The field keeps a rational enclosure of beta that only ever shrinks
    (bisection with exact sign evaluations), which makes signs and floors
    of field elements decidable: a nonzero element is irrational unless its
    beta-coefficient vanishes, so bisection always separates it from any
    rational threshold.
    """

    __slots__ = ("A", "B", "C", "P", "Q", "_lo", "_hi", "_sign_lo", "_lock")

    def __init__(self, A: int, B: int, C: int, lo: Fraction, hi: Fraction):
        if A == 0:
            raise ValueError("leading coefficient must be nonzero")
        disc = B * B - 4 * A * C
        if disc <= 0:
            raise ValueError("polynomial has no two distinct real roots")
        r = math.isqrt(disc)
        if r * r == disc:
            raise ValueError("rational root; use an exact rational base instead")
        self.A, self.B, self.C = A, B, C
        self.P = Fraction(-B, A)
        self.Q = Fraction(-C, A)
        lo, hi = Fraction(lo), Fraction(hi)
        slo, shi = _sign(self._poly(lo)), _sign(self._poly(hi))
        if slo == 0 or shi == 0 or slo == shi:
            raise ValueError(
                "selecting interval must bracket exactly one root "
                "(strict sign change required)")
        self._lo, self._hi = lo, hi
        self._sign_lo = slo
        self._lock = threading.Lock()

    def _poly(self, x: Fraction) -> Fraction:
        return (self.A * x + self.B) * x + self.C

    def refine_to_width(self, width: Fraction) -> Interval:
        with self._lock:
            while self._hi - self._lo > width:
                mid = (self._lo + self._hi) / 2
                if _sign(self._poly(mid)) == self._sign_lo:
                    self._lo = mid
                else:
                    self._hi = mid
            return (self._lo, self._hi)

    def enclosure(self, bits: int) -> Interval:
        return self.refine_to_width(Fraction(1, 1 << bits))

    def coefficients(self) -> tuple[int, int, int]:
        return (self.A, self.B, self.C)


class QuadElem:
    """An exact element a + b*beta of a quadratic field."""

    __slots__ = ("a", "b", "field")

    def __init__(self, a, b, field: QuadField):
        self.a = Fraction(a)
        self.b = Fraction(b)
        self.field = field

    def _coerce(self, other) -> "QuadElem":
        if isinstance(other, QuadElem):
            if other.field is not self.field:
                raise ValueError("elements of different fields")
            return other
        return QuadElem(Fraction(other), 0, self.field)

    def __add__(self, other):
        o = self._coerce(other)
        return QuadElem(self.a + o.a, self.b + o.b, self.field)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        return QuadElem(self.a - o.a, self.b - o.b, self.field)

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __neg__(self):
        return QuadElem(-self.a, -self.b, self.field)

    def __mul__(self, other):
        o = self._coerce(other)
        a1, b1, a2, b2 = self.a, self.b, o.a, o.b
        return QuadElem(
            a1 * a2 + b1 * b2 * self.field.Q,
            a1 * b2 + a2 * b1 + b1 * b2 * self.field.P,
            self.field,
        )

    __rmul__ = __mul__

    def inverse(self) -> "QuadElem":
        a, b, P, Q = self.a, self.b, self.field.P, self.field.Q
        det = a * a + a * b * P - b * b * Q
        if det == 0:
            raise ZeroDivisionError("zero element")
        return QuadElem((a + b * P) / det, -b / det, self.field)

    def __truediv__(self, other):
        return self * self._coerce(other).inverse()

    def __rtruediv__(self, other):
        return self._coerce(other) * self.inverse()

    def __eq__(self, other):
        if isinstance(other, QuadElem):
            return (self.field is other.field and self.a == other.a
                    and self.b == other.b)
        if isinstance(other, (int, Fraction)):
            return self.b == 0 and self.a == other
        return NotImplemented

    def __hash__(self):
        return hash((self.a, self.b, id(self.field)))

    def is_zero(self) -> bool:
        return self.a == 0 and self.b == 0

    def enclosure(self, bits: int) -> Interval:
        if self.b == 0:
            return iv_point(self.a)
        scale = max(abs(self.b), 1)
        width = Fraction(1, 1 << bits) / scale
        lo, hi = self.field.refine_to_width(width)
        return iv_add(iv_point(self.a), iv_scale((lo, hi), self.b))

    def sign(self) -> int:
        if self.b == 0:
            return _sign(self.a)
        bits = 32
        while True:
            lo, hi = self.enclosure(bits)
            if lo > 0:
                return 1
            if hi < 0:
                return -1
            bits *= 2  # terminates: a + b*beta is irrational here

    def floor(self) -> int:
        if self.b == 0:
            return _floor_fraction(self.a)
        bits = 32
        while True:
            lo, hi = self.enclosure(bits)
            flo, fhi = _floor_fraction(lo), _floor_fraction(hi)
            if flo == fhi:
                return flo
            bits *= 2  # terminates: the element is irrational

    def __lt__(self, other):
        return (self - self._coerce(other)).sign() < 0

    def __le__(self, other):
        return (self - self._coerce(other)).sign() <= 0

    def __gt__(self, other):
        return (self - self._coerce(other)).sign() > 0

    def __ge__(self, other):
        return (self - self._coerce(other)).sign() >= 0

    def __float__(self):
        return iv_to_float(self.enclosure(64))

    def __repr__(self):
        return f"QuadElem({self.a} + {self.b}*beta ~ {float(self):.12g})"


PointValue = Union[Fraction, QuadElem, Interval, Enclosure]

_DECIMAL_RE = re.compile(r"^\d+\.\d+$")
_INT_RE = re.compile(r"^\d+$")
_FRACTION_RE = re.compile(r"^\d+/\d+$")


def _parse_number(text: str) -> Fraction:
    text = text.strip()
    return Fraction(text)


class Beta:
    """A certified base beta > 1.

    kind is one of 'integer', 'rational', 'quadratic', 'real-enclosure'.
    The rational kind is not in the original three-way design but the exact
    examples (3/2, 1.8) need it; an integer-valued rational collapses to
    the integer kind.
    """

    __slots__ = ("kind", "_frac", "_field", "_enc", "literal", "_star", "_star_lock")

    def __init__(self, kind: str, frac=None, fld=None, enc=None, literal: str = ""):
        self.kind = kind
        self._frac = frac
        self._field = fld
        self._enc = enc
        self.literal = literal or kind
        self._star = None
        self._star_lock = threading.Lock()

    # -- constructors -------------------------------------------------------

    @classmethod
    def integer(cls, value: int) -> "Beta":
        value = int(value)
        if value < 2:
            raise ValueError("integer base must be >= 2")
        return cls("integer", frac=Fraction(value), literal=str(value))

    @classmethod
    def rational(cls, value) -> "Beta":
        value = Fraction(value)
        if value <= 1:
            raise ValueError("base must exceed 1")
        if value.denominator == 1:
            return cls.integer(value.numerator)
        return cls("rational", frac=value, literal=str(value))

    @classmethod
    def quadratic(cls, a, b, c, lo, hi) -> "Beta":
        a, b, c = Fraction(a), Fraction(b), Fraction(c)
        den = a.denominator * b.denominator * c.denominator
        ai, bi, ci = (int(a * den), int(b * den), int(c * den))
        g = math.gcd(math.gcd(abs(ai), abs(bi)), abs(ci))
        if g:
            ai, bi, ci = ai // g, bi // g, ci // g
        disc = bi * bi - 4 * ai * ci
        root = math.isqrt(max(disc, 0))
        if disc >= 0 and root * root == disc:
            # Rational roots: pick the one inside the selecting interval.
            lo, hi = Fraction(lo), Fraction(hi)
            roots = [Fraction(-bi + root, 2 * ai), Fraction(-bi - root, 2 * ai)]
            inside = [r for r in roots if lo < r < hi]
            if len(inside) != 1:
                raise ValueError("selecting interval must isolate one root")
            return cls.rational(inside[0])
        fld = QuadField(ai, bi, ci, Fraction(lo), Fraction(hi))
        # Certify beta > 1.
        while True:
            blo, bhi = fld.enclosure(16)
            if blo > 1:
                break
            if bhi <= 1:
                raise ValueError("selected root does not exceed 1")
            fld.refine_to_width((bhi - blo) / 4)
        lit = f"quadratic:{ai},{bi},{ci}@{Fraction(lo)},{Fraction(hi)}"
        return cls("quadratic", fld=fld, literal=lit)

    @classmethod
    def golden(cls) -> "Beta":
        b = cls.quadratic(1, -1, -1, 1, 2)
        b.literal = "golden"
        return b

    @classmethod
    def from_refiner(cls, refine, lo, hi, name: str = "real",
                     max_bits: int | None = None) -> "Beta":
        enc = Enclosure(refine, name=name, max_bits=max_bits)
        lo0, hi0 = enc.eval(16)
        if lo0 <= 1:
            lo1, _ = enc.eval(max_bits or 256)
            if lo1 <= 1:
                raise ValueError("enclosure does not certify beta > 1")
        return cls("real-enclosure", enc=enc, literal=name)

    @classmethod
    def real_decimal(cls, decimal: str, bits: int) -> "Beta":
        """A base stated as a decimal literal correct to `bits` bits.  The
        enclosure can never shrink below that stated precision."""
        center = Fraction(decimal)
        bits = int(bits)
        if bits < 4:
            raise ValueError("stated precision too small")

        def refine(b: int) -> Interval:
            eps = Fraction(1, 1 << min(b, bits))
            return (center - eps, center + eps)

        beta = cls.from_refiner(refine, center - Fraction(1, 1 << bits),
                                center + Fraction(1, 1 << bits),
                                name=f"real:{decimal}@{bits}", max_bits=bits)
        return beta

    @classmethod
    def pi(cls) -> "Beta":
        return cls.from_refiner(pi_interval, 3, 4, name="pi")

    @classmethod
    def parse(cls, literal: str) -> "Beta":
        """Parse a base literal.

        Grammar: "2" | "3" | ... (integer), "golden", "pi",
        "quadratic:a,b,c@lo,hi", "real:d.ddd@bits", plus exact rationals
        written as "9/5", "1.8" or "rational:9/5".
        """
        text = literal.strip()
        if text == "golden":
            return cls.golden()
        if text == "pi":
            return cls.pi()
        if _INT_RE.match(text):
            return cls.integer(int(text))
        if text.startswith("rational:"):
            return cls.rational(_parse_number(text[len("rational:"):]))
        if _FRACTION_RE.match(text) or _DECIMAL_RE.match(text):
            return cls.rational(_parse_number(text))
        if text.startswith("quadratic:"):
            body = text[len("quadratic:"):]
            try:
                coeffs, box = body.split("@")
                a, b, c = (Fraction(t) for t in coeffs.split(","))
                lo, hi = (Fraction(t) for t in box.split(","))
            except ValueError as exc:
                raise ValueError(f"bad quadratic literal {literal!r}") from exc
            beta = cls.quadratic(a, b, c, lo, hi)
            return beta
        if text.startswith("real:"):
            body = text[len("real:"):]
            try:
                dec, bits = body.split("@")
            except ValueError as exc:
                raise ValueError(f"bad real literal {literal!r}") from exc
            return cls.real_decimal(dec, int(bits))
        raise ValueError(f"unrecognized base literal {literal!r}")

    # -- basic queries ------------------------------------------------------

    @property
    def exact_fraction(self) -> Fraction | None:
        return self._frac

    @property
    def is_exact(self) -> bool:
        return self.kind != "real-enclosure"

    def enclosure(self, bits: int) -> Interval:
        if self._frac is not None:
            return iv_point(self._frac)
        if self._field is not None:
            return self._field.enclosure(bits)
        return self._enc.eval(bits)

    def __float__(self) -> float:
        return iv_to_float(self.enclosure(64))

    def floor_value(self, cfg: PrecisionCfg = DEFAULT_CFG) -> int:
        """Certified floor of beta."""
        if self._frac is not None:
            return _floor_fraction(self._frac)
        if self._field is not None:
            return self.element(0, 1).floor()
        from .certified import certified_floor
        return certified_floor(self.enclosure, cfg, what="beta")

    def element(self, a, b) -> QuadElem:
        if self._field is None:
            raise ValueError("not a quadratic base")
        return QuadElem(a, b, self._field)

    def point(self, x) -> PointValue:
        """Normalize a point of [0,1] to this base's exact representation
        when one exists."""
        if isinstance(x, QuadElem):
            if self._field is None or x.field is not self._field:
                raise ValueError("field element does not belong to this base")
            return x
        if isinstance(x, Enclosure):
            return x
        if isinstance(x, tuple):
            return interval(*x)
        return Fraction(x)

    def pow_value(self, k: int):
        """beta**k as an exact value (Fraction or field element) for exact
        kinds, else a closure evaluating an enclosure at given bits."""
        if self._frac is not None:
            return self._frac ** k
        if self._field is not None:
            out = self.element(1, 0)
            base = self.element(0, 1) if k >= 0 else self.element(0, 1).inverse()
            for _ in range(abs(k)):
                out = out * base
            return out
        def power(bits: int, _k=k) -> Interval:
            base = self.enclosure(bits + 8)
            if _k >= 0:
                return iv_pow_uint(base, _k)
            return iv_recip(iv_pow_uint(base, -_k))
        return Enclosure(power, name=f"beta**{k}")

    def __repr__(self):
        return f"Beta({self.literal})"


# ---------------------------------------------------------------------------
# Generic certified values.


def value_interval(v, bits: int) -> Interval:
    """Rational enclosure of any supported value type at roughly 2**-bits."""
    if isinstance(v, Fraction):
        return iv_point(v)
    if isinstance(v, int):
        return iv_point(Fraction(v))
    if isinstance(v, QuadElem):
        return v.enclosure(bits)
    if isinstance(v, Enclosure):
        return v.eval(bits)
    if isinstance(v, tuple):
        return v
    return iv_point(Fraction(v))


def value_float(v) -> float:
    return iv_to_float(value_interval(v, 64))


def compare_values(a, b, cfg: PrecisionCfg = DEFAULT_CFG, what: str = "values") -> int:
    """Certified three-way comparison.  Exact representations are compared
    exactly; mixed or enclosed values escalate precision until separated.
    Raises PrecisionExhausted when the two sides are indistinguishable at
    p_max and not provably equal."""
    if isinstance(a, int):
        a = Fraction(a)
    if isinstance(b, int):
        b = Fraction(b)
    if isinstance(a, Fraction) and isinstance(b, Fraction):
        return _sign(a - b)
    if isinstance(a, QuadElem) and isinstance(b, (QuadElem, Fraction)):
        return (a - (b if isinstance(b, QuadElem) else a._coerce(b))).sign()
    if isinstance(b, QuadElem) and isinstance(a, Fraction):
        return -compare_values(b, a, cfg, what)
    for bits in cfg.ladder():
        alo, ahi = value_interval(a, bits)
        blo, bhi = value_interval(b, bits)
        if ahi < blo:
            return -1
        if bhi < alo:
            return 1
        if alo == ahi == blo == bhi:
            return 0
    raise PrecisionExhausted(f"comparison of {what} undecided at {cfg.p_max} bits")


# ---------------------------------------------------------------------------
# Digit machinery.


@dataclass(frozen=True)
class DigitSeq:
    """The first n greedy digits of a point together with the certified
    n-th iterate of the map (the tail needed to reconstruct exactly)."""

    digits: tuple[int, ...]
    beta: Beta
    terminal: object  # Fraction | QuadElem | Interval

    def __len__(self):
        return len(self.digits)

    def terminal_interval(self, bits: int = 64) -> Interval:
        return value_interval(self.terminal, bits)

    def terminal_float(self) -> float:
        return iv_to_float(self.terminal_interval(64))

    def terminal_is_zero(self) -> bool:
        t = self.terminal
        if isinstance(t, Fraction):
            return t == 0
        if isinstance(t, QuadElem):
            return t.is_zero()
        return t[0] == t[1] == 0


def _check_unit_fraction(x: Fraction):
    if x < 0 or x > 1:
        raise ValueError(f"point {x} outside [0,1]")


def beta_transform(x, beta: Beta, cfg: PrecisionCfg = DEFAULT_CFG):
    """One certified step of x -> beta*x mod 1.  The result has the same
    representation as the input.  Raises UncertifiedFloor when beta*x
    cannot be separated from the integers at p_max."""
    x = beta.point(x)
    if beta._frac is not None:
        _check_unit_fraction(x)
        prod = beta._frac * x
        return prod - _floor_fraction(prod)
    if beta._field is not None:
        if isinstance(x, Fraction):
            _check_unit_fraction(x)
            x = beta.element(x, 0)
        prod = x * beta.element(0, 1)
        return prod - prod.floor()
    seq = digits(x, beta, 1, cfg)
    return seq.terminal


def digits(x, beta: Beta, n: int, cfg: PrecisionCfg = DEFAULT_CFG) -> DigitSeq:
    """First n greedy digits of x in base beta, plus the certified terminal.

    x may be 1, which is needed to build the expansion of 1; every digit d
    satisfies 0 <= d <= floor(beta).
    """
    if n < 1:
        raise ValueError("depth must be >= 1")
    x = beta.point(x)
    if beta._frac is not None:
        return _digits_rational(x, beta, n)
    if beta._field is not None:
        return _digits_quadratic(x, beta, n)
    return _digits_enclosure(x, beta, n, cfg)


def _digits_rational(x: Fraction, beta: Beta, n: int) -> DigitSeq:
    _check_unit_fraction(x)
    p, q = beta._frac.numerator, beta._frac.denominator
    num, den = x.numerator, x.denominator
    out = []
    for _ in range(n):
        num *= p
        den *= q
        d = num // den
        num -= d * den
        out.append(d)
    return DigitSeq(tuple(out), beta, Fraction(num, den))


def _digits_quadratic(x, beta: Beta, n: int) -> DigitSeq:
    if isinstance(x, Fraction):
        _check_unit_fraction(x)
        state = beta.element(x, 0)
    else:
        state = x
        if state.sign() < 0 or (state - 1).sign() > 0:
            raise ValueError("point outside [0,1]")
    belem = beta.element(0, 1)
    out = []
    for _ in range(n):
        prod = state * belem
        d = prod.floor()
        state = prod - d
        out.append(d)
    return DigitSeq(tuple(out), beta, state)


def _enclosure_orbit(x_iv: Interval, beta: Beta, n: int, bits: int):
    """Run n interval steps at fixed working precision.  Returns
    (digits, terminal, fail_index, zero_index): fail_index marks an
    uncertified floor, zero_index the first step whose terminal enclosure
    touches 0 without being exactly 0."""
    beta_iv = beta.enclosure(bits)
    cur = x_iv
    out = []
    zero_index = None
    for i in range(1, n + 1):
        lo, hi = iv_round_out(iv_mul(cur, beta_iv), bits + 16)
        flo, fhi = _floor_fraction(lo), _floor_fraction(hi)
        if flo != fhi:
            return out, cur, i, zero_index
        cur = (lo - flo, hi - flo)
        out.append(flo)
        if cur[0] == 0 and zero_index is None:
            if cur[1] == 0:
                pass  # exactly zero is a decision, not an ambiguity
            else:
                zero_index = i
    return out, cur, None, zero_index


def _digits_enclosure(x, beta: Beta, n: int, cfg: PrecisionCfg) -> DigitSeq:
    if isinstance(x, Fraction):
        _check_unit_fraction(x)
    _, bhi = beta.enclosure(16)
    start = max(cfg.working, int(n * math.log2(float(bhi))) + 64)
    fail = None
    for bits in cfg.ladder(start=start):
        x_iv = value_interval(x, bits)
        if x_iv[0] < 0 or x_iv[1] > 1:
            raise ValueError("point enclosure outside [0,1]")
        out, terminal, fail, _ = _enclosure_orbit(x_iv, beta, n, bits)
        if fail is None:
            return DigitSeq(tuple(out), beta, terminal)
    raise UncertifiedFloor(
        f"digit {fail} of {beta.literal}-expansion undecided at {cfg.p_max} bits",
        index=fail)


def reconstruct(seq: DigitSeq, beta: Beta | None = None,
                cfg: PrecisionCfg = DEFAULT_CFG):
    """Evaluate sum(digit_i * beta**-i) + terminal * beta**-n exactly where
    the base allows, else as a certified enclosure."""
    beta = beta or seq.beta
    if beta._frac is not None:
        v = seq.terminal
        for d in reversed(seq.digits):
            v = (d + v) / beta._frac
        return v
    if beta._field is not None:
        inv = beta.element(0, 1).inverse()
        v = seq.terminal
        if isinstance(v, Fraction):
            v = beta.element(v, 0)
        for d in reversed(seq.digits):
            v = (v + d) * inv
        return v
    bits = max(cfg.working, len(seq.digits) * 2 + 64)
    binv = iv_recip(beta.enclosure(bits))
    v = value_interval(seq.terminal, bits)
    for d in reversed(seq.digits):
        v = iv_round_out(iv_mul(iv_add(v, iv_point(Fraction(d))), binv), bits + 16)
    return v


def word_value(word: Iterable[int], beta: Beta, cfg: PrecisionCfg = DEFAULT_CFG):
    """sum(digit_i * beta**-i) for a finite word, with terminal zero."""
    word = tuple(word)
    if not word:
        if beta._frac is not None:
            return Fraction(0)
        if beta._field is not None:
            return beta.element(0, 0)
        return iv_point(Fraction(0))
    zero: object = Fraction(0)
    return reconstruct(DigitSeq(word, beta, zero), beta, cfg)


# ---------------------------------------------------------------------------
# The expansion of 1.


class OneExpansion:
    """The infinite digit sequence attached to the expansion of 1.

    When the greedy expansion of 1 terminates after n digits the stored
    period is (d_1, ..., d_{n-1}, d_n - 1); otherwise digits are served
    from a lazily extended prefix.  Exact bases detect eventual periodicity
    by exact repetition of the orbit state; an enclosed base never claims
    periodicity, and flags the depth from which finiteness of the expansion
    (hence the periodized digits) is undecidable.
    """

    def __init__(self, beta: Beta, cfg: PrecisionCfg = DEFAULT_CFG):
        self.beta = beta
        self.cfg = cfg
        self._digits: list[int] = []
        self._state = None  # exact orbit point; None once resolved
        self._seen: dict = {}
        self._started = False
        self.preperiod: tuple[int, ...] | None = None
        self.period: tuple[int, ...] | None = None
        self.finite_expansion: tuple[int, ...] | None = None
        self.undecided_from: int | None = None
        self._lock = threading.RLock()

    # -- queries ------------------------------------------------------------

    @property
    def is_eventually_periodic(self) -> bool:
        return self.period is not None

    def digit(self, i: int) -> int:
        """1-based digit of the periodized sequence."""
        if i < 1:
            raise ValueError("digit index starts at 1")
        with self._lock:
            if self.period is not None:
                p = len(self.preperiod)
                if i <= p:
                    return self.preperiod[i - 1]
                return self.period[(i - 1 - p) % len(self.period)]
            self._extend_to(i)
            if self.period is not None:
                return self.digit(i)
            if self.undecided_from is not None and i >= self.undecided_from:
                raise UndecidedFiniteness(
                    f"expansion of 1 for {self.beta.literal}: finiteness "
                    f"undecided from digit {self.undecided_from}",
                    depth=self.undecided_from - 1)
            return self._digits[i - 1]

    def prefix(self, k: int) -> tuple[int, ...]:
        return tuple(self.digit(i) for i in range(1, k + 1))

    @property
    def max_digit(self) -> int:
        return self.digit(1)

    def describe(self) -> dict:
        out = {"beta": self.beta.literal}
        if self.period is not None:
            out["preperiod"] = list(self.preperiod)
            out["period"] = list(self.period)
            out["finite_expansion"] = (list(self.finite_expansion)
                                       if self.finite_expansion else None)
        else:
            out["prefix"] = list(self._digits)
            out["undecided_from"] = self.undecided_from
        return out

    # -- extension ----------------------------------------------------------

    def _extend_to(self, k: int):
        if self.beta.is_exact:
            self._extend_exact(k)
        else:
            self._extend_enclosure(k)

    def _state_key(self, state):
        if isinstance(state, Fraction):
            return state
        return (state.a, state.b)

    def _extend_exact(self, k: int):
        if not self._started:
            self._started = True
            if self.beta._frac is not None:
                self._state = Fraction(1)
            else:
                self._state = self.beta.element(1, 0)
        while self.period is None and len(self._digits) < k:
            key = self._state_key(self._state)
            if key in self._seen:
                cut = self._seen[key]
                self.preperiod = tuple(self._digits[:cut])
                self.period = tuple(self._digits[cut:])
                return
            self._seen[key] = len(self._digits)
            if self.beta._frac is not None:
                prod = self.beta._frac * self._state
                d = _floor_fraction(prod)
                self._state = prod - d
                is_zero = self._state == 0
            else:
                prod = self._state * self.beta.element(0, 1)
                d = prod.floor()
                self._state = prod - d
                is_zero = self._state.is_zero()
            self._digits.append(d)
            if is_zero:
                self.finite_expansion = tuple(self._digits)
                self.preperiod = ()
                self.period = tuple(self._digits[:-1]) + (d - 1,)
                return

    def _extend_enclosure(self, k: int):
        if self.undecided_from is not None:
            return  # already capped; deeper digits stay unavailable
        if len(self._digits) >= k:
            return
        _, bhi = self.beta.enclosure(16)
        start = max(self.cfg.working, int(k * math.log2(float(bhi))) + 64)
        fail = zero = None
        for bits in self.cfg.ladder(start=start):
            out, terminal, fail, zero = _enclosure_orbit(
                iv_point(Fraction(1)), self.beta, k, bits)
            if fail is None and zero is None:
                if terminal[0] == terminal[1] == 0:
                    # Provably finite although the base is only enclosed.
                    n = len(out)
                    while n > 0 and out[n - 1] == 0:
                        n -= 1
                    self.finite_expansion = tuple(out[:n])
                    self.preperiod = ()
                    self.period = tuple(out[:n - 1]) + (out[n - 1] - 1,)
                    return
                self._digits = out
                return
        if fail is not None:
            raise UncertifiedFloor(
                f"digit {fail} of the expansion of 1 for {self.beta.literal} "
                f"undecided at {self.cfg.p_max} bits", index=fail)
        # The terminal touched 0 at step `zero` at every precision.
        self._digits = out[:zero]
        self.undecided_from = zero


def expansion_of_one(beta: Beta, m: int = 1,
                     cfg: PrecisionCfg = DEFAULT_CFG) -> OneExpansion:
    """The (cached) digit sequence of the expansion of 1, materialized to at
    least m digits.  m only forces eagerness; the result extends lazily.
    One sequence is cached per base, under the precision settings of the
    first call that created it."""
    if m < 1:
        raise ValueError("prefix length must be >= 1")
    with beta._star_lock:
        if beta._star is None:
            beta._star = OneExpansion(beta, cfg)
    star = beta._star
    if star.period is None:
        try:
            star.digit(m)
        except UndecidedFiniteness:
            pass  # flagged, not failed: the caller sees the flag
    return star
