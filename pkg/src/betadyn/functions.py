"""Parametric families: dimension functions and target speed functions.

Dimension functions f live in the closed families f(r) = r**s or
f(r) = r**s * (log 1/r)**b, with rational parameters so that the series
verdicts downstream can be decided by exact exponent arithmetic.  Target
speeds have the shape C * beta**(-n*tau) * n**(-a) * (log beta**n)**(-c).
Tabulated variants are accepted but give up every symbolic decision.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .beta import Beta
from .certified import (
    Enclosure,
    Interval,
    exp_interval,
    iv_point,
    iv_recip,
    iv_scale,
    iv_to_float,
    log_interval,
    pow_interval,
)
from .errors import PreconditionUnverifiable

__all__ = [
    "DimensionFn",
    "TargetFn",
    "corollary_g",
    "corollary_psi1",
    "corollary_psi_eps",
]


def _frac(x) -> Fraction:
    # Floats go through their decimal repr, so a literal like 0.1 means 1/10.
    if isinstance(x, float):
        from decimal import Decimal
        return Fraction(Decimal(repr(x)))
    return Fraction(x)


@dataclass(frozen=True)
class DimensionFn:
    """f(r) = r**s * (log 1/r)**b (b omitted for the plain power family),
    or a tabulated function with no symbolic structure."""

    family: str  # "power" | "power-log" | "tabulated"
    s: Fraction | None = None
    b: Fraction | None = None
    table: tuple[tuple[Fraction, Fraction], ...] | None = None
    declared_dim: int = 1

    @classmethod
    def power(cls, s, declared_dim: int = 1) -> "DimensionFn":
        s = _frac(s)
        if s <= 0:
            raise ValueError("power family needs s > 0 to be a dimension function")
        return cls("power", s=s, declared_dim=declared_dim)

    @classmethod
    def power_log(cls, s, b, declared_dim: int = 1) -> "DimensionFn":
        s, b = _frac(s), _frac(b)
        if s < 0 or (s == 0 and b >= 0):
            raise ValueError("family does not vanish at 0")
        return cls("power-log", s=s, b=b, declared_dim=declared_dim)

    @classmethod
    def tabulated(cls, pairs, declared_dim: int = 1) -> "DimensionFn":
        table = tuple(sorted((Fraction(r), Fraction(v)) for r, v in pairs))
        if any(v < 0 for _, v in table):
            raise ValueError("tabulated values must be non-negative")
        return cls("tabulated", table=table, declared_dim=declared_dim)

    @classmethod
    def parse(cls, text: str, declared_dim: int = 1) -> "DimensionFn":
        """Grammar: power:<s> or powerlog:<s>,<b>."""
        text = text.strip()
        if text.startswith("power:"):
            return cls.power(Fraction(text[len("power:"):]), declared_dim)
        if text.startswith("powerlog:"):
            s, b = text[len("powerlog:"):].split(",")
            return cls.power_log(Fraction(s), Fraction(b), declared_dim)
        raise ValueError(f"unrecognized dimension function literal {text!r}")

    @property
    def is_parametric(self) -> bool:
        return self.family != "tabulated"

    def describe(self) -> str:
        if self.family == "power":
            return f"power:{self.s}"
        if self.family == "power-log":
            return f"powerlog:{self.s},{self.b}"
        return f"tabulated[{len(self.table)}]"

    # -- evaluation ----------------------------------------------------------

    def value_float(self, r: float) -> float:
        import math
        if self.family == "tabulated":
            return self._table_lookup(Fraction(r))
        if r <= 0:
            return 0.0
        out = r ** float(self.s)
        if self.family == "power-log":
            out *= math.log(1 / r) ** float(self.b)
        return out

    def _table_lookup(self, r: Fraction) -> float:
        import bisect
        keys = [k for k, _ in self.table]
        i = bisect.bisect_left(keys, r)
        i = min(i, len(self.table) - 1)
        return float(self.table[i][1])

    def value_interval(self, r: Interval, bits: int) -> Interval:
        """Certified enclosure of f over a non-negative interval of radii.
        For the power-log family the whole interval must lie in (0, 1)."""
        if self.family == "tabulated":
            raise PreconditionUnverifiable("tabulated f has no certified evaluation")
        lo, hi = r
        if lo < 0:
            raise ValueError("radius interval must be non-negative")
        if self.family == "power":
            if hi == 0:
                return iv_point(Fraction(0))
            if lo == 0:
                upper = pow_interval((hi, hi), self.s, bits)[1]
                return (Fraction(0), upper)
            return pow_interval(r, self.s, bits)
        if not (0 < lo and hi < 1):
            raise ValueError("power-log family evaluated outside (0,1)")
        power_part = pow_interval(r, self.s, bits)
        log_part = pow_interval(iv_scale(log_interval(iv_recip(r), bits), 1),
                                self.b, bits)
        from .certified import iv_mul
        return iv_mul(power_part, log_part)

    def as_enclosure(self, r_value) -> Enclosure:
        from .beta import value_interval as vi

        def refine(bits: int) -> Interval:
            return self.value_interval(vi(r_value, bits), bits)

        return Enclosure(refine, name=f"{self.describe()}(r)")

    # -- symbolic checks -----------------------------------------------------

    def ratio_direction(self, d: int | None = None) -> str:
        """Limit behaviour of r**-d * f(r) as r -> 0: 'infinity', 'zero' or
        'bounded'.  Raises for tabulated functions."""
        if not self.is_parametric:
            raise PreconditionUnverifiable(
                "monotonicity of the ratio is undecidable for tabulated f")
        d = self.declared_dim if d is None else d
        e = self.s - d
        if e < 0:
            return "infinity"
        if e > 0:
            return "zero"
        b = self.b or Fraction(0)
        if b > 0:
            return "infinity"
        if b < 0:
            return "zero"
        return "bounded"

    def ratio_monotone(self, d: int | None = None) -> bool:
        """Whether r**-d f(r) is (eventually) monotone near 0; true for the
        closed parametric families."""
        return self.is_parametric


@dataclass(frozen=True)
class TargetFn:
    """Psi(n) = C * beta**(-n*tau) * n**(-a) * (log beta**n)**(-c), or a
    tabulated positive sequence."""

    C: Fraction = Fraction(1)
    tau: Fraction = Fraction(0)
    a: Fraction = Fraction(0)
    c: Fraction = Fraction(0)
    table: tuple[Fraction, ...] | None = None

    @classmethod
    def family(cls, tau=0, a=0, c=0, C=1) -> "TargetFn":
        C = _frac(C)
        tau = _frac(tau)
        if C <= 0:
            raise ValueError("constant must be positive")
        if tau < 0:
            raise ValueError("exponential rate tau must be >= 0")
        return cls(C=C, tau=tau, a=_frac(a), c=_frac(c))

    @classmethod
    def tabulated(cls, values) -> "TargetFn":
        vals = tuple(Fraction(v) for v in values)
        if any(v <= 0 for v in vals):
            raise ValueError("target speeds must be positive")
        return cls(table=vals)

    @classmethod
    def parse(cls, text: str) -> "TargetFn":
        """Grammar: exp:<tau>[,poly:<a>][,log:<c>][,C:<const>]."""
        parts = text.strip().split(",")
        if not parts or not parts[0].startswith("exp:"):
            raise ValueError(f"target literal must start with exp:<tau>: {text!r}")
        kwargs = {"tau": Fraction(parts[0][len("exp:"):])}
        for part in parts[1:]:
            if part.startswith("poly:"):
                kwargs["a"] = Fraction(part[len("poly:"):])
            elif part.startswith("log:"):
                kwargs["c"] = Fraction(part[len("log:"):])
            elif part.startswith("C:"):
                kwargs["C"] = Fraction(part[len("C:"):])
            else:
                raise ValueError(f"unrecognized target component {part!r}")
        return cls.family(**kwargs)

    @property
    def is_parametric(self) -> bool:
        return self.table is None

    def describe(self) -> str:
        if not self.is_parametric:
            return f"tabulated[{len(self.table)}]"
        out = f"exp:{self.tau}"
        if self.a:
            out += f",poly:{self.a}"
        if self.c:
            out += f",log:{self.c}"
        if self.C != 1:
            out += f",C:{self.C}"
        return out

    @property
    def tends_to_zero(self) -> bool | None:
        """Symbolic check of Psi(n) -> 0; None for tabulated speeds (spot
        checks cannot decide a limit)."""
        if not self.is_parametric:
            return None
        if self.tau > 0:
            return True
        if self.a > 0:
            return True
        return self.a == 0 and self.c > 0

    def exact(self, n: int, beta: Beta) -> Fraction | None:
        """Exact rational value when the parameters allow one."""
        if not self.is_parametric:
            return self.table[n - 1] if n <= len(self.table) else None
        if self.c != 0 or self.a.denominator != 1:
            return None
        expo = self.tau * n
        if expo.denominator != 1:
            return None
        bfrac = beta.exact_fraction
        if bfrac is None and expo != 0:
            return None
        out = self.C * Fraction(n) ** (-self.a.numerator)
        if expo != 0:
            out *= bfrac ** (-expo.numerator)
        return out

    def value_interval(self, n: int, beta: Beta, bits: int) -> Interval:
        exact = self.exact(n, beta)
        if exact is not None:
            return iv_point(exact)
        if not self.is_parametric:
            raise ValueError(f"tabulated speed has no value at n={n}")
        out = iv_point(self.C)
        from .certified import iv_mul
        if self.tau != 0:
            base = beta.enclosure(bits + 16)
            out = iv_mul(out, pow_interval(base, -self.tau * n, bits))
        if self.a != 0:
            out = iv_mul(out, pow_interval(iv_point(Fraction(n)), -self.a, bits))
        if self.c != 0:
            base = beta.enclosure(bits + 16)
            logpart = iv_scale(log_interval(base, bits), n)
            out = iv_mul(out, pow_interval(logpart, -self.c, bits))
        return out

    def value_float(self, n: int, beta: Beta) -> float:
        return iv_to_float(self.value_interval(n, beta, 64))

    def as_enclosure(self, n: int, beta: Beta) -> Enclosure:
        return Enclosure(lambda bits: self.value_interval(n, beta, bits),
                         name=f"psi({n})")


# -- the corollary's exact-logarithmic-order family -------------------------


def corollary_g(tau) -> DimensionFn:
    """g(r) = r**((2+tau)/(1+tau)), the critical dimension function for the
    pair target set at exponential rate tau."""
    tau = _frac(tau)
    return DimensionFn.power(Fraction(2 + tau, 1 + tau), declared_dim=2)


def corollary_psi1(tau) -> TargetFn:
    """Psi_1(n) = beta**(-n*tau): the divergence side of the exact order."""
    return TargetFn.family(tau=tau)


def corollary_psi_eps(tau, eps) -> TargetFn:
    """The convergence side: Psi_1 damped by (log beta**n)**(-(1+eps)(1+tau)).

    With g = corollary_g(tau) the pair-series term is then exactly
    (n log beta)**-(1+eps), so the verdict flips from divergent to
    convergent at eps = 0, an exact logarithmic order.
    """
    tau, eps = _frac(tau), _frac(eps)
    if eps <= 0:
        raise ValueError("eps must be positive")
    return TargetFn.family(tau=tau, c=(1 + eps) * (1 + tau))
