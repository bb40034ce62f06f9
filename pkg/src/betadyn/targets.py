"""Orbit-level shrinking-target machinery.

Hit detection asks, for each n up to a depth N, whether the n-th iterate of
a point falls within the speed Psi(n) of the target y (two-sided), or within
[y, y + Psi(n)) (one-sided).  Every comparison is certified: with an exact
base and rational data the decision is exact; with enclosures a comparison
that stays pinned to the boundary at maximum precision is reported as
uncertain rather than silently resolved either way.

The integer-base path reduces the orbit to a single modular recurrence on
numerators and the hit tests to integer threshold comparisons, which is
what makes the Monte Carlo verification of the measure dichotomy cheap.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from fractions import Fraction

from .admissibility import count_admissible
from .beta import (
    Beta,
    QuadElem,
    compare_values,
    digits,
    value_float,
    value_interval,
    word_value,
)
from .certified import (
    DEFAULT_CFG,
    Enclosure,
    Interval,
    PrecisionCfg,
    certified_floor,
    iv_abs,
    iv_add,
    iv_div,
    iv_mul,
    iv_point,
    iv_pow_uint,
    iv_recip,
    iv_scale,
    iv_sub,
    iv_to_float,
)
from .errors import BudgetExceeded, PrecisionExhausted
from .functions import TargetFn

__all__ = [
    "HitRecord",
    "hit_sequence",
    "hit_sequence_2d",
    "SimulationStats",
    "monte_carlo_measure",
    "GridCell",
    "grid_cells",
    "RectCover",
    "rectangle_cover",
]

MODES = ("two-sided", "one-sided")


@dataclass(frozen=True)
class HitRecord:
    """Certified hit set of one orbit against one shrinking target."""

    x: object
    y: object
    depth: int
    mode: str
    hits: tuple[int, ...]
    uncertain: tuple[int, ...] = ()

    def to_json(self) -> dict:
        return {
            "x": _label(self.x), "y": _label(self.y), "depth": self.depth,
            "mode": self.mode, "hits": list(self.hits),
            "uncertain": list(self.uncertain),
        }

    @classmethod
    def from_json(cls, data: dict) -> "HitRecord":
        return cls(x=data["x"], y=data["y"], depth=data["depth"],
                   mode=data["mode"], hits=tuple(data["hits"]),
                   uncertain=tuple(data["uncertain"]))


def _label(v) -> str:
    if isinstance(v, Fraction):
        return str(v)
    return repr(v) if isinstance(v, (Enclosure, QuadElem)) else str(v)


def _ceil_fraction(x: Fraction) -> int:
    return -((-x.numerator) // x.denominator)


def _floor_fraction(x: Fraction) -> int:
    return x.numerator // x.denominator


class _ThresholdTable:
    """Integer hit thresholds for an orbit with fixed denominator D under an
    integer base: at depth n the hit test on the numerator is
    sure_lo <= num <= sure_hi (certain hit), num outside [maybe_lo, maybe_hi]
    (certain miss), in between undecided at the current precision."""

    def __init__(self, beta: Beta, D: int, y, psi: TargetFn, mode: str,
                 cfg: PrecisionCfg):
        self.beta = beta
        self.D = D
        self.y = y
        self.psi = psi
        self.mode = mode
        self.cfg = cfg
        self._cache: dict[tuple[int, int], tuple[int, int, int, int]] = {}

    def _bounds(self, n: int, bits: int) -> tuple[int, int, int, int]:
        key = (n, bits)
        got = self._cache.get(key)
        if got is not None:
            return got
        D = self.D
        y_iv = value_interval(self.y, bits)
        psi_iv = self.psi.value_interval(n, self.beta, bits)
        if self.mode == "two-sided":
            L = iv_sub(y_iv, psi_iv)
            U = iv_add(y_iv, psi_iv)
            sure_lo = _floor_fraction(D * L[1]) + 1
            maybe_lo = _floor_fraction(D * L[0]) + 1
        else:
            U = iv_add(y_iv, psi_iv)
            sure_lo = _ceil_fraction(D * y_iv[1])
            maybe_lo = _ceil_fraction(D * y_iv[0])
        sure_hi = _ceil_fraction(D * U[0]) - 1
        maybe_hi = _ceil_fraction(D * U[1]) - 1
        out = (sure_lo, sure_hi, maybe_lo, maybe_hi)
        self._cache[key] = out
        return out

    def decide(self, n: int, num: int) -> bool | None:
        for bits in self.cfg.ladder():
            sure_lo, sure_hi, maybe_lo, maybe_hi = self._bounds(n, bits)
            if sure_lo <= num <= sure_hi:
                return True
            if num < maybe_lo or num > maybe_hi:
                return False
            if sure_lo == maybe_lo and sure_hi == maybe_hi:
                return False  # exact bounds: the strict window excludes num
        return None


def _decide_hit(xn, n: int, y, psi: TargetFn, beta: Beta, mode: str,
                cfg: PrecisionCfg) -> bool | None:
    """Certified hit decision for one orbit value of any representation."""
    psi_exact = psi.exact(n, beta)
    exact_y = isinstance(y, Fraction)
    if psi_exact is not None and exact_y and isinstance(xn, (Fraction, QuadElem)):
        diff = xn - y
        if mode == "one-sided":
            nonneg = (compare_values(diff, Fraction(0)) >= 0)
            return nonneg and compare_values(diff, psi_exact) < 0
        mag = diff if compare_values(diff, Fraction(0)) >= 0 else -diff
        return compare_values(mag, psi_exact) < 0
    for bits in cfg.ladder():
        x_iv = value_interval(xn, bits)
        y_iv = value_interval(y, bits)
        psi_iv = psi.value_interval(n, beta, bits)
        diff = iv_sub(x_iv, y_iv)
        if mode == "one-sided":
            if diff[1] < 0:
                return False
            if diff[0] >= 0 and diff[1] < psi_iv[0]:
                return True
            if diff[0] >= psi_iv[1]:
                return False
            if diff[0] < 0 <= diff[1]:
                continue
        else:
            mag = iv_abs(diff)
            if mag[1] < psi_iv[0]:
                return True
            if mag[0] >= psi_iv[1]:
                return False
        if isinstance(xn, tuple) and isinstance(y, Fraction) and psi_exact is not None:
            break  # static interval: more precision cannot help
    return None


def _validate_unit(v, name: str):
    if isinstance(v, Fraction):
        if not 0 <= v < 1:
            raise ValueError(f"{name} must lie in [0,1)")
        return
    f = value_float(v)
    if not (0 <= f < 1):
        raise ValueError(f"{name} must lie in [0,1)")


def hit_sequence(x, y, beta: Beta, psi: TargetFn, N: int, mode: str = "two-sided",
                 cfg: PrecisionCfg = DEFAULT_CFG) -> HitRecord:
    """Indices n <= N at which the orbit of x hits the shrinking target
    around y.  Certified: boundary cases unresolvable at p_max are listed
    as uncertain, never coerced."""
    if mode not in MODES:
        raise ValueError(f"mode must be one of {MODES}")
    if N < 1:
        raise ValueError("depth must be >= 1")
    x = beta.point(x)
    _validate_unit(x, "x")
    _validate_unit(y, "y")
    if beta.kind == "integer" and isinstance(x, Fraction):
        table = _ThresholdTable(beta, x.denominator, y, psi, mode, cfg)
        hits, uncertain = _run_integer_orbit(
            int(beta.exact_fraction), x.numerator, x.denominator, N, table)
        return HitRecord(x, y, N, mode, tuple(hits), tuple(uncertain))
    if beta.is_exact:
        hits, uncertain = [], []
        xn = x
        from .beta import beta_transform
        for n in range(1, N + 1):
            xn = beta_transform(xn, beta, cfg)
            verdict = _decide_hit(xn, n, y, psi, beta, mode, cfg)
            if verdict is None:
                uncertain.append(n)
            elif verdict:
                hits.append(n)
        return HitRecord(x, y, N, mode, tuple(hits), tuple(uncertain))
    return _hit_sequence_enclosure(x, y, beta, psi, N, mode, cfg)


def _run_integer_orbit(p: int, num: int, D: int, N: int,
                       table: _ThresholdTable) -> tuple[list[int], list[int]]:
    hits, uncertain = [], []
    for n in range(1, N + 1):
        num = (p * num) % D
        verdict = table.decide(n, num)
        if verdict is None:
            uncertain.append(n)
        elif verdict:
            hits.append(n)
    return hits, uncertain


def _hit_sequence_enclosure(x, y, beta: Beta, psi: TargetFn, N: int, mode: str,
                            cfg: PrecisionCfg) -> HitRecord:
    _, bhi = beta.enclosure(16)
    start = max(cfg.working, int(N * math.log2(float(bhi))) + 64)
    fail = None
    for bits in cfg.ladder(start=start):
        x_iv = value_interval(x, bits)
        beta_iv = beta.enclosure(bits)
        cur = x_iv
        hits, uncertain = [], []
        fail = None
        from .certified import iv_round_out
        for n in range(1, N + 1):
            lo, hi = iv_round_out(iv_mul(cur, beta_iv), bits + 16)
            flo, fhi = _floor_fraction(lo), _floor_fraction(hi)
            if flo != fhi:
                fail = n
                break
            cur = (lo - flo, hi - flo)
            verdict = _decide_hit(cur, n, y, psi, beta, mode, cfg)
            if verdict is None:
                uncertain.append(n)
            elif verdict:
                hits.append(n)
        if fail is None and not uncertain:
            return HitRecord(x, y, N, mode, tuple(hits), ())
        if fail is None and bits >= cfg.p_max:
            return HitRecord(x, y, N, mode, tuple(hits), tuple(uncertain))
    raise PrecisionExhausted(
        f"orbit step {fail} uncertifiable at {cfg.p_max} bits", index=fail)


def hit_sequence_2d(x, y, beta: Beta, psi: TargetFn, N: int,
                    cfg: PrecisionCfg = DEFAULT_CFG) -> HitRecord:
    """Pair version: the hit set of (x, y) for the planar target set, which
    coincides with the two-sided hit set of x against y."""
    return hit_sequence(x, y, beta, psi, N, mode="two-sided", cfg=cfg)


# ---------------------------------------------------------------------------
# Monte Carlo verification of the measure dichotomy.


@dataclass(frozen=True)
class SimulationStats:
    params: dict
    mean_hits: float
    oracle_mean: float | None
    frac_ge_k: dict[int, float]
    tail_frac: float
    uncertain_count: int
    sample_std: float
    per_sample: tuple = field(repr=False, default=())

    def to_json(self) -> dict:
        return {
            "params": self.params,
            "mean_hits": self.mean_hits,
            "oracle_mean": self.oracle_mean,
            "frac_ge_k": {str(k): v for k, v in self.frac_ge_k.items()},
            "tail_frac": self.tail_frac,
            "uncertain_count": self.uncertain_count,
            "sample_std": self.sample_std,
        }

    def csv_rows(self):
        yield ("sample", "hit_count", "first_hit", "last_hit", "uncertain")
        for i, (count, first, last, unc) in enumerate(self.per_sample):
            yield (i, count, first if first is not None else "",
                   last if last is not None else "", unc)

    @classmethod
    def from_json(cls, data: dict) -> "SimulationStats":
        return cls(params=data["params"], mean_hits=data["mean_hits"],
                   oracle_mean=data["oracle_mean"],
                   frac_ge_k={int(k): v for k, v in data["frac_ge_k"].items()},
                   tail_frac=data["tail_frac"],
                   uncertain_count=data["uncertain_count"],
                   sample_std=data["sample_std"])


def _window_measure(y_f: float, psi_f: float, mode: str) -> float:
    if mode == "two-sided":
        return max(0.0, min(y_f + psi_f, 1.0) - max(y_f - psi_f, 0.0))
    return max(0.0, min(y_f + psi_f, 1.0) - y_f)


def monte_carlo_measure(beta: Beta, y, psi: TargetFn, N: int, samples: int,
                        seed: int, mode: str = "two-sided",
                        ks: tuple[int, ...] = (1, 2, 5, 10),
                        tail_threshold: int | None = None,
                        cfg: PrecisionCfg = DEFAULT_CFG) -> SimulationStats:
    """Sample uniform points, run certified hit detection, and compare the
    mean hit count with the Lebesgue prediction.

    Points are dyadic rationals of resolution N*log2(beta) + 64 bits so the
    exact backends stay exact.  For an integer base the per-depth hit
    probability under Lebesgue is the clipped window measure (min(1, 2 Psi)
    away from the boundary), reported as the oracle; for other bases there
    is no oracle column.  Deterministic given the seed: per-sample generators
    are derived from it, and the reduction is in sample order.
    """
    if samples < 1:
        raise ValueError("need at least one sample")
    if mode not in MODES:
        raise ValueError(f"mode must be one of {MODES}")
    if tail_threshold is None:
        tail_threshold = N // 2
    _validate_unit(y, "y")
    _, bhi = beta.enclosure(16)
    resolution = int(N * math.log2(float(bhi))) + 64
    D = 1 << resolution
    integer_base = beta.kind == "integer"
    table = (_ThresholdTable(beta, D, y, psi, mode, cfg)
             if integer_base else None)
    p_int = int(beta.exact_fraction) if integer_base else None

    per_sample = []
    totals = 0
    uncertain_total = 0
    ge_counts = {k: 0 for k in ks}
    tail_count = 0
    for i in range(samples):
        rng = random.Random(f"{seed}:{i}")
        num = rng.getrandbits(resolution)
        if integer_base:
            hits, uncertain = _run_integer_orbit(p_int, num, D, N, table)
        else:
            rec = hit_sequence(Fraction(num, D), y, beta, psi, N, mode, cfg)
            hits, uncertain = list(rec.hits), list(rec.uncertain)
        count = len(hits)
        totals += count
        uncertain_total += len(uncertain)
        for k in ks:
            if count >= k:
                ge_counts[k] += 1
        if hits and hits[-1] > tail_threshold:
            tail_count += 1
        per_sample.append((count, hits[0] if hits else None,
                           hits[-1] if hits else None, len(uncertain)))

    mean = totals / samples
    var = sum((c - mean) ** 2 for c, _, _, _ in per_sample) / max(samples - 1, 1)
    oracle = None
    if integer_base:
        y_f = value_float(y)
        oracle = sum(_window_measure(y_f, psi.value_float(n, beta), mode)
                     for n in range(1, N + 1))
    params = {
        "beta": beta.literal, "y": _label(y), "psi": psi.describe(), "N": N,
        "samples": samples, "seed": seed, "mode": mode,
        "resolution_bits": resolution, "tail_threshold": tail_threshold,
        "oracle": "lebesgue" if integer_base else "no oracle",
    }
    return SimulationStats(
        params=params, mean_hits=mean, oracle_mean=oracle,
        frac_ge_k={k: ge_counts[k] / samples for k in ks},
        tail_frac=tail_count / samples, uncertain_count=uncertain_total,
        sample_std=math.sqrt(var), per_sample=tuple(per_sample))


# ---------------------------------------------------------------------------
# The y-grid and the rectangle cover.


@dataclass(frozen=True)
class GridCell:
    """One cell [i*w, (i+1)*w] intersected with [0,1], w = Psi(n)/beta**n."""

    n: int
    i: int
    lo: object
    hi: object

    def lo_float(self) -> float:
        return value_float(self.lo)

    def hi_float(self) -> float:
        return value_float(self.hi)

    def width_float(self) -> float:
        return self.hi_float() - self.lo_float()


def _cell_ratio(beta: Beta, n: int, psi: TargetFn, cfg: PrecisionCfg):
    """Psi(n)/beta**n as an exact value (Fraction or field element) or an
    enclosure, plus the certified floor of its reciprocal (the last cell
    index of the covering of [0,1])."""
    psi_exact = psi.exact(n, beta)
    if psi_exact is not None and beta.exact_fraction is not None:
        ratio = psi_exact / beta.exact_fraction ** n
        K = _floor_fraction(1 / ratio)
        return ratio, K
    if psi_exact is not None and beta.is_exact:
        ratio = beta.pow_value(-n) * psi_exact
        K = ratio.inverse().floor()
        return ratio, K
    def ratio_iv(bits: int) -> Interval:
        psi_iv = psi.value_interval(n, beta, bits)
        bpow = iv_pow_uint(beta.enclosure(bits + 16), n)
        return iv_div(psi_iv, bpow)
    K = certified_floor(lambda bits: iv_recip(ratio_iv(bits)), cfg,
                        what="beta**n / Psi(n)")
    return Enclosure(ratio_iv, name=f"psi({n})/beta**{n}"), K


def grid_cells(beta: Beta, n: int, psi: TargetFn,
               budget: int | None = 1_000_000,
               cfg: PrecisionCfg = DEFAULT_CFG) -> list[GridCell]:
    """The covering of [0,1] by consecutive cells of width Psi(n)/beta**n,
    indices 0..floor(beta**n/Psi(n))."""
    ratio, K = _cell_ratio(beta, n, psi, cfg)
    if budget is not None and K + 1 > budget:
        raise BudgetExceeded(f"{K + 1} grid cells exceed budget {budget}",
                             projected=K + 1)
    one = Fraction(1)
    cells = []
    for i in range(K + 1):
        if isinstance(ratio, Enclosure):
            iv = ratio.eval(max(cfg.working, 96))
            lo = iv_scale(iv, i)
            hi_raw = iv_scale(iv, i + 1)
            hi = (min(hi_raw[0], one), min(hi_raw[1], one))
        else:
            lo = i * ratio
            hi_raw = (i + 1) * ratio
            hi = hi_raw if compare_values(hi_raw, one) <= 0 else _like(ratio, one)
        cells.append(GridCell(n, i, lo, hi))
    return cells


def _like(template, value: Fraction):
    """The Fraction `value` represented in the same exact type as template."""
    if isinstance(template, QuadElem):
        return QuadElem(value, 0, template.field)
    return value


@dataclass(frozen=True)
class Rect:
    word: tuple[int, ...]
    i: int
    x_lo: object
    x_hi: object
    y_lo: object
    y_hi: object


class RectCover:
    """The cover of the depth-n planar hit set by rectangles indexed by an
    admissible word and a grid cell.

    For word w and index i the rectangle is centred at
    center = value(w) + (i * Psi(n)/beta**n) * beta**-n, with half-width
    2*Psi(n)/beta**n on the x side, times the cell J_n(i).  Each rectangle
    can be covered by 64 cubes of diameter Psi(n)/beta**n, and that count is
    exposed for the dimension estimates.
    """

    cubes_per_rectangle = 64

    def __init__(self, beta: Beta, n: int, psi: TargetFn,
                 budget: int | None = 5_000_000,
                 cfg: PrecisionCfg = DEFAULT_CFG):
        self.beta = beta
        self.n = n
        self.psi = psi
        self.cfg = cfg
        self.ratio, self.K = _cell_ratio(beta, n, psi, cfg)
        self.word_count = count_admissible(beta, n, cfg=cfg).count
        self.cardinality = self.word_count * (self.K + 1)
        if budget is not None and self.cardinality > budget:
            raise BudgetExceeded(
                f"{self.cardinality} rectangles exceed budget {budget}",
                projected=self.cardinality)

    @property
    def total_cubes(self) -> int:
        return self.cardinality * self.cubes_per_rectangle

    def x_width(self):
        """Exact x-side width 4*Psi(n)/beta**n."""
        if isinstance(self.ratio, Enclosure):
            return iv_scale(self.ratio.eval(96), 4)
        return 4 * self.ratio

    def rect(self, w, i: int) -> Rect:
        if not 0 <= i <= self.K:
            raise ValueError(f"cell index {i} outside 0..{self.K}")
        left = word_value(w, self.beta, self.cfg)
        if not isinstance(self.ratio, Enclosure):
            binv = (self.beta.exact_fraction ** -self.n
                    if self.beta.exact_fraction is not None
                    else self.beta.pow_value(-self.n))
            center = left + (i * self.ratio) * binv
            half = 2 * self.ratio
            one = _like(self.ratio, Fraction(1))
            hi_raw = (i + 1) * self.ratio
            y_hi = hi_raw if compare_values(hi_raw, Fraction(1)) <= 0 else one
            return Rect(tuple(w), i, center - half, center + half,
                        i * self.ratio, y_hi)
        bits = max(self.cfg.working, 96)
        r_iv = self.ratio.eval(bits)
        left_iv = value_interval(left, bits)
        binv_iv = iv_recip(iv_pow_uint(self.beta.enclosure(bits), self.n))
        center = iv_add(left_iv, iv_mul(iv_scale(r_iv, i), binv_iv))
        half = iv_scale(r_iv, 2)
        return Rect(tuple(w), i, iv_sub(center, half), iv_add(center, half),
                    iv_scale(r_iv, i), iv_scale(r_iv, i + 1))

    def locate(self, x, y) -> Rect:
        """The rectangle that the cover construction assigns to the pair:
        the digit word of x and the grid cell of y."""
        w = digits(x, self.beta, self.n, self.cfg).digits
        if isinstance(self.ratio, Fraction):
            i = min(_floor_fraction(Fraction(y) / self.ratio), self.K)
        elif isinstance(self.ratio, QuadElem):
            i = min((self.ratio.inverse() * Fraction(y)).floor(), self.K)
        else:
            i = min(certified_floor(
                lambda bits: iv_div(value_interval(y, bits),
                                    self.ratio.eval(bits)),
                self.cfg, what="y / cell width"), self.K)
        return self.rect(w, i)

    def contains(self, x, y, cfg: PrecisionCfg | None = None) -> bool:
        """Whether (x, y) lies in its assigned rectangle (open on the x
        side, closed cell on the y side)."""
        cfg = cfg or self.cfg
        r = self.locate(x, y)
        if compare_values(x, r.x_lo, cfg) <= 0:
            return False
        if compare_values(x, r.x_hi, cfg) >= 0:
            return False
        if compare_values(y, r.y_lo, cfg) < 0:
            return False
        return compare_values(y, r.y_hi, cfg) <= 0

    def rectangles(self, budget: int | None = 2_000_000):
        """Materialize every rectangle in lexicographic order (word, then
        cell index); guarded by its own budget."""
        from .admissibility import enumerate_admissible

        if budget is not None and self.cardinality > budget:
            raise BudgetExceeded(
                f"{self.cardinality} rectangles exceed budget {budget}",
                projected=self.cardinality)
        for w in enumerate_admissible(self.beta, self.n, None, self.cfg):
            for i in range(self.K + 1):
                yield self.rect(w, i)

    def to_json(self) -> dict:
        return {
            "beta": self.beta.literal, "n": self.n, "psi": self.psi.describe(),
            "cells": self.K + 1, "words": self.word_count,
            "cardinality": self.cardinality,
            "cubes_per_rectangle": self.cubes_per_rectangle,
            "total_cubes": self.total_cubes,
            "x_width": value_float(self.x_width()),
        }


def rectangle_cover(beta: Beta, n: int, psi: TargetFn,
                    budget: int | None = 5_000_000,
                    cfg: PrecisionCfg = DEFAULT_CFG) -> RectCover:
    return RectCover(beta, n, psi, budget, cfg)
