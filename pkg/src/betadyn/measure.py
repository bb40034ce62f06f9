"""Dichotomy criteria and dimension estimates.

The series classifiers decide convergence analytically for the closed
parametric families by exact exponent arithmetic (convergence of a series
is not decidable from finitely many terms, so tabulated inputs only get
partial sums and an undetermined verdict).  The box-counting estimator
turns the natural covers of the target sets into a log-log regression.
The greedy disjoint selection extracts, from a family of blown-up balls
filling an interval, a disjoint subfamily whose mass is at least a fifth
of a fifth of the interval length.
"""

from __future__ import annotations

import bisect
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .admissibility import count_admissible, enumerate_admissible
from .beta import Beta, compare_values
from .certified import DEFAULT_CFG, PrecisionCfg, iv_point
from .cylinders import cylinder
from .errors import (
    BudgetExceeded,
    DegenerateRange,
    HypothesisViolated,
    PreconditionUnverifiable,
)
from .functions import DimensionFn, TargetFn, _frac

__all__ = [
    "SeriesReport",
    "TermStructure",
    "term_structure",
    "series_1d",
    "series_2d",
    "predicted_hausdorff",
    "BoxDimReport",
    "box_dimension_estimate",
    "Ball",
    "BallFamily",
    "dyadic_family",
    "ball_family_from_targets",
    "Selection",
    "select_disjoint_blowups",
]


# ---------------------------------------------------------------------------
# Series classifiers.


@dataclass(frozen=True)
class TermStructure:
    """Exact shape of the series term f(Psi(n)/beta**n) * beta**n:

        C**s * beta**(n*beta_rate) * n**(-poly_drag) * (n log beta)**(-log_drag)
             * (log(1/r_n))**log_blow

    with r_n = Psi(n)/beta**n.  All exponents are exact rationals, so the
    verdict reduces to sign checks.
    """

    s: Fraction
    beta_rate: Fraction   # 1 - s*(1 + tau)
    poly_drag: Fraction   # a*s
    log_drag: Fraction    # c*s
    log_blow: Fraction    # b
    const: Fraction       # C of the speed family

    @property
    def tail_exponent(self) -> Fraction:
        """On the critical line beta_rate == 0 the term behaves like
        K * n**tail_exponent."""
        return self.log_blow - self.poly_drag - self.log_drag

    def identically_one(self) -> bool:
        return (self.const == 1 and self.log_blow == 0 and self.beta_rate == 0
                and self.poly_drag == 0 and self.log_drag == 0 and self.s >= 0)

    def verdict(self) -> str:
        if self.beta_rate < 0:
            return "convergent"
        if self.beta_rate > 0:
            return "divergent"
        return "convergent" if self.tail_exponent < -1 else "divergent"


def term_structure(f: DimensionFn, psi: TargetFn) -> TermStructure:
    if not (f.is_parametric and psi.is_parametric):
        raise PreconditionUnverifiable("tabulated inputs have no exact term shape")
    s = f.s
    b = f.b if f.b is not None else Fraction(0)
    return TermStructure(
        s=s,
        beta_rate=1 - s * (1 + psi.tau),
        poly_drag=psi.a * s,
        log_drag=psi.c * s,
        log_blow=b,
        const=psi.C,
    )


@dataclass(frozen=True)
class SeriesReport:
    theorem: int
    verdict: str            # convergent | divergent | undetermined
    measure_verdict: str    # zero | full | undetermined
    checkpoints: tuple[tuple[int, float], ...]
    f: str
    psi: str
    beta: str
    psi_shrinks: bool | None

    def to_json(self) -> dict:
        return {
            "theorem": self.theorem,
            "verdict": self.verdict,
            "measure_verdict": self.measure_verdict,
            "checkpoints": [{"n": n, "partial_sum": s} for n, s in self.checkpoints],
            "f": self.f, "psi": self.psi, "beta": self.beta,
            "psi_shrinks": self.psi_shrinks,
        }

    @classmethod
    def from_json(cls, data: dict) -> "SeriesReport":
        return cls(
            theorem=data["theorem"], verdict=data["verdict"],
            measure_verdict=data["measure_verdict"],
            checkpoints=tuple((c["n"], c["partial_sum"])
                              for c in data["checkpoints"]),
            f=data["f"], psi=data["psi"], beta=data["beta"],
            psi_shrinks=data["psi_shrinks"],
        )


_VERDICT_TO_MEASURE = {"convergent": "zero", "divergent": "full",
                       "undetermined": "undetermined"}


def _log_beta(beta: Beta) -> float:
    lo, hi = beta.enclosure(64)
    return math.log(float((lo + hi) / 2))


def _log_psi(psi: TargetFn, n: int, lb: float) -> float:
    if not psi.is_parametric:
        return math.log(float(psi.table[n - 1]))
    out = math.log(float(psi.C)) - float(psi.tau) * n * lb
    if psi.a:
        out -= float(psi.a) * math.log(n)
    if psi.c:
        out -= float(psi.c) * math.log(n * lb)
    return out


def _log_f(f: DimensionFn, log_r: float) -> float:
    if f.family == "tabulated":
        return math.log(max(f._table_lookup(Fraction(math.exp(log_r))), 1e-300))
    out = float(f.s) * log_r
    if f.family == "power-log":
        if log_r >= 0:
            raise ValueError("power-log dimension function needs r < 1; "
                             "the speed exceeds beta**n here")
        out += float(f.b) * math.log(-log_r)
    return out


def _checkpoint_grid(N: int) -> list[int]:
    grid = sorted({1, 2, 5} | {min(N, 10 * 2 ** k) for k in range(20)} | {N})
    return [n for n in grid if n <= N]


def _partial_sums(term_log, N: int) -> tuple[tuple[int, float], ...]:
    marks = _checkpoint_grid(N)
    out = []
    total = 0.0
    j = 0
    for n in range(1, N + 1):
        tl = term_log(n)
        total += math.exp(tl) if tl < 700 else math.inf
        if j < len(marks) and n == marks[j]:
            out.append((n, total))
            j += 1
    return tuple(out)


def series_1d(f: DimensionFn, psi: TargetFn, beta: Beta, N: int = 100) -> SeriesReport:
    """Classifier for sum over n of f(Psi(n)/beta**n) * beta**n.

    The one-sided/two-sided point target set has generalized Hausdorff
    measure zero when this converges and full when it diverges, provided
    r**-1 f(r) is monotone; that monotonicity holds for the parametric
    families and cannot be checked for tabulated input, which therefore
    yields an undetermined verdict.
    """
    lb = _log_beta(beta)

    def term_log(n: int) -> float:
        log_r = _log_psi(psi, n, lb) - n * lb
        return _log_f(f, log_r) + n * lb

    checkpoints = _partial_sums(term_log, N)
    if f.is_parametric and psi.is_parametric:
        verdict = term_structure(f, psi).verdict()
    else:
        verdict = "undetermined"
    return SeriesReport(
        theorem=1, verdict=verdict, measure_verdict=_VERDICT_TO_MEASURE[verdict],
        checkpoints=checkpoints, f=f.describe(), psi=psi.describe(),
        beta=beta.literal, psi_shrinks=psi.tends_to_zero)


def series_2d(g: DimensionFn, psi: TargetFn, beta: Beta, N: int = 100) -> SeriesReport:
    """Classifier for sum over n of g(Psi(n)/beta**n) * beta**(2n) / Psi(n).

    Term for term this equals the point-target series with f(r) = g(r)/r,
    which is how the verdict is decided; the partial sums are computed from
    the pair formula directly.  Requires r**-2 g(r) monotone (true for the
    parametric families).
    """
    lb = _log_beta(beta)

    def term_log(n: int) -> float:
        lpsi = _log_psi(psi, n, lb)
        log_r = lpsi - n * lb
        return _log_f(g, log_r) + 2 * n * lb - lpsi

    checkpoints = _partial_sums(term_log, N)
    if g.is_parametric and psi.is_parametric:
        reduced = DimensionFn(g.family if g.family == "power-log" else "power",
                              s=g.s - 1, b=g.b, declared_dim=1)
        verdict = term_structure(reduced, psi).verdict()
    else:
        verdict = "undetermined"
    return SeriesReport(
        theorem=2, verdict=verdict, measure_verdict=_VERDICT_TO_MEASURE[verdict],
        checkpoints=checkpoints, f=g.describe(), psi=psi.describe(),
        beta=beta.literal, psi_shrinks=psi.tends_to_zero)


def predicted_hausdorff(tau, ambient: str = "1d") -> Fraction:
    """Dimension of the target set at polynomial speed exponent tau:
    1/(1+tau) for the point set, 1 + 1/(1+tau) for the pair set."""
    tau = _frac(tau)
    if tau < 0:
        raise ValueError("tau must be >= 0")
    base = Fraction(1, 1 + tau)
    if ambient in ("1d", "1D", 1):
        return base
    if ambient in ("2d", "2D", 2):
        return 1 + base
    raise ValueError("ambient must be '1d' or '2d'")


# ---------------------------------------------------------------------------
# Box-counting estimates.


@dataclass(frozen=True)
class BoxDimReport:
    mode: str
    beta: str
    tau: str
    slope: float
    residual: float
    levels: tuple[tuple[int, float, int], ...]  # (n, delta, count)

    def csv_rows(self):
        yield ("n", "delta", "count")
        for n, delta, count in self.levels:
            yield (n, delta, count)
        yield ("slope", self.slope, self.residual)

    def to_json(self) -> dict:
        return {"mode": self.mode, "beta": self.beta, "tau": self.tau,
                "slope": self.slope, "residual": self.residual,
                "levels": [{"n": n, "delta": d, "count": c}
                           for n, d, c in self.levels]}

    @classmethod
    def from_json(cls, data: dict) -> "BoxDimReport":
        return cls(mode=data["mode"], beta=data["beta"], tau=data["tau"],
                   slope=data["slope"], residual=data["residual"],
                   levels=tuple((lv["n"], lv["delta"], lv["count"])
                                for lv in data["levels"]))


def _window_radius_value(beta: Beta, n: int, tau: Fraction, cfg: PrecisionCfg):
    """beta**(-n(1+tau)), exact in the field when the exponent is integral."""
    expo = (1 + tau) * n
    if expo.denominator == 1 and beta.is_exact:
        return beta.pow_value(-expo.numerator)
    from .certified import Enclosure, pow_interval

    return Enclosure(
        lambda bits: pow_interval(beta.enclosure(bits + 16), -expo, bits),
        name="window radius")


def _nonempty_window_count(beta: Beta, y: Fraction, n: int, tau: Fraction,
                           budget: int | None, cfg: PrecisionCfg) -> int:
    """Number of order-n cylinders whose two-sided target window
    (anchor - d, anchor + d), d = beta**(-n(1+tau)), meets the cylinder."""
    if y == 0 or beta.kind == "integer":
        # anchor - right = (y - 1) * beta**-n - (length - beta**-n) < 0 for an
        # integer base (full cylinders), and anchor = left < right when y = 0,
        # so every cylinder's window is nonempty.
        return count_admissible(beta, n, cfg=cfg).count
    count = 0
    binv = beta.pow_value(-n)
    d_val = _window_radius_value(beta, n, tau, cfg)
    for w in enumerate_admissible(beta, n, budget, cfg):
        cyl = cylinder(beta, w, cfg)
        anchor = cyl.left + y * binv
        gap = cyl.right() - anchor
        # nonempty iff anchor - d < right, i.e. gap > -d
        if compare_values(gap, Fraction(0)) > 0:
            count += 1
        elif compare_values(-gap, d_val, cfg) < 0:
            count += 1
    return count


def box_dimension_estimate(beta: Beta, y, tau, n_range, mode: str = "1d",
                           budget: int | None = 2_000_000,
                           cfg: PrecisionCfg = DEFAULT_CFG) -> BoxDimReport:
    """Least-squares slope of log(cover count) against log(1/diameter) for
    the natural covers of the target sets at speed Psi(n) = beta**(-n*tau).

    1d counts the cylinders whose target window is nonempty (cover elements
    of diameter Psi(n)/beta**n); 2d counts the 64-cube refinements of the
    rectangle cover.  The residual is reported so slow convergence to the
    predicted dimension stays visible.
    """
    tau = _frac(tau)
    y = Fraction(y)
    ns = sorted(set(int(n) for n in n_range))
    if len(ns) < 3:
        raise DegenerateRange("need at least 3 levels for a regression")
    lb = _log_beta(beta)
    levels = []
    for n in ns:
        log_delta = -n * float(1 + tau) * lb
        if mode in ("1d", "1D"):
            count = _nonempty_window_count(beta, y, n, tau, budget, cfg)
        elif mode in ("2d", "2D"):
            # Closed-form cover size; nothing is materialized here.
            words = count_admissible(beta, n, cfg=cfg).count
            cells = _grid_cell_count(beta, n, tau, cfg)
            count = 64 * words * cells
        else:
            raise ValueError("mode must be '1d' or '2d'")
        levels.append((n, math.exp(log_delta), count))
    xs = np.array([n * float(1 + tau) * lb for n, _, _ in levels])
    ys = np.array([math.log(c) for _, _, c in levels])
    slope, intercept = np.polyfit(xs, ys, 1)
    residual = float(np.sqrt(np.mean((ys - (slope * xs + intercept)) ** 2)))
    return BoxDimReport(mode=mode.lower(), beta=beta.literal, tau=str(tau),
                        slope=float(slope), residual=residual,
                        levels=tuple(levels))


def _grid_cell_count(beta: Beta, n: int, tau: Fraction, cfg: PrecisionCfg) -> int:
    """floor(beta**n / Psi(n)) + 1 for Psi(n) = beta**(-n*tau)."""
    expo = (1 + tau) * n
    bf = beta.exact_fraction
    if bf is not None and expo.denominator == 1:
        val = bf ** expo.numerator
        return val.numerator // val.denominator + 1
    from .certified import certified_floor, pow_interval

    def ratio(bits: int):
        return pow_interval(beta.enclosure(bits + 16), expo, bits)

    return certified_floor(ratio, cfg, what="beta**(n(1+tau))") + 1


# ---------------------------------------------------------------------------
# Greedy disjoint selection of blown-up balls.


@dataclass(frozen=True)
class Ball:
    """A half-open interval [x, x+r); its f-blowup is the open ball of
    radius f(r) centred at x."""

    x: Fraction
    r: Fraction

    def __post_init__(self):
        if self.r <= 0:
            raise ValueError("radius must be positive")


@dataclass(frozen=True)
class BallFamily:
    balls: tuple[Ball, ...]

    def __len__(self):
        return len(self.balls)

    def __getitem__(self, i):
        return self.balls[i]


def dyadic_family(gen_lo: int, gen_hi: int) -> BallFamily:
    """All dyadic intervals [k 2**-m, (k+1) 2**-m) for gen_lo <= m <= gen_hi,
    coarse generations first (radii shrink along the index)."""
    balls = []
    for m in range(gen_lo, gen_hi + 1):
        r = Fraction(1, 1 << m)
        for k in range(1 << m):
            balls.append(Ball(Fraction(k, 1 << m), r))
    return BallFamily(tuple(balls))


def ball_family_from_targets(beta: Beta, y, psi: TargetFn, n_values,
                             budget: int | None = 200_000,
                             cfg: PrecisionCfg = DEFAULT_CFG) -> BallFamily:
    """The anchored target windows [anchor, anchor + radius) of every
    admissible word at the given depths, skipping empty ones.  This is the
    ball system the mass-transference argument feeds to the selection."""
    from .cylinders import target_interval

    balls = []
    for n in n_values:
        psi_n = psi.exact(n, beta)
        if psi_n is None:
            raise ValueError("speed must be exactly evaluable here")
        for w in enumerate_admissible(beta, n, budget, cfg):
            ti = target_interval(beta, w, Fraction(y), psi_n, cfg=cfg)
            radius = ti.radius
            if isinstance(radius, Fraction) and radius > 0:
                anchor = ti.anchor
                if isinstance(anchor, Fraction):
                    balls.append(Ball(anchor, radius))
    return BallFamily(tuple(balls))


@dataclass(frozen=True)
class Selection:
    indices: tuple[int, ...]          # 1-based indices into the family
    blowups: tuple[tuple[Fraction, Fraction], ...]
    mass: Fraction                    # certified lower bound on sum f(r)
    bound: Fraction                   # |B| / 20
    cover_fraction: float

    @property
    def ok(self) -> bool:
        return self.mass >= self.bound

    def to_json(self) -> dict:
        return {"selected": list(self.indices),
                "mass": float(self.mass), "bound": float(self.bound),
                "cover_fraction": self.cover_fraction, "ok": self.ok}

    @classmethod
    def from_json(cls, data: dict) -> "Selection":
        return cls(indices=tuple(data["selected"]), blowups=(),
                   mass=Fraction(data["mass"]), bound=Fraction(data["bound"]),
                   cover_fraction=data["cover_fraction"])


def _f_bounds(f: DimensionFn, r: Fraction, bits: int = 128) -> tuple[Fraction, Fraction]:
    lo, hi = f.value_interval(iv_point(r), bits)
    return lo, hi


def select_disjoint_blowups(family: BallFamily, f: DimensionFn, B,
                            G: int = 1, min_cover_fraction: float = 0.9,
                            cfg: PrecisionCfg = DEFAULT_CFG) -> Selection:
    """Greedy Vitali-style selection: among the f-blowups of family members
    with index >= G that lie inside B, sort by decreasing blown radius and
    keep every ball disjoint from all kept ones.

    Postcondition (checked, not assumed): the kept blowups are pairwise
    disjoint, inside B, and their mass sum f(r) is at least |B|/20.  A
    family whose blowups do not essentially fill B, or a greedy mass below
    the bound, raises HypothesisViolated instead of returning silently.
    """
    blo, bhi = Fraction(B[0]), Fraction(B[1])
    if bhi <= blo:
        raise ValueError("selection interval is empty")
    if G < 1:
        raise ValueError("start index G must be >= 1")
    length = bhi - blo
    candidates = []
    for idx in range(G, len(family) + 1):
        ball = family[idx - 1]
        f_lo, f_hi = _f_bounds(f, ball.r)
        if f_hi <= 0:
            continue
        if ball.x - f_hi >= blo and ball.x + f_hi <= bhi:
            candidates.append((idx, ball, f_lo, f_hi))
    # Empirical fullness check of the blowup union inside B.
    union = _union_measure([(b.x - flo, b.x + flo) for _, b, flo, _ in candidates])
    cover_fraction = float(union / length)
    if cover_fraction < min_cover_fraction:
        raise HypothesisViolated(
            f"blowups cover only {cover_fraction:.3f} of the interval "
            f"(need {min_cover_fraction})")
    order = sorted(candidates, key=lambda t: (-t[3], t[1].x, t[0]))
    kept_lo: list[Fraction] = []   # sorted left endpoints of kept blowups
    kept: list[tuple[int, Fraction, Fraction, Fraction]] = []
    for idx, ball, f_lo, f_hi in order:
        lo, hi = ball.x - f_hi, ball.x + f_hi
        pos = bisect.bisect_left(kept_lo, lo)
        if pos > 0:
            _, plo, phi, _ = kept[pos - 1]
            if plo < hi and lo < phi:
                continue
        if pos < len(kept):
            _, nlo, nhi, _ = kept[pos]
            if nlo < hi and lo < nhi:
                continue
        kept_lo.insert(pos, lo)
        kept.insert(pos, (idx, lo, hi, f_lo))
    mass = sum((f_lo for _, _, _, f_lo in kept), Fraction(0))
    bound = length / 20
    selection = Selection(
        indices=tuple(idx for idx, _, _, _ in sorted(kept)),
        blowups=tuple((lo, hi) for _, lo, hi, _ in kept),
        mass=mass, bound=bound, cover_fraction=cover_fraction)
    if not selection.ok:
        raise HypothesisViolated(
            f"greedy mass {float(mass):.6f} below the bound {float(bound):.6f}")
    return selection


def _union_measure(intervals) -> Fraction:
    segs = sorted((lo, hi) for lo, hi in intervals if hi > lo)
    total = Fraction(0)
    cur_lo = cur_hi = None
    for lo, hi in segs:
        if cur_hi is None or lo > cur_hi:
            if cur_hi is not None:
                total += cur_hi - cur_lo
            cur_lo, cur_hi = lo, hi
        else:
            cur_hi = max(cur_hi, hi)
    if cur_hi is not None:
        total += cur_hi - cur_lo
    return total
