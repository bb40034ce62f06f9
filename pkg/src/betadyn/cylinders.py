"""Cylinder geometry: endpoints, lengths, the partition of [0,1], and the
clipped target intervals sitting inside a cylinder.

A cylinder of order n is the set of points whose first n digits equal a
given admissible word.  Its left endpoint is the word's value
sum(d_i beta**-i); its length is the distance to the left endpoint of the
lexicographic successor word (1 minus the endpoint for the last word),
which is justified because lexicographic order matches spatial order and
the cylinders of order n tile [0,1].  This sidesteps the digit-by-digit
case analysis of the exact length formula while producing the same values.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction

from .admissibility import Follower, Word, is_admissible
from .beta import (
    Beta,
    QuadElem,
    compare_values,
    expansion_of_one,
    value_float,
    value_interval,
    word_value,
)
from .certified import (
    DEFAULT_CFG,
    PrecisionCfg,
    iv_add,
    iv_mul,
    iv_point,
    iv_scale,
    iv_sub,
)
from .errors import InadmissibleWord, PreconditionUnverifiable
from .functions import DimensionFn

__all__ = [
    "Cylinder",
    "cylinder",
    "lex_successor",
    "partition_check",
    "PartitionReport",
    "TargetInterval",
    "target_interval",
    "blowup_inequality_check",
    "BlowupCheckReport",
    "random_admissible_word",
]


@dataclass(frozen=True)
class Cylinder:
    """One order-n cylinder: its word, exact left endpoint, exact length."""

    word: Word
    beta: Beta
    left: object      # Fraction | QuadElem | Interval
    length: object
    is_last: bool

    @property
    def order(self) -> int:
        return len(self.word)

    @property
    def exact(self) -> bool:
        return self.beta.is_exact

    def right(self):
        if isinstance(self.left, tuple):
            return iv_add(self.left, self.length)
        return self.left + self.length

    def left_float(self) -> float:
        return value_float(self.left)

    def length_float(self) -> float:
        return value_float(self.length)

    def contains(self, x, cfg: PrecisionCfg = DEFAULT_CFG) -> bool:
        """Certified membership; the last cylinder is closed at 1."""
        lo = compare_values(x, self.left, cfg, "point vs left endpoint")
        if lo < 0:
            return False
        hi = compare_values(x, self.right(), cfg, "point vs right endpoint")
        return hi <= 0 if self.is_last else hi < 0


def lex_successor(beta: Beta, w: Word, cfg: PrecisionCfg = DEFAULT_CFG) -> Word | None:
    """Smallest admissible word strictly after w of the same length, or None
    for the maximal word (the prefix of the expansion-of-one sequence).
    Any admissible prefix extends minimally by zeros, so the successor is
    found by bumping the rightmost position that still has headroom."""
    n = len(w)
    star = expansion_of_one(beta, n, cfg)
    fol = Follower(star)
    states = [0]
    for d in w:
        nxt = fol.step(states[-1], d)
        if nxt is None:
            raise InadmissibleWord(f"word {w} is not admissible for {beta.literal}")
        states.append(nxt)
    for i in range(n - 1, -1, -1):
        cap = fol.cap(states[i])
        if w[i] < cap:
            return w[:i] + (w[i] + 1,) + (0,) * (n - i - 1)
    return None


def cylinder(beta: Beta, w, cfg: PrecisionCfg = DEFAULT_CFG) -> Cylinder:
    """Build the cylinder of an admissible word."""
    w = tuple(int(d) for d in w)
    if not is_admissible(w, beta, cfg):
        raise InadmissibleWord(f"word {w} is not admissible for {beta.literal}")
    left = word_value(w, beta, cfg)
    succ = lex_successor(beta, w, cfg)
    if succ is None:
        one: object = Fraction(1)
        if isinstance(left, QuadElem):
            one = beta.element(1, 0)
        elif isinstance(left, tuple):
            one = iv_point(Fraction(1))
        length = iv_sub(one, left) if isinstance(left, tuple) else one - left
        return Cylinder(w, beta, left, length, True)
    nxt = word_value(succ, beta, cfg)
    length = iv_sub(nxt, left) if isinstance(left, tuple) else nxt - left
    return Cylinder(w, beta, left, length, False)


@dataclass(frozen=True)
class PartitionReport:
    beta: str
    n: int
    count: int
    total_length: float
    total_defect: float      # |sum of lengths - 1|, certified upper bound
    max_gap: float
    max_overlap: float
    enclosure_width: float   # worst endpoint enclosure width (0 for exact kinds)
    exact: bool

    def to_json(self) -> dict:
        return {
            "beta": self.beta, "n": self.n, "count": self.count,
            "total_length": self.total_length, "total_defect": self.total_defect,
            "max_gap": self.max_gap, "max_overlap": self.max_overlap,
            "enclosure_width": self.enclosure_width, "exact": self.exact,
        }

    @classmethod
    def from_json(cls, data: dict) -> "PartitionReport":
        return cls(**data)


def partition_check(beta: Beta, n: int, budget: int | None = 1_000_000,
                    cfg: PrecisionCfg = DEFAULT_CFG) -> PartitionReport:
    """Verify that the order-n cylinders tile [0,1]: left endpoints strictly
    increase along lexicographic order, consecutive cylinders abut, and the
    lengths sum to 1 (all up to enclosure width for an enclosed base)."""
    from .admissibility import enumerate_admissible

    exact = beta.is_exact
    count = 0
    prev_cyl: Cylinder | None = None
    total = Fraction(0) if exact else iv_point(Fraction(0))
    max_gap = Fraction(0)
    max_overlap = Fraction(0)
    worst_width = Fraction(0)
    first_left = None
    for w in enumerate_admissible(beta, n, budget, cfg):
        cyl = cylinder(beta, w, cfg)
        count += 1
        if first_left is None:
            first_left = cyl.left
        if exact:
            total = total + cyl.length
        else:
            total = iv_add(total, cyl.length)
            worst_width = max(worst_width,
                              value_interval(cyl.left, 96)[1] - value_interval(cyl.left, 96)[0])
        if prev_cyl is not None:
            # Spatial order must match lexicographic order.
            if compare_values(prev_cyl.left, cyl.left, cfg, "left endpoints") >= 0:
                raise AssertionError(
                    f"left endpoints not increasing at {prev_cyl.word} -> {cyl.word}")
            gap = (iv_sub(value_interval(cyl.left, 96), value_interval(prev_cyl.right(), 96))
                   if not exact else cyl.left - prev_cyl.right())
            if exact:
                if gap > 0:
                    max_gap = max(max_gap, Fraction(gap) if isinstance(gap, Fraction) else _to_frac(gap))
                elif gap < 0:
                    max_overlap = max(max_overlap, -_to_frac(gap))
            else:
                lo, hi = gap
                if hi > 0:
                    max_gap = max(max_gap, hi)
                if lo < 0:
                    max_overlap = max(max_overlap, -lo)
        prev_cyl = cyl
    if prev_cyl is None:
        raise ValueError("no admissible words")
    if not prev_cyl.is_last:
        raise AssertionError("lexicographically final word not marked last")
    if exact:
        defect = abs(_to_frac(total) - 1)
        total_f = float(_to_frac(total)) if isinstance(total, Fraction) else value_float(total)
        defect_f = float(defect)
    else:
        lo, hi = total
        defect_f = float(max(abs(lo - 1), abs(hi - 1)))
        total_f = value_float(total)
    return PartitionReport(
        beta=beta.literal, n=n, count=count, total_length=total_f,
        total_defect=defect_f, max_gap=float(max_gap), max_overlap=float(max_overlap),
        enclosure_width=float(worst_width), exact=exact)


def _to_frac(v) -> Fraction:
    if isinstance(v, Fraction):
        return v
    if isinstance(v, QuadElem):
        if v.b != 0:
            lo, hi = v.enclosure(128)
            return (lo + hi) / 2
        return v.a
    return v


@dataclass(frozen=True)
class TargetInterval:
    """The one-sided window [anchor, anchor + radius) carved out of a
    cylinder by a shrinking target, with its f-blown counterpart."""

    word: Word
    y: Fraction
    anchor: object         # left + y * beta**-n
    radius: object         # min(right - anchor, psi_n * beta**-n), clipped at 0
    f_radius: object = None
    right_end: object = None

    def anchor_float(self) -> float:
        return value_float(self.anchor)

    def radius_float(self) -> float:
        return value_float(self.radius)


def target_interval(beta: Beta, w, y, psi_n, f: DimensionFn | None = None,
                    cfg: PrecisionCfg = DEFAULT_CFG) -> TargetInterval:
    """Anchor and clipped radii of the target window inside the cylinder of
    w.  psi_n is the speed value at this depth (a positive rational)."""
    y = Fraction(y)
    if not 0 <= y < 1:
        raise ValueError("target point must lie in [0,1)")
    psi_n = Fraction(psi_n)
    if psi_n <= 0:
        raise ValueError("speed value must be positive")
    cyl = cylinder(beta, w, cfg)
    n = cyl.order
    binv_n = beta.pow_value(-n)
    if isinstance(cyl.left, tuple):
        binv_iv = binv_n.eval(max(cfg.working, 2 * n + 64))
        anchor = iv_add(cyl.left, iv_scale(binv_iv, y))
        gap = iv_sub(cyl.right(), anchor)
        ratio = iv_scale(binv_iv, psi_n)
        radius = (_clip0(min(gap[0], ratio[0])), _clip0(min(gap[1], ratio[1])))
        f_radius = None
        if f is not None:
            fval = f.value_interval(ratio, max(cfg.working, 96))
            f_radius = (_clip0(min(gap[0], fval[0])), _clip0(min(gap[1], fval[1])))
        return TargetInterval(cyl.word, y, anchor, radius, f_radius, cyl.right())
    anchor = cyl.left + y * binv_n
    gap = cyl.right() - anchor
    ratio = psi_n * binv_n
    radius = _exact_clip_min(gap, ratio)
    f_radius = None
    if f is not None:
        f_radius = _fblown_radius(gap, ratio, f, cfg)
    return TargetInterval(cyl.word, y, anchor, radius, f_radius, cyl.right())


def _clip0(v):
    return v if v > 0 else Fraction(0)


def _exact_clip_min(gap, ratio):
    pick = gap if compare_values(gap, ratio) <= 0 else ratio
    sign = compare_values(pick, Fraction(0))
    if sign <= 0:
        return Fraction(0)
    return pick


def _fblown_radius(gap, ratio, f: DimensionFn, cfg: PrecisionCfg):
    """min(gap, f(ratio)) clipped at 0, keeping exact values exact where the
    comparison allows."""
    if compare_values(gap, Fraction(0)) <= 0:
        return Fraction(0)
    fval = f.as_enclosure(ratio)
    side = compare_values(gap, fval, cfg, "gap vs blown radius")
    return gap if side <= 0 else fval


@dataclass(frozen=True)
class BlowupCheckReport:
    beta: str
    f: str
    trials: int
    violations: tuple
    structural: int   # trials settled without numeric comparison
    numeric: int

    @property
    def ok(self) -> bool:
        return not self.violations

    def to_json(self) -> dict:
        return {"beta": self.beta, "f": self.f, "trials": self.trials,
                "violations": [list(v) for v in self.violations],
                "structural": self.structural, "numeric": self.numeric}


def random_admissible_word(beta: Beta, n: int, rng: random.Random,
                           cfg: PrecisionCfg = DEFAULT_CFG) -> Word:
    """A random admissible word of length n (uniform digit choice at each
    automaton state; not uniform over words, which is fine for sampling)."""
    fol = Follower(expansion_of_one(beta, n, cfg))
    state = 0
    out = []
    for _ in range(n):
        d = rng.randint(0, fol.cap(state))
        out.append(d)
        state = state + 1 if d == fol.cap(state) else 0
    return tuple(out)


def blowup_inequality_check(beta: Beta, f: DimensionFn, n_min: int, trials: int,
                            seed: int, span: int = 8,
                            cfg: PrecisionCfg = DEFAULT_CFG) -> BlowupCheckReport:
    """Property check: applying f to the clipped radius dominates the
    f-blown clipped radius, f(radius) >= f_radius, on random cylinders of
    order >= n_min with random target point and speed.

    Requires r**-1 f(r) -> infinity as r -> 0, decided symbolically on the
    family; refuses otherwise.
    """
    if f.ratio_direction(1) != "infinity":
        raise PreconditionUnverifiable(
            f"{f.describe()}: r**-1 f(r) does not tend to infinity")
    rng = random.Random(f"blowup:{seed}")
    violations = []
    structural = numeric = 0
    for _ in range(trials):
        n = n_min + rng.randrange(span)
        w = random_admissible_word(beta, n, rng, cfg)
        y = Fraction(rng.getrandbits(48), 1 << 48)
        psi_n = Fraction(rng.getrandbits(24) + 1, 1 << 24)
        ti = target_interval(beta, w, y, psi_n, f=f, cfg=cfg)
        verdict, used_numeric = _dominates(ti, beta, f, psi_n, cfg)
        if used_numeric:
            numeric += 1
        else:
            structural += 1
        if not verdict:
            violations.append((w, str(y), str(psi_n),
                               value_float(ti.radius), value_float(ti.f_radius)))
    return BlowupCheckReport(beta.literal, f.describe(), trials,
                             tuple(violations), structural, numeric)


def _dominates(ti: TargetInterval, beta: Beta, f: DimensionFn, psi_n: Fraction,
               cfg: PrecisionCfg) -> tuple[bool, bool]:
    """Decide f(radius) >= f_radius, structurally where possible.

    Structure: if f_radius == 0, trivially true.  If the radius equals the
    unclipped speed ratio, f(radius) = f(ratio) >= min(gap, f(ratio)).
    Otherwise radius = gap < ratio, and f_radius <= gap, so it is enough
    that f(gap) >= gap, which holds once gap <= 1 for families with
    r**-1 f(r) -> infinity and s <= 1.  Falls back to a certified numeric
    comparison only outside those cases.
    """
    if compare_values(ti.f_radius, Fraction(0)) == 0:
        return True, False
    n = len(ti.word)
    ratio = psi_n * beta.pow_value(-n) if beta.is_exact else None
    if ratio is not None and compare_values(ti.radius, ratio) == 0:
        return True, False
    if (f.family == "power" and f.s <= 1 and
            compare_values(ti.radius, Fraction(1)) <= 0):
        return True, False
    # Undecidable comparisons propagate as PrecisionExhausted rather than
    # masquerading as violations.
    return compare_values(f.as_enclosure(ti.radius), ti.f_radius, cfg,
                          "f(radius) vs blown radius") >= 0, True
