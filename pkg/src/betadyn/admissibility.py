"""Admissible digit words: recognition, enumeration, counting.

A word is admissible exactly when every suffix is lexicographically at most
the matching-length prefix of the expansion-of-one sequence (the classical
criterion of Parry and Renyi, with non-strict comparison so that ties are
admissible).  Recognition and enumeration both run on the follower-set
automaton whose state is the length of the longest suffix of the word read
so far that equals a prefix of that sequence; self-maximality of the
sequence collapses the transition on a strictly smaller digit to state 0,
so the automaton is a line with back edges.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator

from .beta import Beta, OneExpansion, expansion_of_one
from .certified import DEFAULT_CFG, PrecisionCfg
from .errors import BudgetExceeded

__all__ = [
    "Word",
    "lex_compare",
    "parse_word",
    "format_word",
    "is_admissible",
    "enumerate_admissible",
    "count_admissible",
    "AdmissibleCount",
]

Word = tuple[int, ...]

DEFAULT_BUDGET = 1_000_000


def parse_word(text: str) -> Word:
    text = text.strip()
    if not text:
        return ()
    return tuple(int(t) for t in text.split(","))


def format_word(w: Iterable[int]) -> str:
    return ",".join(str(d) for d in w)


def lex_compare(u: Iterable[int], v: Iterable[int]) -> int:
    """Standard lexicographic order: -1, 0 or 1.  Unequal lengths compare on
    the common prefix, then shorter-is-less."""
    u, v = tuple(u), tuple(v)
    for a, b in zip(u, v):
        if a != b:
            return -1 if a < b else 1
    if len(u) == len(v):
        return 0
    return -1 if len(u) < len(v) else 1


def _validate_word(w: Word):
    if not w:
        raise ValueError("empty word")
    for d in w:
        if not isinstance(d, int) or d < 0:
            raise ValueError(f"digits must be non-negative integers, got {d!r}")


class Follower:
    """Transition structure of the admissible-word automaton."""

    def __init__(self, star: OneExpansion):
        self.star = star

    def cap(self, state: int) -> int:
        """Largest digit allowed from `state`; the word dies above it."""
        return self.star.digit(state + 1)

    def step(self, state: int, d: int) -> int | None:
        cap = self.cap(state)
        if d == cap:
            return state + 1
        if d < cap:
            return 0
        return None


def is_admissible(w: Iterable[int], beta: Beta,
                  cfg: PrecisionCfg = DEFAULT_CFG) -> bool:
    """Whether some point of [0,1] realizes w as its first digits."""
    w = tuple(w)
    _validate_word(w)
    fol = Follower(expansion_of_one(beta, len(w), cfg))
    state = 0
    for d in w:
        state = fol.step(state, d)
        if state is None:
            return False
    return True


def enumerate_admissible(beta: Beta, n: int, budget: int | None = DEFAULT_BUDGET,
                         cfg: PrecisionCfg = DEFAULT_CFG) -> Iterator[Word]:
    """Yield all admissible words of length n in strictly increasing
    lexicographic order, by depth-first extension with pruning."""
    if n < 1:
        raise ValueError("length must be >= 1")
    if budget is not None:
        projected = count_admissible(beta, n, cfg=cfg).count
        if projected > budget:
            raise BudgetExceeded(
                f"{projected} admissible words exceed budget {budget}",
                projected=projected)
    fol = Follower(expansion_of_one(beta, n, cfg))
    word: list[int] = []

    def walk(state: int) -> Iterator[Word]:
        if len(word) == n:
            yield tuple(word)
            return
        for d in range(fol.cap(state) + 1):
            word.append(d)
            yield from walk(state + 1 if d == fol.cap(state) else 0)
            word.pop()

    yield from walk(0)


@dataclass(frozen=True)
class AdmissibleCount:
    """Exact count of admissible words of a given length."""

    n: int
    count: int
    method: str

    def bounds_ok(self, beta: Beta, bits: int = 192) -> bool:
        """Consistency with beta**n <= count <= beta**(n+1) / (beta-1),
        checked against the current enclosure of beta (the count must not
        contradict the bound for any value inside the enclosure)."""
        lo, hi = beta.enclosure(bits)
        lower = lo ** self.n
        upper = hi ** (self.n + 1) / (lo - 1)
        return lower <= self.count <= upper


def _count_by_walk(fol: Follower, n: int) -> int:
    """Walk the pruned extension tree and count its leaves one by one.
    Deliberately does Theta(count) work: this is the independent check
    against the automaton-based count."""
    total = 0
    stack = [(0, 0)]
    while stack:
        state, depth = stack.pop()
        if depth == n:
            total += 1
            continue
        cap = fol.cap(state)
        stack.append((state + 1, depth + 1))
        for _ in range(cap):
            stack.append((0, depth + 1))
    return total


def _matmul(a, b):
    size = len(a)
    return [[sum(a[i][k] * b[k][j] for k in range(size)) for j in range(size)]
            for i in range(size)]


def _matpow(m, e):
    size = len(m)
    out = [[int(i == j) for j in range(size)] for i in range(size)]
    while e:
        if e & 1:
            out = _matmul(out, m)
        m = _matmul(m, m)
        e >>= 1
    return out


def _count_matrix(star: OneExpansion, n: int) -> int:
    """Exact integer matrix power on the quotient automaton.  Valid only
    when the expansion-of-one sequence is eventually periodic; states past
    preperiod+period wrap around to the preperiod boundary."""
    p, q = len(star.preperiod), len(star.period)
    size = p + q
    mat = [[0] * size for _ in range(size)]
    for i in range(size):
        cap = star.digit(i + 1)
        j = i + 1 if i + 1 < size else p
        mat[i][j] += 1
        mat[i][0] += cap
    power = _matpow(mat, n)
    return sum(power[0])


def _count_transfer(star: OneExpansion, n: int) -> int:
    """Dynamic program over follower states 0..n using only a prefix of the
    expansion-of-one sequence; needs no periodicity."""
    caps = [star.digit(i + 1) for i in range(n)]
    v = [0] * (n + 1)
    v[0] = 1
    for step in range(n):
        w = [0] * (n + 1)
        zero_mass = 0
        for state in range(step + 1):
            cnt = v[state]
            if not cnt:
                continue
            w[state + 1] += cnt
            if caps[state]:
                zero_mass += cnt * caps[state]
        w[0] += zero_mass
        v = w
    return sum(v)


def count_admissible(beta: Beta, n: int, method: str = "auto",
                     cfg: PrecisionCfg = DEFAULT_CFG) -> AdmissibleCount:
    """Exact cardinality of the set of admissible words of length n.

    method 'transfer-matrix' uses the follower automaton (a finite quotient
    when the expansion of 1 is eventually periodic, a linear-state dynamic
    program otherwise); 'brute-force' walks the pruned tree and counts
    leaves.  'auto' picks the automaton.
    """
    if n < 1:
        raise ValueError("length must be >= 1")
    if method not in ("auto", "transfer-matrix", "brute-force"):
        raise ValueError(f"unknown counting method {method!r}")
    star = expansion_of_one(beta, min(n + 1, 1 << 12), cfg)
    if method == "brute-force":
        return AdmissibleCount(n, _count_by_walk(Follower(star), n), "brute-force")
    if star.is_eventually_periodic:
        return AdmissibleCount(n, _count_matrix(star, n), "transfer-matrix")
    return AdmissibleCount(n, _count_transfer(star, n), "transfer-matrix")
