"""Heads of circular +-1 sequences against a rational slope.

A position r on the circle is a head when every arc starting at r has sum
strictly above mu times its length; equivalently the rotation starting at
r is a good sequence.  The head count of a sequence with p up-steps and q
down-steps is at least p - floor((1+mu)/(1-mu) q) whenever
0 < mu <= (p-q)/(p+q) and q >= 1.

Two detectors live here.  ``heads`` is the O(n^2) reference that tests
every rotation against the definition.  ``construct_heads`` produces
exactly max(bound, 0) distinct witness positions in O(n): it anchors level
sets of the drift-adjusted prefix sums at the walk's last minimum.  (The
naive variant that takes the largest index below t + i(1-mu) without
re-anchoring emits a duplicate or a non-head when the floored bound
exceeds the real-valued one; re-anchoring at the minimum repairs both
failure modes, and the exhaustive suites check the repaired construction
against the reference.)

All slope comparisons are exact integer cross-multiplications; the strict
inequalities are tie-sensitive and no float ever enters a predicate.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .counting import above_line_path_count
from .model import GuardError

EXHAUSTIVE_GUARD = 22


@dataclass(frozen=True)
class CircularSequence:
    """+-1 values in clockwise order; composition (p, q) is recomputed from
    the values rather than trusted."""

    values: tuple[int, ...]

    def __post_init__(self):
        if any(v not in (-1, 1) for v in self.values):
            raise ValueError("values must be +1 or -1")

    @classmethod
    def from_string(cls, s: str) -> "CircularSequence":
        table = {"+": 1, "-": -1}
        try:
            return cls(tuple(table[ch] for ch in s.strip()))
        except KeyError as exc:
            raise ValueError(f"sequence characters must be '+' or '-': {s!r}") from exc

    def __len__(self) -> int:
        return len(self.values)

    @property
    def p(self) -> int:
        return sum(1 for v in self.values if v == 1)

    @property
    def q(self) -> int:
        return len(self.values) - self.p

    def rotation(self, r: int) -> tuple[int, ...]:
        """The linear sequence read clockwise starting at 1-based position r."""
        i = (r - 1) % len(self.values)
        return self.values[i:] + self.values[:i]


@dataclass(frozen=True)
class HeadReport:
    positions: tuple[int, ...]
    bound: int


def is_good_sequence(values: Sequence[int], mu: Fraction) -> bool:
    """True iff every prefix sum strictly exceeds mu times its length."""
    num, den = mu.numerator, mu.denominator
    acc = 0
    for j, v in enumerate(values, start=1):
        acc += v
        if acc * den <= num * j:
            return False
    return True


def head_bound(p: int, q: int, mu: Fraction) -> int:
    """p - floor((1+mu)/(1-mu) * q), exactly; may be negative."""
    if mu == 1:
        raise ValueError("mu = 1 leaves the bound undefined")
    return p - math.floor((1 + mu) / (1 - mu) * q)


def heads(x: CircularSequence, mu: Fraction) -> HeadReport:
    """All head positions by direct circular testing of every rotation."""
    n = len(x)
    num, den = mu.numerator, mu.denominator
    doubled = [0]
    for v in x.values + x.values:
        doubled.append(doubled[-1] + v)
    positions = []
    for r in range(1, n + 1):
        base = doubled[r - 1]
        if all((doubled[r - 1 + j] - base) * den > num * j for j in range(1, n + 1)):
            positions.append(r)
    return HeadReport(positions=tuple(positions), bound=head_bound(x.p, x.q, mu))


def _check_hypotheses(x: CircularSequence, mu: Fraction) -> tuple[int, int]:
    p, q = x.p, x.q
    if q == 0:
        raise ValueError("construction requires q >= 1")
    if not (0 < mu <= Fraction(p - q, p + q)):
        raise ValueError(f"mu={mu} outside (0, (p-q)/(p+q)] for p={p}, q={q}")
    return p, q


def construct_heads(x: CircularSequence, mu: Fraction) -> list[int]:
    """Explicit head positions, exactly max(head_bound, 0) many.

    Working with S_i = (prefix sum) - mu*i scaled by the denominator of mu:
    rotate the circle to start just after the last minimum of S, where the
    adjusted sums are zero at the origin and strictly positive afterwards.
    The i-th witness is one past the largest index whose adjusted sum is at
    most (i-1)(1-mu); maximality gives the forward arcs and positivity of
    the rotated sums gives the wrap-around arcs.
    """
    p, q = _check_hypotheses(x, mu)
    count = max(head_bound(p, q, mu), 0)
    if count == 0:
        return []
    n = len(x)
    num, den = mu.numerator, mu.denominator

    def excess(values):
        out = [0]
        acc = 0
        for j, v in enumerate(values, start=1):
            acc += v
            out.append(acc * den - num * j)
        return out

    s = excess(x.values)
    t = min(s)
    m = max(i for i, v in enumerate(s) if v == t)  # last minimum, in [0, n]
    m %= n
    rotated = x.values[m:] + x.values[:m]
    s_rot = excess(rotated)
    total = s_rot[n]
    # Candidate indices: strictly descending suffix minima of s_rot over [0, n-1],
    # listed right to left; the last candidate is index 0 at value 0.
    candidates: list[tuple[int, int]] = []
    best = None
    for g in range(n - 1, -1, -1):
        v = s_rot[g]
        if best is None or v < best:
            candidates.append((g, v))
            best = v
    step = den - num  # (1 - mu) scaled
    j = len(candidates) - 1
    positions = []
    for i in range(1, count + 1):
        level = (i - 1) * step
        assert level < total
        while j > 0 and candidates[j - 1][1] <= level:
            j -= 1
        g = candidates[j][0]
        positions.append((m + g) % n + 1)
    assert len(set(positions)) == count
    return sorted(positions)


def rotation_class_goods(x: CircularSequence, mu: Fraction) -> tuple[int, int]:
    """(number of distinct rotations, how many of them are good sequences).

    The cyclic group acts on the circle with n/class_size repetitions per
    distinct sequence, so good_in_class * n >= head_count * class_size;
    asserted here in exact integers.
    """
    n = len(x)
    distinct = {}
    for r in range(1, n + 1):
        rot = x.rotation(r)
        if rot not in distinct:
            distinct[rot] = is_good_sequence(rot, mu)
    class_size = len(distinct)
    good_in_class = sum(1 for good in distinct.values() if good)
    head_count = len(heads(x, mu).positions)
    assert good_in_class * n >= head_count * class_size
    return class_size, good_in_class


def good_fraction(p: int, q: int, mu: Fraction, method: str = "auto") -> Fraction:
    """Fraction of good sequences among all arrangements of p up-steps and
    q down-steps.

    Exhaustive enumeration is the oracle for p + q <= 22; the DP route
    counts the equivalent above-line walks and has no size guard.  Under
    the head-count hypotheses the fraction is at least head_bound/(p+q).
    """
    n = p + q
    if n < 1:
        raise ValueError("need at least one step")
    total = math.comb(n, p)
    if method == "auto":
        method = "exhaustive" if n <= EXHAUSTIVE_GUARD else "dp"
    if method == "dp":
        good = above_line_path_count(n, p - q, mu)
    elif method == "exhaustive":
        if n > EXHAUSTIVE_GUARD:
            raise GuardError(f"exhaustive good-fraction limited to p+q <= {EXHAUSTIVE_GUARD}")
        num, den = mu.numerator, mu.denominator
        good = 0
        for mask in _fixed_popcount_masks(n, p):
            acc = 0
            ok = True
            for j in range(1, n + 1):
                acc += 1 if (mask >> (j - 1)) & 1 else -1
                if acc * den <= num * j:
                    ok = False
                    break
            if ok:
                good += 1
    else:
        raise ValueError(f"unknown method: {method!r}")
    return Fraction(good, total)


def _fixed_popcount_masks(bits: int, popcount: int):
    if popcount == 0:
        yield 0
        return
    m = (1 << popcount) - 1
    limit = 1 << bits
    while m < limit:
        yield m
        c = m & -m
        r = m + c
        m = (((r ^ m) >> 2) // c) | r


def _minimal_period(values: tuple[int, ...]) -> int:
    n = len(values)
    for d in range(1, n + 1):
        if n % d == 0 and all(values[i] == values[(i + d) % n] for i in range(n)):
            return d
    return n


def exhaustive_suite(max_n: int, max_den: int = 14) -> dict:
    """Check every +-1 sequence of length up to max_n against every reduced
    slope a/b with b <= max_den inside the hypotheses.

    For each admissible (sequence, mu) pair this verifies, by definition
    chasing in exact arithmetic: the head count meets the floor bound, the
    constructed witnesses are heads and exactly max(bound, 0) many, good
    rotations are precisely the heads, the per-rotation-class good count
    satisfies good * n >= heads * class_size, and the overall good fraction
    for the composition is at least bound/(p+q).  Raises AssertionError on
    the first violation; returns counters on success.
    """
    slopes = sorted(
        {Fraction(a, b) for b in range(1, max_den + 1) for a in range(1, b)}
    )
    fraction_memo: dict[tuple[int, int, Fraction], Fraction] = {}
    pairs = 0
    sequences = 0
    for n in range(2, max_n + 1):
        for bits in range(1 << n):
            values = tuple(1 if (bits >> i) & 1 else -1 for i in range(n))
            p = (bits).bit_count()
            q = n - p
            if q < 1 or p <= q:
                continue
            limit = Fraction(p - q, n)
            x = CircularSequence(values)
            period = None
            seen = False
            for mu in slopes:
                if mu > limit:
                    break
                seen = True
                report = heads(x, mu)
                bound = report.bound
                want = max(bound, 0)
                assert len(report.positions) >= want, (values, mu)
                witnesses = construct_heads(x, mu)
                assert len(witnesses) == want, (values, mu)
                assert set(witnesses) <= set(report.positions), (values, mu)
                for r in report.positions:
                    assert is_good_sequence(x.rotation(r), mu), (values, mu, r)
                if period is None:
                    period = _minimal_period(values)
                good_in_class = sum(1 for r in report.positions if r <= period)
                assert good_in_class * n >= len(report.positions) * period, (values, mu)
                key = (p, q, mu)
                frac = fraction_memo.get(key)
                if frac is None:
                    frac = good_fraction(p, q, mu, method="dp")
                    fraction_memo[key] = frac
                assert frac >= Fraction(want, n), (p, q, mu)
                pairs += 1
            if seen:
                sequences += 1
    return {"max_n": max_n, "max_den": max_den, "sequences": sequences, "pairs": pairs}
