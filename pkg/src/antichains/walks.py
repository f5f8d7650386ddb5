"""Random-walk boundary crossing and the analytic inequality checks.

The exact engine evolves the full distribution of a +-1 walk as integer
counts with implicit denominator 2^step, absorbing mass the first time it
exceeds a per-step integer cap.  Mass is conserved exactly: surviving plus
absorbed (plus the collapsed never-crossing bucket, when enabled) equals
2^step after every step.

Every inequality check keeps its left side exact (big-integer counts or
tails in log2) and allows floats only on the analytic right side, with a
relative guard band of 1e-9: a comparison that lands inside the band
raises instead of passing.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

import mpmath
import numpy as np

from .counting import prefix_counts, suffix_counts, family_path_count
from .model import (
    AmbiguityError,
    GrowthFunction,
    guarded_floor,
    guarded_log2_ge,
    log2_int,
)

_LOG2E = math.log2(math.e)
_MC_CHUNK = 1 << 16


# ---------------------------------------------------------------------------
# Exact distribution engine
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class WalkDistribution:
    """Surviving counts by height after `step` steps, denominator 2^step.

    ``absorbed`` is the mass removed at boundary crossings and ``safe`` the
    mass collapsed once it provably can no longer cross, both scaled to the
    same denominator.
    """

    step: int
    counts: dict[int, int]
    absorbed: int = 0
    safe: int = 0

    def crossing_probability(self) -> Fraction:
        return Fraction(self.absorbed, 2**self.step)

    def survival_probability(self) -> Fraction:
        return Fraction(sum(self.counts.values()) + self.safe, 2**self.step)

    def mass_conserved(self) -> bool:
        return sum(self.counts.values()) + self.safe + self.absorbed == 2**self.step


def survival_distribution(
    caps: Sequence[Optional[int]],
    *,
    collapse: bool = False,
    audit: bool = False,
) -> WalkDistribution:
    """Evolve a walk from height 0 for len(caps) steps.

    After step x the heights h > caps[x-1] are absorbed (a None cap leaves
    the step unconstrained).  With ``collapse`` the heights too low to ever
    reach a later cap are pooled into the ``safe`` bucket, which shrinks the
    active window without changing either probability.
    """
    num_steps = len(caps)
    floor_profile: list[Optional[int]] = [None] * num_steps
    if collapse:
        # h can still cross after step x iff h > min_{m > x}(caps[m-1] - m) + x.
        running: Optional[int] = None
        for x in range(num_steps, 0, -1):
            floor_profile[x - 1] = None if running is None else running + x
            cap = caps[x - 1]
            if cap is not None:
                c = cap - x
                running = c if running is None or c < running else running
    col, lo = [1], 0
    absorbed = 0
    safe = 0
    for x in range(1, num_steps + 1):
        col = [a + b for a, b in zip([0] + col, col + [0])]
        lo -= 1
        absorbed *= 2
        safe *= 2
        cap = caps[x - 1]
        if cap is not None:
            jmax = (cap - lo) >> 1
            if jmax < len(col) - 1:
                absorbed += sum(col[jmax + 1 :])
                col = col[: jmax + 1] if jmax >= 0 else []
        fl = floor_profile[x - 1]
        if fl is not None and col:
            jmin = (fl - lo) // 2 + 1
            if jmin > 0:
                safe += sum(col[:jmin])
                col = col[jmin:]
                lo += 2 * jmin
        if audit:
            assert sum(col) + absorbed + safe == 2**x, f"mass leak at step {x}"
        if not col and absorbed == 0 and safe == 0:
            break
    counts = {lo + 2 * j: v for j, v in enumerate(col) if v}
    dist = WalkDistribution(step=num_steps, counts=counts, absorbed=absorbed, safe=safe)
    assert dist.mass_conserved()
    return dist


def curve_caps(num_steps: int, coeff: Fraction, offset: int) -> list[int]:
    """Integer caps for the boundary coeff * sqrt(n lnln(n+3)) + offset.

    cap[n-1] is the largest height not exceeding the boundary at step n;
    crossing means strictly exceeding it.  Floors near an integer raise
    rather than guess.
    """
    coeff = Fraction(coeff)
    if coeff == 0:
        return [offset] * num_steps
    out = []
    with mpmath.workdps(50):
        cm = mpmath.mpf(coeff.numerator) / coeff.denominator
        for n in range(1, num_steps + 1):
            val = cm * mpmath.sqrt(n * mpmath.log(mpmath.log(n + 3)))
            out.append(guarded_floor(val) + offset)
    return out


def family_boundary_caps(num_steps: int, gf: GrowthFunction) -> list[Optional[int]]:
    """Caps encoding strict height < 2 f(x/2) at even x in (0, num_steps]."""
    return [
        2 * gf.value(x // 2) - 1 if x % 2 == 0 else None
        for x in range(1, num_steps + 1)
    ]


def crossing_probability_exact(num_steps: int, coeff: Fraction, offset: int) -> Fraction:
    """Exact probability that a +-1 walk exceeds the curved boundary within
    num_steps steps; monotone nondecreasing in num_steps."""
    if num_steps < 1:
        raise ValueError("num_steps must be positive")
    if offset >= num_steps:
        return Fraction(0)  # boundary unreachable: |S_n| <= n <= offset
    dist = survival_distribution(curve_caps(num_steps, coeff, offset), collapse=True)
    return dist.crossing_probability()


def crossing_probability_upper(num_steps: int, coeff: Fraction, offset: int) -> float:
    """Float upper bound on the crossing probability for scales beyond exact
    arithmetic: surviving mass is rounded toward zero after every addition,
    so the complement can only overstate the crossing."""
    caps = curve_caps(num_steps, coeff, offset)
    col, lo = [1.0], 0
    for x in range(1, num_steps + 1):
        col = [
            math.nextafter((a + b) * 0.5, 0.0)
            for a, b in zip([0.0] + col, col + [0.0])
        ]
        lo -= 1
        cap = caps[x - 1]
        if cap is not None:
            jmax = (cap - lo) >> 1
            if jmax < len(col) - 1:
                col = col[: jmax + 1] if jmax >= 0 else []
    surviving = math.nextafter(math.fsum(col), 0.0)
    return 1.0 - surviving


def crossing_probability_mc(
    num_steps: int,
    coeff: Fraction,
    offset: int,
    trials: int,
    seed: int,
) -> tuple[float, float]:
    """Monte Carlo estimate of the crossing probability.

    Returns (estimate, radius) where radius is four standard errors of the
    estimate.  Deterministic for a fixed seed: trials are consumed in fixed
    chunks whose generators are spawned from one seed sequence, so the
    stream does not depend on how the chunks would be scheduled.
    """
    if trials < 1:
        raise ValueError("trials must be positive")
    caps = np.array(
        [c if c is not None else np.iinfo(np.int64).max for c in curve_caps(num_steps, coeff, offset)],
        dtype=np.int64,
    )
    n_chunks = (trials + _MC_CHUNK - 1) // _MC_CHUNK
    seeds = np.random.SeedSequence(seed).spawn(n_chunks)
    crossed = 0
    remaining = trials
    for chunk_seed in seeds:
        m = min(_MC_CHUNK, remaining)
        remaining -= m
        rng = np.random.default_rng(chunk_seed)
        steps = rng.integers(0, 2, size=(m, num_steps), dtype=np.int8).astype(np.int32) * 2 - 1
        walks = np.cumsum(steps, axis=1)
        crossed += int((walks > caps[None, :]).any(axis=1).sum())
    est = crossed / trials
    radius = 4.0 * math.sqrt(max(est * (1.0 - est), 1.0 / trials) / trials)
    return est, radius


# ---------------------------------------------------------------------------
# Exact binomial tails and the summation steps
# ---------------------------------------------------------------------------


def binomial_tail_log2(n: int, kmin: int) -> float:
    """log2 of P(#up-steps >= kmin) for an n-step walk, from exact integers.

    The tail is summed upward from kmin and cross-checked against the
    complement summed from zero; the two must recompose 2^n exactly.
    """
    if kmin > n:
        return float("-inf")
    kmin = max(kmin, 0)
    tail = 0
    cur = math.comb(n, kmin)
    for k in range(kmin, n + 1):
        tail += cur
        cur = cur * (n - k) // (k + 1)
    comp = 0
    cur = 1
    for k in range(0, kmin):
        comp += cur
        cur = cur * (n - k) // (k + 1)
    assert tail + comp == 2**n
    return log2_int(tail) - n


def chernoff_threshold_ups(n: int, coeff: Fraction) -> int:
    """Smallest number of up-steps putting S_n strictly above
    (2/3) coeff sqrt(n lnln n)."""
    coeff = Fraction(coeff)
    if coeff == 0:
        return n // 2 + 1
    with mpmath.workdps(50):
        cm = mpmath.mpf(coeff.numerator) / coeff.denominator
        val = (mpmath.mpf(2) / 3) * cm * mpmath.sqrt(n * mpmath.log(mpmath.log(n)))
        # ups k cross iff 2k - n > val, i.e. k > (n + val) / 2
        return guarded_floor((n + val) / 2) + 1


def chernoff_tail_check(n: int, coeff: Fraction) -> bool:
    """Exact tail P(S_n > (2/3) C sqrt(n lnln n)) against the closed-form
    bound exp(-(2/9) C^2 lnln n); true whenever the walk bound holds."""
    if n < 3:
        raise ValueError("need n >= 3 so lnln n is positive")
    coeff = Fraction(coeff)
    lhs = binomial_tail_log2(n, chernoff_threshold_ups(n, coeff))
    rhs = -float(Fraction(2, 9) * coeff * coeff) * math.log(math.log(n)) * _LOG2E
    if lhs == float("-inf"):
        return True
    return guarded_log2_ge(rhs, lhs)


def dyadic_sum(coeff: Fraction, terms: int) -> float:
    """Upper bound for the full series sum_i (ln 100 + i ln 2)^(-s) with
    s = (2/9) coeff^2: the first ``terms`` summands plus an integral tail
    majorant.  Requires s > 1 for convergence."""
    coeff = Fraction(coeff)
    s_frac = Fraction(2, 9) * coeff * coeff
    if s_frac <= 1:
        raise ValueError("series diverges: need (2/9) C^2 > 1")
    s = float(s_frac)
    a = math.log(100.0)
    b = math.log(2.0)
    if terms > 0:
        i = np.arange(1, terms + 1, dtype=np.float64)
        partial = float(np.sum((a + b * i) ** (-s)))
    else:
        partial = 0.0
    tail = (a + b * terms) ** (1.0 - s) / (b * (s - 1.0))
    return partial + tail


# ---------------------------------------------------------------------------
# Mid-height bandwidth and the large-n inequality checks
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Bandwidth:
    """Window of meeting heights |k| <= floor(A) with n + k even, where
    A = 2((5/2) sqrt((n/2) lnln((n+3)/2)) + 90)."""

    n: int
    value: float
    k_lo: int
    k_hi: int

    @property
    def k_range(self) -> list[int]:
        start = self.k_lo if (self.n + self.k_lo) % 2 == 0 else self.k_lo + 1
        return list(range(start, self.k_hi + 1, 2))


def bandwidth(n: int) -> Bandwidth:
    if n < 3:
        raise ValueError("bandwidth needs n >= 3 so lnln((n+3)/2) is positive")
    with mpmath.workdps(50):
        a = 2 * (mpmath.mpf(5) / 2 * mpmath.sqrt(mpmath.mpf(n) / 2 * mpmath.log(mpmath.log(mpmath.mpf(n + 3) / 2))) + 90)
        fa = guarded_floor(a)
        return Bandwidth(n=n, value=float(a), k_lo=-fa, k_hi=fa)


def bandwidth_sandwich(n: int, gf: GrowthFunction) -> bool:
    """2 f(n/2) >= A >= 3 sqrt(n lnln(n+3)) + 100, evaluated at high precision."""
    if n < 3:
        raise ValueError("bandwidth needs n >= 3 so lnln((n+3)/2) is positive")
    with mpmath.workdps(50):
        a = 2 * (mpmath.mpf(5) / 2 * mpmath.sqrt(mpmath.mpf(n) / 2 * mpmath.log(mpmath.log(mpmath.mpf(n + 3) / 2))) + 90)
        lower = 3 * mpmath.sqrt(n * mpmath.log(mpmath.log(mpmath.mpf(n + 3)))) + 100
        upper = 2 * gf.value(Fraction(n, 2))
        return bool(upper >= a >= lower)


def band_mass_check(n: int, gf: GrowthFunction) -> bool:
    """Exact test that first-leg walks ending inside the bandwidth carry at
    least half of all walks: sum over the window of prefix counts >= 2^(n-1)."""
    table = prefix_counts(n, gf)
    band = bandwidth(n)
    total = sum(table[k] for k in band.k_range)
    return total >= 2 ** (n - 1)


def _poly_log_rhs_log2(n: int, log_power: int = 46) -> float:
    """log2 of 2^n / (n (ln n)^power)."""
    return n - math.log2(n) - log_power * math.log2(math.log(n))


def completion_min_check(n: int, gf: GrowthFunction) -> bool:
    """Whether the smallest second-leg count over the bandwidth is at least
    2^n / (n (ln n)^46).

    The window is |k| <= floor(A); a k in the window whose endpoint is not
    even reachable makes the minimum zero and the check false.  Holds only
    for very large n; callers probing desk-scale n should expect False.
    """
    table = suffix_counts(n, gf)
    band = bandwidth(n)
    smallest = min(table[k] for k in band.k_range)
    if smallest == 0:
        return False
    return guarded_log2_ge(log2_int(smallest), _poly_log_rhs_log2(n))


def completion_chain_check(n: int, gf: GrowthFunction) -> bool:
    """The closed-form chain used to bound the second leg from below:
    (sqrt(n lnln n) / 4n) * C(n, n/2 + f(n) + ceil(A/2)) >= 2^n/(n (ln n)^46)."""
    if n % 2:
        raise ValueError("n must be even")
    band = bandwidth(n)
    half_a = math.ceil(band.value / 2)
    top = n // 2 + gf.value(n) + half_a
    if top > n:
        return False
    lhs = (
        0.5 * (math.log2(n) + math.log2(math.log(math.log(n))))
        - math.log2(4 * n)
        + log2_int(math.comb(n, top))
    )
    return guarded_log2_ge(lhs, _poly_log_rhs_log2(n))


def binomial_lower_bound_check(n: int, d: int) -> bool:
    """Whether C(n, n/2 + d) >= (2^n / sqrt(n)) e^(-2 d^2 / n), with the
    exact binomial on the left.

    The central case already fails: C(n, n/2) ~ sqrt(2/pi) 2^n/sqrt(n) and
    sqrt(2/pi) < 1, so this isolated form of the estimate is false for
    every n; it is kept as a check precisely to document that the missing
    constant must be absorbed elsewhere."""
    if n % 2 or n < 2:
        raise ValueError("n must be even and positive")
    if not 0 <= d <= n // 2:
        raise ValueError("need 0 <= d <= n/2")
    lhs = log2_int(math.comb(n, n // 2 + d))
    rhs = n - 0.5 * math.log2(n) - (2.0 * d * d / n) * _LOG2E
    return guarded_log2_ge(lhs, rhs)


def family_size_check(n: int, gf: GrowthFunction) -> bool:
    """Exact family count against 2^(2n) / (2n (ln n)^46)."""
    cnt = family_path_count(n, gf)
    if cnt == 0:
        return False
    rhs = 2 * n - math.log2(2 * n) - 46 * math.log2(math.log(n))
    return guarded_log2_ge(log2_int(cnt), rhs)
