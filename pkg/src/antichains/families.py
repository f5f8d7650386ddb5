"""Membership tests and brute-force enumeration of the boundary families.

The family for size parameter n consists of the subsets A of [2n] with
|A| = n + f(n) whose prefixes stay strictly under the shifted diagonal:
|A intersect [2i]| < i + f(i) for every 0 < i < n.  With f identically
zero this is the ballot family counted by the Catalan numbers.

Enumeration here is the exhaustive oracle that validates the dynamic
programming in :mod:`antichains.counting`; it is deliberately simple and
guarded to brute-forceable sizes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .kraft import antichain_violation
from .model import GrowthFunction, GuardError, SubsetMask

# Keeps the oracle under roughly 3e8 subset visits.
ENUMERATION_GUARD = 28


@dataclass(frozen=True)
class FamilySpec:
    """A growth function together with the size parameter n >= 1.

    The family is nonempty only if the required cardinality n + f(n) fits
    inside the ground set [2n].
    """

    gf: GrowthFunction
    n: int

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("n must be positive")

    @property
    def cardinality(self) -> int:
        return self.n + self.gf.value(self.n)

    @property
    def ground(self) -> int:
        return 2 * self.n


def _check_ground(a: SubsetMask, n: int) -> None:
    if a.max_element() > 2 * n:
        raise ValueError(f"set has elements above 2n={2 * n}")


def is_ballot_member(a: SubsetMask, n: int) -> bool:
    """Membership in the f = 0 family: |A| = n and |A cap [2i]| < i for 0 < i < n."""
    _check_ground(a, n)
    if len(a) != n:
        return False
    return all(a.count_upto(2 * i) < i for i in range(1, n))


def is_family_member(a: SubsetMask, spec: FamilySpec) -> bool:
    """General membership: one O(n) pass of prefix counts against i + f(i)."""
    _check_ground(a, spec.n)
    if len(a) != spec.cardinality:
        return False
    f = spec.gf.value
    return all(a.count_upto(2 * i) < i + f(i) for i in range(1, spec.n))


def _mask_is_member(mask: int, n: int, prefix_caps: list[int]) -> bool:
    # mask uses bit i-1 for element i; prefix_caps[i] = i + f(i).
    for i in range(1, n):
        if (mask & ((1 << (2 * i)) - 1)).bit_count() >= prefix_caps[i]:
            return False
    return True


def _gosper_masks(bits: int, popcount: int):
    """All bit masks of the given width and popcount, in increasing value."""
    if popcount == 0:
        yield 0
        return
    if popcount > bits:
        return
    m = (1 << popcount) - 1
    limit = 1 << bits
    while m < limit:
        yield m
        c = m & -m
        r = m + c
        m = (((r ^ m) >> 2) // c) | r


def enumerate_family(spec: FamilySpec) -> list[SubsetMask]:
    """All members, ordered by increasing bitmask value.

    Candidates are the fixed-popcount masks of width 2n (Gosper successor),
    since only |A| = n + f(n) can qualify; each is filtered by the prefix
    condition with early exit.
    """
    if spec.ground > ENUMERATION_GUARD:
        raise GuardError(f"enumeration limited to 2n <= {ENUMERATION_GUARD}")
    size = spec.cardinality
    if size > spec.ground:
        return []
    caps = [0] + [i + spec.gf.value(i) for i in range(1, spec.n)]
    out = []
    for mask in _gosper_masks(spec.ground, size):
        if _mask_is_member(mask, spec.n, caps):
            out.append(SubsetMask(mask=mask << 1, ground=spec.ground))
    return out


def catalan_number(k: int) -> int:
    """C_k = binom(2k, k) / (k + 1), exactly."""
    if k < 0:
        raise ValueError("k must be nonnegative")
    num = math.comb(2 * k, k)
    q, r = divmod(num, k + 1)
    assert r == 0
    return q


def ballot_closed_form(n: int) -> int:
    """(1/n) * binom(2(n-1), n-1), the Catalan number C_{n-1}.

    Matches the enumerated ballot-family size for every n >= 2.  At n = 1
    the vacuous prefix condition admits both singletons of [2], so the
    family has 2 members while this expression gives C_0 = 1; callers that
    compare the two must special-case that corner.
    """
    if n < 1:
        raise ValueError("n must be positive")
    num = math.comb(2 * (n - 1), n - 1)
    q, r = divmod(num, n)
    assert r == 0
    return q


def check_union_antichain(gf: GrowthFunction, up_to: int):
    """Enumerate the union of families for n = 1..up_to and test the antichain
    property.

    Returns (True, None) or (False, violating_pair).  A non-monotone growth
    function is rejected: without monotonicity members of a smaller family
    can embed into a larger one and the union property genuinely fails.
    """
    if 2 * up_to > ENUMERATION_GUARD:
        raise GuardError(f"union check limited to 2M <= {ENUMERATION_GUARD}")
    if not gf.is_monotone_on(up_to):
        raise ValueError("growth function must be monotone nondecreasing on [1, M]")
    union = []
    for n in range(1, up_to + 1):
        union.extend(enumerate_family(FamilySpec(gf=gf, n=n)))
    bad = antichain_violation(union)
    return (bad is None, bad)
