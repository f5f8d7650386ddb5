"""Shared domain types: growth functions, finite sets as bitmasks, lattice paths.

Everything in this module is an immutable value.  Counts are plain Python
integers (arbitrary precision) and exact ratios are ``fractions.Fraction``;
no floating point enters any predicate that decides membership or ordering.
"""

from __future__ import annotations

import functools
import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Iterator, Optional, Sequence, Union

import mpmath

Real = Union[int, float, Fraction]

# Working precision for boundary-function evaluation and the margin below
# which a floor is treated as numerically ambiguous rather than resolved.
_EVAL_DPS = 60
_FLOOR_GUARD = mpmath.mpf("1e-30")


class AmbiguityError(ArithmeticError):
    """A floor or comparison fell inside the numeric guard band."""


class GuardError(RuntimeError):
    """A resource guard (problem size limit) was exceeded."""


def _to_mpf(x: Real) -> mpmath.mpf:
    if isinstance(x, Fraction):
        return mpmath.mpf(x.numerator) / x.denominator
    if isinstance(x, float):
        fx = Fraction(x)
        return mpmath.mpf(fx.numerator) / fx.denominator
    return mpmath.mpf(x)


def guarded_floor(value: mpmath.mpf) -> int:
    """Floor of a high-precision value, refusing to guess near integers.

    Raises AmbiguityError when ``value`` is within 1e-30 of an integer but
    not exactly one; exact integers (e.g. from a zero coefficient) are fine.
    """
    fl = mpmath.floor(value)
    frac = value - fl
    if frac == 0:
        return int(fl)
    if frac < _FLOOR_GUARD or (1 - frac) < _FLOOR_GUARD:
        raise AmbiguityError(f"floor of {mpmath.nstr(value, 40)} is numerically ambiguous")
    return int(fl)


def log2_int(x: int) -> float:
    """log2 of a positive integer of any size (math.log2 overflows past 2^1024)."""
    if x <= 0:
        raise ValueError("log2_int needs a positive integer")
    bl = x.bit_length()
    if bl <= 900:
        return math.log2(x)
    shift = bl - 64
    return math.log2(x >> shift) + shift


def guarded_log2_ge(lhs_log2: float, rhs_log2: float, band: float = 1e-9) -> bool:
    """One-sided comparison lhs >= rhs in log2 with a relative guard band.

    A difference inside the band is an error, not a pass: the caller asked
    for a verdict the arithmetic cannot support.
    """
    tol = band * max(1.0, abs(lhs_log2), abs(rhs_log2))
    diff = lhs_log2 - rhs_log2
    if abs(diff) <= tol:
        raise AmbiguityError(
            f"comparison within guard band: lhs_log2={lhs_log2!r} rhs_log2={rhs_log2!r}"
        )
    return diff > 0


# ---------------------------------------------------------------------------
# Growth function
# ---------------------------------------------------------------------------

MODE_PAPER = "paper"
MODE_ZERO = "zero"
MODE_CUSTOM = "custom"


@dataclass(frozen=True)
class GrowthFunction:
    """Boundary-shift function f(x) = floor(c * sqrt(x * lnln(x+3))) + b.

    All logarithms are natural; this convention is global to the package
    (exponents elsewhere are calibrated to it).  The domain is real x >= 0,
    so f(n/2) is defined for odd n.  A table variant maps floor(x) through
    an explicit list of values instead of the formula.
    """

    c: Fraction = Fraction(0)
    b: int = 0
    table: Optional[tuple[int, ...]] = None
    mode: str = MODE_ZERO

    def __post_init__(self):
        if self.c < 0:
            raise ValueError("coefficient must be nonnegative")
        if self.b < 0:
            raise ValueError("offset must be nonnegative")
        if self.table is not None and any(v < 0 for v in self.table):
            raise ValueError("table values must be nonnegative")

    @classmethod
    def paper(cls) -> "GrowthFunction":
        """The default instance: c = 3, b = 100."""
        return cls(c=Fraction(3), b=100, mode=MODE_PAPER)

    @classmethod
    def zero(cls) -> "GrowthFunction":
        return cls(c=Fraction(0), b=0, mode=MODE_ZERO)

    @classmethod
    def formula(cls, c: Union[Fraction, int, str], b: int) -> "GrowthFunction":
        return cls(c=Fraction(c), b=b, mode=MODE_CUSTOM)

    @classmethod
    def from_table(cls, values: Iterable[int]) -> "GrowthFunction":
        return cls(table=tuple(int(v) for v in values), mode=MODE_CUSTOM)

    def value(self, x: Real) -> int:
        """Evaluate f at a real x >= 0; deterministic, exact integer result."""
        return _growth_value(self, _as_fraction(x))

    def __call__(self, x: Real) -> int:
        return self.value(x)

    def is_monotone_on(self, hi: int) -> bool:
        """True iff f(1) <= f(2) <= ... <= f(hi)."""
        vals = [self.value(i) for i in range(1, hi + 1)]
        return all(a <= b for a, b in zip(vals, vals[1:]))

    def to_json_dict(self) -> dict:
        out: dict = {"mode": self.mode}
        if self.table is not None:
            out["table"] = list(self.table)
        else:
            out["c"] = f"{self.c.numerator}/{self.c.denominator}"
            out["b"] = self.b
        return out

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict(), sort_keys=True)

    @classmethod
    def from_json_dict(cls, obj: dict) -> "GrowthFunction":
        allowed = {"mode", "c", "b", "table"}
        unknown = set(obj) - allowed
        if unknown:
            raise ValueError(f"unknown growth-function keys: {sorted(unknown)}")
        mode = obj.get("mode")
        if mode == MODE_PAPER:
            return cls.paper()
        if mode == MODE_ZERO:
            return cls.zero()
        if mode != MODE_CUSTOM:
            raise ValueError(f"unknown growth-function mode: {mode!r}")
        if "table" in obj:
            return cls.from_table(obj["table"])
        if "c" not in obj or "b" not in obj:
            raise ValueError("custom growth function needs either 'table' or 'c' and 'b'")
        return cls.formula(_parse_fraction(obj["c"]), int(obj["b"]))

    @classmethod
    def from_json(cls, text: str) -> "GrowthFunction":
        return cls.from_json_dict(json.loads(text))


def _parse_fraction(s: Union[str, int]) -> Fraction:
    if isinstance(s, int):
        return Fraction(s)
    if "/" in s:
        num, den = s.split("/", 1)
        return Fraction(int(num), int(den))
    return Fraction(int(s))


def _as_fraction(x: Real) -> Fraction:
    f = Fraction(x)
    if f < 0:
        raise ValueError("growth function domain is x >= 0")
    return f


@functools.lru_cache(maxsize=None)
def _growth_value(gf: GrowthFunction, x: Fraction) -> int:
    if gf.table is not None:
        idx = int(x)  # floor for nonnegative rationals
        if idx >= len(gf.table):
            raise ValueError(f"table growth function has no entry for x={x}")
        return gf.table[idx] + gf.b
    if gf.c == 0 or x == 0:
        return gf.b
    with mpmath.workdps(_EVAL_DPS):
        xm = _to_mpf(x)
        radicand = xm * mpmath.log(mpmath.log(xm + 3))
        val = _to_mpf(gf.c) * mpmath.sqrt(radicand)
        return guarded_floor(val) + gf.b


# ---------------------------------------------------------------------------
# Finite subsets of [1, ground] with bitmask semantics
# ---------------------------------------------------------------------------


@dataclass(frozen=True, order=True)
class SubsetMask:
    """Subset of {1, ..., ground}; bit i of ``mask`` set iff i is a member.

    Bit 0 is never used.  Membership is O(1) and intersection counts are a
    single masked popcount.
    """

    mask: int
    ground: int

    def __post_init__(self):
        if self.ground < 0:
            raise ValueError("ground must be nonnegative")
        if self.mask < 0 or self.mask >> (self.ground + 1):
            raise ValueError("mask holds elements outside [1, ground]")
        if self.mask & 1:
            raise ValueError("element 0 is not representable")

    @classmethod
    def from_elements(cls, elements: Iterable[int], ground: Optional[int] = None) -> "SubsetMask":
        elems = sorted(set(int(e) for e in elements))
        if elems and elems[0] < 1:
            raise ValueError("elements must be positive integers")
        if ground is None:
            ground = elems[-1] if elems else 0
        mask = 0
        for e in elems:
            mask |= 1 << e
        return cls(mask=mask, ground=ground)

    @property
    def elements(self) -> tuple[int, ...]:
        return tuple(self)

    def __iter__(self) -> Iterator[int]:
        m = self.mask
        while m:
            low = m & -m
            yield low.bit_length() - 1
            m ^= low

    def __len__(self) -> int:
        return self.mask.bit_count()

    def __contains__(self, i: int) -> bool:
        return 0 <= i <= self.ground and bool((self.mask >> i) & 1)

    def max_element(self) -> int:
        """Largest member; 0 for the empty set."""
        return max(self.mask.bit_length() - 1, 0)

    def count_upto(self, k: int) -> int:
        """|A intersect [1, k]|."""
        if k <= 0:
            return 0
        return (self.mask & ((1 << (k + 1)) - 2)).bit_count()

    def is_subset_of(self, other: "SubsetMask") -> bool:
        return self.mask & ~other.mask == 0

    def with_ground(self, ground: int) -> "SubsetMask":
        return SubsetMask(mask=self.mask, ground=ground)

    def __repr__(self) -> str:
        return "{" + ",".join(str(e) for e in self) + "}" + f"<{self.ground}>"


# ---------------------------------------------------------------------------
# Lattice paths with steps +1 / -1
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class LatticePath:
    """Walk taking unit steps right while moving up (+1) or down (-1).

    The height after j steps is start_y + (sum of the first j steps); its
    parity always matches j + start_y, which every consumer may rely on.
    """

    steps: tuple[int, ...]
    start: tuple[int, int] = (0, 0)

    def __post_init__(self):
        if any(s not in (-1, 1) for s in self.steps):
            raise ValueError("steps must be +1 or -1")

    def __len__(self) -> int:
        return len(self.steps)

    def heights(self) -> list[int]:
        """Heights after 0, 1, ..., len(steps) steps."""
        h = self.start[1]
        out = [h]
        for s in self.steps:
            h += s
            out.append(h)
        return out

    @property
    def end(self) -> tuple[int, int]:
        return (self.start[0] + len(self.steps), self.start[1] + sum(self.steps))


def set_to_path(a: SubsetMask, n: int) -> LatticePath:
    """Encode A as a 2n-step path from the origin: step i is +1 iff i in A.

    Members of the boundary families built elsewhere map to walks ending at
    (2n, 2f(n)) that stay strictly below y = 2f(x/2) at even interior x.
    """
    if n < 0:
        raise ValueError("n must be nonnegative")
    if a.max_element() > 2 * n:
        raise ValueError(f"set has elements above 2n={2 * n}")
    steps = tuple(1 if i in a else -1 for i in range(1, 2 * n + 1))
    return LatticePath(steps=steps)


def path_to_set(path: LatticePath) -> SubsetMask:
    """Inverse encoding: i is a member iff step i is +1."""
    if path.start != (0, 0):
        raise ValueError("only paths from the origin encode sets")
    mask = 0
    for i, s in enumerate(path.steps, start=1):
        if s == 1:
            mask |= 1 << i
    return SubsetMask(mask=mask, ground=len(path.steps))
