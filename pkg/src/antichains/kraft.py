"""Prefix codes, exact Kraft sums, and antichain verification.

Everything here is exact rational arithmetic; floats appear only in the
display-oriented density ratios.  Families are lists of SubsetMask values.
A family with duplicates is rejected as input error, never deduplicated:
the objects under study are sets of sets.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Sequence

from .model import SubsetMask


class AntichainViolation(ValueError):
    """Raised when an operation requiring an antichain receives one with a
    comparable (or duplicated) pair; the pair is attached for diagnostics."""

    def __init__(self, pair: tuple[SubsetMask, SubsetMask]):
        self.pair = pair
        super().__init__(f"not an antichain: {pair[0]!r} vs {pair[1]!r}")


@dataclass(frozen=True)
class CodeWord:
    """Nonempty finite {0,1} word."""

    bits: tuple[int, ...]

    def __post_init__(self):
        if not self.bits:
            raise ValueError("code words are nonempty")
        if any(b not in (0, 1) for b in self.bits):
            raise ValueError("code words are binary")

    def __len__(self) -> int:
        return len(self.bits)

    def __str__(self) -> str:
        return "".join(str(b) for b in self.bits)

    @classmethod
    def from_string(cls, s: str) -> "CodeWord":
        return cls(tuple(int(ch) for ch in s.strip()))

    def is_prefix_of(self, other: "CodeWord") -> bool:
        """Proper-or-equal prefix test."""
        return len(self) <= len(other) and other.bits[: len(self)] == self.bits


def word_for_set(a: SubsetMask) -> CodeWord:
    """Characteristic word of a nonempty set, read up to its maximum.

    Bit i is 1 iff i is a member, so the last bit is always 1 and distinct
    sets with distinct maxima can never produce equal words.
    """
    m = a.max_element()
    if m == 0:
        raise ValueError("the empty set has no characteristic word")
    return CodeWord(tuple(1 if i in a else 0 for i in range(1, m + 1)))


def is_prefix_free(words: Sequence[CodeWord]) -> bool:
    """True iff no word is a proper-or-equal prefix of a distinct word.

    Duplicates therefore fail.  Sorting makes any prefix pair adjacent.
    """
    seqs = sorted(w.bits for w in words)
    return all(b[: len(a)] != a for a, b in zip(seqs, seqs[1:]))


def kraft_sum(words: Iterable[CodeWord]) -> Fraction:
    """Exact sum of 2^-(word length); at most 1 for any prefix-free family."""
    return sum((Fraction(1, 2 ** len(w)) for w in words), Fraction(0))


def antichain_violation(
    family: Sequence[SubsetMask],
) -> Optional[tuple[SubsetMask, SubsetMask]]:
    """First comparable or duplicated pair, or None if the family is an antichain.

    Pairwise bitmask subset tests, grouped by cardinality so only pairs that
    could be comparable are probed; a containment needs |A| <= |B|.
    """
    order = sorted(range(len(family)), key=lambda i: (len(family[i]), family[i].mask))
    masks = [family[i].mask for i in order]
    sizes = [family[i].mask.bit_count() for i in order]
    for ii in range(len(masks)):
        mi, si = masks[ii], sizes[ii]
        for jj in range(ii + 1, len(masks)):
            if sizes[jj] == si:
                if masks[jj] == mi:
                    return (family[order[ii]], family[order[jj]])
                continue
            if mi & ~masks[jj] == 0:
                return (family[order[ii]], family[order[jj]])
    return None


def is_antichain(family: Sequence[SubsetMask]) -> bool:
    return antichain_violation(family) is None


def slice_counts(family: Sequence[SubsetMask], up_to: int) -> list[int]:
    """|family intersect 2^[n]| for n = 1..up_to, i.e. members with max <= n."""
    maxima = sorted(a.max_element() for a in family)
    out = []
    idx = 0
    count = 0
    for n in range(1, up_to + 1):
        while idx < len(maxima) and maxima[idx] <= n:
            count += 1
            idx += 1
        out.append(count)
    return out


def antichain_partial_sum(family: Sequence[SubsetMask], up_to: int) -> Fraction:
    """Exact sum over n = 1..up_to of |family intersect 2^[n]| / 2^n.

    Requires an antichain whose members all fit in [up_to]; the prefix-code
    encoding argument guarantees the result never exceeds 2, which callers
    assert but this function does not enforce.
    """
    for a in family:
        if a.max_element() > up_to:
            raise ValueError(f"member {a!r} does not fit in [{up_to}]")
    bad = antichain_violation(family)
    if bad is not None:
        raise AntichainViolation(bad)
    total = Fraction(0)
    for n, cnt in enumerate(slice_counts(family, up_to), start=1):
        if cnt:
            total += Fraction(cnt, 2**n)
    return total


def telescoped_kraft_bound(family: Sequence[SubsetMask], up_to: int) -> Fraction:
    """The rearranged form |F cap 2^[N]|/2^N + sum_{n<N} |F cap 2^[n]|/2^(n+1).

    Bounded by 1 for every antichain; this is the quantity the partial-sum
    bound of 2 collapses to after telescoping, so asserting it <= 1 checks
    the sharper inequality.
    """
    counts = slice_counts(family, up_to)
    total = Fraction(counts[-1], 2**up_to) if counts else Fraction(0)
    for n in range(1, up_to):
        total += Fraction(counts[n - 1], 2 ** (n + 1))
    return total


def density_ratios(family: Sequence[SubsetMask], up_to: int) -> list[tuple[int, float]]:
    """Per-n density ratios |F cap 2^[n]| * (n ln n) / 2^n for n = 2..up_to.

    Counts are exact; only the final ratio is a float.  The exact partial
    Kraft sum over the same range stays at most 2, which makes the weighted
    series of these ratios summable however large up_to grows.
    """
    counts = slice_counts(family, up_to)
    out = []
    for n in range(2, up_to + 1):
        cnt = counts[n - 1]
        out.append((n, cnt * n * math.log(n) / 2.0**n))
    return out


# ---------------------------------------------------------------------------
# File formats
# ---------------------------------------------------------------------------


def parse_family(text: str) -> list[SubsetMask]:
    """Family file format: one set per line, comma-separated positive integers,
    '#' starts a comment, blank lines ignored."""
    family = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        try:
            elems = [int(tok) for tok in line.split(",")]
        except ValueError as exc:
            raise ValueError(f"line {lineno}: {exc}") from exc
        if any(e < 1 for e in elems):
            raise ValueError(f"line {lineno}: elements must be positive")
        family.append(SubsetMask.from_elements(elems))
    return family


def format_family(family: Iterable[SubsetMask]) -> str:
    return "".join(",".join(str(e) for e in a) + "\n" for a in family)


def parse_codebook(text: str) -> list[CodeWord]:
    """Codebook file format: one {0,1} word per line."""
    words = []
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if line:
            words.append(CodeWord.from_string(line))
    return words


def format_codebook(words: Iterable[CodeWord]) -> str:
    return "".join(str(w) + "\n" for w in words)
