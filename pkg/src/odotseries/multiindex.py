"""Multi-indices: arithmetic, the graded order on I_n and slice enumeration.

Multi-indices are plain tuples of nonnegative ints.  Within a fixed degree
the order is reverse-lexicographic, so in two variables the degree-2 slice
reads ``(2, 0) < (1, 1) < (0, 2)``.
"""

from __future__ import annotations

import itertools
import math
from functools import lru_cache
from typing import Iterable, Sequence

__all__ = [
    "CapacityError",
    "DimensionError",
    "EXACT_CAPACITY",
    "multi_index",
    "degree",
    "compare",
    "sort_key",
    "dominates",
    "add",
    "subtract",
    "slice_dim",
    "enumerate_slice",
    "rank",
    "unrank",
    "multifactorial",
    "multibinomial",
    "multinomial",
    "log_multifactorial",
]

# Exact integer results are kept within an unsigned 128-bit range.
EXACT_CAPACITY = 2**128 - 1


class DimensionError(ValueError):
    """Operands live in incompatible index spaces."""


class CapacityError(OverflowError):
    """An exact integer exceeded ``EXACT_CAPACITY``."""


def multi_index(entries: Iterable[int]) -> tuple[int, ...]:
    """Validate ``entries`` and return them as a multi-index tuple."""
    alpha = tuple(int(e) for e in entries)
    if not alpha:
        raise DimensionError("a multi-index needs at least one entry")
    if any(e < 0 for e in alpha):
        raise ValueError(f"negative entry in multi-index {alpha}")
    return alpha


def degree(alpha: Sequence[int]) -> int:
    return sum(alpha)


def _check_same_length(a: Sequence[int], b: Sequence[int]) -> None:
    if len(a) != len(b):
        raise DimensionError(f"multi-index lengths differ: {len(a)} != {len(b)}")


def sort_key(alpha: Sequence[int]) -> tuple:
    """Key realising the order: degree first, then larger leading entries first."""
    return (sum(alpha), tuple(-a for a in alpha))


def compare(a: Sequence[int], b: Sequence[int]) -> int:
    """Return -1, 0 or 1 as ``a`` is smaller than, equal to or larger than ``b``."""
    _check_same_length(a, b)
    ka, kb = sort_key(a), sort_key(b)
    return (ka > kb) - (ka < kb)


def dominates(alpha: Sequence[int], beta: Sequence[int]) -> bool:
    """True when ``beta << alpha``, i.e. ``beta_i <= alpha_i`` for every i."""
    _check_same_length(alpha, beta)
    return all(b <= a for a, b in zip(alpha, beta))


def add(a: Sequence[int], b: Sequence[int]) -> tuple[int, ...]:
    _check_same_length(a, b)
    return tuple(x + y for x, y in zip(a, b))


def subtract(a: Sequence[int], b: Sequence[int]) -> tuple[int, ...]:
    """``a - b``; raises ``ValueError`` when the result leaves I_n."""
    _check_same_length(a, b)
    out = tuple(x - y for x, y in zip(a, b))
    if any(x < 0 for x in out):
        raise ValueError(f"{tuple(a)} - {tuple(b)} is not a multi-index")
    return out


def slice_dim(n: int, p: int) -> int:
    """Number of multi-indices of length ``n`` and degree ``p``."""
    if n < 1 or p < 0:
        raise ValueError(f"invalid slice (n={n}, p={p})")
    return math.comb(p + n - 1, n - 1)


@lru_cache(maxsize=None)
def enumerate_slice(n: int, p: int) -> tuple[tuple[int, ...], ...]:
    """All ``alpha`` in I_n with ``|alpha| = p``, sorted ascending.

    Generated by stars and bars and then sorted under :func:`sort_key`;
    results are memoized per ``(n, p)``.
    """
    slice_dim(n, p)
    out = []
    for bars in itertools.combinations(range(p + n - 1), n - 1):
        prev = -1
        alpha = []
        for b in bars:
            alpha.append(b - prev - 1)
            prev = b
        alpha.append(p + n - 2 - prev)
        out.append(tuple(alpha))
    out.sort(key=sort_key)
    return tuple(out)


@lru_cache(maxsize=None)
def _rank_table(n: int, p: int) -> dict[tuple[int, ...], int]:
    return {alpha: i for i, alpha in enumerate(enumerate_slice(n, p))}


def rank(alpha: Sequence[int]) -> int:
    """Position of ``alpha`` within its own slice."""
    alpha = tuple(alpha)
    return _rank_table(len(alpha), sum(alpha))[alpha]


def unrank(n: int, p: int, r: int) -> tuple[int, ...]:
    sl = enumerate_slice(n, p)
    if not 0 <= r < len(sl):
        raise IndexError(f"rank {r} outside slice of size {len(sl)}")
    return sl[r]


def _checked(value: int) -> int:
    if value > EXACT_CAPACITY:
        raise CapacityError(f"exact value exceeds 128-bit capacity ({value.bit_length()} bits)")
    return value


def multifactorial(alpha: Sequence[int]) -> int:
    """``alpha! = alpha_1! alpha_2! ... alpha_n!`` as an exact integer."""
    out = 1
    for a in alpha:
        out *= math.factorial(a)
    return _checked(out)


def multibinomial(alpha: Sequence[int], beta: Sequence[int]) -> int:
    """``alpha! / (beta! (alpha - beta)!)``, zero unless ``beta << alpha``."""
    _check_same_length(alpha, beta)
    out = 1
    for a, b in zip(alpha, beta):
        if b > a:
            return 0
        out *= math.comb(a, b)
    return _checked(out)


def multinomial(m: int, alpha: Sequence[int]) -> int:
    """``m! / alpha!`` for ``|alpha| = m``, zero otherwise."""
    if sum(alpha) != m or any(a < 0 for a in alpha):
        return 0
    out = 1
    rest = m
    for a in alpha:
        out *= math.comb(rest, a)
        rest -= a
    return _checked(out)


def log_multifactorial(alpha: Sequence[int]) -> float:
    """Natural log of ``alpha!`` via log-gamma; never overflows."""
    return float(sum(math.lgamma(a + 1) for a in alpha))
