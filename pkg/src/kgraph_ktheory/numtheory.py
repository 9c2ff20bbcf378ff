"""gcd identities behind the closed-form invariants, with brute-force checks.

For alphabet sizes n_i >= 2 the products (1 - 2n_i)(1 + 2n_i) = 1 - 4n_i^2
interlock so that several different gcd recipes agree, and the h/k split is
always coprime with product g.  These facts justify dropping redundant
minor terms in the Smith-form computations; here they are recomputed and
reported, never assumed.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd
from typing import Iterable, Sequence


def gcd_all(values: Iterable[int]) -> int:
    """gcd of absolute values; empty input or all zeros give 0."""
    g = 0
    for v in values:
        g = gcd(g, v)
        if g == 1:
            return 1
    return g


def _require_sizes(ns: Sequence[int]) -> None:
    if len(ns) < 2:
        raise ValueError("need at least two entries")
    if any(n < 2 for n in ns):
        raise ValueError(f"entries must be >= 2, got {tuple(ns)}")


@dataclass(frozen=True)
class GcdLemmaReport:
    g1: int
    g2: int
    g3: int

    @property
    def ok(self) -> bool:
        return self.g1 == self.g2 == self.g3


def lemma_equal_gcds(ns: Sequence[int]) -> GcdLemmaReport:
    """Three gcd recipes over {1-4n_i^2}, cross terms, and pair differences.

    g1 uses 1 - 4 n_i n_j, g2 uses 2n_i - 2n_j, g3 uses both; the report says
    whether they agree (they always do for n_i >= 2).
    """
    _require_sizes(ns)
    squares = [1 - 4 * n * n for n in ns]
    cross = [1 - 4 * ns[i] * ns[j] for i in range(len(ns)) for j in range(i + 1, len(ns))]
    diffs = [2 * ns[i] - 2 * ns[j] for i in range(len(ns)) for j in range(i + 1, len(ns))]
    return GcdLemmaReport(
        g1=gcd_all(squares + cross),
        g2=gcd_all(squares + diffs),
        g3=gcd_all(squares + cross + diffs),
    )


@dataclass(frozen=True)
class HkLemmaReport:
    g: int
    h: int
    k: int

    @property
    def coprime(self) -> bool:
        return gcd(self.h, self.k) == 1

    @property
    def product_matches(self) -> bool:
        return self.g == self.h * self.k

    @property
    def ok(self) -> bool:
        return self.coprime and self.product_matches


def lemma_hk_coprime(ns: Sequence[int]) -> HkLemmaReport:
    """h = gcd{1 - 2n_i}, k = gcd{1 + 2n_i}; checks gcd(h,k) = 1 and g = hk."""
    _require_sizes(ns)
    g = lemma_equal_gcds(ns).g1
    return HkLemmaReport(
        g=g,
        h=gcd_all(1 - 2 * n for n in ns),
        k=gcd_all(1 + 2 * n for n in ns),
    )
