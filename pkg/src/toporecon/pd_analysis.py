"""Split 2-dimensional diagram points into significant and noise classes."""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from fractions import Fraction

from .errors import AmbiguousSignificance, EmptyDiagram
from .persistence import PersistenceDiagram, PersistencePair

AMBIGUITY_RATIO = 2.0


@dataclass(frozen=True)
class SignificanceSplit:
    """Indices (into the projected list) of the two clusters."""
    significant: tuple[int, ...]
    noise: tuple[int, ...]
    threshold: float


def significant_candidates(pd: PersistenceDiagram, dim: int = 2) -> list[PersistencePair]:
    """Finite pairs of ``dim`` with positive persistence, in diagram order."""
    return pd.finite(dim, positive=True)


def project_persistence(pd: PersistenceDiagram, dim: int = 2) -> list[float]:
    """Distance to the origin of each point projected onto the line y = -x."""
    pairs = significant_candidates(pd, dim)
    if not pairs:
        raise EmptyDiagram(f"no finite {dim}-dimensional pair with positive persistence")
    return [abs(p.death - p.birth) / math.sqrt(2.0) for p in pairs]


def _sse_split(values: list[float]) -> tuple[int, list[int]]:
    """Best number of top values to call significant, by exact 2-means."""
    order = sorted(range(len(values)), key=lambda i: (-values[i], i))
    xs = [Fraction(values[i]) for i in order]
    n = len(xs)
    prefix = [Fraction(0)]
    prefix_sq = [Fraction(0)]
    for x in xs:
        prefix.append(prefix[-1] + x)
        prefix_sq.append(prefix_sq[-1] + x * x)

    def sse(lo, hi):
        m = hi - lo
        s = prefix[hi] - prefix[lo]
        return prefix_sq[hi] - prefix_sq[lo] - s * s / m

    best_k, best = None, None
    for k in range(1, n):
        if xs[k - 1] == xs[k]:
            # never separate equal values
            continue
        cost = sse(0, k) + sse(k, n)
        if best is None or cost < best:
            best_k, best = k, cost
    if best_k is None:
        best_k = n
    return best_k, order


def split_significant(persistences: list[float]) -> SignificanceSplit:
    """Exact two-cluster partition of 1D values; the higher cluster is significant.

    A single value, or all-equal values, form one significant cluster.  When
    the spread max/min is below ``AMBIGUITY_RATIO`` an
    :class:`AmbiguousSignificance` warning is emitted.
    """
    values = [float(v) for v in persistences]
    if not values:
        raise EmptyDiagram("nothing to split")
    k, order = _sse_split(values)
    sig = tuple(sorted(order[:k]))
    noise = tuple(sorted(order[k:]))
    lo = min(values)
    if len(values) > 1 and lo > 0 and max(values) / lo < AMBIGUITY_RATIO:
        warnings.warn(f"persistence values span a ratio below {AMBIGUITY_RATIO}; "
                      "significant/noise split is ambiguous", AmbiguousSignificance,
                      stacklevel=2)
    if noise:
        threshold = 0.5 * (min(values[i] for i in sig) + max(values[i] for i in noise))
    else:
        threshold = min(values[i] for i in sig)
    return SignificanceSplit(sig, noise, threshold)
