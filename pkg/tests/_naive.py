"""From-definition reimplementations used as independent oracles.

Everything here is written with plain Python loops, ``math``, and
``sorted`` — deliberately avoiding the vectorized code paths of the
package — so that agreement is evidence of correctness rather than of
shared bugs.  Ties follow the same conventions as the package: order
statistics sort descending with ties broken by original index, and
ranks count with the "max" convention (number of values <= the given
one).
"""
from __future__ import annotations

import math


def _top_indices(xs, k):
    """Indices of the k largest values, descending, ties by position."""
    return sorted(range(len(xs)), key=lambda i: (-xs[i], i))[:k]


def _iceil(v: float) -> int:
    """Ceiling that snaps values within 1e-6 of an integer to it.

    The index arguments arise as products like q*k whose intended value
    is an exact rational; the snap keeps float representation error in q
    from bumping the ceiling up a slot.
    """
    nearest = round(v)
    if abs(v - nearest) < 1e-6:
        return int(nearest)
    return int(math.ceil(v))


def naive_hill(x, k: int) -> float:
    """Reciprocal mean log-excess over the (k+1)-th largest value."""
    s = sorted(x, reverse=True)
    total = 0.0
    for i in range(k):
        total += math.log(s[i]) - math.log(s[k])
    return k / total


def naive_hillish(xi, eta, k: int) -> float:
    idx = _top_indices(xi, k)
    estar = [eta[i] for i in idx]
    total = 0.0
    for j in range(1, k + 1):
        nj = sum(1 for w in estar if w <= estar[j - 1])
        total += math.log(k / j) * math.log(k / nj)
    return total / k


def naive_pickandsish(xi, eta, k: int, q: float) -> float:
    """Raises ZeroDivisionError on a degenerate denominator."""
    idx_full = _top_indices(xi, k)
    k_half = _iceil(k / 2)
    idx_half = idx_full[:k_half]
    top_full = sorted(eta[i] for i in idx_full)
    top_half = sorted(eta[i] for i in idx_half)
    a_full = max(1, _iceil(q * k))
    a_half = max(1, _iceil(q * k / 2))
    num = top_full[a_full - 1] - top_half[a_half - 1]
    den = top_full[a_full - 1] - top_full[a_half - 1]
    if den == 0.0:
        raise ZeroDivisionError("degenerate quantile spread")
    return num / den


def naive_qhat(z1, z2, k: int) -> float:
    a = [min(p, q) for p, q in zip(z1, z2)]
    idx = _top_indices(a, k)
    wins = sum(1 for i in idx if z1[i] > z2[i])
    return wins / k
