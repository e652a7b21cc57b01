"""Edit-distance verification.

``edit_distance_at_most_k`` is the banded threshold DP used by every join
engine.  ``edit_distance_full`` is a plain quadratic DP kept as an
independent oracle; it shares no code with the banded path.
"""

from __future__ import annotations

from typing import NamedTuple

import numba
import numpy as np

from .gramhash import as_array


class VerifyOutcome(NamedTuple):
    within_threshold: bool
    distance: int | None = None


@numba.njit(cache=True, nogil=True)
def band_distance(x, y, k):
    """Exact distance if it is <= k, else -1.  Only cells with |i - j| <= k are filled."""
    n = x.shape[0]
    m = y.shape[0]
    if abs(n - m) > k:
        return -1
    if n > m:
        x, y = y, x
        n, m = m, n
    cap = k + 1
    prev = np.full(m + 1, cap, dtype=np.int32)
    cur = np.full(m + 1, cap, dtype=np.int32)
    for j in range(min(m, k) + 1):
        prev[j] = j
    for i in range(1, n + 1):
        lo = max(1, i - k)
        hi = min(m, i + k)
        left = i if lo == 1 else cap
        cur[lo - 1] = left
        rowmin = left
        xi = x[i - 1]
        for j in range(lo, hi + 1):
            v = prev[j - 1] + (1 if xi != y[j - 1] else 0)
            t = prev[j] + 1
            if t < v:
                v = t
            t = left + 1
            if t < v:
                v = t
            if v > cap:
                v = cap
            cur[j] = v
            left = v
            if v < rowmin:
                rowmin = v
        if rowmin > k:
            return -1
        prev, cur = cur, prev
    d = prev[m]
    return d if d <= k else -1


def edit_distance_at_most_k(x: bytes, y: bytes, K: int) -> VerifyOutcome:
    if K < 0:
        raise ValueError("K must be >= 0")
    if abs(len(x) - len(y)) > K:
        return VerifyOutcome(False)
    d = band_distance(as_array(x), as_array(y), K)
    if d < 0:
        return VerifyOutcome(False)
    return VerifyOutcome(True, int(d))


def edit_distance_full(x: bytes, y: bytes) -> int:
    """Levenshtein distance by the full DP table, one numpy row at a time."""
    a = as_array(x).astype(np.int64)
    b = as_array(y).astype(np.int64)
    m = len(b)
    offs = np.arange(m + 1, dtype=np.int64)
    row = offs.copy()
    for i, c in enumerate(a, 1):
        diag = row[:-1] + (b != c)
        up = row[1:] + 1
        best = np.empty(m + 1, dtype=np.int64)
        best[0] = i
        best[1:] = np.minimum(diag, up)
        # left-neighbour chain: best[j] = min_k<=j (best[k] + j - k)
        row = np.minimum.accumulate(best - offs) + offs
    return int(row[m])
