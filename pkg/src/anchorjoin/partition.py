"""Local-hash-minimum anchors and the string partitions they induce.

Positions in this module are 1-based, matching the (pos, len) span
convention used throughout the join.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numba
import numpy as np

from .gramhash import GramHasher, derive_seed, gram_hash_sequence

Q_MIN = 3


@dataclass(frozen=True)
class PartitionParams:
    T: int
    q: int
    repetitions: int = 1
    seed: int = 0

    def __post_init__(self) -> None:
        if self.T < 1:
            raise ValueError("T must be >= 1")
        if self.q < 1:
            raise ValueError("q must be >= 1")
        if self.repetitions < 1:
            raise ValueError("repetitions must be >= 1")


class PartitionSpan(NamedTuple):
    pos: int
    len: int


@dataclass
class PartitionList:
    spans: list[PartitionSpan]
    radius_used: int
    string_id: int = -1

    def substrings(self, s: bytes) -> list[bytes]:
        return [bytes(s[p - 1 : p - 1 + n]) for p, n in self.spans]


def neighborhood_radius(string_len: int, q: int, T: int) -> int:
    """Local-minimum radius, clamped to at least 1."""
    if string_len < q:
        raise ValueError("string shorter than gram length")
    return max(1, (string_len - q + 1 - T) // (2 * T + 2))


def default_gram_length(
    max_len: int, T: int, alphabet_size: int, min_len: int | None = None
) -> int:
    """``ceil(3 * log_{alphabet}(max_len / T))``, at least 3.

    With ``min_len`` (shortest string in a dataset) the result is capped there.
    """
    if alphabet_size < 2:
        raise ValueError("alphabet size must be >= 2")
    if T < 1:
        raise ValueError("T must be >= 1")
    q = Q_MIN
    if max_len > T:
        # round before ceil so exact powers (log term == 1) do not drift up
        q = max(Q_MIN, math.ceil(round(3 * math.log(max_len / T) / math.log(alphabet_size), 9)))
    if min_len is not None:
        q = max(1, min(q, min_len))
    return q


@numba.njit(cache=True, nogil=True)
def _interior_anchors(h, r):
    n = h.shape[0]
    out = np.empty(max(n - 2 * r, 0), dtype=np.int64)
    k = 0
    for i in range(r, n - r):
        v = h[i]
        ok = True
        for j in range(i - r, i + r + 1):
            if j != i and v >= h[j]:
                ok = False
                break
        if ok:
            out[k] = i + 1
            k += 1
    return out[:k]


def interior_anchors(hashes: np.ndarray, r: int) -> np.ndarray:
    """1-based positions that are strict minima of ``hashes`` within radius ``r``."""
    return _interior_anchors(np.ascontiguousarray(hashes, dtype=np.uint64), r)


def find_anchors(s: bytes, T: int, hasher: GramHasher, q: int) -> list[int]:
    r = neighborhood_radius(len(s), q, T)
    inner = interior_anchors(gram_hash_sequence(s, q, hasher), r)
    anchors = [1]
    anchors.extend(int(a) for a in inner if a != 1)
    if anchors[-1] != len(s):
        anchors.append(len(s))
    return anchors


def spans_from_anchors(anchors: list[int], string_len: int) -> list[PartitionSpan]:
    if len(anchors) < 2:
        return [PartitionSpan(1, string_len)]
    spans = [PartitionSpan(a, b - a) for a, b in zip(anchors[:-2], anchors[1:-1])]
    # last span runs through the final letter so the spans tile the string
    spans.append(PartitionSpan(anchors[-2], string_len - anchors[-2] + 1))
    return spans


def partition_string(
    s: bytes, T: int, hasher: GramHasher, q: int, string_id: int = -1
) -> PartitionList:
    anchors = find_anchors(s, T, hasher, q)
    return PartitionList(
        spans_from_anchors(anchors, len(s)),
        radius_used=neighborhood_radius(len(s), q, T),
        string_id=string_id,
    )


def partition_with_repetitions(
    s: bytes,
    T: int,
    base_seed: int,
    R: int,
    q: int,
    string_id: int = -1,
    hasher: GramHasher | None = None,
) -> PartitionList:
    """Union of ``R`` independently seeded partitions, duplicate spans removed.

    Repetition ``i`` uses ``derive_seed(base_seed, i)``; repetition 0 is the
    plain partition under ``base_seed``.  A lookup-table ``hasher`` ignores
    seeds, so every repetition yields the same spans.
    """
    if R < 1:
        raise ValueError("repetitions must be >= 1")
    base = hasher or GramHasher.rolling(base_seed)
    seen: set[PartitionSpan] = set()
    spans: list[PartitionSpan] = []
    radius = 0
    for i in range(R):
        part = partition_string(s, T, base.with_seed(derive_seed(base_seed, i)), q, string_id)
        radius = part.radius_used
        for span in part.spans:
            if span not in seen:
                seen.add(span)
                spans.append(span)
    return PartitionList(spans, radius_used=radius, string_id=string_id)


def partition_record(s: bytes, params: PartitionParams, string_id: int = -1,
                     hasher: GramHasher | None = None) -> PartitionList:
    """Partition one dataset string; strings shorter than ``q`` become one span."""
    if len(s) < params.q:
        return PartitionList([PartitionSpan(1, len(s))] if s else [], 0, string_id)
    return partition_with_repetitions(
        s, params.T, params.seed, params.repetitions, params.q, string_id, hasher
    )
