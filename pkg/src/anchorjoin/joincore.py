"""Partition hash join with length and position filters.

Strings are streamed shortest first (ties broken by content, then by
dataset index).  Each partition probes a fingerprint-keyed index; index
entries whose string is too short to pair with the current string are
dropped on visit, since every later string is at least as long.
"""

from __future__ import annotations

import time
from collections import defaultdict
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Iterable, NamedTuple, Sequence

from .dataset import StringRecord, as_records
from .gramhash import GramHasher, fingerprint_bytes
from .partition import PartitionList, PartitionParams, partition_record
from .verify import edit_distance_at_most_k


class IndexEntry(NamedTuple):
    string_id: int
    pos: int
    len: int
    string_len: int


class CandidatePair(NamedTuple):
    id_a: int
    id_b: int

    @classmethod
    def of(cls, i: int, j: int) -> CandidatePair:
        if i == j:
            raise ValueError("a string cannot pair with itself")
        return cls(i, j) if i < j else cls(j, i)


@dataclass
class JoinStats:
    partitions: int = 0
    bucket_probes: int = 0
    evicted: int = 0
    candidates_before_dedup: int = 0
    candidates_after_dedup: int = 0
    verifications: int = 0
    timings: dict[str, float] = field(default_factory=dict)

    def counts(self) -> dict[str, int]:
        return {
            "partitions": self.partitions,
            "bucket_probes": self.bucket_probes,
            "evicted": self.evicted,
            "candidates_before_dedup": self.candidates_before_dedup,
            "candidates_after_dedup": self.candidates_after_dedup,
            "verifications": self.verifications,
        }


@dataclass
class JoinResult:
    pairs: list[tuple[int, int, int]]
    stats: JoinStats
    candidates: set[CandidatePair] = field(default_factory=set, repr=False)

    def pair_set(self) -> set[tuple[int, int]]:
        return {(a, b) for a, b, _ in self.pairs}


def length_filter(len_a: int, len_b: int, K: int) -> bool:
    return abs(len_a - len_b) <= K


def position_filter(pos_a: int, len_str_a: int, pos_b: int, len_str_b: int, K: int) -> bool:
    """Can a match at ``pos_a``/``pos_b`` lie on an alignment of cost <= K?"""
    return abs(pos_a - pos_b) + abs((len_str_a - pos_a) - (len_str_b - pos_b)) <= K


class PartitionIndex:
    """Fingerprint -> list of :class:`IndexEntry`."""

    def __init__(self) -> None:
        self.buckets: dict[int, list[IndexEntry]] = defaultdict(list)

    def __len__(self) -> int:
        return sum(len(b) for b in self.buckets.values())

    def insert(self, fp: int, entry: IndexEntry) -> None:
        self.buckets[fp].append(entry)

    def probe(self, fp: int, current_len: int, K: int, evict: bool = True) -> tuple[list[IndexEntry], int]:
        """Entries in bucket ``fp`` passing the length filter, plus the number evicted.

        With ``evict`` false nothing is removed and the length filter is left
        to the caller.
        """
        bucket = self.buckets.get(fp)
        if not bucket:
            return [], 0
        if not evict:
            return list(bucket), 0
        live = [e for e in bucket if current_len - e.string_len <= K]
        removed = len(bucket) - len(live)
        if removed:
            self.buckets[fp] = live
        return live, removed

    def evict_stale(self, current_len: int, K: int) -> int:
        removed = 0
        for fp in list(self.buckets):
            before = self.buckets[fp]
            live = [e for e in before if current_len - e.string_len <= K]
            removed += len(before) - len(live)
            if live:
                self.buckets[fp] = live
            else:
                del self.buckets[fp]
        return removed


def evict_stale(index: PartitionIndex, current_len: int, K: int) -> int:
    return index.evict_stale(current_len, K)


def sorted_order(records: Sequence[StringRecord]) -> list[StringRecord]:
    return sorted(records, key=lambda r: (len(r.data), r.data, r.index))


def partition_all(
    records: Sequence[StringRecord],
    params: PartitionParams,
    hasher: GramHasher | None = None,
    threads: int = 1,
) -> list[PartitionList]:
    def one(rec: StringRecord) -> PartitionList:
        return partition_record(rec.data, params, rec.index, hasher)

    if threads > 1:
        with ThreadPoolExecutor(threads) as pool:
            return list(pool.map(one, records))
    return [one(r) for r in records]


def verify_candidates(
    records: dict[int, StringRecord],
    candidates: Iterable[CandidatePair],
    K: int,
    threads: int = 1,
) -> list[tuple[int, int, int]]:
    ordered = sorted(candidates)

    def check(pair: CandidatePair):
        return edit_distance_at_most_k(records[pair.id_a].data, records[pair.id_b].data, K)

    if threads > 1:
        with ThreadPoolExecutor(threads) as pool:
            outcomes = list(pool.map(check, ordered))
    else:
        outcomes = [check(p) for p in ordered]
    return [(p.id_a, p.id_b, o.distance) for p, o in zip(ordered, outcomes) if o.within_threshold]


def min_join(
    dataset: Sequence[StringRecord] | Sequence[bytes],
    K: int,
    params: PartitionParams,
    hasher: GramHasher | None = None,
    *,
    use_length_filter: bool = True,
    use_position_filter: bool = True,
    evict: bool = True,
    threads: int = 1,
) -> JoinResult:
    """All pairs within edit distance ``K`` that share a partition.

    ``hasher`` overrides the seeded rolling hasher (e.g. a lookup table).
    The filter and eviction switches only change how much work is done,
    never which verified pairs come out.
    """
    records = as_records(dataset)
    if not records:
        raise ValueError("empty dataset")
    if K < 0:
        raise ValueError("K must be >= 0")
    stats = JoinStats()

    t0 = time.perf_counter()
    order = sorted_order(records)
    parts = partition_all(order, params, hasher, threads)
    stats.partitions = sum(len(p.spans) for p in parts)
    t1 = time.perf_counter()
    stats.timings["partition"] = t1 - t0

    index = PartitionIndex()
    candidates: set[CandidatePair] = set()
    evict = evict and use_length_filter
    for rec, part in zip(order, parts):
        n_i = len(rec.data)
        entries = []
        for pos, length in part.spans:
            fp = fingerprint_bytes(rec.data[pos - 1 : pos - 1 + length])
            live, removed = index.probe(fp, n_i, K, evict)
            stats.evicted += removed
            stats.bucket_probes += len(live) + removed
            for e in live:
                if e.string_id == rec.index:
                    continue
                if use_length_filter and not length_filter(n_i, e.string_len, K):
                    continue
                if use_position_filter and not position_filter(pos, n_i, e.pos, e.string_len, K):
                    continue
                stats.candidates_before_dedup += 1
                candidates.add(CandidatePair.of(rec.index, e.string_id))
            entries.append((fp, IndexEntry(rec.index, pos, length, n_i)))
        # inserted after probing so a string never meets its own partitions
        for fp, entry in entries:
            index.insert(fp, entry)
    stats.candidates_after_dedup = len(candidates)
    t2 = time.perf_counter()
    stats.timings["join"] = t2 - t1

    by_id = {r.index: r for r in records}
    pairs = verify_candidates(by_id, candidates, K, threads)
    stats.verifications = len(candidates)
    stats.timings["verify"] = time.perf_counter() - t2
    return JoinResult(pairs, stats, candidates)
