"""Top-l MinHash signature join, kept as a comparison baseline.

Every string contributes the ``ell`` smallest distinct q-gram hash values
under one hash function.  Strings sharing any signature become candidates
(after the length filter) and are verified like the partition join.
"""

from __future__ import annotations

import time
from collections import defaultdict
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .dataset import StringRecord, as_records
from .gramhash import GramHasher, gram_hash_sequence
from .joincore import CandidatePair, JoinResult, JoinStats, length_filter, sorted_order, verify_candidates


@dataclass(frozen=True)
class MinHashParams:
    q: int
    ell: int
    seed: int = 0

    def __post_init__(self) -> None:
        if self.q < 1:
            raise ValueError("q must be >= 1")
        if self.ell < 1:
            raise ValueError("ell must be >= 1")


def minhash_signatures(s: bytes, params: MinHashParams, hasher: GramHasher | None = None) -> list[int]:
    """The ``ell`` smallest distinct gram hashes of ``s``, ascending."""
    hasher = hasher or GramHasher.rolling(params.seed)
    values = np.unique(gram_hash_sequence(s, params.q, hasher))
    return [int(v) for v in values[: params.ell]]


def minhash_join(
    dataset: Sequence[StringRecord] | Sequence[bytes],
    K: int,
    params: MinHashParams,
    hasher: GramHasher | None = None,
    threads: int = 1,
) -> JoinResult:
    records = as_records(dataset)
    if not records:
        raise ValueError("empty dataset")
    if K < 0:
        raise ValueError("K must be >= 0")
    stats = JoinStats()

    t0 = time.perf_counter()
    order = sorted_order(records)
    sigs = [minhash_signatures(r.data, params, hasher) if len(r.data) >= params.q else [] for r in order]
    stats.partitions = sum(len(s) for s in sigs)
    t1 = time.perf_counter()
    stats.timings["partition"] = t1 - t0

    buckets: dict[int, list[StringRecord]] = defaultdict(list)
    candidates: set[CandidatePair] = set()
    for rec, sig in zip(order, sigs):
        for v in sig:
            bucket = buckets[v]
            live = [o for o in bucket if length_filter(len(rec.data), len(o.data), K)]
            stats.bucket_probes += len(bucket)
            stats.evicted += len(bucket) - len(live)
            for other in live:
                stats.candidates_before_dedup += 1
                candidates.add(CandidatePair.of(rec.index, other.index))
            live.append(rec)
            buckets[v] = live
    stats.candidates_after_dedup = len(candidates)
    t2 = time.perf_counter()
    stats.timings["join"] = t2 - t1

    pairs = verify_candidates({r.index: r for r in records}, candidates, K, threads)
    stats.verifications = len(candidates)
    stats.timings["verify"] = time.perf_counter() - t2
    return JoinResult(pairs, stats, candidates)
