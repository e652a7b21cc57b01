"""Ground truth, synthetic data with planted similar pairs, and reports."""

from __future__ import annotations

import csv
import string
import warnings
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

import numba
import numpy as np

from .dataset import StringRecord, as_records
from .gramhash import GramHasher, gram_hash_sequence
from .partition import interior_anchors, neighborhood_radius
from .verify import band_distance, edit_distance_full

BRUTE_FORCE_GUARD = 5000
COUNT_FILTER_Q = 5
LETTERS = (string.ascii_uppercase + string.ascii_lowercase + string.digits).encode()
DNA = b"ACGT"


@dataclass(frozen=True)
class SyntheticSpec:
    n: int
    length: int
    alphabet_size: int = 4
    clusters: int = 0
    cluster_size: int = 2
    k_plant: int = 0
    seed: int = 0

    def __post_init__(self) -> None:
        if self.alphabet_size < 2:
            raise ValueError("alphabet size must be >= 2")
        if self.alphabet_size > len(LETTERS):
            raise ValueError(f"alphabet size must be <= {len(LETTERS)}")
        if self.cluster_size < 1 or self.clusters < 0:
            raise ValueError("bad cluster layout")
        if self.clusters * self.cluster_size > self.n:
            raise ValueError("clusters do not fit in n strings")
        if self.length < 1 or self.k_plant < 0:
            raise ValueError("length must be >= 1 and k_plant >= 0")

    @property
    def letters(self) -> bytes:
        return DNA if self.alphabet_size == 4 else LETTERS[: self.alphabet_size]


@dataclass
class AnchorStats:
    counts: np.ndarray
    T: int

    @property
    def mean(self) -> float:
        return float(self.counts.mean())

    @property
    def variance(self) -> float:
        return float(self.counts.var(ddof=1)) if len(self.counts) > 1 else 0.0

    def histogram(self) -> dict[int, int]:
        values, freq = np.unique(self.counts, return_counts=True)
        return {int(v): int(f) for v, f in zip(values, freq)}

    def cdf(self) -> list[tuple[int, int, float]]:
        """(anchors, runs with exactly that many, fraction of runs with at most that many)."""
        total = len(self.counts)
        rows, acc = [], 0
        for v, f in self.histogram().items():
            acc += f
            rows.append((v, f, acc / total))
        return rows

    def tail_fraction(self, c: float) -> float:
        """Fraction of runs with |X - T| >= sqrt(c T)."""
        return float(np.mean(np.abs(self.counts - self.T) >= np.sqrt(c * self.T)))

    def mass_within(self, width: float) -> float:
        return float(np.mean(np.abs(self.counts - self.T) <= width))


@dataclass
class EvalReport:
    recall: float
    precision: float
    truth_size: int
    found_size: int
    stage_timings: dict[str, float] = field(default_factory=dict)
    anchor_stats: AnchorStats | None = None

    def metrics(self) -> dict[str, float | int]:
        return {
            "recall": self.recall,
            "precision": self.precision,
            "truth_size": self.truth_size,
            "found_size": self.found_size,
        }


def _mutate(seed: bytes, edits: int, letters: bytes, rng: np.random.Generator) -> bytes:
    s = bytearray(seed)
    for _ in range(edits):
        op = int(rng.integers(3)) if s else 0
        if op == 0:
            s.insert(int(rng.integers(len(s) + 1)), letters[int(rng.integers(len(letters)))])
        elif op == 1:
            del s[int(rng.integers(len(s)))]
        else:
            i = int(rng.integers(len(s)))
            choices = [c for c in letters if c != s[i]]
            s[i] = choices[int(rng.integers(len(choices)))]
    return bytes(s)


def generate_synthetic(spec: SyntheticSpec) -> tuple[list[bytes], list[tuple[int, int]]]:
    """Random strings with planted clusters.

    Each cluster starts from a uniform random string; every other member
    is that string after exactly ``k_plant`` random edits.  Returns the
    shuffled strings and the planted (first member, other member) pairs.
    """
    rng = np.random.default_rng(spec.seed)
    letters = np.frombuffer(spec.letters, dtype=np.uint8)

    def fresh() -> bytes:
        return letters[rng.integers(len(letters), size=spec.length)].tobytes()

    strings: list[bytes] = []
    groups: list[list[int]] = []
    for _ in range(spec.clusters):
        base = fresh()
        members = [len(strings)]
        strings.append(base)
        for _ in range(spec.cluster_size - 1):
            members.append(len(strings))
            strings.append(_mutate(base, spec.k_plant, spec.letters, rng))
        groups.append(members)
    while len(strings) < spec.n:
        strings.append(fresh())

    perm = rng.permutation(len(strings))
    where = np.empty_like(perm)
    where[perm] = np.arange(len(perm))
    shuffled = [strings[int(i)] for i in perm]
    planted = []
    for members in groups:
        head = int(where[members[0]])
        for m in members[1:]:
            a, b = head, int(where[m])
            planted.append((min(a, b), max(a, b)))
    return shuffled, sorted(planted)


@numba.njit(cache=True, nogil=True)
def _common_grams(a, b, need):
    """Size of the multiset intersection, or any value < need once need is out of reach."""
    i = j = c = 0
    na = a.shape[0]
    nb = b.shape[0]
    while i < na and j < nb:
        if c + min(na - i, nb - j) < need:
            return c
        if a[i] == b[j]:
            c += 1
            i += 1
            j += 1
        elif a[i] < b[j]:
            i += 1
        else:
            j += 1
    return c


@numba.njit(cache=True, nogil=True)
def _all_pairs(buf, offsets, grams, gram_offsets, ids, k, qf):
    n = offsets.shape[0] - 1
    out = []
    for a in range(n):
        x = buf[offsets[a] : offsets[a + 1]]
        gx = grams[gram_offsets[a] : gram_offsets[a + 1]]
        for b in range(a + 1, n):
            y = buf[offsets[b] : offsets[b + 1]]
            # sorted by length: everything further is longer still
            if y.shape[0] - x.shape[0] > k:
                break
            # q-gram count bound: one edit destroys at most qf grams
            need = y.shape[0] - qf + 1 - k * qf
            if need > 0 and x.shape[0] >= qf:
                gy = grams[gram_offsets[b] : gram_offsets[b + 1]]
                if _common_grams(gx, gy, need) < need:
                    continue
            d = band_distance(x, y, k)
            if d >= 0:
                ia, ib = ids[a], ids[b]
                if ia > ib:
                    ia, ib = ib, ia
                out.append((ia, ib, d))
    return out


def _sorted_gram_codes(s: bytes, qf: int) -> np.ndarray:
    arr = np.frombuffer(s, dtype=np.uint8).astype(np.uint64)
    if len(arr) < qf:
        return np.zeros(0, dtype=np.uint64)
    codes = np.zeros(len(arr) - qf + 1, dtype=np.uint64)
    for t in range(qf):
        codes = codes * np.uint64(256) + arr[t : len(arr) - qf + 1 + t]
    codes.sort()
    return codes


def brute_force_join(
    dataset: Sequence[StringRecord] | Sequence[bytes], K: int, full_dp: bool = False
) -> set[tuple[int, int, int]]:
    """Every pair ``(id_a, id_b, distance)`` with distance <= K.

    Pairs are skipped without DP only when the length gap or the q-gram
    count lower bound already proves the distance exceeds K.

    ``full_dp`` swaps the banded DP for the quadratic oracle (small inputs only).
    """
    records = as_records(dataset)
    if len(records) > BRUTE_FORCE_GUARD:
        warnings.warn(f"brute force over {len(records)} strings is quadratic", stacklevel=2)
    if K < 0:
        raise ValueError("K must be >= 0")
    if full_dp:
        out = set()
        for i, a in enumerate(records):
            for b in records[i + 1 :]:
                d = edit_distance_full(a.data, b.data)
                if d <= K:
                    out.add((min(a.index, b.index), max(a.index, b.index), d))
        return out
    order = sorted(records, key=lambda r: len(r.data))
    lengths = np.array([len(r.data) for r in order], dtype=np.int64)
    offsets = np.zeros(len(order) + 1, dtype=np.int64)
    np.cumsum(lengths, out=offsets[1:])
    buf = np.frombuffer(b"".join(r.data for r in order), dtype=np.uint8)
    if buf.size == 0:
        buf = np.zeros(1, dtype=np.uint8)
    ids = np.array([r.index for r in order], dtype=np.int64)
    codes = [_sorted_gram_codes(r.data, COUNT_FILTER_Q) for r in order]
    gram_offsets = np.zeros(len(order) + 1, dtype=np.int64)
    np.cumsum([len(c) for c in codes], out=gram_offsets[1:])
    grams = np.concatenate(codes + [np.zeros(1, dtype=np.uint64)])
    found = _all_pairs(buf, offsets, grams, gram_offsets, ids, K, COUNT_FILTER_Q)
    return {(int(a), int(b), int(d)) for a, b, d in found}


def _pair_keys(pairs: Iterable[tuple]) -> set[tuple[int, int]]:
    return {(min(p[0], p[1]), max(p[0], p[1])) for p in pairs}


def measure_recall(found: Iterable[tuple], truth: Iterable[tuple]) -> EvalReport:
    f = _pair_keys(found)
    t = _pair_keys(truth)
    hit = len(f & t)
    return EvalReport(
        recall=hit / len(t) if t else 1.0,
        precision=hit / len(f) if f else 1.0,
        truth_size=len(t),
        found_size=len(f),
    )


def anchor_statistics(
    strings: Sequence[bytes], T: int, q: int, seeds: Sequence[int]
) -> AnchorStats:
    """Interior anchor counts for every (seed, string) combination."""
    counts = []
    for seed in seeds:
        hasher = GramHasher.rolling(seed)
        for s in strings:
            r = neighborhood_radius(len(s), q, T)
            counts.append(len(interior_anchors(gram_hash_sequence(s, q, hasher), r)))
    return AnchorStats(np.array(counts, dtype=np.int64), T)


def write_stage_csv(path: str | Path, timings: dict[str, float]) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["stage", "millis"])
        for stage, secs in timings.items():
            w.writerow([stage, f"{secs * 1000:.3f}"])


def write_anchor_csv(path: str | Path, stats: AnchorStats) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["anchors", "count", "frequency"])
        for anchors, count, cum in stats.cdf():
            w.writerow([anchors, count, f"{cum:.6f}"])


def write_metric_csv(path: str | Path, metrics: dict[str, float | int]) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["metric", "value"])
        for key, value in metrics.items():
            w.writerow([key, f"{value:.6f}" if isinstance(value, float) else value])
