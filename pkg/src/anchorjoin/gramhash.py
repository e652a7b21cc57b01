"""q-gram hashing and substring fingerprints.

Gram hash values live in the unsigned 64-bit integer domain and are only
ever compared with ``<``.  Two hasher modes exist: a seeded rolling
polynomial hash (finalized through a 64-bit mixer) and a lookup table
loaded from a ``GRAM<TAB>value`` fixture file.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field
from decimal import Decimal
from pathlib import Path
from types import MappingProxyType
from typing import Mapping

import numba
import numpy as np

MASK64 = (1 << 64) - 1
_BASE_SALT = 0x9E3779B97F4A7C15
_KEY_SALT = 0xD1B54A32D192ED03

ROLLING = "rolling-random"
LOOKUP = "lookup-table"


def mix64(x: int) -> int:
    """splitmix64 finalizer on a Python int."""
    x &= MASK64
    x = ((x ^ (x >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    x = ((x ^ (x >> 27)) * 0x94D049BB133111EB) & MASK64
    return x ^ (x >> 31)


def derive_seed(base_seed: int, index: int) -> int:
    """Independent-looking seed number ``index`` derived from ``base_seed``.

    Index 0 returns ``base_seed`` unchanged.
    """
    if index == 0:
        return base_seed & MASK64
    return mix64((base_seed + index * _BASE_SALT) & MASK64)


@numba.njit(cache=True, nogil=True)
def _mix64_nb(x):
    x = (x ^ (x >> np.uint64(30))) * np.uint64(0xBF58476D1CE4E5B9)
    x = (x ^ (x >> np.uint64(27))) * np.uint64(0x94D049BB133111EB)
    return x ^ (x >> np.uint64(31))


@numba.njit(cache=True, nogil=True)
def _rolling_hashes(data, q, base, key):
    n = data.shape[0] - q + 1
    out = np.empty(n, dtype=np.uint64)
    one = np.uint64(1)
    top = one
    for _ in range(q):
        top = top * base
    h = np.uint64(0)
    for i in range(q):
        h = h * base + (np.uint64(data[i]) + one)
    out[0] = _mix64_nb(h ^ key)
    for i in range(1, n):
        h = h * base + (np.uint64(data[i + q - 1]) + one) - top * (np.uint64(data[i - 1]) + one)
        out[i] = _mix64_nb(h ^ key)
    return out


@dataclass(frozen=True)
class GramHasher:
    """Deterministic map from q-grams to 64-bit values.

    Build with :meth:`rolling` or :meth:`from_table` / :meth:`load_fixture`.
    """

    seed: int = 0
    mode: str = ROLLING
    table: Mapping[bytes, int] | None = field(default=None, compare=False, repr=False)

    def __post_init__(self) -> None:
        if self.mode not in (ROLLING, LOOKUP):
            raise ValueError(f"unknown hasher mode {self.mode!r}")
        if self.mode == LOOKUP and self.table is None:
            raise ValueError("lookup-table hasher needs a table")
        object.__setattr__(self, "seed", self.seed & MASK64)

    @classmethod
    def rolling(cls, seed: int = 0) -> GramHasher:
        return cls(seed=seed, mode=ROLLING)

    @classmethod
    def from_table(cls, table: Mapping[bytes, float | int | str]) -> GramHasher:
        """Table hasher.

        Decimal values in (0, 1) (floats or strings) are scaled into the
        64-bit domain preserving order; plain ints are used as-is.
        """
        scaled = {}
        for gram, value in table.items():
            if isinstance(gram, str):
                gram = gram.encode()
            scaled[bytes(gram)] = _scale_unit(value)
        return cls(mode=LOOKUP, table=MappingProxyType(scaled))

    @classmethod
    def load_fixture(cls, path: str | Path) -> GramHasher:
        """Read a ``GRAM<TAB>value`` file.  A repeated gram keeps its first value."""
        table: dict[bytes, str] = {}
        for lineno, raw in enumerate(Path(path).read_bytes().splitlines(), 1):
            line = raw.strip()
            if not line or line.startswith(b"#"):
                continue
            parts = line.split(b"\t")
            if len(parts) != 2:
                raise ValueError(f"{path}:{lineno}: expected GRAM<TAB>value")
            table.setdefault(parts[0], parts[1].decode())
        return cls.from_table(table)

    @property
    def base(self) -> int:
        return mix64(self.seed ^ _BASE_SALT) | 1

    @property
    def key(self) -> int:
        return mix64(self.seed ^ _KEY_SALT)

    def with_seed(self, seed: int) -> GramHasher:
        if self.mode == LOOKUP:
            return self
        return GramHasher.rolling(seed)

    def hash_gram(self, gram: bytes) -> int:
        """Hash a single gram directly (no rolling)."""
        if self.mode == LOOKUP:
            try:
                return self.table[bytes(gram)]
            except KeyError:
                raise KeyError(f"gram {bytes(gram)!r} missing from lookup table") from None
        h = 0
        base = self.base
        for c in gram:
            h = (h * base + c + 1) & MASK64
        return mix64(h ^ self.key)


def _scale_unit(value: float | int | str) -> int:
    # ints are taken as already-scaled 64-bit values
    if isinstance(value, int) and not isinstance(value, bool):
        if not 0 <= value <= MASK64:
            raise ValueError(f"table value {value} outside the 64-bit range")
        return value
    d = Decimal(str(value))
    if not 0 < d < 1:
        raise ValueError(f"table value {value} outside (0, 1)")
    return int(d * (1 << 64))


def as_array(s: bytes | bytearray | memoryview | np.ndarray) -> np.ndarray:
    if isinstance(s, np.ndarray):
        return s.astype(np.uint8, copy=False)
    return np.frombuffer(bytes(s), dtype=np.uint8)


def gram_hash_sequence(s: bytes, q: int, hasher: GramHasher) -> np.ndarray:
    """Hash values of all ``len(s) - q + 1`` q-grams of ``s`` as a uint64 array."""
    if q < 1:
        raise ValueError("gram length must be positive")
    if len(s) < q:
        raise ValueError("string shorter than gram length")
    if hasher.mode == LOOKUP:
        raw = bytes(s)
        return np.fromiter(
            (hasher.hash_gram(raw[i : i + q]) for i in range(len(raw) - q + 1)),
            dtype=np.uint64,
            count=len(raw) - q + 1,
        )
    return _rolling_hashes(as_array(s), q, np.uint64(hasher.base), np.uint64(hasher.key))


def content_fingerprint(s: bytes, pos: int, length: int) -> int:
    """64-bit content hash of ``s[pos .. pos+length-1]`` (1-based ``pos``)."""
    if length < 1 or pos < 1 or pos + length - 1 > len(s):
        raise ValueError("span exceeds string")
    return fingerprint_bytes(bytes(s[pos - 1 : pos - 1 + length]))


def fingerprint_bytes(chunk: bytes) -> int:
    return int.from_bytes(hashlib.blake2b(chunk, digest_size=8).digest(), "little")
