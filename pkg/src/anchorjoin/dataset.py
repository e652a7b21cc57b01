"""Dataset records and the one-string-per-line text format."""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Sequence


@dataclass(frozen=True)
class StringRecord:
    index: int
    data: bytes

    @property
    def length(self) -> int:
        return len(self.data)


def as_records(dataset: Sequence[StringRecord] | Sequence[bytes | str]) -> list[StringRecord]:
    out = []
    for i, item in enumerate(dataset):
        if isinstance(item, StringRecord):
            out.append(item)
        elif isinstance(item, str):
            out.append(StringRecord(i, item.encode()))
        else:
            out.append(StringRecord(i, bytes(item)))
    return out


def load_dataset(path: str | Path) -> list[StringRecord]:
    """Read one string per line; ids are 0-based line numbers.

    CRLF endings are normalized and a final newline is optional.  Empty or
    whitespace-only lines are rejected.
    """
    path = Path(path)
    if not path.is_file():
        raise FileNotFoundError(f"dataset not found: {path}")
    raw = path.read_bytes().replace(b"\r\n", b"\n")
    if raw.endswith(b"\n"):
        raw = raw[:-1]
    if not raw:
        raise ValueError(f"empty dataset: {path}")
    records = []
    for i, line in enumerate(raw.split(b"\n")):
        if not line.strip():
            raise ValueError(f"{path}:{i + 1}: empty or whitespace-only line")
        records.append(StringRecord(i, line))
    return records


def write_dataset(path: str | Path, strings: Sequence[bytes]) -> None:
    with open(path, "wb") as fh:
        for s in strings:
            if b"\n" in s or b"\r" in s:
                raise ValueError("strings may not contain line breaks")
            fh.write(s + b"\n")


def alphabet(records: Sequence[StringRecord]) -> set[int]:
    letters: set[int] = set()
    for r in records:
        letters.update(r.data)
    return letters
