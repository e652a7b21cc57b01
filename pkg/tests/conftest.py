from pathlib import Path

import numpy as np
import pytest

from anchorjoin.dataset import load_dataset
from anchorjoin.gramhash import GramHasher

FIXTURES = Path(__file__).parent / "fixtures"
GRAM_TABLE = FIXTURES / "gram_values.tsv"
FIVE = FIXTURES / "five_strings.txt"

S1 = b"ACGTGCTAACGTGCTAACGTG"
S2 = b"AAACGTGCTAACGTGCTAACCT"
S3 = b"TCGAATCGTCGAATCGTCGAA"
S4 = b"TCGAATCGTCGAATCGTGGAA"
S5 = b"GTGCGAATCGTCGAATCGTCG"


@pytest.fixture(scope="session")
def table_hasher() -> GramHasher:
    return GramHasher.load_fixture(GRAM_TABLE)


@pytest.fixture(scope="session")
def five():
    return load_dataset(FIVE)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def random_dna(rng, n: int) -> bytes:
    return bytes(rng.choice(np.frombuffer(b"ACGT", dtype=np.uint8), n))


def unit(value: int) -> float:
    return value / 2**64


def pytest_terminal_summary(terminalreporter):
    from . import test_acceptance

    if test_acceptance.LINES:
        terminalreporter.section("acceptance criteria")
        for line in test_acceptance.LINES:
            terminalreporter.write_line(line)
