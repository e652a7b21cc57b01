"""Edit-distance similarity joins by local-hash-minimum string partitioning."""

__version__ = "0.1.0"

from .dataset import StringRecord, load_dataset
from .gramhash import GramHasher, content_fingerprint, gram_hash_sequence
from .joincore import JoinResult, length_filter, min_join, position_filter
from .minhash import MinHashParams, minhash_join, minhash_signatures
from .partition import (
    PartitionParams,
    PartitionSpan,
    default_gram_length,
    find_anchors,
    neighborhood_radius,
    partition_string,
    partition_with_repetitions,
)
from .verify import edit_distance_at_most_k, edit_distance_full

__all__ = [
    "GramHasher",
    "JoinResult",
    "MinHashParams",
    "PartitionParams",
    "PartitionSpan",
    "StringRecord",
    "content_fingerprint",
    "default_gram_length",
    "edit_distance_at_most_k",
    "edit_distance_full",
    "find_anchors",
    "gram_hash_sequence",
    "length_filter",
    "load_dataset",
    "min_join",
    "minhash_join",
    "minhash_signatures",
    "neighborhood_radius",
    "partition_string",
    "partition_with_repetitions",
    "position_filter",
]
