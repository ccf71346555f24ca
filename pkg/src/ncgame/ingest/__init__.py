"""TNTP network ingestion and path enumeration."""
from .paths import DEFAULT_K, UnreachablePairError, bpr_price, enumerate_paths, k_shortest_paths, link_id
from .tntp import (
    CountMismatchError,
    Link,
    MalformedHeaderError,
    MalformedRecordError,
    NegativeCapacityError,
    TntpNetwork,
    TntpParseError,
    TripTable,
    format_net,
    format_trips,
    parse_net,
    parse_trips,
    parse_tntp,
    read_tntp,
    write_tntp,
)

__all__ = [
    "DEFAULT_K",
    "CountMismatchError",
    "Link",
    "MalformedHeaderError",
    "MalformedRecordError",
    "NegativeCapacityError",
    "TntpNetwork",
    "TntpParseError",
    "TripTable",
    "UnreachablePairError",
    "bpr_price",
    "enumerate_paths",
    "format_net",
    "format_trips",
    "k_shortest_paths",
    "link_id",
    "parse_net",
    "parse_tntp",
    "parse_trips",
    "read_tntp",
    "write_tntp",
]
