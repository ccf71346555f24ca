"""Reader and writer for the TNTP text subset used by the standard test networks.

Network files start with a metadata block of ``<KEY> value`` lines closed by
``<END OF METADATA>``, followed by a ``~`` column header and one row per
link terminated by ``;``.  Trip files share the metadata block and list
``Origin o`` sections of ``destination : volume;`` entries.

Recognized link columns are ``init_node, term_node, capacity, length,
free_flow_time, b, power, speed, toll, link_type``.  The first-thru-node
value, tolls and link types are kept for round-tripping but play no part
in the prices.  Text after ``~`` outside the header row is a comment.
"""
from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from pathlib import Path

LINK_COLUMNS = (
    "init_node", "term_node", "capacity", "length", "free_flow_time",
    "b", "power", "speed", "toll", "link_type",
)
_REQUIRED = LINK_COLUMNS[:7]
_META = re.compile(r"^<([^>]+)>\s*(.*)$")
_ENTRY = re.compile(r"(\d+)\s*:\s*([-+0-9.eE]+)")


class TntpParseError(ValueError):
    """Base class; ``line`` is 1-based (``None`` when not tied to a line)."""

    kind = "parse error"

    def __init__(self, message, line=None, source="net"):
        self.line = line
        self.source = source
        where = f"{source} line {line}: " if line is not None else f"{source}: "
        super().__init__(f"{where}{self.kind}: {message}")


class MalformedHeaderError(TntpParseError):
    kind = "malformed header"


class CountMismatchError(TntpParseError):
    kind = "count mismatch"


class NegativeCapacityError(TntpParseError):
    kind = "negative capacity"


class MalformedRecordError(TntpParseError):
    kind = "malformed record"


@dataclass(frozen=True)
class Link:
    init_node: int
    term_node: int
    capacity: float
    length: float
    free_flow_time: float
    b: float
    power: float
    speed: float = 0.0
    toll: float = 0.0
    link_type: int = 1


@dataclass
class TntpNetwork:
    n_nodes: int
    links: list
    n_zones: int | None = None
    first_thru_node: int = 1
    metadata: dict = field(default_factory=dict)

    @property
    def n_links(self) -> int:
        return len(self.links)


@dataclass
class TripTable:
    demand: dict
    n_zones: int | None = None
    total: float | None = None
    metadata: dict = field(default_factory=dict)

    def pairs(self, positive_only: bool = True) -> list:
        """``(origin, destination, volume)`` sorted by origin then destination; self-pairs skipped."""
        out = []
        for o in sorted(self.demand):
            for d in sorted(self.demand[o]):
                v = self.demand[o][d]
                if o != d and (v > 0 or not positive_only):
                    out.append((o, d, v))
        return out

    @property
    def total_demand(self) -> float:
        return math.fsum(v for row in self.demand.values() for v in row.values())


def _metadata(lines, source):
    meta, i = {}, 0
    while i < len(lines):
        raw = lines[i].strip()
        i += 1
        if not raw:
            continue
        if raw.startswith("~"):
            continue
        m = _META.match(raw)
        if not m:
            raise MalformedHeaderError(f"expected '<KEY> value', got {raw!r}", i, source)
        key = m.group(1).strip().upper()
        if key == "END OF METADATA":
            return meta, i
        meta[key] = (m.group(2).strip(), i)
    raise MalformedHeaderError("missing <END OF METADATA>", i, source)


def _int_meta(meta, key, source, required=True):
    if key not in meta:
        if required:
            raise MalformedHeaderError(f"missing <{key}>", None, source)
        return None
    value, line = meta[key]
    try:
        return int(float(value))
    except ValueError:
        raise MalformedHeaderError(f"<{key}> must be a number, got {value!r}", line, source) from None


def parse_net(text: str) -> TntpNetwork:
    lines = text.splitlines()
    meta, i = _metadata(lines, "net")
    n_nodes = _int_meta(meta, "NUMBER OF NODES", "net")
    n_links = _int_meta(meta, "NUMBER OF LINKS", "net")
    n_zones = _int_meta(meta, "NUMBER OF ZONES", "net", required=False)
    first = _int_meta(meta, "FIRST THRU NODE", "net", required=False) or 1
    columns = list(LINK_COLUMNS)
    links = []
    header_seen = False
    for j in range(i, len(lines)):
        lineno = j + 1
        raw = lines[j].strip()
        if not raw:
            continue
        if raw.startswith("~"):
            if not header_seen and not links:
                names = [c.strip().lower() for c in raw[1:].replace(";", " ").split()]
                if names:
                    missing = [c for c in _REQUIRED if c not in names]
                    if missing:
                        raise MalformedHeaderError(f"link header lacks columns {missing}", lineno, "net")
                    columns = names
                header_seen = True
            continue
        body = raw.split("~", 1)[0].strip().rstrip(";").strip()
        if not body:
            continue
        parts = body.split()
        if len(parts) < 7:
            raise MalformedRecordError(f"expected at least 7 fields, got {len(parts)}", lineno, "net")
        try:
            values = dict(zip(columns, (float(p) for p in parts)))
        except ValueError as exc:
            raise MalformedRecordError(str(exc), lineno, "net") from None
        u, v = int(values["init_node"]), int(values["term_node"])
        for node in (u, v):
            if not 1 <= node <= n_nodes:
                raise MalformedRecordError(f"node {node} outside 1..{n_nodes}", lineno, "net")
        cap = values["capacity"]
        if cap < 0:
            raise NegativeCapacityError(f"capacity {cap!r} on link {u}->{v}", lineno, "net")
        if cap == 0 and values["b"] != 0:
            raise MalformedRecordError(f"zero capacity with b > 0 on link {u}->{v}", lineno, "net")
        for key in ("free_flow_time", "b", "power"):
            if values[key] < 0:
                raise MalformedRecordError(f"{key} must be >= 0 on link {u}->{v}", lineno, "net")
        links.append(Link(
            u, v, cap, values["length"], values["free_flow_time"], values["b"], values["power"],
            values.get("speed", 0.0), values.get("toll", 0.0), int(values.get("link_type", 1)),
        ))
    if len(links) != n_links:
        raise CountMismatchError(
            f"header declares {n_links} links, body has {len(links)}", meta["NUMBER OF LINKS"][1], "net"
        )
    extra = {k: v for k, (v, _) in meta.items()}
    return TntpNetwork(n_nodes, links, n_zones, first, extra)


def parse_trips(text: str, rtol: float = 1e-6) -> TripTable:
    lines = text.splitlines()
    meta, i = _metadata(lines, "trips")
    n_zones = _int_meta(meta, "NUMBER OF ZONES", "trips", required=False)
    total = None
    if "TOTAL OD FLOW" in meta:
        value, line = meta["TOTAL OD FLOW"]
        try:
            total = float(value)
        except ValueError:
            raise MalformedHeaderError(f"<TOTAL OD FLOW> must be a number, got {value!r}", line, "trips") from None
    demand: dict = {}
    origin = None
    for j in range(i, len(lines)):
        lineno = j + 1
        raw = lines[j].split("~", 1)[0].strip()
        if not raw:
            continue
        if raw.lower().startswith("origin"):
            parts = raw.split()
            if len(parts) != 2:
                raise MalformedRecordError(f"bad origin line {raw!r}", lineno, "trips")
            try:
                origin = int(parts[1])
            except ValueError:
                raise MalformedRecordError(f"bad origin id {parts[1]!r}", lineno, "trips") from None
            if n_zones is not None and not 1 <= origin <= n_zones:
                raise MalformedRecordError(f"origin {origin} outside 1..{n_zones}", lineno, "trips")
            demand.setdefault(origin, {})
            continue
        if origin is None:
            raise MalformedRecordError("destination entries before any 'Origin' line", lineno, "trips")
        entries = _ENTRY.findall(raw)
        leftover = _ENTRY.sub("", raw).replace(";", "").strip()
        if leftover:
            raise MalformedRecordError(f"unparsed text {leftover!r}", lineno, "trips")
        for d, v in entries:
            d, v = int(d), float(v)
            if v < 0:
                raise MalformedRecordError(f"negative demand {v} for {origin}->{d}", lineno, "trips")
            if n_zones is not None and not 1 <= d <= n_zones:
                raise MalformedRecordError(f"destination {d} outside 1..{n_zones}", lineno, "trips")
            demand[origin][d] = v
    table = TripTable(demand, n_zones, total, {k: v for k, (v, _) in meta.items()})
    if total is not None:
        got = table.total_demand
        if abs(got - total) > rtol * max(abs(total), 1.0):
            raise CountMismatchError(
                f"header total {total!r} but entries sum to {got!r}", meta["TOTAL OD FLOW"][1], "trips"
            )
    return table


def parse_tntp(net_text: str, trips_text: str | None = None):
    """Parse a network and (optionally) a trip table."""
    net = parse_net(net_text)
    trips = parse_trips(trips_text) if trips_text is not None else None
    if trips is not None:
        for o, d, _ in trips.pairs():
            for z in (o, d):
                if z > net.n_nodes:
                    raise MalformedRecordError(f"zone {z} is not a node of the network", None, "trips")
    return net, trips


def read_tntp(net_path, trips_path=None):
    net_text = Path(net_path).read_text()
    trips_text = Path(trips_path).read_text() if trips_path is not None else None
    return parse_tntp(net_text, trips_text)


def _num(v: float) -> str:
    return str(int(v)) if float(v).is_integer() and abs(v) < 1e15 else repr(float(v))


def format_net(net: TntpNetwork) -> str:
    meta = dict(net.metadata)
    if net.n_zones is not None:
        meta["NUMBER OF ZONES"] = str(net.n_zones)
    meta["NUMBER OF NODES"] = str(net.n_nodes)
    meta["FIRST THRU NODE"] = str(net.first_thru_node)
    meta["NUMBER OF LINKS"] = str(net.n_links)
    lines = [f"<{k}> {v}" for k, v in meta.items()]
    lines += ["<END OF METADATA>", "", "", "~\t" + "\t".join(LINK_COLUMNS) + "\t;"]
    for ln in net.links:
        vals = [ln.init_node, ln.term_node, ln.capacity, ln.length, ln.free_flow_time,
                ln.b, ln.power, ln.speed, ln.toll, ln.link_type]
        lines.append("\t" + "\t".join(_num(v) for v in vals) + "\t;")
    return "\n".join(lines) + "\n"


def format_trips(table: TripTable) -> str:
    meta = dict(table.metadata)
    if table.n_zones is not None:
        meta["NUMBER OF ZONES"] = str(table.n_zones)
    meta["TOTAL OD FLOW"] = repr(float(table.total if table.total is not None else table.total_demand))
    lines = [f"<{k}> {v}" for k, v in meta.items()]
    lines += ["<END OF METADATA>", "", ""]
    for o in sorted(table.demand):
        lines.append(f"Origin \t{o}")
        row = table.demand[o]
        dests = sorted(row)
        for start in range(0, len(dests), 5):
            chunk = dests[start:start + 5]
            lines.append("".join(f"{d:>6} : {repr(float(row[d])):>12};" for d in chunk))
        lines.append("")
    return "\n".join(lines) + "\n"


def write_tntp(net: TntpNetwork, trips: TripTable | None, net_path, trips_path=None) -> None:
    Path(net_path).write_text(format_net(net))
    if trips is not None and trips_path is not None:
        Path(trips_path).write_text(format_trips(trips))
