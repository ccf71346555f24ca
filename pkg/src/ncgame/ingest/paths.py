"""Turn a TNTP network and trip table into a path-based congestion game."""
from __future__ import annotations

import itertools
import math

import networkx as nx

from ..game import Game, Group, Resource, Strategy
from ..prices import Polynomial, PowerLog
from .tntp import TntpNetwork, TripTable


DEFAULT_K = 8
# cap on candidate paths drawn while resolving cost ties at the k-th place
MAX_TIE_CANDIDATES = 10_000


class UnreachablePairError(ValueError):
    def __init__(self, origin, destination):
        self.pair = (origin, destination)
        super().__init__(f"OD pair {origin}->{destination} is unreachable")


def bpr_price(link) -> Polynomial | PowerLog:
    """``fft * (1 + b * (x / capacity)**power)``.

    Integer powers give a polynomial.  Other powers give a power-log term
    with the free-flow time as its offset.
    """
    fft, b, p, cap = link.free_flow_time, link.b, link.power, link.capacity
    if b == 0 or fft == 0:
        return Polynomial([fft])
    coef = fft * b / cap ** p
    if float(p).is_integer():
        return Polynomial([fft] + [0.0] * (int(p) - 1) + [coef] if p >= 1 else [fft + coef])
    return PowerLog(coef, p, 0, offset=fft)


def link_id(index: int) -> str:
    return f"L{index + 1}"


def _expanded_graph(net: TntpNetwork) -> nx.DiGraph:
    # every link becomes its own node so parallel links stay distinct
    G = nx.DiGraph()
    G.add_nodes_from(range(1, net.n_nodes + 1))
    for i, ln in enumerate(net.links):
        G.add_edge(ln.init_node, ("L", i), weight=ln.free_flow_time)
        G.add_edge(("L", i), ln.term_node, weight=0.0)
    return G


def _decode(path):
    nodes = tuple(v for v in path if not isinstance(v, tuple))
    links = tuple(v[1] for v in path if isinstance(v, tuple))
    return nodes, links


def _same_cost(a: float, b: float) -> bool:
    return abs(a - b) <= 1e-9 * max(1.0, abs(a), abs(b))


def k_shortest_paths(net: TntpNetwork, origin: int, destination: int, k: int, graph=None) -> list:
    """Up to ``k`` simple paths by free-flow time as ``(cost, nodes, link indices)``.

    Candidates come from networkx's Yen-style generator in non-decreasing
    cost order; paths tied in cost are ordered by node sequence, then link
    sequence, which also settles ties at the ``k``-th place.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    G = _expanded_graph(net) if graph is None else graph
    if origin not in G or destination not in G or not nx.has_path(G, origin, destination):
        raise UnreachablePairError(origin, destination)
    fft = [ln.free_flow_time for ln in net.links]
    cands = []
    gen = nx.shortest_simple_paths(G, origin, destination, weight="weight")
    for path in itertools.islice(gen, MAX_TIE_CANDIDATES):
        nodes, links = _decode(path)
        cost = math.fsum(fft[i] for i in links)
        if len(cands) >= k and cost > cands[k - 1][0] and not _same_cost(cost, cands[k - 1][0]):
            break
        cands.append((cost, nodes, links))
    # bucket costs so float noise does not split genuine ties
    cands.sort(key=lambda c: (round(c[0], 9), c[1], c[2]))
    return cands[:k]


def enumerate_paths(net: TntpNetwork, trips: TripTable, k: int = DEFAULT_K) -> tuple[Game, dict]:
    """Game with one group per positive OD pair and its ``k`` shortest paths as strategies.

    Returns the game and the demand mapping ``group id -> volume``.  Only
    links used by some path become resources.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    G = _expanded_graph(net)
    groups, demand, used = [], {}, set()
    for o, d, v in trips.pairs():
        gid = f"{o}-{d}"
        strats = []
        for j, (_, _, links) in enumerate(k_shortest_paths(net, o, d, k, G)):
            strats.append(Strategy(f"{gid}#{j + 1}", tuple((link_id(i), 1.0) for i in links)))
            used.update(links)
        groups.append(Group(gid, tuple(strats)))
        demand[gid] = v
    resources = [Resource(link_id(i), bpr_price(ln)) for i, ln in enumerate(net.links) if i in used]
    return Game(groups, resources), demand
