import os

import pytest
from hypothesis import given
from hypothesis import strategies as st

from ncgame import SolverConfig, solve_so, solve_wardrop, validate_game
from ncgame.analysis import mdg_components
from ncgame.game import total_cost
from ncgame.ingest import (
    CountMismatchError,
    Link,
    MalformedHeaderError,
    MalformedRecordError,
    NegativeCapacityError,
    TntpNetwork,
    TripTable,
    UnreachablePairError,
    bpr_price,
    enumerate_paths,
    format_net,
    format_trips,
    k_shortest_paths,
    parse_net,
    parse_tntp,
    parse_trips,
    read_tntp,
)
from ncgame.prices import Polynomial, PowerLog

HEADER = "<NUMBER OF NODES> {n}\n<NUMBER OF LINKS> {m}\n<END OF METADATA>\n~ init_node term_node capacity length free_flow_time b power ;\n"


def _net(n, links, declared=None):
    body = "".join(f"{u} {v} {c} 1 {t} 0.15 4 ;\n" for u, v, c, t in links)
    return HEADER.format(n=n, m=len(links) if declared is None else declared) + body


def _trips(rows, total=None):
    head = "" if total is None else f"<TOTAL OD FLOW> {total}\n"
    text = head + "<END OF METADATA>\n"
    for o, dests in rows.items():
        text += f"Origin {o}\n" + " ".join(f"{d} : {v};" for d, v in dests.items()) + "\n"
    return text


def test_single_link_toy():
    net = parse_net(_net(2, [(1, 2, 250, 3)]))
    assert net.n_nodes == 2 and net.n_links == 1 and net.links[0].capacity == 250


def test_two_node_file(data_dir):
    net, trips = read_tntp(os.path.join(data_dir, "two_node_net.tntp"))
    assert trips is None and net.links[0].free_flow_time == 2 and net.first_thru_node == 1


def test_count_mismatch_has_line_number():
    with pytest.raises(CountMismatchError) as exc:
        parse_net(_net(3, [(1, 2, 1, 1)] * 4, declared=5))
    assert exc.value.line == 2 and "count mismatch" in str(exc.value)


def test_negative_capacity():
    with pytest.raises(NegativeCapacityError) as exc:
        parse_net(_net(2, [(1, 2, -5, 1)]))
    assert exc.value.line == 5


def test_malformed_header():
    with pytest.raises(MalformedHeaderError):
        parse_net("<NUMBER OF NODES> 2\nnot a header\n<END OF METADATA>\n")
    with pytest.raises(MalformedHeaderError):
        parse_net("<NUMBER OF NODES> 2\n<NUMBER OF LINKS> 0\n")
    with pytest.raises(MalformedHeaderError):
        parse_net("<NUMBER OF NODES> two\n<NUMBER OF LINKS> 0\n<END OF METADATA>\n")
    with pytest.raises(MalformedHeaderError):
        parse_net("<NUMBER OF LINKS> 0\n<END OF METADATA>\n")


def test_malformed_records():
    with pytest.raises(MalformedRecordError):
        parse_net(HEADER.format(n=2, m=1) + "1 2 3 ;\n")
    with pytest.raises(MalformedRecordError):
        parse_net(_net(2, [(1, 3, 1, 1)]))
    with pytest.raises(MalformedRecordError):
        parse_trips("<END OF METADATA>\n2 : 1.0;\n")
    with pytest.raises(MalformedRecordError):
        parse_trips("<END OF METADATA>\nOrigin 1\n2 : -1.0;\n")
    with pytest.raises(MalformedRecordError):
        parse_trips("<END OF METADATA>\nOrigin 1\n2 : 1.0; junk\n")


def test_trip_total_checked():
    assert parse_trips(_trips({1: {2: 5.0}}, total=5.0)).total_demand == 5.0
    with pytest.raises(CountMismatchError):
        parse_trips(_trips({1: {2: 5.0}}, total=6.0))


def test_comments_and_tabs_tolerated():
    text = HEADER.format(n=2, m=1) + "\t1\t2\t10\t1\t1\t0.15\t4\t;  ~ a comment\n~ trailing comment\n"
    assert parse_net(text).n_links == 1


def test_zone_outside_network():
    with pytest.raises(MalformedRecordError):
        parse_tntp(_net(2, [(1, 2, 10, 1)]), _trips({1: {3: 1.0}}))


def test_toy_round_trip(data_dir):
    with open(os.path.join(data_dir, "toy_net.tntp")) as fh:
        net_text = fh.read()
    with open(os.path.join(data_dir, "toy_trips.tntp")) as fh:
        trips_text = fh.read()
    net, trips = parse_tntp(net_text, trips_text)
    again = parse_tntp(format_net(net), format_trips(trips))
    assert again == (net, trips)
    assert format_net(again[0]) == format_net(net)


links = st.builds(
    Link,
    st.integers(1, 5), st.integers(1, 5), st.floats(0.5, 1e4), st.floats(0, 100), st.floats(0, 100),
    st.floats(0, 2), st.sampled_from([1.0, 2.0, 4.0, 2.5]), st.floats(0, 100), st.floats(0, 10), st.integers(1, 3),
)


@given(st.lists(links, min_size=1, max_size=8))
def test_round_trip_property(ls):
    net = TntpNetwork(5, ls, 5)
    once = parse_net(format_net(net))
    assert (once.n_nodes, once.links, once.n_zones) == (5, ls, 5)
    assert parse_net(format_net(once)) == once


@given(st.dictionaries(st.integers(1, 6), st.dictionaries(st.integers(1, 6), st.floats(0, 1e5), max_size=6), min_size=1, max_size=6))
def test_trip_round_trip_property(rows):
    table = TripTable(rows, 6, None)
    again = parse_trips(format_trips(table))
    assert again.demand == {o: d for o, d in rows.items()}


def test_bpr_prices():
    lk = Link(1, 2, 2.0, 1, 1.0, 0.15, 4)
    assert bpr_price(lk) == Polynomial([1.0, 0, 0, 0, 0.15 / 16])
    assert float(bpr_price(Link(1, 2, 1.0, 1, 1.0, 0.15, 4))(2)) == pytest.approx(3.4)
    frac = bpr_price(Link(1, 2, 4.0, 1, 2.0, 0.5, 2.5))
    assert isinstance(frac, PowerLog) and frac.rho == 2.5 and frac.offset == 2.0
    assert bpr_price(Link(1, 2, 4.0, 1, 2.0, 0.0, 4)) == Polynomial([2.0])


def _parallel():
    return parse_net(_net(2, [(1, 2, 10, 1), (1, 2, 20, 2)]))


def test_parallel_links_give_two_strategies():
    game, demand = enumerate_paths(_parallel(), parse_trips(_trips({1: {2: 7.0}})), 2)
    assert game.group_ids == ["1-2"] and game.n_strategies == 2
    assert [s.uses for s in game.groups[0].strategies] == [(("L1", 1.0),), (("L2", 1.0),)]
    assert demand == {"1-2": 7.0} and validate_game(game).ok


def _diamond():
    return parse_net(_net(4, [(1, 2, 10, 1), (2, 4, 10, 1), (1, 3, 10, 2), (3, 4, 10, 2)]))


def test_diamond_k2():
    game, _ = enumerate_paths(_diamond(), parse_trips(_trips({1: {4: 10.0}})), 2)
    a, b = (set(x for x, _ in s.uses) for s in game.groups[0].strategies)
    assert a == {"L1", "L2"} and b == {"L3", "L4"} and not a & b


def test_k1_we_equals_so():
    net = _diamond()
    trips = parse_trips(_trips({1: {4: 10.0}, 2: {4: 3.0}}))
    game, demand = enumerate_paths(net, trips, 1)
    assert all(len(g.strategies) == 1 for g in game.groups)
    cfg = SolverConfig(tol=1e-12)
    assert total_cost(game, solve_wardrop(game, demand, cfg).profile) == pytest.approx(
        total_cost(game, solve_so(game, demand, cfg).profile)
    )
    assert len(mdg_components(game)) == 1


def test_unreachable_pair():
    net = parse_net(_net(3, [(1, 2, 10, 1)]))
    with pytest.raises(UnreachablePairError) as exc:
        enumerate_paths(net, parse_trips(_trips({1: {3: 1.0}})), 2)
    assert exc.value.pair == (1, 3) and "1->3" in str(exc.value)


def test_k_must_be_positive():
    with pytest.raises(ValueError):
        k_shortest_paths(_diamond(), 1, 4, 0)


def test_ties_ordered_by_node_sequence(data_dir):
    net, _ = read_tntp(os.path.join(data_dir, "toy_net.tntp"))
    paths = k_shortest_paths(net, 1, 4, 3)
    assert [p[1] for p in paths] == [(1, 2, 4), (1, 2, 3, 4), (1, 3, 4)]
    assert [p[0] for p in paths] == [2.0, 3.0, 3.0]


def test_sioux_falls_paths_are_valid(data_dir):
    net, trips = read_tntp(os.path.join(data_dir, "SiouxFalls_net.tntp"), os.path.join(data_dir, "SiouxFalls_trips.tntp"))
    fft = [ln.free_flow_time for ln in net.links]
    for o, d, _ in trips.pairs()[:60]:
        paths = k_shortest_paths(net, o, d, 4)
        costs = [p[0] for p in paths]
        assert costs == sorted(costs)
        for cost, nodes, ls in paths:
            assert nodes[0] == o and nodes[-1] == d and len(set(nodes)) == len(nodes)
            assert all(net.links[i].init_node == u and net.links[i].term_node == v for i, u, v in zip(ls, nodes, nodes[1:]))
            assert cost == pytest.approx(sum(fft[i] for i in ls))
    game, _ = enumerate_paths(net, trips, 2)
    assert all(r in (0.0, 1.0) for r in game.consumption.data)
