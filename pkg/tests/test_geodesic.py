import itertools
from collections import deque

import pytest

from thuelab.core import Orientation, Word, format_word, parse_system, parse_word
from thuelab.engine import apply_redex, successors
from thuelab.geodesic import (ComponentTooLargeError, DistanceStatus,
                              as_symmetrized, component, dehn, diameter,
                              distance, dot_document, edge_lines,
                              gamma_capital, gamma_exact)
from thuelab.systems import e0_counter, e0_terminal, main_case_endpoint, unary_counter

from oracles import gamma_by_floyd_warshall, naive_longest_distinct_run

# Frozen from the scans; spot-checked against the Floyd-Warshall oracle below.
S0_GAMMA = {1: 0, 2: 2, 3: 4, 4: 10}
E0_GAMMA = {1: 0, 2: 1, 3: 3, 4: 5}

PATH_SYSTEM = "@alphabet a b\na b -> b a\n"


def test_distance_examples(s0_sys, e0_sys):
    r = distance(e0_sys, e0_counter(1), e0_terminal(1))
    assert r.status is DistanceStatus.FOUND and r.distance == 1

    u = unary_counter(2)
    r = distance(s0_sys, u, u)
    assert r.status is DistanceStatus.FOUND and r.distance == 0
    assert len(r.geodesic) == 0

    r = distance(s0_sys, u, main_case_endpoint(2, 2))
    assert r.status is DistanceStatus.FOUND and r.distance == 8


def test_geodesic_witness_replays(s0_sys):
    u = unary_counter(3)
    v = main_case_endpoint(3, 2)
    r = distance(s0_sys, u, v)
    assert r.status is DistanceStatus.FOUND
    sym = as_symmetrized(s0_sys)
    current = u
    for step, word in r.geodesic.steps:
        current = apply_redex(current, step.redex, sym)
        assert current == word
    assert current == v
    assert len(r.geodesic) == r.distance


def test_distance_not_equivalent(s0_sys):
    u = parse_word("w h0 1 w", s0_sys.alphabet)
    r = distance(s0_sys, u, parse_word("w w w w", s0_sys.alphabet))
    assert r.status is DistanceStatus.NOT_EQUIVALENT
    # length mismatch short-circuits without exploring
    r = distance(s0_sys, u, parse_word("w", s0_sys.alphabet))
    assert r.status is DistanceStatus.NOT_EQUIVALENT
    assert r.states_explored == 0


def test_distance_cap_is_a_status(e0_sys):
    r = distance(e0_sys, e0_counter(6), e0_terminal(6), state_cap=10)
    assert r.status is DistanceStatus.CAP_EXCEEDED
    assert r.distance is None


def test_distance_refuses_non_length_preserving():
    sys_ = parse_system("@alphabet a b\na a -> b\n")
    w = parse_word("a a", sys_.alphabet)
    with pytest.raises(ValueError, match="length-preserving"):
        distance(sys_, w, w)


def test_distance_symmetry_and_triangle(s0_sys):
    comp = component(s0_sys, parse_word("w h0 1 w", s0_sys.alphabet))
    nodes = comp.nodes[:6]
    d = {}
    for a in nodes:
        for b in nodes:
            d[a, b] = distance(s0_sys, a, b).distance
    for a in nodes:
        assert d[a, a] == 0
        for b in nodes:
            assert d[a, b] == d[b, a]
            for c in nodes:
                assert d[a, c] <= d[a, b] + d[b, c]


def test_component_single_wall(s0_sys):
    comp = component(s0_sys, parse_word("w", s0_sys.alphabet))
    assert len(comp.nodes) == 1
    assert comp.adjacency == ((),)
    assert comp.complete


def test_component_e0_counter(e0_sys):
    comp = component(e0_sys, parse_word("W R 0 W", e0_sys.alphabet))
    assert len(comp.nodes) == 6
    texts = {format_word(w) for w in comp.nodes}
    assert "W L W W" in texts
    assert comp.nodes[0] == parse_word("W R 0 W", e0_sys.alphabet)


def test_component_s0_counter_contains_terminal(s0_sys):
    comp = component(s0_sys, parse_word("w h0 1 w", s0_sys.alphabet))
    assert len(comp.nodes) == 15
    assert parse_word("w m0 h0 w", s0_sys.alphabet) in comp.nodes


def test_component_adjacency_is_symmetric(e0_sys):
    comp = component(e0_sys, parse_word("W R 0 0 W", e0_sys.alphabet))
    pairs = {(u, v) for u, row in enumerate(comp.adjacency) for v, _ in row}
    assert pairs == {(v, u) for u, v in pairs}


def test_component_nodes_all_same_length(e0_sys):
    comp = component(e0_sys, parse_word("W R 0 0 W", e0_sys.alphabet))
    assert {len(w) for w in comp.nodes} == {5}


def test_component_cap_marks_incomplete(e0_sys):
    comp = component(e0_sys, parse_word("W R 0 0 0 W", e0_sys.alphabet),
                     state_cap=3)
    assert not comp.complete
    assert len(comp.nodes) == 3
    with pytest.raises(ValueError, match="complete"):
        diameter(comp)


def test_diameter_examples(s0_sys, e0_sys):
    singleton = component(s0_sys, parse_word("w", s0_sys.alphabet))
    assert diameter(singleton)[0] == 0

    path_sys = parse_system(PATH_SYSTEM)
    comp = component(path_sys, parse_word("a b b b", path_sys.alphabet))
    d, (a, b) = diameter(comp)
    assert d == 3  # path graph of 4 nodes
    assert {format_word(a), format_word(b)} == {"a b b b", "b b b a"}

    comp = component(e0_sys, parse_word("W R 0 0 W", e0_sys.alphabet))
    assert diameter(comp)[0] == 9  # >= 5 = d(counter, terminal) at k = 2


def test_gamma_rows_frozen(s0_sys, e0_sys):
    for n, expected in S0_GAMMA.items():
        row = gamma_capital(s0_sys, n)
        assert row.gamma == expected
        d = distance(s0_sys, *row.witness_pair)
        assert d.status is DistanceStatus.FOUND and d.distance == expected
    for n, expected in E0_GAMMA.items():
        assert gamma_capital(e0_sys, n).gamma == expected


def test_gamma_matches_floyd_warshall_oracle(s0_sys, e0_sys):
    for system, upto in ((s0_sys, 3), (e0_sys, 4)):
        for n in range(1, upto + 1):
            assert gamma_capital(system, n).gamma == gamma_by_floyd_warshall(
                as_symmetrized(system), n)


def test_gamma_witness_pair_lower_bound(s0_sys):
    # d("w h0 1 w", "w m0 h0 w") = 5 forces Gamma(4) >= 5
    u = parse_word("w h0 1 w", s0_sys.alphabet)
    v = parse_word("w m0 h0 w", s0_sys.alphabet)
    assert distance(s0_sys, u, v).distance == 5
    assert gamma_capital(s0_sys, 4).gamma >= 5


def test_gamma_jobs_parallel_matches_serial(e0_sys):
    serial = gamma_capital(e0_sys, 4, jobs=1)
    parallel = gamma_capital(e0_sys, 4, jobs=2)
    assert serial == parallel


def test_dehn_values(s0_sys, e0_sys):
    assert dehn(s0_sys, 2).value == 0  # Gamma(1) = 0
    assert dehn(s0_sys, 8).value == max(S0_GAMMA.values())
    assert dehn(e0_sys, 8).value >= 1


def test_dehn_monotone(s0_sys):
    values = [dehn(s0_sys, n).value for n in range(2, 9)]
    assert values == sorted(values)


def test_gamma_exact_examples(s0_sys):
    assert gamma_exact(s0_sys, parse_word("w", s0_sys.alphabet)) == 0

    path_sys = parse_system(PATH_SYSTEM)
    assert gamma_exact(path_sys, parse_word("a b b b", path_sys.alphabet)) == 3

    u = parse_word("w h0 1 w", s0_sys.alphabet)
    value = gamma_exact(s0_sys, u)
    assert value == 5
    assert value <= 4 * 4 * 2 + 10 * 4  # 72


def test_gamma_exact_matches_recursive_oracle(s0_sys, e0_sys):
    for system, n in ((s0_sys, 3), (e0_sys, 4)):
        sym = as_symmetrized(system)
        al = system.alphabet
        for syms in itertools.product(range(len(al)), repeat=n):
            w = Word(al, syms)
            assert gamma_exact(system, w) == naive_longest_distinct_run(
                sym, w.tokens()), format_word(w)


def test_gamma_exact_node_cap(e0_sys):
    with pytest.raises(ComponentTooLargeError):
        gamma_exact(e0_sys, e0_counter(3), node_cap=4)


def test_gamma_bounded_by_max_gamma_exact(s0_sys, e0_sys):
    # the max distance over equivalent pairs cannot exceed the longest
    # distinct-word run from any same-length word
    for system, n in ((s0_sys, 3), (e0_sys, 3)):
        al = system.alphabet
        best = 0
        for syms in itertools.product(range(len(al)), repeat=n):
            best = max(best, gamma_exact(system, Word(al, syms)))
        assert gamma_capital(system, n).gamma <= best


def test_gamma_exact_at_least_eccentricity(s0_sys):
    # a simple path to the farthest node is in particular a distinct-word run
    u = parse_word("w h0 1 w", s0_sys.alphabet)
    comp = component(s0_sys, u)
    far = max((distance(s0_sys, u, v).distance for v in comp.nodes))
    assert gamma_exact(s0_sys, u) >= far


def _direct_distances(system, start, cap=100000):
    """BFS levels over direct steps only (word -> distance)."""
    dist = {start: 0}
    queue = deque([start])
    while queue:
        u = queue.popleft()
        for v, _ in successors(system, u, Orientation.DIRECT):
            if v not in dist:
                dist[v] = dist[u] + 1
                queue.append(v)
                if len(dist) > cap:
                    raise RuntimeError("unexpected blowup")
    return dist


@pytest.mark.parametrize("k,l", [(2, 2), (3, 2), (4, 4)])
def test_one_head_geodesics_reorder_to_direct_then_reverse(s0_sys, k, l):
    # A reverse step from m equals a direct step into m, so the shortest
    # direct*-then-reverse* path from u to v has length
    # min over m of dD(u -> m) + dD(v -> m); for one-head words this must
    # equal the unrestricted geodesic distance.
    sym = as_symmetrized(s0_sys)
    u = unary_counter(k)
    v = main_case_endpoint(k, l)
    du = _direct_distances(sym, u)
    dv = _direct_distances(sym, v)
    restricted = min(du[m] + dv[m] for m in du.keys() & dv.keys())
    assert restricted == distance(s0_sys, u, v).distance


def test_distances_agree_with_networkx(s0_sys, e0_sys):
    import networkx as nx

    cases = [
        (s0_sys, "w h0 1 1 w", "w m0 m0 h1 w"),
        (s0_sys, "w h1 1 1 w", "w m1 h1 1 w"),
        (e0_sys, "W R 0 0 W", "W L W W W"),
    ]
    for system, a, b in cases:
        u = parse_word(a, system.alphabet)
        v = parse_word(b, system.alphabet)
        comp = component(system, u)
        graph = nx.Graph()
        graph.add_nodes_from(range(len(comp.nodes)))
        for ui, row in enumerate(comp.adjacency):
            for vi, _ in row:
                graph.add_edge(ui, vi)
        iu, iv = comp.nodes.index(u), comp.nodes.index(v)
        assert (distance(system, u, v).distance
                == nx.shortest_path_length(graph, iu, iv))
        d, (wa, wb) = diameter(comp)
        ia, ib = comp.nodes.index(wa), comp.nodes.index(wb)
        assert d == nx.shortest_path_length(graph, ia, ib)
        assert d == nx.diameter(graph)


def test_edge_lines_format(e0_sys):
    comp = component(e0_sys, parse_word("W R 0 W", e0_sys.alphabet))
    lines = list(edge_lines(comp))
    assert lines, "component has edges"
    for line in lines:
        u, v, rid, orientation = line.split()
        assert orientation in ("direct", "reverse")
        assert 0 <= int(u) < len(comp.nodes)
        assert 0 <= int(v) < len(comp.nodes)
        assert 0 <= int(rid) < len(comp.system.rules)


def test_dot_document(e0_sys):
    comp = component(e0_sys, parse_word("W R 0 W", e0_sys.alphabet))
    doc = dot_document(comp)
    assert doc.startswith("graph component {")
    assert '"W R 0 W"' in doc
    assert doc.rstrip().endswith("}")
