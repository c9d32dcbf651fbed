"""Independent brute-force oracles the package is checked against.

Everything here works on plain token tuples and re-implements matching,
application, reachability, depth, and all-pairs distances from scratch, so
agreement with the package is evidence, not tautology.
"""

from __future__ import annotations

import itertools
import math

from thuelab.core import Orientation, RewriteSystem, Word


def tok(word: Word) -> tuple[str, ...]:
    return word.tokens()


def rule_sides(system: RewriteSystem, orientation: Orientation):
    """(lhs tokens, rhs tokens, rule_id) for every rule the orientation selects."""
    out = []
    for r in system.rules:
        if orientation is Orientation.SYMMETRIZED or r.orientation is orientation:
            out.append((r.lhs.tokens(), r.rhs.tokens(), r.id))
    return out


def naive_matches(system: RewriteSystem, tokens: tuple[str, ...],
                  orientation: Orientation):
    """All (position, rule_id) matches by direct token comparison."""
    hits = []
    for pos in range(len(tokens)):
        for lhs, _rhs, rid in rule_sides(system, orientation):
            if tokens[pos:pos + len(lhs)] == lhs:
                hits.append((pos, rid))
    hits.sort()
    return hits


def naive_apply(tokens: tuple[str, ...], lhs, rhs, pos: int) -> tuple[str, ...]:
    assert tokens[pos:pos + len(lhs)] == lhs
    return tokens[:pos] + rhs + tokens[pos + len(lhs):]


def naive_successors(system: RewriteSystem, tokens: tuple[str, ...],
                     orientation: Orientation):
    out = []
    sides = {rid: (lhs, rhs) for lhs, rhs, rid in rule_sides(system, orientation)}
    for pos, rid in naive_matches(system, tokens, orientation):
        lhs, rhs = sides[rid]
        out.append(naive_apply(tokens, lhs, rhs, pos))
    return out


def naive_depth(system: RewriteSystem, tokens: tuple[str, ...],
                _on_path=None) -> float:
    """Pure-recursive longest directed path; math.inf on reachable cycles.

    No memoization: exponential, for tiny instances only.
    """
    if _on_path is None:
        _on_path = set()
    if tokens in _on_path:
        return math.inf
    _on_path.add(tokens)
    best = 0.0
    for nxt in naive_successors(system, tokens, Orientation.DIRECT):
        sub = naive_depth(system, nxt, _on_path)
        best = max(best, sub + 1)
        if best == math.inf:
            break
    _on_path.remove(tokens)
    return best


def reachable_words(system: RewriteSystem, tokens: tuple[str, ...],
                    orientation: Orientation = Orientation.SYMMETRIZED):
    """Closure of a word under the selected steps, plus the edge set."""
    seen = {tokens}
    edges = set()
    frontier = [tokens]
    while frontier:
        current = frontier.pop()
        for nxt in naive_successors(system, current, orientation):
            edges.add((current, nxt))
            if nxt not in seen:
                seen.add(nxt)
                frontier.append(nxt)
    return seen, edges


def all_words(system: RewriteSystem, n: int):
    return itertools.product(system.alphabet.symbols, repeat=n)


def floyd_warshall(nodes, edges):
    """Dense all-pairs shortest paths; dict (u, v) -> distance."""
    index = {u: i for i, u in enumerate(nodes)}
    size = len(nodes)
    inf = math.inf
    dist = [[inf] * size for _ in range(size)]
    for i in range(size):
        dist[i][i] = 0
    for u, v in edges:
        dist[index[u]][index[v]] = 1
    for k in range(size):
        dk = dist[k]
        for i in range(size):
            dik = dist[i][k]
            if dik == inf:
                continue
            di = dist[i]
            for j in range(size):
                alt = dik + dk[j]
                if alt < di[j]:
                    di[j] = alt
    return dist


def naive_longest_distinct_run(system: RewriteSystem, tokens: tuple[str, ...],
                               _visited=None) -> int:
    """Recursive longest all-distinct symmetrized sequence from a word."""
    if _visited is None:
        _visited = {tokens}
    best = 0
    for nxt in naive_successors(system, tokens, Orientation.SYMMETRIZED):
        if nxt not in _visited:
            _visited.add(nxt)
            best = max(best, 1 + naive_longest_distinct_run(system, nxt, _visited))
            _visited.remove(nxt)
    return best


def gamma_by_floyd_warshall(system: RewriteSystem, n: int) -> int:
    """Max finite pairwise distance over all length-n words, via explicit
    component materialization and Floyd-Warshall. Independent route for the
    scanning Gamma implementation."""
    best = 0
    visited = set()
    for tokens in all_words(system, n):
        if tokens in visited:
            continue
        nodes, edges = reachable_words(system, tokens)
        visited |= nodes
        ordered = sorted(nodes)
        dist = floyd_warshall(ordered, edges)
        for row in dist:
            for d in row:
                if d != math.inf and d > best:
                    best = int(d)
    return best
