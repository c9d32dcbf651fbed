"""Symmetrized-rewriting metrics: geodesics, components, Γ(n), Dehn function.

Everything here works on the symmetrized relation; plain systems passed in
are symmetrized internally. All searches require a length-preserving system
(otherwise equivalence classes can be infinite and the search unbounded) and
refuse to run on anything else.

Γ(n) is the max geodesic distance over equivalent pairs of length n, found
by partitioning the |A|^n word space into components and taking the max
all-source BFS eccentricity per component. The Dehn function at n is the max
of Γ(k) for k up to n//2, which for length-preserving systems is exact.
"""

from __future__ import annotations

import enum
from collections import deque
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Optional

from . import coding
from .core import (CapExceededError, Orientation, RewriteSystem, ThueLabError,
                   Word, symmetrize)
from .derivation import DEFAULT_STATE_CAP, DerivationTrace
from .engine import Redex, Step, require_same_alphabet, step_for

DEFAULT_NODE_CAP = 4000


class ComponentTooLargeError(ThueLabError):
    """The exact longest-simple-path oracle only runs on tiny components."""


class DistanceStatus(enum.Enum):
    FOUND = "found"
    NOT_EQUIVALENT = "not-equivalent"
    CAP_EXCEEDED = "cap-exceeded"


@dataclass(frozen=True)
class DistanceResult:
    status: DistanceStatus
    distance: Optional[int] = None
    geodesic: Optional[DerivationTrace] = None
    states_explored: int = 0


@dataclass(frozen=True)
class ComponentGraph:
    """One equivalence class as an explicit graph; node 0 is the seed."""

    system: RewriteSystem
    nodes: tuple[Word, ...]
    adjacency: tuple[tuple[tuple[int, Step], ...], ...]
    complete: bool


@dataclass(frozen=True)
class GammaRow:
    n: int
    gamma: int
    witness_pair: tuple[Word, Word]
    components_scanned: int


@dataclass(frozen=True)
class DehnRow:
    n: int
    value: int
    witness_pair: Optional[tuple[Word, Word]]


def as_symmetrized(system: RewriteSystem) -> RewriteSystem:
    """The system itself if it already carries reverse rules, else symmetrize."""
    return system if system.is_symmetrized() else symmetrize(system)


def _require_length_preserving(system: RewriteSystem, what: str):
    if not system.validation.length_preserving:
        raise ValueError(
            f"{what} requires a length-preserving system; equivalence classes "
            "of other systems can be infinite")


def _geodesic_trace(system: RewriteSystem, parents: dict, end_code: int,
                    length: int) -> DerivationTrace:
    codes = [end_code]
    edges = []
    code = end_code
    while True:
        entry = parents[code]
        if entry is None:
            break
        code, rid, pos = entry
        codes.append(code)
        edges.append((rid, pos))
    codes.reverse()
    edges.reverse()
    words = [coding.decode_word(system, c, length) for c in codes]
    steps = []
    for i, (rid, pos) in enumerate(edges):
        redex = Redex(pos, rid, system.rules[rid].orientation)
        steps.append((step_for(system, words[i], redex), words[i + 1]))
    return DerivationTrace(words[0], tuple(steps), False, Orientation.SYMMETRIZED)


def distance(system: RewriteSystem, u: Word, v: Word,
             state_cap: int = DEFAULT_STATE_CAP) -> DistanceResult:
    """Geodesic distance by breadth-first search from u over symmetrized steps.

    NOT_EQUIVALENT means u's whole component was exhausted without meeting v;
    CAP_EXCEEDED means the search stopped early and is inconclusive.
    """
    sym = as_symmetrized(system)
    _require_length_preserving(sym, "distance")
    require_same_alphabet(sym, u)
    require_same_alphabet(sym, v)
    if len(u) != len(v):
        return DistanceResult(DistanceStatus.NOT_EQUIVALENT, states_explored=0)
    n = len(u)
    src = coding.encode_word(u)
    dst = coding.encode_word(v)
    if src == dst:
        return DistanceResult(
            DistanceStatus.FOUND, 0,
            DerivationTrace(u, (), False, Orientation.SYMMETRIZED), 1)
    succ = coding.edge_successors(sym, Orientation.SYMMETRIZED, n)
    parents: dict[int, Optional[tuple[int, int, int]]] = {src: None}
    frontier = deque([src])
    while frontier:
        code = frontier.popleft()
        for nxt, rid, pos in succ(code):
            if nxt in parents:
                continue
            parents[nxt] = (code, rid, pos)
            if nxt == dst:
                trace = _geodesic_trace(sym, parents, dst, n)
                return DistanceResult(DistanceStatus.FOUND, len(trace), trace,
                                      len(parents))
            if len(parents) > state_cap:
                return DistanceResult(DistanceStatus.CAP_EXCEEDED,
                                      states_explored=len(parents))
            frontier.append(nxt)
    return DistanceResult(DistanceStatus.NOT_EQUIVALENT,
                          states_explored=len(parents))


def component(system: RewriteSystem, seed: Word,
              state_cap: int = DEFAULT_STATE_CAP) -> ComponentGraph:
    """Full BFS closure of the seed under symmetrized steps.

    If the state cap is hit the graph is returned partial with
    complete=False (discovered nodes only, adjacency possibly missing edges).
    """
    sym = as_symmetrized(system)
    _require_length_preserving(sym, "component")
    require_same_alphabet(sym, seed)
    n = len(seed)
    src = coding.encode_word(seed)
    succ = coding.edge_successors(sym, Orientation.SYMMETRIZED, n)
    index = {src: 0}
    codes = [src]
    raw_adjacency: list[list[tuple[int, int, int]]] = [[]]
    frontier = deque([src])
    complete = True
    while frontier:
        code = frontier.popleft()
        ci = index[code]
        for nxt, rid, pos in succ(code):
            ni = index.get(nxt)
            if ni is None:
                if len(codes) >= state_cap:
                    complete = False
                    continue
                ni = len(codes)
                index[nxt] = ni
                codes.append(nxt)
                raw_adjacency.append([])
                frontier.append(nxt)
            raw_adjacency[ci].append((ni, rid, pos))
    words = tuple(coding.decode_word(sym, c, n) for c in codes)
    adjacency = tuple(
        tuple((ni, step_for(sym, words[i],
                            Redex(pos, rid, sym.rules[rid].orientation)))
              for ni, rid, pos in row)
        for i, row in enumerate(raw_adjacency))
    return ComponentGraph(sym, words, adjacency, complete)


def _bfs_all_dists(adj: list[list[int]], source: int, dist: list[int]) -> tuple[int, int]:
    """Eccentricity BFS over index adjacency; returns (ecc, farthest index)."""
    for i in range(len(dist)):
        dist[i] = -1
    dist[source] = 0
    queue = deque([source])
    far, far_d = source, 0
    while queue:
        u = queue.popleft()
        du = dist[u] + 1
        for v in adj[u]:
            if dist[v] < 0:
                dist[v] = du
                if du > far_d:
                    far, far_d = v, du
                queue.append(v)
    return far_d, far


def _diameter_idx(adj: list[list[int]]) -> tuple[int, int, int]:
    """All-source BFS diameter: (diameter, source index, farthest index)."""
    size = len(adj)
    dist = [0] * size
    best = (0, 0, 0)
    for s in range(size):
        ecc, far = _bfs_all_dists(adj, s, dist)
        if ecc > best[0]:
            best = (ecc, s, far)
    return best


def diameter(comp: ComponentGraph) -> tuple[int, tuple[Word, Word]]:
    """Exact diameter of a complete component with a witness pair."""
    if not comp.complete:
        raise ValueError("diameter requires a complete component")
    adj = [sorted({ni for ni, _ in row}) for row in comp.adjacency]
    d, s, f = _diameter_idx(adj)
    return d, (comp.nodes[s], comp.nodes[f])


def _lean_component(succ, seed: int, cap: Optional[int]) -> Optional[tuple[list[int], list[list[int]]]]:
    """Codes + deduplicated index adjacency of seed's component, None if over cap."""
    index = {seed: 0}
    codes = [seed]
    adj: list[list[int]] = [[]]
    frontier = deque([seed])
    while frontier:
        code = frontier.popleft()
        ci = index[code]
        row = adj[ci]
        for nxt in succ(code):
            ni = index.get(nxt)
            if ni is None:
                if cap is not None and len(codes) >= cap:
                    return None
                ni = len(codes)
                index[nxt] = ni
                codes.append(nxt)
                adj.append([])
                frontier.append(nxt)
            if ni not in row:
                row.append(ni)
    return codes, adj


_BIG_COMPONENT = 512  # components at least this big go to the worker pool


def gamma_capital(system: RewriteSystem, n: int,
                  state_cap: int = DEFAULT_STATE_CAP,
                  jobs: int = 1) -> GammaRow:
    """Max geodesic distance over all equivalent pairs of length n.

    Scans the full |A|^n space once: each unvisited word seeds a component
    BFS, each component contributes its diameter. jobs > 1 farms the
    diameters of large components to a process pool; results do not depend
    on the schedule (pure max-reduction, ties resolved by scan order).
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    sym = as_symmetrized(system)
    _require_length_preserving(sym, "gamma")
    base = len(sym.alphabet)
    size = base ** n
    if size > state_cap:
        raise CapExceededError(
            f"scanning {base}^{n} = {size} words exceeds the state cap {state_cap}",
            0)
    succ = coding.code_successors(sym, Orientation.SYMMETRIZED, n)
    visited = bytearray(size)
    components = 0
    # (scan order, gamma, source code, far code) per component; singletons
    # are summarized by the first one seen.
    results: list[tuple[int, int, int, int]] = []
    first_singleton = -1
    pool = ProcessPoolExecutor(max_workers=jobs) if jobs > 1 else None
    pending = []  # (scan order, codes, future)
    try:
        for seed in range(size):
            if visited[seed]:
                continue
            components += 1
            if not succ(seed):
                visited[seed] = 1
                if first_singleton < 0:
                    first_singleton = seed
                    results.append((components, 0, seed, seed))
                continue
            codes, adj = _lean_component(succ, seed, None)
            for c in codes:
                visited[c] = 1
            if pool is not None and len(codes) >= _BIG_COMPONENT:
                pending.append((components, codes, pool.submit(_diameter_idx, adj)))
            else:
                d, s, f = _diameter_idx(adj)
                results.append((components, d, codes[s], codes[f]))
        for order, codes, fut in pending:
            d, s, f = fut.result()
            results.append((order, d, codes[s], codes[f]))
    finally:
        if pool is not None:
            pool.shutdown()
    best = (0, 0, 0)  # (gamma, source code, far code)
    for _order, d, src, far in sorted(results):
        if d > best[0]:
            best = (d, src, far)
    pair = (coding.decode_word(sym, best[1], n), coding.decode_word(sym, best[2], n))
    return GammaRow(n, best[0], pair, components)


def dehn(system: RewriteSystem, n: int,
         state_cap: int = DEFAULT_STATE_CAP, jobs: int = 1) -> DehnRow:
    """Dehn function value at n: max of gamma over lengths 1..n//2."""
    if n < 1:
        raise ValueError("n must be >= 1")
    value = 0
    witness: Optional[tuple[Word, Word]] = None
    for k in range(1, n // 2 + 1):
        row = gamma_capital(system, k, state_cap, jobs)
        if witness is None or row.gamma > value:
            value = row.gamma
            witness = row.witness_pair
    return DehnRow(n, value, witness)


def _longest_simple_path_from(adj: list[list[int]], start: int,
                              stop_above: Optional[int] = None) -> int:
    """Longest simple path (in steps) from start, by DFS backtracking.

    Exhaustive, hence exact, when run to completion. With stop_above set the
    search returns as soon as some path longer than that threshold is found,
    which turns it into a fast bound-violation decision procedure: the
    result is exact when <= stop_above, otherwise a lower bound > stop_above.
    """
    visited = bytearray(len(adj))
    visited[start] = 1
    best = 0
    depth = 0
    stack: list[list[int]] = [[start, 0]]
    while stack:
        frame = stack[-1]
        node = frame[0]
        neighbours = adj[node]
        advanced = False
        i = frame[1]
        while i < len(neighbours):
            nxt = neighbours[i]
            i += 1
            if not visited[nxt]:
                frame[1] = i
                visited[nxt] = 1
                depth += 1
                if depth > best:
                    best = depth
                    if stop_above is not None and best > stop_above:
                        return best
                stack.append([nxt, 0])
                advanced = True
                break
        if not advanced:
            stack.pop()
            visited[node] = 0
            depth -= 1
    return best


def gamma_exact(system: RewriteSystem, u: Word,
                node_cap: int = DEFAULT_NODE_CAP) -> int:
    """Length of the longest transformation sequence from u with all words
    distinct (the start word counts as visited: k steps = k+1 words).

    Exponential-time oracle; refuses components larger than node_cap.
    """
    sym = as_symmetrized(system)
    _require_length_preserving(sym, "gamma_exact")
    require_same_alphabet(sym, u)
    succ = coding.code_successors(sym, Orientation.SYMMETRIZED, len(u))
    out = _lean_component(succ, coding.encode_word(u), node_cap)
    if out is None:
        raise ComponentTooLargeError(
            f"component of {u!r} exceeds node cap {node_cap}")
    _codes, adj = out
    return _longest_simple_path_from(adj, 0)


def edge_lines(comp: ComponentGraph):
    """Edge-list export: one `u_index v_index rule_id orientation` per line."""
    for ui, row in enumerate(comp.adjacency):
        for vi, step in row:
            yield f"{ui} {vi} {step.redex.rule_id} {step.redex.orientation.value}"


def dot_document(comp: ComponentGraph) -> str:
    """Graph-description document (DOT) for external visualization."""
    from .core import format_word

    lines = ["graph component {"]
    for i, word in enumerate(comp.nodes):
        lines.append(f'  n{i} [label="{format_word(word)}"];')
    seen = set()
    for ui, row in enumerate(comp.adjacency):
        for vi, step in row:
            key = (min(ui, vi), max(ui, vi), step.redex.rule_id)
            if key in seen:
                continue
            seen.add(key)
            lines.append(f'  n{ui} -- n{vi} [label="r{step.redex.rule_id}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"
