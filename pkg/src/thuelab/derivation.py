"""Directed-rewriting analytics: traces, derivational depth, and complexity.

Depth is the longest directed path in the rewrite graph, computed by
memoized DFS with on-stack cycle detection: any state that can reach a
directed cycle has infinite depth (INFINITE), which is distinct from
exceeding the state cap (CapExceededError). The full-length-n scan shares
one global memo table over all |A|^n words.
"""

from __future__ import annotations

from array import array
from dataclasses import dataclass
from typing import Optional

from . import coding
from .core import CapExceededError, Orientation, RewriteSystem, Word
from .engine import (Step, find_redexes, apply_redex, require_same_alphabet,
                     step_for, successors)

INFINITE = float("inf")

DEFAULT_STATE_CAP = 10_000_000

_UNSEEN, _ONSTACK, _INF = -2, -3, -1


@dataclass(frozen=True)
class DerivationTrace:
    """A start word and the (step, resulting word) sequence applied to it."""

    start: Word
    steps: tuple[tuple[Step, Word], ...]
    truncated: bool = False
    orientation: Orientation = Orientation.DIRECT

    @property
    def final_word(self) -> Word:
        return self.steps[-1][1] if self.steps else self.start

    def __len__(self) -> int:
        return len(self.steps)

    def words(self) -> list[Word]:
        return [self.start] + [w for _, w in self.steps]


@dataclass(frozen=True)
class Depth:
    """Longest-directed-path length from a word; witness absent when infinite."""

    value: int | float
    witness: Optional[DerivationTrace] = None

    @property
    def is_infinite(self) -> bool:
        return self.value == INFINITE


@dataclass(frozen=True)
class ComplexityRow:
    """Max depth over all words of one length, with the word attaining it."""

    n: int
    value: int | float
    witness_word: Word
    words_scanned: int


def derive_deterministic(system: RewriteSystem, start: Word,
                         max_steps: int = 10_000) -> DerivationTrace:
    """Repeatedly apply the first direct redex until none remains or the cap.

    For single-head words of a system whose direct transformations are
    determined, this is the unique direct derivation.
    """
    word = start
    steps = []
    truncated = False
    for _ in range(max_steps):
        redexes = find_redexes(system, word, Orientation.DIRECT)
        if not redexes:
            break
        step = step_for(system, word, redexes[0])
        word = apply_redex(word, redexes[0], system)
        steps.append((step, word))
    else:
        truncated = bool(find_redexes(system, word, Orientation.DIRECT))
    return DerivationTrace(start, tuple(steps), truncated, Orientation.DIRECT)


def _sparse_longest_path(succ, start, memo: dict, state_cap: int) -> int:
    """Iterative memoized longest-path DFS over hashable states.

    memo holds _ONSTACK / _INF / finite values; returns the start value.
    """
    v = memo.get(start, _UNSEEN)
    if v != _UNSEEN:
        return v
    memo[start] = _ONSTACK
    frames = [[start, succ(start), 0, 0]]
    while frames:
        f = frames[-1]
        kids, i, best = f[1], f[2], f[3]
        descend = False
        while i < len(kids) and best != _INF:
            k = kids[i]
            i += 1
            mv = memo.get(k, _UNSEEN)
            if mv >= 0:
                if mv + 1 > best:
                    best = mv + 1
            elif mv == _UNSEEN:
                f[2], f[3] = i, best
                memo[k] = _ONSTACK
                if len(memo) > state_cap:
                    raise CapExceededError(
                        f"longest-path search explored more than {state_cap} states",
                        len(memo))
                frames.append([k, succ(k), 0, 0])
                descend = True
                break
            else:  # on stack (cycle) or known infinite
                best = _INF
        if descend:
            continue
        memo[f[0]] = best
        frames.pop()
        if frames:
            pf = frames[-1]
            if best == _INF:
                pf[3] = _INF
            elif best + 1 > pf[3]:
                pf[3] = best + 1
    return memo[start]


def _dense_longest_path(start: int, memo, succ) -> int:
    """Same DFS over dense integer codes with an array-backed memo."""
    v = memo[start]
    if v != _UNSEEN:
        return v
    memo[start] = _ONSTACK
    frames = [[start, succ(start), 0, 0]]
    while frames:
        f = frames[-1]
        kids, i, best = f[1], f[2], f[3]
        descend = False
        while i < len(kids) and best != _INF:
            k = kids[i]
            i += 1
            mv = memo[k]
            if mv >= 0:
                if mv + 1 > best:
                    best = mv + 1
            elif mv == _UNSEEN:
                f[2], f[3] = i, best
                memo[k] = _ONSTACK
                frames.append([k, succ(k), 0, 0])
                descend = True
                break
            else:
                best = _INF
        if descend:
            continue
        memo[f[0]] = best
        frames.pop()
        if frames:
            pf = frames[-1]
            if best == _INF:
                pf[3] = _INF
            elif best + 1 > pf[3]:
                pf[3] = best + 1
    return memo[start]


def _word_successor_states(system: RewriteSystem,
                           orientation: Orientation = Orientation.DIRECT):
    """Successor state function over raw symbol tuples (any system)."""
    from .engine import _index  # shared matching tables

    idx = _index(system)
    lengths = idx.lengths
    by_len = idx.by_len
    select_all = orientation is Orientation.SYMMETRIZED

    def succ(syms: tuple[int, ...]) -> list[tuple[int, ...]]:
        n = len(syms)
        out = []
        for L in lengths:
            table = by_len[L]
            for pos in range(n - L + 1):
                rules = table.get(syms[pos:pos + L])
                if rules:
                    for r in rules:
                        if select_all or r.orientation is orientation:
                            out.append(syms[:pos] + r.rhs.symbols + syms[pos + L:])
        return out

    return succ


def _witness_trace(system: RewriteSystem, start: Word, value: int,
                   depth_of) -> DerivationTrace:
    """Greedy descent along the longest-path table, using canonical step order."""
    word = start
    steps = []
    remaining = value
    while remaining > 0:
        for nxt, step in successors(system, word, Orientation.DIRECT):
            if depth_of(nxt) == remaining - 1:
                steps.append((step, nxt))
                word = nxt
                remaining -= 1
                break
        else:  # pragma: no cover - table guarantees a successor exists
            raise AssertionError("longest-path table is inconsistent")
    return DerivationTrace(start, tuple(steps), False, Orientation.DIRECT)


def derivational_depth(system: RewriteSystem, start: Word,
                       state_cap: int = DEFAULT_STATE_CAP) -> Depth:
    """Longest directed derivation length from `start`, with a witness trace.

    Returns INFINITE iff a directed cycle is reachable; raises
    CapExceededError if more than state_cap distinct words get explored.
    """
    require_same_alphabet(system, start)
    succ = _word_successor_states(system)
    memo: dict = {}
    value = _sparse_longest_path(succ, start.symbols, memo, state_cap)
    if value == _INF:
        return Depth(INFINITE, None)
    witness = _witness_trace(system, start, value,
                             lambda w: memo.get(w.symbols, _UNSEEN))
    return Depth(value, witness)


def derivational_complexity(system: RewriteSystem, n: int,
                            state_cap: int = DEFAULT_STATE_CAP) -> ComplexityRow:
    """Exact max depth over all |A|^n words of length n (shared memo scan)."""
    if n < 1:
        raise ValueError("n must be >= 1")
    base = len(system.alphabet)
    size = base ** n
    if size > state_cap:
        raise CapExceededError(
            f"scanning {base}^{n} = {size} words exceeds the state cap {state_cap}",
            0)
    if not system.validation.length_preserving:
        return _complexity_sparse(system, n, state_cap)
    succ = coding.code_successors(system, Orientation.DIRECT, n)
    memo = array("q", [_UNSEEN]) * size
    best = -1
    best_code = 0
    infinite_code = -1
    for seed in range(size):
        v = memo[seed]
        if v == _UNSEEN:
            v = _dense_longest_path(seed, memo, succ)
        if v == _INF:
            if infinite_code < 0:
                infinite_code = seed
        elif v > best:
            best, best_code = v, seed
    if infinite_code >= 0:
        return ComplexityRow(n, INFINITE,
                             coding.decode_word(system, infinite_code, n), size)
    return ComplexityRow(n, best, coding.decode_word(system, best_code, n), size)


def _complexity_sparse(system: RewriteSystem, n: int, state_cap: int) -> ComplexityRow:
    # Non-length-preserving systems cannot use dense codes; share a dict memo.
    import itertools

    succ = _word_successor_states(system)
    memo: dict = {}
    base = len(system.alphabet)
    best = -1
    best_syms: tuple[int, ...] = ()
    infinite_syms = None
    count = 0
    for syms in itertools.product(range(base), repeat=n):
        count += 1
        v = _sparse_longest_path(succ, syms, memo, state_cap)
        if v == _INF:
            if infinite_syms is None:
                infinite_syms = syms
        elif v > best:
            best, best_syms = v, syms
    if infinite_syms is not None:
        return ComplexityRow(n, INFINITE, Word(system.alphabet, infinite_syms), count)
    return ComplexityRow(n, best, Word(system.alphabet, best_syms), count)
