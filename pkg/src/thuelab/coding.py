"""Integer word codes and rule delta tables: the search core.

A length-n word over an alphabet of size B is encoded little-endian as
sum(symbols[i] * B**i). The code doubles as a dense index in 0..B**n-1, so
visited sets and memo tables over a full length-n word space can be flat
bytearrays/arrays instead of hash sets (4.8 MB instead of hundreds for 9^7).

A rule lhs->rhs whose lhs has length L matches at position i iff
(code // B**i) % B**L equals the packed lhs; applying it adds
(packed_rhs - packed_lhs) * B**i. One divmod and a dict probe per position.
"""

from __future__ import annotations

import weakref
from typing import Callable

from .core import Orientation, RewriteSystem


def encode(symbols, base: int) -> int:
    code = 0
    for s in reversed(symbols):
        code = code * base + s
    return code


def decode(code: int, length: int, base: int) -> tuple[int, ...]:
    out = []
    for _ in range(length):
        code, r = divmod(code, base)
        out.append(r)
    return tuple(out)


# system -> {orientation: groups}; groups = [(L, B**L, {seg: ((delta, rid), ...)}), ...]
_TABLE_CACHE: "weakref.WeakKeyDictionary[RewriteSystem, dict]" = weakref.WeakKeyDictionary()


def _tables(system: RewriteSystem, orientation: Orientation):
    per_system = _TABLE_CACHE.setdefault(system, {})
    groups = per_system.get(orientation)
    if groups is not None:
        return groups
    base = len(system.alphabet)
    by_len: dict[int, dict[int, list[tuple[int, int]]]] = {}
    for r in system.rules:
        if not (orientation is Orientation.SYMMETRIZED or r.orientation is orientation):
            continue
        lhs_code = encode(r.lhs.symbols, base)
        rhs_code = encode(r.rhs.symbols, base)
        if len(r.lhs) != len(r.rhs):
            raise ValueError("code tables require a length-preserving system")
        by_len.setdefault(len(r.lhs), {}).setdefault(lhs_code, []).append(
            (rhs_code - lhs_code, r.id))
    groups = [
        (L, base ** L, {seg: tuple(hits) for seg, hits in table.items()})
        for L, table in sorted(by_len.items())
    ]
    per_system[orientation] = groups
    return groups


def code_successors(system: RewriteSystem, orientation: Orientation,
                    length: int) -> Callable[[int], list[int]]:
    """Successor codes of a length-`length` word code (order not canonical)."""
    groups = _tables(system, orientation)
    base = len(system.alphabet)
    pows = [base ** i for i in range(length + 1)]
    if len(groups) == 1:
        L, seg_mod, table = groups[0]
        positions = range(max(0, length - L + 1))
        get = table.get

        def succ(code, _pows=pows, _get=get, _mod=seg_mod, _rng=positions):
            out = []
            for i in _rng:
                p = _pows[i]
                hits = _get((code // p) % _mod)
                if hits is not None:
                    for delta, _rid in hits:
                        out.append(code + delta * p)
            return out

        return succ

    def succ(code):
        out = []
        for L, seg_mod, table in groups:
            for i in range(length - L + 1):
                p = pows[i]
                hits = table.get((code // p) % seg_mod)
                if hits is not None:
                    for delta, _rid in hits:
                        out.append(code + delta * p)
        return out

    return succ


def edge_successors(system: RewriteSystem, orientation: Orientation,
                    length: int) -> Callable[[int], list[tuple[int, int, int]]]:
    """Like code_successors but yields (successor code, rule_id, position)."""
    groups = _tables(system, orientation)
    base = len(system.alphabet)
    pows = [base ** i for i in range(length + 1)]

    def succ(code):
        out = []
        for L, seg_mod, table in groups:
            for i in range(length - L + 1):
                p = pows[i]
                hits = table.get((code // p) % seg_mod)
                if hits is not None:
                    for delta, rid in hits:
                        out.append((code + delta * p, rid, i))
        return out

    return succ


def encode_word(word) -> int:
    return encode(word.symbols, len(word.alphabet))


def decode_word(system: RewriteSystem, code: int, length: int):
    from .core import Word
    return Word(system.alphabet, decode(code, length, len(system.alphabet)))
