"""Redex discovery and single-step application.

Successor order is fixed (position, then rule id, then direct before
reverse) so traces and witnesses reproduce byte-for-byte. All functions are
stateless over immutable inputs.
"""

from __future__ import annotations

import weakref
from dataclasses import dataclass
from typing import Optional

from .core import Orientation, RewriteSystem, Rule, StaleRedexError, Word


@dataclass(frozen=True)
class Redex:
    """A rule match: the rule's oriented lhs occurs in the word at position."""

    position: int
    rule_id: int
    orientation: Orientation


@dataclass(frozen=True)
class Step:
    """A redex together with the ordinal of the head it engages.

    ``head_index`` counts head-role symbols left-to-right in the word the
    step applies to; None when the system's rules are not single-head.
    """

    redex: Redex
    head_index: Optional[int] = None


class _RuleIndex:
    """Per-system matching tables, built once and cached weakly."""

    def __init__(self, system: RewriteSystem):
        heads = system.alphabet.head_indices
        # lhs length -> {lhs symbol tuple -> [rule, ...] in id order}
        self.by_len: dict[int, dict[tuple[int, ...], list[Rule]]] = {}
        self.head_offsets: dict[int, tuple[Optional[int], Optional[int]]] = {}
        for r in system.rules:
            table = self.by_len.setdefault(len(r.lhs), {})
            table.setdefault(r.lhs.symbols, []).append(r)
            lh = [i for i, s in enumerate(r.lhs.symbols) if s in heads]
            rh = [i for i, s in enumerate(r.rhs.symbols) if s in heads]
            self.head_offsets[r.id] = (
                lh[0] if len(lh) == 1 else None,
                rh[0] if len(rh) == 1 else None,
            )
        self.lengths = sorted(self.by_len)


_INDEX_CACHE: "weakref.WeakKeyDictionary[RewriteSystem, _RuleIndex]" = weakref.WeakKeyDictionary()


def _index(system: RewriteSystem) -> _RuleIndex:
    idx = _INDEX_CACHE.get(system)
    if idx is None:
        idx = _RuleIndex(system)
        _INDEX_CACHE[system] = idx
    return idx


def _wanted(rule: Rule, orientation: Orientation) -> bool:
    return orientation is Orientation.SYMMETRIZED or rule.orientation is orientation


def require_same_alphabet(system: RewriteSystem, word: Word):
    """Reject words over a different alphabet before index math can alias."""
    if word.alphabet is not system.alphabet and word.alphabet != system.alphabet:
        raise ValueError("word is not over the system's alphabet")


def find_redexes(system: RewriteSystem, word: Word,
                 orientation: Orientation = Orientation.DIRECT) -> list[Redex]:
    """All matches of the selected rules in the word, in canonical order.

    Direct selects rules tagged Direct, Reverse those tagged Reverse (a plain
    un-symmetrized system has none), Symmetrized selects all.
    """
    require_same_alphabet(system, word)
    idx = _index(system)
    syms = word.symbols
    n = len(syms)
    out: list[Redex] = []
    for pos in range(n):
        hits: list[Rule] = []
        for length in idx.lengths:
            if pos + length > n:
                continue
            rules = idx.by_len[length].get(syms[pos:pos + length])
            if rules:
                hits.extend(r for r in rules if _wanted(r, orientation))
        hits.sort(key=lambda r: (r.id, r.orientation is not Orientation.DIRECT))
        out.extend(Redex(pos, r.id, r.orientation) for r in hits)
    return out


def apply_redex(word: Word, redex: Redex, system: RewriteSystem) -> Word:
    """Replace the matched lhs with the rule's rhs; the input is unchanged."""
    rule = system.rules[redex.rule_id]
    pos = redex.position
    lhs = rule.lhs.symbols
    if word.symbols[pos:pos + len(lhs)] != lhs:
        raise StaleRedexError(
            f"rule {redex.rule_id} no longer matches at position {pos}")
    return Word(word.alphabet,
                word.symbols[:pos] + rule.rhs.symbols + word.symbols[pos + len(lhs):])


def engaged_head_position(system: RewriteSystem, word: Word, redex: Redex) -> Optional[int]:
    """Word position of the single head consumed by the redex, if any."""
    off = _index(system).head_offsets[redex.rule_id][0]
    return None if off is None else redex.position + off


def head_positions(system: RewriteSystem, word: Word) -> list[int]:
    heads = system.alphabet.head_indices
    return [i for i, s in enumerate(word.symbols) if s in heads]


def step_for(system: RewriteSystem, word: Word, redex: Redex) -> Step:
    """Wrap a redex as a Step, attaching the engaged head's ordinal when the
    system validates single_head_rules."""
    head_index = None
    if system.validation.single_head_rules:
        p = engaged_head_position(system, word, redex)
        if p is not None:
            heads = system.alphabet.head_indices
            head_index = sum(1 for s in word.symbols[:p] if s in heads)
    return Step(redex, head_index)


def successors(system: RewriteSystem, word: Word,
               orientation: Orientation = Orientation.DIRECT) -> list[tuple[Word, Step]]:
    """One (result word, step) entry per redex, in find_redexes order.

    Duplicate result words are retained (they are distinct steps). When the
    system validates single_head_rules, each step's head_index is the
    left-to-right ordinal of the engaged head in the current word.
    """
    return [(apply_redex(word, redex, system), step_for(system, word, redex))
            for redex in find_redexes(system, word, orientation)]
