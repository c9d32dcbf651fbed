"""Alphabets, words, rules, and the `.thue` system-definition format.

Words are sequences of symbol indices into an immutable Alphabet. Tokens are
multi-character (`h0`, `m1`), so the text form of a word is space-separated
tokens, not a character string. All types here are immutable after
construction and safe to share between threads.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Iterable, Mapping, Optional, Sequence


class ThueLabError(Exception):
    """Base class for errors raised by this package."""


class ParseError(ThueLabError):
    """Syntax or semantic error in a system-definition document."""

    def __init__(self, message: str, line: int = 0, column: int = 0):
        self.line = line
        self.column = column
        if line:
            message = f"line {line}, column {column}: {message}"
        super().__init__(message)


class UnknownTokenError(ThueLabError):
    """A word contains a token that is not in the alphabet.

    ``position`` is the 1-based index of the offending token.
    """

    def __init__(self, token: str, position: int):
        self.token = token
        self.position = position
        super().__init__(f"unknown token {token!r} at position {position}")


class CapExceededError(ThueLabError):
    """A search exceeded its configured state cap (distinct from divergence)."""

    def __init__(self, message: str, states_explored: int):
        self.states_explored = states_explored
        super().__init__(message)


class StaleRedexError(ThueLabError):
    """A redex no longer matches the word it is applied to."""


class Role(enum.Enum):
    HEAD = "head"
    WALL = "wall"
    DIGIT_UNMARKED = "digit-unmarked"
    DIGIT_MARKED = "digit-marked"


class Orientation(enum.Enum):
    """Rule application direction.

    DIRECT applies rules as written, REVERSE applies their formal inverses,
    SYMMETRIZED selects both (the semigroup-equality relation).
    """

    DIRECT = "direct"
    REVERSE = "reverse"
    SYMMETRIZED = "symmetrized"


class Alphabet:
    """Ordered set of distinct tokens with optional role metadata.

    ``roles`` maps a token to its Role; ``mark_pairing`` maps each unmarked
    digit token to its marked counterpart (injective).
    """

    __slots__ = ("symbols", "roles", "mark_pairing", "_index", "_key",
                 "head_indices", "wall_indices", "__weakref__")

    def __init__(self, symbols: Sequence[str],
                 roles: Optional[Mapping[str, Role]] = None,
                 mark_pairing: Optional[Mapping[str, str]] = None):
        symbols = tuple(symbols)
        roles = dict(roles or {})
        mark_pairing = dict(mark_pairing or {})
        seen = set()
        for tok in symbols:
            if not tok or any(ch.isspace() for ch in tok):
                raise ValueError(f"bad token {tok!r}: empty or contains whitespace")
            if tok in seen:
                raise ValueError(f"duplicate token {tok!r}")
            seen.add(tok)
        for tok in roles:
            if tok not in seen:
                raise ValueError(f"role declared for unknown token {tok!r}")
        for unmarked, marked in mark_pairing.items():
            if roles.get(unmarked) is not Role.DIGIT_UNMARKED:
                raise ValueError(f"mark pairing domain {unmarked!r} must have role digit-unmarked")
            if roles.get(marked) is not Role.DIGIT_MARKED:
                raise ValueError(f"mark pairing image {marked!r} must have role digit-marked")
        if len(set(mark_pairing.values())) != len(mark_pairing):
            raise ValueError("mark pairing is not injective")
        self.symbols = symbols
        self.roles = roles
        self.mark_pairing = mark_pairing
        self._index = {tok: i for i, tok in enumerate(symbols)}
        self.head_indices = frozenset(
            i for i, t in enumerate(symbols) if roles.get(t) is Role.HEAD)
        self.wall_indices = frozenset(
            i for i, t in enumerate(symbols) if roles.get(t) is Role.WALL)
        self._key = (symbols,
                     tuple(sorted((t, r.value) for t, r in roles.items())),
                     tuple(sorted(mark_pairing.items())))

    def __len__(self) -> int:
        return len(self.symbols)

    def index(self, token: str) -> int:
        return self._index[token]

    def __contains__(self, token: str) -> bool:
        return token in self._index

    def role_of(self, index: int) -> Optional[Role]:
        return self.roles.get(self.symbols[index])

    def __eq__(self, other) -> bool:
        return isinstance(other, Alphabet) and self._key == other._key

    def __hash__(self) -> int:
        return hash(self._key)

    def __repr__(self) -> str:
        return f"Alphabet({' '.join(self.symbols)})"


class Word:
    """Immutable sequence of symbol indices over one alphabet."""

    __slots__ = ("alphabet", "symbols")

    def __init__(self, alphabet: Alphabet, symbols: Iterable[int]):
        symbols = tuple(symbols)
        size = len(alphabet)
        for s in symbols:
            if not 0 <= s < size:
                raise ValueError(f"symbol index {s} out of range for {alphabet!r}")
        self.alphabet = alphabet
        self.symbols = symbols

    @property
    def length(self) -> int:
        return len(self.symbols)

    def __len__(self) -> int:
        return len(self.symbols)

    def tokens(self) -> tuple[str, ...]:
        syms = self.alphabet.symbols
        return tuple(syms[i] for i in self.symbols)

    def __eq__(self, other) -> bool:
        return (isinstance(other, Word) and self.symbols == other.symbols
                and self.alphabet == other.alphabet)

    def __hash__(self) -> int:
        return hash(self.symbols)

    def __repr__(self) -> str:
        return f"Word({format_word(self)!r})"


@dataclass(frozen=True)
class Rule:
    """Oriented rewriting rule lhs -> rhs.

    ``id`` is the ordinal within its system; ``parent_id`` points at the rule
    it was derived from by symmetrization (itself, for original rules).
    """

    lhs: Word
    rhs: Word
    id: int
    orientation: Orientation = Orientation.DIRECT
    parent_id: int = -1

    def __post_init__(self):
        if len(self.lhs) == 0:
            raise ValueError("rule left side must be non-empty")
        if self.parent_id < 0:
            object.__setattr__(self, "parent_id", self.id)

    def __repr__(self) -> str:
        arrow = "->" if self.orientation is Orientation.DIRECT else "~>"
        return f"Rule#{self.id}({format_word(self.lhs)} {arrow} {format_word(self.rhs)})"


@dataclass(frozen=True)
class ValidationReport:
    """Structural flags derived purely from alphabet + rules."""

    length_preserving: bool
    unambiguous_left_sides: bool
    single_head_rules: bool
    walls_fixed: bool


def _validate(alphabet: Alphabet, rules: Sequence[Rule]) -> ValidationReport:
    heads = alphabet.head_indices
    walls = alphabet.wall_indices
    length_preserving = all(len(r.lhs) == len(r.rhs) for r in rules)
    unambiguous = len({r.lhs.symbols for r in rules}) == len(rules)
    single_head = True
    for r in rules:
        if (sum(1 for s in r.lhs.symbols if s in heads) != 1
                or sum(1 for s in r.rhs.symbols if s in heads) != 1):
            single_head = False
            break
    walls_fixed = True
    for r in rules:
        lpos = [i for i, s in enumerate(r.lhs.symbols) if s in walls]
        rpos = [i for i, s in enumerate(r.rhs.symbols) if s in walls]
        if lpos != rpos:
            walls_fixed = False
            break
    return ValidationReport(length_preserving, unambiguous, single_head, walls_fixed)


class RewriteSystem:
    """An alphabet plus an ordered list of rules, validated eagerly."""

    __slots__ = ("alphabet", "rules", "validation", "__weakref__")

    def __init__(self, alphabet: Alphabet, rules: Sequence[Rule]):
        rules = tuple(rules)
        for i, r in enumerate(rules):
            if r.id != i:
                raise ValueError(f"rule ids must be 0..{len(rules) - 1} in list order")
            for side in (r.lhs, r.rhs):
                if side.alphabet != alphabet:
                    raise ValueError("rule words must be over the system alphabet")
        self.alphabet = alphabet
        self.rules = rules
        self.validation = _validate(alphabet, rules)

    def __eq__(self, other) -> bool:
        return (isinstance(other, RewriteSystem)
                and self.alphabet == other.alphabet and self.rules == other.rules)

    def __hash__(self) -> int:
        return hash((self.alphabet, self.rules))

    def __repr__(self) -> str:
        return f"RewriteSystem(|A|={len(self.alphabet)}, rules={len(self.rules)})"

    def is_symmetrized(self) -> bool:
        return any(r.orientation is Orientation.REVERSE for r in self.rules)


def make_system(alphabet: Alphabet,
                rule_pairs: Sequence[tuple[Sequence[str], Sequence[str]]]) -> RewriteSystem:
    """Build a system from (lhs tokens, rhs tokens) pairs in order."""
    rules = []
    for i, (lhs, rhs) in enumerate(rule_pairs):
        rules.append(Rule(
            lhs=Word(alphabet, [alphabet.index(t) for t in lhs]),
            rhs=Word(alphabet, [alphabet.index(t) for t in rhs]),
            id=i,
        ))
    return RewriteSystem(alphabet, rules)


def parse_word(text: str, alphabet: Alphabet) -> Word:
    """Parse space-separated tokens into a Word; empty input is the empty word."""
    tokens = text.split()
    symbols = []
    for pos, tok in enumerate(tokens, start=1):
        if tok not in alphabet:
            raise UnknownTokenError(tok, pos)
        symbols.append(alphabet.index(tok))
    return Word(alphabet, symbols)


def format_word(word: Word) -> str:
    """Inverse of parse_word: space-separated tokens, "" for the empty word."""
    return " ".join(word.tokens())


_DIRECTIVES = ("@alphabet", "@heads", "@walls", "@marks")


def parse_system(text: str) -> RewriteSystem:
    """Parse a system-definition document.

    Line-oriented format: `#` comment lines and blank lines are skipped;
    `@alphabet tok ...` is required exactly once and must precede rules;
    `@heads`/`@walls`/`@marks unmarked:marked ...` declare roles; remaining
    lines are rules `lhs_tokens -> rhs_tokens`. Empty rule sides (spelled
    `<empty>`, or `1` when `1` is not an alphabet token) are rejected.
    """
    symbols: Optional[list[str]] = None
    roles: dict[str, Role] = {}
    mark_pairing: dict[str, str] = {}
    rule_lines: list[tuple[int, str, list[str], list[str]]] = []

    def err(msg: str, lineno: int, col: int = 1):
        raise ParseError(msg, lineno, col)

    def col_of(line: str, token: str, occurrence: int = 0) -> int:
        # Best-effort 1-based column of a token for diagnostics.
        idx = -1
        for _ in range(occurrence + 1):
            idx = line.find(token, idx + 1)
        return idx + 1 if idx >= 0 else 1

    def set_role(tok: str, role: Role, lineno: int, line: str):
        if symbols is None or tok not in symbols:
            err(f"unknown token {tok!r} in role directive", lineno, col_of(line, tok))
        if tok in roles:
            err(f"role redeclaration for token {tok!r}", lineno, col_of(line, tok))
        roles[tok] = role

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        head = parts[0]
        if head.startswith("@"):
            if head not in _DIRECTIVES:
                err(f"unknown directive {head!r}", lineno)
            if head == "@alphabet":
                if symbols is not None:
                    err("duplicate @alphabet directive", lineno)
                symbols = []
                for tok in parts[1:]:
                    if tok in symbols:
                        err(f"duplicate @alphabet token {tok!r}", lineno, col_of(raw, tok, 1))
                    symbols.append(tok)
                if not symbols:
                    err("@alphabet declares no tokens", lineno)
            elif head in ("@heads", "@walls"):
                role = Role.HEAD if head == "@heads" else Role.WALL
                if symbols is None:
                    err(f"{head} before @alphabet", lineno)
                for tok in parts[1:]:
                    set_role(tok, role, lineno, raw)
            else:  # @marks
                if symbols is None:
                    err("@marks before @alphabet", lineno)
                for pair in parts[1:]:
                    if ":" not in pair:
                        err(f"@marks entry {pair!r} is not unmarked:marked", lineno,
                            col_of(raw, pair))
                    unmarked, _, marked = pair.partition(":")
                    set_role(unmarked, Role.DIGIT_UNMARKED, lineno, raw)
                    set_role(marked, Role.DIGIT_MARKED, lineno, raw)
                    if marked in mark_pairing.values():
                        err(f"mark pairing is not injective at {pair!r}", lineno)
                    mark_pairing[unmarked] = marked
            continue
        # Rule line.
        if "->" not in parts:
            err("expected `lhs -> rhs` rule line", lineno)
        if parts.count("->") > 1:
            err("more than one `->` in rule line", lineno, col_of(raw, "->", 1))
        if symbols is None:
            err("rule line before @alphabet", lineno)
        arrow = parts.index("->")
        lhs, rhs = parts[:arrow], parts[arrow + 1:]
        for side, side_name in ((lhs, "left"), (rhs, "right")):
            empty_spelling = side == ["<empty>"] or (side == ["1"] and "1" not in symbols)
            if not side or empty_spelling:
                err(f"empty {side_name} side is not supported (rules must be "
                    "length-preserving-capable; see format docs)", lineno)
        rule_lines.append((lineno, raw, lhs, rhs))

    if symbols is None:
        raise ParseError("missing @alphabet directive")

    alphabet = Alphabet(symbols, roles, mark_pairing)
    pairs = []
    for lineno, raw, lhs, rhs in rule_lines:
        for tok in lhs + rhs:
            if tok not in alphabet:
                err(f"unknown token {tok!r} in rule", lineno, col_of(raw, tok))
        pairs.append((lhs, rhs))
    return make_system(alphabet, pairs)


def format_system(system: RewriteSystem) -> str:
    """Render a system back to the document format (used for round-trips)."""
    al = system.alphabet
    lines = ["@alphabet " + " ".join(al.symbols)]
    heads = [t for t in al.symbols if al.roles.get(t) is Role.HEAD]
    walls = [t for t in al.symbols if al.roles.get(t) is Role.WALL]
    if heads:
        lines.append("@heads " + " ".join(heads))
    if walls:
        lines.append("@walls " + " ".join(walls))
    if al.mark_pairing:
        lines.append("@marks " + " ".join(
            f"{u}:{m}" for u, m in al.mark_pairing.items()))
    for r in system.rules:
        if r.orientation is Orientation.DIRECT:
            lines.append(f"{format_word(r.lhs)} -> {format_word(r.rhs)}")
    return "\n".join(lines) + "\n"


def symmetrize(system: RewriteSystem) -> RewriteSystem:
    """Return the system whose rules are the direct rules plus their reverses.

    Only the Direct half of the input is taken as the base, so symmetrize is
    idempotent. Rule ids are renumbered 0..2m-1 (direct block first); each
    rule's parent_id names the base rule it came from.
    """
    base = [r for r in system.rules if r.orientation is Orientation.DIRECT]
    m = len(base)
    rules = []
    for i, r in enumerate(base):
        rules.append(Rule(lhs=r.lhs, rhs=r.rhs, id=i,
                          orientation=Orientation.DIRECT, parent_id=i))
    for i, r in enumerate(base):
        rules.append(Rule(lhs=r.rhs, rhs=r.lhs, id=m + i,
                          orientation=Orientation.REVERSE, parent_id=i))
    return RewriteSystem(system.alphabet, rules)
