"""Builtin rewriting systems and their seed-word families.

`s0` is the unary-logarithm counter machine: a head sweeps right over a
digit tape zeroing every odd 1, a cleaning head sweeps back unmarking, and
the cycle repeats until no 1s remain. `e0` is a smaller two-head system
whose reverse rules unlock wall-consuming cycles. Both are length-preserving
and unambiguous; definitions are also shipped as data/*.thue documents in
the rewrite-core text format.
"""

from __future__ import annotations

from importlib import resources

from .core import Alphabet, RewriteSystem, Role, Word, make_system

_S0_ALPHABET = Alphabet(
    symbols=("0", "1", "m0", "m1", "h0", "h1", "h2", "c", "w"),
    roles={
        "h0": Role.HEAD, "h1": Role.HEAD, "h2": Role.HEAD, "c": Role.HEAD,
        "w": Role.WALL,
        "0": Role.DIGIT_UNMARKED, "1": Role.DIGIT_UNMARKED,
        "m0": Role.DIGIT_MARKED, "m1": Role.DIGIT_MARKED,
    },
    mark_pairing={"0": "m0", "1": "m1"},
)

_S0_RULES = (
    # Head sweep right (row-major): on a 1 the head index cycles 0->1->2->1,
    # odd 1s become marked 0s; 0s are marked and passed through.
    (("h0", "1"), ("m0", "h1")),
    (("h1", "1"), ("m1", "h2")),
    (("h2", "1"), ("m0", "h1")),
    (("h0", "0"), ("m0", "h0")),
    (("h1", "0"), ("m0", "h1")),
    (("h2", "0"), ("m0", "h2")),
    # At the right wall the sweep head becomes the cleaning head.
    (("h1", "w"), ("c", "w")),
    (("h2", "w"), ("c", "w")),
    # The cleaning head sweeps left, unmarking.
    (("m0", "c"), ("c", "0")),
    (("m1", "c"), ("c", "1")),
    # At the left wall it becomes h0 and a new cycle starts.
    (("w", "c"), ("w", "h0")),
)

_E0_ALPHABET = Alphabet(
    symbols=("0", "m0", "L", "R", "W"),
    roles={
        "L": Role.HEAD, "R": Role.HEAD,
        "W": Role.WALL,
        "0": Role.DIGIT_UNMARKED, "m0": Role.DIGIT_MARKED,
    },
    mark_pairing={"0": "m0"},
)

_E0_RULES = (
    (("R", "0"), ("m0", "R")),
    (("W", "L"), ("W", "R")),
    (("m0", "L"), ("L", "0")),
    (("L", "W", "W"), ("R", "0", "W")),
)

_E0_REORIENTED_RULES = _E0_RULES[:3] + ((("R", "0", "W"), ("L", "W", "W")),)


def s0() -> RewriteSystem:
    """The 11-rule unary-logarithm system (all validation flags true)."""
    return make_system(_S0_ALPHABET, _S0_RULES)


def e0() -> RewriteSystem:
    """The 4-rule two-head system (walls_fixed is false: rule 3 eats a wall)."""
    return make_system(_E0_ALPHABET, _E0_RULES)


def e0_reoriented() -> RewriteSystem:
    """e0 with its wall rule flipped; symmetrizes to the same rule set as e0."""
    return make_system(_E0_ALPHABET, _E0_REORIENTED_RULES)


def builtin(name: str) -> RewriteSystem:
    """Look up a builtin system by CLI name."""
    try:
        return _BUILTINS[name]()
    except KeyError:
        raise KeyError(f"unknown builtin system {name!r}; "
                       f"choices: {', '.join(sorted(_BUILTINS))}") from None


_BUILTINS = {"s0": s0, "e0": e0, "e0-reoriented": e0_reoriented}


def builtin_document(name: str) -> str:
    """Text of the shipped .thue document for a builtin system."""
    fname = {"s0": "s0.thue", "e0": "e0.thue"}[name]
    return (resources.files("thuelab") / "data" / fname).read_text(encoding="utf-8")


def _tokens_word(alphabet: Alphabet, tokens: list[str]) -> Word:
    return Word(alphabet, [alphabet.index(t) for t in tokens])


def unary_counter(k: int) -> Word:
    """w h0 1^k w: the canonical worst-case seed for s0."""
    if k < 1:
        raise ValueError("k must be positive")
    return _tokens_word(_S0_ALPHABET, ["w", "h0"] + ["1"] * k + ["w"])


def all_zero(k: int) -> Word:
    """w h0 0^k w: the terminal-cycle seed for s0."""
    if k < 1:
        raise ValueError("k must be positive")
    return _tokens_word(_S0_ALPHABET, ["w", "h0"] + ["0"] * k + ["w"])


def main_case_endpoint(k: int, l: int) -> Word:
    """w m0^l h1 0^(k-l) w: where the deterministic run consumes the last 1."""
    if k < 1:
        raise ValueError("k must be positive")
    if not 0 < l <= k:
        raise ValueError("l must satisfy 0 < l <= k")
    return _tokens_word(_S0_ALPHABET, ["w"] + ["m0"] * l + ["h1"] + ["0"] * (k - l) + ["w"])


def e0_counter(k: int) -> Word:
    """W R 0^k W: the quadratic-distance seed for e0."""
    if k < 1:
        raise ValueError("k must be positive")
    return _tokens_word(_E0_ALPHABET, ["W", "R"] + ["0"] * k + ["W"])


def e0_terminal(k: int) -> Word:
    """W L W^(k+1): endpoint of the wall-consuming cycles from e0_counter(k)."""
    if k < 1:
        raise ValueError("k must be positive")
    return _tokens_word(_E0_ALPHABET, ["W", "L"] + ["W"] * (k + 1))


_SEED_FAMILIES = {
    "unary-counter": (unary_counter, 1),
    "all-zero": (all_zero, 1),
    "main-case-endpoint": (main_case_endpoint, 2),
    "e0-counter": (e0_counter, 1),
    "e0-terminal": (e0_terminal, 1),
}


def seed_word(family: str, k: int, l: int | None = None) -> Word:
    """Build a named seed-family word (CLI entry point)."""
    try:
        fn, arity = _SEED_FAMILIES[family]
    except KeyError:
        raise KeyError(f"unknown seed family {family!r}; "
                       f"choices: {', '.join(sorted(_SEED_FAMILIES))}") from None
    if arity == 2:
        if l is None:
            raise ValueError(f"seed family {family!r} needs both k and l")
        return fn(k, l)
    return fn(k)
