import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from thuelab.core import (Orientation, StaleRedexError, Word, format_word,
                          parse_word)
from thuelab.engine import (Redex, apply_redex, find_redexes, head_positions,
                            successors)

from oracles import naive_matches, naive_successors


def words_of(system, texts):
    return [parse_word(t, system.alphabet) for t in texts]


def test_reverse_redexes_of_marked_head(s0_sym):
    w = parse_word("m0 h1", s0_sym.alphabet)
    redexes = find_redexes(s0_sym, w, Orientation.REVERSE)
    # reversals of h0 1 -> m0 h1, h2 1 -> m0 h1, h1 0 -> m0 h1
    assert [(r.position, r.rule_id) for r in redexes] == [(0, 11), (0, 13), (0, 15)]
    parents = {s0_sym.rules[r.rule_id].parent_id for r in redexes}
    assert parents == {0, 2, 4}


def test_no_redex_in_single_wall(s0_sym):
    w = parse_word("w", s0_sym.alphabet)
    for orientation in Orientation:
        assert find_redexes(s0_sym, w, orientation) == []


def test_unique_direct_redex_in_counter_word(s0_sys):
    w = parse_word("w h0 1 w", s0_sys.alphabet)
    redexes = find_redexes(s0_sys, w, Orientation.DIRECT)
    assert len(redexes) == 1
    assert redexes[0].position == 1
    assert redexes[0].rule_id == 0


def test_apply_redex_examples(s0_sys, e0_sys):
    w = parse_word("w h0 1 w", s0_sys.alphabet)
    r = find_redexes(s0_sys, w, Orientation.DIRECT)[0]
    assert format_word(apply_redex(w, r, s0_sys)) == "w m0 h1 w"

    we = parse_word("W R 0 W", e0_sys.alphabet)
    r = find_redexes(e0_sys, we, Orientation.DIRECT)[0]
    assert format_word(apply_redex(we, r, e0_sys)) == "W m0 R W"


def test_apply_then_reverse_is_identity(s0_sym):
    w = parse_word("w h0 1 w", s0_sym.alphabet)
    r = find_redexes(s0_sym, w, Orientation.DIRECT)[0]
    forward = apply_redex(w, r, s0_sym)
    back = Redex(r.position, r.rule_id + 11, Orientation.REVERSE)
    assert apply_redex(forward, back, s0_sym) == w


def test_cross_alphabet_words_rejected(s0_sys, e0_sys):
    w = parse_word("W R 0 W", e0_sys.alphabet)
    with pytest.raises(ValueError, match="alphabet"):
        find_redexes(s0_sys, w, Orientation.DIRECT)
    from thuelab.geodesic import distance
    with pytest.raises(ValueError, match="alphabet"):
        distance(e0_sys, w, parse_word("w h0 1 w", s0_sys.alphabet))


def test_apply_stale_redex_raises(s0_sys):
    w = parse_word("w h0 1 w", s0_sys.alphabet)
    stale = Redex(0, 0, Orientation.DIRECT)  # h0 1 does not match at 0
    with pytest.raises(StaleRedexError):
        apply_redex(w, stale, s0_sys)


def test_successor_counts_frozen(s0_sym, e0_sym):
    w = parse_word("w m0 h1 w", s0_sym.alphabet)
    succ = successors(s0_sym, w, Orientation.SYMMETRIZED)
    assert [format_word(x) for x, _ in succ] == [
        "w h0 1 w", "w h2 1 w", "w h1 0 w", "w m0 c w"]

    # enumeration over all 8 oriented rules yields 3 successors, not 2:
    # the reverse of W L -> W R also matches at position 0
    we = parse_word("W R 0 W", e0_sym.alphabet)
    succ = successors(e0_sym, we, Orientation.SYMMETRIZED)
    assert [(format_word(x), s.redex.rule_id, s.redex.position)
            for x, s in succ] == [
        ("W L 0 W", 5, 0), ("W m0 R W", 0, 1), ("W L W W", 7, 1)]


def test_successors_empty_word(s0_sym):
    w = parse_word("", s0_sym.alphabet)
    assert successors(s0_sym, w, Orientation.SYMMETRIZED) == []


def test_successors_match_naive_oracle_exhaustive_small(s0_sym, e0_sym):
    for system, n_max in ((s0_sym, 3), (e0_sym, 4)):
        al = system.alphabet
        for n in range(n_max + 1):
            for syms in itertools.product(range(len(al)), repeat=n):
                w = Word(al, syms)
                for orientation in Orientation:
                    got = [(r.position, r.rule_id)
                           for r in find_redexes(system, w, orientation)]
                    assert got == naive_matches(system, w.tokens(), orientation)
                got_words = [x.tokens() for x, _ in
                             successors(system, w, Orientation.SYMMETRIZED)]
                assert got_words == naive_successors(system, w.tokens(),
                                                     Orientation.SYMMETRIZED)


def test_successor_order_is_position_then_rule(s0_sym):
    w = parse_word("m0 h1 w", s0_sym.alphabet)
    redexes = find_redexes(s0_sym, w, Orientation.SYMMETRIZED)
    keys = [(r.position, r.rule_id) for r in redexes]
    assert keys == sorted(keys)


@settings(max_examples=150, deadline=None)
@given(data=st.data())
def test_determinism_and_edge_symmetry(s0_sym, data):
    al = s0_sym.alphabet
    syms = data.draw(st.lists(st.integers(0, len(al) - 1), max_size=7))
    w = Word(al, syms)
    first = successors(s0_sym, w, Orientation.SYMMETRIZED)
    second = successors(s0_sym, w, Orientation.SYMMETRIZED)
    assert first == second
    for v, _ in first:
        assert len(v) == len(w)  # length preservation
        back = {x for x, _ in successors(s0_sym, v, Orientation.SYMMETRIZED)}
        assert w in back  # edge symmetry of the rewriting graph


@st.composite
def random_length_preserving_systems(draw):
    from thuelab.core import make_system, Alphabet

    size = draw(st.integers(2, 4))
    tokens = tuple(f"t{i}" for i in range(size))
    al = Alphabet(tokens)
    n_rules = draw(st.integers(1, 5))
    pairs = []
    for _ in range(n_rules):
        length = draw(st.integers(1, 2))
        lhs = [tokens[draw(st.integers(0, size - 1))] for _ in range(length)]
        rhs = [tokens[draw(st.integers(0, size - 1))] for _ in range(length)]
        pairs.append((lhs, rhs))
    return make_system(al, pairs)


@settings(max_examples=100, deadline=None)
@given(data=st.data(), system=random_length_preserving_systems())
def test_random_systems_match_oracle_and_symmetrize(data, system):
    from thuelab.core import symmetrize

    sym = symmetrize(system)
    assert symmetrize(sym) == sym  # idempotent on the direct half
    al = sym.alphabet
    syms = data.draw(st.lists(st.integers(0, len(al) - 1), max_size=6))
    w = Word(al, syms)
    for orientation in Orientation:
        got = [(r.position, r.rule_id)
               for r in find_redexes(sym, w, orientation)]
        assert got == naive_matches(sym, w.tokens(), orientation)
    got_words = [x.tokens() for x, _ in successors(sym, w, Orientation.SYMMETRIZED)]
    assert got_words == naive_successors(sym, w.tokens(), Orientation.SYMMETRIZED)
    for v, _ in successors(sym, w, Orientation.SYMMETRIZED):
        assert w.tokens() in naive_successors(sym, v.tokens(),
                                              Orientation.SYMMETRIZED)


def test_single_head_direct_determinism_exhaustive(s0_sys):
    al = s0_sys.alphabet
    heads = al.head_indices
    for n in range(1, 6):
        for syms in itertools.product(range(len(al)), repeat=n):
            if sum(1 for s in syms if s in heads) != 1:
                continue
            w = Word(al, syms)
            assert len(find_redexes(s0_sys, w, Orientation.DIRECT)) <= 1


def test_wall_positions_fixed_along_s0_steps(s0_sym):
    al = s0_sym.alphabet
    walls = al.wall_indices
    for text in ("w h0 1 1 w", "w m0 h1 0 w", "w h0 0 h2 0 w"):
        w = parse_word(text, al)
        wall_pos = [i for i, s in enumerate(w.symbols) if s in walls]
        for v, _ in successors(s0_sym, w, Orientation.SYMMETRIZED):
            assert [i for i, s in enumerate(v.symbols) if s in walls] == wall_pos


def test_e0_wall_count_changes_only_via_wall_rule(e0_sym):
    al = e0_sym.alphabet
    walls = al.wall_indices
    for text in ("W R 0 W", "W L W W", "W R 0 0 W", "L W W", "W m0 L W"):
        w = parse_word(text, al)
        before = sum(1 for s in w.symbols if s in walls)
        for v, step in successors(e0_sym, w, Orientation.SYMMETRIZED):
            after = sum(1 for s in v.symbols if s in walls)
            if after != before:
                assert e0_sym.rules[step.redex.rule_id].parent_id == 3


def test_head_index_tracks_engaged_head(s0_sym):
    w = parse_word("w h0 0 h2 0 w", s0_sym.alphabet)
    assert head_positions(s0_sym, w) == [1, 3]
    for v, step in successors(s0_sym, w, Orientation.SYMMETRIZED):
        assert step.head_index in (0, 1)
        # the engaged head's window must contain that head's position
        rule = s0_sym.rules[step.redex.rule_id]
        window = range(step.redex.position,
                       step.redex.position + len(rule.lhs))
        assert head_positions(s0_sym, w)[step.head_index] in window
