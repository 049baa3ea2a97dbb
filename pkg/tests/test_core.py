import random

import pytest
from hypothesis import given, strategies as st

from structcode import corpus
from structcode.core import (
    BudgetExhausted,
    DiGraph,
    FinStructure,
    Morphism,
    ParseError,
    Signature,
    all_strings,
    atomic_diagram_prefix,
    atomic_sentence,
    cantor_pair,
    cantor_unpair,
    enum_string,
    kth_tuple,
    load_any,
    oracle_of_structure,
    parse_graph,
    parse_structure,
    restrict,
    serialize_graph,
    serialize_structure,
    simple_cycles,
    string_index,
    strongly_connected_components,
    structure_of_graph,
    xor_bits,
)


# ---------------------------------------------------------------------------
# pairing and string enumeration


def test_cantor_pair_pins():
    assert cantor_pair(0, 0) == 0
    assert cantor_pair(1, 0) == 1
    assert cantor_pair(0, 1) == 2


@given(st.integers(0, 999), st.integers(0, 999))
def test_cantor_round_trip(m, n):
    assert cantor_unpair(cantor_pair(m, n)) == (m, n)


def test_cantor_injective_on_window():
    seen = {cantor_pair(m, n) for m in range(100) for n in range(100)}
    assert len(seen) == 100 * 100


def test_enum_string_pins():
    assert enum_string(0) == ""
    assert enum_string(1) == "0"
    assert enum_string(2) == "1"
    assert enum_string(3) == "00"
    assert enum_string(6) == "11"


def test_enum_string_bijective():
    strings = [enum_string(k) for k in range(1 << 12)]
    assert len(set(strings)) == len(strings)
    for k, s in enumerate(strings):
        assert string_index(s) == k


def test_all_strings_is_length_lex():
    got = list(all_strings(2))
    assert got == ["", "0", "1", "00", "01", "10", "11"]


@given(st.text(alphabet="01", max_size=12), st.text(alphabet="01", max_size=12))
def test_xor_commutes_and_cancels(a, b):
    assert xor_bits(a, b) == xor_bits(b, a)
    padded = a.ljust(max(len(a), len(b)), "0")
    assert xor_bits(xor_bits(a, b), b) == padded


# ---------------------------------------------------------------------------
# atomic diagrams


SIG_R1 = Signature.of(("R", 1))


def test_diagram_empty_structure_is_zero():
    s = FinStructure.of(Signature.of(("R", 2)), 0)
    assert atomic_diagram_prefix(s, 16) == "0" * 16


def test_diagram_first_sentence_is_r_x0():
    # independent unfolding: with one unary relation the i-th sentence is
    # R(x_k) where (k) is the i-th tuple, so sentence 0 is R(x_0)
    with_fact = FinStructure.of(SIG_R1, 1, [("R", (0,))])
    without = FinStructure.of(SIG_R1, 1)
    assert atomic_diagram_prefix(with_fact, 1) == "1"
    assert atomic_diagram_prefix(without, 1) == "0"


def test_diagram_out_of_range_elements_give_zero():
    s = FinStructure.of(SIG_R1, 1, [("R", (0,))])
    bits = atomic_diagram_prefix(s, 10)
    for i in range(1, 10):
        name, tup = atomic_sentence(SIG_R1, i)
        assert bits[i] == ("1" if all(x < 1 for x in tup) and s.holds(name, tup) else "0")


@given(st.integers(0, 400))
def test_diagram_monotone_consistent(n):
    rng = random.Random(7)
    s = corpus.random_structure(rng, max_size=3)
    long = atomic_diagram_prefix(s, 402)
    assert atomic_diagram_prefix(s, n) == long[:n]


def test_kth_tuple_enumerates_without_repeats():
    seen = {kth_tuple(2, k) for k in range(200)}
    assert len(seen) == 200


# ---------------------------------------------------------------------------
# structures, graphs, morphisms


def test_structure_validation():
    with pytest.raises(ValueError):
        FinStructure.of(SIG_R1, 1, [("R", (0, 0))])  # arity mismatch
    with pytest.raises(ValueError):
        FinStructure.of(SIG_R1, 1, [("R", (3,))])  # out of range
    with pytest.raises(KeyError):
        FinStructure.of(SIG_R1, 1, [("S", (0,))])  # unknown relation


def test_graph_loops_flagged():
    with pytest.raises(ValueError):
        DiGraph.of(2, [(1, 1)])
    g = DiGraph.of(2, [(1, 1)], allow_loops=True)
    assert g.has_edge(1, 1)


def test_morphism_injectivity_enforced():
    with pytest.raises(ValueError):
        Morphism.from_mapping(2, 2, {0: 1, 1: 1})


def test_morphism_compose_and_invert():
    f = Morphism.from_mapping(2, 3, {0: 2, 1: 0})
    g = Morphism.from_mapping(3, 3, {0: 1, 1: 2, 2: 0})
    assert f.then(g).mapping() == {0: 0, 1: 1}
    h = Morphism.from_mapping(3, 3, {0: 2, 1: 0, 2: 1})
    assert h.invert().then(h).mapping() == {0: 0, 1: 1, 2: 2}


# ---------------------------------------------------------------------------
# restriction


def test_restrict_identity_on_finite_structure():
    rng = random.Random(3)
    for _ in range(20):
        s = corpus.random_structure(rng, max_size=4)
        assert restrict(oracle_of_structure(s), s.size) == s


def test_restrict_shelah_singleton():
    from structcode.shelah import shelah_oracle

    s = restrict(shelah_oracle(0), 1, rel_bound=14)
    # the lone element is the all-zeros string: exactly the all-zero prefix
    # relations hold on it, and every map graph fixes it
    for name, arity in s.sig.relations:
        if name.startswith("R_"):
            nu = name[2:]
            assert s.holds(name, (0,)) == (set(nu) <= {"0"})
        else:
            nu = name[3:]
            assert s.holds(name, (0, 0)) == (set(nu) <= {"0"})


def test_restrict_empty():
    from structcode.reduction import build_f_graph

    s = restrict(build_f_graph(DiGraph.of(2, [(0, 1)])), 0, rel_bound=3)
    assert s.size == 0 and not s.facts


def test_restrict_budget():
    s = corpus.random_structure(random.Random(0), max_size=4)
    with pytest.raises(BudgetExhausted):
        restrict(oracle_of_structure(s), s.size, query_budget=0)


# ---------------------------------------------------------------------------
# text formats


def test_parse_pins():
    g = parse_graph("graph 2\ne 0 1")
    assert g == DiGraph.of(2, [(0, 1)])
    s = parse_structure("sig R/2\nsize 2\nfact R 0 1")
    assert s == FinStructure.of(Signature.of(("R", 2)), 2, [("R", (0, 1))])


def test_parse_arity_mismatch():
    with pytest.raises(ParseError) as err:
        parse_structure("sig R/2\nsize 2\nfact R 0")
    assert err.value.line == 3


def test_parse_errors_carry_position():
    with pytest.raises(ParseError) as err:
        parse_graph("graph 2\ne 0 two")
    assert err.value.line == 2
    with pytest.raises(ParseError):
        parse_structure("sig R/2\nsize 2\nfact R 0 9")
    with pytest.raises(ParseError):
        parse_structure("")


def test_comments_and_blank_lines_ignored():
    text = "# header\n\ngraph 2  # inline\ne 0 1\n"
    assert parse_graph(text) == DiGraph.of(2, [(0, 1)])


def test_round_trip_random_corpora():
    rng = random.Random(11)
    for _ in range(50):
        s = corpus.random_structure(rng, max_size=4)
        assert parse_structure(serialize_structure(s)) == s
        g = corpus.random_graph(rng, max_size=6)
        assert parse_graph(serialize_graph(g)) == g


def test_load_any_sniffs_format():
    assert isinstance(load_any("graph 1\n"), DiGraph)
    assert isinstance(load_any("sig R/1\nsize 0\n"), FinStructure)


# ---------------------------------------------------------------------------
# cycles and components


def test_scc_on_cycle_plus_tail():
    g = DiGraph.of(5, [(0, 1), (1, 2), (2, 0), (2, 3), (3, 4)])
    comps = {tuple(c) for c in strongly_connected_components(g)}
    assert (0, 1, 2) in comps


def test_simple_cycles_enumeration():
    g = DiGraph.of(4, [(0, 1), (1, 2), (2, 0), (1, 0), (2, 3)])
    cycles = simple_cycles(g)
    assert (0, 1) in cycles and (0, 1, 2) in cycles
    assert len(cycles) == 2


def test_simple_cycles_none_in_dag():
    g = DiGraph.of(4, [(0, 1), (0, 2), (1, 3), (2, 3)])
    assert simple_cycles(g) == []


def test_structure_of_graph():
    g = DiGraph.of(2, [(0, 1)])
    s = structure_of_graph(g)
    assert s.holds("E", (0, 1)) and not s.holds("E", (1, 0))
