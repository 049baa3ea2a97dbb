import random

import pytest
from hypothesis import given, strategies as st

from structcode import corpus, shelah
from structcode.core import AtomOracle, DiGraph, Morphism, restrict
from structcode.reduction import (
    S0,
    S1,
    UNKNOWN,
    ContradictoryEvidence,
    DecodeIncomplete,
    block_code,
    block_type,
    build_f_graph,
    classify_block,
    decode_f,
    decompose,
    graph_edge_oracle,
    induced_embedding,
    reduction_rel_bound,
    reduction_relation,
    vertex_code,
)

EDGE = DiGraph.of(2, [(0, 1)])


# ---------------------------------------------------------------------------
# point coding partition


@given(st.integers(0, 100_000))
def test_every_natural_decomposes_uniquely(code):
    d = decompose(code)
    if d[0] == "vertex":
        assert vertex_code(d[1]) == code
    else:
        assert block_code(d[1], d[2], d[3]) == code


@given(st.integers(0, 60), st.integers(0, 60), st.integers(0, 60))
def test_block_codes_land_in_their_block(m, n, k):
    assert decompose(block_code(m, n, k)) == ("block", m, n, k)


def test_relation_enumeration():
    assert reduction_relation(0) == ("W", 1)
    assert reduction_relation(1) == ("N", 2)
    assert reduction_relation(2) == ("O", 3)
    assert reduction_relation(3) == ("R_", 1)
    assert reduction_relation(4) == ("gF_", 2)
    # bound covers all strings of length <= 1: eps, 0, 1 -> 3 + 2*3
    assert reduction_rel_bound(1) == 9


# ---------------------------------------------------------------------------
# the reduction oracle


def test_w_holds_exactly_on_vertex_part():
    oracle = build_f_graph(EDGE)
    for code in range(200):
        assert oracle.holds("W", (code,)) == (decompose(code)[0] == "vertex")


def test_block_type_pins():
    eo = graph_edge_oracle(EDGE)
    assert block_type(eo, 0, 1) == S0
    assert block_type(eo, 1, 0) == S1
    assert block_type(eo, 0, 0) == S1


def test_edgeless_graph_blocks_all_tail_one():
    oracle = build_f_graph(DiGraph.of(2))
    for m, n in ((0, 0), (0, 1), (1, 0)):
        elem0 = block_code(m, n, 0)
        assert oracle.holds("R_1", (elem0,))
        assert not oracle.holds("R_0", (elem0,))


def test_blocks_carry_tag_structure_facts():
    # block (0,1) of the single-edge graph is the tail-0 copy: its k-th
    # element answers exactly like the k-th enumerated tail-0 string
    oracle = build_f_graph(EDGE)
    for k in range(8):
        code = block_code(0, 1, k)
        elem = shelah.nth_elem(0, k)
        for nu in ("", "0", "1", "00", "10"):
            assert oracle.holds(f"R_{nu}", (code,)) == shelah.holds_R(nu, elem)
    # graphs of the maps stay inside the block
    x, y = block_code(0, 1, 0), block_code(0, 1, 1)
    assert oracle.holds("gF_1", (x, y))
    assert not oracle.holds("gF_1", (x, block_code(1, 0, 1)))


def test_n_relation_ties_vertices_to_their_blocks():
    oracle = build_f_graph(EDGE)
    assert oracle.holds("N", (vertex_code(0), block_code(0, 5, 3)))
    assert not oracle.holds("N", (vertex_code(1), block_code(0, 5, 3)))
    assert not oracle.holds("N", (block_code(0, 0, 0), block_code(0, 0, 1)))


def test_o_relation_pins_block_to_vertex_pair():
    oracle = build_f_graph(EDGE)
    a0, a1 = vertex_code(0), vertex_code(1)
    j = block_code(0, 1, 4)
    assert oracle.holds("O", (a0, a1, j))
    assert not oracle.holds("O", (a1, a0, j))


# ---------------------------------------------------------------------------
# induced embeddings


def test_identity_induces_identity():
    point_map = induced_embedding(EDGE, EDGE, Morphism.identity(2))
    assert all(point_map(c) == c for c in range(500))


def test_k1_into_edge():
    k1 = DiGraph.of(1)
    point_map = induced_embedding(k1, EDGE, Morphism.from_mapping(1, 2, {0: 0}))
    assert point_map(vertex_code(0)) == vertex_code(0)
    assert point_map(block_code(0, 0, 7)) == block_code(0, 0, 7)
    # the co-finite extension shifts off-graph vertices past the target
    assert point_map(vertex_code(1)) == vertex_code(2)


def test_non_embedding_rejected():
    squish = Morphism.from_mapping(2, 2, {0: 1, 1: 0})
    with pytest.raises(ValueError):
        induced_embedding(EDGE, DiGraph.of(2), squish)  # edge not preserved
    partial = Morphism.from_mapping(2, 2, {0: 0})
    with pytest.raises(ValueError):
        induced_embedding(EDGE, EDGE, partial)  # not total


def test_induced_embedding_transfers_facts():
    rng = random.Random(7)
    rel_bound = reduction_rel_bound(2)
    for _ in range(10):
        g1, g2, h = corpus.random_graph_embedding(rng, max_size=4)
        point_map = induced_embedding(g1, g2, h)
        src = restrict(build_f_graph(g1), 20, rel_bound)
        target = build_f_graph(g2)
        for name, arity in src.sig.relations:
            for tup in _tuples(src.size, arity):
                mapped = tuple(point_map(x) for x in tup)
                assert src.holds(name, tup) == target.holds(name, mapped)


def _tuples(n, arity):
    if arity == 0:
        yield ()
        return
    for head in range(n):
        for rest in _tuples(n, arity - 1):
            yield (head,) + rest


# ---------------------------------------------------------------------------
# block classification


def test_classify_honest_blocks():
    oracle = build_f_graph(EDGE)
    a0, a1 = vertex_code(0), vertex_code(1)
    assert classify_block(oracle, a0, a1, 3, 50) == S0
    assert classify_block(oracle, a1, a0, 3, 50) == S1
    assert classify_block(oracle, a0, a1, 1, 50) == S0


def test_classify_budget_zero_unknown():
    oracle = build_f_graph(EDGE)
    assert classify_block(oracle, vertex_code(0), vertex_code(1), 3, 0) == UNKNOWN


def test_classify_requires_vertices():
    oracle = build_f_graph(EDGE)
    with pytest.raises(ValueError):
        classify_block(oracle, block_code(0, 0, 0), vertex_code(0), 3, 50)


def _lying_oracle() -> AtomOracle:
    """Claims both generator traces on one block element."""
    honest = build_f_graph(EDGE)

    def holds(name, tup):
        if name.startswith("R_"):
            return True  # every prefix relation everywhere
        return honest.holds(name, tup)

    return AtomOracle(
        relation=honest.relation, element=honest.element, holds=holds
    )


def test_contradictory_evidence_signalled():
    oracle = _lying_oracle()
    with pytest.raises(ContradictoryEvidence):
        classify_block(oracle, vertex_code(0), vertex_code(1), 3, 50)


# ---------------------------------------------------------------------------
# decoding


def test_round_trip_random_graphs():
    rng = random.Random(13)
    for _ in range(60):
        g = corpus.random_graph(rng, max_size=6)
        assert decode_f(build_f_graph(g), g.size, nu_bound=3, budget=50) == g


def test_decode_empty():
    assert decode_f(build_f_graph(DiGraph.of(0)), 0) == DiGraph.of(0)


def test_edgeless_round_trip():
    g = DiGraph.of(4)
    assert decode_f(build_f_graph(g), 4) == g


def test_decode_budget_zero_reports_incomplete():
    with pytest.raises(DecodeIncomplete) as err:
        decode_f(build_f_graph(EDGE), 2, budget=0)
    assert len(err.value.pairs) == 4
    assert err.value.partial == DiGraph.of(2)


def test_decode_against_finite_restriction_oracle():
    # decoding works off a materialized restriction presented as an oracle
    from structcode.core import oracle_of_structure

    g = DiGraph.of(3, [(0, 1), (2, 0)])
    cap = block_code(2, 2, 0) + 1
    s = restrict(build_f_graph(g), cap, reduction_rel_bound(2))
    assert decode_f(oracle_of_structure(s), 3, nu_bound=2, budget=50) == g
