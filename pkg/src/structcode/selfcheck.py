"""Per-module check batteries behind `selftest <section>`.

Smaller and faster than the acceptance criteria; each section exercises its
module's operations end to end and reports one line per check. The corpus
size knob scales the sampled parts.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Callable

from . import coding, corpus, efgames, functors, limits, reduction, search, shelah
from .core import (
    DiGraph,
    Morphism,
    Signature,
    atomic_diagram_prefix,
    cantor_pair,
    cantor_unpair,
    enum_string,
    oracle_of_structure,
    parse_graph,
    parse_structure,
    restrict,
    serialize_graph,
    serialize_structure,
    string_index,
)


@dataclass
class Check:
    name: str
    passed: bool
    detail: str = ""

    def line(self) -> str:
        base = f"check={self.name} pass={'yes' if self.passed else 'no'}"
        return f"{base} {self.detail}".rstrip()


def _check(name: str, condition: bool, detail: str = "") -> Check:
    return Check(name, bool(condition), detail)


def check_core(seed: int, corpus_size: int) -> list[Check]:
    rng = random.Random(seed)
    checks = []
    checks.append(_check(
        "core.cantor_pair",
        all(cantor_unpair(cantor_pair(m, n)) == (m, n) for m in range(60) for n in range(60)),
        "range=60x60",
    ))
    strings = [enum_string(k) for k in range(1 << 12)]
    checks.append(_check(
        "core.enum_string",
        len(set(strings)) == len(strings)
        and all(string_index(s) == k for k, s in enumerate(strings)),
        "indices=4096",
    ))
    ok = True
    for _ in range(corpus_size):
        s = corpus.random_structure(rng, max_size=3)
        long = atomic_diagram_prefix(s, 64)
        ok &= all(atomic_diagram_prefix(s, n) == long[:n] for n in (0, 7, 32))
    checks.append(_check("core.atomic_diagram_prefix", ok, f"structures={corpus_size}"))
    ok = True
    for _ in range(corpus_size):
        s = corpus.random_structure(rng, max_size=4)
        ok &= parse_structure(serialize_structure(s)) == s
        g = corpus.random_graph(rng, max_size=5)
        ok &= parse_graph(serialize_graph(g)) == g
    checks.append(_check("core.parse_serialize", ok, f"round_trips={2 * corpus_size}"))
    ok = True
    for _ in range(corpus_size):
        s = corpus.random_structure(rng, max_size=4)
        ok &= restrict(oracle_of_structure(s), s.size) == s
    checks.append(_check("core.restrict", ok, f"structures={corpus_size}"))
    return checks


def check_shelah(seed: int, corpus_size: int) -> list[Check]:
    rng = random.Random(seed)
    from .core import xor_bits

    checks = []
    ok = True
    for _ in range(corpus_size * 10):
        nu = "".join(str(rng.randint(0, 1)) for _ in range(rng.randint(0, 6)))
        mu = "".join(str(rng.randint(0, 1)) for _ in range(rng.randint(0, 6)))
        x = shelah.SElem.make(
            "".join(str(rng.randint(0, 1)) for _ in range(rng.randint(0, 6))),
            rng.randint(0, 1),
        )
        ok &= shelah.eval_F(nu, shelah.eval_F(nu, x)) == x
        ok &= shelah.eval_F(mu, shelah.eval_F(nu, x)) == shelah.eval_F(xor_bits(mu, nu), x)
    checks.append(_check("shelah.eval_F", ok, f"samples={corpus_size * 10}"))
    elems = shelah.enumerate_elems(0, 64) + shelah.enumerate_elems(1, 64)
    checks.append(_check(
        "shelah.enumerate_elems",
        len(set(elems)) == len(elems)
        and all(not e.prefix.endswith(str(e.tail)) for e in elems),
        "enumerated=128",
    ))
    checks.append(_check(
        "shelah.closure",
        all(
            len(shelah.closure(shelah.nth_elem(rng.randint(0, 1), rng.randrange(16)), b)) == 1 << b
            for b in range(6)
        ),
        "bounds=0..5",
    ))
    ok = True
    for _ in range(corpus_size * 5):
        m = rng.randint(0, 4)
        h = shelah.reduct_iso(m)
        nu = "".join(str(rng.randint(0, 1)) for _ in range(rng.randint(0, m)))
        x = shelah.nth_elem(rng.randint(0, 1), rng.randrange(20))
        y = shelah.nth_elem(rng.randint(0, 1), rng.randrange(20))
        ok &= shelah.holds_R(nu, x) == shelah.holds_R(nu, h(x))
        ok &= shelah.holds_graphF(nu, x, y) == shelah.holds_graphF(nu, h(x), h(y))
    checks.append(_check("shelah.reduct_iso", ok, f"queries={corpus_size * 5}"))
    # at bound 8 no tail-1 element among the first 100 can fake the
    # all-zeros generator trace (the first fake sits at index 2^7)
    traces = [shelah.distinguishing_trace(e, 8) for e in shelah.enumerate_elems(1, 100)]
    checks.append(_check(
        "shelah.distinguishing_trace",
        shelah.distinguishing_trace(shelah.ZERO, 8) == shelah.generator_trace(0, 8)
        and all(t != shelah.generator_trace(0, 8) for t in traces),
        "tail1_checked=100",
    ))
    checks.append(_check(
        "shelah.holds_R",
        shelah.holds_R("00", shelah.ZERO) and not shelah.holds_R("1", shelah.ZERO),
    ))
    checks.append(_check(
        "shelah.holds_graphF",
        shelah.holds_graphF("", shelah.ZERO, shelah.ZERO)
        and shelah.holds_graphF("1", shelah.ZERO, shelah.SElem("1", 0)),
    ))
    return checks


def check_search(seed: int, corpus_size: int) -> list[Check]:
    rng = random.Random(seed)
    checks = []
    ok = True
    found = 0
    for _ in range(corpus_size):
        a, b, _h = corpus.random_embedded_pair(rng, max_size=4, max_relations=2, max_arity=2)
        m = search.find_embedding(a, b)
        ok &= m is not None and search.is_embedding(a, b, m)
        found += 1
    checks.append(_check("search.find_embedding", ok, f"instances={found}"))
    ok = True
    for _ in range(corpus_size):
        a = corpus.random_structure(rng, max_size=4, max_relations=2, max_arity=2)
        b, _ = corpus.random_permuted_copy(rng, a)
        m = search.find_isomorphism(a, b)
        ok &= m is not None and search.is_isomorphism(a, b, m)
    checks.append(_check("search.find_isomorphism", ok, f"instances={corpus_size}"))
    k1 = corpus.complete_graph_structure(1)
    k2 = corpus.complete_graph_structure(2)
    k3 = corpus.complete_graph_structure(3)
    counts = (
        len(search.enumerate_embeddings(k1, k2, cap=10).morphisms),
        len(search.enumerate_embeddings(k2, k3, cap=10).morphisms),
    )
    checks.append(_check("search.enumerate_embeddings", counts == (2, 6), f"counts={counts}"))
    return checks


def check_efgames(seed: int, corpus_size: int) -> list[Check]:
    rng = random.Random(seed)
    checks = []
    k2 = corpus.complete_graph_structure(2)
    k3 = corpus.complete_graph_structure(3)
    checks.append(_check(
        "efgames.ef_winner",
        efgames.ef_winner(k2, k3, 2) == efgames.DUPLICATOR
        and efgames.ef_winner(k2, k3, 3) == efgames.SPOILER,
        "pinned=k2k3",
    ))
    ok = True
    for _ in range(corpus_size):
        sig = Signature.of(("E", 2))
        a = corpus.random_structure(rng, max_size=3, sig=sig)
        b = corpus.random_structure(rng, max_size=3, sig=sig)
        for n in range(3):
            ok &= (efgames.ef_winner(a, b, n) == efgames.DUPLICATOR) == efgames.equiv_n(a, b, n)
    checks.append(_check("efgames.equiv_n", ok, f"pairs={corpus_size}"))
    state = efgames.GameState(k2, k2, ((0, 0), (1, 1)), 0)
    bad = efgames.GameState(k2, corpus.pure_set_structure(2), ((0, 0), (1, 1)), 0)
    checks.append(_check(
        "efgames.partial_iso_check",
        efgames.partial_iso_check(state) and not efgames.partial_iso_check(bad),
    ))
    left, right, strategy = shelah.paired_reduct_restrictions(2, 2, 3)
    good = efgames.verify_duplicator_strategy(left, right, strategy, 2)
    corrupted = list(strategy)
    corrupted[0], corrupted[1] = corrupted[1], corrupted[0]
    bad_strategy = efgames.verify_duplicator_strategy(left, right, corrupted, 2)
    checks.append(_check(
        "efgames.verify_duplicator_strategy",
        good and not bad_strategy,
        "m=2 rounds=2",
    ))
    return checks


def check_coding(seed: int, corpus_size: int) -> list[Check]:
    rng = random.Random(seed)
    checks = []
    ok = True
    for _ in range(corpus_size):
        s = corpus.random_structure(rng, max_size=3)
        m = coding.canonical_iso(s)
        ok &= search.is_isomorphism(s, coding.decode(coding.encode(s).graph, s.sig), m)
    checks.append(_check("coding.canonical_iso", ok, f"structures={corpus_size}"))
    ok = True
    for _ in range(corpus_size):
        s = corpus.random_structure(rng, max_size=3)
        g, _ = corpus.random_permuted_graph(rng, coding.encode(s).graph)
        ok &= search.find_isomorphism(s, coding.decode(g, s.sig)) is not None
    checks.append(_check("coding.decode", ok, f"permuted_copies={corpus_size}"))
    ok = True
    for _ in range(corpus_size):
        a, b, h = corpus.random_embedded_pair(rng, max_size=3, max_relations=2, max_arity=2)
        gm = coding.encode_morphism(a, b, h)
        ok &= coding.is_graph_embedding(coding.encode(a).graph, coding.encode(b).graph, gm)
    checks.append(_check("coding.encode_morphism", ok, f"instances={corpus_size}"))
    ok = True
    for _ in range(corpus_size):
        s = corpus.random_structure(rng, max_size=2, max_relations=2, max_arity=2)
        g, _ = corpus.random_permuted_graph(rng, coding.encode(s).graph)
        coding.lambda_graph(g, s.sig)  # raises on failure
    checks.append(_check("coding.lambda_graph", ok, f"instances={corpus_size}"))
    twin = DiGraph.of(6, [(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3)])
    try:
        coding.decode(twin)
        rejected = False
    except coding.MalformedCoding:
        rejected = True
    checks.append(_check("coding.encode", rejected, "malformed_rejected=yes"))
    return checks


def check_reduction(seed: int, corpus_size: int) -> list[Check]:
    rng = random.Random(seed)
    checks = []
    codes = list(range(500))
    parts = [reduction.decompose(c) for c in codes]
    rebuilt = [
        reduction.vertex_code(d[1]) if d[0] == "vertex" else reduction.block_code(d[1], d[2], d[3])
        for d in parts
    ]
    checks.append(_check("reduction.build_f", rebuilt == codes, "partition_codes=500"))
    g = DiGraph.of(2, [(0, 1)])
    eo = reduction.graph_edge_oracle(g)
    checks.append(_check(
        "reduction.block_type",
        reduction.block_type(eo, 0, 1) == reduction.S0
        and reduction.block_type(eo, 1, 0) == reduction.S1,
    ))
    oracle = reduction.build_f_graph(g)
    a0, a1 = reduction.vertex_code(0), reduction.vertex_code(1)
    checks.append(_check(
        "reduction.classify_block",
        reduction.classify_block(oracle, a0, a1, 3, 50) == reduction.S0
        and reduction.classify_block(oracle, a1, a0, 3, 50) == reduction.S1
        and reduction.classify_block(oracle, a0, a1, 3, 0) == reduction.UNKNOWN,
    ))
    ok = True
    for _ in range(corpus_size):
        gg = corpus.random_graph(rng, max_size=5)
        ok &= reduction.decode_f(reduction.build_f_graph(gg), gg.size) == gg
    checks.append(_check("reduction.decode_f", ok, f"round_trips={corpus_size}"))
    ident = reduction.induced_embedding(g, g, Morphism.identity(2))
    checks.append(_check(
        "reduction.induced_embedding",
        all(ident(c) == c for c in range(100)),
        "identity_codes=100",
    ))
    return checks


def check_limits(seed: int, corpus_size: int) -> list[Check]:
    rng = random.Random(seed)
    checks = []
    bare = limits.build_stage(limits.Approximation.constant(0), 0, 0)
    checks.append(_check("limits.build_stage", bare.universe == ("",) and not bare.facts))
    ok = True
    for _ in range(corpus_size):
        approx = limits.Approximation.from_pattern(corpus.random_pattern(rng, 10))
        prev = limits.build_stage(approx, 0, 0)
        for s in range(1, 16):
            cur = limits.build_stage(approx, 0, s)
            ok &= limits.is_substage(prev, cur)
            prev = cur
        for (mu, term), value in prev.facts:
            ok &= limits.query_fact(approx, 0, mu, term) == value
    checks.append(_check("limits.query_fact", ok, f"approximations={corpus_size}"))
    ok = True
    for _ in range(corpus_size):
        pattern = corpus.random_pattern(rng, 8)
        approx = limits.Approximation.from_pattern(pattern)
        want = limits.S0 if pattern[-1] == "0" else limits.S1
        ok &= limits.classify_limit(approx, 0, approx.promised_stabilization) == want
    checks.append(_check("limits.classify_limit", ok, f"approximations={corpus_size}"))
    return checks


def check_functors(seed: int, corpus_size: int) -> list[Check]:
    rng = random.Random(seed)
    checks = []
    enc = functors.encode_functor()
    objects, triples = [], []
    for _ in range(corpus_size):
        c = corpus.random_structure(rng, max_size=3, max_relations=2, max_arity=2)
        b, h2 = corpus.random_induced_substructure(rng, c)
        a, h1 = corpus.random_induced_substructure(rng, b)
        objects.append(a)
        triples.append((a, h1, b, h2, c))
    rep = functors.check_functor_laws(enc, objects, triples)
    checks.append(_check(
        "functors.check_functor_laws",
        rep.ok(),
        f"functor=encode identity={rep.identity_checked} composition={rep.composition_checked}",
    ))
    comp = functors.composed_functor(restrict_size=5, nu_bound=0)
    gtriples = []
    gobjects = []
    for _ in range(max(2, corpus_size // 4)):
        g3 = corpus.random_graph(rng, max_size=4)
        g2, h2 = corpus.random_induced_subgraph(rng, g3)
        g1, h1 = corpus.random_induced_subgraph(rng, g2)
        gobjects.append(g1)
        gtriples.append((g1, h1, g2, h2, g3))
    rep = functors.check_functor_laws(comp, gobjects, gtriples)
    checks.append(_check(
        "functors.composed_functor",
        rep.ok(),
        f"identity={rep.identity_checked} composition={rep.composition_checked}",
    ))
    ident = functors.identity_functor()
    round_trip = functors.round_trip_functor()
    squares_ok = True
    for _ in range(corpus_size):
        a, b, gamma = corpus.random_embedded_pair(rng, max_size=3, max_relations=2, max_arity=2)
        squares_ok &= functors.check_commuting_square(
            coding.canonical_iso, ident, round_trip, a, gamma, b
        )
    checks.append(_check("functors.check_commuting_square", squares_ok, f"squares={corpus_size}"))
    graphs = [corpus.random_graph(rng, max_size=4) for _ in range(corpus_size)]
    rep = functors.pseudo_inverse_report(graphs)
    checks.append(_check(
        "functors.pseudo_inverse_report",
        rep.ok() and not rep.unknowns(),
        f"graphs={len(graphs)} unknowns={len(rep.unknowns())}",
    ))
    return checks


SECTIONS: dict[str, Callable[[int, int], list[Check]]] = {
    "core": check_core,
    "shelah": check_shelah,
    "search": check_search,
    "efgames": check_efgames,
    "coding": check_coding,
    "reduction": check_reduction,
    "limits": check_limits,
    "functors": check_functors,
}
