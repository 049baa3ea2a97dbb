"""Coding of finite relational structures as directed graphs, with decoder.

The coded graph has three hub vertices a, b, c tagged by the unique 3-, 5-
and 7-cycle (one directed edge from the hub to a cycle entry, cycle edges
oriented cyclically). Every element x gets a spoke a -> v_x. Every tuple of
every relation gets a gadget: one chain per tuple position, all chains
meeting in a shared junction y, with y -> b when the fact holds and y -> c
when it does not. The chain reached from position k of an arity-i tuple has
i+k vertices counting the junction, so the chain-length profile identifies
the position and, through the arity, the relation.

When a signature contains several relations of the same arity the profile
alone cannot tell them apart, so each relation is given a chain-length
offset (cumulative in signature order). Signatures with pairwise distinct
arities always get zero offsets and hence the plain i+k shapes.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Optional

from .core import DiGraph, FinStructure, Morphism, Signature, adjacency, strongly_connected_components
from .search import is_embedding

Role = tuple

CYCLE_TAGS = (3, 5, 7)
HUB_ROLES = (("A",), ("B",), ("C",))


class MalformedCoding(Exception):
    """The graph is not an isomorphic copy of any coded structure."""


@dataclass(frozen=True)
class CodedGraph:
    graph: DiGraph
    provenance: tuple[tuple[int, Role], ...]

    def roles(self) -> dict[int, Role]:
        return dict(self.provenance)

    def vertex_of(self) -> dict[Role, int]:
        flipped = {role: v for v, role in self.provenance}
        assert len(flipped) == len(self.provenance)
        return flipped


def chain_offsets(sig: Signature) -> dict[str, int]:
    """Per-relation chain-length offset; all zero when arities are distinct."""
    if sig.arities_distinct():
        return {name: 0 for name, _ in sig.relations}
    offsets = {}
    acc = 0
    for name, arity in sig.relations:
        offsets[name] = acc
        acc += 2 * arity
    return offsets


def interior_lengths(arity: int, offset: int) -> tuple[int, ...]:
    """Interior node counts of the gadget chains, position k = 1..arity."""
    return tuple(offset + arity + k - 1 for k in range(1, arity + 1))


def _tuples(n: int, arity: int) -> Iterator[tuple[int, ...]]:
    if arity == 0:
        yield ()
        return
    for head in range(n):
        for rest in _tuples(n, arity - 1):
            yield (head,) + rest


def encode(s: FinStructure) -> CodedGraph:
    """Deterministic coding; vertex 0, 1, 2 are the hubs a, b, c."""
    offsets = chain_offsets(s.sig)
    roles: list[Role] = []
    edges: set[tuple[int, int]] = set()

    def alloc(role: Role) -> int:
        roles.append(role)
        return len(roles) - 1

    a = alloc(("A",))
    b = alloc(("B",))
    c = alloc(("C",))
    for hub, tag in zip((a, b, c), CYCLE_TAGS):
        cycle = [alloc(("cycle", tag, pos)) for pos in range(tag)]
        edges.add((hub, cycle[0]))
        for pos in range(tag):
            edges.add((cycle[pos], cycle[(pos + 1) % tag]))

    elem_vertex = {}
    for x in range(s.size):
        v = alloc(("elem", x))
        elem_vertex[x] = v
        edges.add((a, v))

    for name, arity in s.sig.relations:
        for tup in _tuples(s.size, arity):
            y = alloc(("junction", name, tup))
            for k in range(1, arity + 1):
                length = offsets[name] + arity + k - 1
                nodes = [alloc(("chain", name, tup, k, pos)) for pos in range(1, length + 1)]
                edges.add((elem_vertex[tup[k - 1]], nodes[0]))
                for i in range(length - 1):
                    edges.add((nodes[i], nodes[i + 1]))
                edges.add((nodes[-1], y))
            edges.add((y, b if s.holds(name, tup) else c))

    graph = DiGraph.of(len(roles), edges)
    return CodedGraph(graph, tuple(enumerate(roles)))


# ---------------------------------------------------------------------------
# Decoding


@dataclass(frozen=True)
class DecodeResult:
    structure: FinStructure
    roles: tuple[tuple[int, Role], ...]
    elements: tuple[int, ...]  # vertex of element index i, enumeration order

    def role_map(self) -> dict[int, Role]:
        return dict(self.roles)


def _find_cycles(g: DiGraph, out: dict[int, list[int]], inn: dict[int, list[int]]):
    """The three tagged cycles as {tag: list of vertices in cycle order}."""
    comps = [c for c in strongly_connected_components(g) if len(c) > 1]
    if len(comps) != 3:
        raise MalformedCoding(f"expected 3 cycles, found {len(comps)} nontrivial components")
    by_tag: dict[int, list[int]] = {}
    for comp in comps:
        comp_set = set(comp)
        for v in comp:
            succ = [w for w in out[v] if w in comp_set]
            if len(succ) != 1 or len(out[v]) != 1:
                raise MalformedCoding(f"cycle vertex {v} has out-degree != 1")
        # follow successors to confirm a single simple cycle
        start = comp[0]
        order = [start]
        cur = out[start][0]
        while cur != start:
            if len(order) > len(comp):
                raise MalformedCoding("component is not a simple cycle")
            order.append(cur)
            cur = out[cur][0]
        if len(order) != len(comp):
            raise MalformedCoding("component is not a simple cycle")
        tag = len(order)
        if tag not in CYCLE_TAGS or tag in by_tag:
            raise MalformedCoding(f"unexpected cycle of length {tag}")
        by_tag[tag] = order
    return by_tag


def decode_full(g: DiGraph, sig: Optional[Signature] = None) -> DecodeResult:
    """Decode any isomorphic copy of a coded graph; raises MalformedCoding.

    With sig the decoded structure uses its relation names and the decoder
    checks one gadget per tuple per relation; without it, relation names are
    synthesized as R<arity> (this requires pairwise distinct arities, which
    is the only case shape inference can justify).
    """
    if any(u == v for u, v in g.edges):
        raise MalformedCoding("self-loop present")
    out, inn = adjacency(g)
    by_tag = _find_cycles(g, out, inn)

    roles: dict[int, Role] = {}
    accounted: set[tuple[int, int]] = set()
    hubs: dict[int, int] = {}
    cycle_vertices: set[int] = set()
    for tag, comp in by_tag.items():
        comp_set = set(comp)
        entries = [(u, v) for v in comp for u in inn[v] if u not in comp_set]
        if len(entries) != 1:
            raise MalformedCoding(f"{tag}-cycle needs exactly one entry edge, found {len(entries)}")
        hub, entry = entries[0]
        if hub in cycle_vertices or any(hub in set(c) for c in by_tag.values()):
            raise MalformedCoding("hub lies on a cycle")
        hubs[tag] = hub
        accounted.add((hub, entry))
        order = by_tag[tag]
        shift = order.index(entry)
        order = order[shift:] + order[:shift]
        for pos, v in enumerate(order):
            roles[v] = ("cycle", tag, pos)
            accounted.add((v, order[(pos + 1) % tag]))
        cycle_vertices |= comp_set

    if len(set(hubs.values())) != 3:
        raise MalformedCoding("hubs are not distinct")
    a, b, c = hubs[3], hubs[5], hubs[7]
    roles[a] = ("A",)
    roles[b] = ("B",)
    roles[c] = ("C",)

    entry3 = next(v for v in out[a] if ("cycle", 3, 0) == roles.get(v))
    elements = sorted(v for v in out[a] if v != entry3)
    elem_index = {v: i for i, v in enumerate(elements)}
    for v in elements:
        if v in roles:
            raise MalformedCoding(f"element vertex {v} already classified")
        if inn[v] != [a]:
            raise MalformedCoding(f"element vertex {v} has in-neighbors {inn[v]}")
        roles[v] = ("elem", elem_index[v])
        accounted.add((a, v))

    junctions_b = set(inn[b])
    junctions_c = set(inn[c])
    if junctions_b & junctions_c:
        raise MalformedCoding("junction points at both polarity hubs")

    expected: dict[tuple[int, ...], tuple[str, int, int]] = {}
    if sig is not None:
        offsets = chain_offsets(sig)
        for name, arity in sig.relations:
            key = tuple(sorted(interior_lengths(arity, offsets[name])))
            if key in expected:
                raise MalformedCoding("ambiguous chain profiles in signature")
            expected[key] = (name, arity, offsets[name])

    decided: dict[tuple[str, tuple[int, ...]], bool] = {}
    observed_arities: set[int] = set()
    for y in sorted(junctions_b | junctions_c):
        if y in roles:
            raise MalformedCoding(f"junction {y} already classified")
        if not inn[y]:
            raise MalformedCoding(f"junction {y} has no chains")
        chains = []
        for last in inn[y]:
            interior = [last]
            node = last
            while True:
                preds = inn[node]
                if len(preds) != 1:
                    raise MalformedCoding(f"chain node {node} has in-degree {len(preds)}")
                p = preds[0]
                if p in elem_index:
                    starter = p
                    break
                if p in roles or len(out[p]) != 1 or len(interior) > g.size:
                    raise MalformedCoding(f"bad chain predecessor {p}")
                interior.append(p)
                node = p
            if any(len(out[n]) != 1 for n in interior):
                raise MalformedCoding("chain node with out-degree != 1")
            chains.append((len(interior), starter, list(reversed(interior))))
        key = tuple(sorted(length for length, _, _ in chains))
        if sig is not None:
            if key not in expected:
                raise MalformedCoding(f"chain profile {key} matches no relation")
            name, arity, offset = expected[key]
        else:
            arity = len(key)
            if key != tuple(range(arity, 2 * arity)):
                raise MalformedCoding(f"chain profile {key} is not a plain gadget")
            name, offset = f"R{arity}", 0
            observed_arities.add(arity)
        by_length = {length: (starter, nodes) for length, starter, nodes in chains}
        if len(by_length) != arity:
            raise MalformedCoding("duplicate chain lengths in one gadget")
        tup = tuple(
            elem_index[by_length[offset + arity + k - 1][0]] for k in range(1, arity + 1)
        )
        fact_key = (name, tup)
        if fact_key in decided:
            raise MalformedCoding(f"tuple {fact_key} coded twice")
        decided[fact_key] = y in junctions_b
        roles[y] = ("junction", name, tup)
        accounted.add((y, b if y in junctions_b else c))
        for k in range(1, arity + 1):
            starter, nodes = by_length[offset + arity + k - 1]
            accounted.add((starter, nodes[0]))
            for i, node in enumerate(nodes):
                if node in roles:
                    raise MalformedCoding(f"chain node {node} already classified")
                roles[node] = ("chain", name, tup, k, i + 1)
                accounted.add((node, nodes[i + 1] if i + 1 < len(nodes) else y))

    if sig is None:
        sig = Signature(tuple((f"R{i}", i) for i in sorted(observed_arities)))
    size = len(elements)
    for name, arity in sig.relations:
        for tup in _tuples(size, arity):
            if (name, tup) not in decided:
                raise MalformedCoding(f"no gadget for {name}{tup}")
    extra = [fk for fk in decided if fk[0] not in sig or len(fk[1]) != sig.arity(fk[0])]
    if extra:
        raise MalformedCoding(f"gadgets outside the signature: {extra}")

    if len(roles) != g.size:
        unclassified = [v for v in range(g.size) if v not in roles]
        raise MalformedCoding(f"unclassified vertices: {unclassified}")
    if accounted != set(g.edges):
        raise MalformedCoding("edge set does not match the coded shape")

    facts = frozenset(fk for fk, truth in decided.items() if truth)
    structure = FinStructure(sig, size, facts)
    return DecodeResult(structure, tuple(sorted(roles.items())), tuple(elements))


def decode(g: DiGraph, sig: Optional[Signature] = None) -> FinStructure:
    return decode_full(g, sig).structure


# ---------------------------------------------------------------------------
# Canonical isomorphisms and morphism transport


def canonical_iso(s: FinStructure) -> Morphism:
    """The isomorphism s -> decode(encode(s)) through the element enumeration."""
    enc = encode(s)
    res = decode_full(enc.graph, s.sig)
    vertex_of = enc.vertex_of()
    position = {v: i for i, v in enumerate(res.elements)}
    mapping = {x: position[vertex_of[("elem", x)]] for x in range(s.size)}
    m = Morphism.from_mapping(s.size, res.structure.size, mapping)
    if not (m.is_bijective() and is_embedding(s, res.structure, m)):
        raise MalformedCoding("round trip did not produce an isomorphism")
    return m


def _map_role(role: Role, elem_map: dict[int, int]) -> Role:
    kind = role[0]
    if kind == "elem":
        return ("elem", elem_map[role[1]])
    if kind == "chain":
        _, name, tup, k, pos = role
        return ("chain", name, tuple(elem_map[x] for x in tup), k, pos)
    if kind == "junction":
        _, name, tup = role
        return ("junction", name, tuple(elem_map[x] for x in tup))
    return role


def encode_morphism(src: FinStructure, dst: FinStructure, h: Morphism) -> Morphism:
    """Transport an embedding src -> dst to a graph embedding of the codings.

    Hubs and cycles map pointwise; element spokes and gadgets follow h. The
    junction polarity agrees on both sides exactly because h preserves and
    reflects facts, which is why h must be an embedding.
    """
    if not h.is_total() or not is_embedding(src, dst, h):
        raise ValueError("morphism is not an embedding, junctions would not transport")
    enc_src = encode(src)
    enc_dst = encode(dst)
    dst_vertex = enc_dst.vertex_of()
    elem_map = h.mapping()
    mapping = {
        v: dst_vertex[_map_role(role, elem_map)] for v, role in enc_src.provenance
    }
    m = Morphism.from_mapping(enc_src.graph.size, enc_dst.graph.size, mapping)
    if not is_graph_embedding(enc_src.graph, enc_dst.graph, m):
        raise MalformedCoding("transported map is not a graph embedding")
    return m


def lambda_graph(g: DiGraph, sig: Optional[Signature] = None) -> Morphism:
    """The role-respecting isomorphism g -> encode(decode(g))."""
    res = decode_full(g, sig)
    enc = encode(res.structure)
    vertex_of = enc.vertex_of()
    mapping = {v: vertex_of[role] for v, role in res.roles}
    m = Morphism.from_mapping(g.size, enc.graph.size, mapping)
    if not (m.is_bijective() and is_graph_embedding(g, enc.graph, m)):
        raise MalformedCoding("role map is not an isomorphism")
    return m


def is_graph_embedding(source: DiGraph, target: DiGraph, m: Morphism) -> bool:
    """Edge-level embedding check, linear in the edge sets."""
    if not m.is_total() or m.source_size != source.size or m.target_size != target.size:
        return False
    mapping = m.mapping()
    image = set(mapping.values())
    inverse = {t: s for s, t in mapping.items()}
    for u, v in source.edges:
        if (mapping[u], mapping[v]) not in target.edges:
            return False
    for x, y in target.edges:
        if x in image and y in image and (inverse[x], inverse[y]) not in source.edges:
            return False
    return True


# ---------------------------------------------------------------------------
# Provenance sidecar text


def render_role(role: Role) -> str:
    kind = role[0]
    if kind in ("A", "B", "C"):
        return f"role={kind}"
    if kind == "cycle":
        return f"role=CycleVertex tag={role[1]} pos={role[2]}"
    if kind == "elem":
        return f"role=Element x={role[1]}"
    if kind == "chain":
        _, name, tup, k, pos = role
        return f"role=ChainNode {name} {','.join(map(str, tup))} k={k} pos={pos}"
    if kind == "junction":
        _, name, tup = role
        return f"role=Junction {name} {','.join(map(str, tup))}"
    raise ValueError(f"unknown role {role!r}")


def render_provenance(coded: CodedGraph) -> str:
    return "".join(f"v {v} {render_role(role)}\n" for v, role in coded.provenance)
