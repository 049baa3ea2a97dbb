"""The two minimal tag structures built from eventually-constant bit strings.

An element is an infinite bit string that is eventually constant, stored as
(finite prefix, eventual bit) with the prefix never ending in the eventual
bit, so the representation is unique. S0 is the orbit of the all-zeros
string under the XOR maps, S1 the orbit of the all-ones string; both carry
unary prefix relations and the graphs of the XOR maps.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

from .core import AtomOracle, FinStructure, Signature, all_strings, enum_string, xor_bits

Nu = str  # a finite bit string indexing one XOR map / prefix relation


@dataclass(frozen=True)
class SElem:
    """Eventually-constant bit string prefix . tail^omega, normalized."""

    prefix: str
    tail: int

    def __post_init__(self):
        assert self.tail in (0, 1)
        assert all(c in "01" for c in self.prefix)
        if self.prefix.endswith(str(self.tail)):
            raise ValueError(f"prefix {self.prefix!r} not normalized for tail {self.tail}")

    @classmethod
    def make(cls, bits: str, tail: int) -> "SElem":
        """Build from any finite approximation, stripping redundant tail bits."""
        return cls(bits.rstrip(str(tail)), tail)

    def bit(self, i: int) -> int:
        if i < len(self.prefix):
            return int(self.prefix[i])
        return self.tail

    def bits(self, n: int) -> str:
        """The first n bits of the infinite string."""
        return "".join(str(self.bit(i)) for i in range(n))

    def __str__(self) -> str:
        return f"{self.prefix}:{self.tail}"

    @classmethod
    def parse(cls, text: str) -> "SElem":
        prefix, sep, tail = text.partition(":")
        if sep != ":" or tail not in ("0", "1") or not all(c in "01" for c in prefix):
            raise ValueError(f"bad element literal {text!r}, expected PREFIX:TAILBIT")
        return cls(prefix, int(tail))


ZERO = SElem("", 0)
ONE = SElem("", 1)


def eval_F(nu: Nu, x: SElem) -> SElem:
    """XOR x's infinite string with nu (padded with 0s); the tail is unchanged."""
    n = max(len(nu), len(x.prefix))
    return SElem.make(xor_bits(x.bits(n), nu), x.tail)


def holds_R(nu: Nu, x: SElem) -> bool:
    """True iff nu is an initial segment of x's infinite string."""
    return all(x.bit(i) == int(nu[i]) for i in range(len(nu)))


def holds_graphF(nu: Nu, x: SElem, y: SElem) -> bool:
    return eval_F(nu, x) == y


def enumerate_elems(b: int, n: int) -> list[SElem]:
    """The first n elements with tail b, prefixes in length-lex order.

    Index 0 is the constant string; see nth_elem for the closed form.
    """
    return [nth_elem(b, k) for k in range(n)]


def nth_elem(b: int, k: int) -> SElem:
    """k-th element of the tail-b structure under the length-lex enumeration.

    Normalized prefixes of length l >= 1 end in 1-b, leaving 2^(l-1) choices;
    index 0 is the empty prefix.
    """
    assert k >= 0 and b in (0, 1)
    if k == 0:
        return SElem("", b)
    k -= 1
    length = 1
    while k >= 1 << (length - 1):
        k -= 1 << (length - 1)
        length += 1
    body = format(k, "b").zfill(length - 1) if length > 1 else ""
    return SElem(body + str(1 - b), b)


def elem_index(x: SElem) -> int:
    """Inverse of nth_elem for x within its own tail structure."""
    if not x.prefix:
        return 0
    length = len(x.prefix)
    body = x.prefix[:-1]
    offset = int(body, 2) if body else 0
    return 1 + ((1 << (length - 1)) - 1) + offset


def closure(seed: SElem, max_len: int) -> set[SElem]:
    """Close {seed} under every XOR map indexed by a string of length <= max_len.

    Fixpoint iteration; the result is the coset of seed under all strings
    supported on positions < max_len, hence has exactly 2^max_len members.
    """
    gens = list(all_strings(max_len))
    result = {seed}
    frontier = [seed]
    while frontier:
        x = frontier.pop()
        for nu in gens:
            y = eval_F(nu, x)
            if y not in result:
                result.add(y)
                frontier.append(y)
    return result


def reduct_iso(m: int) -> Callable[[SElem], SElem]:
    """The bijection flipping every bit at position >= m.

    Restricted to the sublanguage of strings of length <= m it preserves and
    reflects all prefix relations and XOR-map graphs, and it swaps the two
    tail structures. It is an involution.
    """
    assert m >= 0

    def h(x: SElem) -> SElem:
        n = max(m, len(x.prefix))
        flipped = "".join(
            str(x.bit(i)) if i < m else str(1 - x.bit(i)) for i in range(n)
        )
        return SElem.make(flipped, 1 - x.tail)

    return h


def distinguishing_trace(x: SElem, bound: int) -> set[Nu]:
    """All strings of length <= bound that are initial segments of x."""
    return {x.bits(k) for k in range(bound + 1)}


def generator_trace(b: int, bound: int) -> set[Nu]:
    """The trace of the constant-b string: {b^k : k <= bound}."""
    return {str(b) * k for k in range(bound + 1)}


# ---------------------------------------------------------------------------
# Relational presentation


def rel_name(kind: str, nu: Nu) -> str:
    assert kind in ("R", "gF")
    return f"{kind}_{nu}"


def split_rel_name(name: str) -> tuple[str, Nu]:
    kind, sep, nu = name.partition("_")
    if sep != "_" or kind not in ("R", "gF") or not all(c in "01" for c in nu):
        raise ValueError(f"not a tag-structure relation name: {name!r}")
    return kind, nu


def tag_relation(index: int) -> tuple[str, int]:
    """Relation enumeration for the tag structures: R_nu/1 and gF_nu/2 alternating."""
    nu = enum_string(index // 2)
    if index % 2 == 0:
        return rel_name("R", nu), 1
    return rel_name("gF", nu), 2


def tag_signature(nu_bound: int) -> Signature:
    """All R_nu/1 and gF_nu/2 with |nu| <= nu_bound, enumeration order."""
    rels = []
    for nu in all_strings(nu_bound):
        rels.append((rel_name("R", nu), 1))
        rels.append((rel_name("gF", nu), 2))
    return Signature(tuple(rels))


def shelah_oracle(b: int) -> AtomOracle:
    """The tail-b structure as an atom oracle (handles are SElem values)."""

    def holds(name: str, tup: tuple) -> bool:
        kind, nu = split_rel_name(name)
        if kind == "R":
            (x,) = tup
            return holds_R(nu, x)
        x, y = tup
        return holds_graphF(nu, x, y)

    return AtomOracle(
        relation=tag_relation,
        element=lambda i: nth_elem(b, i),
        holds=holds,
        num_relations=None,
        num_elements=None,
    )


def reduct_restriction(elems: Sequence[SElem], nu_bound: int) -> FinStructure:
    """Finite structure on the given elements with all relations |nu| <= nu_bound."""
    sig = tag_signature(nu_bound)
    index = {x: i for i, x in enumerate(elems)}
    assert len(index) == len(elems), "duplicate elements"
    facts = set()
    for nu in all_strings(nu_bound):
        for x, i in index.items():
            if holds_R(nu, x):
                facts.add((rel_name("R", nu), (i,)))
            y = eval_F(nu, x)
            if y in index:
                facts.add((rel_name("gF", nu), (i, index[y])))
    return FinStructure(sig, len(elems), frozenset(facts))


def paired_reduct_restrictions(
    m: int, nu_bound: int, log2_size: int
) -> tuple[FinStructure, FinStructure, list[int]]:
    """Matched restrictions of the two tag structures, closed under the flip map.

    Left universe is the closure of the all-zeros string under strings of
    length <= log2_size; right universe is its image under reduct_iso(m), in
    the same order, so the translation strategy is the identity on indices.
    """
    h = reduct_iso(m)
    left_elems = sorted(closure(ZERO, log2_size), key=elem_index)
    right_elems = [h(x) for x in left_elems]
    left = reduct_restriction(left_elems, nu_bound)
    right = reduct_restriction(right_elems, nu_bound)
    return left, right, list(range(len(left_elems)))
