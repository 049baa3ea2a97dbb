"""Exact n-round Ehrenfeucht-Fraisse game solving on finite structures.

Two deliberately different algorithms answer the same question:

* ef_winner explores the alternating game tree over pebble sequences, with
  memoization and orbit pruning under automorphisms found by the search
  module;
* equiv_n evaluates the back-and-forth hierarchy on unordered partial maps,
  with no automorphism machinery at all.

Their agreement on small structures is one of the package's standing checks.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence, Union

from .core import BudgetExhausted, DEFAULT_BUDGET, DiGraph, FinStructure
from .search import _as_structure, _refine_colors, automorphisms

DUPLICATOR = "Duplicator"
SPOILER = "Spoiler"

Structish = Union[FinStructure, DiGraph]


@dataclass(frozen=True)
class GameState:
    left: FinStructure
    right: FinStructure
    pebbles: tuple[tuple[int, int], ...]
    rounds_left: int

    def __post_init__(self):
        assert self.rounds_left >= 0
        for l, r in self.pebbles:
            assert 0 <= l < self.left.size and 0 <= r < self.right.size


def partial_iso_check(state: GameState) -> bool:
    """Win condition: the pebble correspondence is a partial isomorphism."""
    return _pebbles_partial_iso(state.left, state.right, state.pebbles)


def _pebbles_partial_iso(left: FinStructure, right: FinStructure,
                         pebbles: Sequence[tuple[int, int]]) -> bool:
    fwd: dict[int, int] = {}
    bwd: dict[int, int] = {}
    for l, r in pebbles:
        if fwd.setdefault(l, r) != r:
            return False
        if bwd.setdefault(r, l) != l:
            return False
    lefts = sorted(fwd)
    for name, arity in left.sig.relations:
        for tup in _tuples_over(lefts, arity):
            if left.holds(name, tup) != right.holds(name, tuple(fwd[x] for x in tup)):
                return False
    return True


def _tuples_over(elems: Sequence[int], arity: int):
    if arity == 0:
        yield ()
        return
    for head in elems:
        for rest in _tuples_over(elems, arity - 1):
            yield (head,) + rest


# ---------------------------------------------------------------------------
# Game-tree search


class GameSolver:
    """Memoized alternating search over pebble sequences for one pair."""

    def __init__(self, left: FinStructure, right: FinStructure,
                 budget: int = DEFAULT_BUDGET):
        if left.sig != right.sig:
            raise ValueError("structures must share a signature")
        self.left = left
        self.right = right
        self.budget = budget
        self.states = 0
        self.aut_left = [m.mapping() for m in automorphisms(left, budget=budget)]
        self.aut_right = [m.mapping() for m in automorphisms(right, budget=budget)]
        self.memo: dict[tuple[tuple[tuple[int, int], ...], int], bool] = {}

    @staticmethod
    def _orbit_reps(universe: int, auts: list[dict[int, int]],
                    fixed: frozenset[int]) -> list[int]:
        stab = [a for a in auts if all(a[x] == x for x in fixed)]
        reps = []
        seen: set[int] = set()
        for e in range(universe):
            if e in seen:
                continue
            reps.append(e)
            for a in stab:
                seen.add(a[e])
        return reps

    def _extended(self, pebbles, e: int, f: int):
        new = pebbles + ((e, f),)
        if _pebbles_partial_iso(self.left, self.right, new):
            return new
        return None

    def duplicator_wins(self, pebbles: tuple[tuple[int, int], ...], k: int) -> bool:
        key = (pebbles, k)
        if key in self.memo:
            return self.memo[key]
        self.states += 1
        if self.states > self.budget:
            raise BudgetExhausted(f"game search exceeded {self.budget} states")
        if k == 0:
            self.memo[key] = True
            return True
        fixed_l = frozenset(l for l, _ in pebbles)
        fixed_r = frozenset(r for _, r in pebbles)
        left_reps = self._orbit_reps(self.left.size, self.aut_left, fixed_l)
        right_reps = self._orbit_reps(self.right.size, self.aut_right, fixed_r)
        result = True
        # Spoiler moves on the left...
        for e in left_reps:
            if not any(
                (new := self._extended(pebbles, e, f)) is not None
                and self.duplicator_wins(new, k - 1)
                for f in right_reps
            ):
                result = False
                break
        # ... and on the right.
        if result:
            for f in right_reps:
                if not any(
                    (new := self._extended(pebbles, e, f)) is not None
                    and self.duplicator_wins(new, k - 1)
                    for e in left_reps
                ):
                    result = False
                    break
        self.memo[key] = result
        return result


def ef_winner(left: Structish, right: Structish, n: int,
              budget: int = DEFAULT_BUDGET) -> str:
    """Exact winner of the n-round game from the empty position."""
    assert n >= 0
    solver = GameSolver(_as_structure(left), _as_structure(right), budget)
    return DUPLICATOR if solver.duplicator_wins((), n) else SPOILER


def ef_trace(left: Structish, right: Structish, n: int,
             budget: int = DEFAULT_BUDGET) -> tuple[str, list[tuple[str, int, Optional[int]]]]:
    """One principal line of play: (winner, [(side, spoiler move, response)]).

    The winning player follows an optimal strategy; the loser plays the
    least legal move. A None response means Duplicator had no legal reply.
    """
    assert n >= 0
    ls, rs = _as_structure(left), _as_structure(right)
    solver = GameSolver(ls, rs, budget)
    winner = DUPLICATOR if solver.duplicator_wins((), n) else SPOILER
    trace: list[tuple[str, int, Optional[int]]] = []
    pebbles: tuple[tuple[int, int], ...] = ()
    for k in range(n, 0, -1):
        if solver.duplicator_wins(pebbles, k):
            if ls.size == 0 and rs.size == 0:
                break
            side, e = ("left", 0) if ls.size else ("right", 0)
            response = None
            for f in range(rs.size if side == "left" else ls.size):
                pair = (e, f) if side == "left" else (f, e)
                new = solver._extended(pebbles, *pair)
                if new is not None and solver.duplicator_wins(new, k - 1):
                    response, pebbles = f, new
                    break
            assert response is not None
        else:
            found = None
            for side, universe in (("left", ls.size), ("right", rs.size)):
                for e in range(universe):
                    others = rs.size if side == "left" else ls.size
                    if not any(
                        (new := solver._extended(
                            pebbles, *((e, f) if side == "left" else (f, e))
                        )) is not None and solver.duplicator_wins(new, k - 1)
                        for f in range(others)
                    ):
                        found = (side, e)
                        break
                if found:
                    break
            assert found is not None
            side, e = found
            response = None
            for f in range(rs.size if side == "left" else ls.size):
                pair = (e, f) if side == "left" else (f, e)
                new = solver._extended(pebbles, *pair)
                if new is not None:
                    response, pebbles = f, new
                    break
        trace.append((side, e, response))
        if response is None:
            break
    return winner, trace


# ---------------------------------------------------------------------------
# Back-and-forth hierarchy


def equiv_n(left: Structish, right: Structish, n: int,
            budget: int = DEFAULT_BUDGET) -> bool:
    """True iff the structures are n-back-and-forth equivalent.

    Computes membership of partial maps in the hierarchy level by level:
    a map is n-good iff every element on either side extends it to an
    (n-1)-good map. Maps are unordered sets of pairs, memoized per level.
    Stable colors order response candidates (a heuristic only; the scan is
    exhaustive).
    """
    ls, rs = _as_structure(left), _as_structure(right)
    if ls.sig != rs.sig:
        raise ValueError("structures must share a signature")
    assert n >= 0
    lcol = _refine_colors(ls)
    rcol = _refine_colors(rs)
    memo: dict[tuple[frozenset[tuple[int, int]], int], bool] = {}
    visited = 0

    def extension_ok(fwd: dict[int, int], a: int, b: int) -> bool:
        # injectivity, then atoms on tuples that mention the new element
        if a in fwd:
            return fwd[a] == b
        if b in fwd.values():
            return False
        fwd2 = dict(fwd)
        fwd2[a] = b
        lefts = sorted(fwd2)
        for name, arity in ls.sig.relations:
            for tup in _tuples_over(lefts, arity):
                if a not in tup:
                    continue
                if ls.holds(name, tup) != rs.holds(name, tuple(fwd2[x] for x in tup)):
                    return False
        return True

    def candidates(universe: int, colors: dict[int, int], want: int) -> list[int]:
        same = [e for e in range(universe) if colors[e] == want]
        rest = [e for e in range(universe) if colors[e] != want]
        return same + rest

    def good(pairs: frozenset[tuple[int, int]], k: int) -> bool:
        nonlocal visited
        key = (pairs, k)
        if key in memo:
            return memo[key]
        visited += 1
        if visited > budget:
            raise BudgetExhausted(f"hierarchy exceeded {budget} maps")
        if k == 0:
            memo[key] = True
            return True
        fwd = dict(pairs)
        result = True
        for a in range(ls.size):
            if not any(
                extension_ok(fwd, a, b) and good(pairs | {(a, b)}, k - 1)
                for b in candidates(rs.size, rcol, lcol[a])
            ):
                result = False
                break
        if result:
            for b in range(rs.size):
                if not any(
                    extension_ok(fwd, a, b) and good(pairs | {(a, b)}, k - 1)
                    for a in candidates(ls.size, lcol, rcol[b])
                ):
                    result = False
                    break
        memo[key] = result
        return result

    return good(frozenset(), n)


# ---------------------------------------------------------------------------
# Strategy verification for the tag-structure reducts


def verify_duplicator_strategy(leftR: FinStructure, rightR: FinStructure,
                               strategy: Sequence[int], n: int) -> bool:
    """Check a positional Duplicator strategy against every Spoiler line.

    strategy[i] is Duplicator's answer (a rightR index) when Spoiler plays
    left element i; Spoiler moves on the right are answered through the
    inverse. Returns True iff the pebble position is a partial isomorphism
    after each of the n rounds on every branch.
    """
    if leftR.size != rightR.size or len(strategy) != leftR.size:
        raise ValueError("strategy must be a bijection between equal universes")
    inverse = {strategy[i]: i for i in range(len(strategy))}
    if len(inverse) != len(strategy):
        raise ValueError("strategy is not injective")

    def play(pebbles: tuple[tuple[int, int], ...], k: int) -> bool:
        if k == 0:
            return True
        for e in range(leftR.size):
            pb = pebbles + ((e, strategy[e]),)
            if not _pebbles_partial_iso(leftR, rightR, pb) or not play(pb, k - 1):
                return False
        for f in range(rightR.size):
            pb = pebbles + ((inverse[f], f),)
            if not _pebbles_partial_iso(leftR, rightR, pb) or not play(pb, k - 1):
                return False
        return True

    return play((), n)


def verify_reduct_strategy(m: int, n: int, nu_bound: Optional[int] = None,
                           log2_size: int = 3) -> bool:
    """Verify the flip-above-m translation strategy on matched reduct restrictions.

    Builds the paired restrictions from the shelah module (left universe the
    closure of the all-zeros string, right its flip image in the same order)
    and plays every Spoiler line of the n-round game against the identity
    index strategy.
    """
    from .shelah import paired_reduct_restrictions

    if nu_bound is None:
        nu_bound = m
    left, right, strategy = paired_reduct_restrictions(m, nu_bound, log2_size)
    return verify_duplicator_strategy(left, right, strategy, n)
