"""Independent brute-force ground truth: lasso-word membership for the
Buchi input and the deterministic Rabin outputs, bounded differential
equivalence, exhaustive tree census and identifier bound reports.

Membership for the nondeterministic input works over transition profiles:
for a finite word, a matrix over state pairs whose entries say whether the
word admits no path, a path, or a path through a final state.  A path
counts as visiting a final state when any state after its first is final,
so single-symbol profiles mark final targets and composition never double
counts endpoints.
"""

from __future__ import annotations

import os
import time
from dataclasses import dataclass
from functools import lru_cache
from itertools import product
from math import comb
from typing import Dict, FrozenSet, List, Optional, Sequence, Set, Tuple, Union

from .automata import DRTW, DRW, LassoWord, NBW, Symbol, rabin_loop_accepts
from .errors import CapacityError, HistreeError, InputError
from .trees import IdentifierTable, NodeName

NONE, PATH, FINAL = 0, 1, 2

DEFAULT_TREE_CAP = 6
TREE_CAP_ENV = "HISTREE_TREE_CAP"
IDENTIFIER_BOUND_CAP = 12


def tree_enumeration_cap() -> int:
    raw = os.environ.get(TREE_CAP_ENV)
    if raw is None:
        return DEFAULT_TREE_CAP
    try:
        return int(raw)
    except ValueError:
        raise InputError(f"{TREE_CAP_ENV} must be an integer, got {raw!r}") from None


@dataclass(frozen=True)
class TransitionProfile:
    """Reachability matrix for one finite word, encoded as bitmask rows:
    bit q of reach[p] means some path p -> q, of final[p] that some such
    path passes a final state (counted at path targets)."""

    size: int
    reach: Tuple[int, ...]
    final: Tuple[int, ...]

    def entry(self, p: int, q: int) -> int:
        if self.final[p] >> q & 1:
            return FINAL
        if self.reach[p] >> q & 1:
            return PATH
        return NONE

    @staticmethod
    def identity(size: int) -> "TransitionProfile":
        return TransitionProfile(size, tuple(1 << p for p in range(size)), (0,) * size)

    def compose(self, other: "TransitionProfile") -> "TransitionProfile":
        reach = []
        final = []
        for p in range(self.size):
            r = f = 0
            row_reach = self.reach[p]
            row_final = self.final[p]
            q = 0
            while row_reach:
                if row_reach & 1:
                    r |= other.reach[q]
                    f |= other.final[q]
                    if row_final >> q & 1:
                        f |= other.reach[q]
                row_reach >>= 1
                q += 1
            reach.append(r)
            final.append(f)
        return TransitionProfile(self.size, tuple(reach), tuple(final))

    def union(self, other: "TransitionProfile") -> "TransitionProfile":
        return TransitionProfile(
            self.size,
            tuple(a | b for a, b in zip(self.reach, other.reach)),
            tuple(a | b for a, b in zip(self.final, other.final)),
        )


def _state_index(a: NBW) -> Dict[str, int]:
    return {q: i for i, q in enumerate(a.states)}


def symbol_profile(a: NBW, symbol: Symbol) -> TransitionProfile:
    idx = _state_index(a)
    size = len(a.states)
    reach = [0] * size
    final = [0] * size
    for src, sym, dst in a.transitions:
        if sym != symbol:
            continue
        bit = 1 << idx[dst]
        reach[idx[src]] |= bit
        if dst in a.finals:
            final[idx[src]] |= bit
    return TransitionProfile(size, tuple(reach), tuple(final))


def word_profile(a: NBW, word: Sequence[Symbol]) -> TransitionProfile:
    for sym in word:
        if sym not in a.alphabet:
            raise InputError(f"symbol {sym!r} not in alphabet")
    profile = TransitionProfile.identity(len(a.states))
    for sym in word:
        profile = profile.compose(symbol_profile(a, sym))
    return profile


def _period_closure(period_profile: TransitionProfile) -> TransitionProfile:
    """Union of the 1..size fold powers: paths over one or more periods."""
    closure = period_profile
    for _ in range(period_profile.size):
        grown = closure.union(closure.compose(period_profile))
        if grown == closure:
            break
        closure = grown
    return closure


def nbw_lasso_member(a: NBW, w: LassoWord) -> bool:
    """Whether some run on prefix . period^omega visits finals infinitely
    often: a state reachable on the prefix plus whole periods must sit on
    a period-level cycle passing a final state."""
    size = len(a.states)
    if size == 0 or not a.initial:
        # No states or no initial states: no runs at all.
        word_profile(a, w.prefix + w.period)  # still validate the alphabet
        return False
    idx = _state_index(a)
    prefix_profile = word_profile(a, w.prefix)
    closure = _period_closure(word_profile(a, w.period))
    after_prefix = 0
    for q in a.initial:
        after_prefix |= prefix_profile.reach[idx[q]]
    boundary = after_prefix
    for q in range(size):
        if after_prefix >> q & 1:
            boundary |= closure.reach[q]
    final_cycles = 0
    for q in range(size):
        if closure.final[q] >> q & 1:
            final_cycles |= 1 << q
    return bool(boundary & final_cycles)


def det_lasso_member(d: Union[DRTW, DRW], w: LassoWord) -> bool:
    """Simulate the deterministic automaton on the lasso: iterate the
    period until a period-boundary state repeats, then evaluate the Rabin
    pairs on the marks seen inside the detected loop."""
    for sym in w.prefix + w.period:
        if sym not in d.alphabet:
            raise InputError(f"symbol {sym!r} not in alphabet")
    on_transitions = d.acceptance.kind == "transition"
    state = d.initial
    for sym in w.prefix:
        state, _ = d.transitions[(state, sym)]
    seen: Dict[int, int] = {state: 0}
    marks_per_lap: List[FrozenSet] = []
    limit = len(d.payloads) + 1
    for lap in range(limit):
        lap_marks: Set = set()
        for sym in w.period:
            nxt, _ = d.transitions[(state, sym)]
            lap_marks.add((state, sym) if on_transitions else nxt)
            state = nxt
        marks_per_lap.append(frozenset(lap_marks))
        if state in seen:
            start = seen[state]
            loop_marks: Set = set()
            for lap_set in marks_per_lap[start:]:
                loop_marks |= lap_set
            return rabin_loop_accepts(d.acceptance, loop_marks)
        seen[state] = lap + 1
    raise HistreeError("period boundary failed to repeat within the state count")


@dataclass(frozen=True)
class Counterexample:
    prefix: Tuple[Symbol, ...]
    period: Tuple[Symbol, ...]
    nbw_accepts: bool
    det_accepts: bool


@dataclass(frozen=True)
class EquivReport:
    """Outcome of a bounded differential scan."""

    tested: int
    counterexample: Optional[Counterexample]
    seconds: float

    @property
    def equivalent(self) -> bool:
        return self.counterexample is None

    def to_text(self) -> str:
        lines = [f"tested={self.tested}", f"seconds={self.seconds:.3f}"]
        if self.counterexample is None:
            lines.append("counterexample=none")
        else:
            c = self.counterexample
            lines.append(
                "counterexample="
                f"u:{','.join(c.prefix) or '-'};v:{','.join(c.period)};"
                f"nbw:{int(c.nbw_accepts)};det:{int(c.det_accepts)}"
            )
        return "\n".join(lines) + "\n"


def lassos_upto(alphabet: Sequence[Symbol], max_u: int, max_v: int):
    """All lassos with prefix length <= max_u and period length 1..max_v,
    shortest first, symbols in declared alphabet order."""
    for u_len in range(max_u + 1):
        for prefix in product(alphabet, repeat=u_len):
            for v_len in range(1, max_v + 1):
                for period in product(alphabet, repeat=v_len):
                    yield LassoWord(prefix, period)


def bounded_equiv(a: NBW, d: Union[DRTW, DRW], max_u: int, max_v: int) -> EquivReport:
    """Compare acceptance of every bounded lasso; the first disagreement
    in enumeration order is reported, so results are deterministic."""
    if tuple(a.alphabet) != tuple(d.alphabet):
        raise InputError("automata to compare must share one alphabet")
    start = time.monotonic()
    tested = 0
    for lasso in lassos_upto(a.alphabet, max_u, max_v):
        tested += 1
        expected = nbw_lasso_member(a, lasso)
        got = det_lasso_member(d, lasso)
        if expected != got:
            return EquivReport(
                tested,
                Counterexample(lasso.prefix, lasso.period, expected, got),
                time.monotonic() - start,
            )
    return EquivReport(tested, None, time.monotonic() - start)


# -- exhaustive tree census ---------------------------------------------------

Shape = Tuple["Shape", ...]  # a node is the tuple of its child shapes


def _shapes_with_nodes(k: int) -> Tuple[Shape, ...]:
    return _shapes_cached(k)


@lru_cache(maxsize=None)
def _shapes_cached(k: int) -> Tuple[Shape, ...]:
    if k == 1:
        return ((),)
    out: List[Shape] = []
    # Split k-1 non-root nodes among an ordered run of child subtrees.
    def splits(remaining: int, parts: int):
        if parts == 1:
            yield (remaining,)
            return
        for first in range(1, remaining - parts + 2):
            for rest in splits(remaining - first, parts - 1):
                yield (first,) + rest

    for parts in range(1, k):
        for sizes in splits(k - 1, parts):
            for kids in product(*(_shapes_cached(s) for s in sizes)):
                out.append(tuple(kids))
    return tuple(out)


def _shape_names(shape: Shape, base: NodeName = ()) -> List[NodeName]:
    names = [base]
    for i, kid in enumerate(shape, start=1):
        names.extend(_shape_names(kid, base + (i,)))
    return names


@lru_cache(maxsize=None)
def _labelings_with_root_size(shape: Shape, size: int) -> int:
    """Labelings of `shape` whose root label is one fixed set of `size`
    states: children take disjoint non-empty subsets of it whose union
    leaves at least one parent state uncovered."""
    if size < 1:
        return 0
    if not shape:
        return 1

    def place(kid_pos: int, free: int) -> int:
        if kid_pos == len(shape):
            return 1 if free >= 1 else 0
        total = 0
        for kid_size in range(1, free + 1):
            below = _labelings_with_root_size(shape[kid_pos], kid_size)
            if below:
                total += comb(free, kid_size) * below * place(kid_pos + 1, free - kid_size)
        return total

    return place(0, size)


def _census(n: int) -> Tuple[int, int]:
    """(tree count, identifier-annotated tree count) for n automaton states."""
    cap = tree_enumeration_cap()
    if n > cap:
        raise CapacityError(f"tree enumeration capped at n <= {cap} (got {n})")
    if n < 1:
        raise InputError("census requires n >= 1")
    table = IdentifierTable(n)
    plain = 0
    annotated = 0
    for k in range(1, n + 1):
        for shape in _shapes_with_nodes(k):
            count = sum(
                comb(n, size) * _labelings_with_root_size(shape, size)
                for size in range(1, n + 1)
            )
            plain += count
            idents = [table.lookup(name) for name in _shape_names(shape)]
            if len(set(idents)) != len(idents):
                raise HistreeError(
                    f"identifier collision inside an order-closed tree: {shape}"
                )
            annotated += count
    return plain, annotated


def enumerate_history_trees(n: int) -> int:
    """hist(n): labeled order-closed trees over an n-state automaton."""
    return _census(n)[0]


def enumerate_full(n: int) -> int:
    """histf(n): the same census with identifiers attached per node name;
    identifiers are a function of the name, so the count cannot grow, and
    the per-tree injectivity check is asserted along the way."""
    return _census(n)[1]


# -- identifier bound report --------------------------------------------------


def _ceil_half(k: int) -> int:
    return -(-k // 2)


@dataclass(frozen=True)
class IdentifierBoundsReport:
    n: int
    flags_used: int
    flags_by_height: Dict[int, int]
    identifiers_used: int
    flag_budget: int  # asserted upper bound on distinct flags
    identifier_budget: int  # reported against, never asserted

    def to_text(self) -> str:
        lines = [
            f"n={self.n}",
            f"flags_used={self.flags_used}",
            f"flag_budget={self.flag_budget}",
            f"identifiers_used={self.identifiers_used}",
            f"identifier_budget={self.identifier_budget}",
        ]
        for h in sorted(self.flags_by_height):
            lines.append(f"flags_at_height_{h}={self.flags_by_height[h]}")
        return "\n".join(lines) + "\n"


def verify_identifier_bounds(n: int) -> IdentifierBoundsReport:
    """Build the capacity-n identifier table and check its flag counts
    against the proven budgets; the total identifier count is reported
    against the headline budget but not asserted (their per-height sums
    disagree, see the report consumers)."""
    if n > IDENTIFIER_BOUND_CAP:
        raise CapacityError(f"identifier bound check capped at n <= {IDENTIFIER_BOUND_CAP}")
    if n < 1:
        raise InputError("identifier bound check requires n >= 1")
    table = IdentifierTable(n)
    by_height = {h: len(flags) for h, flags in sorted(table.flags_by_height().items())}
    flags_used = len(table.flags_used())
    flag_budget = 2 ** max(_ceil_half(n - 1) - 1, 0)
    if n >= 2 and flags_used > flag_budget:
        raise HistreeError(f"{flags_used} flags exceed the budget {flag_budget} for n={n}")
    for h in range(1, n):
        per_height_budget = min(2 ** (h - 1), 2 ** (n - h - 1))
        if by_height.get(h, 0) > per_height_budget:
            raise HistreeError(
                f"{by_height[h]} flags at height {h} exceed {per_height_budget} for n={n}"
            )
    return IdentifierBoundsReport(
        n=n,
        flags_used=flags_used,
        flags_by_height=by_height,
        identifiers_used=len(table.distinct_identifiers()),
        flag_budget=flag_budget,
        identifier_budget=2 ** _ceil_half(n - 1),
    )
