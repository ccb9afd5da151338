"""Determinization of Buchi automata through trees of state sets.

Each deterministic state is a labeled ordered tree: the root label tracks
the full subset-construction state set, and a child records the runs that
passed a final state while its parent label was live.  Labels obey three
properties: they are non-empty, labels of sibling subtrees are disjoint,
and every label strictly contains the union of its children's labels.
Those properties bound the tree at one node per automaton state.

Reading a symbol rewrites the tree in five phases (spawn a fresh youngest
child per node, strip states already owned by older siblings, drop empty
nodes, collapse subtrees whose children cover their parent, and compress
sibling gaps).  A node whose children covered it is recorded as accepting
for that transition; a node displaced by compression is recorded as
unstable.  The recorded marks index Rabin pairs either by the node's name
(baseline mode) or by its (height, flag) identifier (canonical mode),
which merges names that can never share a tree and so lowers the number
of pairs.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Dict, FrozenSet, List, Mapping, Optional, Sequence, Set, Tuple

from .automata import (
    DRTW,
    DRW,
    BuildStats,
    Edge,
    NBW,
    PairIndex,
    RabinPair,
    RabinPairSet,
    Symbol,
    TransitionAnnotation,
    validate_nbw,
)
from .errors import CapacityError, InputError
from .trees import (
    Identifier,
    IdentifierTable,
    NodeName,
    ROOT,
    classify,
    compress,
    height,
    is_prefix_closed,
    name_str,
)

MODES = ("baseline", "canonical")

DEFAULT_MAX_STATES = 100_000


@dataclass(frozen=True)
class HistoryTree:
    """Immutable labeled tree payload; the empty tree is the rejecting sink.

    `entries` holds (name, label) pairs sorted by name; `ids` holds the
    per-node identifiers in canonical mode and is None in baseline mode.
    """

    entries: Tuple[Tuple[NodeName, FrozenSet[str]], ...]
    ids: Optional[Tuple[Tuple[NodeName, Identifier], ...]] = None

    @classmethod
    def from_maps(
        cls,
        labels: Mapping[NodeName, FrozenSet[str]],
        ids: Optional[Mapping[NodeName, Identifier]] = None,
    ) -> "HistoryTree":
        entries = tuple(sorted((n, frozenset(l)) for n, l in labels.items()))
        id_entries = None if ids is None else tuple(sorted(ids.items()))
        return cls(entries, id_entries)

    @cached_property
    def label_map(self) -> Dict[NodeName, FrozenSet[str]]:
        return dict(self.entries)

    @cached_property
    def id_map(self) -> Optional[Dict[NodeName, Identifier]]:
        return None if self.ids is None else dict(self.ids)

    @cached_property
    def names(self) -> FrozenSet[NodeName]:
        return frozenset(n for n, _ in self.entries)

    @property
    def is_sink(self) -> bool:
        return not self.entries

    @property
    def node_count(self) -> int:
        return len(self.entries)

    def render(self) -> str:
        """Stable one-line rendering used for state names and DOT labels."""
        if self.is_sink:
            return "sink"
        parts = []
        for name, label in self.entries:
            text = f"{name_str(name)}:{{{','.join(sorted(label))}}}"
            if self.id_map is not None:
                text += f"{self.id_map[name]}"
            parts.append(text)
        return " ".join(parts)


@dataclass(frozen=True)
class EnrichedHistoryTree:
    """A tree payload plus the marks of the transition that entered it."""

    tree: HistoryTree
    incoming: TransitionAnnotation

    def render(self) -> str:
        plus = ",".join(str(i) for i in sorted(self.incoming.accepting))
        minus = ",".join(str(i) for i in sorted(self.incoming.unstable))
        return f"{self.tree.render()} [+{{{plus}}} -{{{minus}}}]"


@dataclass(frozen=True)
class StepTrace:
    """Intermediate trees of one successor computation, for inspection."""

    symbol: Symbol
    spawned: Dict[NodeName, FrozenSet[str]]
    deduped: Dict[NodeName, FrozenSet[str]]
    nonempty: Dict[NodeName, FrozenSet[str]]
    pruned: Dict[NodeName, FrozenSet[str]]
    accepting: FrozenSet[NodeName]
    stable_accepting: FrozenSet[NodeName]
    unstable: FrozenSet[NodeName]
    renaming: Dict[NodeName, NodeName]
    off_table: FrozenSet[NodeName]
    result: HistoryTree
    annotation: TransitionAnnotation


class Determinizer:
    """Bundles one input automaton with a mode, mark semantics and the
    shared identifier table; all methods are pure with respect to trees."""

    def __init__(
        self,
        nbw: NBW,
        mode: str = "canonical",
        strict_marks: bool = False,
        max_states: int = DEFAULT_MAX_STATES,
    ):
        if mode not in MODES:
            raise InputError(f"unknown mode {mode!r}; expected one of {MODES}")
        problems = validate_nbw(nbw)
        if problems:
            raise InputError("invalid automaton: " + "; ".join(problems))
        self.nbw = nbw
        self.mode = mode
        self.strict_marks = strict_marks
        self.max_states = max_states
        self.n = len(nbw.states)
        self.table: Optional[IdentifierTable] = (
            IdentifierTable(max(self.n, 1)) if mode == "canonical" else None
        )

    # -- indexing ---------------------------------------------------------

    def index_of(self, name: NodeName) -> PairIndex:
        if self.mode == "baseline":
            return name
        return self.table.lookup(name)

    # -- tree construction -------------------------------------------------

    def initial_tree(self) -> HistoryTree:
        if not self.nbw.initial:
            return self._freeze({})
        return self._freeze({ROOT: frozenset(self.nbw.initial)})

    def _freeze(self, labels: Mapping[NodeName, FrozenSet[str]]) -> HistoryTree:
        if self.mode == "baseline":
            return HistoryTree.from_maps(labels, None)
        ids = {n: self.table.lookup(n) for n in labels}
        return HistoryTree.from_maps(labels, ids)

    def successor_trace(self, tree: HistoryTree, symbol: Symbol) -> StepTrace:
        if symbol not in self.nbw.alphabet:
            raise InputError(f"symbol {symbol!r} not in alphabet")
        old = tree.label_map

        # Spawn: every node advances its label by one symbol and gains a
        # fresh youngest child holding the final states among successors.
        spawned: Dict[NodeName, FrozenSet[str]] = {}
        for name, label in old.items():
            image = frozenset(q for s in label for q in self.nbw.post(s, symbol))
            spawned[name] = image
        degrees: Dict[NodeName, int] = {}
        for name in old:
            if name:
                parent = name[:-1]
                degrees[parent] = max(degrees.get(parent, 0), name[-1])
        for name, label in list(spawned.items()):
            child = name + (degrees.get(name, 0) + 1,)
            spawned[child] = spawned[name] & self.nbw.finals

        # Dedup: a state claimed by an older sibling (pre-dedup label) is
        # removed from every younger sibling's whole subtree.
        deduped: Dict[NodeName, FrozenSet[str]] = {}

        def scrub(name: NodeName, poison: FrozenSet[str]) -> None:
            deduped[name] = spawned[name] - poison
            kids = sorted(n for n in spawned if n[:-1] == name and len(n) == len(name) + 1)
            seen: FrozenSet[str] = frozenset()
            for kid in kids:
                scrub(kid, poison | seen)
                seen |= spawned[kid]

        if spawned:
            scrub(ROOT, frozenset())

        # Drop nodes whose label emptied (their subtrees empty with them).
        nonempty = {n: l for n, l in deduped.items() if l}

        # Collapse: a node whose children's labels add up to its own loses
        # the whole subtree below it and counts as accepting.
        covered: Set[NodeName] = set()
        for name, label in nonempty.items():
            kid_union: Set[str] = set()
            has_kid = False
            for other, other_label in nonempty.items():
                if other[:-1] == name and len(other) == len(name) + 1:
                    has_kid = True
                    kid_union |= other_label
            if has_kid and kid_union == label:
                covered.add(name)
        doomed = {
            n
            for n in nonempty
            if any(n[: len(v)] == v and n != v for v in covered)
        }
        pruned = {n: l for n, l in nonempty.items() if n not in doomed}
        accepting = frozenset(covered - doomed)

        # Compress sibling gaps; displaced nodes are the unstable ones.
        parts = classify(pruned)
        renaming = compress(pruned)
        stable_accepting = accepting & parts.stable
        final_labels = {renaming[n]: l for n, l in pruned.items()}
        result = self._freeze(final_labels)

        plus = frozenset(self.index_of(n) for n in stable_accepting)
        if self.strict_marks:
            minus_names = parts.unstable - accepting
        else:
            minus_names = parts.unstable
        minus = frozenset(self.index_of(n) for n in minus_names)
        stable_carried = frozenset(self.index_of(n) for n in parts.stable)

        off_table = frozenset(n for n in spawned if height(n) >= self.n)
        return StepTrace(
            symbol=symbol,
            spawned=spawned,
            deduped=deduped,
            nonempty=nonempty,
            pruned=pruned,
            accepting=accepting,
            stable_accepting=stable_accepting,
            unstable=parts.unstable,
            renaming=renaming,
            off_table=off_table,
            result=result,
            annotation=TransitionAnnotation(plus, minus, stable_carried),
        )

    def successor(self, tree: HistoryTree, symbol: Symbol) -> Tuple[HistoryTree, TransitionAnnotation]:
        trace = self.successor_trace(tree, symbol)
        return trace.result, trace.annotation

    # -- automaton construction --------------------------------------------

    def _explore(self, start_payload, step):
        """Breadth-first fixpoint over payloads; `step` maps (payload,
        symbol) to (next payload, annotation).  Deterministic numbering:
        discovery order with the alphabet in declared order."""
        payloads: List = [start_payload]
        index = {start_payload: 0}
        transitions: Dict[Tuple[int, Symbol], Edge] = {}
        off_table: Set[NodeName] = set()
        max_nodes = 0
        frontier = 0
        while frontier < len(payloads):
            sid = frontier
            frontier += 1
            payload = payloads[sid]
            max_nodes = max(max_nodes, self._payload_tree(payload).node_count)
            for symbol in self.nbw.alphabet:
                nxt, annotation, extra_off = step(payload, symbol)
                tid = index.get(nxt)
                if tid is None:
                    if len(payloads) >= self.max_states:
                        raise CapacityError(
                            f"state limit {self.max_states} exceeded",
                            partial=self._stats(len(payloads), len(transitions), 0, max_nodes, len(off_table)),
                        )
                    tid = len(payloads)
                    payloads.append(nxt)
                    index[nxt] = tid
                transitions[(sid, symbol)] = (tid, annotation)
                off_table |= extra_off
        return payloads, transitions, max_nodes, off_table

    @staticmethod
    def _payload_tree(payload) -> HistoryTree:
        return payload.tree if isinstance(payload, EnrichedHistoryTree) else payload

    def _stats(self, states, transitions, pairs, max_nodes, off_table) -> BuildStats:
        return BuildStats(
            mode=self.mode,
            strict_marks=self.strict_marks,
            states=states,
            transitions=transitions,
            pairs=pairs,
            max_tree_nodes=max_nodes,
            off_table_intermediate_names=off_table,
        )

    def build_drtw(self) -> DRTW:
        def step(tree: HistoryTree, symbol: Symbol):
            trace = self.successor_trace(tree, symbol)
            return trace.result, trace.annotation, trace.off_table

        payloads, transitions, max_nodes, off_table = self._explore(self.initial_tree(), step)
        acceptance = assemble_pairs(transitions, strict_marks=self.strict_marks)
        stats = self._stats(
            len(payloads), len(transitions), len(acceptance.pairs), max_nodes, len(off_table)
        )
        return DRTW(
            payloads=tuple(payloads),
            alphabet=self.nbw.alphabet,
            initial=0,
            transitions=transitions,
            acceptance=acceptance,
            stats=stats,
        )

    def build_drw(self) -> DRW:
        def step(payload: EnrichedHistoryTree, symbol: Symbol):
            trace = self.successor_trace(payload.tree, symbol)
            return (
                EnrichedHistoryTree(trace.result, trace.annotation),
                trace.annotation,
                trace.off_table,
            )

        # Nodes of the initial tree count as stably present at time zero,
        # so re-entering the same tree through a quiet transition merges
        # with the start state.
        tree0 = self.initial_tree()
        start = EnrichedHistoryTree(
            tree0,
            TransitionAnnotation(stable=frozenset(self.index_of(n) for n in tree0.names)),
        )
        payloads, transitions, max_nodes, off_table = self._explore(start, step)
        acceptance = assemble_state_pairs(
            [p.incoming for p in payloads], strict_marks=self.strict_marks
        )
        stats = self._stats(
            len(payloads), len(transitions), len(acceptance.pairs), max_nodes, len(off_table)
        )
        return DRW(
            payloads=tuple(payloads),
            alphabet=self.nbw.alphabet,
            initial=0,
            transitions=transitions,
            acceptance=acceptance,
            stats=stats,
        )


# -- pair assembly ----------------------------------------------------------


def assemble_pairs(
    transitions: Mapping[Tuple[int, Symbol], Edge],
    *,
    strict_marks: bool = False,
) -> RabinPairSet:
    """Rabin pairs over transitions: one pair per index that is marked
    accepting on some transition.

    A pair's accepting set holds the transitions marked accepting at that
    index.  Its rejecting set holds the transitions marked unstable there
    and, unless strict_marks, every transition through which no stable
    node carries the index: a node that vanished, or re-entered the tree
    only by renaming, cannot witness progress.
    """
    marked = sorted({i for _, ann in transitions.values() for i in ann.accepting})
    pairs = []
    for idx in marked:
        acc = frozenset(key for key, (_, ann) in transitions.items() if idx in ann.accepting)
        rej = set(key for key, (_, ann) in transitions.items() if idx in ann.unstable)
        if not strict_marks:
            rej |= {
                key for key, (_, ann) in transitions.items() if idx not in ann.stable
            }
        pairs.append(RabinPair(index=idx, accepting=acc, rejecting=frozenset(rej)))
    return RabinPairSet(kind="transition", pairs=tuple(pairs))


def assemble_state_pairs(
    incoming: Sequence[TransitionAnnotation],
    *,
    strict_marks: bool = False,
) -> RabinPairSet:
    """State-based variant: marks and stable carriers are read off each
    state's incoming annotation."""
    marked = sorted({i for ann in incoming for i in ann.accepting})
    pairs = []
    for idx in marked:
        acc = frozenset(sid for sid, ann in enumerate(incoming) if idx in ann.accepting)
        rej = set(sid for sid, ann in enumerate(incoming) if idx in ann.unstable)
        if not strict_marks:
            rej |= {sid for sid, ann in enumerate(incoming) if idx not in ann.stable}
        pairs.append(RabinPair(index=idx, accepting=acc, rejecting=frozenset(rej)))
    return RabinPairSet(kind="state", pairs=tuple(pairs))


# -- validation --------------------------------------------------------------


def check_history_tree(
    tree: HistoryTree,
    nbw: NBW,
    mode: str = "canonical",
    table: Optional[IdentifierTable] = None,
) -> List[str]:
    """Every violated tree invariant, empty when the payload is sound."""
    problems: List[str] = []
    labels = tree.label_map
    names = tree.names
    n = len(nbw.states)
    if tree.is_sink:
        if mode == "canonical" and tree.ids != ():
            problems.append("sink must carry an empty identifier map")
        return problems
    if not is_prefix_closed(names):
        problems.append("name set not prefix closed")
    parts = classify(names)
    if parts.imbalanced:
        problems.append(f"not order closed: imbalanced {sorted(parts.imbalanced)}")
    if len(names) > n:
        problems.append(f"{len(names)} nodes exceeds state count {n}")
    for name in sorted(names):
        if height(name) >= max(n, 1):
            problems.append(f"node {name_str(name)} outside the capacity-{n} full tree")
        label = labels[name]
        if not label:
            problems.append(f"empty label at {name_str(name)}")
        if not label <= frozenset(nbw.states):
            problems.append(f"label at {name_str(name)} mentions unknown states")
        kid_union: Set[str] = set()
        kids = [k for k in names if k[:-1] == name and len(k) == len(name) + 1]
        for kid in sorted(kids):
            if labels[kid] & kid_union:
                problems.append(f"sibling labels overlap below {name_str(name)}")
            kid_union |= labels[kid]
        if kids and not kid_union < label:
            problems.append(f"children of {name_str(name)} do not form a strict subset")
    if mode == "baseline":
        if tree.ids is not None:
            problems.append("baseline tree carries identifiers")
    else:
        if tree.id_map is None:
            problems.append("missing identifiers")
        else:
            if set(tree.id_map) != set(names):
                problems.append("identifier map does not cover the tree")
            idents = list(tree.id_map.values())
            if len(set(idents)) != len(idents):
                problems.append("identifiers not injective")
            if table is not None:
                for name, ident in tree.id_map.items():
                    if table.lookup(name) != ident:
                        problems.append(f"identifier at {name_str(name)} disagrees with table")
    return problems


# -- spec-level convenience wrappers ----------------------------------------


def initial_history_tree(nbw: NBW, mode: str = "canonical") -> HistoryTree:
    return Determinizer(nbw, mode).initial_tree()


def successor(
    nbw: NBW,
    tree: HistoryTree,
    symbol: Symbol,
    mode: str = "canonical",
    *,
    strict_marks: bool = False,
) -> Tuple[HistoryTree, TransitionAnnotation]:
    return Determinizer(nbw, mode, strict_marks).successor(tree, symbol)


def build_drtw(
    nbw: NBW,
    mode: str = "canonical",
    *,
    strict_marks: bool = False,
    max_states: int = DEFAULT_MAX_STATES,
) -> DRTW:
    return Determinizer(nbw, mode, strict_marks, max_states).build_drtw()


def build_drw(
    nbw: NBW,
    mode: str = "canonical",
    *,
    strict_marks: bool = False,
    max_states: int = DEFAULT_MAX_STATES,
) -> DRW:
    return Determinizer(nbw, mode, strict_marks, max_states).build_drw()
