"""Ordered-tree combinatorics: node names, heights, chains, stability,
compression, full trees and the (height, flag) identifier tables.

A tree node is named by the sequence of sibling indices on the path from
the root, each index >= 1; the root is the empty sequence.  A set of names
is a tree when it is prefix-closed, and it is order-closed when sibling
indices additionally have no gaps (every tau.i with i >= 2 has tau.(i-1)
present).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, FrozenSet, Iterable, List, NamedTuple, Set, Tuple

from .errors import InputError

NodeName = Tuple[int, ...]

ROOT: NodeName = ()


def name_str(name: NodeName) -> str:
    """Render a node name as dotted components; the root renders as 'ε'."""
    return "ε" if not name else ".".join(str(c) for c in name)


def parse_name(text: str) -> NodeName:
    """Inverse of name_str; accepts 'ε', 'eps' or dotted positive integers."""
    text = text.strip()
    if text in ("ε", "eps", ""):
        return ()
    try:
        parts = tuple(int(p) for p in text.split("."))
    except ValueError:
        raise InputError(f"bad node name {text!r}") from None
    if any(p < 1 for p in parts):
        raise InputError(f"bad node name {text!r}: components must be >= 1")
    return parts


def height(name: NodeName) -> int:
    """Height of a node: the sum of its sibling indices (0 for the root)."""
    return sum(name)


def precedes(first: NodeName, second: NodeName) -> bool:
    """Strict order: first must occur in every order-closed tree that
    contains second.

    Holds exactly when first is a proper prefix of second, or such a
    proper prefix extended by one sibling index smaller than the index
    second continues with.
    """
    if len(first) > len(second):
        return False
    if len(first) == len(second):
        # Same length: only a smaller last sibling under the same parent.
        return bool(first) and first[:-1] == second[:-1] and first[-1] < second[-1]
    if first == second[: len(first)]:
        return True  # proper prefix
    head, last = first[:-1], first[-1]
    return head == second[: len(first) - 1] and last < second[len(first) - 1]


def chain(name: NodeName) -> FrozenSet[NodeName]:
    """All names that strictly precede `name`; its size equals height(name)."""
    out: Set[NodeName] = set()
    for m in range(len(name)):
        prefix = name[:m]
        out.add(prefix)
        out.update(prefix + (s,) for s in range(1, name[m]))
    return frozenset(out)


def closed_chain(name: NodeName) -> FrozenSet[NodeName]:
    """chain(name) together with the name itself."""
    return chain(name) | {name}


def can_co_occur(first: NodeName, second: NodeName, n: int) -> bool:
    """Whether both names fit together in one order-closed tree of <= n nodes."""
    return len(closed_chain(first) | closed_chain(second)) <= n


def is_prefix_closed(names: Iterable[NodeName]) -> bool:
    name_set = set(names)
    return all(name[:-1] in name_set for name in name_set if name)


def children(names: Iterable[NodeName], parent: NodeName) -> List[NodeName]:
    """Present children of `parent`, in sibling-index order."""
    k = len(parent)
    kids = [n for n in names if len(n) == k + 1 and n[:k] == parent]
    return sorted(kids)


def degree(names: Iterable[NodeName], parent: NodeName) -> int:
    return len(children(names, parent))


@dataclass(frozen=True)
class TreeClasses:
    """Partition of a tree's nodes by order-closedness damage."""

    imbalanced: FrozenSet[NodeName]
    unstable: FrozenSet[NodeName]  # imbalanced, younger siblings, descendants
    stable: FrozenSet[NodeName]


def classify(names: Iterable[NodeName]) -> TreeClasses:
    """Split a prefix-closed name set into stable and unstable nodes.

    A node tau.i is imbalanced when i >= 2 and tau.(i-1) is missing.  Every
    sibling of an imbalanced node with an index at least as large, and all
    descendants of those, are unstable; the rest are stable.
    """
    name_set = frozenset(names)
    imbalanced = frozenset(
        n for n in name_set if n and n[-1] >= 2 and n[:-1] + (n[-1] - 1,) not in name_set
    )
    # Smallest imbalanced sibling index under each parent.
    first_gap: Dict[NodeName, int] = {}
    for n in imbalanced:
        parent = n[:-1]
        first_gap[parent] = min(first_gap.get(parent, n[-1]), n[-1])
    unstable = frozenset(
        n
        for n in name_set
        if any(n[:k] in first_gap and n[k] >= first_gap[n[:k]] for k in range(len(n)))
    )
    return TreeClasses(imbalanced, unstable, name_set - unstable)


def is_order_closed(names: Iterable[NodeName]) -> bool:
    return not classify(names).imbalanced


def compress(names: Iterable[NodeName]) -> Dict[NodeName, NodeName]:
    """Renaming that closes sibling gaps, restoring order-closedness.

    The root maps to itself and tau.i maps to comp(tau).j where j counts
    the present older siblings of tau.i plus one.  The renamed names (those
    mapped to a different name) are exactly the unstable nodes.
    """
    name_set = set(names)
    out: Dict[NodeName, NodeName] = {}
    for name in sorted(name_set, key=lambda n: (len(n), n)):
        if not name:
            out[name] = name
            continue
        parent, i = name[:-1], name[-1]
        j = sum(1 for k in range(1, i) if parent + (k,) in name_set) + 1
        out[name] = out[parent] + (j,)
    return out


def full_tree(n: int) -> FrozenSet[NodeName]:
    """The tree of every name that can occur in an order-closed tree with
    at most n nodes; it has exactly 2**(n-1) nodes.

    Built by repeated doubling: the (k+1)-node-capacity tree adds one new
    rightmost child to every node of the k-capacity tree.
    """
    if n < 1:
        raise InputError("full_tree requires n >= 1")
    names: Set[NodeName] = {ROOT}
    for _ in range(n - 1):
        fresh = set()
        for name in names:
            deg = sum(1 for other in names if other[:-1] == name and len(other) == len(name) + 1)
            fresh.add(name + (deg + 1,))
        names |= fresh
    return frozenset(names)


class Identifier(NamedTuple):
    """A (height, flag) pair naming a tree position across trees."""

    height: int
    flag: int

    def __str__(self) -> str:
        return f"({self.height},{self.flag})"


class IdentifierTable:
    """Greedy flag assignment for every node of full_tree(n).

    Flags are handed out in spine order: leaves are visited left to right,
    each contributing the not-yet-seen part of its closed chain (ordered by
    height).  A node receives the smallest flag not already held by a
    same-height node that could share an order-closed tree of <= n nodes
    with it.  Two same-height names that can co-occur therefore always get
    distinct flags, which makes (height, flag) unique within any one tree.

    Lookups outside full_tree(n) (transient names produced mid-transition)
    extend the table by the same rule and are cached; existing entries are
    never changed.
    """

    def __init__(self, n: int):
        if n < 1:
            raise InputError("identifier table requires n >= 1")
        self.n = n
        self.spine_order: List[NodeName] = _spine_order(n)
        self._assigned: Dict[NodeName, Identifier] = {}
        # Per height: list of (closed chain, flag) already assigned, for
        # conflict scans during greedy assignment.
        self._by_height: Dict[int, List[Tuple[FrozenSet[NodeName], int]]] = {}
        for name in self.spine_order:
            self._assign(name)

    def _assign(self, name: NodeName) -> Identifier:
        h = height(name)
        cc = closed_chain(name)
        taken = {
            flag
            for other_cc, flag in self._by_height.get(h, ())
            if len(other_cc | cc) <= self.n
        }
        flag = 1
        while flag in taken:
            flag += 1
        ident = Identifier(h, flag)
        self._assigned[name] = ident
        self._by_height.setdefault(h, []).append((cc, flag))
        return ident

    def lookup(self, name: NodeName) -> Identifier:
        got = self._assigned.get(name)
        if got is None:
            got = self._assign(name)
        return got

    def __contains__(self, name: NodeName) -> bool:
        return name in self._assigned

    def flags_used(self) -> Set[int]:
        return {ident.flag for ident in self._assigned.values()}

    def flags_by_height(self) -> Dict[int, Set[int]]:
        out: Dict[int, Set[int]] = {}
        for ident in self._assigned.values():
            out.setdefault(ident.height, set()).add(ident.flag)
        return out

    def distinct_identifiers(self) -> Set[Identifier]:
        return set(self._assigned.values())

    def dump_text(self) -> str:
        """One line per node in spine order: name TAB height TAB flag."""
        lines = []
        for name in self.spine_order:
            ident = self._assigned[name]
            lines.append(f"{name_str(name)}\t{ident.height}\t{ident.flag}")
        return "\n".join(lines) + "\n"


def identifier_of(table: IdentifierTable, name: NodeName) -> Identifier:
    """Table lookup, extending the table lazily for transient names."""
    return table.lookup(name)


def canonical_identifier_table(n: int) -> IdentifierTable:
    return IdentifierTable(n)


def _spine_order(n: int) -> List[NodeName]:
    """All nodes of full_tree(n): leaves left to right, each contributing
    the unseen part of its closed chain ordered by height."""
    full = full_tree(n)
    leaves = sorted(n_ for n_ in full if height(n_) == n - 1)
    order: List[NodeName] = []
    seen: Set[NodeName] = set()
    for leaf in leaves:
        spine = sorted(closed_chain(leaf) - seen, key=height)
        order.extend(spine)
        seen.update(spine)
    return order
