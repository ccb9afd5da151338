"""Hand-written Buchi automata used by the test suite and handy as demos.

Each constructor documents the language it was written to exercise; the
micro example `e1` is the walkthrough automaton whose determinization is
pinned state by state in the tests.
"""

from __future__ import annotations

from typing import Dict

from .automata import NBW


def e1() -> NBW:
    """Two states over one symbol: accepts a^omega via the run that jumps
    to the final sink; the smallest automaton with a useful loop."""
    return NBW.make(
        states=("p", "q"),
        alphabet=("a",),
        transitions=[("p", "a", "p"), ("p", "a", "q"), ("q", "a", "q")],
        initial=("p",),
        finals=("q",),
    )


def finitely_many_b() -> NBW:
    """Words with finitely many b: guess the last b and move to the final
    a-loop."""
    return NBW.make(
        states=("q0", "q1"),
        alphabet=("a", "b"),
        transitions=[
            ("q0", "a", "q0"),
            ("q0", "b", "q0"),
            ("q0", "a", "q1"),
            ("q1", "a", "q1"),
        ],
        initial=("q0",),
        finals=("q1",),
    )


def no_finals() -> NBW:
    """Empty language: transitions exist but nothing is final."""
    return NBW.make(
        states=("q0", "q1"),
        alphabet=("a", "b"),
        transitions=[
            ("q0", "a", "q1"),
            ("q1", "a", "q0"),
            ("q0", "b", "q0"),
            ("q1", "b", "q1"),
        ],
        initial=("q0",),
        finals=(),
    )


def single_final_loop() -> NBW:
    """One final state looping on its only symbol: accepts a^omega."""
    return NBW.make(
        states=("q0",),
        alphabet=("a",),
        transitions=[("q0", "a", "q0")],
        initial=("q0",),
        finals=("q0",),
    )


def empty_initial() -> NBW:
    """No initial state at all: the empty language through an empty run set."""
    return NBW.make(
        states=("q0",),
        alphabet=("a",),
        transitions=[("q0", "a", "q0")],
        initial=(),
        finals=("q0",),
    )


def spawn_die_respawn() -> NBW:
    """Final runs die on every b, so nothing is accepted on words with
    infinitely many b even though the final branch keeps reappearing.

    This is the automaton where marking only displaced nodes as rejecting
    is unsound: on (aab)^omega the accepting branch is deleted outright
    (never displaced), so a pair indexed by it sees accepting marks
    infinitely often and no rejecting ones.  The vanished-witness rule in
    the pair assembly closes that hole.
    """
    return NBW.make(
        states=("s", "f"),
        alphabet=("a", "b"),
        transitions=[
            ("s", "a", "s"),
            ("s", "a", "f"),
            ("f", "a", "f"),
            ("s", "b", "s"),
        ],
        initial=("s",),
        finals=("f",),
    )


def rename_takeover() -> NBW:
    """The accepting branch dies while a fresh sibling is renamed onto its
    very name in the same step, so the name stays present in every tree.

    On (go go halt)^omega no run survives (busy runs die in done two steps
    later), yet the branch keeps being refilled.  Distinguishes the
    stable-carrier rejecting rule from a mere is-the-index-still-in-the-
    target-tree check: only the former rejects here, because the surviving
    node arrived by renaming, not stably.
    """
    return NBW.make(
        states=("idle", "busy", "done"),
        alphabet=("go", "halt"),
        transitions=[
            ("idle", "go", "idle"),
            ("idle", "go", "busy"),
            ("idle", "halt", "idle"),
            ("busy", "go", "busy"),
            ("busy", "halt", "done"),
            ("done", "halt", "done"),
        ],
        initial=("idle",),
        finals=("busy",),
    )


def infinitely_many_a() -> NBW:
    """Deterministic two-state automaton for infinitely many a."""
    return NBW.make(
        states=("w", "s"),
        alphabet=("a", "b"),
        transitions=[
            ("w", "a", "s"),
            ("w", "b", "w"),
            ("s", "a", "s"),
            ("s", "b", "w"),
        ],
        initial=("w",),
        finals=("s",),
    )


def branch_union() -> NBW:
    """Two initial components: the left accepts a^omega, the right
    b^omega; exercises multiple initial states."""
    return NBW.make(
        states=("l", "r"),
        alphabet=("a", "b"),
        transitions=[("l", "a", "l"), ("r", "b", "r")],
        initial=("l", "r"),
        finals=("l", "r"),
    )


def ladder() -> NBW:
    """Four states climbing on a with resets on b; builds deeper trees."""
    states = ("q0", "q1", "q2", "q3")
    transitions = [
        ("q0", "a", "q0"),
        ("q0", "a", "q1"),
        ("q1", "a", "q1"),
        ("q1", "a", "q2"),
        ("q2", "a", "q2"),
        ("q2", "a", "q3"),
        ("q3", "a", "q3"),
    ] + [(q, "b", "q0") for q in states]
    return NBW.make(states, ("a", "b"), transitions, ("q0",), ("q1", "q3"))


def pair_shrink() -> NBW:
    """Five-state instance on which identifier indexing needs strictly
    fewer Rabin pairs than name indexing: the accepting node names (1,2)
    and (3,) have equal height and can never share one tree, so both map
    to one identifier, merging their pairs."""
    return NBW.make(
        states=("q0", "q1", "q2", "q3", "q4"),
        alphabet=("a", "b"),
        transitions=[
            ("q0", "a", "q3"),
            ("q0", "a", "q4"),
            ("q0", "b", "q1"),
            ("q0", "b", "q2"),
            ("q0", "b", "q3"),
            ("q1", "a", "q3"),
            ("q1", "b", "q1"),
            ("q2", "a", "q0"),
            ("q2", "a", "q1"),
            ("q2", "b", "q0"),
            ("q2", "b", "q2"),
            ("q2", "b", "q3"),
            ("q3", "a", "q2"),
            ("q3", "b", "q1"),
            ("q3", "b", "q4"),
            ("q4", "a", "q1"),
            ("q4", "a", "q2"),
            ("q4", "a", "q3"),
            ("q4", "b", "q1"),
            ("q4", "b", "q4"),
        ],
        initial=("q0",),
        finals=("q1", "q3"),
    )


def fixtures() -> Dict[str, NBW]:
    """All hand-written automata, keyed by a short descriptive name."""
    return {
        "e1": e1(),
        "finitely_many_b": finitely_many_b(),
        "no_finals": no_finals(),
        "single_final_loop": single_final_loop(),
        "empty_initial": empty_initial(),
        "spawn_die_respawn": spawn_die_respawn(),
        "rename_takeover": rename_takeover(),
        "infinitely_many_a": infinitely_many_a(),
        "branch_union": branch_union(),
        "ladder": ladder(),
        "pair_shrink": pair_shrink(),
    }
