"""Seeded random Buchi automata for differential testing.

Generation is fully determined by the seed so every run of the test suite
and the command line sees the same corpus.
"""

from __future__ import annotations

import random
from typing import Sequence, Tuple

from .automata import NBW

DEFAULT_CORPUS_SEED = 413007
DEFAULT_CORPUS_SIZE = 200
DEFAULT_MAX_STATES = 5
DEFAULT_ALPHABET: Tuple[str, ...] = ("a", "b")


def random_nbw(
    rng: random.Random,
    max_states: int = DEFAULT_MAX_STATES,
    alphabet: Sequence[str] = DEFAULT_ALPHABET,
) -> NBW:
    """One random automaton: uniform state count, random transition
    density, mostly non-empty initial sets and unconstrained final sets."""
    n = rng.randint(1, max_states)
    states = tuple(f"q{i}" for i in range(n))
    density = rng.uniform(0.15, 0.85)
    transitions = [
        (src, sym, dst)
        for src in states
        for sym in alphabet
        for dst in states
        if rng.random() < density
    ]
    if rng.random() < 0.05:
        initial: Tuple[str, ...] = ()
    else:
        initial = tuple(q for q in states if rng.random() < 0.5) or (rng.choice(states),)
    finals = tuple(q for q in states if rng.random() < 0.4)
    return NBW.make(states, tuple(alphabet), transitions, initial, finals)


def default_corpus(
    count: int = DEFAULT_CORPUS_SIZE,
    seed: int = DEFAULT_CORPUS_SEED,
    max_states: int = DEFAULT_MAX_STATES,
    alphabet: Sequence[str] = DEFAULT_ALPHABET,
) -> list:
    rng = random.Random(seed)
    return [random_nbw(rng, max_states, alphabet) for _ in range(count)]
