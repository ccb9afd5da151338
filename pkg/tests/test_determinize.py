import pytest

from histree.automata import NBW, TransitionAnnotation
from histree.determinize import (
    Determinizer,
    EnrichedHistoryTree,
    HistoryTree,
    assemble_pairs,
    assemble_state_pairs,
    build_drtw,
    build_drw,
    check_history_tree,
    initial_history_tree,
    successor,
)
from histree.errors import CapacityError, InputError
from histree.fixtures import e1, no_finals, single_final_loop
from histree.oracle import det_lasso_member, lassos_upto, nbw_lasso_member
from histree.automata import LassoWord
from histree.trees import Identifier, classify, full_tree, height


def tree(labels, ids=None):
    return HistoryTree.from_maps(
        {k: frozenset(v) for k, v in labels.items()},
        None if ids is None else {k: Identifier(*v) for k, v in ids.items()},
    )


def test_initial_tree_examples(e1_nbw):
    t0 = initial_history_tree(e1_nbw)
    assert t0 == tree({(): {"p"}}, {(): (0, 1)})

    empty = NBW.make(("p",), ("a",), [("p", "a", "p")], (), ("p",))
    assert initial_history_tree(empty).is_sink

    full_start = NBW.make(("p", "q"), ("a",), [("p", "a", "p")], ("p", "q"), ())
    assert initial_history_tree(full_start) == tree({(): {"p", "q"}}, {(): (0, 1)})


def test_initial_tree_baseline_has_no_ids(e1_nbw):
    t0 = initial_history_tree(e1_nbw, "baseline")
    assert t0 == tree({(): {"p"}})
    assert t0.ids is None


def test_e1_successor_chain(e1_nbw):
    engine = Determinizer(e1_nbw, "canonical")
    t0 = engine.initial_tree()
    both = frozenset({Identifier(0, 1), Identifier(1, 1)})
    t1, ann1 = engine.successor(t0, "a")
    assert t1 == tree({(): {"p", "q"}, (1,): {"q"}}, {(): (0, 1), (1,): (1, 1)})
    assert ann1 == TransitionAnnotation(stable=both)

    t2, ann2 = engine.successor(t1, "a")
    assert t2 == t1
    assert ann2 == TransitionAnnotation(
        accepting=frozenset({Identifier(1, 1)}), stable=both
    )


def test_e1_successor_trace_details(e1_nbw):
    engine = Determinizer(e1_nbw, "canonical")
    t1, _ = engine.successor(engine.initial_tree(), "a")
    trace = engine.successor_trace(t1, "a")
    # Spawn doubles the node count; the younger root child loses q to its
    # older sibling, empties, and is dropped; node (1,) is covered by its
    # fresh child and accepts.
    assert set(trace.spawned) == {(), (1,), (1, 1), (2,)}
    assert trace.spawned[(2,)] == {"q"}
    assert trace.deduped[(2,)] == frozenset()
    assert set(trace.nonempty) == {(), (1,), (1, 1)}
    assert set(trace.pruned) == {(), (1,)}
    assert trace.accepting == {(1,)}
    assert trace.stable_accepting == {(1,)}
    assert trace.unstable == frozenset()
    assert trace.renaming == {(): (), (1,): (1,)}


def test_successor_of_sink_is_sink(e1_nbw):
    engine = Determinizer(e1_nbw)
    sink = HistoryTree.from_maps({}, {})
    out, ann = engine.successor(sink, "a")
    assert out.is_sink
    assert ann == TransitionAnnotation()


def test_successor_rejects_unknown_symbol(e1_nbw):
    engine = Determinizer(e1_nbw)
    with pytest.raises(InputError):
        engine.successor(engine.initial_tree(), "z")


def test_successor_wrapper_matches_engine(e1_nbw):
    t0 = initial_history_tree(e1_nbw)
    via_wrapper = successor(e1_nbw, t0, "a")
    via_engine = Determinizer(e1_nbw).successor(t0, "a")
    assert via_wrapper == via_engine


def test_build_drtw_e1(e1_nbw):
    d = build_drtw(e1_nbw)
    assert len(d.payloads) == 2
    assert d.initial == 0
    assert len(d.acceptance.pairs) == 1
    pair = d.acceptance.pairs[0]
    assert pair.index == Identifier(1, 1)
    assert pair.accepting == {(1, "a")}
    assert pair.rejecting == frozenset()
    _, loop_ann = d.transitions[(1, "a")]
    assert loop_ann.accepting == {Identifier(1, 1)}
    assert det_lasso_member(d, LassoWord((), ("a",)))


def test_build_drtw_no_finals_has_no_pairs():
    d = build_drtw(no_finals())
    assert all(ann.accepting == frozenset() for _, ann in d.transitions.values())
    assert d.acceptance.pairs == ()
    for w in lassos_upto(d.alphabet, 2, 2):
        assert not det_lasso_member(d, w)


def test_build_drtw_single_final_loop():
    d = build_drtw(single_final_loop())
    assert det_lasso_member(d, LassoWord((), ("a",)))
    keys = [key for key, (_, ann) in d.transitions.items() if ann.accepting]
    assert keys, "the self loop must carry an accepting mark"


def test_build_drw_e1(e1_nbw):
    d = build_drw(e1_nbw)
    assert len(d.payloads) == 3
    assert d.acceptance.kind == "state"
    annotations = sorted(
        (sorted(p.incoming.accepting), sorted(p.incoming.unstable)) for p in d.payloads
    )
    assert annotations == [([], []), ([], []), ([Identifier(1, 1)], [])]
    assert det_lasso_member(d, LassoWord((), ("a",)))


def test_drw_equals_drtw_size_when_annotations_constant():
    a = no_finals()
    assert len(build_drw(a).payloads) == len(build_drtw(a).payloads)


def test_drw_refines_drtw(corpus_sample):
    for a in corpus_sample[:15]:
        assert len(build_drw(a).payloads) >= len(build_drtw(a).payloads)


def test_assemble_pairs_absence_rule():
    mark = "X"
    kept = frozenset({mark})
    plus = TransitionAnnotation(accepting=kept, stable=kept)
    # The index survives into the target tree, but only by renaming: the
    # stable set does not carry it, so the transition must reject.
    renamed_in = TransitionAnnotation(stable=frozenset())
    transitions = {
        (0, "a"): (1, plus),
        (1, "a"): (0, renamed_in),
    }
    acc = assemble_pairs(transitions)
    assert len(acc.pairs) == 1
    pair = acc.pairs[0]
    assert pair.accepting == {(0, "a")}
    assert pair.rejecting == {(1, "a")}

    relaxed = assemble_pairs(transitions, strict_marks=True)
    assert relaxed.pairs[0].rejecting == frozenset()


def test_assemble_pairs_requires_an_accepting_occurrence():
    minus_only = TransitionAnnotation(unstable=frozenset({"X"}))
    transitions = {(0, "a"): (0, minus_only)}
    acc = assemble_pairs(transitions)
    assert acc.pairs == ()


def test_assemble_state_pairs_absence_rule():
    mark = "Y"
    kept = frozenset({mark})
    incoming = [
        TransitionAnnotation(),
        TransitionAnnotation(accepting=kept, stable=kept),
        TransitionAnnotation(unstable=kept, stable=frozenset()),
    ]
    acc = assemble_state_pairs(incoming)
    assert len(acc.pairs) == 1
    assert acc.pairs[0].accepting == {1}
    assert acc.pairs[0].rejecting == {0, 2}


def test_capacity_error_carries_partial_stats(corpus_sample):
    target = next(a for a in corpus_sample if len(a.states) >= 3)
    with pytest.raises(CapacityError) as err:
        build_drtw(target, max_states=1)
    assert err.value.partial is not None
    assert err.value.partial.states >= 1


def test_invalid_inputs_rejected(e1_nbw):
    broken = NBW.make(("p",), ("a",), [("p", "a", "zz")], ("p",), ())
    with pytest.raises(InputError):
        build_drtw(broken)
    with pytest.raises(InputError):
        Determinizer(e1_nbw, mode="fancy")


def _local_tree_properties(labels):
    """Direct re-statement of the three label properties on a dict."""
    problems = []
    for name, label in labels.items():
        if not label:
            problems.append(("empty", name))
        kids = [k for k in labels if k[:-1] == name and len(k) == len(name) + 1]
        union = set()
        for kid in kids:
            if labels[kid] & union:
                problems.append(("overlap", name))
            union |= labels[kid]
        if kids and not union < label:
            problems.append(("cover", name))
    return problems


def test_corpus_invariants_and_trace_properties(corpus_sample):
    for a in corpus_sample[:20]:
        n = len(a.states)
        engine = Determinizer(a, "canonical")
        d = engine.build_drtw()
        for payload in d.payloads:
            assert check_history_tree(payload, a, "canonical", engine.table) == []
            assert payload.node_count <= n
            for name in payload.names:
                assert name in full_tree(max(n, 1))
        # Trace-level checks along every reachable transition.
        for (sid, sym), (tid, ann) in d.transitions.items():
            trace = engine.successor_trace(d.payloads[sid], sym)
            assert trace.result == d.payloads[tid]
            assert len(trace.spawned) <= 2 * n
            assert _local_tree_properties(trace.pruned) == []
            renamed = {x for x, y in trace.renaming.items() if x != y}
            assert renamed == trace.unstable
            parts = classify(trace.pruned)
            assert parts.unstable == trace.unstable
            assert ann.unstable == frozenset(engine.index_of(x) for x in trace.unstable)
            assert ann.stable == frozenset(engine.index_of(x) for x in parts.stable)


def test_erasure_bijection_and_injectivity(corpus_sample):
    for a in corpus_sample[:20]:
        canonical = build_drtw(a, "canonical")
        baseline = build_drtw(a, "baseline")
        erased = [HistoryTree(p.entries, None) for p in canonical.payloads]
        assert len(set(erased)) == len(erased), "identifier erasure must stay injective"
        assert erased == list(baseline.payloads)
        mapping = {
            key: (dst, ann) for key, (dst, ann) in baseline.transitions.items()
        }
        table = Determinizer(a, "canonical").table
        for key, (dst, ann) in canonical.transitions.items():
            base_dst, base_ann = mapping[key]
            assert base_dst == dst
            assert frozenset(table.lookup(x) for x in base_ann.accepting) == ann.accepting
            assert frozenset(table.lookup(x) for x in base_ann.unstable) == ann.unstable
            assert frozenset(table.lookup(x) for x in base_ann.stable) == ann.stable


def test_canonical_pair_count_never_exceeds_baseline(corpus_sample):
    for a in corpus_sample[:25]:
        canonical = build_drtw(a, "canonical")
        baseline = build_drtw(a, "baseline")
        assert len(canonical.acceptance.pairs) <= len(baseline.acceptance.pairs)


def test_build_drw_modes_agree_on_language(e1_nbw):
    for mode in ("canonical", "baseline"):
        d = build_drw(e1_nbw, mode)
        for w in lassos_upto(e1_nbw.alphabet, 3, 3):
            assert det_lasso_member(d, w) == nbw_lasso_member(e1_nbw, w)


def test_enriched_tree_renders_marks(e1_nbw):
    d = build_drw(e1_nbw)
    rendered = [p.render() for p in d.payloads]
    assert any("(1,1)" in r for r in rendered)


def test_rename_takeover_rejects_broken_lineage():
    """Regression for the stable-carrier rejecting rule: when a node dies
    and a renamed sibling takes over its name in the same step, the name
    is present in the target tree but not stably carried, and the word
    must be rejected."""
    from histree.fixtures import rename_takeover
    from histree.oracle import bounded_equiv

    a = rename_takeover()
    engine = Determinizer(a, "canonical")
    d = engine.build_drtw()
    word = LassoWord((), ("go", "go", "halt"))
    assert not nbw_lasso_member(a, word)
    assert not det_lasso_member(d, word)
    takeover = [
        (key, ann)
        for key, (dst, ann) in d.transitions.items()
        if ann.unstable
        and Identifier(1, 1) in {i for _, i in (d.payloads[dst].ids or ())}
        and Identifier(1, 1) not in ann.stable
    ]
    assert takeover, "expected a transition whose target holds the name only by renaming"
    for build in (engine.build_drtw(), engine.build_drw()):
        assert bounded_equiv(a, build, 4, 4).equivalent


def test_two_same_height_nodes_can_accept_in_one_step():
    """Two sibling branches may be covered by their children in the same
    transition, yielding two accepting marks of equal height but distinct
    flags on one annotation."""
    a = NBW.make(
        states=("a", "b", "c", "e"),
        alphabet=("s",),
        transitions=[(q, "s", q) for q in ("a", "b", "c", "e")],
        initial=("a", "b", "c", "e"),
        finals=("a", "c"),
    )
    engine = Determinizer(a, "canonical")
    start = engine._freeze(
        {
            (): frozenset("abce"),
            (1,): frozenset("ab"),
            (1, 1): frozenset("a"),
            (2,): frozenset("c"),
        }
    )
    assert check_history_tree(start, a, "canonical", engine.table) == []
    trace = engine.successor_trace(start, "s")
    assert trace.accepting == {(1, 1), (2,)}
    assert trace.stable_accepting == trace.accepting
    assert trace.annotation.accepting == {Identifier(2, 1), Identifier(2, 2)}
    heights = {height(name) for name in trace.accepting}
    assert heights == {2}
