import pytest

from histree.determinize import build_drtw, build_drw
from histree.errors import InputError, ParseError
from histree.fixtures import e1, fixtures
from histree.formats import (
    UnsupportedAcceptanceError,
    emit_nbw_hoa,
    emit_nbw_native,
    emit_rabin,
    parse_nbw,
    parse_nbw_hoa,
    parse_nbw_native,
    parse_rabin,
)
from histree.oracle import det_lasso_member, lassos_upto

MINIMAL_HOA = """HOA: v1
States: 1
Start: 0
AP: 1 "a"
Alias: @a 0
acc-name: Buchi
Acceptance: 1 Inf(0)
--BODY--
State: 0 {0}
[@a] 0
--END--
"""


def test_minimal_document_parses():
    a = parse_nbw(MINIMAL_HOA)
    assert len(a.states) == 1
    assert a.alphabet == ("a",)
    assert a.finals == {"0"}
    assert a.initial == {"0"}


def test_parity_acceptance_rejected():
    doc = MINIMAL_HOA.replace("acc-name: Buchi", "acc-name: parity min even 2").replace(
        "Acceptance: 1 Inf(0)", "Acceptance: 2 Inf(0) | Fin(1)"
    )
    with pytest.raises(UnsupportedAcceptanceError):
        parse_nbw(doc)


def test_missing_acceptance_rejected():
    doc = MINIMAL_HOA.replace("acc-name: Buchi\n", "").replace("Acceptance: 1 Inf(0)\n", "")
    with pytest.raises(UnsupportedAcceptanceError):
        parse_nbw(doc)


def test_hoa_round_trip_fixtures():
    for name, a in fixtures().items():
        assert parse_nbw(emit_nbw_hoa(a)) == a, name


def test_native_round_trip_fixtures():
    for name, a in fixtures().items():
        assert parse_nbw(emit_nbw_native(a)) == a, name


def test_parse_reports_position():
    broken = MINIMAL_HOA.replace("[@a] 0", "[@a] 7")
    with pytest.raises(ParseError) as err:
        parse_nbw(broken)
    assert "not declared" in str(err.value)
    assert err.value.line == 10

    with pytest.raises(ParseError) as err:
        parse_nbw("HOA: v1\nStates: $\n")
    assert err.value.line == 2


def test_propositional_labels_rejected():
    doc = MINIMAL_HOA.replace("[@a] 0", "[0&!1] 0")
    with pytest.raises(ParseError) as err:
        parse_nbw(doc)
    assert "propositional" in str(err.value)


def test_unknown_alias_rejected():
    doc = MINIMAL_HOA.replace("[@a] 0", "[@zz] 0")
    with pytest.raises(ParseError) as err:
        parse_nbw(doc)
    assert "alias" in str(err.value)


def test_transition_acceptance_input_rejected():
    doc = MINIMAL_HOA.replace("[@a] 0", "[@a] 0 {0}")
    with pytest.raises(InputError):
        parse_nbw(doc)


def test_conjunctive_start_rejected():
    doc = MINIMAL_HOA.replace("Start: 0", "Start: 0 & 0")
    with pytest.raises(ParseError):
        parse_nbw(doc)


def test_start_may_be_absent():
    doc = MINIMAL_HOA.replace("Start: 0\n", "")
    a = parse_nbw(doc)
    assert a.initial == frozenset()


def test_native_error_positions():
    with pytest.raises(ParseError) as err:
        parse_nbw_native('{"format": "nbw"}\n')
    assert err.value.line == 1
    good_header = (
        '{"format": "nbw", "states": ["p"], "alphabet": ["a"],'
        ' "initial": ["p"], "finals": []}\n'
    )
    with pytest.raises(ParseError) as err:
        parse_nbw_native(good_header + '{"from": "p", "symbol": "a", "to": "zz"}\n')
    assert err.value.line == 2
    with pytest.raises(ParseError):
        parse_nbw_native(good_header + "not json\n")


def test_unrecognized_format():
    with pytest.raises(ParseError):
        parse_nbw("digraph {}\n")


def test_emit_rabin_is_byte_stable():
    a = e1()
    first = emit_rabin(build_drtw(a))
    second = emit_rabin(build_drtw(a))
    assert first == second
    assert first.encode() == second.encode()


def test_emit_rabin_zero_pairs():
    from histree.fixtures import no_finals

    text = emit_rabin(build_drtw(no_finals()))
    assert "acc-name: Rabin 0" in text
    assert "Acceptance: 0 f" in text


def test_reparsed_rabin_preserves_verdicts():
    for name in ("e1", "finitely_many_b", "spawn_die_respawn", "branch_union"):
        a = fixtures()[name]
        for build in (build_drtw, build_drw):
            d = build(a)
            back = parse_rabin(emit_rabin(d))
            assert type(back) is type(d)
            for w in lassos_upto(a.alphabet, 3, 3):
                assert det_lasso_member(back, w) == det_lasso_member(d, w), (name, w)


def test_parse_rabin_requires_rabin():
    with pytest.raises(UnsupportedAcceptanceError):
        parse_rabin(MINIMAL_HOA)


def test_hoa_symbols_with_odd_characters():
    from histree.automata import NBW

    a = NBW.make(("st 1", 'q"2'), ("sym one", "sym\\two"), [("st 1", "sym one", 'q"2')], ("st 1",), ('q"2',))
    assert parse_nbw(emit_nbw_hoa(a)) == a
    assert parse_nbw(emit_nbw_native(a)) == a


def test_specific_parsers_reject_other_format():
    with pytest.raises(ParseError):
        parse_nbw_hoa('{"format": "nbw"}')
    with pytest.raises(ParseError):
        parse_nbw_native(MINIMAL_HOA)
