"""Text formats: a HOA v1 subset for automata interchange and a JSON-lines
native format for diffable fixtures.

The HOA subset covers plain-alphabet automata only: one atomic proposition
per symbol, an alias per symbol expanding to the one-hot conjunction, and
edges labeled by exactly one alias reference.  Arbitrary propositional
label expressions are rejected on purpose.  Supported acceptance: Buchi on
states (input) and Rabin on transitions or states (output).
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple, Union

from .automata import (
    DRTW,
    DRW,
    EMPTY_ANNOTATION,
    NBW,
    RabinPair,
    RabinPairSet,
)
from .errors import InputError, ParseError


class UnsupportedAcceptanceError(InputError):
    """The document declares an acceptance condition outside the subset."""


# -- tokenizer ---------------------------------------------------------------

_TOKEN_RE = re.compile(
    r"""
      (?P<ws>\s+)
    | (?P<string>"(?:[^"\\]|\\.)*")
    | (?P<marker>--BODY--|--END--)
    | (?P<header>[a-zA-Z_][0-9a-zA-Z_-]*:)
    | (?P<alias>@[0-9a-zA-Z_-]+)
    | (?P<int>[0-9]+)
    | (?P<ident>[a-zA-Z_][0-9a-zA-Z_-]*)
    | (?P<punct>[\[\]{}()&|!])
    """,
    re.VERBOSE,
)


@dataclass(frozen=True)
class _Token:
    kind: str
    value: str
    line: int
    col: int


def _tokenize(text: str) -> List[_Token]:
    tokens: List[_Token] = []
    line = 1
    line_start = 0
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", line, pos - line_start + 1)
        kind = m.lastgroup
        value = m.group()
        if kind != "ws":
            tokens.append(_Token(kind, value, line, pos - line_start + 1))
        newlines = value.count("\n")
        if newlines:
            line += newlines
            line_start = pos + value.rindex("\n") + 1
        pos = m.end()
    return tokens


def _unquote(raw: str) -> str:
    return raw[1:-1].replace('\\"', '"').replace("\\\\", "\\")


def _quote(text: str) -> str:
    return '"' + text.replace("\\", "\\\\").replace('"', '\\"') + '"'


class _TokenStream:
    def __init__(self, tokens: List[_Token]):
        self.tokens = tokens
        self.pos = 0

    def peek(self) -> Optional[_Token]:
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None

    def next(self, expect_kind: Optional[str] = None, what: str = "token") -> _Token:
        tok = self.peek()
        if tok is None:
            last = self.tokens[-1] if self.tokens else _Token("", "", 1, 1)
            raise ParseError(f"unexpected end of input, expected {what}", last.line, last.col)
        if expect_kind is not None and tok.kind != expect_kind:
            raise ParseError(f"expected {what}, found {tok.value!r}", tok.line, tok.col)
        self.pos += 1
        return tok


# -- HOA parsing --------------------------------------------------------------

_IGNORED_HEADERS = {"name:", "tool:", "properties:", "acc-name:"}
_ARG_KINDS = {"string", "alias", "int", "ident", "punct"}


@dataclass
class _HoaDocument:
    state_count: int
    start: List[int]
    aps: List[str]
    aliases: Dict[str, int]  # alias name (without @) -> symbol index
    acc_name: Optional[List[_Token]]
    acceptance: Optional[List[_Token]]
    properties: List[str]
    states: List[Tuple[int, Optional[str], Tuple[int, ...]]]
    edges: Dict[int, List[Tuple[int, int, Tuple[int, ...]]]]  # src -> (sym, dst, sig)


def _parse_alias_expr(stream: _TokenStream, ap_count: int) -> int:
    """One-hot conjunction over all APs; returns the positive AP index."""
    positive: List[int] = []
    seen: set = set()
    first = stream.peek()
    while True:
        tok = stream.peek()
        negated = False
        if tok is not None and tok.value == "!":
            stream.next()
            negated = True
            tok = stream.peek()
        if tok is None or tok.kind != "int":
            where = tok or first
            raise ParseError(
                "alias expressions must be conjunctions of AP literals",
                where.line if where else 1,
                where.col if where else 1,
            )
        stream.next()
        ap = int(tok.value)
        if ap >= ap_count:
            raise ParseError(f"AP {ap} out of range", tok.line, tok.col)
        seen.add(ap)
        if not negated:
            positive.append(ap)
        nxt = stream.peek()
        if nxt is not None and nxt.value == "&":
            stream.next()
            continue
        break
    if len(positive) != 1 or len(seen) != ap_count:
        where = first
        raise ParseError(
            "alias must name exactly one symbol: one positive AP, all others negated",
            where.line,
            where.col,
        )
    return positive[0]


def _parse_hoa_document(text: str) -> _HoaDocument:
    stream = _TokenStream(_tokenize(text))
    head = stream.next("header", "HOA: header")
    if head.value != "HOA:":
        raise ParseError("document must start with HOA: v1", head.line, head.col)
    version = stream.next("ident", "format version")
    if version.value != "v1":
        raise ParseError(f"unsupported HOA version {version.value!r}", version.line, version.col)

    doc = _HoaDocument(-1, [], [], {}, None, None, [], [], {})
    while True:
        tok = stream.peek()
        if tok is None:
            raise ParseError("missing --BODY--", 1, 1)
        if tok.kind == "marker":
            break
        tok = stream.next("header", "header or --BODY--")
        name = tok.value
        if name == "States:":
            doc.state_count = int(stream.next("int", "state count").value)
        elif name == "Start:":
            doc.start.append(int(stream.next("int", "start state").value))
            trailing = stream.peek()
            if trailing is not None and trailing.value in ("&", "|"):
                raise ParseError(
                    "start conjunctions are not supported", trailing.line, trailing.col
                )
        elif name == "AP:":
            count = int(stream.next("int", "AP count").value)
            doc.aps = [_unquote(stream.next("string", "AP name").value) for _ in range(count)]
        elif name == "Alias:":
            alias_tok = stream.next("alias", "alias name")
            doc.aliases[alias_tok.value[1:]] = _parse_alias_expr(stream, len(doc.aps))
        elif name == "acc-name:":
            doc.acc_name = _collect_args(stream)
        elif name == "Acceptance:":
            doc.acceptance = _collect_args(stream)
        elif name == "properties:":
            doc.properties.extend(t.value for t in _collect_args(stream))
        elif name in _IGNORED_HEADERS:
            _collect_args(stream)
        else:
            raise ParseError(f"unsupported header {name!r}", tok.line, tok.col)

    marker = stream.next("marker", "--BODY--")
    if marker.value != "--BODY--":
        raise ParseError("expected --BODY--", marker.line, marker.col)
    if doc.state_count < 0:
        raise ParseError("missing States: header", marker.line, marker.col)

    current: Optional[int] = None
    while True:
        tok = stream.peek()
        if tok is None:
            raise ParseError("missing --END--", marker.line, marker.col)
        if tok.kind == "marker":
            stream.next()
            if tok.value != "--END--":
                raise ParseError("unexpected --BODY--", tok.line, tok.col)
            break
        if tok.kind == "header" and tok.value == "State:":
            stream.next()
            num_tok = stream.next("int", "state number")
            num = int(num_tok.value)
            if num >= doc.state_count:
                raise ParseError(f"state {num} not declared", num_tok.line, num_tok.col)
            if num in doc.edges:
                raise ParseError(f"state {num} declared twice", num_tok.line, num_tok.col)
            label: Optional[str] = None
            if stream.peek() is not None and stream.peek().kind == "string":
                label = _unquote(stream.next().value)
            sig = _parse_signature(stream)
            doc.states.append((num, label, sig))
            doc.edges.setdefault(num, [])
            current = num
        elif tok.value == "[":
            if current is None:
                raise ParseError("edge before any State:", tok.line, tok.col)
            stream.next()
            label_tok = stream.peek()
            if label_tok is None or label_tok.kind != "alias":
                where = label_tok or tok
                raise ParseError(
                    "propositional label expressions are not supported; "
                    "edges must carry a single @alias",
                    where.line,
                    where.col,
                )
            stream.next()
            alias = label_tok.value[1:]
            if alias not in doc.aliases:
                raise ParseError(f"unknown alias @{alias}", label_tok.line, label_tok.col)
            closing = stream.next("punct", "]")
            if closing.value != "]":
                raise ParseError("expected ]", closing.line, closing.col)
            dst_tok = stream.next("int", "edge target")
            dst = int(dst_tok.value)
            if dst >= doc.state_count:
                raise ParseError(f"state {dst} not declared", dst_tok.line, dst_tok.col)
            sig = _parse_signature(stream)
            doc.edges[current].append((doc.aliases[alias], dst, sig))
        else:
            raise ParseError(f"unexpected token {tok.value!r} in body", tok.line, tok.col)
    return doc


def _collect_args(stream: _TokenStream) -> List[_Token]:
    args: List[_Token] = []
    while True:
        tok = stream.peek()
        if tok is None or tok.kind in ("header", "marker"):
            return args
        args.append(stream.next())


def _parse_signature(stream: _TokenStream) -> Tuple[int, ...]:
    tok = stream.peek()
    if tok is None or tok.value != "{":
        return ()
    stream.next()
    sets: List[int] = []
    while True:
        tok = stream.next(what="acceptance set or }")
        if tok.value == "}":
            return tuple(sets)
        if tok.kind != "int":
            raise ParseError("acceptance signature must list set numbers", tok.line, tok.col)
        sets.append(int(tok.value))


def _acc_tokens_text(tokens: Optional[List[_Token]]) -> str:
    return " ".join(t.value for t in tokens) if tokens else ""


# -- NBW (Buchi) parse / emit -------------------------------------------------


def parse_nbw_hoa(text: str) -> NBW:
    doc = _parse_hoa_document(text)
    acc_name = _acc_tokens_text(doc.acc_name)
    acceptance = _acc_tokens_text(doc.acceptance)
    if acc_name and not acc_name.startswith("Buchi"):
        raise UnsupportedAcceptanceError(
            f"unsupported acceptance {acc_name!r}: this reader takes Buchi input only"
        )
    if acceptance and acceptance.replace(" ", "") != "1Inf(0)":
        raise UnsupportedAcceptanceError(
            f"unsupported acceptance condition {acceptance!r}: expected 1 Inf(0)"
        )
    if not acc_name and not acceptance:
        raise UnsupportedAcceptanceError("missing acceptance declaration")

    symbol_by_index = _symbols_from_aliases(doc)
    declared = {num for num, _, _ in doc.states}
    for num in range(doc.state_count):
        if num not in declared:
            raise InputError(f"state {num} has no State: block")
    names: Dict[int, str] = {}
    finals: List[str] = []
    for num, label, sig in doc.states:
        names[num] = label if label is not None else str(num)
        if any(s != 0 for s in sig):
            raise InputError(f"state {num}: Buchi input uses only acceptance set 0")
        if sig:
            finals.append(names[num])
    transitions = []
    for src, edge_list in doc.edges.items():
        for sym_index, dst, sig in edge_list:
            if sig:
                raise InputError(
                    "transition-based acceptance is not supported on Buchi input"
                )
            transitions.append((names[src], symbol_by_index[sym_index], names[dst]))
    state_names = tuple(names[i] for i in range(doc.state_count))
    if len(set(state_names)) != len(state_names):
        raise InputError("duplicate state names")
    return NBW.make(
        states=state_names,
        alphabet=tuple(symbol_by_index[i] for i in range(len(doc.aps))),
        transitions=transitions,
        initial=tuple(names[i] for i in sorted(set(doc.start))),
        finals=finals,
    )


def _symbols_from_aliases(doc: _HoaDocument) -> Dict[int, str]:
    if len(doc.aliases) != len(doc.aps):
        raise InputError("expected exactly one alias per atomic proposition")
    out: Dict[int, str] = {}
    for _, sym_index in sorted(doc.aliases.items()):
        if sym_index in out:
            raise InputError("two aliases name the same symbol")
        out[sym_index] = doc.aps[sym_index]
    return out


def emit_nbw_hoa(a: NBW) -> str:
    index = {q: i for i, q in enumerate(a.states)}
    sym_index = {s: i for i, s in enumerate(a.alphabet)}
    lines = ["HOA: v1", f"States: {len(a.states)}"]
    for q in sorted(a.initial, key=index.get):
        lines.append(f"Start: {index[q]}")
    lines.append(f"AP: {len(a.alphabet)} " + " ".join(_quote(s) for s in a.alphabet))
    for i in range(len(a.alphabet)):
        lines.append(f"Alias: @s{i} {_one_hot(i, len(a.alphabet))}")
    lines.append("acc-name: Buchi")
    lines.append("Acceptance: 1 Inf(0)")
    lines.append("--BODY--")
    post: Dict[Tuple[str, str], List[str]] = {}
    for src, sym, dst in a.transitions:
        post.setdefault((src, sym), []).append(dst)
    for q in a.states:
        sig = " {0}" if q in a.finals else ""
        lines.append(f"State: {index[q]} {_quote(q)}{sig}")
        for sym in a.alphabet:
            for dst in sorted(post.get((q, sym), []), key=index.get):
                lines.append(f"[@s{sym_index[sym]}] {index[dst]}")
    lines.append("--END--")
    return "\n".join(lines) + "\n"


def _one_hot(i: int, count: int) -> str:
    return "&".join(str(j) if j == i else f"!{j}" for j in range(count))


# -- Rabin emit / parse --------------------------------------------------------


def _rabin_acceptance_line(pair_count: int) -> str:
    if pair_count == 0:
        return "Acceptance: 0 f"
    cond = " | ".join(f"(Fin({2 * i})&Inf({2 * i + 1}))" for i in range(pair_count))
    return f"Acceptance: {2 * pair_count} {cond}"


def emit_rabin(d: Union[DRTW, DRW]) -> str:
    """HOA text for a deterministic Rabin automaton; pair i owns the
    acceptance sets 2i (Fin, rejecting) and 2i+1 (Inf, accepting).  Output
    is a pure function of the automaton, so emission is byte stable."""
    on_transitions = d.acceptance.kind == "transition"
    pairs = d.acceptance.pairs
    lines = ["HOA: v1", f"States: {len(d.payloads)}", f"Start: {d.initial}"]
    lines.append(f"AP: {len(d.alphabet)} " + " ".join(_quote(s) for s in d.alphabet))
    for i in range(len(d.alphabet)):
        lines.append(f"Alias: @s{i} {_one_hot(i, len(d.alphabet))}")
    lines.append(f"acc-name: Rabin {len(pairs)}")
    lines.append(_rabin_acceptance_line(len(pairs)))
    lines.append(
        "properties: deterministic " + ("trans-acc" if on_transitions else "state-acc")
    )
    lines.append("--BODY--")
    sym_index = {s: i for i, s in enumerate(d.alphabet)}
    for sid, payload in enumerate(d.payloads):
        text = payload.render() if hasattr(payload, "render") else str(payload)
        sig = "" if on_transitions else _sig_text(_state_sig(pairs, sid))
        lines.append(f"State: {sid} {_quote(text)}{sig}")
        for sym in d.alphabet:
            dst, _ = d.transitions[(sid, sym)]
            sig = _sig_text(_edge_sig(pairs, (sid, sym))) if on_transitions else ""
            lines.append(f"[@s{sym_index[sym]}] {dst}{sig}")
    lines.append("--END--")
    return "\n".join(lines) + "\n"


def _edge_sig(pairs: Sequence[RabinPair], key) -> Tuple[int, ...]:
    sig = []
    for i, pair in enumerate(pairs):
        if key in pair.rejecting:
            sig.append(2 * i)
        if key in pair.accepting:
            sig.append(2 * i + 1)
    return tuple(sig)


def _state_sig(pairs: Sequence[RabinPair], sid: int) -> Tuple[int, ...]:
    return _edge_sig(pairs, sid)


def _sig_text(sig: Tuple[int, ...]) -> str:
    return " {" + " ".join(str(s) for s in sig) + "}" if sig else ""


def parse_rabin(text: str) -> Union[DRTW, DRW]:
    """Read back a Rabin document we emitted; payloads become the state
    label strings.  Used to show the format carries full acceptance."""
    doc = _parse_hoa_document(text)
    acc_name = _acc_tokens_text(doc.acc_name)
    if not acc_name.startswith("Rabin"):
        raise UnsupportedAcceptanceError(f"expected Rabin acceptance, got {acc_name!r}")
    pair_count = int(acc_name.split()[1])
    if len(doc.start) != 1:
        raise InputError("deterministic automata need exactly one start state")
    symbol_by_index = _symbols_from_aliases(doc)
    alphabet = tuple(symbol_by_index[i] for i in range(len(doc.aps)))
    on_transitions = "state-acc" not in doc.properties

    payloads: List[str] = [""] * doc.state_count
    state_sigs: Dict[int, Tuple[int, ...]] = {}
    for num, label, sig in doc.states:
        payloads[num] = label if label is not None else str(num)
        state_sigs[num] = sig
    transitions = {}
    acc_targets: Dict[int, set] = {}
    rej_targets: Dict[int, set] = {}
    for src, edge_list in doc.edges.items():
        for sym_index_, dst, sig in edge_list:
            sym = symbol_by_index[sym_index_]
            if (src, sym) in transitions:
                raise InputError(f"duplicate edge for state {src} symbol {sym!r}")
            transitions[(src, sym)] = (dst, EMPTY_ANNOTATION)
            target = (src, sym)
            if on_transitions:
                _collect_sig(sig, pair_count, target, acc_targets, rej_targets)
    if not on_transitions:
        for num, sig in state_sigs.items():
            _collect_sig(sig, pair_count, num, acc_targets, rej_targets)
    pairs = tuple(
        RabinPair(
            index=i,
            accepting=frozenset(acc_targets.get(i, ())),
            rejecting=frozenset(rej_targets.get(i, ())),
        )
        for i in range(pair_count)
    )
    kind = "transition" if on_transitions else "state"
    cls = DRTW if on_transitions else DRW
    return cls(
        payloads=tuple(payloads),
        alphabet=alphabet,
        initial=doc.start[0],
        transitions=transitions,
        acceptance=RabinPairSet(kind=kind, pairs=pairs),
    )


def _collect_sig(sig, pair_count, target, acc_targets, rej_targets) -> None:
    for s in sig:
        if s >= 2 * pair_count:
            raise InputError(f"acceptance set {s} out of range")
        if s % 2:
            acc_targets.setdefault(s // 2, set()).add(target)
        else:
            rej_targets.setdefault(s // 2, set()).add(target)


# -- native JSON-lines ---------------------------------------------------------


def emit_nbw_native(a: NBW) -> str:
    state_index = {q: i for i, q in enumerate(a.states)}
    sym_index = {s: i for i, s in enumerate(a.alphabet)}
    header = {
        "format": "nbw",
        "states": list(a.states),
        "alphabet": list(a.alphabet),
        "initial": sorted(a.initial, key=state_index.get),
        "finals": sorted(a.finals, key=state_index.get),
    }
    lines = [json.dumps(header)]
    for src, sym, dst in sorted(
        a.transitions, key=lambda t: (state_index[t[0]], sym_index[t[1]], state_index[t[2]])
    ):
        lines.append(json.dumps({"from": src, "symbol": sym, "to": dst}))
    return "\n".join(lines) + "\n"


def parse_nbw_native(text: str) -> NBW:
    lines = [l for l in text.splitlines()]
    records = []
    for lineno, raw in enumerate(lines, start=1):
        if not raw.strip():
            continue
        try:
            records.append((lineno, json.loads(raw)))
        except json.JSONDecodeError as exc:
            raise ParseError(f"bad JSON: {exc.msg}", lineno, exc.colno) from None
    if not records:
        raise ParseError("empty document", 1, 1)
    lineno, header = records[0]
    if not isinstance(header, dict) or header.get("format") != "nbw":
        raise ParseError('header must set "format": "nbw"', lineno, 1)
    for key in ("states", "alphabet", "initial", "finals"):
        if not isinstance(header.get(key), list):
            raise ParseError(f'header needs a list field "{key}"', lineno, 1)
    states = set(header["states"])
    alphabet = set(header["alphabet"])
    transitions = []
    for lineno, record in records[1:]:
        if not isinstance(record, dict) or set(record) != {"from", "symbol", "to"}:
            raise ParseError('transition lines need "from", "symbol", "to"', lineno, 1)
        if record["from"] not in states or record["to"] not in states:
            raise ParseError("transition endpoint not declared", lineno, 1)
        if record["symbol"] not in alphabet:
            raise ParseError("transition symbol not in alphabet", lineno, 1)
        transitions.append((record["from"], record["symbol"], record["to"]))
    for lineno, key in ((1, "initial"), (1, "finals")):
        for q in header[key]:
            if q not in states:
                raise ParseError(f"{key} state {q!r} not declared", lineno, 1)
    return NBW.make(
        states=header["states"],
        alphabet=header["alphabet"],
        transitions=transitions,
        initial=header["initial"],
        finals=header["finals"],
    )


def parse_nbw(text: str) -> NBW:
    """Auto-detect the input format: HOA documents start with HOA:,
    native documents with a JSON object."""
    stripped = text.lstrip()
    if stripped.startswith("HOA:"):
        return parse_nbw_hoa(text)
    if stripped.startswith("{"):
        return parse_nbw_native(text)
    raise ParseError("unrecognized format: expected HOA: v1 or a JSON header line", 1, 1)
