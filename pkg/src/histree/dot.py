"""Graphviz DOT rendering for automata and tree payloads."""

from __future__ import annotations

from typing import Dict, List, Tuple, Union

from .automata import DRTW, DRW, NBW, TransitionAnnotation
from .determinize import EnrichedHistoryTree, HistoryTree
from .errors import InputError
from .trees import name_str


def _q(text: str) -> str:
    escaped = text.replace("\\", "\\\\").replace('"', '\\"').replace("\n", "\\n")
    return '"' + escaped + '"'


def _marks(ann: TransitionAnnotation) -> str:
    parts = [f"⊕{i}" for i in sorted(ann.accepting)]
    parts += [f"⊖{i}" for i in sorted(ann.unstable)]
    return " ".join(parts)


def emit_dot(obj: Union[NBW, DRTW, DRW, HistoryTree, EnrichedHistoryTree]) -> str:
    if isinstance(obj, NBW):
        return _nbw_dot(obj)
    if isinstance(obj, (DRTW, DRW)):
        return _rabin_dot(obj)
    if isinstance(obj, EnrichedHistoryTree):
        return _tree_dot(obj.tree)
    if isinstance(obj, HistoryTree):
        return _tree_dot(obj)
    raise InputError(f"cannot render {type(obj).__name__} as DOT")


def _nbw_dot(a: NBW) -> str:
    index = {q: i for i, q in enumerate(a.states)}
    lines = ["digraph nbw {", "  rankdir=LR;"]
    for q in a.states:
        shape = "doublecircle" if q in a.finals else "circle"
        lines.append(f"  n{index[q]} [label={_q(q)} shape={shape}];")
    for k, q in enumerate(sorted(a.initial, key=index.get)):
        lines.append(f"  init{k} [shape=point];")
        lines.append(f"  init{k} -> n{index[q]};")
    merged: Dict[Tuple[str, str], List[str]] = {}
    for src, sym, dst in sorted(a.transitions, key=lambda t: (index[t[0]], index[t[2]], t[1])):
        merged.setdefault((src, dst), []).append(sym)
    for (src, dst), syms in merged.items():
        lines.append(f"  n{index[src]} -> n{index[dst]} [label={_q(','.join(syms))}];")
    lines.append("}")
    return "\n".join(lines) + "\n"


def _rabin_dot(d: Union[DRTW, DRW]) -> str:
    lines = ["digraph rabin {", "  rankdir=LR;"]
    for sid, payload in enumerate(d.payloads):
        text = payload.render() if hasattr(payload, "render") else str(payload)
        tree = payload.tree if isinstance(payload, EnrichedHistoryTree) else payload
        sinkish = isinstance(tree, HistoryTree) and tree.is_sink
        style = " style=dashed" if sinkish else ""
        lines.append(f"  n{sid} [label={_q(text)} shape=box{style}];")
    lines.append("  init [shape=point];")
    lines.append(f"  init -> n{d.initial};")
    for sid in range(len(d.payloads)):
        for sym in d.alphabet:
            dst, ann = d.transitions[(sid, sym)]
            label = sym if ann.empty else f"{sym} {_marks(ann)}"
            lines.append(f"  n{sid} -> n{dst} [label={_q(label)}];")
    lines.append("}")
    return "\n".join(lines) + "\n"


def _tree_dot(tree: HistoryTree) -> str:
    lines = ["digraph tree {"]
    if tree.is_sink:
        lines.append('  sink [label="sink" shape=box style=dashed];')
        lines.append("}")
        return "\n".join(lines) + "\n"
    order = {name: k for k, (name, _) in enumerate(tree.entries)}
    for name, label in tree.entries:
        text = f"{name_str(name)}\n{{{','.join(sorted(label))}}}"
        if tree.id_map is not None:
            text += f" {tree.id_map[name]}"
        lines.append(f"  n{order[name]} [label={_q(text)} shape=ellipse];")
    for name, _ in tree.entries:
        if name:
            lines.append(f"  n{order[name[:-1]]} -> n{order[name]};")
    lines.append("}")
    return "\n".join(lines) + "\n"
