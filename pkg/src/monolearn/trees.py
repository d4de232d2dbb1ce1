"""Decision trees (deterministic query algorithms) and their JSON / DOT forms.

JSON interchange: internal nodes are ``{"question_mask": int, "on_zero": ..,
"on_one": ..}``, leaves ``{"leaf_table_hex": ".."}``. A truncated subtree
(as in hand-drawn trees that stop before the function is pinned down) is
``{"open": true}``.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Iterator, Union

from ._bits import set_to_str
from .core import MonotoneFn, describe, from_hex, to_hex


@dataclass(frozen=True)
class Leaf:
    function: MonotoneFn


@dataclass(frozen=True)
class Open:
    """A subtree left unspecified."""


@dataclass(frozen=True)
class Node:
    question: int
    on_zero: "DecisionTree"
    on_one: "DecisionTree"

    def child(self, answer: int) -> "DecisionTree":
        return self.on_one if answer else self.on_zero


DecisionTree = Union[Leaf, Node, Open]


def tree_size(tree: DecisionTree) -> int:
    if isinstance(tree, Node):
        return 1 + tree_size(tree.on_zero) + tree_size(tree.on_one)
    return 1


def tree_height(tree: DecisionTree) -> int:
    if isinstance(tree, Node):
        return 1 + max(tree_height(tree.on_zero), tree_height(tree.on_one))
    return 0


def is_complete(tree: DecisionTree) -> bool:
    if isinstance(tree, Node):
        return is_complete(tree.on_zero) and is_complete(tree.on_one)
    return isinstance(tree, Leaf)


def run_tree(tree: DecisionTree, f: MonotoneFn) -> tuple[DecisionTree, int]:
    """Follow f's answers from the root; returns the terminal subtree and the depth."""
    depth = 0
    while isinstance(tree, Node):
        tree = tree.child((f.table >> tree.question) & 1)
        depth += 1
    return tree, depth


def iter_leaves(tree: DecisionTree, path: str = "") -> Iterator[tuple[str, DecisionTree]]:
    """Pre-order (0-branch first) leaves with their answer paths like ``"101"``."""
    if isinstance(tree, Node):
        yield from iter_leaves(tree.on_zero, path + "0")
        yield from iter_leaves(tree.on_one, path + "1")
    else:
        yield path, tree


def to_dict(tree: DecisionTree) -> dict:
    if isinstance(tree, Leaf):
        return {"leaf_table_hex": to_hex(tree.function)}
    if isinstance(tree, Open):
        return {"open": True}
    return {"question_mask": tree.question, "on_zero": to_dict(tree.on_zero),
            "on_one": to_dict(tree.on_one)}


def serialize(tree: DecisionTree) -> str:
    return json.dumps(to_dict(tree), separators=(",", ":"))


class TreeFormatError(ValueError):
    pass


def from_dict(data, n: int) -> DecisionTree:
    if not isinstance(data, dict):
        raise TreeFormatError(f"expected an object, got {type(data).__name__}")
    if "leaf_table_hex" in data:
        try:
            return Leaf(from_hex(data["leaf_table_hex"], n))
        except ValueError as exc:
            raise TreeFormatError(str(exc)) from None
    if data.get("open"):
        return Open()
    try:
        q = data["question_mask"]
        zero, one = data["on_zero"], data["on_one"]
    except KeyError as exc:
        raise TreeFormatError(f"node is missing {exc.args[0]!r}") from None
    if not isinstance(q, int) or not 0 <= q < (1 << n):
        raise TreeFormatError(f"question mask {q!r} out of range for n={n}")
    return Node(q, from_dict(zero, n), from_dict(one, n))


def parse_tree(text: str, n: int) -> DecisionTree:
    """Parse the JSON interchange form. Completeness and reasonableness are not checked here."""
    if not text.strip():
        raise TreeFormatError("empty tree file")
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise TreeFormatError(f"malformed JSON: {exc}") from None
    return from_dict(data, n)


def to_dot(tree: DecisionTree, name: str = "tree") -> str:
    """Graphviz source; the 0 edge of each node is emitted first (drawn left)."""
    lines = [f"digraph {name} {{", "  node [fontname=Helvetica];"]
    counter = [0]

    def emit(t: DecisionTree) -> str:
        ident = f"n{counter[0]}"
        counter[0] += 1
        if isinstance(t, Node):
            lines.append(f'  {ident} [shape=ellipse, label="{set_to_str(t.question)}"];')
            left = emit(t.on_zero)
            right = emit(t.on_one)
            lines.append(f'  {ident} -> {left} [label="0"];')
            lines.append(f'  {ident} -> {right} [label="1"];')
        elif isinstance(t, Leaf):
            lines.append(f'  {ident} [shape=box, label="{describe(t.function)}"];')
        else:
            lines.append(f'  {ident} [shape=box, style=dashed, label="..."];')
        return ident

    emit(tree)
    lines.append("}")
    return "\n".join(lines) + "\n"
