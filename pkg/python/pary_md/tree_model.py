#!/usr/bin/env python
# -*- coding: utf-8 -*-

"""
p-ary labeled tree model.

A tree is an immutable nest of Vertex objects. Every vertex owns exactly
``arity`` slots and each slot is either None (empty) or a child Vertex, so a
child in slot 0 and the same child in slot 1 give different trees. Trees,
forests and decompositions are frozen dataclasses: equal structure means equal
objects and they can be used as set or dict keys.
"""

import logging
from dataclasses import dataclass, field
from typing import Callable, Dict, Iterator, List, NamedTuple, Optional, Sequence, Set, Tuple

from pary_md.errors import AttachmentMismatch, EmptyTree, InvalidTree, ParseError

logger = logging.getLogger(__name__)

EMPTY_SLOT = "_"


@dataclass(frozen=True)
class Vertex:
    """A labeled vertex and its ordered child slots."""

    label: int
    slots: Tuple[Optional["Vertex"], ...]

    def children(self) -> Iterator[Tuple[int, "Vertex"]]:
        """Yield (slot index, child) for every occupied slot."""
        for slot, child in enumerate(self.slots):
            if child is not None:
                yield slot, child

    def is_leaf(self) -> bool:
        return all(child is None for child in self.slots)


def vertex(label: int, *slots: Optional[Vertex]) -> Vertex:
    """Build a vertex from its label and its slots, given positionally."""
    return Vertex(label, tuple(slots))


def leaf(label: int, arity: int) -> Vertex:
    """Build a vertex with all ``arity`` slots empty."""
    return Vertex(label, (None,) * arity)


@dataclass(frozen=True)
class PAryTree:
    """A p-ary labeled tree; ``root`` is None for the empty tree."""

    arity: int
    root: Optional[Vertex] = None

    @classmethod
    def empty(cls, arity: int) -> "PAryTree":
        return cls(arity, None)

    @classmethod
    def of(cls, root: Vertex) -> "PAryTree":
        """Wrap a root vertex, taking the arity from its slot count."""
        return cls(len(root.slots), root)

    @property
    def is_empty(self) -> bool:
        return self.root is None

    def walk(self) -> Iterator[Tuple[Vertex, Optional[Vertex], int]]:
        """Yield (vertex, parent, slot) in preorder; the root has parent None and slot -1."""
        if self.root is None:
            return
        stack: List[Tuple[Vertex, Optional[Vertex], int]] = [(self.root, None, -1)]
        while stack:
            current, parent, slot = stack.pop()
            yield current, parent, slot
            for index in range(len(current.slots) - 1, -1, -1):
                child = current.slots[index]
                if isinstance(child, Vertex):
                    stack.append((child, current, index))

    def labels(self) -> List[int]:
        """Labels in preorder."""
        return [v.label for v, _, _ in self.walk()]

    def size(self) -> int:
        return sum(1 for _ in self.walk())

    def edges(self) -> Iterator[Tuple[int, int, int]]:
        """Yield (parent label, child label, slot) for every edge."""
        for current, parent, slot in self.walk():
            if parent is not None:
                yield parent.label, current.label, slot

    def is_decreasing(self) -> bool:
        return all(child < parent for parent, child, _ in self.edges())

    def __str__(self) -> str:
        return canonical_encode(self)


@dataclass(frozen=True)
class Forest:
    """An unordered collection of non-empty p-ary trees with disjoint labels.

    Components are stored sorted by root label, so two forests with the same
    components compare equal whatever order they were given in.
    """

    arity: int
    components: Tuple[PAryTree, ...] = ()

    def __post_init__(self):
        for component in self.components:
            if component.is_empty:
                raise ValueError("forest components must be non-empty")
            if component.arity != self.arity:
                raise ValueError(
                    f"component arity {component.arity} differs from forest arity {self.arity}"
                )
        ordered = tuple(sorted(self.components, key=lambda c: c.root.label))
        object.__setattr__(self, "components", ordered)

    @classmethod
    def from_roots(cls, arity: int, roots: Sequence[Vertex]) -> "Forest":
        return cls(arity, tuple(PAryTree(arity, r) for r in roots))

    def roots(self) -> List[int]:
        return [c.root.label for c in self.components]

    def labels(self) -> List[int]:
        return [label for c in self.components for label in c.labels()]

    def size(self) -> int:
        return sum(c.size() for c in self.components)

    def __len__(self) -> int:
        return len(self.components)

    def canonical(self) -> str:
        """Text form ``[tree;tree;...]`` with components in root-label order."""
        return "[" + ";".join(canonical_encode(c) for c in self.components) + "]"


class Attachment(NamedTuple):
    """Where a forest root hung in the original tree."""

    leaf: int
    parent: int
    slot: int


@dataclass(frozen=True)
class Decomposition:
    """A tree split into its Y-part (MD subtree plus increasing leaves) and Z-part forest."""

    y_part: PAryTree
    z_part: Forest
    attachments: Tuple[Attachment, ...] = field(default=())

    @property
    def attachment_map(self) -> Dict[int, Tuple[int, int]]:
        """Leaf label -> (parent label, slot index)."""
        return {a.leaf: (a.parent, a.slot) for a in self.attachments}


def validate(tree: PAryTree) -> Tuple[bool, List[str]]:
    """Check the structural invariants of a tree.

    Args:
        tree: Tree to check

    Returns:
        (ok, diagnostics); ok is True exactly when diagnostics is empty
    """
    diagnostics: List[str] = []
    if not isinstance(tree.arity, int) or tree.arity < 2:
        diagnostics.append(f"arity must be an integer >= 2, got {tree.arity!r}")
        return False, diagnostics
    if tree.root is None:
        return True, diagnostics
    if not isinstance(tree.root, Vertex):
        return False, [f"root is not a vertex: {tree.root!r}"]

    seen_labels: Set[int] = set()
    seen_vertices: Set[int] = set()
    stack: List[Vertex] = [tree.root]
    while stack:
        current = stack.pop()
        if id(current) in seen_vertices:
            diagnostics.append(f"vertex {current.label} is referenced by more than one slot")
            continue
        seen_vertices.add(id(current))

        label = current.label
        if isinstance(label, bool) or not isinstance(label, int) or label <= 0:
            diagnostics.append(f"label {label!r} is not a positive integer")
        elif label in seen_labels:
            diagnostics.append(f"duplicate label {label}")
        else:
            seen_labels.add(label)

        if len(current.slots) != tree.arity:
            diagnostics.append(
                f"vertex {label} has {len(current.slots)} slots, expected {tree.arity}"
            )
        for slot, child in enumerate(current.slots):
            if child is None:
                continue
            if not isinstance(child, Vertex):
                diagnostics.append(f"slot {slot} of vertex {label} holds {child!r}")
                continue
            stack.append(child)

    return not diagnostics, diagnostics


def _require_root(tree: PAryTree) -> Vertex:
    if tree.root is None:
        raise EmptyTree("operation is undefined on the empty tree")
    return tree.root


# marker returned by a rebuild step to walk into the child instead of replacing it
_DESCEND = object()

RebuildStep = Callable[[Vertex, int, Vertex], object]


def _rebuild(root: Vertex, step: RebuildStep) -> Vertex:
    """Copy a tree top-down without recursion.

    ``step(parent, slot, child)`` is called in preorder for every occupied slot
    reached; it returns _DESCEND to copy the child's own slots, or the value to
    store in the slot instead.
    """
    stack: List[Tuple[Vertex, List[Optional[Vertex]]]] = [(root, [])]
    while True:
        current, built = stack[-1]
        index = len(built)
        if index == len(current.slots):
            stack.pop()
            rebuilt = Vertex(current.label, tuple(built))
            if not stack:
                return rebuilt
            stack[-1][1].append(rebuilt)
            continue
        child = current.slots[index]
        if child is None:
            built.append(None)
            continue
        result = step(current, index, child)
        if result is _DESCEND:
            stack.append((child, []))
        else:
            built.append(result)


def _keep_decreasing(parent: Vertex, slot: int, child: Vertex) -> object:
    return _DESCEND if child.label < parent.label else None


def md_subtree(tree: PAryTree) -> PAryTree:
    """Maximal subtree from the root in which every edge is decreasing."""
    root = _require_root(tree)
    return PAryTree(tree.arity, _rebuild(root, _keep_decreasing))


def md_size(tree: PAryTree) -> int:
    """Number of vertices of md_subtree(tree), counted without building it."""
    root = _require_root(tree)
    count = 0
    stack = [root]
    while stack:
        current = stack.pop()
        count += 1
        stack.extend(
            child for child in current.slots
            if child is not None and child.label < current.label
        )
    return count


def increasing_leaves(tree: PAryTree) -> List[Attachment]:
    """Children of MD vertices whose label exceeds their parent's, in preorder."""
    root = _require_root(tree)
    found: List[Attachment] = []
    stack = [root]
    while stack:
        current = stack.pop()
        for slot, child in current.children():
            if child.label > current.label:
                found.append(Attachment(child.label, current.label, slot))
        stack.extend(
            child for _, child in reversed(list(current.children()))
            if child.label < current.label
        )
    return found


def is_y_tree(tree: PAryTree) -> bool:
    """True when every vertex outside the MD subtree is a leaf hanging off it."""
    root = _require_root(tree)
    stack = [root]
    while stack:
        current = stack.pop()
        for _, child in current.children():
            if child.label < current.label:
                stack.append(child)
            elif not child.is_leaf():
                return False
    return True


def decompose(tree: PAryTree) -> Decomposition:
    """Split a tree into its Y-part and the forest hanging below the increasing leaves."""
    root = _require_root(tree)
    arity = tree.arity
    components: List[Vertex] = []
    attachments: List[Attachment] = []

    def split(current: Vertex, slot: int, child: Vertex) -> object:
        if child.label < current.label:
            return _DESCEND
        # the leaf stays in its slot; its subtree moves to the forest
        components.append(child)
        attachments.append(Attachment(child.label, current.label, slot))
        return leaf(child.label, arity)

    y_root = _rebuild(root, split)
    decomposition = Decomposition(
        y_part=PAryTree(arity, y_root),
        z_part=Forest.from_roots(arity, components),
        attachments=tuple(sorted(attachments)),
    )
    logger.debug(
        f"Decomposed tree of size {tree.size()} into Y-part of size "
        f"{decomposition.y_part.size()} and {len(components)} components"
    )
    return decomposition


def recompose(d: Decomposition) -> PAryTree:
    """Graft every Z-part component back onto its increasing leaf; inverse of decompose."""
    y_root = _require_root(d.y_part)
    if d.z_part.arity != d.y_part.arity:
        raise AttachmentMismatch(
            f"forest arity {d.z_part.arity} differs from Y-part arity {d.y_part.arity}"
        )

    components: Dict[int, Vertex] = {}
    for component in d.z_part.components:
        if component.root.label in components:
            raise AttachmentMismatch(f"two components share root {component.root.label}")
        components[component.root.label] = component.root

    attachment_map = d.attachment_map
    if set(attachment_map) != set(components):
        raise AttachmentMismatch(
            f"attachment map covers {sorted(attachment_map)} but forest roots are {sorted(components)}"
        )

    grafted: Set[int] = set()

    def graft(current: Vertex, slot: int, child: Vertex) -> object:
        if child.label < current.label:
            return _DESCEND
        component = components.get(child.label)
        if component is None:
            raise AttachmentMismatch(
                f"increasing leaf {child.label} under {current.label} has no forest component"
            )
        if not child.is_leaf():
            raise AttachmentMismatch(f"increasing leaf {child.label} has children in the Y-part")
        if attachment_map[child.label] != (current.label, slot):
            raise AttachmentMismatch(
                f"component {child.label} is recorded at {attachment_map[child.label]}, "
                f"found at {(current.label, slot)}"
            )
        grafted.add(child.label)
        return component

    root = _rebuild(y_root, graft)
    missing = set(components) - grafted
    if missing:
        raise AttachmentMismatch(f"forest roots {sorted(missing)} are not increasing leaves of the Y-part")
    return PAryTree(d.y_part.arity, root)


def canonical_encode(tree: PAryTree) -> str:
    """Canonical text: ``_`` for an empty slot, ``(label,slot,...,slot)`` for a vertex."""
    parts: List[str] = []
    stack: List[object] = [tree.root]
    while stack:
        item = stack.pop()
        if isinstance(item, str):
            parts.append(item)
        elif item is None:
            parts.append(EMPTY_SLOT)
        else:
            parts.append(f"({item.label}")
            stack.append(")")
            for child in reversed(item.slots):
                stack.append(child)
                stack.append(",")
    return "".join(parts)


class _TreeParser:
    """Parser for the canonical tree grammar, driven by an explicit stack of open vertices."""

    def __init__(self, text: str, arity: Optional[int]):
        self.text = text
        self.pos = 0
        self.arity = arity

    def _peek(self) -> str:
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def _expect(self, char: str) -> None:
        if self._peek() != char:
            found = repr(self._peek()) if self._peek() else "end of input"
            raise ParseError(f"expected {char!r}, found {found}", self.pos)
        self.pos += 1

    def _label(self) -> int:
        start = self.pos
        while "0" <= self._peek() <= "9":
            self.pos += 1
        digits = self.text[start:self.pos]
        if not digits:
            raise ParseError("expected a decimal label", start)
        if len(digits) > 1 and digits[0] == "0":
            raise ParseError("label has a leading zero", start)
        return int(digits)

    def _close(self, label: int, slots: List[Optional[Vertex]]) -> Vertex:
        close = self.pos
        self._expect(")")
        if self.arity is None:
            self.arity = len(slots)
        if len(slots) != self.arity:
            raise ParseError(f"vertex {label} has {len(slots)} slots, expected {self.arity}", close)
        return Vertex(label, tuple(slots))

    def parse_tree(self) -> Optional[Vertex]:
        open_vertices: List[Tuple[int, List[Optional[Vertex]]]] = []
        while True:
            if self._peek() == EMPTY_SLOT:
                self.pos += 1
                done: Optional[Vertex] = None
            else:
                self._expect("(")
                open_vertices.append((self._label(), []))
                if self._peek() == ",":
                    self.pos += 1
                    continue
                done = self._close(*open_vertices.pop())

            while open_vertices:
                open_vertices[-1][1].append(done)
                if self._peek() == ",":
                    self.pos += 1
                    break
                done = self._close(*open_vertices.pop())
            else:
                return done

    def parse(self) -> PAryTree:
        root = self.parse_tree()
        if self.pos != len(self.text):
            raise ParseError("unexpected trailing characters", self.pos)
        if self.arity is None:
            raise ParseError("cannot infer the arity of an empty tree; pass it explicitly", 0)
        return PAryTree(self.arity, root)


def canonical_decode(text: str, arity: Optional[int] = None) -> PAryTree:
    """Parse canonical tree text.

    Args:
        text: Canonical form, without whitespace
        arity: Expected arity; inferred from the first vertex when omitted

    Returns:
        The parsed tree

    Raises:
        ParseError: On malformed text, with the offending position
        InvalidTree: If the text parses but breaks a tree invariant
    """
    tree = _TreeParser(text, arity).parse()
    ok, diagnostics = validate(tree)
    if not ok:
        raise InvalidTree(diagnostics)
    return tree
