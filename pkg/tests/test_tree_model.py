#!/usr/bin/env python
# -*- coding: utf-8 -*-

"""Tests for the p-ary tree model: validation, MD subtree, decomposition, canonical text."""

import pytest
from hypothesis import given, settings, strategies as st

from pary_md.enumeration import enumerate_trees
from pary_md.errors import AttachmentMismatch, EmptyTree, InvalidTree, ParseError
from pary_md.sample import sample_tree
from pary_md.tree_model import (
    Attachment,
    Decomposition,
    Forest,
    PAryTree,
    canonical_decode,
    canonical_encode,
    decompose,
    increasing_leaves,
    is_y_tree,
    leaf,
    md_size,
    md_subtree,
    recompose,
    validate,
    vertex,
)


def test_validate_single_vertex():
    ok, diagnostics = validate(PAryTree.of(leaf(1, 2)))
    assert ok
    assert diagnostics == []


def test_validate_reports_duplicate_label():
    tree = PAryTree.of(vertex(3, leaf(3, 2), None))
    ok, diagnostics = validate(tree)
    assert not ok
    assert any("duplicate label 3" in d for d in diagnostics)


def test_validate_eleven_vertex_tree(ternary_tree):
    assert validate(ternary_tree) == (True, [])
    assert ternary_tree.size() == 11
    assert ternary_tree.arity == 3


def test_validate_reports_slot_count_and_bad_labels():
    tree = PAryTree(3, vertex(2, leaf(0, 3), None))
    ok, diagnostics = validate(tree)
    assert not ok
    assert any("has 2 slots, expected 3" in d for d in diagnostics)
    assert any("label 0" in d for d in diagnostics)


def test_validate_reports_shared_vertex():
    shared = leaf(1, 2)
    ok, diagnostics = validate(PAryTree.of(vertex(5, shared, shared)))
    assert not ok
    assert any("more than one slot" in d for d in diagnostics)


def test_validate_empty_tree_and_bad_arity():
    assert validate(PAryTree.empty(2)) == (True, [])
    ok, _ = validate(PAryTree(1, None))
    assert not ok


def test_slot_position_matters():
    left = PAryTree.of(vertex(2, leaf(1, 2), None))
    right = PAryTree.of(vertex(2, None, leaf(1, 2)))
    assert left != right
    assert len({left, right}) == 2


def test_md_subtree_of_ternary_tree(ternary_tree):
    md = md_subtree(ternary_tree)
    assert sorted(md.labels()) == [1, 2, 3, 4, 8, 9]
    assert canonical_encode(md) == "(9,(8,_,(1,_,_,_),_),(2,_,_,_),(4,_,(3,_,_,_),_))"
    assert md_size(ternary_tree) == 6
    # the original is untouched
    assert ternary_tree.size() == 11


def test_md_subtree_of_single_vertex():
    tree = PAryTree.of(leaf(4, 3))
    assert md_subtree(tree) == tree
    assert md_size(tree) == 1


def test_md_subtree_of_decreasing_tree_is_whole_tree():
    tree = canonical_decode("(5,(3,(1,_,_),_),(4,_,(2,_,_)))")
    assert tree.is_decreasing()
    assert md_subtree(tree) == tree
    assert md_size(tree) == 5


def test_md_size_when_root_is_minimum():
    tree = canonical_decode("(1,(2,_,_),(3,_,_))")
    assert md_size(tree) == 1


def test_vertex_one_can_sit_outside_the_md_subtree():
    tree = canonical_decode("(2,(3,(1,_,_),_),_)")
    assert sorted(md_subtree(tree).labels()) == [2]
    assert not is_y_tree(tree)


def test_increasing_leaves_in_preorder(ternary_tree):
    assert increasing_leaves(ternary_tree) == [
        Attachment(7, 1, 0),
        Attachment(10, 1, 1),
        Attachment(6, 4, 2),
    ]
    assert increasing_leaves(canonical_decode("(3,(2,_,_),(1,_,_))")) == []


def test_statistics_reject_empty_tree():
    empty = PAryTree.empty(2)
    for operation in (md_subtree, md_size, decompose, increasing_leaves):
        with pytest.raises(EmptyTree):
            operation(empty)


def test_decompose_ternary_tree(ternary_tree):
    parts = decompose(ternary_tree)
    assert sorted(parts.y_part.labels()) == [1, 2, 3, 4, 6, 7, 8, 9, 10]
    assert parts.z_part.roots() == [6, 7, 10]
    assert sorted(parts.z_part.labels()) == [5, 6, 7, 10, 11]
    assert canonical_encode(parts.z_part.components[0]) == "(6,(11,_,_,_),_,(5,_,_,_))"
    assert parts.attachments == (
        Attachment(6, 4, 2),
        Attachment(7, 1, 0),
        Attachment(10, 1, 1),
    )
    assert parts.attachment_map[10] == (1, 1)
    assert md_subtree(parts.y_part) == md_subtree(ternary_tree)
    assert is_y_tree(parts.y_part)
    assert not is_y_tree(ternary_tree)


def test_decompose_decreasing_tree():
    tree = canonical_decode("(3,(2,_,_),(1,_,_))")
    parts = decompose(tree)
    assert parts.y_part == tree
    assert len(parts.z_part) == 0


@pytest.mark.parametrize("p", [2, 3, 4])
def test_decompose_star_rooted_at_one(p):
    tree = PAryTree.of(vertex(1, *(leaf(label, p) for label in range(2, p + 2))))
    parts = decompose(tree)
    assert parts.y_part == tree
    assert md_size(tree) == 1
    assert len(parts.z_part) == p
    assert all(component.size() == 1 for component in parts.z_part.components)


def test_recompose_round_trip_ternary_tree(ternary_tree):
    assert recompose(decompose(ternary_tree)) == ternary_tree


def test_recompose_single_vertex():
    parts = Decomposition(PAryTree.of(leaf(1, 2)), Forest(2, ()))
    assert recompose(parts) == PAryTree.of(leaf(1, 2))


@pytest.mark.parametrize("p,n", [(2, 5), (2, 6), (3, 4), (3, 5)])
def test_recompose_inverts_decompose_exhaustively(p, n, budget):
    for tree in enumerate_trees(p, range(1, n + 1), budget):
        assert recompose(decompose(tree)) == tree


def test_recompose_rejects_missing_component(ternary_tree):
    parts = decompose(ternary_tree)
    broken = Decomposition(
        parts.y_part,
        Forest(3, parts.z_part.components[1:]),
        parts.attachments[1:],
    )
    with pytest.raises(AttachmentMismatch):
        recompose(broken)


def test_recompose_rejects_wrong_attachment(ternary_tree):
    parts = decompose(ternary_tree)
    moved = tuple(
        Attachment(a.leaf, a.parent, 0) if a.leaf == 6 else a for a in parts.attachments
    )
    with pytest.raises(AttachmentMismatch):
        recompose(Decomposition(parts.y_part, parts.z_part, moved))


def test_recompose_rejects_component_without_leaf():
    y_part = PAryTree.of(vertex(2, leaf(1, 2), None))
    z_part = Forest.from_roots(2, [leaf(5, 2)])
    with pytest.raises(AttachmentMismatch):
        recompose(Decomposition(y_part, z_part, (Attachment(5, 2, 1),)))


def test_forest_equality_ignores_component_order():
    a = PAryTree.of(vertex(2, leaf(4, 2), None))
    b = PAryTree.of(vertex(1, None, leaf(3, 2)))
    assert Forest(2, (a, b)) == Forest(2, (b, a))
    assert Forest(2, (a, b)).roots() == [1, 2]
    assert Forest(2, (a, b)).canonical() == "[(1,_,(3,_,_));(2,(4,_,_),_)]"


def test_forest_rejects_mixed_arity():
    with pytest.raises(ValueError):
        Forest(2, (PAryTree.of(leaf(1, 3)),))


def test_md_properties_over_all_small_trees(budget):
    for tree in enumerate_trees(2, range(1, 6), budget):
        md = md_subtree(tree)
        md_labels = set(md.labels())
        assert md_subtree(md) == md
        assert md.is_decreasing()
        if is_y_tree(tree):
            assert 1 in md_labels
        for parent, child, _ in tree.edges():
            if parent in md_labels and child not in md_labels:
                assert child > parent

        parts = decompose(tree)
        z_labels = parts.z_part.labels()
        assert sorted(list(md_labels) + z_labels) == sorted(tree.labels())
        assert len(parts.z_part) == parts.y_part.size() - md_size(tree)


def test_encode_single_vertex():
    assert canonical_encode(PAryTree.of(leaf(1, 2))) == "(1,_,_)"
    assert canonical_encode(PAryTree.empty(2)) == "_"


def test_decode_seven_vertex_ternary_tree():
    text = "(9,(8,(1,_,_,_),_,_),(2,_,_,_),(4,(3,_,_,_),(6,_,_,_),_))"
    tree = canonical_decode(text)
    assert tree.arity == 3
    assert tree.size() == 7
    assert canonical_encode(tree) == text


def test_round_trip_all_binary_trees_on_four_labels(budget):
    encodings = set()
    for tree in enumerate_trees(2, range(1, 5), budget):
        text = canonical_encode(tree)
        assert canonical_decode(text) == tree
        encodings.add(text)
    assert len(encodings) == 336


@pytest.mark.parametrize(
    "text,position",
    [
        ("(1,_", 4),
        ("(1,_,_)x", 7),
        ("(01,_,_)", 1),
        ("(,_,_)", 1),
        ("[1,_,_]", 0),
        ("", 0),
        ("(\u00b2,_,_)", 1),
        ("(\uff11,_,_)", 1),
        ("(1,\u0661,_)", 3),
    ],
)
def test_decode_reports_error_position(text, position):
    with pytest.raises(ParseError) as excinfo:
        canonical_decode(text)
    assert excinfo.value.position == position


def test_decode_checks_arity():
    with pytest.raises(ParseError) as excinfo:
        canonical_decode("(1,_,_,_)", arity=2)
    assert excinfo.value.position == 8
    with pytest.raises(ParseError):
        canonical_decode("(1,(2,_,_,_),_)")


def _deep_tree() -> PAryTree:
    """2001 vertices: a decreasing path 2000 > ... > 501, then 2001 below 501 carrying the path 500 > ... > 1."""
    node = None
    for label in range(1, 501):
        node = vertex(label, node, None)
    node = vertex(2001, None, node)
    for label in range(501, 2001):
        node = vertex(label, node, None) if label % 2 else vertex(label, None, node)
    return PAryTree(2, node)


def test_deep_tree_round_trips_without_recursion():
    tree = _deep_tree()
    text = canonical_encode(tree)
    decoded = canonical_decode(text)
    assert canonical_encode(decoded) == text
    assert decoded.size() == 2001

    md = md_subtree(decoded)
    assert md.size() == md_size(decoded) == 1500
    assert md.is_decreasing()

    parts = decompose(decoded)
    assert parts.attachments == (Attachment(2001, 501, 0),)
    assert parts.z_part.size() == 501
    assert parts.y_part.size() == 1501
    assert is_y_tree(parts.y_part)
    assert canonical_encode(recompose(parts)) == text


def test_decode_empty_tree_needs_arity():
    assert canonical_decode("_", arity=3) == PAryTree.empty(3)
    with pytest.raises(ParseError):
        canonical_decode("_")


def test_decode_rejects_duplicate_labels():
    with pytest.raises(InvalidTree) as excinfo:
        canonical_decode("(3,(3,_,_),_)")
    assert any("duplicate" in d for d in excinfo.value.diagnostics)


@settings(max_examples=50, deadline=None)
@given(
    p=st.integers(2, 5),
    n=st.integers(1, 30),
    seed=st.integers(0, 2 ** 64 - 1),
)
def test_decode_inverts_encode_on_sampled_trees(p, n, seed):
    tree = sample_tree(p, n, seed)
    assert canonical_decode(canonical_encode(tree)) == tree
    assert recompose(decompose(tree)) == tree
