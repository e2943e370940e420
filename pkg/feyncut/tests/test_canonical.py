"""Tests for canonical forms and automorphism counts."""

from unittest.mock import patch

import pynauty
import pytest

from feyncut.core.canonical import (
    ColoredMultigraph,
    encode_graph,
    automorphism_count,
    canonical_graph,
    canonical_key,
)
from feyncut.core.graph import Graph


class TestAutomorphisms:
    """Test cases for half-edge automorphism counts."""

    @pytest.mark.parametrize("name, labelled, expected", [
        ('triangle', True, 1),
        ('triangle', False, 6),
        ('bubble', True, 2),
        ('bubble', False, 16),
        ('dunce', True, 2),
        ('self_loop', True, 2),
        ('self_loop', False, 4),
        ('sunset', True, 6),
    ])
    def test_counts(self, request, name, labelled, expected):
        """Test automorphism counts with fixed and with free legs."""
        graph = request.getfixturevalue(name)
        assert automorphism_count(graph, labelled=labelled) == expected

    def test_square_node_symmetries(self):
        """Test that an undecorated 4-cycle has the dihedral group of order 8."""
        square = ColoredMultigraph('x', ['n'] * 4, [(0, 1, 'e'), (1, 2, 'e'), (2, 3, 'e'), (3, 0, 'e')])
        assert square.canonical_form().automorphisms == 8

    def test_parallel_links_permute(self):
        """Test that parallel links of one decoration are interchangeable."""
        double = ColoredMultigraph('x', ['a', 'b'], [(0, 1, 'e'), (0, 1, 'e'), (0, 1, 'f')])
        assert double.canonical_form().automorphisms == 2

    def test_counts_come_from_nauty(self, sunset):
        """Test that the group size is read from the nauty automorphism group."""
        with patch('feyncut.core.canonical.pynauty.autgrp', wraps=pynauty.autgrp) as spy:
            encode_graph(sunset).canonical_form()
            spy.assert_called_once()

    def test_empty_structure(self):
        """Test that the empty multigraph has the trivial group."""
        assert ColoredMultigraph('x', [], []).canonical_form().automorphisms == 1


class TestCanonicalKeys:
    """Test cases for isomorphism-invariant keys."""

    def test_edge_order_does_not_matter(self, dunce):
        """Test that relisting edges gives the same key."""
        shuffled = Graph.from_edges([(1, 2), (0, 2), (1, 2), (0, 1)], legs=[0, 0, 1, 2])
        assert canonical_key(shuffled) == canonical_key(dunce)

    def test_leg_labels_matter_when_labelled(self, dunce):
        """Test that moving a leg label changes only the labelled key."""
        relabelled = Graph.from_edges([(0, 2), (0, 1), (1, 2), (1, 2)], legs=[0, 1, 0, 2])
        assert canonical_key(relabelled) != canonical_key(dunce)
        assert canonical_key(relabelled, labelled=False) == canonical_key(dunce, labelled=False)

    def test_masses_distinguish(self, bubble):
        """Test that a massive edge changes the key."""
        massive = Graph.from_edges([(0, 1), (0, 1)], legs=[0, 0, 1, 1], masses={0: 'm'})
        assert canonical_key(massive) != canonical_key(bubble)

    def test_labelled_and_free_keys_differ(self, triangle):
        """Test that the two key kinds never collide."""
        assert canonical_key(triangle, labelled=True) != canonical_key(triangle, labelled=False)

    def test_canonical_graph_is_isomorphic(self, dunce):
        """Test that the canonical representative has the same key."""
        assert canonical_key(canonical_graph(dunce)) == canonical_key(dunce)

    def test_canonical_graph_idempotent(self, dunce):
        """Test that canonicalizing twice changes nothing."""
        once = canonical_graph(dunce)
        assert canonical_graph(once) == once
