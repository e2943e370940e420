"""Shared graph fixtures."""

import json
import os

import pytest

from feyncut.core.graph import Graph


def make_triangle(masses=None) -> Graph:
    """Three-point one-loop triangle: e1 joins vertices 0-1, e2 1-2, e3 2-0."""
    return Graph.from_edges([(0, 1), (1, 2), (2, 0)], legs=[0, 1, 2], masses=masses)


def make_bubble(masses=None) -> Graph:
    """Four-point one-loop bubble with two legs at each vertex."""
    return Graph.from_edges([(0, 1), (0, 1)], legs=[0, 0, 1, 1], masses=masses)


def make_dunce(masses=None) -> Graph:
    """Dunce's cap: e1 a-c, e2 a-b, e3 and e4 b-c; legs 1, 2 at a, 3 at b, 4 at c."""
    return Graph.from_edges([(0, 2), (0, 1), (1, 2), (1, 2)], legs=[0, 0, 1, 2], masses=masses)


def make_self_loop(masses=None) -> Graph:
    """Two-point tadpole: one self-loop at a four-valent vertex."""
    return Graph.from_edges([(0, 0)], legs=[0, 0], masses=masses)


@pytest.fixture
def triangle() -> Graph:
    return make_triangle()


@pytest.fixture
def bubble() -> Graph:
    return make_bubble()


@pytest.fixture
def dunce() -> Graph:
    return make_dunce()


@pytest.fixture
def self_loop() -> Graph:
    return make_self_loop()


@pytest.fixture
def sunset() -> Graph:
    """Two-point two-loop sunset with three parallel edges."""
    return Graph.from_edges([(0, 1), (0, 1), (0, 1)], legs=[0, 1])


@pytest.fixture
def graph_file(tmp_path):
    """Write a graph description to a JSON file and return its path."""

    def write(graph_or_description, name: str = "graph.json") -> str:
        description = (
            graph_or_description
            if isinstance(graph_or_description, dict)
            else graph_or_description.to_description()
        )
        path = os.path.join(str(tmp_path), name)
        with open(path, "w") as f:
            json.dump(description, f)
        return path

    return write
