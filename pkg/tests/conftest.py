"""Shared graph fixtures: small generators used across the suites."""

from bwgraphs.fatgraph import FatGraph
from bwgraphs.bw import BWGraph
from bwgraphs.openclosed import OpenClosedGraph


def annulus_generator():
    """Minimal annulus: univalent white joined to an incoming closed leaf."""
    g = FatGraph.from_cycles([[0], [1]], [(0, 1)], leaves=[1])
    return BWGraph(g, white_order=(0,), start=(0,), in_leaves=(1,),
                   out_leaves=(), closed=frozenset({1}))


def suspended_annulus_generator():
    """Degree-1 annulus generator: white with an unlabeled start leaf."""
    g = FatGraph.from_cycles([[0, 1], [2], [3]], [(0, 2), (1, 3)],
                             leaves=[1, 2])
    return BWGraph(g, white_order=(0,), start=(0,), in_leaves=(2,),
                   out_leaves=(), closed=frozenset({2}))


def disk_open_generator():
    """Degenerate corolla: one incoming open leaf on a black vertex."""
    g = FatGraph.from_cycles([[0], [1]], [(0, 1)], leaves=[1])
    return BWGraph(g, white_order=(), start=(), in_leaves=(1,),
                   out_leaves=(), closed=frozenset())


def strip_generator():
    """Two-leaf corolla: incoming open and outgoing open."""
    g = FatGraph.from_cycles([[0, 1], [2], [3]], [(0, 2), (1, 3)],
                             leaves=[1, 2])
    return BWGraph(g, white_order=(), start=(), in_leaves=(1,),
                   out_leaves=(2,), closed=frozenset())


def minimal_annulus_oc():
    """The admissible circle with one edge: in-closed and out-closed leaf."""
    # vertex 0 with sigma (x, a, y, abar); leaves 1 (in) and 2 (out)
    g = FatGraph.from_cycles([[0, 1, 2, 3], [4], [5]],
                             [(1, 3), (0, 4), (2, 5)],
                             leaves=[1, 2])
    return OpenClosedGraph(g, in_leaves=(1,), out_leaves=(2,),
                           closed=frozenset({1, 2}))


def corolla_closed_in():
    g = FatGraph.from_cycles([[0], [1]], [(0, 1)], leaves=[1])
    return OpenClosedGraph(g, in_leaves=(1,), out_leaves=(),
                           closed=frozenset({1}))
