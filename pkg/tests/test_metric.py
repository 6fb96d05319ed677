import random
from fractions import Fraction

import pytest

from bwgraphs.fatgraph import FatGraph
from bwgraphs.metric import (
    CycleLengthNotOne, DegenerateCap, LeafNotClosedIncoming,
    MetricAdmissibleGraph, compose, glue_closed, glue_open,
    incoming_cycle_length, normalize, validate_metric,
)
from bwgraphs.openclosed import (
    CountMismatch, OpenClosedGraph, admissible_cycles, compose_types,
    oc_canonical, topological_type,
)
from conftest import minimal_annulus_oc


def unit_metric(oc):
    """Lengths: 1 everywhere except admissible circles, split evenly."""
    lengths = {e: Fraction(1) for e in oc.graph.edges()}
    for cyc in admissible_cycles(oc):
        n = len(cyc.steps)
        for h in cyc.steps:
            lengths[oc.graph.edge_of(h)] = Fraction(1, n)
    return MetricAdmissibleGraph.make(oc, lengths)


def minimal_annulus_metric():
    return unit_metric(minimal_annulus_oc())


def two_vertex_annulus(split=(Fraction(1, 2), Fraction(1, 2))):
    """Admissible circle with two edges; inner leaf on the far vertex.

    v0 carries the admissible leaf between its circle half edges; v1 carries
    the spoke to the incoming closed leaf.
    """
    # v0: (a1=0, y=1, b1=2); v1: (p=3, a2=4, b2=5); out leaf 2, in leaf 3
    g = FatGraph.from_cycles(
        [[0, 1, 2], [3, 4, 5], [6], [7]],
        [(0, 5), (4, 2), (1, 6), (3, 7)],
        leaves=[2, 3])
    oc = OpenClosedGraph(g, in_leaves=(3,), out_leaves=(2,),
                         closed=frozenset({2, 3}))
    lengths = {e: Fraction(1) for e in g.edges()}
    lengths[g.edge_of(0)] = split[0]
    lengths[g.edge_of(2)] = split[1]
    return MetricAdmissibleGraph.make(oc, lengths)


class TestValidate:
    def test_minimal_annulus(self):
        validate_metric(minimal_annulus_metric())

    def test_three_edge_circle(self):
        from bwgraphs.openclosed import l_graph
        oc = l_graph(3)
        lengths = {e: Fraction(1) for e in oc.graph.edges()}
        cyc = admissible_cycles(oc)[0]
        fracs = [Fraction(1, 2), Fraction(1, 4), Fraction(1, 4)]
        for h, f in zip(cyc.steps, fracs):
            lengths[oc.graph.edge_of(h)] = f
        validate_metric(MetricAdmissibleGraph.make(oc, lengths))

    def test_bad_cycle_sum(self):
        from bwgraphs.openclosed import l_graph
        oc = l_graph(3)
        lengths = {e: Fraction(1) for e in oc.graph.edges()}
        cyc = admissible_cycles(oc)[0]
        for h in cyc.steps:
            lengths[oc.graph.edge_of(h)] = Fraction(1, 2)
        with pytest.raises(CycleLengthNotOne):
            validate_metric(MetricAdmissibleGraph.make(oc, lengths))


class TestNormalize:
    def test_positive_identity(self):
        m = minimal_annulus_metric()
        assert normalize(m) == m

    def test_zero_edge_collapse(self):
        from bwgraphs.openclosed import l_graph, mixed_degree
        oc = l_graph(2)
        # push one labeled leaf off the circle via a zero-length edge:
        # instead, use a circle edge of length 0 on a 2-edge circle
        lengths = {e: Fraction(1) for e in oc.graph.edges()}
        cyc = admissible_cycles(oc)[0]
        h0, h1 = cyc.steps
        lengths[oc.graph.edge_of(h0)] = Fraction(0)
        lengths[oc.graph.edge_of(h1)] = Fraction(1)
        m = MetricAdmissibleGraph.make(oc, lengths)
        out = normalize(m)
        assert len(out.graph.graph.edges()) == \
            len(oc.graph.edges()) - 1
        assert all(l > 0 for _, l in out.lengths)
        validate_metric(out)


class TestIncomingCycleLength:
    def test_unit_circle(self):
        m = minimal_annulus_metric()
        assert incoming_cycle_length(m, m.graph.closed_in()[0]) == 1

    def test_multiplicity_two(self):
        # genus-one figure-eight with an incoming closed leaf: the cycle
        # traverses both loops in both directions
        g = FatGraph.from_cycles([[0, 2, 1, 3, 4], [5]],
                                 [(0, 1), (2, 3), (4, 5)], leaves=[1])
        oc = OpenClosedGraph(g, in_leaves=(1,), out_leaves=(),
                             closed=frozenset({1}))
        lengths = {e: Fraction(1) for e in g.edges()}
        lengths[g.edge_of(0)] = Fraction(1, 2)
        lengths[g.edge_of(2)] = Fraction(1, 4)
        m = MetricAdmissibleGraph.make(oc, lengths)
        assert incoming_cycle_length(m, 1) == \
            2 * Fraction(1, 2) + 2 * Fraction(1, 4)

    def test_not_incoming(self):
        m = minimal_annulus_metric()
        with pytest.raises(LeafNotClosedIncoming):
            incoming_cycle_length(m, m.graph.closed_out()[0])


class TestGlueClosed:
    def test_minimal_self_glue(self):
        m = minimal_annulus_metric()
        out = glue_closed(m, m)
        validate_metric(out)
        assert oc_canonical(out.graph)[0] == oc_canonical(m.graph)[0]
        assert sorted(l for _, l in out.lengths) == \
            sorted(l for _, l in m.lengths)

    def test_wrap_subdivides(self):
        m1 = two_vertex_annulus()
        m2 = minimal_annulus_metric()
        out = glue_closed(m2, m1)
        validate_metric(out)
        # the single circle edge of m2 splits into two halves
        circle = admissible_cycles(out.graph)[0]
        lens = sorted(out.length_of(out.graph.graph.edge_of(h))
                      for h in circle.steps)
        assert lens == [Fraction(1, 2), Fraction(1, 2)]
        assert oc_canonical(out.graph)[0] == \
            oc_canonical(m1.graph)[0]

    def test_count_mismatch(self):
        m = minimal_annulus_metric()
        from conftest import corolla_closed_in
        disk = MetricAdmissibleGraph.make(
            corolla_closed_in(),
            {e: Fraction(1) for e in corolla_closed_in().graph.edges()})
        with pytest.raises(CountMismatch):
            glue_closed(m, disk)

    def test_degenerate_cap(self):
        # m2 a closed-in corolla: gluing onto it is unsupported
        from conftest import corolla_closed_in
        disk = MetricAdmissibleGraph.make(
            corolla_closed_in(),
            {e: Fraction(1) for e in corolla_closed_in().graph.edges()})
        m1 = minimal_annulus_metric()
        with pytest.raises(DegenerateCap):
            glue_closed(disk, m1)

    def test_asymmetric_wrap(self):
        # circle (1/3, 2/3) onto the same: cuts at exact rational points
        m1 = two_vertex_annulus((Fraction(1, 3), Fraction(2, 3)))
        m2 = two_vertex_annulus((Fraction(1, 4), Fraction(3, 4)))
        out = glue_closed(m2, m1)
        validate_metric(out)
        t = topological_type(out.graph)
        assert t == compose_types(topological_type(m2.graph),
                                  topological_type(m1.graph))


def strip_metric():
    g = FatGraph.from_cycles([[0, 1], [2], [3]], [(0, 2), (1, 3)],
                             leaves=[1, 2])
    oc = OpenClosedGraph(g, in_leaves=(1,), out_leaves=(2,),
                         closed=frozenset())
    return MetricAdmissibleGraph.make(
        oc, {e: Fraction(1) for e in g.edges()})


class TestCompose:
    def test_strip_strip(self):
        s = strip_metric()
        out = compose(s, s)
        validate_metric(out)
        assert oc_canonical(out.graph)[0] == oc_canonical(s.graph)[0]

    def test_no_opens_matches_glue_closed(self):
        m = minimal_annulus_metric()
        assert compose(m, m) == glue_closed(m, m)

    def test_type_composition(self):
        m1 = two_vertex_annulus()
        m2 = minimal_annulus_metric()
        out = compose(m2, m1)
        assert topological_type(out.graph) == compose_types(
            topological_type(m2.graph), topological_type(m1.graph))

    def test_chi_additivity(self):
        m1 = two_vertex_annulus()
        m2 = minimal_annulus_metric()
        t1 = topological_type(m1.graph)
        t2 = topological_type(m2.graph)
        out = compose(m2, m1)
        q2 = len(m1.graph.open_out())
        assert topological_type(out.graph).euler_characteristic == \
            t1.euler_characteristic + t2.euler_characteristic - q2


class TestRandomizedMetrics:
    def test_random_rational_gluings(self):
        rng = random.Random(20)
        m2 = minimal_annulus_metric()
        for _ in range(20):
            # random exact rational split of the two-edge circle
            den = rng.randrange(2, 40)
            num = rng.randrange(1, den)
            m1 = two_vertex_annulus((Fraction(num, den),
                                     1 - Fraction(num, den)))
            out = compose(m2, m1)
            validate_metric(out)
            for cyc in admissible_cycles(out.graph):
                total = sum(out.length_of(out.graph.graph.edge_of(h))
                            for h in cyc.steps)
                assert total == 1
            assert topological_type(out.graph) == compose_types(
                topological_type(m2.graph), topological_type(m1.graph))

    def test_determinism(self):
        m1 = two_vertex_annulus((Fraction(1, 3), Fraction(2, 3)))
        m2 = minimal_annulus_metric()
        a = compose(m2, m1)
        b = compose(m2, m1)
        assert a == b
