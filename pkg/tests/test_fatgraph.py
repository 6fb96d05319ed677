import random

import pytest

from bwgraphs.fatgraph import (
    BadLeafValence, FatGraph, FixedPointInvolution, ForestContainsLeaf,
    ForestHasCycle, MismatchedSource, apply_relabel, automorphisms,
    boundary_cycles, canonical_form, collapse_forest, front_sign,
    reorder_sign, surface_invariants, validate,
)


def theta(planar=True):
    # vertices u=0, v=1; half edges 0,1,2 at u and 3,4,5 at v; i(k)=k+3
    if planar:
        return FatGraph.from_cycles([[0, 1, 2], [3, 5, 4]],
                                    [(0, 3), (1, 4), (2, 5)])
    return FatGraph.from_cycles([[0, 1, 2], [3, 4, 5]],
                                [(0, 3), (1, 4), (2, 5)])


def figure_eight(genus_one=True):
    # one vertex with loops a={0,1}, b={2,3}
    if genus_one:
        return FatGraph.from_cycles([[0, 2, 1, 3]], [(0, 1), (2, 3)])
    return FatGraph.from_cycles([[0, 1, 2, 3]], [(0, 1), (2, 3)])


def one_leaf_corolla():
    return FatGraph.from_cycles([[0], [1]], [(0, 1)], leaves=[1])


class TestValidate:
    def test_theta_ok(self):
        validate(theta())

    def test_fixed_point(self):
        g = FatGraph((0, 2, 1), (1, 2, 0), (0, 0, 0), frozenset(), 1)
        with pytest.raises(FixedPointInvolution):
            validate(g)

    def test_sigma_crosses_vertices(self):
        g = FatGraph((1, 0, 3, 2), (2, 3, 0, 1), (0, 0, 1, 1),
                     frozenset(), 2)
        with pytest.raises(MismatchedSource):
            validate(g)

    def test_bad_leaf(self):
        g = theta()
        bad = FatGraph(g.involution, g.sigma, g.source, frozenset({0}), 2)
        with pytest.raises(BadLeafValence):
            validate(bad)


class TestBoundaryCycles:
    def test_planar_theta_three_cycles(self):
        cycles = boundary_cycles(theta(planar=True))
        assert len(cycles) == 3
        assert sorted(len(c.half_edges) for c in cycles) == [2, 2, 2]

    def test_nonplanar_theta_one_cycle(self):
        cycles = boundary_cycles(theta(planar=False))
        assert len(cycles) == 1
        assert len(cycles[0].half_edges) == 6

    def test_figure_eight(self):
        assert len(boundary_cycles(figure_eight(True))) == 1
        assert len(boundary_cycles(figure_eight(False))) == 3

    def test_partition(self):
        for g in (theta(), theta(False), figure_eight(), figure_eight(False)):
            halves = sorted(h for c in boundary_cycles(g)
                            for h in c.half_edges)
            assert halves == list(range(g.n))


class TestSurfaceInvariants:
    def test_planar_theta(self):
        inv = surface_invariants(theta(True))
        assert (inv.euler_characteristic, inv.boundary_count, inv.genus) == \
            (-1, 3, 0)

    def test_nonplanar_theta(self):
        inv = surface_invariants(theta(False))
        assert (inv.euler_characteristic, inv.boundary_count, inv.genus) == \
            (-1, 1, 1)

    def test_corolla(self):
        inv = surface_invariants(one_leaf_corolla())
        assert (inv.euler_characteristic, inv.boundary_count, inv.genus) == \
            (1, 1, 0)


class TestCollapseForest:
    def test_collapse_theta_edge(self):
        g = theta(True)
        out = collapse_forest(g, [(0, 3)])
        assert out.num_vertices == 1
        assert len(out.edges()) == 2
        assert len(boundary_cycles(out)) == 3

    def test_empty_forest(self):
        g = theta(True)
        assert collapse_forest(g, []) == g

    def test_leaf_edge_rejected(self):
        g = one_leaf_corolla()
        with pytest.raises(ForestContainsLeaf):
            collapse_forest(g, [(0, 1)])

    def test_cycle_rejected(self):
        g = theta(True)
        with pytest.raises(ForestHasCycle):
            collapse_forest(g, [(0, 3), (1, 4)])

    def test_invariants_preserved(self):
        g = theta(True)
        out = collapse_forest(g, [(0, 3)])
        assert surface_invariants(out) == surface_invariants(g)


class TestCanonicalForm:
    def test_relabelings_agree(self):
        g = theta(True)
        rng = random.Random(7)
        key = canonical_form(g).key
        for _ in range(50):
            hperm = list(range(g.n))
            rng.shuffle(hperm)
            vperm = list(range(g.num_vertices))
            rng.shuffle(vperm)
            assert canonical_form(apply_relabel(g, hperm, vperm)).key == key

    def test_planar_vs_nonplanar(self):
        assert canonical_form(theta(True)).key != \
            canonical_form(theta(False)).key

    def test_relabeling_realizes_isomorphism(self):
        g = theta(True)
        cf = canonical_form(g)
        gc = apply_relabel(g, cf.half_relabel, cf.vertex_relabel)
        cf2 = canonical_form(gc)
        assert cf2.key == cf.key
        assert apply_relabel(gc, cf2.half_relabel, cf2.vertex_relabel) == gc \
            or canonical_form(
                apply_relabel(gc, cf2.half_relabel, cf2.vertex_relabel)
            ).key == cf.key

    def test_labels_distinguish(self):
        # trivalent corolla: swapping two leaf labels reverses the cyclic
        # order, so it is not a fat-graph isomorphism
        g = FatGraph.from_cycles([[0, 1, 2], [3], [4], [5]],
                                 [(0, 3), (1, 4), (2, 5)],
                                 leaves=[1, 2, 3])
        k1 = canonical_form(g, labels={1: "a", 2: "b", 3: "c"}).key
        k2 = canonical_form(g, labels={1: "b", 2: "a", 3: "c"}).key
        k3 = canonical_form(g, labels={1: "a", 2: "b", 3: "c"}).key
        assert k1 == k3
        assert k1 != k2


class TestAutomorphisms:
    def test_labeled_leaf_rigid(self):
        g = FatGraph.from_cycles([[0, 1, 2], [3], [4], [5]],
                                 [(0, 3), (1, 4), (2, 5)],
                                 leaves=[1, 2, 3])
        auts = automorphisms(g, labels={1: 1, 2: 2, 3: 3})
        assert len(auts) == 1

    def test_theta_order_six(self):
        assert len(automorphisms(theta(True))) == 6

    def test_group_closure(self):
        g = theta(True)
        auts = automorphisms(g)
        perms = {a[0] for a in auts}
        for h1, _ in auts:
            for h2, _ in auts:
                comp = tuple(h1[h2[k]] for k in range(g.n))
                assert comp in perms


class TestWedgeSigns:
    def test_reorder(self):
        assert reorder_sign([1, 2, 3], [1, 2, 3]) == 1
        assert reorder_sign([1, 2, 3], [2, 1, 3]) == -1
        assert reorder_sign([1, 2, 3], [2, 3, 1]) == 1

    def test_front(self):
        assert front_sign([1, 2, 3, 4], [3]) == 1  # two transpositions
        assert front_sign([1, 2, 3, 4], [2]) == -1


class TestJson:
    def test_round_trip(self):
        g = theta(True)
        assert FatGraph.from_json_dict(g.to_json_dict()) == g
