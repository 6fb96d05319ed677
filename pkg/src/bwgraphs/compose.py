"""Chain-level composition of black-and-white graphs.

Composition deletes each white vertex of the first graph, fuses its start
edge with the leaf edge of the matching incoming closed boundary of the
second graph, and attaches the remaining spokes into the corner slots met
along that boundary cycle, once for every weakly order-preserving
distribution.  Open boundaries are then glued in pairs into unit edges.
The orientation of a composite term is the wedge of the second graph's
generators followed by the first graph's, with deleted generators removed
by the usual reordering parity; the resulting signs make composition a
chain map and strictly associative.
"""

from dataclasses import dataclass, replace
from itertools import combinations_with_replacement, product

from .fatgraph import FatGraphError, GraphBuilder, front_sign, reorder_sign
from .openclosed import CountMismatch, UnsupportedType
from . import bw as bwmod
from .bw import BWGraph, FormalSum, underlying, validate_bw


@dataclass(frozen=True)
class CompositionProblem:
    """A composable pair: whites of g1 against closed inputs of g2."""
    g2: BWGraph
    g1: BWGraph

    def channels(self):
        whites = self.g1.white_order
        closed_in = self.g2.closed_in()
        if len(whites) != len(closed_in):
            raise CountMismatch(
                "%d white vertices vs %d incoming closed leaves"
                % (len(whites), len(closed_in)))
        return list(zip(closed_in, whites))

    def open_pairs(self):
        outs = self.g1.out_leaves
        ins = self.g2.open_in()
        if len(outs) != len(ins):
            raise CountMismatch(
                "%d outgoing open vs %d incoming open leaves"
                % (len(outs), len(ins)))
        return list(zip(outs, ins))


class _Union:
    """Disjoint union of g2 and g1 with wedge-order bookkeeping."""

    def __init__(self, g2, g1):
        self.g2 = g2
        self.g1 = g1
        graph2, graph1 = g2.graph, g1.graph
        self.v_off = graph2.num_vertices
        self.h_off = graph2.n
        self.work_seq = (
            [("v", v) for v in range(graph2.num_vertices)] +
            [("h", h) for h in range(graph2.n)] +
            [("v", self.v_off + v) for v in range(graph1.num_vertices)] +
            [("h", self.h_off + h) for h in range(graph1.n)])

    def fresh_builder(self):
        b = GraphBuilder.from_graph(self.g2.graph)
        graph1 = self.g1.graph
        for v in range(graph1.num_vertices):
            b.add_vertex(self.v_off + v, leaf=(v in graph1.leaves))
        for h in range(graph1.n):
            b.inv[self.h_off + h] = self.h_off + graph1.involution[h]
            b.nxt[self.h_off + h] = self.h_off + graph1.sigma[h]
            b.src[self.h_off + h] = self.v_off + graph1.source[h]
        return b


def _slot_corners(b, leaf):
    """Corner slots along the boundary cycle of a closed incoming leaf.

    Returns ``(attach_half, partner_half, before_list)`` where each entry of
    ``before_list`` is the half edge after which a spoke lands when assigned
    to that slot, in traversal order.
    """
    hs = b.half_edges_at(leaf)
    h_leaf = hs[0]
    attach = b.inv[h_leaf]
    steps = []
    h = b.nxt[attach]
    while h != attach and h != h_leaf:
        steps.append(h)
        h = b.nxt[b.inv[h]]
    befores = [attach] + [b.inv[k] for k in steps]
    return attach, h_leaf, befores


def _white_spokes(g, b, w, start):
    cyc = b.cycle_at(w, start)
    return cyc[0], cyc[1:]


def composition_terms(problem, glue_open=True):
    """All closed-gluing terms of the composition, with orientations.

    Each term is a generalized black-and-white graph whose orientation field
    carries the accumulated sign; with ``glue_open`` the open boundaries are
    fused as well (the underlying-graph reduction is left to the caller).
    """
    g2, g1 = problem.g2, problem.g1
    union = _Union(g2, g1)
    channels = problem.channels()
    open_pairs = problem.open_pairs() if glue_open else []
    # slot data on the pristine union
    base = union.fresh_builder()
    slot_data = []
    for x_i, w_i in channels:
        attach, h_leaf, befores = _slot_corners(base, x_i)
        wi = union.v_off + w_i
        start = union.h_off + g1.start_of(w_i)
        _, spokes = _white_spokes(g1, base, wi, start)
        slot_data.append((x_i, attach, h_leaf, wi, start, spokes, befores))
    choice_sets = []
    for _, _, _, _, _, spokes, befores in slot_data:
        choice_sets.append(list(
            combinations_with_replacement(range(len(befores)),
                                          len(spokes))))
    for assignment in product(*choice_sets):
        b = union.fresh_builder()
        work = list(union.work_seq)
        sign = g2.orientation * g1.orientation
        for (x_i, attach, h_leaf, wi, start, spokes, befores), slots in zip(
                slot_data, assignment):
            # drop order fixed so that the annulus composes idempotently
            # with coefficient +1
            drops = [("h", h_leaf), ("v", x_i), ("v", wi), ("h", start)]
            sign *= front_sign(work, drops)
            dropset = set(drops)
            work = [x for x in work if x not in dropset]
            partner = b.inv[start]
            # detach the spokes (they stay alive for re-insertion) and
            # dissolve the white vertex and the leaf of x_i
            b.nxt[start] = start
            b.remove_halfedge(h_leaf)
            b.remove_vertex(x_i)
            b.remove_halfedge(start)
            # fuse the start edge with the leaf edge of x_i
            b.inv[attach] = partner
            b.inv[partner] = attach
            # distribute the spokes into the chosen corners, keeping order
            by_slot = {}
            for s, slot in zip(spokes, slots):
                by_slot.setdefault(slot, []).append(s)
            for slot, arc in sorted(by_slot.items()):
                b.insert_arc_in_corner(befores[slot], arc)
            b.remove_vertex(wi)
        # an unlabeled start leaf of g2 that caught spokes stops being a
        # leaf: it turns into a black vertex, smoothed away when bivalent
        for u in sorted(b.leaf_keys):
            hs = b.half_edges_at(u)
            if len(hs) <= 1:
                continue
            b.leaf_keys.discard(u)
            if len(hs) == 2:
                a_h, c_h = sorted(hs)
                drops = [("v", u), ("h", a_h), ("h", c_h)]
                sign *= front_sign(work, drops)
                dropset = set(drops)
                work = [x for x in work if x not in dropset]
                b.fuse_bivalent(u)
        for o_j, i_j in open_pairs:
            oj = union.v_off + o_j
            q_bar = b.half_edges_at(oj)[0]
            r_bar = b.half_edges_at(i_j)[0]
            q = b.inv[q_bar]
            r = b.inv[r_bar]
            drops = [("v", oj), ("h", q_bar), ("v", i_j), ("h", r_bar)]
            sign *= front_sign(work, drops)
            dropset = set(drops)
            work = [x for x in work if x not in dropset]
            b.remove_halfedge(q_bar)
            b.remove_vertex(oj)
            b.remove_halfedge(r_bar)
            b.remove_vertex(i_j)
            b.inv[q] = r
            b.inv[r] = q
            vq, vr = b.src[q], b.src[r]
            if vq != vr and (len(b.half_edges_at(vq)) <= 2
                             or len(b.half_edges_at(vr)) <= 2):
                drops = [("v", vq), ("v", vr), ("h", q), ("h", r)]
                sign *= front_sign(work, drops)
                dropset = set(drops)
                work = [x for x in work if x not in dropset]
                kept, _ = b.collapse_edge(q)
                work = [("v", kept)] + work
                if not b.half_edges_at(kept):
                    raise UnsupportedType(
                        "composite component has no boundary marks")
        out, hmap, vmap = b.freeze()
        dst = [("v", k) for k, _ in sorted(vmap.items(), key=lambda t: t[1])]
        dst += [("h", k) for k, _ in sorted(hmap.items(), key=lambda t: t[1])]
        sign *= reorder_sign(work, dst)
        term = BWGraph(
            out,
            tuple(vmap[w] for w in g2.white_order),
            tuple(hmap[h] for h in g2.start),
            tuple(vmap[union.v_off + v] for v in g1.in_leaves),
            tuple(vmap[v] for v in g2.out_leaves),
            frozenset(vmap[union.v_off + v] for v in g1.closed),
            sign)
        validate_bw(term, generalized=True)
        yield term


def compose_closed(problem):
    """Closed-phase terms as (generalized graph, sign) pairs."""
    out = []
    for term in composition_terms(problem, glue_open=False):
        out.append((replace(term, orientation=1), term.orientation))
    return out


def compose(g2, g1):
    """The composition as a formal sum of canonical generators."""
    problem = CompositionProblem(g2, g1)
    total = FormalSum()
    for term in composition_terms(problem, glue_open=True):
        reduced = underlying(term)
        if reduced is not None:
            total.add(reduced)
    return total


def compose_chains(s2, s1):
    """Bilinear extension of compose to formal sums."""
    total = FormalSum()
    for c2, rep2 in s2.terms():
        for c1, rep1 in s1.terms():
            total.add_sum(compose(rep2, rep1), c2 * c1)
    return total
