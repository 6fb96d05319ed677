"""Metric admissible fat graphs and their gluing.

Lengths are exact rationals.  A metric is a nonnegative length per edge with
leaf edges of length one, a zero set that is a forest whose collapse stays
admissible, and admissible circles of total length one.  Gluing rescales the
circles of the first graph to the lengths of the matching incoming boundary
cycles of the second, wraps each circle onto the cycle's traversal in the
orientation-reversing direction with base points aligned, subdivides at the
images of the circle vertices, and re-attaches the circle spokes into the
corners the incoming boundary passes through.
"""

from dataclasses import dataclass
from fractions import Fraction

from .fatgraph import FatGraphError, GraphBuilder, collapse_forest_tracked
from .openclosed import (
    CountMismatch, OpenClosedGraph, UnsupportedType, admissible_cycles,
    closed_cycle_steps, compose_types, is_admissible, oc_canonical,
    topological_type, validate_oc,
)


class LeafNotUnit(FatGraphError):
    pass


class ZeroSetNotForest(FatGraphError):
    pass


class CycleLengthNotOne(FatGraphError):
    pass


class LeafNotClosedIncoming(FatGraphError):
    pass


class DegenerateCap(FatGraphError):
    pass


ONE = Fraction(1)


@dataclass(frozen=True)
class MetricAdmissibleGraph:
    graph: OpenClosedGraph
    lengths: tuple  # sorted ((min_half, max_half), Fraction) pairs

    @classmethod
    def make(cls, graph, length_map):
        pairs = []
        for a, b in graph.graph.edges():
            if (a, b) not in length_map:
                raise FatGraphError("missing length for edge (%d,%d)"
                                    % (a, b))
            pairs.append(((a, b), Fraction(length_map[(a, b)])))
        if len(length_map) != len(pairs):
            raise FatGraphError("length assigned to a non-edge")
        return cls(graph, tuple(sorted(pairs)))

    def length_map(self):
        return dict(self.lengths)

    def length_of(self, edge):
        return self.length_map()[edge]

    def to_json_dict(self):
        d = self.graph.to_json_dict()
        d["lengths"] = {
            "%d" % e[0]: "%d/%d" % (l.numerator, l.denominator)
            for e, l in self.lengths}
        return d

    @classmethod
    def from_json_dict(cls, data):
        graph = OpenClosedGraph.from_json_dict(data)
        raw = data.get("lengths", {})
        lengths = {}
        for a, b in graph.graph.edges():
            val = raw.get(str(a))
            if val is None:
                raise FatGraphError("missing length for edge %d" % a)
            lengths[(a, b)] = Fraction(val)
        return cls.make(graph, lengths)


@dataclass(frozen=True)
class CyclePosition:
    """Arc-length position along a boundary-cycle traversal."""
    cycle: int
    offset: Fraction


def validate_metric(m):
    """Check the three metric axioms with exact rational arithmetic."""
    validate_oc(m.graph)
    if not is_admissible(m.graph):
        raise FatGraphError("underlying graph is not admissible")
    lengths = m.length_map()
    graph = m.graph.graph
    if set(lengths) != set(graph.edges()):
        raise FatGraphError("length support differs from the edge set")
    for e, l in lengths.items():
        if l < 0:
            raise FatGraphError("negative length on edge %r" % (e,))
    for a, b in graph.edges():
        if graph.is_leaf_edge(a) and lengths[(a, b)] != ONE:
            raise LeafNotUnit("leaf edge (%d,%d) has length %s"
                              % (a, b, lengths[(a, b)]))
    zero = [e for e, l in lengths.items() if l == 0]
    if zero:
        try:
            collapsed, hmap, vmap = collapse_forest_tracked(graph, zero)
        except FatGraphError as exc:
            raise ZeroSetNotForest(str(exc))
        quotient = OpenClosedGraph(
            collapsed,
            tuple(vmap[v] for v in m.graph.in_leaves),
            tuple(vmap[v] for v in m.graph.out_leaves),
            frozenset(vmap[v] for v in m.graph.closed))
        if not is_admissible(quotient):
            raise ZeroSetNotForest("zero-set collapse is not admissible")
    for cyc in admissible_cycles(m.graph):
        if not cyc.steps:
            continue
        total = sum(lengths[graph.edge_of(h)] for h in cyc.steps)
        if total != ONE:
            raise CycleLengthNotOne(
                "admissible cycle of leaf %d sums to %s" % (cyc.leaf, total))


def normalize(m):
    """Collapse the zero-length edges, keeping all other lengths."""
    validate_metric(m)
    lengths = m.length_map()
    graph = m.graph.graph
    zero = [e for e, l in lengths.items() if l == 0]
    if not zero:
        return m
    collapsed, hmap, vmap = collapse_forest_tracked(graph, zero)
    new_lengths = {}
    for (a, b), l in lengths.items():
        if (a, b) in zero or l == 0:
            continue
        na, nb = hmap[a], hmap[b]
        new_lengths[(min(na, nb), max(na, nb))] = l
    quotient = OpenClosedGraph(
        collapsed,
        tuple(vmap[v] for v in m.graph.in_leaves),
        tuple(vmap[v] for v in m.graph.out_leaves),
        frozenset(vmap[v] for v in m.graph.closed))
    return MetricAdmissibleGraph.make(quotient, new_lengths)


def incoming_cycle_length(m, leaf):
    """Total length of the boundary cycle of an incoming closed leaf.

    Edges traversed twice by the cycle count twice.
    """
    if leaf not in m.graph.closed_in():
        raise LeafNotClosedIncoming(
            "vertex %r is not an incoming closed leaf" % (leaf,))
    _, _, steps = closed_cycle_steps(m.graph.graph, leaf)
    if not steps:
        raise LeafNotClosedIncoming(
            "degenerate corolla: the cycle has no interior edges")
    lengths = m.length_map()
    return sum(lengths[m.graph.graph.edge_of(h)] for h in steps)


# ---------------------------------------------------------------------------
# gluing
# ---------------------------------------------------------------------------

class _Surgeon:
    """Disjoint union of two metric graphs with length-aware surgery."""

    def __init__(self, m2, m1):
        g2, g1 = m2.graph.graph, m1.graph.graph
        self.b = GraphBuilder.from_graph(g2)
        self.h_off = g2.n
        self.v_off = g2.num_vertices
        for v in range(g1.num_vertices):
            self.b.add_vertex(self.v_off + v, leaf=(v in g1.leaves))
        for h in range(g1.n):
            self.b.inv[self.h_off + h] = self.h_off + g1.involution[h]
            self.b.nxt[self.h_off + h] = self.h_off + g1.sigma[h]
            self.b.src[self.h_off + h] = self.v_off + g1.source[h]
        self.elen = {}
        for (a, b_), l in m2.lengths:
            self.elen[frozenset((a, b_))] = l
        for (a, b_), l in m1.lengths:
            self.elen[frozenset((self.h_off + a, self.h_off + b_))] = l
        self.next_h = self.h_off + g1.n
        self.next_v = self.v_off + g1.num_vertices

    def new_half(self):
        h = self.next_h
        self.next_h += 1
        return h

    def new_vertex(self, leaf=False):
        v = self.next_v
        self.next_v += 1
        self.b.add_vertex(v, leaf=leaf)
        return v

    def cycle_steps(self, leaf_key):
        b = self.b
        hs = b.half_edges_at(leaf_key)
        if len(hs) != 1:
            raise FatGraphError("vertex %r is not a leaf" % (leaf_key,))
        h_leaf = hs[0]
        attach = b.inv[h_leaf]
        steps = []
        h = b.nxt[attach]
        while h != attach and h != h_leaf:
            steps.append(h)
            h = b.nxt[b.inv[h]]
        return b.src[attach], attach, steps

    def delete_leaf_edge(self, leaf_key):
        edge = frozenset((self.b.inv[self.b.half_edges_at(leaf_key)[0]],
                          self.b.half_edges_at(leaf_key)[0]))
        self.elen.pop(edge, None)
        return self.b.delete_leaf(leaf_key)

    def spoke_arc(self, depart, arrive):
        """Non-circle half edges at a circle vertex, in cyclic order."""
        spokes = []
        h = self.b.nxt[depart]
        while h != arrive:
            spokes.append(h)
            h = self.b.nxt[h]
        return spokes

    def detach_spokes(self, depart, arrive):
        """Remove the spoke arc from its vertex cycle, keeping the halves."""
        spokes = self.spoke_arc(depart, arrive)
        self.b.nxt[depart] = arrive
        return spokes

    def subdivide(self, d0, coords):
        """Cut the edge holding ``d0`` at the given ascending coordinates.

        Coordinates are measured from the source of ``d0``.  Returns the
        list of new vertices paired with their (toward-d0, away-from-d0)
        half edges.
        """
        dbar = self.b.inv[d0]
        edge = frozenset((d0, dbar))
        total = self.elen.pop(edge)
        if not all(0 < x < total for x in coords):
            raise FatGraphError("cut coordinate outside the edge")
        out = []
        prev_half = d0
        prev_pos = Fraction(0)
        for x in coords:
            v = self.new_vertex()
            r = self.new_half()
            f = self.new_half()
            self.b.src[r] = v
            self.b.src[f] = v
            self.b.nxt[r] = f
            self.b.nxt[f] = r
            self.b.inv[prev_half] = r
            self.b.inv[r] = prev_half
            self.elen[frozenset((prev_half, r))] = x - prev_pos
            out.append((v, r, f))
            prev_half = f
            prev_pos = x
        self.b.inv[prev_half] = dbar
        self.b.inv[dbar] = prev_half
        self.elen[frozenset((prev_half, dbar))] = total - prev_pos
        return out

    def insert_spokes(self, before_h, spokes):
        if spokes:
            self.b.insert_arc_in_corner(before_h, spokes)

    def fuse_bivalent(self, v):
        hs = self.b.cycle_at(v)
        a, c = hs
        la = self.elen.pop(frozenset((a, self.b.inv[a])))
        lc = self.elen.pop(frozenset((c, self.b.inv[c])))
        pa, pc = self.b.fuse_bivalent(v)
        self.elen[frozenset((pa, pc))] = la + lc


def _channels(m2, m1):
    outs = m1.graph.closed_out()
    ins = m2.graph.closed_in()
    if len(outs) != len(ins):
        raise CountMismatch(
            "%d outgoing closed circles vs %d incoming closed boundaries"
            % (len(outs), len(ins)))
    return list(zip(ins, outs))


def glue_closed(m2, m1):
    """Glue every admissible circle of ``m1`` onto the matching incoming
    closed boundary cycle of ``m2``.

    Returns the intermediate metric graph; its incoming boundaries are those
    of ``m1`` followed by the open incoming boundaries of ``m2``, and its
    outgoing boundaries are the open outgoing ones of ``m1`` followed by
    those of ``m2``.
    """
    m2 = normalize(m2)
    m1 = normalize(m1)
    surgeon, oc = _glue_closed_surgeon(m2, m1)
    return _freeze_metric(surgeon, oc)


def _glue_closed_surgeon(m2, m1):
    channels = _channels(m2, m1)
    s = _Surgeon(m2, m1)
    off_v = s.v_off
    lengths1 = m1.length_map()
    for leaf2, leaf1 in channels:
        base2, attach2, steps2 = s.cycle_steps(leaf2)
        base1, attach1, steps1 = s.cycle_steps(off_v + leaf1)
        if not steps2 or not steps1:
            raise DegenerateCap(
                "gluing onto a degenerate closed boundary is unsupported")
        step_len = [s.elen[frozenset((h, s.b.inv[h]))] for h in steps2]
        big_b = sum(step_len)
        if big_b <= 0:
            raise DegenerateCap("incoming boundary cycle has length zero")
        # positions of the incoming-cycle vertex visits
        u_pos = []
        acc = Fraction(0)
        for l in step_len:
            u_pos.append(acc)
            acc += l
        # rescaled positions of the circle vertices along the circle
        t_pos = []
        acc = Fraction(0)
        g1graph = m1.graph.graph
        for h in steps1:
            t_pos.append(acc)
            e1 = g1graph.edge_of(h - s.h_off)
            acc += big_b * lengths1[e1]
        if acc != big_b:
            raise FatGraphError("circle does not rescale to the cycle")
        # record the corner of every incoming-cycle visit before surgery
        visit_corner = []
        for k, step in enumerate(steps2):
            before = s.b.inv[steps2[k - 1]]
            visit_corner.append((before, step))
        # spokes of the circle vertices, detached but kept alive
        circle_spokes = []
        for j, step in enumerate(steps1):
            arrive = s.b.inv[steps1[j - 1]]
            if j == 0:
                s.delete_leaf_edge(s.b.src[s.b.inv[attach1]])
            circle_spokes.append(s.detach_spokes(step, arrive))
        # m2 side: drop the incoming leaf
        s.delete_leaf_edge(leaf2)
        # sort the circle vertices onto the reversed traversal
        merges = []       # (visit index, spokes)
        cuts = {}         # edge frozenset -> list of (coord, spokes, dir)
        for j in range(len(steps1)):
            pos = (big_b - t_pos[j]) % big_b
            if pos in u_pos:
                merges.append((u_pos.index(pos), circle_spokes[j]))
                continue
            k = _pass_of(u_pos, step_len, pos)
            d = steps2[k]
            dbar = s.b.inv[d]
            d0 = min(d, dbar)
            offset = pos - u_pos[k]
            coord = offset if d == d0 else step_len[k] - offset
            cuts.setdefault(frozenset((d, dbar)), []).append(
                (coord, circle_spokes[j], d == d0, d0))
        # subdivide, collecting the corner of each cut
        corner_jobs = []
        for edge, cut_list in cuts.items():
            cut_list.sort(key=lambda t: t[0])
            coords = [c for c, _, _, _ in cut_list]
            if len(set(coords)) != len(coords):
                raise FatGraphError("coincident circle vertices")
            d0 = cut_list[0][3]
            pieces = s.subdivide(d0, coords)
            for (coord, spokes, same_dir, _), (v, r, f) in zip(cut_list,
                                                               pieces):
                if not spokes:
                    raise FatGraphError("bare circle vertex maps to a cut")
                corner_jobs.append((r if same_dir else f, spokes))
        for before, spokes in corner_jobs:
            s.insert_spokes(before, spokes)
        for k, spokes in merges:
            before, after = visit_corner[k]
            if s.b.nxt[before] != after:
                raise FatGraphError("merge corner was disturbed")
            s.insert_spokes(before, spokes)
        # drop the circle edges; the stranded circle vertices follow
        for step in steps1:
            partner = s.b.inv[step]
            s.elen.pop(frozenset((step, partner)), None)
            s.b.remove_halfedge(step)
            s.b.remove_halfedge(partner)
        _purge_empty_vertices(s)
        # delete a bivalent merge vertex
        if base2 in s.b.vkeys and len(s.b.half_edges_at(base2)) == 2:
            hs = s.b.cycle_at(base2)
            if s.b.inv[hs[0]] != hs[1]:
                s.fuse_bivalent(base2)
    in_leaves = tuple(off_v + v for v in m1.graph.in_leaves) + \
        tuple(m2.graph.open_in())
    out_leaves = tuple(off_v + v for v in m1.graph.open_out()) + \
        tuple(m2.graph.out_leaves)
    closed = frozenset(off_v + v for v in m1.graph.closed
                       if v in m1.graph.in_leaves) | \
        frozenset(v for v in m2.graph.closed if v in m2.graph.out_leaves)
    return s, (in_leaves, out_leaves, closed)


def _pass_of(u_pos, step_len, pos):
    for k in range(len(u_pos)):
        if u_pos[k] < pos < u_pos[k] + step_len[k]:
            return k
    raise FatGraphError("position %s not inside any pass" % (pos,))


def _purge_empty_vertices(s):
    for v in [v for v in list(s.b.vkeys) if not s.b.half_edges_at(v)]:
        s.b.remove_vertex(v)


def _freeze_metric(s, oc_data):
    in_leaves, out_leaves, closed = oc_data
    out, hmap, vmap = s.b.freeze()
    graph = OpenClosedGraph(
        out,
        tuple(vmap[v] for v in in_leaves),
        tuple(vmap[v] for v in out_leaves),
        frozenset(vmap[v] for v in closed))
    lengths = {}
    for edge, l in s.elen.items():
        a, b = sorted(hmap[h] for h in edge)
        lengths[(a, b)] = l
    res = MetricAdmissibleGraph.make(graph, lengths)
    validate_metric(res)
    return res


def glue_open(m, pairs):
    """Fuse matched (outgoing open, incoming open) leaf pairs of ``m``.

    Each pair becomes one inner edge of length one; a fused edge ending at a
    degenerate corolla center is collapsed so the result stays a valid
    open-closed graph.
    """
    lengths = m.length_map()
    graph = m.graph.graph
    b = GraphBuilder.from_graph(graph)
    elen = {frozenset((a, b_)): l for (a, b_), l in lengths.items()}
    survivors_in = [v for v in m.graph.in_leaves]
    survivors_out = [v for v in m.graph.out_leaves]
    for out_leaf, in_leaf in pairs:
        if out_leaf not in m.graph.open_out() or \
                in_leaf not in m.graph.open_in():
            raise CountMismatch("pairing must match open out to open in")
        h_out = b.half_edges_at(out_leaf)[0]
        h_in = b.half_edges_at(in_leaf)[0]
        x = b.inv[h_out]
        y = b.inv[h_in]
        elen.pop(frozenset((h_out, x)))
        elen.pop(frozenset((h_in, y)))
        b.remove_halfedge(h_out)
        b.remove_halfedge(h_in)
        b.remove_vertex(out_leaf)
        b.remove_vertex(in_leaf)
        b.inv[x] = y
        b.inv[y] = x
        elen[frozenset((x, y))] = ONE
        survivors_in.remove(in_leaf)
        survivors_out.remove(out_leaf)
        # junction cleanup: a degenerate corolla center absorbs the new
        # edge, otherwise it would sit as an invalid low-valence vertex
        vx, vy = b.src[x], b.src[y]
        if vx != vy and (len(b.half_edges_at(vx)) <= 2
                         or len(b.half_edges_at(vy)) <= 2):
            elen.pop(frozenset((x, y)))
            keep, _ = b.collapse_edge(x)
            if not b.half_edges_at(keep):
                raise UnsupportedType(
                    "composite component has no boundary marks")
    out, hmap, vmap = b.freeze()
    graph = OpenClosedGraph(
        out,
        tuple(vmap[v] for v in survivors_in),
        tuple(vmap[v] for v in survivors_out),
        frozenset(vmap[v] for v in m.graph.closed
                  if v in vmap))
    new_lengths = {}
    for edge, l in elen.items():
        a, b_ = sorted(hmap[h] for h in edge)
        new_lengths[(a, b_)] = l
    res = MetricAdmissibleGraph.make(graph, new_lengths)
    validate_metric(res)
    return res


def compose(m2, m1):
    """Full composition: closed gluing followed by open gluing."""
    m2 = normalize(m2)
    m1 = normalize(m1)
    opens1 = m1.graph.open_out()
    opens2 = m2.graph.open_in()
    if len(opens1) != len(opens2):
        raise CountMismatch(
            "%d outgoing open vs %d incoming open boundaries"
            % (len(opens1), len(opens2)))
    s, (in_leaves, out_leaves, closed) = _glue_closed_surgeon(m2, m1)
    mid = _freeze_metric(s, (in_leaves, out_leaves, closed))
    if not opens1:
        return mid
    # locate the dangling opens in the intermediate graph
    n1_in = len(m1.graph.in_leaves)
    n1_out_open = len(opens1)
    mid_out_opens = mid.graph.out_leaves[:n1_out_open]
    mid_in_from_m2 = mid.graph.in_leaves[n1_in:]
    pairs = list(zip(mid_out_opens, mid_in_from_m2))
    glued = glue_open(mid, pairs)
    # the surviving rosters are exactly those of m1-in and m2-out
    return glued
