"""Black-and-white graphs and their chain complex structure.

A black-and-white graph is a fat graph with a bicoloring of its vertices:
black vertices thicken to disks and white vertices to annuli whose inner
circles are the outgoing closed boundaries.  The white vertices are ordered
and each carries a start half edge; a leaf attached to a start half edge may
be unlabeled.  Generators are oriented by an ordering of vertices and half
edges; orientation is carried here as a sign against the instance's
reference ordering (vertices then half edges by index).

The degree of a graph is sum(|v|-3) over inner black vertices plus
sum(|v|-1) over white vertices.  The differential sums the underlying
graphs of all blow-ups, with signs induced by the wedge-reordering rules
for edge collapse and leaf deletion.
"""

from dataclasses import dataclass, replace
from functools import lru_cache

from .fatgraph import (
    FatGraph, FatGraphError, GraphBuilder, _perm_parity, apply_relabel,
    boundary_cycles, canonical_data, front_sign, reorder_sign, validate,
)
from . import openclosed
from .openclosed import (
    DegenerateNotCorolla, LabelOverlap, NotEssentiallyTrivalent,
    OpenClosedGraph, admissible_cycles, closed_cycle_steps,
    is_admissible, is_essentially_trivalent, type_from_markings,
)


class BlackVertexTooSmall(FatGraphError):
    pass


class ClosedOutgoingLeaf(FatGraphError):
    pass


class WhiteVertexLabeled(FatGraphError):
    pass


class UnlabeledLeafNotAtStart(FatGraphError):
    pass


class BadWhiteStart(FatGraphError):
    pass


class LoopCollapse(FatGraphError):
    pass


class WhiteWhiteCollapse(FatGraphError):
    pass


class BasisMiss(FatGraphError):
    pass


@dataclass(frozen=True)
class BWGraph:
    graph: FatGraph
    white_order: tuple   # white vertices; position = label - 1
    start: tuple         # start half edge per white, aligned with white_order
    in_leaves: tuple
    out_leaves: tuple    # outgoing leaves are always open
    closed: frozenset    # subset of in_leaves
    orientation: int = 1

    @property
    def whites(self):
        return frozenset(self.white_order)

    @property
    def labeled_leaves(self):
        return set(self.in_leaves) | set(self.out_leaves)

    def unlabeled_leaves(self):
        return sorted(set(self.graph.leaves) - self.labeled_leaves)

    def start_of(self, w):
        return self.start[self.white_order.index(w)]

    def closed_in(self):
        return tuple(v for v in self.in_leaves if v in self.closed)

    def open_in(self):
        return tuple(v for v in self.in_leaves if v not in self.closed)

    def to_json_dict(self):
        d = self.graph.to_json_dict()
        d["in_leaves"] = list(self.in_leaves)
        d["out_leaves"] = list(self.out_leaves)
        d["closed_leaves"] = sorted(self.closed)
        d["black"] = sorted(v for v in range(self.graph.num_vertices)
                            if v not in self.whites
                            and v not in self.graph.leaves)
        d["white_order"] = list(self.white_order)
        d["starts"] = list(self.start)
        d["orientation_sign"] = self.orientation
        return d

    @classmethod
    def from_json_dict(cls, data):
        g = FatGraph.from_json_dict(data)
        return cls(g,
                   tuple(data.get("white_order", ())),
                   tuple(data.get("starts", ())),
                   tuple(data.get("in_leaves", ())),
                   tuple(data.get("out_leaves", ())),
                   frozenset(data.get("closed_leaves", ())),
                   data.get("orientation_sign", 1))


def bw_relabel(g, hperm, vperm):
    return BWGraph(
        apply_relabel(g.graph, hperm, vperm),
        tuple(vperm[v] for v in g.white_order),
        tuple(hperm[h] for h in g.start),
        tuple(vperm[v] for v in g.in_leaves),
        tuple(vperm[v] for v in g.out_leaves),
        frozenset(vperm[v] for v in g.closed),
        g.orientation)


def _degenerate_centers(g):
    """Black centers of degenerate corolla components."""
    labeled = g.labeled_leaves | set(g.unlabeled_leaves())
    out = set()
    for comp_vs in g.graph.component_vertices():
        inner = [v for v in comp_vs if v not in labeled]
        if len(inner) != 1 or inner[0] in g.whites:
            continue
        c = inner[0]
        if g.graph.valence(c) <= 2 and len(comp_vs) == g.graph.valence(c) + 1:
            out.add(c)
    return out


def validate_bw(g, generalized=False):
    """Check the (generalized) black-and-white graph invariants."""
    validate(g.graph)
    whites = g.whites
    if len(whites) != len(g.white_order):
        raise FatGraphError("repeated white vertex")
    leaves = set(g.graph.leaves)
    ins, outs = set(g.in_leaves), set(g.out_leaves)
    if len(ins) != len(g.in_leaves) or len(outs) != len(g.out_leaves):
        raise LabelOverlap("repeated leaf in ordering")
    if ins & outs:
        raise LabelOverlap("a leaf is both incoming and outgoing")
    if not (ins | outs) <= leaves:
        raise LabelOverlap("labeled vertex is not a leaf")
    if not g.closed <= ins | outs:
        raise LabelOverlap("closed set contains an unlabeled vertex")
    if g.closed & outs:
        raise ClosedOutgoingLeaf("outgoing leaves must be open")
    if whites & leaves or whites & ins or whites & outs:
        raise WhiteVertexLabeled("white vertices carry no boundary labels")
    if len(g.start) != len(g.white_order):
        raise BadWhiteStart("start list misaligned")
    for w, s in zip(g.white_order, g.start):
        if not (0 <= s < g.graph.n) or g.graph.source[s] != w:
            raise BadWhiteStart("start %r is not at white vertex %r" % (s, w))
    for a, b in g.graph.edges():
        va, vb = g.graph.source[a], g.graph.source[b]
        if va in leaves and vb in leaves:
            raise DegenerateNotCorolla(
                "edge (%d,%d) joins two leaves" % (a, b))
    degenerate = _degenerate_centers(g)
    for v in range(g.graph.num_vertices):
        if v in leaves or v in whites or v in degenerate:
            continue
        if g.graph.valence(v) < 3:
            raise BlackVertexTooSmall(
                "black inner vertex %d has valence %d"
                % (v, g.graph.valence(v)))
    starts = set(g.start)
    if not generalized:
        for u in g.unlabeled_leaves():
            hs = [h for h in range(g.graph.n) if g.graph.source[h] == u]
            partner = g.graph.involution[hs[0]]
            if partner not in starts:
                raise UnlabeledLeafNotAtStart(
                    "unlabeled leaf %d is not at a white start" % u)
    _check_closed_alone_bw(g)


def _check_closed_alone_bw(g):
    labeled = g.labeled_leaves
    for cycle in boundary_cycles(g.graph):
        on_cycle = {g.graph.source[h] for h in cycle.half_edges} & labeled
        if on_cycle & g.closed and len(on_cycle) > 1:
            raise openclosed.ClosedLeafSharesCycle(
                "closed leaf shares its cycle with %r" % (sorted(on_cycle),))


def degree(g):
    """deg = sum(|v|-3) over inner black vertices + sum(|v|-1) over whites."""
    whites = g.whites
    leaves = set(g.graph.leaves)
    degenerate = _degenerate_centers(g)
    total = 0
    for v in range(g.graph.num_vertices):
        val = g.graph.valence(v)
        if v in whites:
            total += val - 1
        elif v not in leaves and v not in degenerate:
            total += val - 3
    return total


def topological_type(g):
    """Cobordism type of a black-and-white graph.

    The outgoing roster lists the white vertices (in their order) first and
    the outgoing open leaves after them.
    """
    in_marks = [("leaf", v, "closed" if v in g.closed else "open")
                for v in g.in_leaves]
    out_marks = [("virtual", w, "closed") for w in g.white_order] + \
                [("leaf", v, "open") for v in g.out_leaves]
    return type_from_markings(g.graph, in_marks, out_marks)


# ---------------------------------------------------------------------------
# canonical forms and orientation bookkeeping
# ---------------------------------------------------------------------------

def _bw_colors(g, marked_halves=()):
    vcolor = {}
    whites = {v: k for k, v in enumerate(g.white_order)}
    in_pos = {v: k for k, v in enumerate(g.in_leaves)}
    out_pos = {v: k for k, v in enumerate(g.out_leaves)}
    for v in range(g.graph.num_vertices):
        if v in whites:
            vcolor[v] = ("w", whites[v])
        elif v in in_pos:
            vcolor[v] = ("in", in_pos[v], v in g.closed)
        elif v in out_pos:
            vcolor[v] = ("out", out_pos[v])
        elif v in g.graph.leaves:
            vcolor[v] = ("u",)
        else:
            vcolor[v] = ("b",)
    starts = set(g.start)
    marked = set(marked_halves)
    hcolor = {h: ((h in starts), (h in marked)) for h in range(g.graph.n)}
    return vcolor, hcolor


@lru_cache(maxsize=65536)
def _bw_canonical_cached(g):
    vcolor, hcolor = _bw_colors(g)
    return canonical_data(g.graph, vcolor, hcolor)


def canonical_instance(g):
    """Canonical key, canonical representative, relabeling sign, parity data.

    Returns ``(key, canonical_graph, sign, has_odd_automorphism)``.  The sign
    is the parity of the relabeling on vertices times half edges, and a
    generator with an orientation-reversing automorphism is zero in the
    chain complex.
    """
    base = replace(g, orientation=1)
    key, hperm, vperm, auts = _bw_canonical_cached(base)
    sign = _perm_parity(list(hperm)) * _perm_parity(list(vperm))
    odd = any(_perm_parity(list(hp)) * _perm_parity(list(vp)) == -1
              for hp, vp in auts)
    return key, bw_relabel(base, hperm, vperm), sign, odd


def bw_key(g):
    return canonical_instance(g)[0]


def pair_key(g, e_half):
    """Canonical key of a graph with one marked edge (for blow-up dedup)."""
    base = replace(g, orientation=1)
    e = base.graph.edge_of(e_half)
    vcolor, hcolor = _bw_colors(base, marked_halves=e)
    key, _, _, _ = canonical_data(base.graph, vcolor, hcolor)
    return key


def _ref_seq(graph):
    return [("v", v) for v in range(graph.num_vertices)] + \
           [("h", h) for h in range(graph.n)]


def _dst_seq(hmap, vmap):
    vs = [("v", k) for k, _ in sorted(vmap.items(), key=lambda t: t[1])]
    hs = [("h", k) for k, _ in sorted(hmap.items(), key=lambda t: t[1])]
    return vs + hs


class FormalSum:
    """Integer combination of canonical oriented generators.

    Generators with orientation-reversing automorphisms are dropped; stored
    coefficients are never zero.
    """

    def __init__(self):
        self.coeffs = {}
        self.reps = {}

    def add(self, g, coeff=1):
        if coeff == 0:
            return
        key, can, sign, odd = canonical_instance(g)
        if odd:
            return
        c = self.coeffs.get(key, 0) + coeff * g.orientation * sign
        if c == 0:
            self.coeffs.pop(key, None)
            self.reps.pop(key, None)
        else:
            self.coeffs[key] = c
            self.reps[key] = can
        return

    def add_sum(self, other, scale=1):
        for key, c in other.coeffs.items():
            cc = self.coeffs.get(key, 0) + scale * c
            if cc == 0:
                self.coeffs.pop(key, None)
                self.reps.pop(key, None)
            else:
                self.coeffs[key] = cc
                self.reps[key] = other.reps[key]

    def items(self):
        return sorted(self.coeffs.items())

    def terms(self):
        """(coefficient, canonical representative) pairs, sorted by key."""
        return [(self.coeffs[k], self.reps[k]) for k in sorted(self.coeffs)]

    def is_zero(self):
        return not self.coeffs

    def __eq__(self, other):
        return isinstance(other, FormalSum) and self.coeffs == other.coeffs

    def __repr__(self):
        if not self.coeffs:
            return "FormalSum(0)"
        return "FormalSum(%s)" % ", ".join(
            "%+d*%s" % (c, hash(k)) for k, c in self.items())


def singleton(g, coeff=1):
    s = FormalSum()
    s.add(g, coeff)
    return s


# ---------------------------------------------------------------------------
# underlying graph of a generalized graph
# ---------------------------------------------------------------------------

def _bad_unlabeled_leaves(g):
    starts = set(g.start)
    bad = []
    for u in g.unlabeled_leaves():
        hs = [h for h in range(g.graph.n) if g.graph.source[h] == u]
        if g.graph.involution[hs[0]] not in starts:
            bad.append(u)
    return bad


def underlying(g):
    """The underlying black-and-white graph, or None when it vanishes.

    An unlabeled leaf away from the white starts is deleted together with
    its trivalent black support vertex (fusing the two remaining edges), with
    the wedge-reordering sign folded into the orientation; if the support is
    white or has valence above three the graph is zero.
    """
    bad = _bad_unlabeled_leaves(g)
    if not bad:
        return g
    u = bad[0]
    graph = g.graph
    h_u = next(h for h in range(graph.n) if graph.source[h] == u)
    h_l = graph.involution[h_u]
    v_l = graph.source[h_l]
    if v_l in g.whites or graph.valence(v_l) != 3 or v_l in g.labeled_leaves:
        return None
    h1 = graph.sigma[h_l]
    h2 = graph.sigma[h1]
    p1, p2 = graph.involution[h1], graph.involution[h2]
    if {p1, p2} == {h1, h2}:
        return None  # a loop at the support: deleting it strands a circle
    b = GraphBuilder.from_graph(graph)
    b.remove_halfedge(h_u)
    b.remove_halfedge(h_l)
    b.remove_halfedge(h1)
    b.remove_halfedge(h2)
    b.inv[p1] = p2
    b.inv[p2] = p1
    b.remove_vertex(u)
    b.remove_vertex(v_l)
    out, hmap, vmap = b.freeze()
    src = _ref_seq(graph)
    front = [("v", v_l), ("h", h1), ("h", h2), ("h", h_l), ("h", h_u),
             ("v", u)]
    s1 = front_sign(src, front)
    rest = [x for x in src if x not in set(front)]
    s2 = reorder_sign(rest, _dst_seq(hmap, vmap))
    res = BWGraph(
        out,
        tuple(vmap[v] for v in g.white_order),
        tuple(hmap[h] for h in g.start),
        tuple(vmap[v] for v in g.in_leaves),
        tuple(vmap[v] for v in g.out_leaves),
        frozenset(vmap[v] for v in g.closed),
        g.orientation * s1 * s2)
    return underlying(res)


# ---------------------------------------------------------------------------
# edge collapse and blow-ups
# ---------------------------------------------------------------------------

def _edge_halves(g, e):
    if isinstance(e, int):
        return e, g.graph.involution[e]
    a, b = e
    if g.graph.involution[a] != b:
        raise FatGraphError("(%r,%r) is not an edge" % (a, b))
    return a, b


def collapse_edge(g, e):
    """All collapses of a non-loop, non-white-white edge, with signs.

    Returns a list of BWGraph instances whose orientations carry the induced
    sign relative to the input.  When the edge holds the start half edge of
    a white vertex there is one result per placement of the start among the
    other half edges of the black endpoint.
    """
    h1, h2 = _edge_halves(g, e)
    v1, v2 = g.graph.source[h1], g.graph.source[h2]
    if v1 == v2:
        raise LoopCollapse("edge (%d,%d) is a loop" % (h1, h2))
    if v1 in g.whites and v2 in g.whites:
        raise WhiteWhiteCollapse("edge joins two white vertices")
    if v1 in g.labeled_leaves or v2 in g.labeled_leaves:
        raise FatGraphError("collapsing a labeled leaf edge")
    if v2 in g.whites:
        h1, h2 = h2, h1
        v1, v2 = v2, v1
    start_on_edge = v1 in g.whites and g.start_of(v1) == h1
    if start_on_edge:
        placements = [h for h in g.graph.vertex_cycle(v2) if h != h2]
    else:
        placements = [None]
    results = []
    for placement in placements:
        b = GraphBuilder.from_graph(g.graph)
        kept, gone = b.collapse_edge(h1)
        out, hmap, vmap = b.freeze()
        src = _ref_seq(g.graph)
        front = [("v", v1), ("v", v2), ("h", h1), ("h", h2)]
        s1 = front_sign(src, front)
        rest = [x for x in src if x not in set(front)]
        # induced orientation: merged vertex first, then the rest in order
        induced = [("v", v1)] + rest
        s2 = reorder_sign(induced, _dst_seq(hmap, vmap))
        starts = list(g.start)
        if start_on_edge:
            starts[g.white_order.index(v1)] = placement
        res = BWGraph(
            out,
            tuple(vmap[v] for v in g.white_order),
            tuple(hmap[h] for h in starts),
            tuple(vmap[v] for v in g.in_leaves),
            tuple(vmap[v] for v in g.out_leaves),
            frozenset(vmap[v] for v in g.closed),
            g.orientation * s1 * s2)
        results.append(res)
    return results


def blow_ups(g):
    """All isomorphism classes of pairs (blow-up, edge) collapsing to g.

    Each returned pair carries the blow-up as a generalized BWGraph whose
    orientation collapses to the orientation of ``g``, plus the new edge as
    a half-edge index in the blow-up.
    """
    key_g = bw_key(g)
    seen = set()
    out = []
    whites = g.whites
    leaves = set(g.graph.leaves)
    for x in range(g.graph.num_vertices):
        if x in leaves:
            continue
        cyc = g.graph.vertex_cycle(x)
        m = len(cyc)
        candidates = []
        if x in whites:
            # any contiguous arc of >= 2 half edges moves to a new black
            # vertex; taking the whole cycle leaves a univalent white, and
            # each rotation anchors the new edge at a different gap
            for q in range(2, m + 1):
                for a0 in range(m):
                    candidates.append([cyc[(a0 + t) % m] for t in range(q)])
        elif m >= 4:
            # split into two contiguous arcs, both of size >= 2
            for a0 in range(m):
                for q in range(2, m - 1):
                    candidates.append([cyc[(a0 + t) % m] for t in range(q)])
        for arc in candidates:
            gt, e_half = _split_vertex(g, x, arc)
            if gt is None:
                continue
            pk = pair_key(gt, e_half)
            if pk in seen:
                continue
            matched = None
            for cand in collapse_edge(gt, e_half):
                key_c, _, sign_c, _ = canonical_instance(cand)
                if key_c == key_g:
                    matched = cand.orientation * sign_c
                    break
            if matched is None:
                continue
            seen.add(pk)
            # orient gt so that its collapse is +g (times g's orientation)
            out.append((replace(gt, orientation=g.orientation * matched),
                        e_half))
    return out


def _split_vertex(g, x, arc):
    """Blow up vertex ``x`` by moving ``arc`` onto a new vertex.

    For white ``x`` the new vertex is black and the white keeps the rest;
    for black ``x`` both parts must stay at least trivalent.  Returns the
    new instance (orientation +1) and the new edge's half edge at ``x``.
    """
    graph = g.graph
    cyc = graph.vertex_cycle(x)
    m = len(cyc)
    q = len(arc)
    is_white = x in g.whites
    if not is_white and (q < 2 or m - q < 2):
        return None, None
    if is_white and q < 2:
        return None, None
    n_v, n_u = graph.n, graph.n + 1  # new half edges: n_v stays at x
    u = graph.num_vertices
    b = GraphBuilder.from_graph(graph)
    b.add_vertex(u)
    arc_set = set(arc)
    rest = [h for h in cyc if h not in arc_set]
    # anchor: the arc is contiguous in cyc; n_v takes its place
    b.inv[n_v] = n_u
    b.inv[n_u] = n_v
    b.src[n_v] = x
    b.src[n_u] = u
    if rest:
        start_idx = cyc.index(arc[0])
        seq = [cyc[(start_idx + q + t) % m] for t in range(m - q)]
        new_cycle_x = [n_v] + seq
    else:
        new_cycle_x = [n_v]
    for k, h in enumerate(new_cycle_x):
        b.nxt[h] = new_cycle_x[(k + 1) % len(new_cycle_x)]
    new_cycle_u = [n_u] + list(arc)
    for h in arc:
        b.src[h] = u
    for k, h in enumerate(new_cycle_u):
        b.nxt[h] = new_cycle_u[(k + 1) % len(new_cycle_u)]
    out, hmap, vmap = b.freeze()
    starts = list(g.start)
    if is_white:
        wi = g.white_order.index(x)
        if g.start[wi] in arc_set:
            starts[wi] = n_v
    gt = BWGraph(
        out,
        tuple(vmap[v] for v in g.white_order),
        tuple(hmap[h] for h in starts),
        tuple(vmap[v] for v in g.in_leaves),
        tuple(vmap[v] for v in g.out_leaves),
        frozenset(vmap[v] for v in g.closed),
        1)
    try:
        validate_bw(gt, generalized=True)
    except FatGraphError:
        return None, None
    return gt, hmap[n_v]


def differential(g):
    """d(G) as a formal sum of canonical oriented generators."""
    total = FormalSum()
    for gt, _ in blow_ups(g):
        term = underlying(gt)
        if term is not None:
            total.add(term)
    return total


# ---------------------------------------------------------------------------
# the correspondence with admissible fat graphs
# ---------------------------------------------------------------------------

def expand_white(g):
    """Expand each white vertex to an admissible circle.

    A white vertex of valence n becomes an embedded circle with n edges; the
    new outgoing closed leaf sits at the vertex holding the start half edge,
    or at a bare trivalent vertex when the start leads to an unlabeled leaf
    (which is consumed).  The result is an admissible open-closed graph,
    essentially trivalent at the boundary.
    """
    validate_bw(g)
    b = GraphBuilder.from_graph(g.graph)
    next_h = g.graph.n
    next_v = g.graph.num_vertices
    new_out = []
    for wi, w in enumerate(g.white_order):
        start = g.start[wi]
        cyc = g.graph.vertex_cycle(w)
        k0 = cyc.index(start)
        spokes = [cyc[(k0 + t) % len(cyc)] for t in range(len(cyc))]
        n = len(spokes)
        partner_v = g.graph.source[g.graph.involution[start]]
        suspended = (partner_v in g.graph.leaves
                     and partner_v not in g.labeled_leaves)
        if suspended:
            b.remove_halfedge(g.graph.involution[start])
            b.remove_halfedge(start)
            b.remove_vertex(partner_v)
        # circle vertices: fresh keys; vertex j carries spoke j (except a
        # suspended vertex 0, which carries only the admissible leaf)
        vkeys = []
        for j in range(n):
            vk = next_v
            next_v += 1
            b.add_vertex(vk)
            vkeys.append(vk)
        fwd = []
        bwd = []
        for j in range(n):
            fwd.append(next_h)
            bwd.append(next_h + 1)
            next_h += 2
        y, ybar = next_h, next_h + 1
        next_h += 2
        leaf_v = next_v
        next_v += 1
        b.add_vertex(leaf_v, leaf=True)
        for j in range(n):
            b.inv[fwd[j]] = bwd[(j + 1) % n]
            b.inv[bwd[(j + 1) % n]] = fwd[j]
        b.inv[y] = ybar
        b.inv[ybar] = y
        b.src[y] = vkeys[0]
        b.src[ybar] = leaf_v
        b.nxt[ybar] = ybar
        for j in range(n):
            vk = vkeys[j]
            if j == 0:
                cycle = ([] if suspended else [spokes[0]]) + \
                    [fwd[0], y, bwd[0]]
            else:
                cycle = [spokes[j], fwd[j], bwd[j]]
            for h in cycle:
                b.src[h] = vk
            for t, h in enumerate(cycle):
                b.nxt[h] = cycle[(t + 1) % len(cycle)]
        b.remove_vertex(w)
        new_out.append(leaf_v)
    out, hmap, vmap = b.freeze()
    res = OpenClosedGraph(
        out,
        tuple(vmap[v] for v in g.in_leaves),
        tuple(vmap[v] for v in new_out) +
        tuple(vmap[v] for v in g.out_leaves),
        frozenset(vmap[v] for v in g.closed) |
        frozenset(vmap[v] for v in new_out))
    openclosed.validate_oc(res)
    if not is_admissible(res):
        raise FatGraphError("expansion failed to produce embedded circles")
    return res


def collapse_white(g):
    """Collapse the admissible circles of an essentially trivalent graph.

    Inverse to expand_white: each admissible circle becomes a white vertex
    whose half edges are the circle spokes, with the start determined by the
    admissible leaf's position (a new unlabeled start leaf for a suspended
    circle).
    """
    if not is_admissible(g):
        raise openclosed.NotAdmissible("graph is not admissible")
    if not is_essentially_trivalent(g):
        raise NotEssentiallyTrivalent(
            "a circle vertex exceeds the valence bound")
    b = GraphBuilder.from_graph(g.graph)
    next_h = g.graph.n
    next_v = g.graph.num_vertices
    white_order = []
    starts = []
    cycles = admissible_cycles(g)
    for cyc in cycles:
        if not cyc.steps:
            raise openclosed.UnsupportedType(
                "degenerate cap has no circle to collapse")
        graph = g.graph
        steps = list(cyc.steps)
        visits = [graph.source[d] for d in steps]
        spoke_at = {}
        for idx, d in enumerate(steps):
            v = visits[idx]
            arrive = graph.involution[steps[idx - 1]]
            others = [h for h in graph.vertex_cycle(v)
                      if h not in (d, arrive)
                      and not (v == cyc.base and h == cyc.attach)]
            if len(others) > 1:
                raise NotEssentiallyTrivalent(
                    "vertex %d has %d spokes" % (v, len(others)))
            spoke_at[v] = others[0] if others else None
        w = next_v
        next_v += 1
        b.add_vertex(w)
        white_order.append(w)
        base_spoke = spoke_at[visits[0]]
        tail = [spoke_at[v] for v in reversed(visits[1:])]
        if any(s is None for s in tail):
            raise NotEssentiallyTrivalent("bare circle vertex off the base")
        # dismantle the circle: leaf first, then the circle edges, splicing
        # each half edge out of its vertex cycle before the vertices go
        b.delete_leaf(graph.source[graph.involution[cyc.attach]])
        for d in steps:
            b.remove_halfedge(graph.involution[d])
            b.remove_halfedge(d)
        if base_spoke is None:
            u = next_v
            next_v += 1
            b.add_vertex(u, leaf=True)
            s_w, s_u = next_h, next_h + 1
            next_h += 2
            b.inv[s_w] = s_u
            b.inv[s_u] = s_w
            b.src[s_u] = u
            b.nxt[s_u] = s_u
            white_cycle = [s_w] + tail
        else:
            white_cycle = [base_spoke] + tail
        starts.append(white_cycle[0])
        for h in white_cycle:
            b.src[h] = w
        for t, h in enumerate(white_cycle):
            b.nxt[h] = white_cycle[(t + 1) % len(white_cycle)]
        for v in dict.fromkeys(visits):
            b.remove_vertex(v)
    out, hmap, vmap = b.freeze()
    adm_leaves = {c.leaf for c in cycles}
    res = BWGraph(
        out,
        tuple(vmap[w] for w in white_order),
        tuple(hmap[s] for s in starts),
        tuple(vmap[v] for v in g.in_leaves),
        tuple(vmap[v] for v in g.out_leaves if v not in adm_leaves),
        frozenset(vmap[v] for v in g.closed if v not in adm_leaves),
        1)
    validate_bw(res)
    return res


# ---------------------------------------------------------------------------
# DOT export
# ---------------------------------------------------------------------------

def to_dot(g, name="bwgraph"):
    """GraphViz rendering: white vertices as double circles, starts bold."""
    lines = ["graph %s {" % name]
    whites = g.whites if isinstance(g, BWGraph) else frozenset()
    starts = set(g.start) if isinstance(g, BWGraph) else set()
    graph = g.graph
    in_pos = {v: k for k, v in enumerate(g.in_leaves)}
    out_pos = {v: k for k, v in enumerate(g.out_leaves)}
    closed = g.closed
    for v in range(graph.num_vertices):
        attrs = []
        if v in whites:
            attrs.append("shape=doublecircle")
            attrs.append('label="w%d"' % (g.white_order.index(v) + 1))
        elif v in in_pos:
            kind = "closed" if v in closed else "open"
            attrs.append('label="in%d %s"' % (in_pos[v] + 1, kind))
            attrs.append("shape=box")
        elif v in out_pos:
            kind = "closed" if v in closed else "open"
            attrs.append('label="out%d %s"' % (out_pos[v] + 1, kind))
            attrs.append("shape=box")
        elif v in graph.leaves:
            attrs.append('label="unlabeled"')
            attrs.append("shape=box")
        else:
            attrs.append('label=""')
            attrs.append("shape=circle")
        lines.append("  v%d [%s];" % (v, ",".join(attrs)))
    for a, bh in graph.edges():
        style = ' [style=bold]' if (a in starts or bh in starts) else ""
        lines.append("  v%d -- v%d%s;"
                     % (graph.source[a], graph.source[bh], style))
    lines.append("}")
    return "\n".join(lines) + "\n"
