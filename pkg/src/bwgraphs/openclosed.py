"""Open-closed labelings of fat graphs and admissibility.

An open-closed graph is a fat graph whose leaves are all labeled: each leaf
is incoming or outgoing, and open or closed.  A closed leaf must be alone on
its boundary cycle.  Admissibility asks that the boundary cycles of the
outgoing closed leaves be disjoint embedded circles in the graph; those
circles are the ones collapsed to white vertices on the black-and-white side.
"""

from dataclasses import dataclass, field

from .fatgraph import (
    FatGraph, FatGraphError, GraphBuilder, apply_relabel, boundary_cycles,
    canonical_data, validate,
)


class InnerVertexTooSmall(FatGraphError):
    pass


class ClosedLeafSharesCycle(FatGraphError):
    pass


class LabelOverlap(FatGraphError):
    pass


class DegenerateNotCorolla(FatGraphError):
    pass


class NotAdmissible(FatGraphError):
    pass


class NotEssentiallyTrivalent(FatGraphError):
    pass


class CountMismatch(FatGraphError):
    pass


class UnsupportedType(FatGraphError):
    pass


@dataclass(frozen=True)
class OpenClosedGraph:
    graph: FatGraph
    in_leaves: tuple
    out_leaves: tuple
    closed: frozenset

    @property
    def labeled_leaves(self):
        return set(self.in_leaves) | set(self.out_leaves)

    def closed_in(self):
        return tuple(v for v in self.in_leaves if v in self.closed)

    def closed_out(self):
        return tuple(v for v in self.out_leaves if v in self.closed)

    def open_in(self):
        return tuple(v for v in self.in_leaves if v not in self.closed)

    def open_out(self):
        return tuple(v for v in self.out_leaves if v not in self.closed)

    def to_json_dict(self):
        d = self.graph.to_json_dict()
        d["in_leaves"] = list(self.in_leaves)
        d["out_leaves"] = list(self.out_leaves)
        d["closed_leaves"] = sorted(self.closed)
        return d

    @classmethod
    def from_json_dict(cls, data):
        g = FatGraph.from_json_dict(data)
        return cls(g, tuple(data.get("in_leaves", ())),
                   tuple(data.get("out_leaves", ())),
                   frozenset(data.get("closed_leaves", ())))


def oc_relabel(g, hperm, vperm):
    return OpenClosedGraph(
        apply_relabel(g.graph, hperm, vperm),
        tuple(vperm[v] for v in g.in_leaves),
        tuple(vperm[v] for v in g.out_leaves),
        frozenset(vperm[v] for v in g.closed))


def _oc_vcolors(g):
    vcolor = {}
    for v in range(g.graph.num_vertices):
        vcolor[v] = ("v",)
    for k, v in enumerate(g.in_leaves):
        vcolor[v] = ("in", k, v in g.closed)
    for k, v in enumerate(g.out_leaves):
        vcolor[v] = ("out", k, v in g.closed)
    return vcolor


def oc_canonical(g):
    """Canonical key plus relabeling for an open-closed graph."""
    key, hperm, vperm, auts = canonical_data(g.graph, _oc_vcolors(g))
    return key, hperm, vperm, auts


def degenerate_components(g):
    """Centers of degenerate corolla components (single vertex, 1-2 leaves).

    Returns a map center_vertex -> component's leaf vertices.  The center of
    a corolla with one leaf is univalent but is not itself a leaf.
    """
    labeled = g.labeled_leaves
    out = {}
    for comp_vs in g.graph.component_vertices():
        inner = [v for v in comp_vs if v not in labeled]
        if len(inner) != 1:
            continue
        c = inner[0]
        val = g.graph.valence(c)
        if val <= 2 and len(comp_vs) == val + 1:
            out[c] = [v for v in comp_vs if v != c]
    return out


def validate_oc(g):
    """Check the open-closed invariants."""
    validate(g.graph)
    leaves = set(g.graph.leaves)
    ins, outs = set(g.in_leaves), set(g.out_leaves)
    if len(ins) != len(g.in_leaves) or len(outs) != len(g.out_leaves):
        raise LabelOverlap("repeated leaf in ordering")
    if ins & outs:
        raise LabelOverlap("a leaf is both incoming and outgoing")
    if (ins | outs) != leaves:
        raise LabelOverlap("leaf labels do not cover the leaves exactly")
    if not g.closed <= (ins | outs):
        raise LabelOverlap("closed set contains a non-leaf")
    for a, b in g.graph.edges():
        if g.graph.source[a] in leaves and g.graph.source[b] in leaves:
            raise DegenerateNotCorolla(
                "edge (%d,%d) joins two leaves" % (a, b))
    degenerate = degenerate_components(g)
    for v in range(g.graph.num_vertices):
        if v in leaves or v in degenerate:
            continue
        if g.graph.valence(v) < 3:
            raise InnerVertexTooSmall(
                "inner vertex %d has valence %d" % (v, g.graph.valence(v)))
    _check_closed_alone(g)


def _check_closed_alone(g):
    labeled = g.labeled_leaves
    for cycle in boundary_cycles(g.graph):
        on_cycle = {g.graph.source[h] for h in cycle.half_edges} & labeled
        closed_here = on_cycle & g.closed
        if closed_here and len(on_cycle) > 1:
            raise ClosedLeafSharesCycle(
                "closed leaf shares its cycle with %r" % (sorted(on_cycle),))


def closed_cycle_steps(graph, leaf):
    """Boundary-cycle traversal of a closed leaf, without the leaf edge.

    Returns ``(base_vertex, attach_half, steps)`` where ``attach_half`` is
    the half edge at the base vertex pointing to the leaf and ``steps`` lists
    the remaining half edges of the cycle in traversal order starting at the
    base vertex.  ``steps`` is empty exactly for a degenerate corolla.
    """
    hs = [h for h in range(graph.n) if graph.source[h] == leaf]
    if len(hs) != 1:
        raise FatGraphError("vertex %r is not a leaf" % (leaf,))
    h_leaf = hs[0]
    attach = graph.involution[h_leaf]
    base = graph.source[attach]
    # walk omega from the half edge right after the leaf until we return
    steps = []
    h = graph.sigma[attach]
    while h != attach and h != h_leaf:
        steps.append(h)
        h = graph.sigma[graph.involution[h]]
        if len(steps) > graph.n:
            raise FatGraphError("boundary traversal did not close")
    return base, attach, steps


@dataclass(frozen=True)
class AdmissibleCycle:
    """One outgoing closed boundary circle of an admissible graph."""
    leaf: int
    base: int            # circle vertex carrying the admissible leaf
    attach: int          # half edge at base pointing to the leaf
    steps: tuple         # non-leaf half edges in boundary-traversal order


def admissible_cycles(g):
    """Circle data for each outgoing closed leaf, in out-roster order.

    Degenerate corollas yield cycles with no steps.
    """
    cycles = []
    for leaf in g.closed_out():
        base, attach, steps = closed_cycle_steps(g.graph, leaf)
        cycles.append(AdmissibleCycle(leaf, base, attach, tuple(steps)))
    return cycles


def cycle_vertices(g, cyc):
    graph = g.graph if isinstance(g, OpenClosedGraph) else g
    return [graph.source[h] for h in cyc.steps]


def cycle_edges(g, cyc):
    graph = g.graph if isinstance(g, OpenClosedGraph) else g
    return [graph.edge_of(h) for h in cyc.steps]


def is_admissible(g):
    """True iff the outgoing closed cycles are disjoint embedded circles."""
    validate_oc(g)
    seen_vertices = set()
    seen_edges = set()
    for cyc in admissible_cycles(g):
        if not cyc.steps:
            continue  # degenerate cap: nothing to embed
        verts = cycle_vertices(g, cyc)
        edges = cycle_edges(g, cyc)
        if len(set(edges)) != len(edges):
            return False  # an edge traversed twice
        if len(set(verts)) != len(verts):
            return False  # a vertex visited twice
        if seen_vertices & set(verts) or seen_edges & set(edges):
            return False  # meets another admissible circle
        seen_vertices |= set(verts)
        seen_edges |= set(edges)
    return True


# ---------------------------------------------------------------------------
# topological type
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ComponentType:
    genus: int
    in_closed: int
    in_open: int
    out_closed: int
    out_open: int
    free: int

    @property
    def boundary_count(self):
        return (self.in_closed + self.in_open + self.out_closed
                + self.out_open + self.free)


@dataclass(frozen=True)
class TopologicalType:
    """Cobordism type: per-component counts plus the global boundary orders.

    ``in_order`` and ``out_order`` list, per global boundary position, a pair
    ``(component_index, kind)`` with kind 'closed' or 'open'.  ``circles``
    records which marks share a boundary circle; it is derived bookkeeping
    used by composition and excluded from equality.
    """
    components: tuple
    in_order: tuple
    out_order: tuple
    circles: tuple = field(compare=False, default=())

    @property
    def euler_characteristic(self):
        chi = 0
        for c, circ in zip(self.components, self.circles):
            chi += 2 - 2 * c.genus - len(circ)
        return chi

    def is_positive(self):
        """Each component has a boundary neither free nor outgoing closed."""
        return all(c.in_closed + c.in_open + c.out_open > 0
                   for c in self.components)


def _normalize_type(raw_components, raw_circles, in_order, out_order):
    """Sort components canonically and remap the order entries."""
    keys = []
    for ci, comp in enumerate(raw_components):
        ins = tuple(k for k, (c, _) in enumerate(in_order) if c == ci)
        outs = tuple(k for k, (c, _) in enumerate(out_order) if c == ci)
        keys.append(((comp.genus, comp.in_closed, comp.in_open,
                      comp.out_closed, comp.out_open, comp.free,
                      ins, outs), ci))
    keys.sort()
    remap = {old: new for new, (_, old) in enumerate(keys)}
    components = tuple(raw_components[old] for _, old in keys)
    circles = tuple(tuple(sorted(raw_circles[old])) for _, old in keys)
    in_order = tuple((remap[c], kind) for c, kind in in_order)
    out_order = tuple((remap[c], kind) for c, kind in out_order)
    return TopologicalType(components, in_order, out_order, circles)


def type_from_markings(graph, in_marks, out_marks):
    """Topological type of a marked fat graph.

    ``in_marks`` and ``out_marks`` list the global boundary rosters in
    order.  Each entry is ``("leaf", vertex, kind)`` for a labeled leaf or
    ``("virtual", vertex, "closed")`` for an extra closed boundary attached
    to the component of ``vertex`` without being a cycle of the plain graph
    (a white vertex on the black-and-white side).
    """
    cycles = boundary_cycles(graph)
    comp_vs = graph.component_vertices()

    def comp_of_vertex(v):
        for k, vs in enumerate(comp_vs):
            if v in vs:
                return k
        raise FatGraphError("vertex %r in no component" % (v,))

    leaf_mark = {}
    for side, roster in (("in", in_marks), ("out", out_marks)):
        for pos, (tag, v, kind) in enumerate(roster):
            if tag == "leaf":
                leaf_mark[v] = (side, pos, kind)

    counts = [dict(p1=0, p2=0, q1=0, q2=0, f=0) for _ in comp_vs]
    circles = [[] for _ in comp_vs]
    for cycle in cycles:
        ci = comp_of_vertex(graph.source[cycle.half_edges[0]])
        marks = sorted({leaf_mark[graph.source[h]]
                        for h in cycle.half_edges
                        if graph.source[h] in leaf_mark})
        circles[ci].append(tuple(marks))
        if not marks:
            counts[ci]["f"] += 1
        for side, _, kind in marks:
            key = {"in": {"closed": "p1", "open": "p2"},
                   "out": {"closed": "q1", "open": "q2"}}[side][kind]
            counts[ci][key] += 1
    virtual_count = [0] * len(comp_vs)
    for pos, (tag, v, kind) in enumerate(out_marks):
        if tag == "virtual":
            ci = comp_of_vertex(v)
            counts[ci]["q1"] += 1
            virtual_count[ci] += 1
            circles[ci].append((("out", pos, "closed"),))

    raw_components = []
    comps = graph.components()
    for ci, comp in enumerate(comps):
        verts = comp_vs[ci]
        n_edges = sum(1 for h in comp if h < graph.involution[h])
        # each virtual boundary replaces a disk by an annulus in the
        # thickened surface, lowering chi by one
        chi = len(verts) - n_edges - virtual_count[ci]
        n_total = len(circles[ci])
        two_g = 2 - chi - n_total
        if two_g < 0 or two_g % 2:
            raise FatGraphError("non-integer genus in component %d" % ci)
        c = counts[ci]
        raw_components.append(ComponentType(
            two_g // 2, c["p1"], c["p2"], c["q1"], c["q2"], c["f"]))

    in_order = tuple((comp_of_vertex(v), kind) for _, v, kind in in_marks)
    out_order = tuple((comp_of_vertex(v), kind) for _, v, kind in out_marks)
    return _normalize_type(raw_components, circles, in_order, out_order)


def topological_type(g):
    """Topological type of the fattened open-closed graph."""
    validate_oc(g)
    in_marks = [("leaf", v, "closed" if v in g.closed else "open")
                for v in g.in_leaves]
    out_marks = [("leaf", v, "closed" if v in g.closed else "open")
                 for v in g.out_leaves]
    return type_from_markings(g.graph, in_marks, out_marks)


def compose_types(t2, t1):
    """Type-level composition: glue t1's outputs to t2's inputs in order.

    Raises CountMismatch when the boundary rosters do not align, and
    UnsupportedType when an open gluing would split a boundary circle (the
    mark roster does not determine how the marks distribute).
    """
    if len(t1.out_order) != len(t2.in_order):
        raise CountMismatch("output/input boundary counts differ")
    for (c1, k1), (c2, k2) in zip(t1.out_order, t2.in_order):
        if k1 != k2:
            raise CountMismatch("boundary kinds do not align")
    if not t1.circles or not t2.circles:
        raise FatGraphError("types lack circle data; derive them from graphs")

    # nodes: ('1', ci) and ('2', ci)
    parent = {}

    def find(x):
        parent.setdefault(x, x)
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(a, b):
        parent[find(a)] = find(b)

    for ci in range(len(t1.components)):
        find(("1", ci))
    for ci in range(len(t2.components)):
        find(("2", ci))
    for pos, ((c1, _), (c2, _)) in enumerate(zip(t1.out_order, t2.in_order)):
        union(("1", c1), ("2", c2))

    # circles as mutable mark sets, tagged by source
    circle_pool = {}
    mark_home = {}
    nid = 0
    for tag, t in (("1", t1), ("2", t2)):
        for ci, circ_list in enumerate(t.circles):
            for marks in circ_list:
                circle_pool[nid] = (find((tag, ci)), set(
                    (tag, side, pos, kind) for side, pos, kind in marks))
                for m in circle_pool[nid][1]:
                    mark_home[m] = nid
                if not marks:
                    circle_pool[nid] = (find((tag, ci)),
                                        set(), )
                nid += 1

    open_channels = {x: 0 for x in set(find(x) for x in parent)}
    for pos, ((c1, k1), (c2, k2)) in enumerate(
            zip(t1.out_order, t2.in_order)):
        m1 = ("1", "out", pos, k1)
        m2 = ("2", "in", pos, k2)
        a, b = mark_home[m1], mark_home[m2]
        if k1 == "closed":
            # both circles vanish
            for m in circle_pool[a][1] - {m1}:
                raise FatGraphError("closed mark shares a circle")
            for m in circle_pool[b][1] - {m2}:
                raise FatGraphError("closed mark shares a circle")
            del circle_pool[a]
            del circle_pool[b]
        else:
            open_channels[find(("1", c1))] += 1
            if a == b:
                raise UnsupportedType(
                    "open gluing on a shared circle is ambiguous")
            comp_r, marks_a = circle_pool[a]
            _, marks_b = circle_pool[b]
            merged = (marks_a | marks_b) - {m1, m2}
            for m in merged:
                mark_home[m] = a
            circle_pool[a] = (comp_r, merged)
            del circle_pool[b]

    roots = sorted(set(find(x) for x in parent), key=str)
    root_index = {r: k for k, r in enumerate(roots)}
    chi = [0] * len(roots)
    for ci, comp in enumerate(t1.components):
        chi[root_index[find(("1", ci))]] += \
            2 - 2 * comp.genus - len(t1.circles[ci])
    for ci, comp in enumerate(t2.components):
        chi[root_index[find(("2", ci))]] += \
            2 - 2 * comp.genus - len(t2.circles[ci])
    for r, k in open_channels.items():
        chi[root_index[find(r)]] -= k

    counts = [dict(p1=0, p2=0, q1=0, q2=0, f=0) for _ in roots]
    circles_out = [[] for _ in roots]
    in_order = [None] * len(t1.in_order)
    out_order = [None] * len(t2.out_order)
    for cid, (comp_r, marks) in sorted(circle_pool.items()):
        k = root_index[find(comp_r)]
        new_marks = []
        for tag, side, pos, kind in sorted(marks):
            if tag == "1":
                if side != "in":
                    raise FatGraphError("unconsumed output mark")
                in_order[pos] = (k, kind)
                new_marks.append(("in", pos, kind))
                counts[k]["p1" if kind == "closed" else "p2"] += 1
            else:
                if side != "out":
                    raise FatGraphError("unconsumed input mark")
                out_order[pos] = (k, kind)
                new_marks.append(("out", pos, kind))
                counts[k]["q1" if kind == "closed" else "q2"] += 1
        if not new_marks:
            counts[k]["f"] += 1
        circles_out[k].append(tuple(sorted(new_marks)))

    raw_components = []
    for k in range(len(roots)):
        n_circ = len(circles_out[k])
        two_g = 2 - chi[k] - n_circ
        if two_g < 0 or two_g % 2:
            raise FatGraphError("composite genus is not an integer")
        c = counts[k]
        raw_components.append(ComponentType(
            two_g // 2, c["p1"], c["p2"], c["q1"], c["q2"], c["f"]))
    return _normalize_type(raw_components, circles_out,
                           tuple(in_order), tuple(out_order))


# ---------------------------------------------------------------------------
# degrees
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class MixedDegreeReport:
    mixed_degree: int
    bw_degree: int
    essentially_trivalent: bool


def _cycle_vertex_data(g):
    """(circle vertex set, marked vertices, edge count, cycle count)."""
    cycles = [c for c in admissible_cycles(g) if c.steps]
    on_cycle = set()
    marked = set()
    n_edges = 0
    for cyc in cycles:
        on_cycle |= set(cycle_vertices(g, cyc))
        marked.add(g.graph.source[cyc.attach])
        n_edges += len(cyc.steps)
    return on_cycle, marked, n_edges, len(cycles)


def is_essentially_trivalent(g):
    on_cycle, marked, _, _ = _cycle_vertex_data(g)
    for v in on_cycle:
        val = g.graph.valence(v)
        if v in marked:
            if val > 4:
                return False
        elif val > 3:
            return False
    return True


def mixed_degree(g):
    """Mixed degree and black-and-white degree of an admissible graph."""
    if not is_admissible(g):
        raise NotAdmissible("graph is not admissible")
    on_cycle, marked, n_edges, k = _cycle_vertex_data(g)
    degenerate = degenerate_components(g)
    leaves = g.labeled_leaves
    total = n_edges - k
    for v in range(g.graph.num_vertices):
        if v in leaves or v in degenerate:
            continue
        val = g.graph.valence(v)
        if v in marked:
            total += max(0, val - 4)
        else:
            total += val - 3
    return MixedDegreeReport(total, bw_degree(g), is_essentially_trivalent(g))


def make_essentially_trivalent(g):
    """Push excess half edges off the admissible cycles onto new black vertices.

    Each admissible-cycle vertex above the valence bound is blown up once:
    every half edge other than the two circle half edges and the admissible
    leaf moves to a new adjacent vertex.  Collapsing the new edges recovers
    the input.
    """
    if not is_admissible(g):
        raise NotAdmissible("graph is not admissible")
    b = GraphBuilder.from_graph(g.graph)
    next_h = g.graph.n
    next_v = g.graph.num_vertices
    for cyc in admissible_cycles(g):
        if not cyc.steps:
            continue
        steps = list(cyc.steps)
        for idx, dep in enumerate(steps):
            v = g.graph.source[dep]
            prev_step = steps[idx - 1]
            arrive = g.graph.involution[prev_step]
            marked = (v == cyc.base)
            limit = 4 if marked else 3
            if g.graph.valence(v) <= limit:
                continue
            # spokes: sigma arc from after the departing circle half edge
            # up to the arriving circle half edge
            spokes = []
            h = b.nxt[dep]
            while h != arrive:
                if marked and h == cyc.attach:
                    raise FatGraphError("admissible leaf inside spoke arc")
                spokes.append(h)
                h = b.nxt[h]
            if len(spokes) < 2:
                continue
            n_v, n_u = next_h, next_h + 1
            next_h += 2
            u = next_v
            next_v += 1
            b.add_vertex(u)
            # detach the spoke arc and close v's cycle with the new half edge
            b.nxt[dep] = n_v
            b.nxt[n_v] = arrive
            b.src[n_v] = v
            b.inv[n_v] = n_u
            b.inv[n_u] = n_v
            b.src[n_u] = u
            for s in spokes:
                b.src[s] = u
            cycle_u = [n_u] + spokes
            for k2, s in enumerate(cycle_u):
                b.nxt[s] = cycle_u[(k2 + 1) % len(cycle_u)]
    out, hmap, vmap = b.freeze()
    res = OpenClosedGraph(
        out,
        tuple(vmap[v] for v in g.in_leaves),
        tuple(vmap[v] for v in g.out_leaves),
        frozenset(vmap[v] for v in g.closed))
    validate_oc(res)
    return res


def bw_degree(g):
    """Degree of the black-and-white graph obtained by collapsing circles."""
    from . import bw
    if not is_admissible(g):
        raise NotAdmissible("graph is not admissible")
    reduced = make_essentially_trivalent(g)
    return bw.degree(bw.collapse_white(reduced))


# ---------------------------------------------------------------------------
# standard admissible circles l_n and their suspended variants
# ---------------------------------------------------------------------------

def circle_graph(n, marked_spoke=True):
    """The admissible circle with ``n`` edges and labeled spoke leaves.

    With ``marked_spoke`` the vertex carrying the admissible leaf also
    carries labeled leaf 1, giving ``n`` labeled leaves (the generic circle);
    without it that vertex is trivalent and there are ``n - 1`` labeled
    leaves (the suspended circle).
    """
    if n < 1 or (n < 2 and not marked_spoke):
        raise FatGraphError("circle too small")
    cycles = []
    pairs = []
    leaves = []
    # circle vertices 0..n-1; half edge ids allocated per vertex
    spoke = {}
    fwd = {}
    bwd = {}
    next_h = 0
    for j in range(n):
        has_spoke = marked_spoke or j != 0
        if has_spoke:
            spoke[j] = next_h
            next_h += 1
        fwd[j] = next_h
        bwd[j] = next_h + 1
        next_h += 2
    y, ybar = next_h, next_h + 1
    next_h += 2
    for j in range(n):
        cyc = []
        if j in spoke:
            cyc.append(spoke[j])
        cyc.append(fwd[j])
        if j == 0:
            cyc.append(y)
        cyc.append(bwd[j])
        cycles.append(cyc)
    for j in range(n):
        pairs.append((fwd[j], bwd[(j + 1) % n]))
    pairs.append((y, ybar))
    leaf_ids = []
    v = n
    leaf_halves = []
    for j in range(n):
        if j in spoke:
            cycles.append([next_h])
            pairs.append((spoke[j], next_h))
            leaf_halves.append(next_h)
            next_h += 1
            leaf_ids.append(v)
            v += 1
    cycles.append([ybar])
    adm_leaf = v
    g = FatGraph.from_cycles(cycles, pairs,
                             leaves=leaf_ids + [adm_leaf])
    return OpenClosedGraph(g, tuple(leaf_ids), (adm_leaf,),
                           frozenset({adm_leaf}))


def l_graph(n):
    """The generic admissible circle with n edges and n labeled leaves."""
    return circle_graph(n, marked_spoke=True)


def l_tilde_graph(n):
    """The suspended admissible circle: n edges, n - 1 labeled leaves."""
    return circle_graph(n, marked_spoke=False)
