"""Fat graphs as permutation data.

A fat graph (ribbon graph) is stored as a fixed-point-free involution ``i``
pairing half edges into edges, a permutation ``sigma`` whose cycles are the
cyclic orders of the half edges around each vertex, and a source map sending
each half edge to its vertex.  Half edges are dense integers ``0..n-1`` and
vertices are dense integers ``0..nv-1``.  Leaves (univalent vertices carrying
boundary data) are recorded explicitly.

The boundary cycles of the graph are the cycles of ``omega = sigma o i``;
they correspond to the boundary components of the oriented surface obtained
by thickening the graph.
"""

from dataclasses import dataclass
from itertools import permutations, product


class FatGraphError(ValueError):
    """Base class for domain errors raised by this package."""


class FixedPointInvolution(FatGraphError):
    pass


class MismatchedSource(FatGraphError):
    pass


class BadLeafValence(FatGraphError):
    pass


class ForestContainsLeaf(FatGraphError):
    pass


class ForestHasCycle(FatGraphError):
    pass


class NonIntegerGenus(FatGraphError):
    pass


def _perm_parity(perm):
    """Parity (+1/-1) of a permutation given as a list of images.

    >>> _perm_parity([0, 1, 2])
    1
    >>> _perm_parity([1, 0, 2])
    -1
    """
    n = len(perm)
    seen = [False] * n
    sign = 1
    for s in range(n):
        if seen[s]:
            continue
        length = 0
        j = s
        while not seen[j]:
            seen[j] = True
            j = perm[j]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


def reorder_sign(seq, target):
    """Sign of the permutation taking the sequence ``seq`` to ``target``.

    Both arguments must list the same elements exactly once.  This is the
    parity used when rewriting a wedge of generators in a different order.
    """
    if len(seq) != len(target):
        raise ValueError("sequences differ in length")
    pos = {x: k for k, x in enumerate(seq)}
    if len(pos) != len(seq):
        raise ValueError("duplicate generators in wedge")
    return _perm_parity([pos[x] for x in target])


def front_sign(seq, front):
    """Sign of moving ``front`` (in the given order) to the head of ``seq``."""
    front_set = set(front)
    rest = [x for x in seq if x not in front_set]
    return reorder_sign(seq, list(front) + rest)


@dataclass(frozen=True)
class FatGraph:
    involution: tuple
    sigma: tuple
    source: tuple
    leaves: frozenset
    num_vertices: int

    @property
    def n(self):
        return len(self.involution)

    @classmethod
    def from_cycles(cls, vertex_cycles, involution_pairs, leaves=()):
        """Build a graph from explicit vertex cycles and edge pairs.

        ``vertex_cycles`` lists, per vertex, the half edges around it in
        cyclic order; ``involution_pairs`` lists the edges as pairs.
        """
        n = sum(len(c) for c in vertex_cycles)
        sigma = [None] * n
        source = [None] * n
        for v, cyc in enumerate(vertex_cycles):
            for k, h in enumerate(cyc):
                sigma[h] = cyc[(k + 1) % len(cyc)]
                source[h] = v
        inv = [None] * n
        for a, b in involution_pairs:
            inv[a] = b
            inv[b] = a
        if any(x is None for x in sigma) or any(x is None for x in inv):
            raise FatGraphError("incomplete cycle or involution data")
        return cls(tuple(inv), tuple(sigma), tuple(source),
                   frozenset(leaves), len(vertex_cycles))

    def vertex_cycle(self, v):
        """Half edges around ``v`` in cyclic order, anchored at the minimum."""
        fiber = [h for h in range(self.n) if self.source[h] == v]
        if not fiber:
            return []
        start = min(fiber)
        cyc = [start]
        h = self.sigma[start]
        while h != start:
            cyc.append(h)
            h = self.sigma[h]
        return cyc

    def valence(self, v):
        return sum(1 for h in range(self.n) if self.source[h] == v)

    def edges(self):
        """Edges as (min, max) half-edge pairs, sorted."""
        return sorted((min(h, self.involution[h]), max(h, self.involution[h]))
                      for h in range(self.n) if h < self.involution[h])

    def edge_of(self, h):
        return (min(h, self.involution[h]), max(h, self.involution[h]))

    def is_leaf_edge(self, h):
        return (self.source[h] in self.leaves
                or self.source[self.involution[h]] in self.leaves)

    def components(self):
        """Partition of the half edges under sigma/involution connectivity."""
        seen = set()
        comps = []
        for h0 in range(self.n):
            if h0 in seen:
                continue
            comp = set()
            stack = [h0]
            while stack:
                h = stack.pop()
                if h in comp:
                    continue
                comp.add(h)
                stack.append(self.sigma[h])
                stack.append(self.involution[h])
            seen |= comp
            comps.append(frozenset(comp))
        return comps

    def component_vertices(self):
        return [frozenset(self.source[h] for h in comp)
                for comp in self.components()]

    def to_json_dict(self):
        return {
            "half_edges": self.n,
            "involution": list(self.involution),
            "sigma": list(self.sigma),
            "source": list(self.source),
            "leaves": sorted(self.leaves),
        }

    @classmethod
    def from_json_dict(cls, data):
        n = data["half_edges"]
        inv = tuple(data["involution"])
        sigma = tuple(data["sigma"])
        source = tuple(data["source"])
        if not (len(inv) == len(sigma) == len(source) == n):
            raise FatGraphError("array lengths disagree with half_edges")
        nv = (max(source) + 1) if source else 0
        return cls(inv, sigma, source, frozenset(data.get("leaves", ())), nv)


@dataclass(frozen=True)
class BoundaryCycle:
    """One cycle of omega = sigma o i, with edge multiplicities."""
    half_edges: tuple
    edge_multiplicities: tuple  # sorted ((min,max) edge, count) pairs

    def multiplicity(self, edge):
        for e, m in self.edge_multiplicities:
            if e == edge:
                return m
        return 0

    @property
    def edges(self):
        return tuple(e for e, _ in self.edge_multiplicities)


@dataclass(frozen=True)
class SurfaceInvariants:
    euler_characteristic: int
    boundary_count: int
    genus: int


def validate(g):
    """Check the fat-graph invariants, raising a named error on violation."""
    n = g.n
    if sorted(g.involution) != list(range(n)):
        raise FatGraphError("involution is not a permutation")
    if sorted(g.sigma) != list(range(n)):
        raise FatGraphError("sigma is not a permutation")
    if len(g.source) != n:
        raise FatGraphError("source map has wrong length")
    for h in range(n):
        if g.involution[h] == h:
            raise FixedPointInvolution("involution fixes half edge %d" % h)
        if g.involution[g.involution[h]] != h:
            raise FatGraphError("involution is not an involution")
        if g.source[g.sigma[h]] != g.source[h]:
            raise MismatchedSource(
                "sigma maps half edge %d across vertices" % h)
    touched = set(g.source)
    if touched != set(range(g.num_vertices)):
        raise MismatchedSource("isolated or out-of-range vertex")
    for v in g.leaves:
        if v not in range(g.num_vertices):
            raise BadLeafValence("leaf %r is not a vertex" % (v,))
        if g.valence(v) != 1:
            raise BadLeafValence("leaf %d has valence %d" % (v, g.valence(v)))


def omega(g):
    """The boundary permutation omega(h) = sigma(i(h))."""
    return tuple(g.sigma[g.involution[h]] for h in range(g.n))


def boundary_cycles(g):
    """Cycle decomposition of omega, each cycle anchored at its minimum.

    Cycles are sorted by their minimal half edge, so the output is a
    deterministic function of the graph.
    """
    w = omega(g)
    seen = [False] * g.n
    cycles = []
    for h0 in range(g.n):
        if seen[h0]:
            continue
        cyc = []
        h = h0
        while not seen[h]:
            seen[h] = True
            cyc.append(h)
            h = w[h]
        mult = {}
        for h in cyc:
            e = g.edge_of(h)
            mult[e] = mult.get(e, 0) + 1
        cycles.append(BoundaryCycle(tuple(cyc), tuple(sorted(mult.items()))))
    return cycles


def surface_invariants(g):
    """Euler characteristic, boundary count and total genus of the thickening.

    Computed per connected component and aggregated; the genus of each
    component solves chi = 2 - 2g - n for its own boundary count.
    """
    validate(g)
    cycles = boundary_cycles(g)
    comps = g.components()
    chi_total = 0
    genus_total = 0
    for comp in comps:
        verts = {g.source[h] for h in comp}
        n_edges = sum(1 for h in comp if h < g.involution[h])
        chi = len(verts) - n_edges
        n_bnd = sum(1 for c in cycles if c.half_edges[0] in comp)
        two_g = 2 - chi - n_bnd
        if two_g < 0 or two_g % 2 != 0:
            raise NonIntegerGenus(
                "chi=%d with %d boundary cycles" % (chi, n_bnd))
        chi_total += chi
        genus_total += two_g // 2
    return SurfaceInvariants(chi_total, len(cycles), genus_total)


# ---------------------------------------------------------------------------
# mutable builder for graph surgery
# ---------------------------------------------------------------------------

class GraphBuilder:
    """Mutable half-edge structure keyed by arbitrary hashable names.

    All surgery (collapses, splittings, gluings) goes through a builder;
    ``freeze`` compacts the result back into a FatGraph together with the
    key-to-index maps, using the insertion order of the keys so that callers
    control the reference ordering of the result.
    """

    def __init__(self):
        self.inv = {}
        self.nxt = {}   # sigma as successor map
        self.src = {}
        self.vkeys = {}  # vertex key -> None (ordered set)
        self.leaf_keys = set()

    @classmethod
    def from_graph(cls, g):
        b = cls()
        for v in range(g.num_vertices):
            b.vkeys[v] = None
        for h in range(g.n):
            b.inv[h] = g.involution[h]
            b.nxt[h] = g.sigma[h]
            b.src[h] = g.source[h]
        b.leaf_keys = set(g.leaves)
        return b

    def half_edges_at(self, v):
        return [h for h in self.inv if self.src[h] == v]

    def cycle_at(self, v, start=None):
        hs = self.half_edges_at(v)
        if not hs:
            return []
        h0 = start if start is not None else hs[0]
        cyc = [h0]
        h = self.nxt[h0]
        while h != h0:
            cyc.append(h)
            h = self.nxt[h]
        return cyc

    def prev(self, h):
        p = h
        while self.nxt[p] != h:
            p = self.nxt[p]
        return p

    def add_vertex(self, key, leaf=False):
        if key in self.vkeys:
            raise FatGraphError("duplicate vertex key %r" % (key,))
        self.vkeys[key] = None
        if leaf:
            self.leaf_keys.add(key)

    def remove_halfedge(self, h):
        """Splice ``h`` out of its vertex cycle and drop it."""
        p = self.prev(h)
        if p == h:
            pass  # last half edge at its vertex
        else:
            self.nxt[p] = self.nxt[h]
        del self.nxt[h]
        del self.inv[h]
        del self.src[h]

    def remove_vertex(self, v):
        if self.half_edges_at(v):
            raise FatGraphError("vertex %r still has half edges" % (v,))
        del self.vkeys[v]
        self.leaf_keys.discard(v)

    def insert_arc_in_corner(self, before_h, arc):
        """Insert the half edges ``arc`` so they follow ``before_h`` in sigma."""
        v = self.src[before_h]
        tail = self.nxt[before_h]
        cur = before_h
        for s in arc:
            self.src[s] = v
            self.nxt[cur] = s
            cur = s
        self.nxt[cur] = tail

    def collapse_edge(self, h1):
        """Collapse the non-loop edge containing ``h1``; keep h1's vertex key.

        The surviving vertex keeps the key of ``h1``'s source.  Returns the
        (kept, removed) vertex keys.
        """
        h2 = self.inv[h1]
        v1, v2 = self.src[h1], self.src[h2]
        if v1 == v2:
            raise FatGraphError("cannot collapse a loop")
        arc2 = self.cycle_at(v2, self.nxt[h2])[:-1]  # all at v2 except h2
        p1 = self.prev(h1)
        # splice v2's remaining half edges into v1's cycle in place of h1
        self.remove_halfedge(h2)
        tail = self.nxt[h1] if self.nxt[h1] != h1 else None
        self.remove_halfedge(h1)
        for s in arc2:
            self.src[s] = v1
        if arc2:
            if tail is None or p1 == h1:
                # v1 had only h1; arc2 forms the whole cycle
                for k, s in enumerate(arc2):
                    self.nxt[s] = arc2[(k + 1) % len(arc2)]
            else:
                cur = p1
                for s in arc2:
                    self.nxt[cur] = s
                    cur = s
                self.nxt[cur] = tail
        self.remove_vertex(v2)
        return v1, v2

    def delete_leaf(self, leaf_v):
        """Delete a univalent vertex together with its edge."""
        hs = self.half_edges_at(leaf_v)
        if len(hs) != 1:
            raise FatGraphError("vertex %r is not univalent" % (leaf_v,))
        h_leaf = hs[0]
        h_in = self.inv[h_leaf]
        self.remove_halfedge(h_leaf)
        self.remove_halfedge(h_in)
        self.remove_vertex(leaf_v)
        return h_in

    def fuse_bivalent(self, v):
        """Delete a bivalent vertex, joining its two edges into one.

        Returns the pair of outward half edges that now form the fused edge.
        """
        hs = self.cycle_at(v)
        if len(hs) != 2:
            raise FatGraphError("vertex %r is not bivalent" % (v,))
        a, b = hs
        pa, pb = self.inv[a], self.inv[b]
        if pa == b:
            raise FatGraphError("cannot fuse a loop at %r" % (v,))
        self.remove_halfedge(a)
        self.remove_halfedge(b)
        self.inv[pa] = pb
        self.inv[pb] = pa
        self.remove_vertex(v)
        return pa, pb

    def freeze(self):
        """Compact into a FatGraph; returns (graph, halfedge_map, vertex_map)."""
        vlist = [v for v in self.vkeys if self.half_edges_at(v) or True]
        for v in vlist:
            if not self.half_edges_at(v):
                raise FatGraphError("isolated vertex %r" % (v,))
        vmap = {v: k for k, v in enumerate(vlist)}
        hlist = list(self.inv)
        hmap = {h: k for k, h in enumerate(hlist)}
        n = len(hlist)
        inv = tuple(hmap[self.inv[h]] for h in hlist)
        sigma = tuple(hmap[self.nxt[h]] for h in hlist)
        source = tuple(vmap[self.src[h]] for h in hlist)
        leaves = frozenset(vmap[v] for v in self.leaf_keys)
        return FatGraph(inv, sigma, source, leaves, len(vlist)), hmap, vmap


def _forest_check(g, forest_edges):
    forest_edges = {(min(a, b), max(a, b)) for a, b in forest_edges}
    for a, b in forest_edges:
        if g.involution[a] != b:
            raise FatGraphError("(%d,%d) is not an edge" % (a, b))
        if g.is_leaf_edge(a):
            raise ForestContainsLeaf("edge (%d,%d) touches a leaf" % (a, b))
    # acyclicity via union-find on vertices
    parent = list(range(g.num_vertices))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for a, b in forest_edges:
        ra, rb = find(g.source[a]), find(g.source[b])
        if ra == rb:
            raise ForestHasCycle("forest contains a cycle through (%d,%d)"
                                 % (a, b))
        parent[ra] = rb
    return forest_edges


def collapse_forest_tracked(g, forest_edges):
    """Collapse a forest; also return half-edge and vertex maps.

    The maps send surviving old indices to new indices.
    """
    forest_edges = _forest_check(g, forest_edges)
    b = GraphBuilder.from_graph(g)
    for a, _ in sorted(forest_edges):
        b.collapse_edge(a)
    out, hmap, vmap = b.freeze()
    return out, hmap, vmap


def collapse_forest(g, forest_edges):
    """Collapse every tree of the forest to a single vertex."""
    validate(g)
    return collapse_forest_tracked(g, forest_edges)[0]


# ---------------------------------------------------------------------------
# canonical forms and automorphisms
# ---------------------------------------------------------------------------

_EMPTY_KEY = ("empty",)


def _component_record(g, root, vcolor, hcolor):
    """Deterministic traversal record of root's component, rooted at ``root``."""
    order = [root]
    pos = {root: 0}
    k = 0
    while k < len(order):
        h = order[k]
        k += 1
        for nb in (g.sigma[h], g.involution[h]):
            if nb not in pos:
                pos[nb] = len(order)
                order.append(nb)
    nsigma = tuple(pos[g.sigma[h]] for h in order)
    ninv = tuple(pos[g.involution[h]] for h in order)
    hcolors = tuple(hcolor[h] for h in order)
    vcolors = tuple(vcolor[g.source[h]] for h in order)
    record = (len(order), nsigma, ninv, hcolors, vcolors)
    return record, order


def _canonical_component(g, comp, vcolor, hcolor):
    """Minimal record over all roots plus the realizing traversal orders."""
    best = None
    best_orders = []
    for root in sorted(comp):
        record, order = _component_record(g, root, vcolor, hcolor)
        if best is None or record < best:
            best = record
            best_orders = [order]
        elif record == best:
            best_orders.append(order)
    return best, best_orders


def canonical_data(g, vcolor=None, hcolor=None):
    """Canonical key, relabeling and automorphisms of a colored fat graph.

    Returns ``(key, hperm, vperm, automorphisms)`` where ``hperm`` and
    ``vperm`` send old labels to canonical labels, and ``automorphisms`` is
    the list of all color-preserving automorphisms as (hperm, vperm) pairs
    in old labels.
    """
    if vcolor is None:
        vcolor = {v: ("leaf",) if v in g.leaves else ("v",)
                  for v in range(g.num_vertices)}
    if hcolor is None:
        hcolor = {h: 0 for h in range(g.n)}
    if g.n == 0:
        return _EMPTY_KEY, (), (), [((), ())]
    comps = g.components()
    recs = []
    for ci, comp in enumerate(comps):
        record, orders = _canonical_component(g, comp, vcolor, hcolor)
        recs.append((record, ci, orders))
    recs.sort(key=lambda t: (t[0], min(t[2][0])))
    key = tuple(r[0] for r in recs)

    hperm = [None] * g.n
    vperm = [None] * g.num_vertices
    h_off = 0
    v_off = 0
    canonical_orders = []
    for record, ci, orders in recs:
        order = orders[0]
        canonical_orders.append((record, order))
        vseen = {}
        for k, h in enumerate(order):
            hperm[h] = h_off + k
            v = g.source[h]
            if v not in vseen:
                vseen[v] = v_off + len(vseen)
        for v, nv in vseen.items():
            vperm[v] = nv
        h_off += len(order)
        v_off += len(vseen)

    # automorphisms: permute equal-record components, compose root matchings
    groups = {}
    for record, ci, orders in recs:
        groups.setdefault(record, []).append((ci, orders))
    auts = []
    group_items = list(groups.values())

    def vertex_map_of(order_a, order_b):
        vm = {}
        for ha, hb in zip(order_a, order_b):
            va, vb = g.source[ha], g.source[hb]
            if va in vm and vm[va] != vb:
                return None
            vm[va] = vb
        return vm

    choices = []
    for members in group_items:
        perms_here = []
        for target_order in permutations(range(len(members))):
            maps = []
            ok = True
            for a_idx, b_idx in enumerate(target_order):
                _, orders_a = members[a_idx]
                _, orders_b = members[b_idx]
                base = orders_a[0]
                opts = []
                for ob in orders_b:
                    vm = vertex_map_of(base, ob)
                    if vm is not None:
                        opts.append((base, ob, vm))
                if not opts:
                    ok = False
                    break
                maps.append(opts)
            if ok:
                for combo in product(*maps):
                    perms_here.append(combo)
        choices.append(perms_here)
    for combo_all in product(*choices):
        hmap = {}
        vmap = {}
        good = True
        for comp_combo in combo_all:
            for base, ob, vm in comp_combo:
                for ha, hb in zip(base, ob):
                    hmap[ha] = hb
                for va, vb in vm.items():
                    if va in vmap and vmap[va] != vb:
                        good = False
                    vmap[va] = vb
        if not good:
            continue
        auts.append((tuple(hmap[h] for h in range(g.n)),
                     tuple(vmap[v] for v in range(g.num_vertices))))
    return key, tuple(hperm), tuple(vperm), auts


def apply_relabel(g, hperm, vperm):
    """Relabel half edges and vertices by the given permutations."""
    n = g.n
    inv = [None] * n
    sigma = [None] * n
    source = [None] * n
    for h in range(n):
        inv[hperm[h]] = hperm[g.involution[h]]
        sigma[hperm[h]] = hperm[g.sigma[h]]
        source[hperm[h]] = vperm[g.source[h]]
    leaves = frozenset(vperm[v] for v in g.leaves)
    return FatGraph(tuple(inv), tuple(sigma), tuple(source), leaves,
                    g.num_vertices)


@dataclass(frozen=True)
class CanonicalForm:
    key: tuple
    half_relabel: tuple
    vertex_relabel: tuple


def canonical_form(g, labels=None):
    """Canonical key and relabeling of a (optionally leaf-labeled) fat graph.

    Two graphs get equal keys exactly when they are isomorphic as fat graphs
    respecting the leaf labels.  ``labels`` maps leaf vertices to arbitrary
    hashable labels.
    """
    validate(g)
    vcolor = _label_colors(g, labels)
    key, hperm, vperm, _ = canonical_data(g, vcolor)
    return CanonicalForm(key, hperm, vperm)


def automorphisms(g, labels=None):
    """All label-preserving automorphisms as (half-edge, vertex) perm pairs."""
    validate(g)
    vcolor = _label_colors(g, labels)
    _, _, _, auts = canonical_data(g, vcolor)
    return auts


def _label_colors(g, labels):
    labels = labels or {}
    vcolor = {}
    for v in range(g.num_vertices):
        if v in labels:
            vcolor[v] = ("leaf", labels[v])
        elif v in g.leaves:
            vcolor[v] = ("leaf",)
        else:
            vcolor[v] = ("v",)
    return vcolor


def reference_sequence(g):
    """The reference wedge ordering: vertices then half edges.

    Elements are tagged to keep the two blocks disjoint as dictionary keys.
    """
    return [("v", v) for v in range(g.num_vertices)] + \
           [("h", h) for h in range(g.n)]
