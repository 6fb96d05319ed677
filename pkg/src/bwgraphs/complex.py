"""Generator enumeration, boundary matrices and integral homology.

Generators of a topological type are enumerated from the degree-zero ones,
which have trivalent black vertices and univalent white vertices, so their
half-edge count is pinned down by the type.  Higher degrees arise by closing
under edge collapse and under suspension (inserting an unlabeled start leaf
at a white vertex); every positive-degree generator is reachable this way.
Homology is computed integrally via Smith normal form of the boundary
matrices, with all arithmetic over Python integers.
"""

from dataclasses import dataclass, replace
from fractions import Fraction
from itertools import product

from .fatgraph import FatGraph, FatGraphError, GraphBuilder
from . import bw as bwmod
from .bw import BWGraph, BasisMiss, validate_bw
from .openclosed import TopologicalType, UnsupportedType


# ---------------------------------------------------------------------------
# generator enumeration
# ---------------------------------------------------------------------------

def _matchings(slots, forbidden_pairs):
    """Perfect matchings of ``slots`` avoiding the forbidden pairs."""
    if not slots:
        yield []
        return
    first = slots[0]
    rest = slots[1:]
    for k, other in enumerate(rest):
        if (first, other) in forbidden_pairs:
            continue
        for sub in _matchings(rest[:k] + rest[k + 1:], forbidden_pairs):
            yield [(first, other)] + sub


def _plain_cycle_counts(t):
    """Possible numbers of plain boundary cycles, per component."""
    options = []
    for c in t.components:
        base = c.in_closed + c.free
        opens = c.in_open + c.out_open
        if opens == 0:
            options.append([base])
        else:
            options.append([base + m for m in range(1, opens + 1)])
    return options


def degree_zero_generators(t):
    """Exhaustive search for the degree-zero generators of a type.

    Degree zero forces trivalent black vertices and univalent white
    vertices; the number of black vertices follows from the Euler
    characteristic of the graph, which is determined by the type up to the
    distribution of the open boundaries over the boundary circles.
    """
    if not t.is_positive():
        raise UnsupportedType(
            "every component needs a boundary that is neither free "
            "nor outgoing closed")
    whites = sum(c.out_closed for c in t.components)
    n_in = len(t.in_order)
    n_out_open = sum(1 for _, kind in t.out_order if kind == "open")
    n_leaves = n_in + n_out_open
    # components realizable as degenerate corollas: a single black center
    # of valence one or two whose edges all end in labeled leaves
    c1 = sum(1 for c in t.components
             if (c.genus, c.out_closed, c.free) == (0, 0, 0)
             and c.in_closed + c.in_open + c.out_open == 1)
    c2 = sum(1 for c in t.components
             if (c.genus, c.out_closed, c.free, c.in_closed) == (0, 0, 0, 0)
             and c.in_open + c.out_open == 2)
    found = {}
    shapes = set()
    for plain_counts in product(*_plain_cycle_counts(t)):
        chi_graph = 0
        for c, n_plain in zip(t.components, plain_counts):
            chi_graph += 2 - 2 * c.genus - n_plain
        for d1 in range(c1 + 1):
            for d2 in range(c2 + 1):
                b = d1 + whites + n_leaves - 2 * chi_graph
                if b >= 0:
                    shapes.add((b, d1, d2))
    for shape in sorted(shapes):
        b, d1, d2 = shape
        for gen in _seed_search(t, b, d1, d2, whites, n_leaves):
            key = bwmod.bw_key(gen)
            if key not in found:
                found[key] = bwmod.canonical_instance(gen)[1]
    return [found[k] for k in sorted(found)]


def _seed_search(t, n_black, n_cent1, n_cent2, n_white, n_leaves):
    """All valid degree-zero graphs with the given vertex counts.

    Vertices: ``n_black`` trivalent blacks, then degenerate corolla centers
    of valence one and two, then univalent whites, then labeled leaves.
    """
    vertex_slots = []   # per vertex: list of its slot ids
    slot_vertex = []

    def add_vertex(valence):
        v = len(vertex_slots)
        ids = []
        for _ in range(valence):
            ids.append(len(slot_vertex))
            slot_vertex.append(v)
        vertex_slots.append(ids)
        return v

    for _ in range(n_black):
        add_vertex(3)
    for _ in range(n_cent1):
        add_vertex(1)
    for _ in range(n_cent2):
        add_vertex(2)
    white_ids = tuple(add_vertex(1) for _ in range(n_white))
    leaf_ids = tuple(add_vertex(1) for _ in range(n_leaves))
    slots = list(range(len(slot_vertex)))
    if len(slots) % 2:
        return
    leaf_slots = {vertex_slots[v][0] for v in leaf_ids}
    forbidden = {(a, b) for a in leaf_slots for b in leaf_slots}
    in_kinds = [kind for _, kind in t.in_order]
    n_in = len(in_kinds)
    closed_ids = frozenset(leaf_ids[k] for k in range(n_in)
                           if in_kinds[k] == "closed")
    in_leaves = leaf_ids[:n_in]
    out_leaves = leaf_ids[n_in:]
    start_slots = tuple(vertex_slots[w][0] for w in white_ids)
    for matching in _matchings(slots, forbidden):
        for orders in product(*([[0, 1]] * n_black)):
            cycles = []
            for v, ids in enumerate(vertex_slots):
                if v < n_black and orders[v] == 1:
                    a, b_, c = ids
                    cycles.append([a, c, b_])
                else:
                    cycles.append(list(ids))
            graph = FatGraph.from_cycles(cycles, matching, leaves=leaf_ids)
            gen = BWGraph(graph, white_ids, start_slots,
                          in_leaves, out_leaves, closed_ids)
            try:
                validate_bw(gen)
                if bwmod.topological_type(gen) != t:
                    continue
            except FatGraphError:
                continue
            yield gen


def suspend_white(g, wi):
    """Insert an unlabeled leaf as the new start of white number ``wi``."""
    w = g.white_order[wi]
    old_start = g.start[wi]
    graph = g.graph
    b = GraphBuilder.from_graph(graph)
    s_w, s_u = graph.n, graph.n + 1
    u = graph.num_vertices
    b.add_vertex(u, leaf=True)
    b.inv[s_w] = s_u
    b.inv[s_u] = s_w
    b.src[s_u] = u
    b.nxt[s_u] = s_u
    b.src[s_w] = w
    prev = b.prev(old_start)
    if prev == old_start:
        b.nxt[old_start] = s_w
        b.nxt[s_w] = old_start
    else:
        b.nxt[prev] = s_w
        b.nxt[s_w] = old_start
    out, hmap, vmap = b.freeze()
    starts = list(g.start)
    starts[wi] = s_w
    return BWGraph(
        out,
        tuple(vmap[v] for v in g.white_order),
        tuple(hmap[h] for h in starts),
        tuple(vmap[v] for v in g.in_leaves),
        tuple(vmap[v] for v in g.out_leaves),
        frozenset(vmap[v] for v in g.closed),
        1)


def _collapse_moves(g):
    """Valid-generator collapses of g (degree + 1)."""
    out = []
    leaves = set(g.graph.leaves)
    whites = g.whites
    for a, b in g.graph.edges():
        va, vb = g.graph.source[a], g.graph.source[b]
        if va == vb:
            continue
        if va in leaves or vb in leaves:
            continue
        if va in whites and vb in whites:
            continue
        for res in bwmod.collapse_edge(g, (a, b)):
            out.append(res)
    return out


def _suspend_moves(g):
    out = []
    unlabeled = set(g.unlabeled_leaves())
    for wi, w in enumerate(g.white_order):
        partner = g.graph.source[g.graph.involution[g.start[wi]]]
        if partner in unlabeled:
            continue
        out.append(suspend_white(g, wi))
    return out


def enumerate_generators(t, max_degree=None):
    """All generators of the type, grouped by degree.

    Returns a dict mapping each degree to the sorted list of canonical
    generator instances.  Generators killed by an orientation-reversing
    automorphism are excluded throughout.
    """
    seeds = degree_zero_generators(t)
    by_degree = {}
    seen = set()
    frontier = []
    for gen in seeds:
        key, can, _, odd = bwmod.canonical_instance(gen)
        if key in seen:
            continue
        seen.add(key)
        frontier.append(can)
        if not odd:
            by_degree.setdefault(0, {})[key] = can
    while frontier:
        nxt = []
        for gen in frontier:
            d = bwmod.degree(gen)
            if max_degree is not None and d >= max_degree:
                continue
            for moved in _collapse_moves(gen) + _suspend_moves(gen):
                key, can, _, odd = bwmod.canonical_instance(moved)
                if key in seen:
                    continue
                seen.add(key)
                nxt.append(can)
                if not odd:
                    by_degree.setdefault(
                        bwmod.degree(can), {})[key] = can
        frontier = nxt
    return {d: [table[k] for k in sorted(table)]
            for d, table in sorted(by_degree.items())}


# ---------------------------------------------------------------------------
# chain complex assembly
# ---------------------------------------------------------------------------

@dataclass
class ChainComplex:
    generators: dict   # degree -> list of canonical BWGraph
    boundaries: dict   # degree n -> rows x cols matrix (rows: degree n-1)

    @property
    def max_degree(self):
        return max(self.generators) if self.generators else -1

    def generator_keys(self, n):
        return [bwmod.bw_key(g) for g in self.generators.get(n, [])]


def build_complex(t, max_degree=None):
    """Assemble the boundary matrices of the type's chain complex."""
    gens = enumerate_generators(t, max_degree=max_degree)
    index = {}
    for d, gen_list in gens.items():
        for k, g in enumerate(gen_list):
            index[bwmod.bw_key(g)] = (d, k)
    boundaries = {}
    top = max(gens) if gens else -1
    for d in range(1, top + 1):
        cols = gens.get(d, [])
        rows = gens.get(d - 1, [])
        mat = [[0] * len(cols) for _ in rows]
        for j, g in enumerate(cols):
            for key, coeff in bwmod.differential(g).items():
                if key not in index:
                    raise BasisMiss("differential term outside the basis")
                dd, i = index[key]
                if dd != d - 1:
                    raise BasisMiss("differential term of wrong degree")
                mat[i][j] = coeff
        boundaries[d] = mat
    return ChainComplex(gens, boundaries)


def check_dsquared(c):
    """Verify that consecutive boundary matrices compose to zero."""
    for d in sorted(c.boundaries):
        if d - 1 not in c.boundaries:
            continue
        low = c.boundaries[d - 1]
        high = c.boundaries[d]
        if not low or not high or not high[0]:
            continue
        for i in range(len(low)):
            for j in range(len(high[0])):
                s = sum(low[i][k] * high[k][j] for k in range(len(high)))
                if s != 0:
                    return False
    return True


# ---------------------------------------------------------------------------
# integer linear algebra
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SmithNormalForm:
    diagonal: tuple  # positive invariant factors d1 | d2 | ... | dr
    rank: int


def smith_normal_form(mat):
    """Smith normal form over the integers (arbitrary precision).

    Only the invariant factors are returned; they are obtained by unimodular
    row and column operations.
    """
    if not mat or not mat[0]:
        return SmithNormalForm((), 0)
    a = [row[:] for row in mat]
    m, n = len(a), len(a[0])
    diag = []
    top = 0
    while top < min(m, n):
        # find a nonzero pivot of minimal absolute value
        pivot = None
        best = None
        for i in range(top, m):
            for j in range(top, n):
                v = a[i][j]
                if v and (best is None or abs(v) < best):
                    best = abs(v)
                    pivot = (i, j)
        if pivot is None:
            break
        pi, pj = pivot
        a[top], a[pi] = a[pi], a[top]
        for row in a:
            row[top], row[pj] = row[pj], row[top]
        while True:
            # clear the pivot column
            for i in range(top + 1, m):
                if a[i][top]:
                    q = a[i][top] // a[top][top]
                    for j in range(top, n):
                        a[i][j] -= q * a[top][j]
            if any(a[i][top] for i in range(top + 1, m)):
                # remainder smaller than the pivot exists: swap it up
                for i in range(top + 1, m):
                    if a[i][top]:
                        a[top], a[i] = a[i], a[top]
                        break
                continue
            # clear the pivot row
            for j in range(top + 1, n):
                if a[top][j]:
                    q = a[top][j] // a[top][top]
                    for i in range(top, m):
                        a[i][j] -= q * a[i][top]
            leftover = next((j for j in range(top + 1, n) if a[top][j]),
                            None)
            if leftover is not None:
                # a remainder smaller than the pivot: make it the pivot
                for row in a:
                    row[top], row[leftover] = row[leftover], row[top]
                continue
            break
        # enforce divisibility of later entries by the pivot
        p = a[top][top]
        bad = None
        for i in range(top + 1, m):
            for j in range(top + 1, n):
                if a[i][j] % p:
                    bad = i
                    break
            if bad is not None:
                break
        if bad is not None:
            for j in range(top, n):
                a[top][j] += a[bad][j]
            continue
        diag.append(abs(p))
        top += 1
    return SmithNormalForm(tuple(diag), len(diag))


def rational_rank(mat):
    """Rank over the rationals via fraction-exact Gaussian elimination."""
    if not mat or not mat[0]:
        return 0
    a = [[Fraction(x) for x in row] for row in mat]
    m, n = len(a), len(a[0])
    rank = 0
    col = 0
    for col in range(n):
        piv = None
        for i in range(rank, m):
            if a[i][col]:
                piv = i
                break
        if piv is None:
            continue
        a[rank], a[piv] = a[piv], a[rank]
        inv = 1 / a[rank][col]
        a[rank] = [x * inv for x in a[rank]]
        for i in range(m):
            if i != rank and a[i][col]:
                f = a[i][col]
                a[i] = [x - f * y for x, y in zip(a[i], a[rank])]
        rank += 1
        if rank == m:
            break
    return rank


@dataclass(frozen=True)
class HomologyResult:
    """Per-degree Betti numbers and torsion coefficients."""
    betti: tuple
    torsion: tuple  # tuple of tuples, each d1 | d2 | ...

    def group(self, n):
        if n < 0 or n >= len(self.betti):
            return (0, ())
        return (self.betti[n], self.torsion[n])


def homology(c):
    """Integral homology of the chain complex via Smith normal form."""
    if not check_dsquared(c):
        raise FatGraphError("boundary matrices do not square to zero")
    top = c.max_degree
    betti = []
    torsion = []
    for n in range(top + 1):
        n_gens = len(c.generators.get(n, []))
        low = c.boundaries.get(n)
        high = c.boundaries.get(n + 1)
        rank_low = smith_normal_form(low).rank if low else 0
        snf_high = smith_normal_form(high) if high else SmithNormalForm((), 0)
        betti.append(n_gens - rank_low - snf_high.rank)
        torsion.append(tuple(d for d in snf_high.diagonal if d > 1))
    return HomologyResult(tuple(betti), tuple(torsion))
