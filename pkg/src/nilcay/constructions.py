"""Explicit graph and generating-set constructions: wreath products, FSF sets,
torsion-lifted generating sets, twin classes, and the Klein-bottle maps.

The Klein-bottle flip interchanges the roles of the two generators: the
vertex with normal form a^i b^j is sent to the vertex a^j b^i.  Writing the
swapped word b^i a^j in normal form gives a^((-1)^i j) b^i; that rewriting
preserves the vertex set but breaks right-multiplication adjacency, so the
transposed form a^j b^i is the graph automorphism (it still sends the vertex
a to the vertex b, which no group automorphism can do).
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

from . import cayley, structure
from .cayley import Ball, GenSet, check_vertex_map, generate_ball
from .pcgroup import builtin
from .structure import SubgroupWitness


@dataclass(frozen=True)
class LabeledGraph:
    """A finite undirected graph; vertices are arbitrary hashables."""

    vertices: tuple
    edges: frozenset          # frozenset of 2-element frozensets
    coloring: dict | None = None

    def __post_init__(self):
        vset = set(self.vertices)
        for e in self.edges:
            if len(e) != 2:
                raise ValueError("self-loops are not allowed")
            if not e <= vset:
                raise ValueError("edge endpoint outside the vertex set")

    def vertex_set(self):
        return set(self.vertices)

    def neighbor_set(self, v):
        return frozenset(w for e in self.edges if v in e for w in e if w != v)

    def edge_count(self):
        return len(self.edges)


def make_graph(vertices, edge_pairs, coloring=None) -> LabeledGraph:
    edges = frozenset(frozenset((u, v)) for u, v in edge_pairs if u != v)
    return LabeledGraph(tuple(vertices), edges, coloring)


def edgeless_graph(n) -> LabeledGraph:
    if n < 1:
        raise ValueError("edgeless graph needs at least one vertex")
    return LabeledGraph(tuple(range(n)), frozenset())


def wreath_product(x1: LabeledGraph, x2: LabeledGraph) -> LabeledGraph:
    """Lexicographic product: fibers of x2 over x1, full cross edges along x1-edges."""
    vertices = tuple((v1, v2) for v1 in x1.vertices for v2 in x2.vertices)
    edges = set()
    for e in x1.edges:
        u1, w1 = tuple(e)
        for u2 in x2.vertices:
            for w2 in x2.vertices:
                edges.add(frozenset(((u1, u2), (w1, w2))))
    for v1 in x1.vertices:
        for e in x2.edges:
            u2, w2 = tuple(e)
            edges.add(frozenset(((v1, u2), (v1, w2))))
    return LabeledGraph(vertices, frozenset(edges))


def graph_from_ball(ball: Ball) -> LabeledGraph:
    edges = set()
    for u, _s, w in ball.edges():
        if u != w:
            edges.add(frozenset((u, w)))
    return LabeledGraph(tuple(ball.vertices), frozenset(edges))


# -- generating sets --------------------------------------------------------


def lift_generating_set(presentation, quotient_genset) -> GenSet:
    """Full preimage in G of a quotient generating set under the torsion map."""
    p = presentation
    t = p.torsion_len
    free = p.n - t
    quotient = structure.quotient_by_torsion(p)
    elements = list(quotient_genset.elements
                    if isinstance(quotient_genset, GenSet) else quotient_genset)
    for v in elements:
        if len(v) != free:
            raise ValueError("quotient generating set has elements of the wrong length")
        if not any(v):
            raise ValueError("quotient generating set contains the identity")
    torsion = structure.torsion_subgroup(p)
    lifted = []
    for v in elements:
        for w in torsion.elements:
            lifted.append(p.collect_word(
                tuple((i, e) for i, e in enumerate(tuple(v) + tuple(w[free:])) if e)))
    del quotient
    return GenSet(p, lifted)


@dataclass
class FsfResult:
    genset: GenSet
    removed_identity: bool
    report_note: str = ""


def fsf_generating_set(presentation, finite_subgroup: SubgroupWitness,
                       genset: GenSet) -> FsfResult:
    """The products F*s*F over a verified finite subgroup F and symmetric S."""
    p = presentation
    finite_subgroup.check_closed()
    genset.require_symmetric()
    products = set()
    for f1 in finite_subgroup.elements:
        for s in genset.elements:
            fs = p.multiply(f1, s)
            for f2 in finite_subgroup.elements:
                products.add(p.multiply(fs, f2))
    removed = p.identity in products
    products.discard(p.identity)
    out = GenSet(p, products)
    if not out.symmetric:
        raise AssertionError("F*S*F must be symmetric when F and S are")
    note = "identity produced by F*S*F and removed" if removed else ""
    return FsfResult(genset=out, removed_identity=removed, report_note=note)


# -- twins -------------------------------------------------------------------


def twin_classes(ball_or_graph):
    """Partition of interior vertices by exact neighborhood equality."""
    if isinstance(ball_or_graph, Ball):
        verts = ball_or_graph.interior_vertices()
        nbrs = ball_or_graph.neighbor_set
    else:
        verts = sorted(ball_or_graph.vertices)
        nbrs = ball_or_graph.neighbor_set
    groups = {}
    for v in verts:
        groups.setdefault(nbrs(v), []).append(v)
    classes = [tuple(sorted(members)) for members in groups.values()]
    return tuple(sorted(classes))


def twin_swap_map(ball: Ball, g, h):
    """The transposition of a twin pair, as a vertex map on the ball."""
    interior = set(ball.interior_vertices())
    if g not in interior or h not in interior:
        raise ValueError("both vertices must be interior")
    if g != h and ball.neighbor_set(g) != ball.neighbor_set(h):
        raise ValueError("vertices are not twins (neighborhoods differ)")
    danger = set(ball.genset.elements) | {ball.presentation.identity}
    if g in danger or h in danger:
        warnings.warn("twin swap touches the generating set or the identity; "
                      "the map is constructed but will not fix the generators")
    mapping = {v: v for v in ball.vertices}
    mapping[g], mapping[h] = h, g
    return mapping


# -- Klein bottle maps --------------------------------------------------------


@dataclass
class BallMap:
    source: Ball
    target: object
    mapping: dict
    notes: list = field(default_factory=list)

    def check(self):
        return check_vertex_map(self.source, self.target, self.mapping)


def klein_grid_map(r) -> BallMap:
    """Vertex map a^i b^j -> (i, j) from the Klein-bottle ball to the grid ball."""
    if r < 1:
        raise ValueError("radius must be at least 1")
    klein = builtin("klein_bottle")
    z2 = builtin("zn", n=2)
    bk = generate_ball(klein, cayley.standard_genset(klein), r)
    bz = generate_ball(z2, cayley.standard_genset(z2), r)
    mapping = {v: v for v in bk.vertices}
    return BallMap(bk, bz, mapping,
                   notes=["exponent vectors coincide with grid coordinates"])


def klein_flip_map(r) -> BallMap:
    """The generator-swapping automorphism of the Klein-bottle ball.

    Sends the vertex a^i b^j to the vertex a^j b^i.  The naive target
    b^i a^j = a^((-1)^i j) b^i is the same set-level swap but written on the
    wrong side; it fails right-multiplication adjacency and is rejected by
    check_vertex_map, so the transposed form is the automorphism used here.
    """
    if r < 1:
        raise ValueError("radius must be at least 1")
    klein = builtin("klein_bottle")
    bk = generate_ball(klein, cayley.standard_genset(klein), r)
    mapping = {v: (v[1], v[0]) for v in bk.vertices}
    return BallMap(bk, bk, mapping,
                   notes=["vertex a^i b^j is sent to a^j b^i; fixes the identity",
                          "b^i a^j rewrites to a^((-1)^i j) b^i in normal form"])


# -- wreath comparison for torsion lifts --------------------------------------


def wreath_lift_comparison(presentation, quotient_genset, r):
    """The natural vertex map from the lifted-genset ball to the wreath product
    of the quotient ball with an edgeless fiber of size |torsion|."""
    p = presentation
    torsion = structure.torsion_subgroup(p)
    quotient = structure.quotient_by_torsion(p)
    free = p.n - p.torsion_len
    lifted = lift_generating_set(p, quotient_genset)
    ball = generate_ball(p, lifted, r)
    qgens = GenSet(quotient, quotient_genset.elements
                   if isinstance(quotient_genset, GenSet) else quotient_genset)
    qball = generate_ball(quotient, qgens, r)
    fiber_index = {w[free:]: i for i, w in enumerate(torsion.elements)}
    wreath = wreath_product(graph_from_ball(qball), edgeless_graph(len(torsion.elements)))
    mapping = {v: (v[:free], fiber_index[v[free:]]) for v in ball.vertices}
    return BallMap(ball, wreath, mapping,
                   notes=["vertex splits into quotient part and torsion fiber index"])
